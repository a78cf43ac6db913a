"""Coefficient form rings: finite rings with involution and a central unit lambda.

A form ring here is a pair (A, lambda) where A carries an involution (an
anti-automorphism of order at most 2, written invol) and lambda is a central
unit with lambda * invol(lambda) == 1.  Form parameters live in forms.py.

Finite ring elements are plain ints 0..size-1 (canonical indices); all
arithmetic goes through precomputed numpy tables so the subgroup engine can
vectorize.  The index doubles as the canonical encoding: serialized as a
little-endian byte string of ceil(bits/8) bytes, and packed at `bits` bits per
entry inside matrix keys.

Supported kinds:
  zmod      Z/m, trivial involution, lam in {1, m-1}
  poly2     F_2[t]/(t^k), trivial involution, index = coefficient bitmask
  pairswap  R x R with (x,y) -> (y,x) involution, R = Z/m
  group2    F_2[S_3] with g -> g^{-1} involution, index = 6-bit support mask
Symbolic elements (free *-ring) live in symbolic.py and satisfy the same
operation names where meaningful.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import InvalidInvolution, InvalidLambda, UnsupportedKind

# S_3 as permutations of {0,1,2}; fixed order pins the group2 encoding.
_S3 = [(0, 1, 2), (1, 0, 2), (2, 1, 0), (0, 2, 1), (1, 2, 0), (2, 0, 1)]
_S3_NAMES = ["e", "s01", "s02", "s12", "c012", "c021"]


def _s3_mul(p, q):
    # composition p after q
    return tuple(p[q[i]] for i in range(3))


def _s3_inv(p):
    r = [0, 0, 0]
    for i in range(3):
        r[p[i]] = i
    return tuple(r)


class FormRing:
    """A finite coefficient ring with involution and distinguished lambda.

    Do not call directly; use mk_ring.  Elements are ints 0..size-1.
    """

    is_finite = True
    is_symbolic = False

    def __init__(self, kind, name, descr, size, add, mul, neg, invol, zero, one, lam,
                 element_names):
        self.kind = kind
        self.name = name
        self.descr = descr
        self.size = size
        self.ADD = add
        self.MUL = mul
        self.NEG = neg
        self.INV = invol
        self.zero = zero
        self.one = one
        self.lam = lam
        self.lam_bar = int(invol[lam])
        self.bits = max(1, (size - 1).bit_length())
        self.nbytes = (self.bits + 7) // 8
        self._names = element_names
        self.minus_one = int(neg[one])

    # -- scalar ops ---------------------------------------------------------

    def add(self, x, y):
        return int(self.ADD[x, y])

    def sub(self, x, y):
        return int(self.ADD[x, self.NEG[y]])

    def neg(self, x):
        return int(self.NEG[x])

    def mul(self, x, y):
        return int(self.MUL[x, y])

    def invol(self, x):
        return int(self.INV[x])

    def lam_pow(self, k):
        # lambda is a unit: negative powers go through lam_bar = lam^{-1}
        base = self.lam if k >= 0 else self.lam_bar
        out = self.one
        for _ in range(abs(k)):
            out = self.mul(out, base)
        return out

    def elements(self):
        return range(self.size)

    def sample(self, rng):
        return rng.randrange(self.size)

    def is_central(self, x):
        return all(self.mul(x, y) == self.mul(y, x) for y in self.elements())

    # -- encoding ------------------------------------------------------------

    def encode(self, x):
        return int(x).to_bytes(self.nbytes, "little")

    def decode(self, b):
        x = int.from_bytes(b, "little")
        if not 0 <= x < self.size:
            raise ValueError(f"encoded value {x} out of range for {self.name}")
        return x

    def element_name(self, x):
        return self._names[x]

    def __repr__(self):
        return f"FormRing({self.name})"

    def __eq__(self, other):
        return isinstance(other, FormRing) and self.descr == other.descr

    def __hash__(self):
        return hash(json.dumps(self.descr, sort_keys=True))


def _tables_from_ops(size, add, mul, neg, invol):
    dt = np.uint8 if size <= 256 else np.uint16
    ADD = np.zeros((size, size), dtype=dt)
    MUL = np.zeros((size, size), dtype=dt)
    NEG = np.zeros(size, dtype=dt)
    INV = np.zeros(size, dtype=dt)
    for x in range(size):
        NEG[x] = neg(x)
        INV[x] = invol(x)
        for y in range(size):
            ADD[x, y] = add(x, y)
            MUL[x, y] = mul(x, y)
    return ADD, MUL, NEG, INV


def _build_zmod(descr, name):
    m = descr["m"]
    if m < 2:
        raise UnsupportedKind("zmod modulus must be >= 2")
    inv_kind = descr.get("involution", "identity")
    if inv_kind == "identity":
        invol = lambda x: x
    elif inv_kind == "negation":
        # order-2 additive map; fails anti-multiplicativity for m > 2 (kept
        # constructible so the axiom checker has something to reject)
        invol = lambda x: (-x) % m
    else:
        raise UnsupportedKind(f"unknown zmod involution {inv_kind!r}")
    tabs = _tables_from_ops(m, lambda x, y: (x + y) % m, lambda x, y: (x * y) % m,
                            lambda x: (-x) % m, invol)
    names = [str(i) for i in range(m)]
    return FormRing("zmod", name, descr, m, *tabs, zero=0, one=1,
                    lam=descr.get("lam", 1) % m, element_names=names)


def _build_poly2(descr, name):
    k = descr["k"]
    if not 1 <= k <= 6:
        raise UnsupportedKind("poly2 degree k must be in 1..6")
    size = 1 << k
    mask = size - 1

    def mul(x, y):
        acc = 0
        for i in range(k):
            if (x >> i) & 1:
                acc ^= (y << i) & mask
        return acc

    tabs = _tables_from_ops(size, lambda x, y: x ^ y, mul, lambda x: x, lambda x: x)
    names = []
    for x in range(size):
        terms = [("t" if i == 1 else f"t^{i}" if i else "1")
                 for i in range(k) if (x >> i) & 1]
        names.append("+".join(terms) if terms else "0")
    return FormRing("poly2", name, descr, size, *tabs, zero=0, one=1,
                    lam=descr.get("lam", 1), element_names=names)


def _build_pairswap(descr, name):
    m = descr["m"]
    size = m * m

    def pack(x, y):
        return x + m * y

    def mul(p, q):
        return pack((p % m) * (q % m) % m, (p // m) * (q // m) % m)

    def add(p, q):
        return pack((p % m + q % m) % m, (p // m + q // m) % m)

    tabs = _tables_from_ops(size, add, mul,
                            lambda p: pack((-(p % m)) % m, (-(p // m)) % m),
                            lambda p: pack(p // m, p % m))
    names = [f"({p % m},{p // m})" for p in range(size)]
    lam = descr.get("lam", pack(1, 1))
    return FormRing("pairswap", name, descr, size, *tabs, zero=0, one=pack(1, 1),
                    lam=lam, element_names=names)


def _build_group2(descr, name):
    size = 64

    def mul(x, y):
        acc = 0
        for i in range(6):
            if (x >> i) & 1:
                for j in range(6):
                    if (y >> j) & 1:
                        acc ^= 1 << _S3.index(_s3_mul(_S3[i], _S3[j]))
        return acc

    def invol(x):
        acc = 0
        for i in range(6):
            if (x >> i) & 1:
                acc |= 1 << _S3.index(_s3_inv(_S3[i]))
        return acc

    tabs = _tables_from_ops(size, lambda x, y: x ^ y, mul, lambda x: x, invol)
    names = []
    for x in range(size):
        terms = [_S3_NAMES[i] for i in range(6) if (x >> i) & 1]
        names.append("+".join(terms) if terms else "0")
    return FormRing("group2", name, descr, size, *tabs, zero=0, one=1,
                    lam=descr.get("lam", 1), element_names=names)


_BUILDERS = {
    "zmod": _build_zmod,
    "poly2": _build_poly2,
    "pairswap": _build_pairswap,
    "group2": _build_group2,
}


def mk_ring(descr, validate=True):
    """Build a ring from a descriptor dict.

    Identical descriptors yield identical tables and encodings.  With
    validate=True (default) the involution and lambda axioms are enforced;
    validate=False builds broken rings on purpose for the axiom checker.
    """
    if descr.get("kind") == "symbolic":
        from .symbolic import SymbolicRing
        return SymbolicRing.from_descr(descr)
    kind = descr.get("kind")
    if kind not in _BUILDERS:
        raise UnsupportedKind(f"unknown ring kind {kind!r}")
    name = descr.get("name") or _default_name(descr)
    ring = _BUILDERS[kind](descr, name)
    if validate:
        _validate(ring)
    return ring


def _default_name(descr):
    kind = descr["kind"]
    if kind == "zmod":
        return f"z{descr['m']}_l{descr.get('lam', 1) % descr['m']}"
    if kind == "poly2":
        return f"f2t{descr['k']}_l{descr.get('lam', 1)}"
    if kind == "pairswap":
        return f"z{descr['m']}xz{descr['m']}_swap"
    if kind == "group2":
        return "f2s3"
    return kind


def _validate(ring):
    report = check_form_ring_axioms(ring)
    bad = [r for r in report if not r[1]]
    if bad:
        axiom, _, witness = bad[0]
        if axiom.startswith("lambda"):
            raise InvalidLambda(f"{ring.name}: {axiom} fails at {witness}")
        raise InvalidInvolution(f"{ring.name}: {axiom} fails at {witness}")


def check_form_ring_axioms(ring, budget=None, seed=0):
    """Check the form-ring axioms; returns [(axiom, ok, witness-or-None), ...].

    Exhaustive when size <= 16, otherwise at least 1000 seeded samples (or
    `budget` triples if given).
    """
    import random
    size = ring.size
    if size <= 16:
        pairs = [(x, y) for x in range(size) for y in range(size)]
        triples = [(x, y, z) for x in range(size) for y in range(size)
                   for z in range(size)]
    else:
        rng = random.Random(seed)
        nsamp = budget or 1000
        pairs = [(rng.randrange(size), rng.randrange(size)) for _ in range(nsamp)]
        triples = [(rng.randrange(size), rng.randrange(size), rng.randrange(size))
                   for _ in range(nsamp)]

    out = []

    def chk(axiom, fn, items):
        for it in items:
            if not fn(*it):
                out.append((axiom, False, it))
                return
        out.append((axiom, True, None))

    A, M, N, V = ring.ADD, ring.MUL, ring.NEG, ring.INV
    chk("add-commutes", lambda x, y: A[x, y] == A[y, x], pairs)
    chk("add-associates", lambda x, y, z: A[A[x, y], z] == A[x, A[y, z]], triples)
    chk("add-zero", lambda x: A[x, ring.zero] == x, [(x,) for x in range(size)])
    chk("add-negation", lambda x: A[x, N[x]] == ring.zero, [(x,) for x in range(size)])
    chk("mul-associates", lambda x, y, z: M[M[x, y], z] == M[x, M[y, z]], triples)
    chk("mul-one", lambda x: M[x, ring.one] == x and M[ring.one, x] == x,
        [(x,) for x in range(size)])
    chk("distributes", lambda x, y, z: M[x, A[y, z]] == A[M[x, y], M[x, z]]
        and M[A[x, y], z] == A[M[x, z], M[y, z]], triples)
    chk("invol-additive", lambda x, y: V[A[x, y]] == A[V[x], V[y]], pairs)
    chk("invol-antimult", lambda x, y: V[M[x, y]] == M[V[y], V[x]], pairs)
    chk("invol-order2", lambda x: V[V[x]] == x, [(x,) for x in range(size)])
    chk("lambda-central", lambda x: M[ring.lam, x] == M[x, ring.lam],
        [(x,) for x in range(size)])
    chk("lambda-unit", lambda: M[ring.lam, ring.lam_bar] == ring.one, [()])
    return out


def catalog_to_json(rings):
    return json.dumps([r.descr for r in rings], indent=2)


def catalog_from_json(text):
    return [mk_ring(d) for d in json.loads(text)]
