"""Hyperbolic unitary groups of rank n over a form ring.

Index convention: rows and columns are labelled by Omega = {1..n, -n..-1},
mapped to array positions by pos(i) = i-1 for i > 0 and 2n+i for i < 0.
The hyperbolic form is

    f(u, v) = sum_{k>0} bar(u_k) v_{-k},      h = f + lam * bar(f),

so h has Gram matrix Q with Q[pos(i), pos(-i)] = 1 for i > 0 and lam for
i < 0.  A matrix g is unitary when bar(g)^T Q g = Q and the quadratic
defects f(g e_u, g e_u) lie in Lambda; the second condition reduces to
basis vectors because h-preservation forces cross terms into Lambda_min.

Matrices over finite rings hold a numpy int array of element indices;
matrices over the symbolic ring hold nested tuples of ring elements.
"""

from __future__ import annotations

import numpy as np

from .errors import (BadIndex, BadLevel, BadLongParameter, NonUnitary,
                     NotAFormParameter)
from .forms import FormIdeal, is_form_parameter, twist_set


def eps(i):
    return 1 if i > 0 else -1


def pos(i, n):
    return i - 1 if i > 0 else 2 * n + i


def omega(n):
    return list(range(1, n + 1)) + list(range(-n, 0))


def _check_index(i, n):
    if not isinstance(i, int) or i == 0 or abs(i) > n:
        raise BadIndex(f"index {i} outside 1..{n} / -{n}..-1")


class UMatrix:
    """Square matrix over a form ring, finite (numpy) or symbolic (tuples)."""

    __slots__ = ("ring", "n", "data")

    def __init__(self, ring, n, data):
        self.ring = ring
        self.n = n
        if ring.is_symbolic:
            self.data = tuple(tuple(row) for row in data)
        else:
            self.data = np.asarray(data, dtype=np.int64)

    @classmethod
    def identity(cls, ring, n):
        d = 2 * n
        if ring.is_symbolic:
            rows = [[ring.one if r == c else ring.zero for c in range(d)]
                    for r in range(d)]
            return cls(ring, n, rows)
        m = np.full((d, d), ring.zero, dtype=np.int64)
        np.fill_diagonal(m, ring.one)
        return cls(ring, n, m)

    def entry(self, i, j):
        """Entry at Omega-indexed (row i, column j)."""
        return self.data[pos(i, self.n)][pos(j, self.n)]

    def mul(self, other):
        r, d = self.ring, 2 * self.n
        if r.is_symbolic:
            b_cols = list(zip(*other.data))
            rows = [[sum((x * y for x, y in zip(arow, bcol)), r.zero)
                     for bcol in b_cols] for arow in self.data]
            return UMatrix(r, self.n, rows)
        if r.kind == "zmod":
            return UMatrix(r, self.n, (self.data @ other.data) % r.size)
        prods = r.MUL[self.data[:, :, None], other.data[None, :, :]]
        acc = prods[:, 0, :]
        for k in range(1, d):
            acc = r.ADD[acc, prods[:, k, :]]
        return UMatrix(r, self.n, acc)

    def __mul__(self, other):
        return self.mul(other)

    def invol_transpose(self):
        r = self.ring
        if r.is_symbolic:
            return UMatrix(r, self.n, [[x.bar() for x in row]
                                       for row in zip(*self.data)])
        return UMatrix(r, self.n, r.INV[self.data.T])

    def __eq__(self, other):
        if not isinstance(other, UMatrix) or self.n != other.n:
            return NotImplemented
        if self.ring.is_symbolic:
            return all(x == y for ra, rb in zip(self.data, other.data)
                       for x, y in zip(ra, rb))
        return bool(np.array_equal(self.data, other.data))

    def __hash__(self):
        if self.ring.is_symbolic:
            raise TypeError("symbolic matrices are not hashable")
        return hash(self.to_bytes())

    def to_bytes(self):
        """Canonical key: row-major entries, ring.bits each, little-endian."""
        r = self.ring
        bits = r.bits
        val = 0
        shift = 0
        for x in self.data.ravel():
            val |= int(x) << shift
            shift += bits
        return val.to_bytes((shift + 7) // 8, "little")

    @classmethod
    def from_bytes(cls, ring, n, raw):
        d = 2 * n
        bits = ring.bits
        val = int.from_bytes(raw, "little")
        mask = (1 << bits) - 1
        flat = [(val >> (k * bits)) & mask for k in range(d * d)]
        return cls(ring, n, np.array(flat, dtype=np.int64).reshape(d, d))

    def pretty(self):
        r = self.ring
        if r.is_symbolic:
            cells = [[str(x) for x in row] for row in self.data]
        else:
            cells = [[r.element_name(int(x)) for x in row] for row in self.data]
        w = max(len(c) for row in cells for c in row)
        return "\n".join(" ".join(c.rjust(w) for c in row) for row in cells)

    def __repr__(self):
        return f"UMatrix({self.ring.name}, n={self.n})\n{self.pretty()}"


class UnitarySpace:
    """Rank-n hyperbolic space over (ring, Lambda); builds and tests matrices.

    For a symbolic ring pass lam_set=None: membership checks that need a
    concrete Lambda are skipped and long parameters are validated by the
    lam-twisted symmetry relation instead.
    """

    def __init__(self, ring, n, lam_set=None):
        if n < 1:
            raise BadIndex(f"rank {n} < 1")
        self.ring = ring
        self.n = n
        self.dim = 2 * n
        if ring.is_symbolic:
            self.lam_set = None
        else:
            if lam_set is None:
                raise NotAFormParameter("finite ring needs an explicit Lambda")
            self.lam_set = frozenset(lam_set)
            ok, reason = is_form_parameter(ring, self.lam_set, explain=True)
            if not ok:
                raise NotAFormParameter(f"Lambda over {ring.name}: {reason}")
        self.Q = self._gram()
        self.Qinv = self._gram_inv()
        self.e = UMatrix.identity(ring, n)

    def _theta(self, i):
        return self.ring.one if i > 0 else self.ring.lam

    def _gram(self):
        r, n = self.ring, self.n
        g = UMatrix.identity(r, n)
        if r.is_symbolic:
            rows = [[r.zero] * self.dim for _ in range(self.dim)]
            for i in omega(n):
                rows[pos(i, n)][pos(-i, n)] = self._theta(i)
            return UMatrix(r, n, rows)
        m = np.full((self.dim, self.dim), r.zero, dtype=np.int64)
        for i in omega(n):
            m[pos(i, n), pos(-i, n)] = self._theta(i)
        return UMatrix(r, n, m)

    def _gram_inv(self):
        r, n = self.ring, self.n
        if r.is_symbolic:
            rows = [[r.zero] * self.dim for _ in range(self.dim)]
            for i in omega(n):
                rows[pos(-i, n)][pos(i, n)] = r.one if i > 0 else r.lam_bar
            return UMatrix(r, n, rows)
        m = np.full((self.dim, self.dim), r.zero, dtype=np.int64)
        for i in omega(n):
            m[pos(-i, n), pos(i, n)] = r.one if i > 0 else r.lam_bar
        return UMatrix(r, n, m)

    def unit_level(self):
        return FormIdeal.unit(self.ring, self.lam_set)

    # --- forms on column vectors (tuples of ring elements, pos order) ---

    def form_f(self, u, v):
        r, n = self.ring, self.n
        acc = r.zero
        for k in range(1, n + 1):
            acc = r.add(acc, r.mul(r.invol(u[pos(k, n)]), v[pos(-k, n)]))
        return acc

    def form_h(self, u, v):
        r = self.ring
        return r.add(self.form_f(u, v),
                     r.mul(r.lam, r.invol(self.form_f(v, u))))

    def column(self, g, j):
        if self.ring.is_symbolic:
            return tuple(row[pos(j, self.n)] for row in g.data)
        return tuple(int(x) for x in g.data[:, pos(j, self.n)])

    def defect(self, g, u):
        """f(g e_u, g e_u) - f(e_u, e_u); the second term is always 0."""
        col = self.column(g, u)
        return self.form_f(col, col)

    def defects(self, g):
        return [self.defect(g, u) for u in omega(self.n)]

    # --- membership ---

    def preserves_h(self, g):
        lhs = g.invol_transpose().mul(self.Q).mul(g)
        return lhs == self.Q

    def is_unitary(self, g, lam_set=None):
        if not self.preserves_h(g):
            return False
        if self.ring.is_symbolic:
            return True
        S = self.lam_set if lam_set is None else lam_set
        return all(d in S for d in self.defects(g))

    def is_unitary_exhaustive(self, g, cap=1 << 20):
        """Check the defect condition over every vector; small spaces only."""
        r = self.ring
        if r.is_symbolic:
            raise NonUnitary("exhaustive sweep needs a finite ring")
        total = r.size ** self.dim
        if total > cap:
            raise NonUnitary(f"vector space too large to sweep ({total})")
        if not self.preserves_h(g):
            return False

        def apply(v):
            out = []
            for row in g.data:
                acc = r.zero
                for a, c in zip(row, v):
                    acc = r.add(acc, r.mul(int(a), c))
                out.append(acc)
            return tuple(out)

        import itertools
        for v in itertools.product(r.elements(), repeat=self.dim):
            gv = apply(v)
            d = r.sub(self.form_f(gv, gv), self.form_f(v, v))
            if d not in self.lam_set:
                return False
        return True

    def inverse(self, g):
        """Inverse of a unitary matrix: Q^{-1} bar(g)^T Q."""
        return self.Qinv.mul(g.invol_transpose()).mul(self.Q)

    def conj(self, g, h):
        return g.mul(h).mul(self.inverse(g))

    def commutator(self, a, b):
        return a.mul(b).mul(self.inverse(a)).mul(self.inverse(b))

    def congruence_member(self, g, level):
        """g in GU(2n, I, Gamma): unitary, g = e mod I, defects in Gamma."""
        if self.ring.is_symbolic:
            raise NonUnitary("congruence membership needs a finite ring")
        if not self.is_unitary(g):
            return False
        r = self.ring
        for p in range(self.dim):
            for q in range(self.dim):
                x = int(g.data[p, q])
                if p == q:
                    x = r.sub(x, r.one)
                if x not in level.ideal:
                    return False
        return all(d in level.gamma for d in self.defects(g))

    # --- generators ---

    def transvection(self, i, j, c, level=None):
        """T_ij(c); short for j != -i, long for j = -i.  Omega indices."""
        n, r = self.n, self.ring
        _check_index(i, n)
        _check_index(j, n)
        if i == j:
            raise BadIndex(f"T_{i},{j}: equal indices")
        g = UMatrix.identity(r, n)
        if j == -i:
            ee = (eps(i) + 1) // 2
            if r.is_symbolic:
                if not c.is_long_admissible(ee):
                    raise BadLongParameter(
                        f"T_{i},{-i}: parameter fails lam-symmetry (e={ee})")
            else:
                S = (twist_set(r, self.lam_set, eps(i)) if level is None
                     else level.long_set(eps(i)))
                if c not in S:
                    raise BadLongParameter(
                        f"T_{i},{-i}: {r.element_name(c)} not admissible")
            if r.is_symbolic:
                rows = [list(row) for row in g.data]
                rows[pos(i, n)][pos(-i, n)] = c
                return UMatrix(r, n, rows)
            g.data[pos(i, n), pos(-i, n)] = c
            return g
        if level is not None and not r.is_symbolic and c not in level.ideal:
            raise BadLevel(
                f"T_{i},{j}: {r.element_name(c)} outside the ideal")
        k = (eps(j) - eps(i)) // 2
        if r.is_symbolic:
            rows = [list(row) for row in g.data]
            rows[pos(i, n)][pos(j, n)] = c
            rows[pos(-j, n)][pos(-i, n)] = -(r.lam_pow(k) * c.bar())
            return UMatrix(r, n, rows)
        g.data[pos(i, n), pos(j, n)] = c
        g.data[pos(-j, n), pos(-i, n)] = r.neg(r.mul(r.lam_pow(k), r.invol(c)))
        return g

    def T(self, i, j, c, level=None):
        return self.transvection(i, j, c, level=level)

    def z_gen(self, i, j, a, c, level=None):
        """Z_ij(a, c) = T_ji(c) T_ij(a) T_ji(-c); a at level, c ambient."""
        r = self.ring
        tji = self.T(j, i, c)
        tij = self.T(i, j, a, level=level)
        if r.is_symbolic:
            return tji.mul(tij).mul(self.T(j, i, -c))
        return tji.mul(tij).mul(self.T(j, i, r.neg(c)))

    def y_gen(self, i, j, a, b, level_a=None, level_b=None):
        """Y_ij(a, b) = [T_ij(a), T_ji(b)]."""
        return self.commutator(self.T(i, j, a, level=level_a),
                               self.T(j, i, b, level=level_b))


def pack_rows(ring, flat):
    """Pack (N, d*d) entry rows into (N, nbytes) uint8 keys.

    Same layout as UMatrix.to_bytes: ring.bits per entry, entry bit 0
    first, little-endian bit order within bytes.
    """
    flat = np.asarray(flat)
    bits = ring.bits
    nvals = flat.shape[1]
    bitcols = ((flat[:, :, None].astype(np.uint8)
                >> np.arange(bits, dtype=np.uint8)) & 1)
    bitcols = bitcols.reshape(flat.shape[0], nvals * bits)
    return np.packbits(bitcols, axis=1, bitorder="little")


def packed_to_keyset(packed):
    n, nb = packed.shape
    buf = packed.tobytes()
    return {buf[k * nb:(k + 1) * nb] for k in range(n)}


def congruence_enumerate_square_zero(space, level, cap=1 << 22):
    """All of GU(2n, I, Gamma) when I^2 = 0, as a set of packed keys.

    With I^2 = 0 unitarity linearises to bar(x[-j,i]) theta(-j) +
    theta(i) x[-i,j] = 0 for x = g - e, pairing entry (pos(-j), pos(i))
    with (pos(-i), pos(j)); the 2n self-paired entries at (pos(-k),
    pos(k)) range over the lam-twisted Gamma, the other entry pairs over
    I, all independently.  The defect at e_u picks out exactly the long
    entry in column pos(u), so the Gamma condition is also exact.
    """
    from .errors import CapExceeded

    r, n = space.ring, space.n
    for a in level.ideal:
        for b in level.ideal:
            if r.mul(a, b) != r.zero:
                raise NonUnitary("ideal is not square-zero")

    pairs = []
    seen = set()
    for i in omega(n):
        for j in omega(n):
            p = (pos(-i, n), pos(j, n))
            q = (pos(-j, n), pos(i, n))
            if p in seen or q in seen:
                continue
            seen.add(p)
            seen.add(q)
            if p == q:
                continue
            pairs.append((i, j, p, q))
    longs = [(k, (pos(-k, n), pos(k, n))) for k in omega(n)]

    def partner(i, j, v):
        # bar(v) theta(-j) + theta(i) w = 0  with v at (pos(-j), pos(i))
        rhs = r.neg(r.mul(r.invol(v), space._theta(-j)))
        return rhs if space._theta(i) == r.one else r.mul(r.lam_bar, rhs)

    ideal = sorted(level.ideal)
    dim = space.dim
    base = space.e.data.ravel()

    slots = []
    for (i, j, p, q) in pairs:
        qi, pi = q[0] * dim + q[1], p[0] * dim + p[1]
        qv = np.array([r.add(int(base[qi]), v) for v in ideal], dtype=np.int64)
        pv = np.array([r.add(int(base[pi]), partner(i, j, v)) for v in ideal],
                      dtype=np.int64)
        slots.append((qi, pi, qv, pv))
    for k, (rw, cl) in longs:
        # entry sits in row -k: admissible set is the eps(-k) twist
        tw = sorted(twist_set(r, level.gamma, eps(-k)))
        idx = rw * dim + cl
        vv = np.array([r.add(int(base[idx]), v) for v in tw], dtype=np.int64)
        slots.append((idx, None, vv, None))

    total = 1
    for _, _, vv, _ in slots:
        total *= len(vv)
    if total > cap:
        raise CapExceeded(f"square-zero level set has {total} elements", total)

    flat = np.tile(base.astype(np.int8), (total, 1))
    arange = np.arange(total, dtype=np.int64)
    stride = 1
    for qi, pi, qv, pv in slots:
        digits = (arange // stride) % len(qv)
        flat[:, qi] = qv[digits]
        if pi is not None:
            flat[:, pi] = pv[digits]
        stride *= len(qv)
    return packed_to_keyset(pack_rows(r, flat))
