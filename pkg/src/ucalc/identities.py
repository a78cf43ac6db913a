"""Registry of exact identities behind the rewriting engines.

Every check pins one matrix identity at fixed generic positions on the
rank-3 hyperbolic space and verifies it by exact arithmetic.  Checks
run on two backends:

* symbolic: the free *-ring on tagged symbols, so a pass is a
  polynomial identity valid over every form ring at once;
* numeric: any catalog case, slots drawn from the case's ideals and
  twisted parameter sets by a seeded RNG.

Formula checks carry a frozen right-hand side, independently expanded,
so a wrong sign, index or lambda power anywhere upstream shows up as a
mismatch here.  Engine checks do not restate formulas: they call a
rewriting engine and certify its output both ways (the word multiplies
back to its input, and every letter lands at the symmetrised product
level, atoms bilevel).

Check ids are stable; groups:

  pt  commutator of a short/long transvection against an opposite pair
  tr  the reversed commutators of the same pairs
  lp  the long opposite pair Y_{1,-1} against its neighbours
  ss  transport of a short atom through fresh axes
  sl  transport of a long atom, with the residue pairing
  f1  relative conjugation frame at a short position
  f2  relative conjugation frame at a long position
  ls  long-to-short transfer of an opposite pair
  cc  group-theoretic commutator calculus on concrete matrices
  st  the elementary relations at fixed index patterns
  en  engine round trips (conjugation normal form, additivity)
"""

from dataclasses import dataclass, field

from .forms import FormIdeal, symmetrized_product, twist_set
from .symbolic import SymbolicRing
from .unitary import UnitarySpace
from .words import (
    Gen,
    YGen,
    additivity_split,
    additivity_split2,
    commutator_calculus,
    conj_y_normalform,
    eval_items,
    eval_y,
    long_short_transfer,
    relativise_conjugate,
    roll_commutator,
    word_in_levels,
    word_in_levels_symbolic,
    y_in_levels,
    _add,
    _bar,
    _lampow,
    _mul,
    _neg,
    _same,
)

# Slot tags: first component the ideal role (None = unconstrained),
# second the long-admissibility twist (None = short slot).
SYMBOLS = {
    "a": ("I", None),
    "b": ("J", None),
    "bp": ("J", None),
    "c": (None, None),
    "r": (None, None),
    "c1": (None, None),
    "c2": (None, None),
    "A1": ("I", 1),
    "A0": ("I", 0),
    "B0": ("J", 0),
    "C1": (None, 1),
    "R1": (None, 1),
    "X0": (None, 0),
}

# env key -> symbol name; keys are what checks index, so the numeric
# backend can fill the same keys from a case's ideals.
_ENV_SYMBOLS = {
    "a": "a", "b": "b", "bp": "bp", "c": "c", "r": "r",
    "c1": "c1", "c2": "c2",
    "aL1": "A1", "aL0": "A0", "bL0": "B0",
    "cL1": "C1", "rL1": "R1", "xL0": "X0",
}


def symbolic_ring():
    return SymbolicRing(SYMBOLS, name="identity-suite")


@dataclass
class Scene:
    """One backend instance: a space, an environment of slot values,
    and (numeric only) the levels the audit runs against."""

    sp: UnitarySpace
    env: dict
    P: FormIdeal = None
    Q: FormIdeal = None
    circ: FormIdeal = None

    @property
    def symbolic(self):
        return self.sp.ring.is_symbolic


def symbolic_scene(n=3):
    ring = symbolic_ring()
    sp = UnitarySpace(ring, n)
    env = {k: ring.sym(v) for k, v in _ENV_SYMBOLS.items()}
    return Scene(sp, env)


def _draw(rng, pool):
    xs = sorted(pool)
    return xs[rng.randrange(len(xs))]


def numeric_scene(case, rng):
    """Slot values drawn from the case's relative roles; absolute cases
    use the unit level for both roles, so every check still applies."""
    ring, sp = case.ring, case.space
    rel = case.ideals()
    unit = case.unit_ideal()
    P = rel[0] if rel else unit
    Q = rel[1] if len(rel) > 1 else (rel[0] if rel else unit)
    lam_plus = twist_set(ring, case.lam_set, 1)
    lam_minus = twist_set(ring, case.lam_set, -1)
    env = {
        "a": _draw(rng, P.ideal),
        "b": _draw(rng, Q.ideal),
        "bp": _draw(rng, Q.ideal),
        "c": rng.randrange(ring.size),
        "r": rng.randrange(ring.size),
        "c1": rng.randrange(ring.size),
        "c2": rng.randrange(ring.size),
        "aL1": _draw(rng, P.long_set(1)),
        "aL0": _draw(rng, P.long_set(-1)),
        "bL0": _draw(rng, Q.long_set(-1)),
        "cL1": _draw(rng, lam_plus),
        "rL1": _draw(rng, lam_plus),
        "xL0": _draw(rng, lam_minus),
    }
    return Scene(sp, env, P=P, Q=Q, circ=symmetrized_product(P, Q))


# --- tiny expression helpers -------------------------------------------

def _prod(R, *xs):
    out = xs[0]
    for x in xs[1:]:
        out = _mul(R, out, x)
    return out


def _tot(R, *xs):
    out = xs[0]
    for x in xs[1:]:
        out = _add(R, out, x)
    return out


def _expr(R, env, terms):
    """Sum of (coef, lampow, tokens): tokens are env keys separated by
    spaces, a trailing ~ bars the value, literal 1 is the unit."""
    out = None
    for coef, lp, toks in terms:
        m = _lampow(R, lp) if lp else R.one
        for tok in toks.split():
            if tok == "1":
                x = R.one
            elif tok.endswith("~"):
                x = _bar(R, env[tok[:-1]])
            else:
                x = env[tok]
            m = _mul(R, m, x)
        if coef == -1:
            m = _neg(R, m)
        elif coef != 1:
            raise ValueError("coefficients are +-1 only")
        out = m if out is None else _add(R, out, m)
    return out


def _pfac(R, env):
    # 1 + ab + abab
    a, b = env["a"], env["b"]
    return _tot(R, R.one, _prod(R, a, b), _prod(R, a, b, a, b))


def _qfac(R, env):
    # 1 - ba
    return _add(R, R.one, _neg(R, _prod(R, env["b"], env["a"])))


def _levels_ok(sc, items):
    if sc.symbolic:
        return word_in_levels_symbolic(items)
    return word_in_levels(items, sc.circ, sc.P, sc.Q)


def _atom_ok(sc, y):
    if sc.symbolic:
        ab = y.a.in_ideal("I") and y.b.in_ideal("J")
        ba = y.a.in_ideal("J") and y.b.in_ideal("I")
        return ab or ba
    return y_in_levels(y, sc.P, sc.Q)


# --- registry -----------------------------------------------------------

@dataclass(frozen=True)
class Check:
    id: str
    group: str
    descr: str
    needs: tuple
    run: callable = field(repr=False)


REGISTRY = {}


def _register(cid, descr, needs, fn):
    if cid in REGISTRY:
        raise ValueError(f"duplicate check id {cid}")
    REGISTRY[cid] = Check(cid, cid.split("-", 1)[0], descr, tuple(needs), fn)


def check(cid, descr, needs):
    def reg(fn):
        _register(cid, descr, needs, fn)
        return fn
    return reg


def checks(group=None):
    out = [c for c in REGISTRY.values() if group is None or c.group == group]
    return tuple(out)


def get_check(cid):
    return REGISTRY[cid]


def run_suite(scene, ids=None):
    """Run checks (all by default) on a scene; [(check, ok)] in id order."""
    sel = sorted(ids) if ids is not None else sorted(REGISTRY)
    return [(REGISTRY[cid], bool(REGISTRY[cid].run(scene))) for cid in sel]


# --- pair-against-transvection tables -----------------------------------
#
# z is the opposite pair at (1, 2) (groups pt, tr) or the long pair at
# (1, -1) (group lp and tr2); rows are the frozen product expansion.

def _pair_check(cid, descr, yspec, tpos, key, rows, z_first):
    def run(sc):
        sp, R, env = sc.sp, sc.sp.ring, sc.env
        z = eval_y(sp, YGen(yspec[0], yspec[1], env[yspec[2]], env[yspec[3]]))
        t = sp.T(tpos[0], tpos[1], env[key])
        lhs = sp.commutator(z, t) if z_first else sp.commutator(t, z)
        rhs = sp.e
        for pos, val in rows:
            c = val(R, env) if callable(val) else _expr(R, env, val)
            rhs = rhs.mul(sp.T(pos[0], pos[1], c))
        return lhs == rhs
    _register(cid, descr, ("a", "b", key), run)


_Y = (1, 2, "a", "b")
_YL = (1, -1, "aL1", "bL0")

_PT_ROWS = [
    ("pt-ih", (1, 3),
     [((1, 3), [(-1, 0, "a b c"), (-1, 0, "a b a b c")]),
      ((2, 3), [(-1, 0, "b a b c")])]),
    ("pt-jh", (2, 3),
     [((1, 3), [(1, 0, "a b a c")]),
      ((2, 3), [(1, 0, "b a c")])]),
    ("pt-hi", (3, 1),
     [((3, 1), [(1, 0, "c a b")]),
      ((3, 2), [(-1, 0, "c a b a")])]),
    ("pt-hj", (3, 2),
     [((3, 1), [(1, 0, "c b a b")]),
      ((3, 2), [(-1, 0, "c b a"), (-1, 0, "c b a b a")])]),
    ("pt-mih", (-1, 3),
     [((-3, 1), [(-1, 1, "c~ a b")]),
      ((-3, 2), [(1, 1, "c~ a b a")])]),
    ("pt-mjh", (-2, 3),
     [((-3, 1), [(-1, 1, "c~ b a b")]),
      ((-3, 2), [(1, 1, "c~ b a"), (1, 1, "c~ b a b a")])]),
    ("pt-hmi", (3, -1),
     [((1, -3), [(1, -1, "a b c~"), (1, -1, "a b a b c~")]),
      ((2, -3), [(1, -1, "b a b c~")])]),
    ("pt-hmj", (3, -2),
     [((1, -3), [(-1, -1, "a b a c~")]),
      ((2, -3), [(-1, -1, "b a c~")])]),
]

_TR_ROWS = [
    ("tr-ih", (1, 3),
     [((2, 3), [(1, 0, "b a b c")]),
      ((1, 3), [(1, 0, "a b c"), (1, 0, "a b a b c")])]),
    ("tr-jh", (2, 3),
     [((2, 3), [(-1, 0, "b a c")]),
      ((1, 3), [(-1, 0, "a b a c")])]),
    ("tr-hi", (3, 1),
     [((3, 2), [(1, 0, "c a b a")]),
      ((3, 1), [(-1, 0, "c a b")])]),
    ("tr-hj", (3, 2),
     [((3, 2), [(1, 0, "c b a"), (1, 0, "c b a b a")]),
      ((3, 1), [(-1, 0, "c b a b")])]),
    ("tr-mih", (-1, 3),
     [((-3, 2), [(-1, 1, "c~ a b a")]),
      ((-3, 1), [(1, 1, "c~ a b")])]),
    ("tr-mjh", (-2, 3),
     [((-3, 2), [(-1, 1, "c~ b a"), (-1, 1, "c~ b a b a")]),
      ((-3, 1), [(1, 1, "c~ b a b")])]),
    ("tr-hmi", (3, -1),
     [((2, -3), [(-1, -1, "b a b c~")]),
      ((1, -3), [(-1, -1, "a b c~"), (-1, -1, "a b a b c~")])]),
    ("tr-hmj", (3, -2),
     [((2, -3), [(1, -1, "b a c~")]),
      ((1, -3), [(1, -1, "a b a c~")])]),
]

for _cid, _tp, _rows in _PT_ROWS:
    _pair_check(_cid, f"[T{_tp}(c), Y_12(a,b)] expansion", _Y, _tp, "c",
                _rows, z_first=False)
for _cid, _tp, _rows in _TR_ROWS:
    _pair_check(_cid, f"[Y_12(a,b), T{_tp}(c)] expansion", _Y, _tp, "c",
                _rows, z_first=True)


def _bab(R, env):
    return _prod(R, env["b"], env["a"], env["b"])


def _aba(R, env):
    return _prod(R, env["a"], env["b"], env["a"])


_pair_check(
    "pt-long1", "[T_{1,-1}(g), Y_12(a,b)] expansion", _Y, (1, -1), "cL1",
    [((1, -1), lambda R, E: _add(R, E["cL1"], _neg(R, _prod(
        R, _pfac(R, E), E["cL1"], _bar(R, _pfac(R, E)))))),
     ((2, -2), lambda R, E: _neg(R, _prod(
        R, _bab(R, E), E["cL1"], _bar(R, _bab(R, E))))),
     ((1, -2), lambda R, E: _neg(R, _prod(
        R, _pfac(R, E), E["cL1"], _bar(R, _bab(R, E)))))],
    z_first=False)

_pair_check(
    "pt-long2", "[T_{2,-2}(g), Y_12(a,b)] expansion", _Y, (2, -2), "cL1",
    [((2, -2), lambda R, E: _add(R, E["cL1"], _neg(R, _prod(
        R, _qfac(R, E), E["cL1"], _bar(R, _qfac(R, E)))))),
     ((1, -1), lambda R, E: _neg(R, _prod(
        R, _aba(R, E), E["cL1"], _bar(R, _aba(R, E))))),
     ((1, -2), lambda R, E: _prod(
        R, _aba(R, E), E["cL1"],
        _add(R, R.one, _neg(R, _bar(R, _prod(R, E["b"], E["a"]))))))],
    z_first=False)

_pair_check(
    "tr-long1", "[Y_12(a,b), T_{1,-1}(g)] expansion", _Y, (1, -1), "cL1",
    [((1, -2), lambda R, E: _prod(
        R, _pfac(R, E), E["cL1"], _bar(R, _bab(R, E)))),
     ((2, -2), lambda R, E: _prod(
        R, _bab(R, E), E["cL1"], _bar(R, _bab(R, E)))),
     ((1, -1), lambda R, E: _add(R, _prod(
        R, _pfac(R, E), E["cL1"], _bar(R, _pfac(R, E))),
        _neg(R, E["cL1"])))],
    z_first=True)

_pair_check(
    "tr-long2", "[Y_12(a,b), T_{2,-2}(g)] expansion", _Y, (2, -2), "cL1",
    [((1, -2), lambda R, E: _neg(R, _prod(
        R, _aba(R, E), E["cL1"],
        _add(R, R.one, _neg(R, _bar(R, _prod(R, E["b"], E["a"]))))))),
     ((1, -1), lambda R, E: _prod(
        R, _aba(R, E), E["cL1"], _bar(R, _aba(R, E)))),
     ((2, -2), lambda R, E: _add(R, _prod(
        R, _qfac(R, E), E["cL1"], _bar(R, _qfac(R, E))),
        _neg(R, E["cL1"])))],
    z_first=True)

# Long pair at (1,-1): first slot e=1 twisted, second slot e=0.
_LP_SHORT = [
    ((1, 2), [(-1, 0, "aL1 bL0 c"), (-1, 0, "aL1 bL0 aL1 bL0 c")]),
    ((-1, 2), [(-1, 0, "bL0 aL1 bL0 c")]),
    ((-2, 2), [(1, 0, "c~ bL0 aL1 bL0 c"),
               (1, 0, "c~ bL0 aL1 bL0 aL1 bL0 c"),
               (1, 0, "c~ bL0 aL1 bL0 aL1 bL0 aL1 bL0 c")]),
]
_pair_check("lp-short", "[T_12(c), Y_{1,-1}] expansion", _YL, (1, 2), "c",
            _LP_SHORT, z_first=False)

# Inverse of lp-short: reversed factors with negated slots.
_TR2_SHORT = [
    ((-2, 2), [(-1, 0, "c~ bL0 aL1 bL0 c"),
               (-1, 0, "c~ bL0 aL1 bL0 aL1 bL0 c"),
               (-1, 0, "c~ bL0 aL1 bL0 aL1 bL0 aL1 bL0 c")]),
    ((-1, 2), [(1, 0, "bL0 aL1 bL0 c")]),
    ((1, 2), [(1, 0, "aL1 bL0 c"), (1, 0, "aL1 bL0 aL1 bL0 c")]),
]
_pair_check("tr2-short", "[Y_{1,-1}, T_12(c)] expansion", _YL, (1, 2), "c",
            _TR2_SHORT, z_first=True)


@check("pt-yflip", "Y_12(a,b) as the mirrored commutator", ("a", "b"))
def _pt_yflip(sc):
    sp, R, E = sc.sp, sc.sp.ring, sc.env
    lhs = eval_y(sp, YGen(1, 2, E["a"], E["b"]))
    rhs = sp.commutator(sp.T(-2, -1, _neg(R, _bar(R, E["a"]))),
                        sp.T(-1, -2, _neg(R, _bar(R, E["b"]))))
    return lhs == rhs


# --- long pair juggles ---------------------------------------------------

def _w_pair(sc):
    sp, E = sc.sp, sc.env
    return sp.commutator(sp.T(-1, 1, E["bL0"]), sp.T(1, -1, E["aL1"]))


@check("lp-jug1", "[T_{1,-1}(g), Y_{1,-1}] via the reversed pair",
       ("aL1", "bL0", "cL1"))
def _lp_jug1(sc):
    sp, E = sc.sp, sc.env
    zl = eval_y(sp, YGen(1, -1, E["aL1"], E["bL0"]))
    x = sp.T(1, -1, E["cL1"])
    w = _w_pair(sc)
    rhs = sp.inverse(w).mul(sp.commutator(w, x)).mul(w)
    return sp.commutator(x, zl) == rhs


@check("lp-jug2", "[T_{-1,2}(c), Y_{1,-1}] via the reversed pair",
       ("aL1", "bL0", "c"))
def _lp_jug2(sc):
    sp, E = sc.sp, sc.env
    zl = eval_y(sp, YGen(1, -1, E["aL1"], E["bL0"]))
    x = sp.T(-1, 2, E["c"])
    w = _w_pair(sc)
    rhs = sp.inverse(w).mul(sp.commutator(w, x)).mul(w)
    return sp.commutator(x, zl) == rhs


@check("tr-jug", "[Y_{1,-1}, T_{1,-1}(g)] via the reversed pair",
       ("aL1", "bL0", "cL1"))
def _tr_jug(sc):
    sp, E = sc.sp, sc.env
    zl = eval_y(sp, YGen(1, -1, E["aL1"], E["bL0"]))
    x = sp.T(1, -1, E["cL1"])
    w = _w_pair(sc)
    rhs = sp.inverse(w).mul(sp.commutator(x, w)).mul(w)
    return sp.commutator(zl, x) == rhs


@check("lp-absorb", "same-root factor of Y_{1,-1} drops out",
       ("aL1", "bL0", "xL0"))
def _lp_absorb(sc):
    sp, E = sc.sp, sc.env
    zl = eval_y(sp, YGen(1, -1, E["aL1"], E["bL0"]))
    zz = sp.z_gen(-1, 1, E["bL0"], E["aL1"])
    x = sp.T(-1, 1, E["xL0"])
    return sp.commutator(x, zl) == sp.commutator(x, zz)


# --- short transport (ss) ------------------------------------------------

@check("ss-seed", "T_12(-c a r) as a cross commutator", ("a", "c1", "c2"))
def _ss_seed(sc):
    sp, R, E = sc.sp, sc.sp.ring, sc.env
    c, r = E["c1"], E["c2"]
    lhs = sp.T(1, 2, _neg(R, _prod(R, c, E["a"], r)))
    return lhs == sp.commutator(sp.T(3, 2, _prod(R, E["a"], r)),
                                sp.T(1, 3, c))


@check("ss-conj1", "conjugating the row factor", ("a", "b", "c2"))
def _ss_conj1(sc):
    sp, R, E = sc.sp, sc.sp.ring, sc.env
    ar = _prod(R, E["a"], E["c2"])
    lhs = sp.conj(sp.T(2, 1, E["b"]), sp.T(3, 2, ar))
    rhs = sp.T(3, 1, _neg(R, _prod(R, ar, E["b"]))).mul(sp.T(3, 2, ar))
    return lhs == rhs


@check("ss-conj2", "conjugating the column factor", ("b", "c1"))
def _ss_conj2(sc):
    sp, R, E = sc.sp, sc.sp.ring, sc.env
    c = E["c1"]
    lhs = sp.conj(sp.T(2, 1, E["b"]), sp.T(1, 3, c))
    rhs = sp.T(1, 3, c).mul(sp.T(2, 3, _prod(R, E["b"], c)))
    return lhs == rhs


def _ss_master_at(sc, target):
    sp, R, E = sc.sp, sc.sp.ring, sc.env
    c1, a, c2, b = E["c1"], E["a"], E["c2"], E["b"]
    y = YGen(1, 2, _prod(R, c1, a, c2), b)
    atom, corr = roll_commutator(sp, y, (c1, a, c2), target)
    want_b = _prod(R, c2, b, c1)
    ok = (atom.i, atom.j) == target
    ok = ok and _same(R, atom.a, a) and _same(R, atom.b, want_b)
    ok = ok and eval_y(sp, y) == eval_y(sp, atom).mul(eval_items(sp, corr))
    return ok and _levels_ok(sc, corr) and _atom_ok(sc, atom)


@check("ss-master", "short atom transported off both axes",
       ("a", "b", "c1", "c2"))
def _ss_master(sc):
    return _ss_master_at(sc, (3, 1))


@check("ss-master3", "short atom transported onto the column axis",
       ("a", "b", "c1", "c2"))
def _ss_master3(sc):
    return _ss_master_at(sc, (3, 2))


# --- long transport (sl) -------------------------------------------------

@check("sl-seed", "T_{1,-1}(-c g bar c) as a mixed product", ("aL1", "c"))
def _sl_seed(sc):
    sp, R, E = sc.sp, sc.sp.ring, sc.env
    c, g = E["c"], E["aL1"]
    lhs = sp.T(1, -1, _neg(R, _prod(R, c, g, _bar(R, c))))
    rhs = sp.T(1, -2, _prod(R, c, g)).mul(
        sp.commutator(sp.T(1, 2, c), sp.T(2, -2, _neg(R, g))))
    return lhs == rhs


@check("sl-conj", "conjugation by an opposite long root", ("bL0", "c"))
def _sl_conj(sc):
    sp, R, E = sc.sp, sc.sp.ring, sc.env
    b, c = E["bL0"], E["c"]
    lhs = sp.conj(sp.T(-1, 1, b), sp.T(1, 2, c))
    rhs = sp.T(-1, 2, _prod(R, b, c)).mul(
        sp.T(-2, 2, _neg(R, _prod(R, _bar(R, c), b, c)))).mul(
        sp.T(1, 2, c))
    return lhs == rhs


@check("sl-b1", "long against transported short, first branch",
       ("aL1", "bL0", "c"))
def _sl_b1(sc):
    sp, R, E = sc.sp, sc.sp.ring, sc.env
    c, g, b = E["c"], E["aL1"], E["bL0"]
    cgc = _prod(R, c, g, _bar(R, c))
    bc = _prod(R, b, c)
    lhs = sp.commutator(sp.T(1, -1, cgc), sp.T(-1, 2, bc))
    rhs = sp.T(1, 2, _prod(R, cgc, bc)).mul(
        sp.T(-2, 2, _prod(R, _bar(R, c), b, c, g, _bar(R, c), b, c)))
    return lhs == rhs


@check("sl-b2", "long against its own column mirror commutes",
       ("aL1", "bL0", "c"))
def _sl_b2(sc):
    sp, R, E = sc.sp, sc.sp.ring, sc.env
    c, g, b = E["c"], E["aL1"], E["bL0"]
    cgc = _prod(R, c, g, _bar(R, c))
    x = sp.T(-2, 2, _neg(R, _prod(R, _bar(R, c), b, c)))
    return sp.commutator(sp.T(1, -1, cgc), x) == sp.e


@check("sl-b3", "dense cross branch stays at the product level",
       ("aL1", "bL0", "c"))
def _sl_b3(sc):
    sp, R, E = sc.sp, sc.sp.ring, sc.env
    c, g, b = E["c"], E["aL1"], E["bL0"]
    m = sp.commutator(sp.T(1, -2, _prod(R, c, g)),
                      sp.T(-1, 2, _prod(R, b, c)))
    if not sc.symbolic:
        return sp.congruence_member(m, sc.circ)
    idx = [k for k in range(1, sp.n + 1)] + [-k for k in range(sp.n, 0, -1)]
    for i in idx:
        for j in idx:
            x = m.entry(i, j)
            if i == j:
                x = x - R.one
            if not x.in_ideal({"I", "J"}):
                return False
    return True


@check("sl-b4", "short cross branch against the column mirror",
       ("aL1", "bL0", "c"))
def _sl_b4(sc):
    sp, R, E = sc.sp, sc.sp.ring, sc.env
    c, g, b = E["c"], E["aL1"], E["bL0"]
    cbc = _prod(R, _bar(R, c), b, c)
    lhs = sp.commutator(sp.T(1, -2, _prod(R, c, g)),
                        sp.T(-2, 2, _neg(R, cbc)))
    rhs = sp.T(1, 2, _neg(R, _prod(R, c, g, cbc))).mul(
        sp.T(1, -1, _prod(R, c, g, cbc, g, _bar(R, c))))
    return lhs == rhs


def _sl_master_at(sc, k):
    sp, R, E = sc.sp, sc.sp.ring, sc.env
    c, g, b = E["c"], E["aL1"], E["bL0"]
    y = YGen(1, -1, _prod(R, c, g, _bar(R, c)), b)
    atom, corr = roll_commutator(sp, y, (c, g), (k, -k))
    e = (1 - (1 if k > 0 else -1)) // 2
    want_a = _mul(R, _lampow(R, e), g)
    ok = (atom.i, atom.j) == (k, -k) and _same(R, atom.a, want_a)
    ok = ok and eval_y(sp, y) == eval_y(sp, atom).mul(eval_items(sp, corr))
    return ok and _levels_ok(sc, corr) and _atom_ok(sc, atom)


@check("sl-master", "long atom transported to a positive axis",
       ("aL1", "bL0", "c"))
def _sl_master(sc):
    return _sl_master_at(sc, 2)


@check("sl-masterneg", "long atom transported to a negative axis",
       ("aL1", "bL0", "c"))
def _sl_masterneg(sc):
    return _sl_master_at(sc, -2)


# --- relative frame, short position (f1) ---------------------------------

def _zshort(sc):
    sp, E = sc.sp, sc.env
    return sp.z_gen(2, 1, E["b"], E["r"])


@check("f1-conj1", "frame action on the unit column factor", ("b", "r"))
def _f1_conj1(sc):
    sp, R, E = sc.sp, sc.sp.ring, sc.env
    b, r = E["b"], E["r"]
    lhs = sp.conj(_zshort(sc), sp.T(2, 3, R.one))
    rhs = sp.T(2, 3, _add(R, R.one, _neg(R, _prod(R, b, r)))).mul(
        sp.T(1, 3, _neg(R, _prod(R, r, b, r))))
    return lhs == rhs


@check("f1-conj2", "frame action on the row factor", ("a", "b", "r"))
def _f1_conj2(sc):
    sp, R, E = sc.sp, sc.sp.ring, sc.env
    a, b, r = E["a"], E["b"], E["r"]
    lhs = sp.conj(_zshort(sc), sp.T(3, 1, _neg(R, a)))
    rhs = sp.T(3, 2, _neg(R, _prod(R, a, r, b, r))).mul(
        sp.T(3, 1, _add(R, _neg(R, a), _prod(R, a, r, b))))
    return lhs == rhs


@check("f1-split", "left split of the framed commutator", ("a", "b", "r"))
def _f1_split(sc):
    sp, R, E = sc.sp, sc.sp.ring, sc.env
    a, b, r = E["a"], E["b"], E["r"]
    x = sp.T(2, 3, R.one)
    y = sp.T(2, 3, _neg(R, _prod(R, b, r))).mul(
        sp.T(1, 3, _neg(R, _prod(R, r, b, r))))
    z = sp.T(3, 2, _neg(R, _prod(R, a, r, b, r))).mul(
        sp.T(3, 1, _add(R, _neg(R, a), _prod(R, a, r, b))))
    return commutator_calculus(sp, "C2", x, y, z)


@check("f1-master", "relative conjugate rewritten exactly, short",
       ("a", "b", "r"))
def _f1_master(sc):
    sp, R, E = sc.sp, sc.sp.ring, sc.env
    a, b, r = E["a"], E["b"], E["r"]
    items = relativise_conjugate(sp, (2, 1), a, b, r)
    lhs = sp.commutator(sp.T(2, 1, a),
                        sp.conj(sp.T(1, 2, r), sp.T(2, 1, b)))
    return lhs == eval_items(sp, items) and _levels_ok(sc, items)


# --- relative frame, long position (f2) ----------------------------------

def _zlong(sc):
    sp, E = sc.sp, sc.env
    return sp.z_gen(-1, 1, E["bL0"], E["rL1"])


@check("f2-seed", "long root factored through a fresh axis", ("aL0",))
def _f2_seed(sc):
    sp, R, E = sc.sp, sc.sp.ring, sc.env
    g = E["aL0"]
    tw = _mul(R, _lampow(R, -1), g)
    lhs = sp.T(-1, 1, _neg(R, g))
    rhs = sp.T(3, 1, _neg(R, tw)).mul(
        sp.commutator(sp.T(3, -3, tw), sp.T(-3, 1, R.one)))
    return lhs == rhs


@check("f2-conj1", "frame action on the twisted row factor",
       ("aL0", "bL0", "rL1"))
def _f2_conj1(sc):
    # The two short factors leave a long cross term at (3,-3); the
    # exact word closes it with a third, long factor.
    sp, R, E = sc.sp, sc.sp.ring, sc.env
    g, b, r = E["aL0"], E["bL0"], E["rL1"]
    lhs = sp.conj(_zlong(sc), sp.T(3, 1, _neg(R, g)))
    w = _expr(R, E, [(-1, -1, "aL0 rL1 bL0 rL1 aL0"),
                     (1, -1, "aL0 rL1 bL0 rL1 bL0 rL1 aL0")])
    rhs = sp.T(1, -3, _prod(R, _lampow(R, -1), r, b, r, g)).mul(
        sp.T(3, 1, _add(R, _neg(R, g), _prod(R, g, r, b)))).mul(
        sp.T(3, -3, w))
    return lhs == rhs


@check("f2-conj2", "frame action on the unit column factor",
       ("bL0", "rL1"))
def _f2_conj2(sc):
    sp, R, E = sc.sp, sc.sp.ring, sc.env
    b, r = E["bL0"], E["rL1"]
    lhs = sp.conj(_zlong(sc), sp.T(-3, 1, R.one))
    w = _expr(R, E, [(1, 1, "rL1 bL0 rL1"),
                     (-1, 1, "rL1 bL0 rL1 bL0 rL1")])
    rhs = sp.T(1, 3, _prod(R, _lampow(R, 1), r, b, r)).mul(
        sp.T(-3, 1, _add(R, R.one, _neg(R, _prod(R, r, b))))).mul(
        sp.T(-3, 3, w))
    return lhs == rhs


@check("f2-master", "relative conjugate rewritten exactly, long",
       ("aL0", "bL0", "rL1"))
def _f2_master(sc):
    sp, R, E = sc.sp, sc.sp.ring, sc.env
    g, b, r = E["aL0"], E["bL0"], E["rL1"]
    items = relativise_conjugate(sp, (-1, 1), g, b, r)
    lhs = sp.commutator(sp.T(-1, 1, g),
                        sp.conj(sp.T(1, -1, r), sp.T(-1, 1, b)))
    return lhs == eval_items(sp, items) and _levels_ok(sc, items)


# --- long-to-short transfer (ls) ------------------------------------------

def _ls_param(sc, x):
    R = sc.sp.ring
    return _add(R, x, _neg(R, _mul(R, _lampow(R, -1), _bar(R, x))))


@check("ls-seed", "antisymmetrised long root as a cross commutator",
       ("a",))
def _ls_seed(sc):
    sp, R, E = sc.sp, sc.sp.ring, sc.env
    a = E["a"]
    lhs = sp.T(1, -1, _ls_param(sc, a))
    rhs = sp.commutator(sp.T(3, -1, _neg(R, R.one)), sp.T(1, 3, a))
    return lhs == rhs


@check("ls-master", "long pair transferred to a short atom, second slot "
       "exact", ("a", "bL0"))
def _ls_master(sc):
    sp, R, E = sc.sp, sc.sp.ring, sc.env
    a, b = E["a"], E["bL0"]
    rr = long_short_transfer(sp, 1, 3, a, b)
    src = rr.source
    ok = (src.i, src.j) == (1, -1) and _same(R, src.a, _ls_param(sc, a))
    ok = ok and _same(R, src.b, b)
    atom = rr.moved.y
    ok = ok and (atom.i, atom.j) == (1, 3)
    ok = ok and _same(R, atom.a, a) and _same(R, atom.b, b)
    ok = ok and eval_y(sp, src) == eval_items(sp, rr.items)
    return ok and _levels_ok(sc, rr.items)


@check("ls-cor", "transfer after splitting an antisymmetrised slot",
       ("a", "bp"))
def _ls_cor(sc):
    sp, R, E = sc.sp, sc.sp.ring, sc.env
    a, bp = E["a"], E["bp"]
    nb = _neg(R, _mul(R, _lampow(R, 1), _bar(R, bp)))
    b2 = _add(R, bp, nb)
    rr = long_short_transfer(sp, 1, 3, a, b2)
    ok = eval_y(sp, rr.source) == eval_items(sp, rr.items)
    ta = sp.T(1, 3, a)
    ok = ok and commutator_calculus(sp, "C1", ta, sp.T(3, 1, bp),
                                    sp.T(3, 1, nb))
    return ok


# --- commutator calculus instances (cc) ------------------------------------

def _cc_args(sc):
    sp, E = sc.sp, sc.env
    x = sp.T(1, 2, E["c"])
    y = sp.T(2, 3, E["r"])
    z = sp.T(1, -1, E["cL1"])
    return x, y, z


@check("cc-c1", "[x, yz] split", ("c", "r", "cL1"))
def _cc_c1(sc):
    return commutator_calculus(sc.sp, "C1", *_cc_args(sc))


@check("cc-c1p", "[x, u1..uk] split", ("c", "r", "cL1", "c2"))
def _cc_c1p(sc):
    x, y, z = _cc_args(sc)
    u3 = sc.sp.T(-1, 2, sc.env["c2"])
    return commutator_calculus(sc.sp, "C1+", x, [y, z, u3])


@check("cc-c2", "[xy, z] split", ("c", "r", "cL1"))
def _cc_c2(sc):
    return commutator_calculus(sc.sp, "C2", *_cc_args(sc))


@check("cc-c2p", "[u1..uk, x] split", ("c", "r", "cL1", "c2"))
def _cc_c2p(sc):
    x, y, z = _cc_args(sc)
    u3 = sc.sp.T(-1, 2, sc.env["c2"])
    return commutator_calculus(sc.sp, "C2+", [y, z, u3], x)


@check("cc-c3", "Hall-Witt product collapses", ("c", "r", "cL1"))
def _cc_c3(sc):
    return commutator_calculus(sc.sp, "C3", *_cc_args(sc))


@check("cc-c4", "conjugated second argument", ("c", "r", "cL1"))
def _cc_c4(sc):
    return commutator_calculus(sc.sp, "C4", *_cc_args(sc))


@check("cc-c5", "conjugated first argument", ("c", "r", "cL1"))
def _cc_c5(sc):
    return commutator_calculus(sc.sp, "C5", *_cc_args(sc))


# --- elementary relations at fixed patterns (st) ----------------------------

@check("st-r1s", "short mirror identification", ("c",))
def _st_r1s(sc):
    sp, R, E = sc.sp, sc.sp.ring, sc.env
    return sp.T(1, 2, E["c"]) == sp.T(-2, -1, _neg(R, _bar(R, E["c"])))


@check("st-r1m", "short mirror identification across the hyperbola", ("c",))
def _st_r1m(sc):
    sp, R, E = sc.sp, sc.sp.ring, sc.env
    tw = _mul(R, _lampow(R, -1), _bar(R, E["c"]))
    return sp.T(1, -2, E["c"]) == sp.T(2, -1, _neg(R, tw))


@check("st-r2s", "short additivity", ("c", "r"))
def _st_r2s(sc):
    sp, R, E = sc.sp, sc.sp.ring, sc.env
    return (sp.T(1, 2, E["c"]).mul(sp.T(1, 2, E["r"]))
            == sp.T(1, 2, _add(R, E["c"], E["r"])))


@check("st-r2l", "long additivity", ("cL1", "rL1"))
def _st_r2l(sc):
    sp, R, E = sc.sp, sc.sp.ring, sc.env
    return (sp.T(1, -1, E["cL1"]).mul(sp.T(1, -1, E["rL1"]))
            == sp.T(1, -1, _add(R, E["cL1"], E["rL1"])))


@check("st-r3c", "disjoint columns commute", ("c", "r"))
def _st_r3c(sc):
    sp, E = sc.sp, sc.env
    return sp.commutator(sp.T(1, 2, E["c"]), sp.T(3, 2, E["r"])) == sp.e


@check("st-r3r", "disjoint rows commute", ("c", "r"))
def _st_r3r(sc):
    sp, E = sc.sp, sc.env
    return sp.commutator(sp.T(1, 2, E["c"]), sp.T(1, 3, E["r"])) == sp.e


@check("st-r3l", "disjoint long roots commute", ("cL1", "rL1"))
def _st_r3l(sc):
    sp, E = sc.sp, sc.env
    return sp.commutator(sp.T(1, -1, E["cL1"]),
                         sp.T(2, -2, E["rL1"])) == sp.e


@check("st-r4", "short chain commutator", ("c", "r"))
def _st_r4(sc):
    sp, R, E = sc.sp, sc.sp.ring, sc.env
    lhs = sp.commutator(sp.T(1, 2, E["c"]), sp.T(2, 3, E["r"]))
    return lhs == sp.T(1, 3, _prod(R, E["c"], E["r"]))


@check("st-r5", "short chain closing onto a long root", ("c", "r"))
def _st_r5(sc):
    sp, R, E = sc.sp, sc.sp.ring, sc.env
    c, r = E["c"], E["r"]
    lhs = sp.commutator(sp.T(1, 2, c), sp.T(2, -1, r))
    val = _add(R, _prod(R, c, r),
               _neg(R, _prod(R, _lampow(R, -1), _bar(R, r), _bar(R, c))))
    return lhs == sp.T(1, -1, val)


@check("st-r6", "long root against an opposite-row short root",
       ("cL1", "r"))
def _st_r6(sc):
    sp, R, E = sc.sp, sc.sp.ring, sc.env
    g, r = E["cL1"], E["r"]
    lhs = sp.commutator(sp.T(1, -1, g), sp.T(-1, 2, r))
    rhs = sp.T(1, 2, _prod(R, g, r)).mul(
        sp.T(-2, 2, _neg(R, _prod(R, _lampow(R, 1), _bar(R, r), g, r))))
    return lhs == rhs


# --- engine round trips (en) -----------------------------------------------

@check("en-conjy-s", "conjugation correction of a short pair",
       ("a", "b", "c", "r"))
def _en_conjy_s(sc):
    sp, E = sc.sp, sc.env
    gens = (Gen(1, 3, E["c"]), Gen(3, 2, E["r"]))
    y = YGen(1, 2, E["a"], E["b"])
    corr = conj_y_normalform(sp, gens, y)
    w = sp.T(1, 3, E["c"]).mul(sp.T(3, 2, E["r"]))
    lhs = sp.conj(w, eval_y(sp, y))
    return (lhs == eval_items(sp, corr).mul(eval_y(sp, y))
            and _levels_ok(sc, corr))


@check("en-conjy-l", "conjugation correction of a long pair",
       ("aL1", "bL0", "c"))
def _en_conjy_l(sc):
    sp, E = sc.sp, sc.env
    gens = (Gen(1, 2, E["c"]),)
    y = YGen(1, -1, E["aL1"], E["bL0"])
    corr = conj_y_normalform(sp, gens, y)
    lhs = sp.conj(sp.T(1, 2, E["c"]), eval_y(sp, y))
    return (lhs == eval_items(sp, corr).mul(eval_y(sp, y))
            and _levels_ok(sc, corr))


@check("en-add1", "additivity split in the first slot",
       ("a", "b", "c1", "c2"))
def _en_add1(sc):
    sp, R, E = sc.sp, sc.sp.ring, sc.env
    a2 = _prod(R, E["c1"], E["a"], E["c2"])
    y1 = YGen(1, 2, E["a"], E["b"])
    y2 = YGen(1, 2, a2, E["b"])
    corr, tail = additivity_split(sp, y1, y2)
    lhs = eval_y(sp, YGen(1, 2, _add(R, E["a"], a2), E["b"]))
    rhs = eval_items(sp, corr)
    for y in tail:
        rhs = rhs.mul(eval_y(sp, y))
    return lhs == rhs and _levels_ok(sc, corr)


@check("en-add2", "additivity split in the second slot",
       ("a", "b", "c1", "c2"))
def _en_add2(sc):
    sp, R, E = sc.sp, sc.sp.ring, sc.env
    b2 = _prod(R, E["c2"], E["b"], E["c1"])
    y1 = YGen(1, 2, E["a"], E["b"])
    y2 = YGen(1, 2, E["a"], b2)
    items = additivity_split2(sp, y1, y2)
    lhs = eval_y(sp, YGen(1, 2, E["a"], _add(R, E["b"], b2)))
    return lhs == eval_items(sp, items)


@check("en-yinv", "pair inversion swaps slots", ("a", "b", "aL1", "bL0"))
def _en_yinv(sc):
    sp, E = sc.sp, sc.env
    for y in (YGen(1, 2, E["a"], E["b"]), YGen(1, -1, E["aL1"], E["bL0"])):
        if eval_y(sp, y.inverse()) != sp.inverse(eval_y(sp, y)):
            return False
    return True


@check("en-zdef", "framed generator as a conjugate", ("b", "r"))
def _en_zdef(sc):
    sp, E = sc.sp, sc.env
    lhs = sp.z_gen(2, 1, E["b"], E["r"])
    return lhs == sp.conj(sp.T(1, 2, E["r"]), sp.T(2, 1, E["b"]))
