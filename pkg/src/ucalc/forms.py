"""Form parameters and form ideals over a finite form ring.

All subsets of a finite ring are frozensets of element indices.  A form
parameter Lambda sits between

    Lambda_min = {c - lam*bar(c)}   and   Lambda_max = {c : c == -lam*bar(c)}

and is closed under c . Lambda . bar(c).  A form ideal (I, Gamma) relative to
(A, Lambda) needs I a two-sided involution-invariant ideal and Gamma between

    Gamma_min(I) = {a - lam*bar(a) : a in I} + <a c bar(a) : a in I, c in Lambda>
    Gamma_max(I) = I  intersect  Lambda

again closed under c . Gamma . bar(c) for every c in A.

Long-root parameter sets carry a lambda twist depending on the sign of the
row index: at position (i, -i) the admissible set is lam^{-(eps(i)+1)/2} *
Gamma, i.e. lam^{-1}*Gamma for i > 0 and Gamma itself for i < 0.
"""

from __future__ import annotations

from .errors import NotAFormIdeal, NotAFormParameter


def additive_closure(ring, gens):
    gens = set(gens)
    if not gens:
        return frozenset({ring.zero})
    els = {ring.zero}
    bdy = set(gens)
    els |= bdy
    while bdy:
        new = set()
        for g in gens:
            for x in bdy:
                y = ring.add(g, x)
                if y not in els:
                    new.add(y)
        els |= new
        bdy = new
    return frozenset(els)


def is_additive_subgroup(ring, S):
    return (ring.zero in S
            and all(ring.add(x, y) in S for x in S for y in S))


def ideal_closure(ring, gens):
    """Two-sided ideal generated by gens."""
    seed = set()
    for g in gens:
        for x in ring.elements():
            for y in ring.elements():
                seed.add(ring.mul(ring.mul(x, g), y))
    return additive_closure(ring, seed)


def invol_set(ring, S):
    return frozenset(ring.invol(x) for x in S)


def set_product(ring, S, T):
    return frozenset(ring.mul(s, t) for s in S for t in T)


def twist_set(ring, S, sign):
    """lam^{-(sign+1)/2} * S: the long-root admissible set at row sign."""
    if sign > 0:
        return frozenset(ring.mul(ring.lam_bar, s) for s in S)
    return frozenset(S)


def lambda_bounds(ring):
    lmin = additive_closure(
        ring, {ring.sub(c, ring.mul(ring.lam, ring.invol(c)))
               for c in ring.elements()})
    lmax = frozenset(c for c in ring.elements()
                     if c == ring.neg(ring.mul(ring.lam, ring.invol(c))))
    return lmin, lmax


def is_form_parameter(ring, S, explain=False):
    S = frozenset(S)
    lmin, lmax = lambda_bounds(ring)
    reason = None
    if not is_additive_subgroup(ring, S):
        reason = "not additively closed"
    elif not lmin <= S:
        reason = "misses Lambda_min"
    elif not S <= lmax:
        reason = "exceeds Lambda_max"
    else:
        for c in ring.elements():
            cb = ring.invol(c)
            if any(ring.mul(ring.mul(c, s), cb) not in S for s in S):
                reason = f"not closed under {ring.element_name(c)}.S.bar"
                break
    if explain:
        return reason is None, reason
    return reason is None


def _subgroups_between(ring, lower, upper):
    """All additive subgroups S with lower <= S <= upper."""
    base = additive_closure(ring, lower)
    if not base <= upper:
        return []
    found = {base}
    frontier = [base]
    while frontier:
        S = frontier.pop()
        for x in upper - S:
            T = additive_closure(ring, S | {x})
            if T <= upper and T not in found:
                found.add(T)
                frontier.append(T)
    return sorted(found, key=lambda S: (len(S), sorted(S)))


def enumerate_form_parameters(ring):
    lmin, lmax = lambda_bounds(ring)
    out = []
    for S in _subgroups_between(ring, lmin, lmax):
        if is_form_parameter(ring, S):
            out.append(S)
    return out


def gamma_bounds(ring, lam_set, ideal):
    gmax = frozenset(ideal) & frozenset(lam_set)
    seed = {ring.sub(a, ring.mul(ring.lam, ring.invol(a))) for a in ideal}
    for a in ideal:
        ab = ring.invol(a)
        for c in lam_set:
            seed.add(ring.mul(ring.mul(a, c), ab))
    gmin = additive_closure(ring, seed)
    return gmin, gmax


def is_ideal(ring, I):
    I = frozenset(I)
    if not is_additive_subgroup(ring, I):
        return False
    for x in ring.elements():
        for a in I:
            if ring.mul(x, a) not in I or ring.mul(a, x) not in I:
                return False
    return True


def is_form_ideal(ring, lam_set, ideal, gamma, explain=False):
    ideal, gamma = frozenset(ideal), frozenset(gamma)
    reason = None
    if not is_ideal(ring, ideal):
        reason = "ideal part is not a two-sided ideal"
    elif invol_set(ring, ideal) != ideal:
        reason = "ideal not involution-invariant"
    elif not is_additive_subgroup(ring, gamma):
        reason = "gamma not additively closed"
    else:
        gmin, gmax = gamma_bounds(ring, lam_set, ideal)
        if not gmin <= gamma:
            missing = sorted(gmin - gamma)[0]
            reason = f"gamma misses Gamma_min element {ring.element_name(missing)}"
        elif not gamma <= gmax:
            extra = sorted(gamma - gmax)[0]
            reason = f"gamma element {ring.element_name(extra)} outside I intersect Lambda"
        else:
            for c in ring.elements():
                cb = ring.invol(c)
                if any(ring.mul(ring.mul(c, g), cb) not in gamma for g in gamma):
                    reason = f"gamma not closed under {ring.element_name(c)}.G.bar"
                    break
    if explain:
        return reason is None, reason
    return reason is None


def enumerate_relative_params(ring, lam_set, ideal):
    gmin, gmax = gamma_bounds(ring, lam_set, ideal)
    out = []
    for S in _subgroups_between(ring, gmin, gmax):
        if is_form_ideal(ring, lam_set, ideal, S):
            out.append(S)
    return out


class FormIdeal:
    """A form ideal (I, Gamma) relative to (ring, Lambda).

    The ambient pair (A, Lambda) is FormIdeal.unit(ring, lam_set); relative
    levels validate against it at construction unless check=False.
    """

    __slots__ = ("ring", "lam_set", "ideal", "gamma", "name")

    def __init__(self, ring, lam_set, ideal, gamma, name=None, check=True):
        self.ring = ring
        self.lam_set = frozenset(lam_set)
        self.ideal = frozenset(ideal)
        self.gamma = frozenset(gamma)
        self.name = name or f"({len(self.ideal)},{len(self.gamma)})"
        if check:
            ok, reason = is_form_ideal(ring, self.lam_set, self.ideal, self.gamma,
                                       explain=True)
            if not ok:
                raise NotAFormIdeal(f"{self.name}: {reason}")

    @classmethod
    def unit(cls, ring, lam_set, name="(A,L)"):
        if not is_form_parameter(ring, lam_set):
            ok, reason = is_form_parameter(ring, lam_set, explain=True)
            raise NotAFormParameter(f"{name}: {reason}")
        return cls(ring, lam_set, frozenset(ring.elements()), frozenset(lam_set),
                   name=name, check=False)

    @property
    def is_unit(self):
        return len(self.ideal) == self.ring.size and self.gamma == self.lam_set

    def long_set(self, sign):
        return twist_set(self.ring, self.gamma, sign)

    def contains_short(self, x):
        return x in self.ideal

    def contains_long(self, x, sign):
        return x in self.long_set(sign)

    def __eq__(self, other):
        return (isinstance(other, FormIdeal) and self.ring == other.ring
                and self.lam_set == other.lam_set and self.ideal == other.ideal
                and self.gamma == other.gamma)

    def __hash__(self):
        return hash((self.ring, self.lam_set, self.ideal, self.gamma))

    def __repr__(self):
        return f"FormIdeal({self.ring.name}, {self.name})"


def conjugate_param_set(ring, gamma, J):
    """^J Gamma: additive closure of {b g bar(b) : b in J, g in gamma}."""
    seed = set()
    for b in J:
        bb = ring.invol(b)
        for g in gamma:
            seed.add(ring.mul(ring.mul(b, g), bb))
    return additive_closure(ring, seed)


def symmetrized_product(P, Q):
    """(I,Gamma) o (J,Delta) = (IJ+JI, Gamma_min(IJ+JI) + ^J Gamma + ^I Delta)."""
    ring = P.ring
    prod = additive_closure(ring, set_product(ring, P.ideal, Q.ideal)
                            | set_product(ring, Q.ideal, P.ideal))
    gmin, _ = gamma_bounds(ring, P.lam_set, prod)
    gam = additive_closure(ring, set(gmin)
                           | set(conjugate_param_set(ring, P.gamma, Q.ideal))
                           | set(conjugate_param_set(ring, Q.gamma, P.ideal)))
    return FormIdeal(ring, P.lam_set, prod, gam,
                     name=f"{P.name}o{Q.name}")


def form_ideal_sum(P, Q):
    ring = P.ring
    return FormIdeal(ring, P.lam_set,
                     additive_closure(ring, P.ideal | Q.ideal),
                     additive_closure(ring, P.gamma | Q.gamma),
                     name=f"{P.name}+{Q.name}")


def form_ideal_intersection(P, Q):
    """(I cap J, Gamma cap Delta); raises NotAFormIdeal when the sandwich fails."""
    ring = P.ring
    return FormIdeal(ring, P.lam_set, P.ideal & Q.ideal, P.gamma & Q.gamma,
                     name=f"{P.name}^{Q.name}")
