"""Shipped verification cases.

A Case bundles a finite form ring with a hyperbolic rank, one absolute
form parameter and zero or more relative form ideals (roles in order:
first (I, Gamma), then (J, Delta), ...).  The feasibility class records
what the verifier may attempt on it:

  enumerable  -- every subgroup the checks mention fits under the cap
  sampled     -- at least one side only reachable by seeded sampling
  degenerate  -- a construction collapses; still checked, never skipped

Everything heavy (ring tables, spaces, ideals) is built lazily so that
importing the catalog stays cheap.
"""

from .forms import (FormIdeal, additive_closure, enumerate_form_parameters,
                    enumerate_relative_params, gamma_bounds, lambda_bounds)
from .rings import mk_ring
from .unitary import UnitarySpace

__all__ = ["Case", "RelParam", "cases", "get_case", "case_ids",
            "catalog_rows", "two_sided_ideal"]


def two_sided_ideal(ring, gens):
    """Additive closure of {r g s : g in gens}; {0} for no generators."""
    seed = set()
    for g in gens:
        for r in ring.elements():
            for s in ring.elements():
                seed.add(ring.mul(ring.mul(r, g), s))
    return additive_closure(ring, seed)


def _resolve_lam_set(ring, spec):
    lmin, lmax = lambda_bounds(ring)
    if spec == "min":
        return lmin
    if spec == "max":
        return lmax
    return frozenset(spec)


def _resolve_gamma(ring, lam_set, ideal, spec):
    gmin, gmax = gamma_bounds(ring, lam_set, ideal)
    if spec == "min":
        return gmin
    if spec == "max":
        return gmax
    return frozenset(spec)


class RelParam:
    """One relative form ideal role, by ideal generators and a gamma rule."""

    def __init__(self, name, gens, gamma="max"):
        self.name = name
        self.gens = tuple(gens)
        self.gamma = gamma

    def build(self, ring, lam_set):
        ideal = two_sided_ideal(ring, self.gens)
        gamma = _resolve_gamma(ring, lam_set, ideal, self.gamma)
        return FormIdeal(ring, lam_set, ideal, gamma, name=self.name)


class Case:
    def __init__(self, id, descr, n=3, lam_param="max", rel=(),
                 feasibility="enumerable", steinberg=None, notes=""):
        self.id = id
        self.descr = dict(descr)
        self.n = n
        self.lam_param = lam_param
        self.rel = tuple(rel)
        self.feasibility = feasibility
        self.steinberg = steinberg   # "exhaustive" | "sampled" | None
        self.notes = notes
        self._ring = None
        self._lam_set = None
        self._space = None
        self._ideals = None

    def __repr__(self):
        return f"Case({self.id!r})"

    @property
    def ring(self):
        if self._ring is None:
            self._ring = mk_ring(self.descr)
        return self._ring

    @property
    def lam_set(self):
        if self._lam_set is None:
            self._lam_set = _resolve_lam_set(self.ring, self.lam_param)
        return self._lam_set

    @property
    def space(self):
        if self._space is None:
            self._space = UnitarySpace(self.ring, self.n, self.lam_set)
        return self._space

    def unit_ideal(self):
        return FormIdeal.unit(self.ring, self.lam_set)

    def ideals(self):
        if self._ideals is None:
            self._ideals = tuple(p.build(self.ring, self.lam_set)
                                 for p in self.rel)
        return self._ideals

    def ideal(self, k=0):
        return self.ideals()[k]

    def meta(self):
        return {"case": self.id, "ring": self.ring.name,
                "lam": self.ring.element_name(self.ring.lam),
                "lam_set": sorted(self.ring.element_name(x)
                                  for x in self.lam_set),
                "n": self.n,
                "rel": [p.name for p in self.rel],
                "feasibility": self.feasibility}


def _zmod(m, lam):
    return {"kind": "zmod", "m": m, "lam": lam}


def _set_tag(ring, s):
    return "".join(ring.element_name(x) for x in sorted(s))


def _build_cases():
    out = []

    # F_2 and Z/4: every (lam, Lambda) pair, enumerated rather than listed
    # so the catalog cannot drift from the axioms.  Relative children carry
    # I = (2) with every admissible Gamma (Z/4 only; F_2 has no proper
    # involution-stable ideal but {0}).
    for m, lams in ((2, (1,)), (4, (1, 3))):
        for lam in lams:
            ring = mk_ring(_zmod(m, lam))
            for ls in enumerate_form_parameters(ring):
                tag = f"z{m}-l{lam}-L{_set_tag(ring, ls)}"
                out.append(Case(tag, _zmod(m, lam), lam_param=ls,
                                steinberg="exhaustive"))
                if m == 4:
                    ideal = two_sided_ideal(ring, (2,))
                    for gam in enumerate_relative_params(ring, ls, ideal):
                        out.append(Case(
                            f"{tag}-g{_set_tag(ring, gam)}", _zmod(m, lam),
                            lam_param=ls,
                            rel=(RelParam("(2)", (2,), gamma=gam),)))

    out.append(Case("z8-flagship", _zmod(8, 7),
                    rel=(RelParam("(2)", (2,)), RelParam("(2)'", (2,))),
                    steinberg="sampled",
                    notes="main two-ideal case; both roles share (2), "
                          "gamma maximal"))
    out.append(Case("z8-sq0", _zmod(8, 7),
                    rel=(RelParam("(4)", (4,)),),
                    notes="(4)^2 = 0, so the full congruence level "
                          "enumerates directly"))
    out.append(Case("z12-comax", _zmod(12, 11),
                    rel=(RelParam("(2)", (2,)), RelParam("(3)", (3,))),
                    steinberg="sampled",
                    notes="comaximal pair: (2) + (3) is the whole ring"))
    out.append(Case("z16-triple", _zmod(16, 15),
                    rel=(RelParam("(2)", (2,)), RelParam("(2)'", (2,)),
                         RelParam("(2)''", (2,))),
                    feasibility="sampled",
                    notes="triple and deeper products land in (8), whose "
                          "square vanishes; outer groups are sampled"))
    out.append(Case("f2x2-swap", {"kind": "pairswap", "m": 2},
                    steinberg="sampled",
                    notes="coordinate-swap involution; no proper stable "
                          "ideal, absolute checks only"))
    out.append(Case("f2s3", {"kind": "group2"},
                    feasibility="sampled", steinberg="sampled",
                    notes="noncommutative group ring; identity and "
                          "relation sampling only"))
    return tuple(out)


_CASES = None


def cases():
    global _CASES
    if _CASES is None:
        _CASES = _build_cases()
    return _CASES


def get_case(id):
    for c in cases():
        if c.id == id:
            return c
    raise KeyError(f"unknown case {id!r}")


def case_ids():
    return [c.id for c in cases()]


def catalog_rows():
    """Tabular view for the command line: one row per case."""
    rows = []
    for c in cases():
        rows.append({
            "id": c.id,
            "ring": c.ring.name,
            "lam": c.ring.element_name(c.ring.lam),
            "Lambda": "{" + ",".join(c.ring.element_name(x)
                                     for x in sorted(c.lam_set)) + "}",
            "rel": " ".join(f"{p.name}" for p in c.rel) or "-",
            "n": c.n,
            "feasibility": c.feasibility,
            "steinberg": c.steinberg or "-",
        })
    return rows
