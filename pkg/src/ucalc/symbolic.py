"""Free *-ring with a formal central lambda: the symbolic identity oracle.

Elements are integer-coefficient sums of terms (lambda^k, word), where the
word is a tuple of letters (symbol, barred).  lambda is central with
lambda * bar(lambda) == 1, so lambda exponents are plain ints.  The involution
reverses words, toggles bars and negates lambda exponents.

Symbols may carry two tags:
  ideal    a label ('I', 'J', ...) recording which ideal the symbol ranges
           over; used by the structural level checker, not by arithmetic.
  long_e   e in {0, 1}: the symbol ranges over lambda^{-e} * (a form
           parameter), hence satisfies bar(u) == -lambda^{2e-1} * u.  The
           normal form rewrites every barred occurrence through this law, so
           equality of normal forms decides equality under the relations.

Normal forms are canonical: tagged bars eliminated, terms sorted, zero
coefficients dropped.  There is no other rewriting, so two expressions are
reported equal iff they are equal in the free *-ring modulo the lambda and
long-root laws.
"""

from __future__ import annotations

from .errors import UnsupportedKind


class SymbolicRing:
    """Registry of symbols plus FormRing-like constants."""

    is_finite = False
    is_symbolic = True
    kind = "symbolic"

    def __init__(self, symbols, name="symbolic"):
        # symbols: {name: (ideal_tag or None, long_e or None)}
        self.symbols = dict(symbols)
        self.name = name
        self.descr = {"kind": "symbolic", "name": name,
                      "symbols": [{"name": k, "ideal": v[0], "long_e": v[1]}
                                  for k, v in self.symbols.items()]}
        self.zero = SymbolicElement(self, {})
        self.one = SymbolicElement(self, {(0, ()): 1})
        self.lam = SymbolicElement(self, {(1, ()): 1})
        self.lam_bar = SymbolicElement(self, {(-1, ()): 1})
        self.minus_one = SymbolicElement(self, {(0, ()): -1})

    @classmethod
    def from_descr(cls, descr):
        syms = {}
        for s in descr.get("symbols", []):
            syms[s["name"]] = (s.get("ideal"), s.get("long_e"))
        return cls(syms, name=descr.get("name", "symbolic"))

    def sym(self, name):
        if name not in self.symbols:
            raise UnsupportedKind(f"symbol {name!r} not declared")
        return SymbolicElement(self, {(0, ((name, False),)): 1})

    def add(self, x, y):
        return x + y

    def sub(self, x, y):
        return x - y

    def neg(self, x):
        return -x

    def mul(self, x, y):
        return x * y

    def invol(self, x):
        return x.bar()

    def lam_pow(self, k):
        return SymbolicElement(self, {(k, ()): 1})

    def __repr__(self):
        return f"SymbolicRing({sorted(self.symbols)})"


class SymbolicElement:
    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms, normalize=True):
        self.ring = ring
        self.terms = self._normal(ring, terms) if normalize else terms

    @staticmethod
    def _normal(ring, terms):
        out = {}
        stack = list(terms.items())
        while stack:
            (lam, word), coeff = stack.pop()
            if coeff == 0:
                continue
            # rewrite the first barred long-root letter and requeue
            for pos, (name, barred) in enumerate(word):
                e = ring.symbols.get(name, (None, None))[1]
                if barred and e is not None:
                    new_word = word[:pos] + ((name, False),) + word[pos + 1:]
                    stack.append(((lam + 2 * e - 1, new_word), -coeff))
                    break
            else:
                key = (lam, word)
                out[key] = out.get(key, 0) + coeff
                if out[key] == 0:
                    del out[key]
        return out

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, 0) + c
            if terms[k] == 0:
                del terms[k]
        return SymbolicElement(self.ring, terms, normalize=False)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __neg__(self):
        return SymbolicElement(self.ring, {k: -c for k, c in self.terms.items()},
                               normalize=False)

    def __mul__(self, other):
        other = self._coerce(other)
        terms = {}
        for (l1, w1), c1 in self.terms.items():
            for (l2, w2), c2 in other.terms.items():
                key = (l1 + l2, w1 + w2)
                terms[key] = terms.get(key, 0) + c1 * c2
        return SymbolicElement(self.ring, terms)

    def __rmul__(self, other):
        if isinstance(other, int):
            return SymbolicElement(self.ring,
                                   {k: other * c for k, c in self.terms.items()},
                                   normalize=False)
        return NotImplemented

    def _coerce(self, other):
        if isinstance(other, SymbolicElement):
            return other
        if isinstance(other, int):
            return SymbolicElement(self.ring, {(0, ()): other})
        raise TypeError(f"cannot combine SymbolicElement with {type(other)}")

    def bar(self):
        terms = {}
        for (lam, word), coeff in self.terms.items():
            new_word = tuple((name, not barred) for name, barred in reversed(word))
            key = (-lam, new_word)
            terms[key] = terms.get(key, 0) + coeff
        return SymbolicElement(self.ring, terms)

    # -- predicates ----------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, int):
            other = self._coerce(other)
        return isinstance(other, SymbolicElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def in_ideal(self, tags):
        """True when every term contains a letter tagged with one of `tags`.

        Structural only: membership in the two-sided ideal generated by the
        tagged symbols.  tags may be a str or a set; a set means every tag in
        it must appear in every term (used for product levels like I.J).
        """
        need = {tags} if isinstance(tags, str) else set(tags)
        for (_, word), _ in self.terms.items():
            seen = {self.ring.symbols.get(nm, (None, None))[0] for nm, _ in word}
            if not need <= seen:
                return False
        return True

    def is_long_admissible(self, e):
        """Check u == -lambda^{1-2e} * bar(u): u ranges over lambda^{-e}*Lambda."""
        lhs = self + self.ring.lam_pow(1 - 2 * e) * self.bar()
        return lhs.is_zero()

    # -- substitution ---------------------------------------------------------

    def subst(self, env, ring):
        """Evaluate in a finite ring; env maps symbol name -> element index."""
        ch = _char(ring)
        acc = ring.zero
        for (lam, word), coeff in self.terms.items():
            val = ring.lam_pow(lam)
            for name, barred in word:
                x = env[name]
                val = ring.mul(val, ring.invol(x) if barred else x)
            for _ in range(coeff % ch):
                acc = ring.add(acc, val)
        return acc

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for (lam, word), coeff in sorted(self.terms.items(),
                                         key=lambda kv: (len(kv[0][1]), kv[0])):
            body = ".".join(nm + ("~" if b else "") for nm, b in word)
            lead = "" if coeff == 1 else "-" if coeff == -1 else f"{coeff}*"
            lpart = "" if lam == 0 else f"L^{lam}." if lam != 1 else "L."
            bits.append(f"{lead}{lpart}{body or '1'}")
        return " + ".join(bits).replace("+ -", "- ")


_CHAR_CACHE = {}


def _char(ring):
    """Additive order of 1 in a finite ring; bounds coefficient reduction."""
    key = id(ring)
    if key not in _CHAR_CACHE:
        n, x = 1, ring.add(ring.zero, ring.one)
        while x != ring.zero:
            x = ring.add(x, ring.one)
            n += 1
        _CHAR_CACHE[key] = n
    return _CHAR_CACHE[key]
