"""Exact arithmetic in graded-commutative finitely presented algebras.

A presentation fixes an ordered list of generators with integer degrees, a
base coefficient mode (integers, p-local rationals, or a prime field),
rewrite rules, a set of inverted generators, and a truncation bound D.
Elements are kept in a canonical normal form: fully rewritten, monomials
sorted, no zero coefficients, no term of weight > D.

Rewrite rules come in three normalized shapes, keyed by a generator g:
  * eliminable  g   -> polynomial in strictly earlier generators
  * kill        g   -> 0
  * power       g^k -> polynomial in g (exponent < k) and earlier generators
Rewriting terminates because each step strictly decreases the pair
(generator index, exponent at that index) in lexicographic order.

Truncation uses the *weight* of a monomial: the degree contributed by the
non-inverted generators only.  For presentations without inverted
generators weight equals degree; for localized algebras it makes every
degree piece finite while staying multiplicative.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .errors import (
    DegreeError,
    IllegalExponent,
    InfiniteBasis,
    IntegralityFailure,
    PresentationMismatch,
    SolveFailure,
    Verdict,
)


@dataclass(frozen=True)
class BaseMode:
    """Coefficient universe: "int", "plocal" (exact rationals with p-locality
    asserted at API boundaries), or "fp" (prime field)."""

    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind not in ("int", "plocal", "fp"):
            raise ValueError(f"unknown base mode {self.kind!r}")
        if self.kind in ("plocal", "fp") and (self.p is None or self.p < 2):
            raise ValueError("modes plocal/fp need a prime p")

    @property
    def characteristic(self):
        return self.p if self.kind == "fp" else 0

    def coerce(self, c):
        if self.kind == "fp":
            if isinstance(c, Fraction):
                num, den = c.numerator, c.denominator
                if den % self.p == 0:
                    raise IntegralityFailure(f"denominator of {c} not a unit mod {self.p}")
                return (num * pow(den, -1, self.p)) % self.p
            return c % self.p
        if self.kind == "plocal":
            return Fraction(c)
        if isinstance(c, Fraction):
            if c.denominator != 1:
                raise IntegralityFailure(f"non-integer coefficient {c} in integer mode")
            return c.numerator
        return int(c)

    def add(self, a, b):
        s = a + b
        return s % self.p if self.kind == "fp" else s

    def mul(self, a, b):
        s = a * b
        return s % self.p if self.kind == "fp" else s

    def neg(self, a):
        return (-a) % self.p if self.kind == "fp" else -a

    def inv(self, a):
        if self.kind == "fp":
            return pow(a, -1, self.p)
        if a in (1, -1):
            return a
        if self.kind == "plocal":
            return Fraction(1) / a
        raise SolveFailure(f"{a} not invertible in integer mode")


# rule kinds: power == 1 means eliminable (rhs nonzero) or kill (rhs empty)
@dataclass(frozen=True)
class Rule:
    power: int
    rhs: tuple  # tuple of (coeff, exponent-tuple), raw form


class GradedPresentation:
    """A graded-commutative algebra given by generators, rules, inversions
    and a truncation bound.  Immutable after construction."""

    def __init__(self, mode, generators, relations=None, inverted=(), truncation=64, name=""):
        self.mode = mode
        self.gens = tuple((str(n), int(d)) for n, d in generators)
        self.names = tuple(n for n, _ in self.gens)
        self.degrees = tuple(d for _, d in self.gens)
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate generator names")
        self.index = {n: i for i, n in enumerate(self.names)}
        self.truncation = int(truncation)
        self.name = name
        inv = set()
        for g in inverted:
            inv.add(g if isinstance(g, int) else self.index[g])
        self.inverted = frozenset(inv)
        rules = {}
        for key, val in (relations or {}).items():
            i = key if isinstance(key, int) else self.index[key]
            if isinstance(val, Rule):
                rules[i] = val
            else:
                power, rhs = val
                rules[i] = Rule(int(power), tuple((c, tuple(m)) for c, m in rhs))
        self.rules = rules
        self._odd = tuple(i for i, d in enumerate(self.degrees) if d % 2 != 0)
        self._validate()
        self._basis_cache = {}
        self._nf_rhs_cache = {}

    def _validate(self):
        n = len(self.gens)
        for i, rule in self.rules.items():
            if i in self.inverted:
                raise ValueError(f"inverted generator {self.names[i]} may not carry a rule")
            if rule.power < 1:
                raise ValueError("rule power must be >= 1")
            lhs_deg = rule.power * self.degrees[i]
            for c, m in rule.rhs:
                if len(m) != n:
                    raise ValueError("rule monomial has wrong length")
                if sum(e * d for e, d in zip(m, self.degrees)) != lhs_deg:
                    raise DegreeError(
                        f"inhomogeneous rule for {self.names[i]}^{rule.power}"
                    )
                for j, e in enumerate(m):
                    if e < 0:
                        raise IllegalExponent("negative exponent in rule RHS")
                    if e and j > i:
                        raise ValueError(
                            f"rule for {self.names[i]} references later generator {self.names[j]}"
                        )
                    if j == i and e >= rule.power:
                        raise ValueError(
                            f"rule for {self.names[i]} not exponent-decreasing"
                        )

    # -- monomial helpers -------------------------------------------------

    def monomial_degree(self, m):
        return sum(e * d for e, d in zip(m, self.degrees))

    def weight(self, m):
        return sum(
            e * d
            for i, (e, d) in enumerate(zip(m, self.degrees))
            if i not in self.inverted
        )

    def _mul_mono(self, m1, m2):
        """Merge two exponent vectors with the Koszul sign.

        Returns (sign, monomial) or None when an odd generator squares to
        zero (characteristic != 2)."""
        sign = 0
        if self._odd:
            char2 = self.mode.characteristic == 2
            below = 0
            # moving each odd factor of m2 past the odd factors of m1 that
            # sit at strictly larger generator indices
            total1 = sum(m1[i] for i in self._odd)
            seen1 = 0
            for i in self._odd:
                e1, e2 = m1[i], m2[i]
                seen1 += e1
                if e2:
                    sign += e2 * (total1 - seen1)
                if not char2 and e1 + e2 >= 2:
                    return None
        mono = tuple(a + b for a, b in zip(m1, m2))
        return (-1) ** (sign % 2), mono

    # -- normalization ----------------------------------------------------

    def _first_violation(self, m):
        """Highest generator index where m breaks a rule or inversion."""
        for i in range(len(m) - 1, -1, -1):
            e = m[i]
            if e == 0:
                continue
            rule = self.rules.get(i)
            if rule is not None and (e < 0 or e >= rule.power):
                return i
            if e < 0 and i not in self.inverted:
                raise IllegalExponent(
                    f"negative power of non-inverted generator {self.names[i]}"
                )
        return None

    def normalize_terms(self, raw):
        """Normalize an iterable of (coefficient, exponent-tuple) pairs.

        Returns (terms dict, truncated flag)."""
        mode = self.mode
        out = {}
        truncated = False
        stack = [(mode.coerce(c), tuple(m)) for c, m in raw]
        while stack:
            c, m = stack.pop()
            if c == 0:
                continue
            i = self._first_violation(m)
            if i is None:
                if self.weight(m) > self.truncation:
                    truncated = True
                    continue
                acc = out.get(m)
                if acc is None:
                    out[m] = c
                else:
                    s = mode.add(acc, c)
                    if s == 0:
                        del out[m]
                    else:
                        out[m] = s
                continue
            rule = self.rules[i]
            if m[i] < 0:
                raise IllegalExponent(
                    f"negative power of generator {self.names[i]} with a rule"
                )
            # strip one instance of the rule's LHS and multiply by its RHS
            base = list(m)
            base[i] -= rule.power
            base = tuple(base)
            for c2, m2 in rule.rhs:
                res = self._mul_mono(base, m2)
                if res is None:
                    continue
                sgn, mono = res
                cc = mode.mul(c, mode.coerce(c2))
                if sgn < 0:
                    cc = mode.neg(cc)
                stack.append((cc, mono))
        return out, truncated

    # -- element constructors --------------------------------------------

    def element(self, raw, truncated=False):
        terms, trunc = self.normalize_terms(raw)
        return Element(self, terms, truncated or trunc)

    def zero(self):
        return Element(self, {}, False)

    def one(self):
        return self.scalar(1)

    def scalar(self, c):
        c = self.mode.coerce(c)
        unit = (0,) * len(self.gens)
        return Element(self, {unit: c} if c != 0 else {}, False)

    def gen(self, g):
        i = g if isinstance(g, int) else self.index[g]
        mono = tuple(1 if j == i else 0 for j in range(len(self.gens)))
        return self.element([(1, mono)])

    def monomial_element(self, m, c=1):
        return self.element([(c, tuple(m))])

    # -- degree basis ------------------------------------------------------

    def degree_basis(self, t, cap=None):
        """All normal-form monomials of degree exactly t and weight <= cap
        (default: the truncation bound), in deterministic order."""
        key = (t, cap)
        cached = self._basis_cache.get(key)
        if cached is not None:
            return cached
        n = len(self.gens)
        inv_free = []
        bounded = []  # (index, range-limit or None for weight-bounded free)
        for i in range(n):
            rule = self.rules.get(i)
            if rule is not None:
                if rule.power == 1:
                    bounded.append((i, 1))
                else:
                    bounded.append((i, rule.power))
            elif i in self.inverted:
                inv_free.append(i)
            else:
                d = self.degrees[i]
                if d <= 0:
                    raise InfiniteBasis(
                        f"free non-inverted generator {self.names[i]} of degree {d}"
                    )
                bounded.append((i, None))
        if len(inv_free) > 1:
            raise InfiniteBasis("two or more inverted generators")
        if inv_free and self.degrees[inv_free[0]] == 0:
            raise InfiniteBasis(
                f"inverted degree-0 generator {self.names[inv_free[0]]}"
            )
        D = self.truncation if cap is None else min(cap, self.truncation)
        result = []

        def rec(pos, expo, wt, deg):
            if pos == len(bounded):
                if inv_free:
                    i0 = inv_free[0]
                    d0 = self.degrees[i0]
                    rem = t - deg
                    if rem % d0 == 0:
                        expo[i0] = rem // d0
                        result.append(tuple(expo))
                        expo[i0] = 0
                elif deg == t:
                    result.append(tuple(expo))
                return
            i, lim = bounded[pos]
            d = self.degrees[i]
            e = 0
            while True:
                if lim is not None and e >= max(lim, 1):
                    break
                w = wt + e * d if d > 0 else wt
                if d > 0 and w > D:
                    break
                if lim is None and d <= 0:
                    break  # unreachable by construction
                expo[i] = e
                rec(pos + 1, expo, wt + e * d, deg + e * d)
                expo[i] = 0
                e += 1
                if lim is None and e * d > D:
                    break

        rec(0, [0] * n, 0, 0)
        result = sorted(set(result))
        self._basis_cache[key] = result
        return result

    # -- misc --------------------------------------------------------------

    def format_monomial(self, m):
        parts = []
        for i, e in enumerate(m):
            if e == 0:
                continue
            if e == 1:
                parts.append(self.names[i])
            else:
                parts.append(f"{self.names[i]}^{e}")
        return "*".join(parts) if parts else "1"

    def fingerprint(self):
        rules = sorted(
            (i, r.power, tuple(sorted((str(c), m) for c, m in r.rhs)))
            for i, r in self.rules.items()
        )
        return (
            self.mode.kind,
            self.mode.p,
            self.gens,
            tuple(rules),
            tuple(sorted(self.inverted)),
            self.truncation,
        )

    def __repr__(self):
        label = self.name or "presentation"
        return f"<{label}: {len(self.gens)} gens, {self.mode.kind}>"


class Element:
    """A normal-form element of a GradedPresentation."""

    __slots__ = ("pres", "terms", "truncated")

    def __init__(self, pres, terms, truncated=False):
        self.pres = pres
        self.terms = terms
        self.truncated = truncated

    def _check(self, other):
        if self.pres is not other.pres:
            raise PresentationMismatch(
                f"{self.pres!r} vs {other.pres!r}"
            )

    def __add__(self, other):
        self._check(other)
        mode = self.pres.mode
        terms = dict(self.terms)
        for m, c in other.terms.items():
            acc = terms.get(m)
            if acc is None:
                terms[m] = c
            else:
                s = mode.add(acc, c)
                if s == 0:
                    del terms[m]
                else:
                    terms[m] = s
        return Element(self.pres, terms, self.truncated or other.truncated)

    def __neg__(self):
        mode = self.pres.mode
        return Element(
            self.pres, {m: mode.neg(c) for m, c in self.terms.items()}, self.truncated
        )

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Element):
            return self.scale(other)
        self._check(other)
        mode = self.pres.mode
        raw = []
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                res = self.pres._mul_mono(m1, m2)
                if res is None:
                    continue
                sgn, mono = res
                c = mode.mul(c1, c2)
                if sgn < 0:
                    c = mode.neg(c)
                raw.append((c, mono))
        terms, trunc = self.pres.normalize_terms(raw)
        return Element(self.pres, terms, self.truncated or other.truncated or trunc)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c):
        mode = self.pres.mode
        c = mode.coerce(c)
        if c == 0:
            return Element(self.pres, {}, self.truncated)
        return Element(
            self.pres, {m: mode.mul(cc, c) for m, cc in self.terms.items()}, self.truncated
        )

    def __pow__(self, e):
        if e < 0:
            inv = invert_element(self)
            if inv is None:
                raise SolveFailure("element is not a unit")
            return inv ** (-e)
        result = self.pres.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base_needed = e >> 1
            if base_needed:
                base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.pres is other.pres and self.terms == other.terms

    def __hash__(self):
        return hash((id(self.pres), tuple(sorted(self.terms.items(), key=lambda kv: kv[0]))))

    def is_zero(self):
        return not self.terms

    def degree(self):
        """Degree of a homogeneous element; DegreeError if mixed, None if 0."""
        degs = {self.pres.monomial_degree(m) for m in self.terms}
        if not degs:
            return None
        if len(degs) > 1:
            raise DegreeError(f"inhomogeneous element {self}")
        return degs.pop()

    def coefficient(self, m):
        return self.terms.get(tuple(m), 0)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0])

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mono = self.pres.format_monomial(m)
            if mono == "1":
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)


def invert_element(x):
    """Inverse of a homogeneous unit, or None.

    Fast path: a single term whose monomial only involves inverted
    generators.  Otherwise solve u*x = 1 by linear algebra on the degree
    basis of degree -deg(x)."""
    P = x.pres
    if x.is_zero():
        return None
    if len(x.terms) == 1:
        (m, c), = x.terms.items()
        if all(e == 0 or i in P.inverted for i, e in enumerate(m)):
            try:
                cinv = P.mode.inv(c)
            except (SolveFailure, ZeroDivisionError):
                return None
            return P.monomial_element(tuple(-e for e in m), cinv)
    try:
        d = x.degree()
    except DegreeError:
        return None
    if d is None:
        d = 0
    try:
        cand = P.degree_basis(-d)
        target_basis = P.degree_basis(0)
    except InfiniteBasis:
        return None
    if not cand:
        return None
    # columns: products x * b_j expanded over the degree-0 basis
    from . import linalg

    pos = {m: r for r, m in enumerate(target_basis)}
    rows = len(target_basis)
    mat = [[0] * len(cand) for _ in range(rows)]
    for j, b in enumerate(cand):
        prod = x * P.monomial_element(b)
        for m, c in prod.terms.items():
            if m not in pos:
                return None
            mat[pos[m]][j] = c
    unit = (0,) * len(P.gens)
    if unit not in pos:
        return None
    rhs = [1 if r == pos[unit] else 0 for r in range(rows)]
    sol = linalg.solve(mat, rhs, P.mode)
    if sol is None:
        return None
    out = P.zero()
    for j, b in enumerate(cand):
        if sol[j] != 0:
            out = out + P.monomial_element(b, sol[j])
    return out


class RingMorphism:
    """A degree-preserving algebra map given by generator images."""

    def __init__(self, source, target, images, name="", check_degrees=True):
        self.source = source
        self.target = target
        self.images = tuple(images)
        self.name = name
        if len(self.images) != len(source.gens):
            raise ValueError("one image per source generator required")
        if check_degrees:
            for (gname, gdeg), img in zip(source.gens, self.images):
                if img.is_zero():
                    continue
                if img.degree() != gdeg:
                    raise DegreeError(
                        f"image of {gname} has degree {img.degree()}, expected {gdeg}"
                    )
        self._inv_cache = {}

    def image(self, g):
        i = g if isinstance(g, int) else self.source.index[g]
        return self.images[i]

    def __call__(self, elem):
        if elem.pres is not self.source:
            raise PresentationMismatch("element not in the morphism's source")
        out = self.target.zero()
        for m, c in elem.terms.items():
            prod = self.target.scalar(c)
            for i, e in enumerate(m):
                if e == 0:
                    continue
                if e > 0:
                    prod = prod * (self.images[i] ** e)
                else:
                    inv = self._inv_cache.get(i)
                    if inv is None:
                        inv = invert_element(self.images[i])
                        if inv is None:
                            raise SolveFailure(
                                f"image of {self.source.names[i]} is not a unit"
                            )
                        self._inv_cache[i] = inv
                    prod = prod * (inv ** (-e))
            out = out + prod
        if elem.truncated:
            out = Element(self.target, out.terms, True)
        return out

    def compose(self, inner):
        """self o inner."""
        if inner.target is not self.source:
            raise PresentationMismatch("composition mismatch")
        return RingMorphism(
            inner.source,
            self.target,
            [self(img) for img in inner.images],
            name=f"{self.name}o{inner.name}",
            check_degrees=False,
        )

    def __repr__(self):
        return f"<morphism {self.name or '?'}: {self.source!r} -> {self.target!r}>"


def identity_morphism(P):
    return RingMorphism(P, P, [P.gen(i) for i in range(len(P.gens))], name="id")


# -- spec-level operation wrappers ----------------------------------------


def normalize(raw, P):
    return P.element(raw)


def add(a, b):
    return a + b


def mul(a, b):
    return a * b


def apply(phi, a):
    return phi(a)


def degree_basis(P, t):
    return P.degree_basis(t)


def check_morphism(phi, bound=None):
    """Verify degree preservation and relation compatibility up to bound."""
    v = Verdict()
    src, tgt = phi.source, phi.target
    if bound is None:
        bound = min(src.truncation, tgt.truncation)
    for (gname, gdeg), img in zip(src.gens, phi.images):
        if img.is_zero():
            continue
        try:
            d = img.degree()
        except DegreeError:
            v.fail(f"image of {gname} inhomogeneous")
            continue
        if d != gdeg:
            v.fail(f"image of {gname} has degree {d}, expected {gdeg}")
    for i, rule in src.rules.items():
        lhs_deg = rule.power * src.degrees[i]
        if abs(lhs_deg) > bound:
            continue
        lhs = phi.images[i] ** rule.power
        rhs = tgt.zero()
        for c, m in rule.rhs:
            term = tgt.scalar(c)
            for j, e in enumerate(m):
                if e:
                    term = term * (phi.images[j] ** e)
            rhs = rhs + term
        if not (lhs - rhs).is_zero():
            v.fail(
                f"relation on {src.names[i]}^{rule.power} violated: "
                f"{lhs - rhs!r}"
            )
    for i in src.inverted:
        if invert_element(phi.images[i]) is None:
            v.fail(f"image of inverted generator {src.names[i]} is not a unit")
    return v


def assert_p_integral(elem, p):
    """Check denominators are coprime to p (plocal mode boundary assertion)."""
    for m, c in elem.terms.items():
        if isinstance(c, Fraction) and c.denominator % p == 0:
            raise IntegralityFailure(
                f"coefficient {c} of {elem.pres.format_monomial(m)} not {p}-integral"
            )
    return elem


def reduce_mod(elem, target):
    """Reinterpret an element in a presentation with the same generator list
    (possibly different mode/rules) and normalize there."""
    if len(target.gens) != len(elem.pres.gens):
        raise PresentationMismatch("generator count mismatch")
    return target.element(list((c, m) for m, c in elem.terms.items()))
