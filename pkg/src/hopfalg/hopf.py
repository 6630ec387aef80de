"""Hopf algebroids: the data type, bimodule tensor squares/cubes,
degreewise axiom verification, and point-level groupoid composition.

Conventions.  Gamma is required to be free as an A-algebra via eta_L on a
declared list of morphism generators; the remaining "base" generators of
Gamma must mirror A's generators by name, degree, and relations, and eta_L
must send each A-generator to its mirror.  The tensor square realizes
Gamma_{eta_R} (x)_A Gamma_{eta_L}: its generators are Gamma's plus a tagged
right copy of each morphism generator, and the right copy of a base
generator b rewrites to eta_R(b) in the left factor (the balanced
relation)."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    AxiomFailure,
    InfiniteBasis,
    NotComposable,
    NotFreeOverA,
    Verdict,
)
from .presentation import (
    Element,
    GradedPresentation,
    RingMorphism,
    Rule,
    check_morphism,
    identity_morphism,
)

R_TAG = "'"
M_TAG = "''"


def _embed_terms(elem, target, offset=0):
    """Reinterpret an element in a target presentation whose generator list
    starts with the source's generators (plus `offset` leading slots)."""
    pad = len(target.gens) - len(elem.pres.gens) - offset
    raw = []
    for m, c in elem.terms.items():
        raw.append((c, (0,) * offset + tuple(m) + (0,) * pad))
    out = target.element(raw)
    if elem.truncated:
        out = Element(target, out.terms, True)
    return out


def _extend_presentation(Gamma, morphism_gens, copy_tags, copy_images, name):
    """Build Gamma extended by tagged copies of its morphism generators.

    copy_images: for each tag, a function (built against the provisional
    presentation) sending a Gamma element to the copy's embedding; used to
    transport power-rule right-hand sides onto the copies."""
    gens = list(Gamma.gens)
    slots = {}
    for tag in copy_tags:
        for i in morphism_gens:
            slots[(tag, i)] = len(gens)
            gens.append((Gamma.names[i] + tag, Gamma.degrees[i]))
    pad = len(gens) - len(Gamma.gens)
    relations = {
        i: Rule(r.power, tuple((c, m + (0,) * pad) for c, m in r.rhs))
        for i, r in Gamma.rules.items()
    }
    inverted = set(Gamma.inverted)
    provisional = GradedPresentation(
        Gamma.mode, gens, relations, inverted, Gamma.truncation, name=name + "~"
    )
    copy_rules = {}
    for tag in copy_tags:
        embed = copy_images[tag](provisional, slots)
        for i in morphism_gens:
            rule = Gamma.rules.get(i)
            if rule is None:
                continue
            rhs_elem = embed(Gamma.element([(c, m) for c, m in rule.rhs]))
            copy_rules[slots[(tag, i)]] = (
                rule.power,
                [(c, m) for m, c in rhs_elem.terms.items()],
            )
    final_relations = dict(relations)
    final_relations.update(copy_rules)
    return (
        GradedPresentation(
            Gamma.mode, gens, final_relations, inverted, Gamma.truncation, name=name
        ),
        slots,
    )


class TensorSquare:
    """Gamma tensor_A Gamma with both inclusion morphisms."""

    def __init__(self, A, Gamma, morphism_gens, etaL, etaR, name="TS"):
        def right_images(provisional, slots):
            def embed(elem):
                # right inclusion: base gens move left through eta_R,
                # morphism gens become their tagged copies
                out = provisional.zero()
                for m, c in elem.terms.items():
                    term = provisional.scalar(c)
                    for i, e in enumerate(m):
                        if e == 0:
                            continue
                        if i in morphism_gens:
                            g = provisional.gen(slots[(R_TAG, i)])
                        else:
                            a = A.index[Gamma.names[i]]
                            g = _embed_terms(etaR(A.gen(a)), provisional)
                        term = term * (g ** e)
                    out = out + term
                return out

            return embed

        self.pres, self.slots = _extend_presentation(
            Gamma, morphism_gens, [R_TAG], {R_TAG: right_images}, name
        )
        self.Gamma = Gamma
        self.morphism_gens = tuple(morphism_gens)
        n = len(Gamma.gens)
        self.incl_l = RingMorphism(
            Gamma, self.pres, [self.pres.gen(i) for i in range(n)], name="incl_l"
        )
        r_images = []
        for i in range(n):
            if i in morphism_gens:
                r_images.append(self.pres.gen(self.slots[(R_TAG, i)]))
            else:
                a = A.index[Gamma.names[i]]
                r_images.append(_embed_terms(etaR(A.gen(a)), self.pres))
        self.incl_r = RingMorphism(Gamma, self.pres, r_images, name="incl_r")

    def split_monomial(self, m):
        """Split a tensor-square monomial into (A-part over base gens,
        left morphism part, right morphism part) exponent data."""
        Gamma = self.Gamma
        n = len(Gamma.gens)
        base, left, right = {}, {}, {}
        for i, e in enumerate(m):
            if e == 0:
                continue
            if i < n:
                if i in self.morphism_gens:
                    left[i] = e
                else:
                    base[i] = e
            else:
                right[self._slot_origin(i)] = e
        return base, left, right

    def _slot_origin(self, j):
        for (tag, i), s in self.slots.items():
            if s == j:
                return i
        raise KeyError(j)


class TensorCube:
    """Gamma tensor_A Gamma tensor_A Gamma, for coassociativity."""

    def __init__(self, A, Gamma, morphism_gens, etaL, etaR, name="TC"):
        def middle_images(provisional, slots):
            def embed(elem):
                out = provisional.zero()
                for m, c in elem.terms.items():
                    term = provisional.scalar(c)
                    for i, e in enumerate(m):
                        if e == 0:
                            continue
                        if i in morphism_gens:
                            g = provisional.gen(slots[(M_TAG, i)])
                        else:
                            a = A.index[Gamma.names[i]]
                            g = _embed_terms(etaR(A.gen(a)), provisional)
                        term = term * (g ** e)
                    out = out + term
                return out

            return embed

        def right_images(provisional, slots):
            middle = middle_images(provisional, slots)

            def embed(elem):
                out = provisional.zero()
                for m, c in elem.terms.items():
                    term = provisional.scalar(c)
                    for i, e in enumerate(m):
                        if e == 0:
                            continue
                        if i in morphism_gens:
                            g = provisional.gen(slots[(R_TAG, i)])
                        else:
                            a = A.index[Gamma.names[i]]
                            g = middle(etaR(A.gen(a)))
                        term = term * (g ** e)
                    out = out + term
                return out

            return embed

        self.pres, self.slots = _extend_presentation(
            Gamma,
            morphism_gens,
            [M_TAG, R_TAG],
            {M_TAG: middle_images, R_TAG: right_images},
            name,
        )
        self.Gamma = Gamma
        self.morphism_gens = tuple(morphism_gens)


class HopfAlgebroid:
    """The pair (A, Gamma) with structure maps eta_L, eta_R, eps, c, Delta.

    delta is supplied as generator images for the morphism generators only
    (raw (coeff, exponents) terms or Elements laid out in the tensor-square
    generator order); base generators get the forced image incl_l(gen)."""

    def __init__(self, A, Gamma, morphism_gens, etaL, etaR, eps, c, delta_images, name=""):
        self.A = A
        self.Gamma = Gamma
        self.name = name
        self.morphism_order = tuple(
            sorted(g if isinstance(g, int) else Gamma.index[g] for g in morphism_gens)
        )
        self.morphism_gens = frozenset(self.morphism_order)
        self._check_alignment(etaL)
        self.etaL = etaL
        self.etaR = etaR
        self.eps = eps
        self.c = c
        self.ts = TensorSquare(
            A, Gamma, self.morphism_order, etaL, etaR, name=(name or "H") + ".TS"
        )
        images = []
        for i in range(len(Gamma.gens)):
            if i in self.morphism_gens:
                img = delta_images[Gamma.names[i]]
                if isinstance(img, Element):
                    img = self.ts.pres.element(
                        [(cc, m) for m, cc in img.terms.items()]
                    )
                else:
                    img = self.ts.pres.element(img)
                images.append(img)
            else:
                images.append(self.ts.incl_l(Gamma.gen(i)))
        self.delta = RingMorphism(Gamma, self.ts.pres, images, name="delta")
        self._tc = None

    def _check_alignment(self, etaL):
        base = [i for i in range(len(self.Gamma.gens)) if i not in self.morphism_gens]
        if len(base) != len(self.A.gens):
            raise NotFreeOverA(
                "base generators of Gamma do not match A's generators"
            )
        for a, i in enumerate(base):
            if self.Gamma.gens[i] != self.A.gens[a]:
                raise NotFreeOverA(
                    f"generator mismatch: {self.Gamma.gens[i]} vs {self.A.gens[a]}"
                )
            if etaL(self.A.gen(a)) != self.Gamma.gen(i):
                raise NotFreeOverA(
                    f"eta_L must send {self.A.names[a]} to its mirror in Gamma"
                )

    @property
    def tc(self):
        if self._tc is None:
            self._tc = TensorCube(
                self.A,
                self.Gamma,
                self.morphism_order,
                self.etaL,
                self.etaR,
                name=(self.name or "H") + ".TC",
            )
        return self._tc

    # -- module-basis enumeration (freeness over A via eta_L) -----------

    def morphism_monomials(self, degree=None, weight_cap=None):
        """Exponent vectors over the morphism generators (power-rule
        bounded) with total weight <= cap; if degree is given, restrict to
        that degree.  Returns full-width exponent tuples over Gamma."""
        Gamma = self.Gamma
        cap = Gamma.truncation if weight_cap is None else weight_cap
        order = self.morphism_order
        for i in order:
            if Gamma.degrees[i] <= 0 and Gamma.rules.get(i) is None:
                raise InfiniteBasis(
                    f"morphism generator {Gamma.names[i]} of nonpositive degree"
                )
        out = []

        def rec(pos, expo, wt, deg):
            if pos == len(order):
                if degree is None or deg == degree:
                    out.append(tuple(expo))
                return
            i = order[pos]
            d = Gamma.degrees[i]
            rule = Gamma.rules.get(i)
            lim = rule.power if rule is not None else None
            e = 0
            while True:
                if lim is not None and e >= lim:
                    break
                w = wt + e * d
                if w > cap:
                    break
                full = [0] * len(Gamma.gens)
                expo[i] = e
                rec(pos + 1, expo, w, deg + e * d)
                expo[i] = 0
                e += 1

        rec(0, [0] * len(Gamma.gens), 0, 0)
        return sorted(out)

    def check_freeness(self, bound):
        """Per-degree rank check that Gamma is A-free on the morphism
        monomials (weight-aware)."""
        v = Verdict()
        words = self.morphism_monomials()
        by_deg = {}
        for w in words:
            d = self.Gamma.monomial_degree(w)
            by_deg.setdefault(d, []).append(w)
        for t in range(-bound, bound + 1):
            try:
                gamma_count = len(self.Gamma.degree_basis(t))
            except InfiniteBasis:
                v.fail(f"Gamma basis infinite in degree {t}")
                continue
            count = 0
            for d, ws in by_deg.items():
                for w in ws:
                    wt = self.Gamma.weight(w)
                    try:
                        count += len(
                            self.A.degree_basis(t - d, self.Gamma.truncation - wt)
                        )
                    except InfiniteBasis:
                        v.fail(f"A basis infinite in degree {t - d}")
                        return v
            if count != gamma_count:
                v.fail(
                    f"freeness rank mismatch in degree {t}: "
                    f"Gamma has {gamma_count}, A-basis x words gives {count}"
                )
        return v


def tensor_square(H):
    return H.ts


def check_hopf_axioms(H, bound):
    """Verify the Hopf algebroid identities on all generators of degree
    <= bound (in absolute value)."""
    v = Verdict()
    A, Gamma = H.A, H.Gamma
    ts, tc = H.ts, H.tc
    incl_l, incl_r = ts.incl_l, ts.incl_r
    n = len(Gamma.gens)

    # counit composites eps . eta = id on A-generators
    for a in range(len(A.gens)):
        if abs(A.degrees[a]) > bound:
            continue
        ga = A.gen(a)
        if H.eps(H.etaL(ga)) != ga:
            v.fail(f"eps.etaL != id at {A.names[a]}")
        if H.eps(H.etaR(ga)) != ga:
            v.fail(f"eps.etaR != id at {A.names[a]}")

    # TS -> Gamma evaluation morphisms
    def ts_map(l_image, r_image, name):
        images = []
        for i in range(n):
            images.append(l_image(i))
        for i in H.morphism_order:
            images.append(r_image(i))
        return RingMorphism(ts.pres, Gamma, images, name=name, check_degrees=False)

    eps1 = ts_map(
        lambda i: H.etaL(H.eps(Gamma.gen(i))),
        lambda i: Gamma.gen(i),
        "eps@1",
    )
    one_eps = ts_map(
        lambda i: Gamma.gen(i),
        lambda i: H.etaR(H.eps(Gamma.gen(i))),
        "1@eps",
    )
    mu_1c = ts_map(
        lambda i: Gamma.gen(i),
        lambda i: H.c(Gamma.gen(i)),
        "mu(1@c)",
    )
    mu_c1 = ts_map(
        lambda i: H.c(Gamma.gen(i)),
        lambda i: Gamma.gen(i),
        "mu(c@1)",
    )

    # TS -> TC maps for coassociativity
    def retag(elem, tag_map):
        """Transport a TS element into TC, retagging the right copy."""
        out = tc.pres.zero()
        for m, c in elem.terms.items():
            term = tc.pres.scalar(c)
            for i, e in enumerate(m):
                if e == 0:
                    continue
                if i < n:
                    g = tc.pres.gen(tag_map["l"](i))
                else:
                    g = tc.pres.gen(tag_map["r"](ts._slot_origin(i)))
                term = term * (g ** e)
            out = out + term
        return out

    def delta_left(elem):
        """(Delta (x) 1) of a TS element."""
        out = tc.pres.zero()
        for m, c in elem.terms.items():
            term = tc.pres.scalar(c)
            for i, e in enumerate(m):
                if e == 0:
                    continue
                if i < n:
                    # Delta of the left factor, landing in slots 1-2
                    img = retag(
                        H.delta(Gamma.gen(i)),
                        {
                            "l": lambda j: j,
                            "r": lambda j: tc.slots[(M_TAG, j)],
                        },
                    )
                else:
                    img = tc.pres.gen(tc.slots[(R_TAG, ts._slot_origin(i))])
                term = term * (img ** e)
            out = out + term
        return out

    def delta_right(elem):
        """(1 (x) Delta) of a TS element."""
        out = tc.pres.zero()
        for m, c in elem.terms.items():
            term = tc.pres.scalar(c)
            for i, e in enumerate(m):
                if e == 0:
                    continue
                if i < n:
                    img = tc.pres.gen(i)
                else:
                    orig = ts._slot_origin(i)
                    # Delta of the right factor lands in slots 2-3; a base
                    # gen in the middle slot acts on slot 1 through eta_R
                    img = tc.pres.zero()
                    for m2, c2 in H.delta(Gamma.gen(orig)).terms.items():
                        t2 = tc.pres.scalar(c2)
                        for j, e2 in enumerate(m2):
                            if e2 == 0:
                                continue
                            if j < n:
                                if j in H.morphism_gens:
                                    g = tc.pres.gen(tc.slots[(M_TAG, j)])
                                else:
                                    a = A.index[Gamma.names[j]]
                                    g = _embed_terms(H.etaR(A.gen(a)), tc.pres)
                            else:
                                g = tc.pres.gen(
                                    tc.slots[(R_TAG, ts._slot_origin(j))]
                                )
                            t2 = t2 * (g ** e2)
                        img = img + t2
                term = term * (img ** e)
            out = out + term
        return out

    for i in range(n):
        if abs(Gamma.degrees[i]) > bound:
            continue
        g = Gamma.gen(i)
        dg = H.delta(g)
        if eps1(dg) != g:
            v.fail(f"(eps@1)Delta != id at {Gamma.names[i]}: {eps1(dg)!r}")
        if one_eps(dg) != g:
            v.fail(f"(1@eps)Delta != id at {Gamma.names[i]}: {one_eps(dg)!r}")
        lhs = delta_left(dg)
        rhs = delta_right(dg)
        if lhs != rhs:
            v.fail(
                f"coassociativity fails at {Gamma.names[i]}: "
                f"{(lhs - rhs)!r}"
            )
        if H.c(H.c(g)) != g:
            v.fail(f"c.c != id at {Gamma.names[i]}")
        lhs = mu_1c(dg)
        rhs = H.etaL(H.eps(g))
        if lhs != rhs:
            v.fail(f"mu(1@c)Delta != etaL.eps at {Gamma.names[i]}: {(lhs-rhs)!r}")
        lhs = mu_c1(dg)
        rhs = H.etaR(H.eps(g))
        if lhs != rhs:
            v.fail(f"mu(c@1)Delta != etaR.eps at {Gamma.names[i]}: {(lhs-rhs)!r}")

    for a in range(len(A.gens)):
        if abs(A.degrees[a]) > bound:
            continue
        ga = A.gen(a)
        if H.delta(H.etaL(ga)) != incl_l(H.etaL(ga)):
            v.fail(f"Delta.etaL != incl_l.etaL at {A.names[a]}")
        if H.delta(H.etaR(ga)) != incl_r(H.etaR(ga)):
            v.fail(f"Delta.etaR != incl_r.etaR at {A.names[a]}")
        if H.c(H.etaL(ga)) != H.etaR(ga):
            v.fail(f"c.etaL != etaR at {A.names[a]}")
        if H.c(H.etaR(ga)) != H.etaL(ga):
            v.fail(f"c.etaR != etaL at {A.names[a]}")
    return v


def identity_point(H, x):
    """The identity morphism-point of an object-point x: A -> R."""
    return x.compose(H.eps)


def compose_points(H, beta, alpha):
    """mu . (alpha (x) beta) . Delta, defined when cod(alpha) = dom(beta)."""
    for a in range(len(H.A.gens)):
        ga = H.A.gen(a)
        if alpha(H.etaR(ga)) != beta(H.etaL(ga)):
            raise NotComposable(
                f"cod(alpha) != dom(beta) at generator {H.A.names[a]}"
            )
    R = alpha.target
    images = list(alpha.images)
    for i in H.morphism_order:
        images.append(beta.images[i])
    mu_ab = RingMorphism(H.ts.pres, R, images, name="mu_ab", check_degrees=False)
    return RingMorphism(
        H.Gamma,
        R,
        [mu_ab(H.delta(H.Gamma.gen(i))) for i in range(len(H.Gamma.gens))],
        name="compose",
        check_degrees=False,
    )


def invert_point(H, alpha):
    return alpha.compose(H.c)
