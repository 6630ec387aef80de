"""Reduced cobar complex and Ext dimension tables.

C^s = Gbar^{(x)_A s} (x)_A M, where Gbar is the positive part of Gamma
(the complement of the eta_L-unit); a basis in internal degree t consists
of keys (a, w_1|...|w_s, m) with `a` an A-monomial, each w_i a nonempty
monomial in the morphism generators, and m a module generator.  The
scalar coefficients (powers of inverted generators and the like) are
folded into the monomial enumeration so every bidegree is a finite
F_p-vector space; dimensions come from exact Gaussian elimination.

The differential is the alternating sum of the reduced diagonals applied
in each slot plus the reduced coaction on the module slot; A-coefficients
produced inside a slot slide left through the balanced tensor relation
(gamma (x) a*x = gamma*eta_R(a) (x) x) until they reach the outer
A-coefficient, which multiplies the first slot through eta_L.  Keys with
an empty slot are degenerate and are projected away.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from . import linalg
from .errors import DegreeError, InfiniteBasis, Verdict
from .presentation import invert_element


def _neg_pow(i):
    return -1 if i % 2 else 1


class CobarComplex:
    """Bases and differentials of the reduced cobar complex of H with
    coefficients in the comodule M (default: the unit comodule)."""

    def __init__(self, H, M=None, s_max=3, t_min=-32, t_max=32):
        if H.Gamma.mode.kind != "fp":
            raise DegreeError(
                "cobar dimensions need a prime-field coefficient mode"
            )
        self.p = H.Gamma.mode.p
        if self.p != 2:
            for _, d in H.Gamma.gens:
                if d % 2:
                    raise DegreeError(
                        "odd generator degrees need characteristic 2"
                    )
        self.H = H
        if M is None:
            from .comodule import unit_comodule

            M = unit_comodule(H)
        if M.H is not H:
            raise DegreeError("comodule is not over this algebroid")
        self.M = M
        self.s_max = s_max
        self.t_min = t_min
        self.t_max = t_max
        self.D = H.Gamma.truncation
        # nonempty morphism monomials, grouped and deterministic
        self.reduced_monos = [
            w for w in H.morphism_monomials() if any(w)
        ]
        self.reduced_monos.sort()
        self._basis_cache = {}
        self._matrix_cache = {}
        self._dbar_cache = {}
        self._etaR_gen = None
        self._etaR_inv = {}
        self._psi_reduced = {
            g: sorted(
                (other, gamma)
                for other, gamma in M.psi[g].items()
            )
            for g, _ in M.gens
        }

    # -- helpers ----------------------------------------------------------

    def _mor_weight(self, w):
        G = self.H.Gamma
        return sum(e * G.degrees[i] for i, e in enumerate(w) if e)

    def _etaR_monomial(self, a_mono):
        """eta_R of an A-monomial, computed from generator images so the
        monomial may lie beyond A's own truncation boundary."""
        H = self.H
        if self._etaR_gen is None:
            self._etaR_gen = [
                H.etaR(H.A.gen(i)) for i in range(len(H.A.gens))
            ]
        prod = H.Gamma.one()
        for i, e in enumerate(a_mono):
            if e == 0:
                continue
            if e > 0:
                prod = prod * (self._etaR_gen[i] ** e)
            else:
                inv = self._etaR_inv.get(i)
                if inv is None:
                    inv = invert_element(self._etaR_gen[i])
                    if inv is None:
                        raise InfiniteBasis(
                            f"eta_R({H.A.names[i]}) is not invertible"
                        )
                    self._etaR_inv[i] = inv
                prod = prod * (inv ** (-e))
        return prod

    def _etaL_monomial(self, a_mono):
        G = self.H.Gamma
        mono = [0] * len(G.gens)
        for i, e in enumerate(a_mono):
            mono[i] = e
        return G.monomial_element(tuple(mono))

    def _split_gamma_mono(self, mono):
        """Split a Gamma-monomial into (A-exponents, morphism exponents);
        base generators mirror A's generators in order."""
        H = self.H
        base = getattr(self, "_base_indices", None)
        if base is None:
            base = [
                i
                for i in range(len(H.Gamma.gens))
                if i not in H.morphism_gens
            ]
            self._base_indices = base
        a = tuple(mono[i] for i in base)
        w = [0] * len(H.Gamma.gens)
        for i in H.morphism_order:
            w[i] = mono[i]
        return a, tuple(w)

    def _dbar(self, w):
        """Reduced diagonal of a morphism monomial, as a list of
        (coefficient, left Gamma-element, right Gamma-monomial) triples."""
        got = self._dbar_cache.get(w)
        if got is not None:
            return got
        H = self.H
        ts = H.ts
        elem = H.Gamma.monomial_element(w)
        D = H.delta(elem) - ts.incl_l(elem) - ts.incl_r(elem)
        out = []
        for mono, c in sorted(D.terms.items()):
            base, left, right = ts.split_monomial(mono)
            lmono = [0] * len(H.Gamma.gens)
            for j, e in base.items():
                lmono[j] = e
            for j, e in left.items():
                lmono[j] = e
            rmono = [0] * len(H.Gamma.gens)
            for j, e in right.items():
                rmono[j] = e
            out.append(
                (c, H.Gamma.monomial_element(tuple(lmono)), tuple(rmono))
            )
        self._dbar_cache[w] = out
        return out

    # -- bases ------------------------------------------------------------

    def basis(self, s, t):
        """Deterministic basis of C^s in internal degree t: sorted keys
        (a_monomial, word tuple, module generator name)."""
        key = (s, t)
        got = self._basis_cache.get(key)
        if got is not None:
            return got
        H, A = self.H, self.H.A
        out = []
        words = [((), 0, 0)]
        for _ in range(s):
            grown = []
            for wt, wdeg, wwt in words:
                for w in self.reduced_monos:
                    ww = self._mor_weight(w)
                    if wwt + ww > self.D:
                        continue
                    grown.append(
                        (wt + (w,), wdeg + H.Gamma.monomial_degree(w), wwt + ww)
                    )
            words = grown
        for word, wdeg, wwt in words:
            for mgen, mdeg in self.M.gens:
                trem = t - wdeg - mdeg
                for a in A.degree_basis(trem, self.D - wwt):
                    out.append((a, word, mgen))
        out.sort()
        self._basis_cache[key] = out
        return out

    # -- the differential -------------------------------------------------

    def _reduce_word(self, coeff, outer, slots, mgen, acc):
        """Accumulate the canonical coordinates of
        eta_L(outer) * slots[0] (x) ... (x) slots[-1] (x) mgen into acc."""
        p = self.p
        if not slots:
            for a_mono in (outer,):
                k = (a_mono, (), mgen)
                acc[k] = (acc.get(k, 0) + coeff) % p
            return
        # slide A-coefficients leftwards, branch per monomial
        branches = [(coeff, (), None)]
        for i in range(len(slots) - 1, 0, -1):
            new = []
            for c, ws, carry in branches:
                g = slots[i] if carry is None else slots[i] * carry
                for mono, cc in g.terms.items():
                    a_part, w_part = self._split_gamma_mono(mono)
                    if not any(w_part):
                        continue  # degenerate slot
                    new.append(
                        (
                            c * int(cc) % p,
                            (w_part,) + ws,
                            self._etaR_monomial(a_part),
                        )
                    )
            branches = new
        for c, ws, carry in branches:
            g = slots[0]
            if carry is not None:
                g = g * carry
            if outer is not None:
                g = self._etaL_monomial(outer) * g
            for mono, cc in g.terms.items():
                a_part, w_part = self._split_gamma_mono(mono)
                if not any(w_part):
                    continue
                k = (a_part, (w_part,) + ws, mgen)
                acc[k] = (acc.get(k, 0) + c * int(cc)) % p

    def d_of_key(self, key):
        """The differential of one basis key, as canonical coordinates."""
        a, word, mgen = key
        H = self.H
        s = len(word)
        acc = {}
        word_elems = [H.Gamma.monomial_element(w) for w in word]
        if s >= 1 and any(a):
            # the outer coefficient's own face: the subtracted term
            # 1 (x) (a*w_1) reads the coefficient through eta_R, so d picks
            # up sign_1 * (eta_L(a) - eta_R(a)) (x) w_1 (x) ...; the
            # eta_L(a) part is degenerate and drops in reduction
            self._reduce_word(
                1, None,
                [self._etaR_monomial(a)] + word_elems,
                mgen, acc,
            )
        for i in range(1, s + 1):
            sign = _neg_pow(i)
            for c, lelem, rmono in self._dbar(word[i - 1]):
                if not any(rmono):
                    continue
                slots = (
                    word_elems[: i - 1]
                    + [lelem, H.Gamma.monomial_element(rmono)]
                    + word_elems[i:]
                )
                self._reduce_word(
                    sign * int(c) % self.p, a, slots, mgen, acc
                )
        sign = _neg_pow(s + 1)
        for other, gamma in self._psi_reduced[mgen]:
            self._reduce_word(sign, a, word_elems + [gamma], other, acc)
        if s == 0:
            # the subtracted unit term 1 (x) (a*m) = eta_R(a) (x) m is not
            # degenerate when a carries a coefficient
            self._reduce_word(
                -sign % self.p, None, [self._etaR_monomial(a)], mgen, acc
            )
        return {k: v for k, v in acc.items() if v % self.p}

    def differential(self, s, t):
        """Matrix of d: C^{s,t} -> C^{s+1,t} in the deterministic bases
        (rows = target basis, columns = source basis)."""
        key = (s, t)
        got = self._matrix_cache.get(key)
        if got is not None:
            return got
        src = self.basis(s, t)
        tgt = self.basis(s + 1, t)
        pos = {k: i for i, k in enumerate(tgt)}
        mat = [[0] * len(src) for _ in range(len(tgt))]
        for j, k in enumerate(src):
            for outk, c in self.d_of_key(k).items():
                r = pos.get(outk)
                if r is None:
                    raise AssertionError(
                        f"differential leaves the enumerated basis at {outk}"
                    )
                mat[r][j] = c
        self._matrix_cache[key] = mat
        return mat

    def d_squared_is_zero(self, s, t):
        d0 = self.differential(s, t)
        d1 = self.differential(s + 1, t)
        if not d0 or not d0[0] or not d1:
            return True
        p = self.p
        for j in range(len(d0[0])):
            col = [row[j] for row in d0]
            out = [
                sum(d1[r][k] * col[k] for k in range(len(col))) % p
                for r in range(len(d1))
            ]
            if any(out):
                return False
        return True

    def ext_dim(self, s, t):
        """dim Ext^{s,t} = dim ker d_{s,t} - rank d_{s-1,t}."""
        d_out = self.differential(s, t)
        n = len(self.basis(s, t))
        rank_out = linalg.rank_fp(d_out, self.p) if n and d_out else 0
        ker = n - rank_out
        if s == 0:
            return ker
        d_in = self.differential(s - 1, t)
        rank_in = (
            linalg.rank_fp(d_in, self.p) if d_in and d_in[0] else 0
        )
        return ker - rank_in

    def key_weight(self, key):
        a, word, _ = key
        return self.H.A.weight(a) + sum(self._mor_weight(w) for w in word)

    def ext_dim_stable(self, s, t, inner):
        """dim of the image H^{s,t}(C_{<=inner}) -> H^{s,t}(C).

        The differential never raises weight, so the keys of weight <=
        inner span a subcomplex; cocycles there that only bound once
        higher-weight cochains are available (truncation-boundary
        artifacts) are discarded by computing the image of the induced
        map on cohomology instead of the cohomology of either cap alone."""
        basis_s = self.basis(s, t)
        n = len(basis_s)
        if n == 0:
            return 0
        inner_cols = [
            j for j, k in enumerate(basis_s) if self.key_weight(k) <= inner
        ]
        d_out = self.differential(s, t)
        if d_out:
            sub = [[row[j] for j in inner_cols] for row in d_out]
        else:
            sub = []
        ker = linalg.kernel_basis_fp(sub, len(inner_cols), self.p)
        if s == 0:
            return len(ker)
        vecs = []
        for v in ker:
            full = [0] * n
            for idx, j in enumerate(inner_cols):
                full[j] = v[idx]
            vecs.append(full)
        d_in = self.differential(s - 1, t)
        bd = (
            [[d_in[i][j] for i in range(n)] for j in range(len(d_in[0]))]
            if d_in and d_in[0]
            else []
        )
        rank_b = linalg.rank_fp(bd, self.p) if bd else 0
        rank_zb = linalg.rank_fp(vecs + bd, self.p) if vecs or bd else 0
        return rank_zb - rank_b


@dataclass
class ExtTable:
    p: int
    s_max: int
    t_min: int
    t_max: int
    dims: dict  # (s, t) -> dimension
    source: str = ""

    def nonzero(self):
        return sorted(
            ((s, t), d) for (s, t), d in self.dims.items() if d
        )

    def to_csv(self):
        lines = ["s,t,dim"]
        for (s, t), d in self.nonzero():
            lines.append(f"{s},{t},{d}")
        return "\n".join(lines) + "\n"

    def to_dict(self):
        return {
            "schema": 1,
            "p": self.p,
            "s_max": self.s_max,
            "t_min": self.t_min,
            "t_max": self.t_max,
            "source": self.source,
            "dims": [
                {"s": s, "t": t, "dim": d} for (s, t), d in self.nonzero()
            ],
        }


def ext_dims(C, parallel=1, check_d2=False, inner=None):
    """The Ext dimension table on C's window.  With `inner` set, each
    entry is the stable-range dimension `ext_dim_stable(s, t, inner)`
    instead of the plain cap cohomology.  Bidegrees are independent jobs;
    assembly is ordered, so the result is identical at any parallelism
    degree."""
    jobs = [
        (s, t)
        for s in range(C.s_max + 1)
        for t in range(C.t_min, C.t_max + 1)
    ]
    if inner is None:
        one = lambda st: C.ext_dim(*st)
    else:
        one = lambda st: C.ext_dim_stable(st[0], st[1], inner)
    dims = {}
    if parallel > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=parallel) as pool:
            results = list(pool.map(one, jobs))
        for (s, t), d in zip(jobs, results):
            dims[(s, t)] = d
    else:
        for s, t in jobs:
            dims[(s, t)] = one((s, t))
    if check_d2:
        for s in range(C.s_max):
            for t in range(C.t_min, C.t_max + 1):
                if not C.d_squared_is_zero(s, t):
                    raise AssertionError(f"d^2 != 0 at (s,t)=({s},{t})")
    return ExtTable(
        C.p,
        C.s_max,
        C.t_min,
        C.t_max,
        dims,
        source=getattr(C.H, "name", "") or "",
    )


def compare_ext(T1, T2):
    """Bidegree-by-bidegree diff on the common window; empty = agreement."""
    if T1.p != T2.p:
        raise ValueError("tables at different primes")
    s_max = min(T1.s_max, T2.s_max)
    t_min = max(T1.t_min, T2.t_min)
    t_max = min(T1.t_max, T2.t_max)
    diffs = []
    for s in range(s_max + 1):
        for t in range(t_min, t_max + 1):
            a = T1.dims.get((s, t), 0)
            b = T2.dims.get((s, t), 0)
            if a != b:
                diffs.append((s, t, a, b))
    return diffs


def primitive_dims(H, t_min, t_max):
    """dim of the primitives {a in A_t : eta_R(a) = eta_L(a)} per degree,
    computed directly (the independent Ext^0 cross-check)."""
    p = H.Gamma.mode.p
    out = {}
    for t in range(t_min, t_max + 1):
        try:
            ab = H.A.degree_basis(t)
        except InfiniteBasis:
            raise
        if not ab:
            out[t] = 0
            continue
        gb = H.Gamma.degree_basis(t)
        pos = {m: i for i, m in enumerate(gb)}
        rows = []
        for a in ab:
            diff = H.etaR(H.A.monomial_element(a)) - H.etaL(
                H.A.monomial_element(a)
            )
            vec = [0] * len(gb)
            for m, c in diff.terms.items():
                vec[pos[m]] = int(c)
            rows.append(vec)
        rank = linalg.rank_fp(rows, p) if rows and rows[0] else 0
        out[t] = len(ab) - rank
    return out
