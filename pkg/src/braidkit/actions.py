"""Actions of the q-conformal generators on q-spacetime and the identities they obey.

Every generator acts on normal words of the covector algebra:

* ``p^i`` as a braided derivative (lowers degree),
* ``l+^i_j``, ``l-^i_j`` and the dilaton as degree-preserving maps,
* ``c_i`` as an R-commutator (raises degree).

Each action is memoized per basis word and extended linearly.  Operator
identities are verified by evaluating both sides on every normal word up to a
degree cap.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from . import ncalg
from .ncalg import NCAlgebra, NCPoly, Terms, Word, _add_into
from .qcoeff import ONE, QDIFF, PoleError, QRat, eval_q1, q
from .report import VerificationReport, timed
from .rtensor import MetricData, PairData, RMatrixData, find_metric, identity_rmatrix

Operator = Callable[[NCPoly], NCPoly]


class ActionError(ArithmeticError):
    pass


def _index(R: RMatrixData, key_slots: Tuple[int, ...], val_slots: Tuple[int, ...]) -> dict:
    out: dict = {}
    for idx, v in R.entries.items():
        out.setdefault(tuple(idx[s] for s in key_slots), []).append(tuple(idx[s] for s in val_slots) + (v,))
    return out


class _CommutatorFamily:
    """c_i acting as the R-commutator built from one braiding matrix."""

    def __init__(self, ctx: "ActionContext", R: RMatrixData):
        self.ctx = ctx
        self.R = R
        self.lower = R.by_lower()  # (s, t) -> [(l', k', v)] for entry (l', s, k', t)
        self._closed: Dict[Tuple[int, Word], Terms] = {}
        self._rec: Dict[Tuple[int, Word], Terms] = {}

    def closed(self, i: int, w: Word) -> Terms:
        """(w x_i - (PR)_12 ... (PR)_{d,d+1} w x_i) / (q - q^-1), reduced."""
        key = (i, w)
        hit = self._closed.get(key)
        if hit is not None:
            return hit
        if not w:
            self._closed[key] = {}
            return {}
        vec: Dict[Word, QRat] = {w + (i,): ONE}
        for k in range(len(w) - 1, -1, -1):
            nxt: Dict[Word, QRat] = {}
            for word, c in vec.items():
                for lp, kp, v in self.lower.get((word[k], word[k + 1]), ()):
                    _add_into(nxt, word[:k] + (kp, lp) + word[k + 2:], c * v)
            vec = nxt
        raw = {word: -c for word, c in vec.items()}
        _add_into(raw, w + (i,), ONE)
        out = self.ctx.divide_braided(self.ctx.alg.reduce(raw)).terms
        self._closed[key] = out
        return out

    def recursive(self, i: int, w: Word) -> Terms:
        """Right braided derivation: c_i(w x_j) = w (c_i x_j) + R^m_j^s_i (c_s w) x_m."""
        key = (i, w)
        hit = self._rec.get(key)
        if hit is not None:
            return hit
        alg = self.ctx.alg
        if not w:
            out: Terms = {}
        elif len(w) == 1:
            out = self.closed(i, w)
        else:
            head, j = w[:-1], w[-1]
            raw: Terms = {}
            for v, c in self.closed(i, (j,)).items():
                _add_into(raw, head + v, c)
            for m, s, r in self.lower.get((j, i), ()):
                for v, c in self.recursive(s, head).items():
                    _add_into(raw, v + (m,), r * c)
            out = alg.reduce(raw).terms
        self._rec[key] = out
        return out


class ActionContext:
    """Generator actions for one (R', R, lambda) datum."""

    def __init__(self, pair: PairData, metric: Optional[MetricData] = None):
        self.pair = pair
        self.n = pair.n
        self.lam = pair.lam
        self.R = pair.r
        self.Rinv = pair.r.inverse()
        self.r_prime = pair.r_prime
        self.alg = NCAlgebra.from_rmatrix(pair.r_prime)
        self._metric = metric or pair.metric
        self.divisions = 0
        self.division_failures: List[str] = []
        self._c = _CommutatorFamily(self, self.R)
        self._cbar: Optional[_CommutatorFamily] = None
        # p^i (x_k w) = -d^i_k w + Rinv^i_m^a_k x_a (p^m w)
        self._p_index = _index(self.Rinv, (0, 3), (1, 2))
        # l+^i_j x_k = lam x_b R^b_k^i_j ; l-^i_j x_k = lam^-1 x_b Rinv^i_j^b_k
        self._lp_index = _index(self.R, (2, 3, 1), (0,))
        self._lm_index = _index(self.Rinv, (0, 1, 3), (2,))
        self._memo: Dict[tuple, Terms] = {}

    # bookkeeping ------------------------------------------------------------
    @property
    def metric(self) -> MetricData:
        if self._metric is None:
            self._metric = find_metric(self.pair)
        return self._metric

    def divide_braided(self, p: NCPoly) -> NCPoly:
        """p / (q - q^-1), insisting that no coefficient acquires a pole at q = +-1."""
        self.divisions += 1
        for w, c in p.terms.items():
            if not c.divisible_by_braided_unit():
                msg = f"braided integer not divisible: coefficient {c.render()} of {self.alg.render_word(w)}"
                self.division_failures.append(msg)
                raise ActionError(msg)
        return p / QDIFF

    def _lift(self, fn: Callable[[Word], Terms], m: NCPoly) -> NCPoly:
        raw: Terms = {}
        for w, c in m.terms.items():
            for v, d in fn(w).items():
                _add_into(raw, v, c * d)
        return NCPoly(raw, self.alg)

    def _check_index(self, *idx: int) -> None:
        for i in idx:
            if not 0 <= i < self.n:
                raise IndexError(f"generator index {i + 1} out of range 1..{self.n}")

    # p ------------------------------------------------------------------------
    def _p_word(self, i: int, w: Word) -> Terms:
        key = ("p", i, w)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if not w:
            out: Terms = {}
        else:
            k, rest = w[0], w[1:]
            raw: Terms = {}
            if k == i:
                _add_into(raw, rest, -ONE)
            if rest:
                for m, a, r in self._p_index.get((i, k), ()):
                    for v, c in self._p_word(m, rest).items():
                        _add_into(raw, (a,) + v, r * c)
            out = self.alg.reduce(raw).terms
        self._memo[key] = out
        return out

    def act_p(self, i: int, m: NCPoly) -> NCPoly:
        self._check_index(i)
        return self._lift(lambda w: self._p_word(i, w), m)

    # l+- and the dilaton -------------------------------------------------------
    def _l_word(self, sign: int, i: int, j: int, w: Word) -> Terms:
        key = ("l", sign, i, j, w)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if not w:
            out: Terms = {(): ONE} if i == j else {}
        elif len(w) == 1:
            if sign > 0:
                table, scale = self._lp_index, self.lam
            else:
                table, scale = self._lm_index, self.lam.inverse()
            out = {}
            for b, r in table.get((i, j, w[0]), ()):
                _add_into(out, (b,), scale * r)
        else:
            raw: Terms = {}
            for a in range(self.n):
                first = self._l_word(sign, i, a, w[:1])
                if not first:
                    continue
                second = self._l_word(sign, a, j, w[1:])
                for u, c in first.items():
                    for v, d in second.items():
                        _add_into(raw, u + v, c * d)
            out = self.alg.reduce(raw).terms
        self._memo[key] = out
        return out

    def act_l(self, sign: int, i: int, j: int, m: NCPoly) -> NCPoly:
        self._check_index(i, j)
        return self._lift(lambda w: self._l_word(sign, i, j, w), m)

    def _sl_word(self, sign: int, i: int, j: int, w: Word) -> Terms:
        """Antipode of l+-, inverse to the l+- block matrix: S(l)^i_j(uv) = S(l)^a_j u . S(l)^i_a v."""
        key = ("Sl", sign, i, j, w)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if not w:
            out: Terms = {(): ONE} if i == j else {}
        elif len(w) == 1:
            out = {}
            k = w[0]
            for b in range(self.n):
                if sign > 0:
                    r = self.lam.inverse() * self.Rinv[b, k, i, j]
                else:
                    r = self.lam * self.R[i, j, b, k]
                if r:
                    out[(b,)] = r
        else:
            raw: Terms = {}
            for a in range(self.n):
                first = self._sl_word(sign, a, j, w[:1])
                if not first:
                    continue
                second = self._sl_word(sign, i, a, w[1:])
                for u, c in first.items():
                    for v, d in second.items():
                        _add_into(raw, u + v, c * d)
            out = self.alg.reduce(raw).terms
        self._memo[key] = out
        return out

    def act_sl(self, sign: int, i: int, j: int, m: NCPoly) -> NCPoly:
        self._check_index(i, j)
        return self._lift(lambda w: self._sl_word(sign, i, j, w), m)

    def act_varsigma(self, power: int, m: NCPoly) -> NCPoly:
        raw: Terms = {}
        for w, c in m.terms.items():
            raw[w] = c * self.lam ** (power * len(w))
        return NCPoly(raw, self.alg)

    # c ------------------------------------------------------------------------
    def act_c(self, i: int, m: NCPoly) -> NCPoly:
        self._check_index(i)
        return self._lift(lambda w: self._c.closed(i, w), m)

    def act_c_recursive(self, i: int, m: NCPoly) -> NCPoly:
        self._check_index(i)
        return self._lift(lambda w: self._c.recursive(i, w), m)

    def _conjugate_family(self) -> _CommutatorFamily:
        if self._cbar is None:
            self._cbar = _CommutatorFamily(self, self.R.flip().inverse())
        return self._cbar

    def act_c_conjugate(self, i: int, m: NCPoly) -> NCPoly:
        self._check_index(i)
        fam = self._conjugate_family()
        return self._lift(lambda w: fam.closed(i, w), m)

    def act_c_spinorial(self, i: int, m: NCPoly) -> NCPoly:
        """Spinorial form in the Euclidean gauge, extended by the braided Leibniz rule."""
        small = self.pair.small
        if small is None or self.pair.gauge != "euclidean":
            raise ActionError("spinorial action needs a Euclidean-gauge context")
        self._check_index(i)
        return self._lift(lambda w: self._spin_word(i, w), m)

    def _spin_word(self, i: int, w: Word) -> Terms:
        key = ("spin", i, w)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        small = self.pair.small
        s = small.n
        if not w:
            out: Terms = {}
        elif len(w) == 1:
            # c_j x_i = -R^{a1}_{i1}^{b1}_{j1} x_{(i0,b1)} x_{(j0,a1)}
            i0, i1 = divmod(w[0], s)
            j0, j1 = divmod(i, s)
            raw: Terms = {}
            for a1, b1, v in small.by_lower().get((i1, j1), ()):
                _add_into(raw, (i0 * s + b1, j0 * s + a1), -v)
            out = self.alg.reduce(raw).terms
        else:
            head, j = w[:-1], w[-1]
            raw = {}
            for v, c in self._spin_word(i, (j,)).items():
                _add_into(raw, head + v, c)
            for mm, ss, r in self.R.by_lower().get((j, i), ()):
                for v, c in self._spin_word(ss, head).items():
                    _add_into(raw, v + (mm,), r * c)
            out = self.alg.reduce(raw).terms
        self._memo[key] = out
        return out

    # misc ---------------------------------------------------------------------
    def mult_x(self, i: int, m: NCPoly) -> NCPoly:
        return self.alg.gen(i) * m

    def basis(self, degree: int) -> List[NCPoly]:
        return [NCPoly({w: ONE}, self.alg) for w in self.alg.basis_upto(degree)]

    def x_square(self) -> NCPoly:
        return ncalg.metric_square(self.metric, self.alg)


class OperatorTable:
    """Matrices of a linear operator on the normal-word basis, degree by degree.

    ``shift`` is the degree change of the operator (-1, 0 or +1).
    """

    def __init__(self, op: Operator, alg: NCAlgebra, max_degree: int, shift: int):
        self.alg = alg
        self.shift = shift
        self.max_degree = max_degree
        self.images: Dict[Word, NCPoly] = {}
        for d in range(max_degree + 1):
            for w in alg.normal_words(d):
                img = op(NCPoly({w: ONE}, alg))
                bad = img.degrees() - {d + shift}
                if bad:
                    raise ActionError(f"operator does not shift degree by {shift} on {alg.render_word(w)}")
                self.images[w] = img

    def matrix(self, degree: int) -> List[List[QRat]]:
        """Rows indexed by target normal words, columns by source normal words."""
        src = self.alg.normal_words(degree)
        tgt = self.alg.normal_words(degree + self.shift) if degree + self.shift >= 0 else []
        return [[self.images[w].coefficient(t) for w in src] for t in tgt]

    def apply(self, m: NCPoly) -> NCPoly:
        out = NCPoly({}, self.alg)
        for w, c in m.terms.items():
            out = out + self.images[w].scale(c)
        return out


# ---------------------------------------------------------------------------
# operator-identity sweeps
# ---------------------------------------------------------------------------

def sweep(check: str, identities: Iterable[Tuple[str, Operator, Operator]], words: Sequence[NCPoly],
          params: dict) -> VerificationReport:
    """Pass iff lhs(w) == rhs(w) for every identity and every basis element."""
    count = 0
    for label, lhs, rhs in identities:
        for w in words:
            count += 1
            diff = lhs(w) - rhs(w)
            if diff:
                return VerificationReport.failed(
                    check, f"{label} on {w.render()}: residual {diff.render()}", params)
    params = dict(params, evaluations=count)
    return VerificationReport.passed(check, params)


def _sum(ops: Iterable[NCPoly], alg: NCAlgebra) -> NCPoly:
    out = NCPoly({}, alg)
    for o in ops:
        out = out + o
    return out


@timed
def verify_algebra_relations(ctx: ActionContext, degree: int = 3) -> VerificationReport:
    """Defining relations of the q-conformal algebra, as operators on q-spacetime."""
    n, lam, R, Rinv, Rp = ctx.n, ctx.lam, ctx.R, ctx.Rinv, ctx.r_prime
    alg = ctx.alg
    lam_inv = lam.inverse()
    P, C, L, S = ctx.act_p, ctx.act_c, ctx.act_l, ctx.act_varsigma
    rng = range(n)
    ids = []
    for i, j in itertools.product(rng, rng):
        ids.append((f"[p{i + 1},c{j + 1}]",
                    lambda m, i=i, j=j: P(i, C(j, m)) - C(j, P(i, m)),
                    lambda m, i=i, j=j: (L(1, i, j, S(-1, m)) - L(-1, i, j, S(1, m))) / QDIFF))
        ids.append((f"c{j + 1}c{i + 1}",
                    lambda m, i=i, j=j: C(j, C(i, m)),
                    lambda m, i=i, j=j: _sum((C(a, C(b, m)).scale(v)
                                              for a, b, v in Rp.by_lower().get((i, j), ())), alg)))
        ids.append((f"p{i + 1}p{j + 1}",
                    lambda m, i=i, j=j: P(i, P(j, m)),
                    lambda m, i=i, j=j: _sum((P(b, P(a, m)).scale(v)
                                              for a, b, v in Rp.by_upper().get((i, j), ())), alg)))
        for k in rng:
            ids.append((f"l+{i + 1}{j + 1} c{k + 1}",
                        lambda m, i=i, j=j, k=k: L(1, i, j, C(k, m)),
                        lambda m, i=i, j=j, k=k: _sum((C(b, L(1, i, a, m)).scale(lam * R[b, k, a, j])
                                                       for a in rng for b in rng if R[b, k, a, j]), alg)))
            ids.append((f"l-{i + 1}{j + 1} c{k + 1}",
                        lambda m, i=i, j=j, k=k: L(-1, i, j, C(k, m)),
                        lambda m, i=i, j=j, k=k: _sum((C(b, L(-1, i, a, m)).scale(lam_inv * Rinv[a, j, b, k])
                                                       for a in rng for b in rng if Rinv[a, j, b, k]), alg)))
            ids.append((f"l+{i + 1}{j + 1} p{k + 1}",
                        lambda m, i=i, j=j, k=k: L(1, i, j, P(k, m)),
                        lambda m, i=i, j=j, k=k: _sum((P(b, L(1, a, j, m)).scale(lam_inv * Rinv[k, b, i, a])
                                                       for a in rng for b in rng if Rinv[k, b, i, a]), alg)))
            ids.append((f"l-{i + 1}{j + 1} p{k + 1}",
                        lambda m, i=i, j=j, k=k: L(-1, i, j, P(k, m)),
                        lambda m, i=i, j=j, k=k: _sum((P(b, L(-1, a, j, m)).scale(lam * R[i, a, k, b])
                                                       for a in rng for b in rng if R[i, a, k, b]), alg)))
    for k in rng:
        ids.append((f"s c{k + 1}", lambda m, k=k: S(1, C(k, m)), lambda m, k=k: C(k, S(1, m)).scale(lam)))
        ids.append((f"s p{k + 1}", lambda m, k=k: S(1, P(k, m)), lambda m, k=k: P(k, S(1, m)).scale(lam_inv)))
    ids.extend(_frt_identities(ctx))
    return sweep("algebra-relations", ids, ctx.basis(degree), {"degree": degree})


def _frt_identities(ctx: ActionContext):
    """R_21 l1 l2 = l2 l1 R_21 for (+,+), (-,-) and (+,-); l commutes with the dilaton."""
    n, R, alg, L, S = ctx.n, ctx.R, ctx.alg, ctx.act_l, ctx.act_varsigma
    rng = range(n)
    out = []
    for s1, s2 in ((1, 1), (-1, -1), (1, -1)):
        for i, j, k, l in itertools.product(rng, repeat=4):
            lhs = lambda m, i=i, j=j, k=k, l=l, s1=s1, s2=s2: _sum(
                (L(s1, a, j, L(s2, b, l, m)).scale(R[k, b, i, a])
                 for a in rng for b in rng if R[k, b, i, a]), alg)
            rhs = lambda m, i=i, j=j, k=k, l=l, s1=s1, s2=s2: _sum(
                (L(s2, k, b, L(s1, i, a, m)).scale(R[b, l, a, j])
                 for a in rng for b in rng if R[b, l, a, j]), alg)
            out.append((f"FRT({s1:+d},{s2:+d}) {i + 1}{j + 1}{k + 1}{l + 1}", lhs, rhs))
    for i, j in itertools.product(rng, rng):
        for sg in (1, -1):
            out.append((f"s l{'+' if sg > 0 else '-'}{i + 1}{j + 1}",
                        lambda m, i=i, j=j, sg=sg: S(1, L(sg, i, j, m)),
                        lambda m, i=i, j=j, sg=sg: L(sg, i, j, S(1, m))))
    return out


@timed
def verify_cross_relations(ctx: ActionContext, degree: int = 3) -> VerificationReport:
    """Cross relations with x acting by left multiplication.

    Covers the braided Heisenberg relation, the c/x relation, and the
    covariance of x under l+-, and the dilaton.
    """
    n, lam, R, Rinv, alg = ctx.n, ctx.lam, ctx.R, ctx.Rinv, ctx.alg
    P, C, L, S, X = ctx.act_p, ctx.act_c, ctx.act_l, ctx.act_varsigma, ctx.mult_x
    rng = range(n)
    ids = []
    for i, j in itertools.product(rng, rng):
        ids.append((f"heisenberg {i + 1}{j + 1}",
                    lambda m, i=i, j=j: _sum((X(b, P(a, m)).scale(Rinv[i, a, b, j])
                                              for a in rng for b in rng if Rinv[i, a, b, j]), alg) - P(i, X(j, m)),
                    lambda m, i=i, j=j: m if i == j else NCPoly({}, alg)))

        def cx(m, i=i):
            return C(i, m) + _sum((X(a, L(1, a, i, S(-1, m))) for a in rng), alg) / QDIFF

        ids.append((f"[c{i + 1} + x l+ s^-1/(q-q^-1), x{j + 1}]",
                    lambda m, j=j, cx=cx: cx(X(j, m)),
                    lambda m, j=j, cx=cx: X(j, cx(m))))
        for k in rng:
            ids.append((f"l+{i + 1}{j + 1} x{k + 1}",
                        lambda m, i=i, j=j, k=k: L(1, i, j, X(k, m)),
                        lambda m, i=i, j=j, k=k: _sum((X(b, L(1, a, j, m)).scale(lam * R[b, k, i, a])
                                                       for a in rng for b in rng if R[b, k, i, a]), alg)))
            ids.append((f"l-{i + 1}{j + 1} x{k + 1}",
                        lambda m, i=i, j=j, k=k: L(-1, i, j, X(k, m)),
                        lambda m, i=i, j=j, k=k: _sum((X(b, L(-1, a, j, m)).scale(lam.inverse() * Rinv[i, a, b, k])
                                                       for a in rng for b in rng if Rinv[i, a, b, k]), alg)))
    for k in rng:
        ids.append((f"s x{k + 1}", lambda m, k=k: S(1, X(k, m)), lambda m, k=k: X(k, S(1, m)).scale(lam)))
    return sweep("cross-relations", ids, ctx.basis(degree), {"degree": degree})


@timed
def verify_act_c_paths(ctx: ActionContext, degree: int = 4) -> VerificationReport:
    """Closed formula and recursive right-derivation expansion of c_i agree."""
    ids = [(f"c{i + 1} closed vs recursive",
            lambda m, i=i: ctx.act_c(i, m), lambda m, i=i: ctx.act_c_recursive(i, m))
           for i in range(ctx.n)]
    return sweep("c-action-paths", ids, ctx.basis(degree), {"degree": degree})


@timed
def verify_intertwining(ctx: ActionContext, degree: int = 3) -> VerificationReport:
    """c_i(S w) = S(cbar_i w) with S the braided antipode."""
    S = ncalg.BraidedAntipode(ctx.alg, ctx.R)
    ids = [(f"c{i + 1} S = S cbar{i + 1}",
            lambda m, i=i: ctx.act_c(i, S(m)), lambda m, i=i: S(ctx.act_c_conjugate(i, m)))
           for i in range(ctx.n)]
    return sweep("intertwining", ids, ctx.basis(degree), {"degree": degree})


@timed
def verify_spinorial(ctx: ActionContext, degree: int = 2) -> VerificationReport:
    """Spinorial-gauge action equals the big-R commutator action."""
    ids = [(f"c{i + 1} spinorial",
            lambda m, i=i: ctx.act_c_spinorial(i, m), lambda m, i=i: ctx.act_c(i, m))
           for i in range(ctx.n)]
    return sweep("spinorial", ids, ctx.basis(degree), {"degree": degree})


# ---------------------------------------------------------------------------
# metric scaling and the Gaussian
# ---------------------------------------------------------------------------

def scaling_coefficient(lam: QRat, m: int) -> QRat:
    """(1 - lam^(-2m)) / (q - q^-1)."""
    return (ONE - lam ** (-2 * m)) / QDIFF


@timed
def verify_metric_scaling(ctx: ActionContext, m_max: int = 3) -> VerificationReport:
    xx = ctx.x_square()
    params = {"m_max": m_max}
    power = ctx.alg.one()
    for m in range(1, m_max + 1):
        power = power * xx
        coeff = scaling_coefficient(ctx.lam, m)
        for i in range(ctx.n):
            lhs = ctx.act_c(i, power)
            rhs = (ctx.alg.gen(i) * power).scale(coeff)
            if lhs != rhs:
                return VerificationReport.failed(
                    "metric-scaling", f"m={m}, i={i + 1}: residual {(lhs - rhs).render()}", params)
    return VerificationReport.passed("metric-scaling", params)


def mu_factorial(mu: QRat, m: int) -> QRat:
    """[m; mu]! = prod_k (1 - mu^k)/(1 - mu)."""
    out = ONE
    for k in range(1, m + 1):
        num = ONE - mu ** k
        if not num:
            raise ActionError(f"[{k}; mu] vanishes")
        out = out * num / (ONE - mu)
    return out


def mu_number_factorial(mu: QRat, m: int) -> QRat:
    """prod_k (mu^k - 1)/(mu - 1)."""
    out = ONE
    for k in range(1, m + 1):
        num = mu ** k - ONE
        if not num:
            raise ActionError(f"[{k}; mu] vanishes")
        out = out * num / (mu - ONE)
    return out


def gaussian_conventions(lam: QRat):
    """Candidate Gaussians sum_m (t x.x)^m / fact(m), tried in order."""
    mu = lam ** -2
    return [
        ("mu-factorial, argument x.x", lambda m: mu_factorial(mu, m), ONE),
        ("mu-numbers, argument x.x", lambda m: mu_number_factorial(mu, m), ONE),
        ("mu-factorial, argument -x.x/(1+q^-2)", lambda m: mu_factorial(mu, m), -(ONE + q ** -2).inverse()),
    ]


def gaussian_constant(lam: QRat) -> QRat:
    """-q^-1 (1 - lam^-2)/(1 - q^-4)."""
    return -(q ** -1) * (ONE - lam ** -2) / (ONE - q ** -4)


def _gaussian_component_ok(ctx, xx_pows, fact, t, m, i, K) -> Optional[str]:
    """Compare the x_i (x.x)^m components of c_i g and K x_i (x.x) g."""
    lhs = ctx.act_c(i, xx_pows[m]).scale(t ** m / fact(m))
    rhs = (ctx.alg.gen(i) * xx_pows[m]).scale(K * t ** (m - 1) / fact(m - 1))
    if lhs != rhs:
        return (lhs - rhs).render()
    return None


@timed
def verify_gaussian(ctx: ActionContext, order: int = 3) -> VerificationReport:
    """c_i g = K x_i (x.x) g degree by degree, the Gaussian convention fixed by order 1."""
    xx = ctx.x_square()
    K = gaussian_constant(ctx.lam)
    pows = [ctx.alg.one()]
    for _ in range(order):
        pows.append(pows[-1] * xx)
    for i in range(ctx.n):
        if ctx.act_c(i, pows[0]):
            return VerificationReport.failed("gaussian", f"c{i + 1} on 1 is nonzero", {"order": order})
    chosen = None
    tried = []
    for name, fact, t in gaussian_conventions(ctx.lam):
        bad = next((r for i in range(ctx.n) if (r := _gaussian_component_ok(ctx, pows, fact, t, 1, i, K))), None)
        tried.append(name)
        if bad is None:
            chosen = (name, fact, t)
            break
    params = {"order": order, "tried": tried}
    if chosen is None:
        return VerificationReport.failed("gaussian", "no Gaussian convention matches at order 1", params)
    name, fact, t = chosen
    params["convention"] = name
    for m in range(2, order + 1):
        for i in range(ctx.n):
            bad = _gaussian_component_ok(ctx, pows, fact, t, m, i, K)
            if bad:
                return VerificationReport.failed("gaussian", f"order {m}, i={i + 1}: residual {bad}", params)
    return VerificationReport.passed("gaussian", params)


# ---------------------------------------------------------------------------
# tables and the classical limit
# ---------------------------------------------------------------------------

def action_table(ctx: ActionContext) -> List[List[NCPoly]]:
    """table[j][i] = c_j acting on x_i (rows: generators, columns: coordinates)."""
    return [[ctx.act_c(j, ctx.alg.gen(i)) for i in range(ctx.n)] for j in range(ctx.n)]


def commutative_algebra(n: int) -> NCAlgebra:
    return NCAlgebra.from_rmatrix(identity_rmatrix(n))


def at_q1(p: NCPoly, target: NCAlgebra) -> NCPoly:
    """eval_q1 on every coefficient, re-reduced in ``target``."""
    raw: Terms = {}
    for w, c in p.terms.items():
        v = eval_q1(c)
        if v:
            _add_into(raw, w, QRat.from_fraction(Fraction(v)))
    return target.reduce(raw)


def classical_metric(ctx: ActionContext) -> List[List[Fraction]]:
    return [[eval_q1(v) for v in row] for row in ctx.metric.eta_lower]


def classical_formula_table(ctx: ActionContext, target: NCAlgebra) -> List[List[NCPoly]]:
    """1/2 eta_ij x.x - x_i x_j at q = 1, indexed [j][i]."""
    eta = classical_metric(ctx)
    eta_up = [[eval_q1(v) for v in row] for row in ctx.metric.eta_upper]
    n = ctx.n
    raw: Terms = {}
    for a, b in itertools.product(range(n), repeat=2):
        if eta_up[b][a]:
            _add_into(raw, (a, b), QRat.from_fraction(eta_up[b][a]))
    xx = target.reduce(raw)
    out = []
    for j in range(n):
        row = []
        for i in range(n):
            e = eta[i][j]
            row.append(xx.scale(QRat.from_fraction(e / 2)) - target.word((i, j)))
        out.append(row)
    return out


def classical_limit_table(ctx: ActionContext) -> List[List[NCPoly]]:
    target = commutative_algebra(ctx.n)
    try:
        return [[at_q1(v, target) for v in row] for row in action_table(ctx)]
    except PoleError as exc:
        raise ActionError(f"c-action table has a pole at q=1 ({exc})") from None


@timed
def verify_classical_limit(ctx: ActionContext) -> VerificationReport:
    target = commutative_algebra(ctx.n)
    params = {"entries": ctx.n * ctx.n}
    try:
        got = classical_limit_table(ctx)
    except ActionError as exc:
        return VerificationReport.failed("classical-limit", str(exc), params)
    want = classical_formula_table(ctx, target)
    for j, i in itertools.product(range(ctx.n), repeat=2):
        if got[j][i] != want[j][i]:
            return VerificationReport.failed(
                "classical-limit", f"c{j + 1} on x{i + 1}: {got[j][i].render()} != {want[j][i].render()}", params)
    return VerificationReport.passed("classical-limit", params)


def compare_tables(got: Sequence[Sequence[NCPoly]], want: Sequence[Sequence[NCPoly]]) -> List[Tuple[int, int]]:
    """Positions (row, col) where the tables differ."""
    return [(r, c) for r in range(len(want)) for c in range(len(want[r])) if got[r][c] != want[r][c]]
