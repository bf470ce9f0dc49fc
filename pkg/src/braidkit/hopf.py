"""Hopf structure of the q-conformal algebra, checked through its action on q-spacetime.

Elements of U are formal linear combinations of words in the letters

    ("p", i)            momentum p^i
    ("c", i)            special conformal c_i
    ("l", +-1, i, j)    l+-^i_j
    ("Sl", +-1, i, j)   antipode of l+-^i_j (evaluated through the inverse matrices)
    ("s", +-1)          dilaton and its inverse

There is no normal form for U; two elements are compared by their action on
normal words of q-spacetime up to a degree cap.
"""
from __future__ import annotations

import itertools
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from . import linalg, ncalg
from .actions import ActionContext, _sum
from .ncalg import NCAlgebra, NCPoly, TensorTerms, Word, _add_into
from .qcoeff import ONE, QDIFF, ZERO, QRat, as_qrat
from .report import VerificationReport, timed
from .rtensor import MetricData, RMatrixData

Letter = tuple
UWord = Tuple[Letter, ...]


class HopfError(ValueError):
    pass


def render_letter(a: Letter) -> str:
    kind = a[0]
    if kind in ("p", "c"):
        return f"{kind}{a[1] + 1}"
    if kind == "s":
        return "s" if a[1] > 0 else "s^-1"
    sign = "+" if a[1] > 0 else "-"
    body = f"l{sign}{a[2] + 1}{a[3] + 1}"
    return body if kind == "l" else f"S({body})"


def render_uword(w: UWord) -> str:
    return ".".join(render_letter(a) for a in w) if w else "1"


class UElement:
    """Linear combination of formal words."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[UWord, QRat]] = None):
        self.terms = {w: c for w, c in (terms or {}).items() if c}

    @classmethod
    def letter(cls, a: Letter, c=ONE) -> "UElement":
        return cls({(a,): as_qrat(c)})

    @classmethod
    def one(cls) -> "UElement":
        return cls({(): ONE})

    def __add__(self, other: "UElement") -> "UElement":
        out = dict(self.terms)
        for w, c in other.terms.items():
            _add_into(out, w, c)
        return UElement(out)

    def __neg__(self) -> "UElement":
        return UElement({w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "UElement") -> "UElement":
        return self + (-other)

    def scale(self, c) -> "UElement":
        c = as_qrat(c)
        return UElement({w: v * c for w, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, UElement):
            out: Dict[UWord, QRat] = {}
            for u, a in self.terms.items():
                for v, b in other.terms.items():
                    _add_into(out, u + v, a * b)
            return UElement(out)
        return self.scale(other)

    __rmul__ = scale

    def __eq__(self, other: object) -> bool:
        return isinstance(other, UElement) and self.terms == other.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def render(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({ncalg.render_coeff(c)})*{render_uword(w)}"
                          for w, c in sorted(self.terms.items(), key=lambda t: (len(t[0]), t[0])))

    __str__ = render


class UTensor:
    """Linear combination of pairs of formal words (elements of U (x) U)."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[Tuple[UWord, UWord], QRat]] = None):
        self.terms = {k: c for k, c in (terms or {}).items() if c}

    @classmethod
    def of(cls, a: UElement, b: UElement) -> "UTensor":
        out: Dict = {}
        for u, x in a.terms.items():
            for v, y in b.terms.items():
                _add_into(out, (u, v), x * y)
        return cls(out)

    def __add__(self, other: "UTensor") -> "UTensor":
        out = dict(self.terms)
        for k, c in other.terms.items():
            _add_into(out, k, c)
        return UTensor(out)

    def __neg__(self) -> "UTensor":
        return UTensor({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "UTensor") -> "UTensor":
        return self + (-other)

    def scale(self, c) -> "UTensor":
        c = as_qrat(c)
        return UTensor({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other: "UTensor") -> "UTensor":
        out: Dict = {}
        for (u1, u2), a in self.terms.items():
            for (v1, v2), b in other.terms.items():
                _add_into(out, (u1 + v1, u2 + v2), a * b)
        return UTensor(out)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, UTensor) and self.terms == other.terms

    def map(self, f, g) -> "UTensor":
        """(f (x) g) applied leg-wise; f, g map UElement -> UElement."""
        out = UTensor()
        for (u, v), c in self.terms.items():
            out = out + UTensor.of(f(UElement({u: ONE})), g(UElement({v: ONE}))).scale(c)
        return out

    def render(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({ncalg.render_coeff(c)})*{render_uword(u)} (x) {render_uword(v)}"
                          for (u, v), c in sorted(self.terms.items(), key=lambda t: (len(t[0][0]) + len(t[0][1]), t[0])))

    __str__ = render


# generator shorthands --------------------------------------------------------

def P(i: int) -> UElement:
    return UElement.letter(("p", i))


def C(i: int) -> UElement:
    return UElement.letter(("c", i))


def L(sign: int, i: int, j: int) -> UElement:
    return UElement.letter(("l", sign, i, j))


def SL(sign: int, i: int, j: int) -> UElement:
    return UElement.letter(("Sl", sign, i, j))


def SIG(power: int = 1) -> UElement:
    return UElement.letter(("s", power))


ONE_U = UElement.one()


def generators(n: int) -> List[Tuple[str, UElement]]:
    out = []
    for i in range(n):
        out.append((f"p{i + 1}", P(i)))
        out.append((f"c{i + 1}", C(i)))
    for i, j in itertools.product(range(n), repeat=2):
        out.append((f"l+{i + 1}{j + 1}", L(1, i, j)))
        out.append((f"l-{i + 1}{j + 1}", L(-1, i, j)))
    out.append(("s", SIG(1)))
    out.append(("s^-1", SIG(-1)))
    return out


# ---------------------------------------------------------------------------
# coproduct, antipode, counit
# ---------------------------------------------------------------------------

def _letter_coproduct(a: Letter, n: int) -> UTensor:
    kind = a[0]
    if kind == "p":
        i = a[1]
        out = UTensor.of(P(i), ONE_U)
        for k in range(n):
            out = out + UTensor.of(SIG(1) * L(-1, i, k), P(k))
        return out
    if kind == "c":
        i = a[1]
        out = UTensor.of(ONE_U, C(i))
        for k in range(n):
            out = out + UTensor.of(C(k), L(1, k, i) * SIG(-1))
        return out
    if kind == "l":
        _, s, i, j = a
        return _sum_tensors(UTensor.of(L(s, i, k), L(s, k, j)) for k in range(n))
    if kind == "Sl":
        _, s, i, j = a
        return _sum_tensors(UTensor.of(SL(s, k, j), SL(s, i, k)) for k in range(n))
    if kind == "s":
        return UTensor.of(SIG(a[1]), SIG(a[1]))
    raise HopfError(f"unknown letter {a!r}")


def _sum_tensors(ts: Iterable[UTensor]) -> UTensor:
    out = UTensor()
    for t in ts:
        out = out + t
    return out


def coproduct(u: UElement, n: int) -> UTensor:
    """Algebra map extending the generator coproducts."""
    out = UTensor()
    for w, c in u.terms.items():
        t = UTensor({((), ()): c})
        for a in w:
            t = t * _letter_coproduct(a, n)
        out = out + t
    return out


def _letter_antipode(a: Letter, n: int) -> UElement:
    kind = a[0]
    if kind == "p":
        i = a[1]
        return -_sum_u(SL(-1, i, k) * SIG(-1) * P(k) for k in range(n))
    if kind == "c":
        i = a[1]
        return -_sum_u(C(k) * SIG(1) * SL(1, k, i) for k in range(n))
    if kind == "l":
        return SL(*a[1:])
    if kind == "s":
        return SIG(-a[1])
    raise HopfError(f"antipode of {render_letter(a)} is not represented")


def _sum_u(us: Iterable[UElement]) -> UElement:
    out = UElement()
    for u in us:
        out = out + u
    return out


def antipode(u: UElement, n: int) -> UElement:
    """Antimultiplicative extension of the generator antipodes."""
    out = UElement()
    for w, c in u.terms.items():
        t = UElement({(): c})
        for a in reversed(w):
            t = t * _letter_antipode(a, n)
        out = out + t
    return out


def counit(u: UElement) -> QRat:
    total = ZERO
    for w, c in u.terms.items():
        v = c
        for a in w:
            kind = a[0]
            if kind in ("p", "c"):
                v = ZERO
            elif kind in ("l", "Sl"):
                v = v if a[2] == a[3] else ZERO
            if not v:
                break
        total = total + v
    return total


def canonical(u: Union[UElement, UTensor]):
    """Move dilaton letters to the right end of each run of rotation letters.

    The dilaton commutes with l+- and S(l+-), so this is an identity in U and
    lets formal comparisons ignore that ordering.
    """
    def fix(w: UWord) -> UWord:
        out: List[Letter] = []
        run: List[Letter] = []
        power = 0

        def flush():
            nonlocal power
            out.extend(run)
            out.extend([("s", 1 if power > 0 else -1)] * abs(power))
            run.clear()
            power = 0

        for a in w:
            if a[0] == "s":
                power += a[1]
            elif a[0] in ("l", "Sl"):
                run.append(a)
            else:
                flush()
                out.append(a)
        flush()
        return tuple(out)

    if isinstance(u, UElement):
        out: Dict = {}
        for w, c in u.terms.items():
            _add_into(out, fix(w), c)
        return UElement(out)
    out = {}
    for (a, b), c in u.terms.items():
        _add_into(out, (fix(a), fix(b)), c)
    return UTensor(out)


# ---------------------------------------------------------------------------
# action on q-spacetime
# ---------------------------------------------------------------------------

def act_letter(ctx: ActionContext, a: Letter, m: NCPoly) -> NCPoly:
    kind = a[0]
    if kind == "p":
        return ctx.act_p(a[1], m)
    if kind == "c":
        return ctx.act_c(a[1], m)
    if kind == "l":
        return ctx.act_l(a[1], a[2], a[3], m)
    if kind == "Sl":
        return ctx.act_sl(a[1], a[2], a[3], m)
    if kind == "s":
        return ctx.act_varsigma(a[1], m)
    raise HopfError(f"unknown letter {a!r}")


def act_U(ctx: ActionContext, u: UElement, m: NCPoly) -> NCPoly:
    """Words act right to left: (ab) m = a(b m)."""
    out = NCPoly({}, ctx.alg)
    for w, c in u.terms.items():
        v = m
        for a in reversed(w):
            if not v:
                break
            v = act_letter(ctx, a, v)
        out = out + v.scale(c)
    return out


def act_tensor(ctx: ActionContext, t: UTensor, v: TensorTerms) -> TensorTerms:
    """(u (x) w) acting leg-wise on an element of V (x) V (no braiding: U (x) U is unbraided)."""
    out: TensorTerms = {}
    alg = ctx.alg
    for (u, w), c in t.terms.items():
        for (a, b), d in v.items():
            left = act_U(ctx, UElement({u: ONE}), NCPoly({a: ONE}, alg))
            if not left:
                continue
            right = act_U(ctx, UElement({w: ONE}), NCPoly({b: ONE}, alg))
            for x, e in left.terms.items():
                for y, f in right.terms.items():
                    _add_into(out, (x, y), c * d * e * f)
    return out


def _pairs(alg: NCAlgebra, degree: int):
    for da in range(degree + 1):
        for db in range(degree + 1 - da):
            for a in alg.normal_words(da):
                for b in alg.normal_words(db):
                    yield a, b


@timed
def verify_module_algebra(ctx: ActionContext, g: UElement, degree: int = 3, label: str = "") -> VerificationReport:
    """g(ab) = sum (g(1) a)(g(2) b) for normal words with deg a + deg b <= degree."""
    alg = ctx.alg
    dg = coproduct(g, ctx.n)
    label = label or g.render()
    params = {"generator": label, "degree": degree}
    count = 0
    for a, b in _pairs(alg, degree):
        pa, pb = NCPoly({a: ONE}, alg), NCPoly({b: ONE}, alg)
        lhs = act_U(ctx, g, pa * pb)
        rhs = ncalg.multiply_tensor(act_tensor(ctx, dg, {(a, b): ONE}), alg)
        count += 1
        if lhs != rhs:
            return VerificationReport.failed(
                "module-algebra", f"{label} on ({alg.render_word(a)})({alg.render_word(b)}): "
                                  f"residual {(lhs - rhs).render()}", params)
    params["pairs"] = count
    return VerificationReport.passed("module-algebra", params)


@timed
def verify_module_algebra_all(ctx: ActionContext, degree: int = 3) -> VerificationReport:
    parts = [verify_module_algebra(ctx, g, degree, label) for label, g in generators(ctx.n)]
    return VerificationReport.merge("module-algebra", parts, {"degree": degree})


def _coassoc_sides(dg: UTensor, n: int):
    left: Dict = {}
    right: Dict = {}
    for (u, v), c in dg.terms.items():
        for (a, b), d in coproduct(UElement({u: ONE}), n).terms.items():
            _add_into(left, (a, b, v), c * d)
        for (a, b), d in coproduct(UElement({v: ONE}), n).terms.items():
            _add_into(right, (u, a, b), c * d)
    return left, right


@timed
def verify_hopf_axioms(ctx: ActionContext, degree: int = 2) -> VerificationReport:
    """Coassociativity and counit (formal), antipode axioms (operational)."""
    n = ctx.n
    basis = ctx.basis(degree)
    params = {"degree": degree}
    for label, g in generators(n):
        dg = coproduct(g, n)
        left, right = _coassoc_sides(dg, n)
        if left != right:
            return VerificationReport.failed("hopf-axioms", f"coassociativity fails on {label}", params)
        for side in (0, 1):
            out = UElement()
            for (u, v), c in dg.terms.items():
                kept, dropped = (v, u) if side == 0 else (u, v)
                out = out + UElement({kept: c * counit(UElement({dropped: ONE}))})
            if canonical(out) != canonical(g):
                return VerificationReport.failed("hopf-axioms", f"counit axiom fails on {label}", params)
        eps = counit(g)
        for side in (0, 1):
            prod = UElement()
            for (u, v), c in dg.terms.items():
                a, b = UElement({u: ONE}), UElement({v: ONE})
                prod = prod + ((antipode(a, n) * b) if side == 0 else (a * antipode(b, n))).scale(c)
            for m in basis:
                got = act_U(ctx, prod, m)
                if got != m.scale(eps):
                    which = "S (x) id" if side == 0 else "id (x) S"
                    return VerificationReport.failed(
                        "hopf-axioms", f"antipode axiom ({which}) on {label} at {m.render()}: "
                                       f"residual {(got - m.scale(eps)).render()}", params)
    return VerificationReport.passed("hopf-axioms", dict(params, generators=len(generators(n))))


# ---------------------------------------------------------------------------
# defining relations as elements of U
# ---------------------------------------------------------------------------

def relation_elements(ctx: ActionContext) -> List[Tuple[str, UElement]]:
    """Each defining relation as lhs - rhs (which must act as zero)."""
    n, lam, R, Rinv, Rp = ctx.n, ctx.lam, ctx.R, ctx.Rinv, ctx.r_prime
    lam_inv = lam.inverse()
    rng = range(n)
    out = []
    for i, j in itertools.product(rng, rng):
        out.append((f"[p{i + 1},c{j + 1}]",
                    P(i) * C(j) - C(j) * P(i)
                    - (L(1, i, j) * SIG(-1) - L(-1, i, j) * SIG(1)).scale(QDIFF.inverse())))
        out.append((f"c{j + 1}c{i + 1}",
                    C(j) * C(i) - _sum_u((C(a) * C(b)).scale(v) for a, b, v in Rp.by_lower().get((i, j), ()))))
        out.append((f"p{i + 1}p{j + 1}",
                    P(i) * P(j) - _sum_u((P(b) * P(a)).scale(v) for a, b, v in Rp.by_upper().get((i, j), ()))))
        for k in rng:
            out.append((f"l+{i + 1}{j + 1} c{k + 1}", L(1, i, j) * C(k) - _sum_u(
                (C(b) * L(1, i, a)).scale(lam * R[b, k, a, j]) for a in rng for b in rng if R[b, k, a, j])))
            out.append((f"l-{i + 1}{j + 1} c{k + 1}", L(-1, i, j) * C(k) - _sum_u(
                (C(b) * L(-1, i, a)).scale(lam_inv * Rinv[a, j, b, k]) for a in rng for b in rng if Rinv[a, j, b, k])))
            out.append((f"l+{i + 1}{j + 1} p{k + 1}", L(1, i, j) * P(k) - _sum_u(
                (P(b) * L(1, a, j)).scale(lam_inv * Rinv[k, b, i, a]) for a in rng for b in rng if Rinv[k, b, i, a])))
            out.append((f"l-{i + 1}{j + 1} p{k + 1}", L(-1, i, j) * P(k) - _sum_u(
                (P(b) * L(-1, a, j)).scale(lam * R[i, a, k, b]) for a in rng for b in rng if R[i, a, k, b])))
    for k in rng:
        out.append((f"s c{k + 1}", SIG(1) * C(k) - (C(k) * SIG(1)).scale(lam)))
        out.append((f"s p{k + 1}", SIG(1) * P(k) - (P(k) * SIG(1)).scale(lam_inv)))
    for s1, s2 in ((1, 1), (-1, -1), (1, -1)):
        for i, j, k, l in itertools.product(rng, repeat=4):
            lhs = _sum_u((L(s1, a, j) * L(s2, b, l)).scale(R[k, b, i, a]) for a in rng for b in rng if R[k, b, i, a])
            rhs = _sum_u((L(s2, k, b) * L(s1, i, a)).scale(R[b, l, a, j]) for a in rng for b in rng if R[b, l, a, j])
            out.append((f"FRT({s1:+d},{s2:+d}) {i + 1}{j + 1}{k + 1}{l + 1}", lhs - rhs))
    for i, j in itertools.product(rng, rng):
        for s in (1, -1):
            out.append((f"s l{'+' if s > 0 else '-'}{i + 1}{j + 1}", SIG(1) * L(s, i, j) - L(s, i, j) * SIG(1)))
    return out


def _check_zero(ctx: ActionContext, items, degree: int, check: str, params: dict) -> VerificationReport:
    basis = ctx.basis(degree)
    count = 0
    for label, u in items:
        for m in basis:
            count += 1
            r = act_U(ctx, u, m)
            if r:
                return VerificationReport.failed(check, f"{label} on {m.render()}: residual {r.render()}", params)
    return VerificationReport.passed(check, dict(params, evaluations=count))


@timed
def verify_relations_U(ctx: ActionContext, degree: int = 3) -> VerificationReport:
    """Relations as formal elements of U act as zero (operator identities up to ``degree``)."""
    return _check_zero(ctx, relation_elements(ctx), degree, "relations-U", {"degree": degree})


# ---------------------------------------------------------------------------
# star structure (real type I with metric, or type II with an involution)
# ---------------------------------------------------------------------------

class StarContext:
    def __init__(self, reality: Optional[str], metric: Optional[MetricData] = None,
                 involution: Optional[Sequence[int]] = None):
        if reality not in ("I", "II"):
            raise HopfError("no reality type declared")
        if reality == "I" and metric is None:
            raise HopfError("type I star structure needs a metric")
        if reality == "II" and involution is None:
            raise HopfError("type II star structure needs an involution")
        self.reality = reality
        self.metric = metric
        self.bar = tuple(involution) if involution is not None else None

    @classmethod
    def from_context(cls, ctx: ActionContext) -> "StarContext":
        pair = ctx.pair
        metric = ctx.metric if pair.reality == "I" else None
        return cls(pair.reality, metric, pair.involution)

    def letter(self, a: Letter) -> UElement:
        kind = a[0]
        if kind == "s":
            return SIG(-a[1])
        if self.reality == "II":
            bar = self.bar
            if kind == "p":
                return P(bar[a[1]])
            if kind == "c":
                return C(bar[a[1]])
            if kind == "l":
                return L(-a[1], bar[a[2]], bar[a[3]])
        else:
            lo, up = self.metric.eta_lower, self.metric.eta_upper
            n = self.metric.n
            if kind == "p":
                i = a[1]
                return _sum_u(P(k).scale(lo[i][k]) for k in range(n) if lo[i][k])
            if kind == "c":
                i = a[1]
                return _sum_u(C(k).scale(up[i][k]) for k in range(n) if up[i][k])
            if kind == "l":
                _, s, i, j = a
                return _sum_u(L(-s, b, c).scale(lo[i][b] * up[j][c])
                              for b in range(n) for c in range(n) if lo[i][b] and up[j][c])
        raise HopfError(f"star of {render_letter(a)} is not represented")

    def __call__(self, u):
        if isinstance(u, UElement):
            out = UElement()
            for w, c in u.terms.items():
                t = UElement({(): c})
                for a in reversed(w):
                    t = t * self.letter(a)
                out = out + t
            return out
        if isinstance(u, NCPoly):
            return self.spacetime(u)
        if isinstance(u, UTensor):
            return u.map(self, self)
        raise TypeError(f"cannot apply star to {type(u).__name__}")

    def spacetime(self, m: NCPoly) -> NCPoly:
        """x_i* = x_a eta^{ia} (type I) or x_bar(i) (type II), antimultiplicative."""
        alg = m.alg
        n = alg.n
        out = NCPoly({}, alg)
        for w, c in m.terms.items():
            t = alg.scalar(c)
            for i in reversed(w):
                if self.reality == "II":
                    g = alg.gen(self.bar[i])
                else:
                    up = self.metric.eta_upper
                    g = _sum((alg.gen(k).scale(up[i][k]) for k in range(n) if up[i][k]), alg)
                t = t * g
            out = out + t
        return out


def star_map(u, ctx: StarContext):
    return ctx(u)


@timed
def verify_star(ctx: ActionContext, degree: int = 3) -> VerificationReport:
    """Involutivity on generators, and star of every relation acts as zero."""
    star = StarContext.from_context(ctx)
    n = ctx.n
    params = {"degree": degree, "type": star.reality}
    for label, g in generators(n):
        if canonical(star(star(g))) != canonical(g):
            return VerificationReport.failed("star", f"star is not involutive on {label}", params)
    for i in range(n):
        x = ctx.alg.gen(i)
        if star(star(x)) != x:
            return VerificationReport.failed("star", f"star is not involutive on x{i + 1}", params)
    items = [(f"*({label})", star(u)) for label, u in relation_elements(ctx)]
    return _check_zero(ctx, items, degree, "star", params)


# ---------------------------------------------------------------------------
# duality pairing and braided exponential
# ---------------------------------------------------------------------------

class Duality:
    """Pairing of the momentum algebra B with the coordinate algebra C.

    C is the covector algebra in x_i with c_i = x_i/(q - q^-1).  Inside U the
    c_i generate the opposite algebra, so a C-word enters U reversed.
    ev(b, x) = constant term of (braided antipode of b) acting on x.
    """

    def __init__(self, ctx: ActionContext):
        self.ctx = ctx
        self.n = ctx.n
        self.p_alg = NCAlgebra(ncalg.build_relations(ctx.r_prime, "vector"), letter="p")
        # Psi(p^i (x) p^j) = R^i_a^j_b p^b (x) p^a
        t = RMatrixData(self.n, {(j, i, l, k): v for (i, j, k, l), v in ctx.R.entries.items()}, "R^t")
        self.p_antipode = ncalg.BraidedAntipode(self.p_alg, t)
        self.x_antipode = ncalg.BraidedAntipode(ctx.alg, ctx.R)
        self._gram: Dict[int, Tuple[List[Word], List[Word], List[List[QRat]]]] = {}

    def act_pword(self, w: Word, m: NCPoly) -> NCPoly:
        for i in reversed(w):
            if not m:
                break
            m = self.ctx.act_p(i, m)
        return m

    def ev_x(self, b: NCPoly, x: NCPoly) -> QRat:
        """ev(b, x) for b in B and x in the (unscaled) covector algebra."""
        sb = self.p_antipode(b)
        total = ZERO
        for w, c in sb.terms.items():
            total = total + c * self.act_pword(w, x).coefficient(())
        return total

    def pairing(self, pword: Word, cword: Word) -> QRat:
        """ev(p-monomial, c-monomial) with the c-monomial read in C."""
        if len(pword) != len(cword):
            return ZERO
        b = NCPoly({tuple(pword): ONE}, self.p_alg)
        b = self.p_alg.reduce(b.terms)
        x = self.ctx.alg.word(tuple(cword))
        return self.ev_x(b, x) * QDIFF ** (-len(cword))

    def gram(self, d: int):
        """Rows: normal p-words; columns: normal x-words of degree d; entries ev(p-word, x-word)."""
        if d not in self._gram:
            pw = self.p_alg.normal_words(d)
            xw = self.ctx.alg.normal_words(d)
            g = [[self.ev_x(NCPoly({b: ONE}, self.p_alg), NCPoly({x: ONE}, self.ctx.alg)) for x in xw] for b in pw]
            self._gram[d] = (pw, xw, g)
        return self._gram[d]

    def c_element(self, x: NCPoly) -> UElement:
        """An element of C written in U: x-word -> (q - q^-1)^k reversed c-word."""
        out: Dict[UWord, QRat] = {}
        for w, c in x.terms.items():
            _add_into(out, tuple(("c", i) for i in reversed(w)), c * QDIFF ** len(w))
        return UElement(out)

    def p_element(self, b: NCPoly) -> UElement:
        return UElement({tuple(("p", i) for i in w): c for w, c in b.terms.items()})

    def exp_terms(self, degree: int, inverse: bool = False) -> List[Tuple[int, NCPoly, NCPoly]]:
        """Pairs (d, e_alpha or S(e_alpha) in C, f^alpha in B) for d <= degree."""
        out = []
        for d in range(degree + 1):
            pw, xw, g = self.gram(d)
            try:
                ginv = linalg.inverse(g)
            except linalg.SingularMatrixError:
                raise HopfError(f"degenerate pairing at degree {d}") from None
            for a, x in enumerate(xw):
                e = NCPoly({x: ONE}, self.ctx.alg)
                if inverse:
                    e = self.x_antipode(e)
                f = {}
                for b, p in enumerate(pw):
                    if ginv[a][b]:
                        f[p] = ginv[a][b]
                out.append((d, e, NCPoly(f, self.p_alg)))
        return out

    def braided_exp_truncated(self, degree: int, inverse: bool = False) -> UTensor:
        out = UTensor()
        for _, e, f in self.exp_terms(degree, inverse):
            out = out + UTensor.of(self.c_element(e), self.p_element(f))
        return out

    # operational application -------------------------------------------------
    def apply_exp(self, v: TensorTerms, inverse: bool = False) -> TensorTerms:
        """exp (or exp^-1) acting leg-wise on V (x) V; right legs act first and truncate exactly."""
        ctx = self.ctx
        alg = ctx.alg
        maxdeg = max((len(b) for (_, b) in v), default=0)
        out: TensorTerms = {}
        for d, e, f in self.exp_terms(maxdeg, inverse):
            ue, uf = self.c_element(e), self.p_element(f)
            for (a, b), c in v.items():
                right = act_U(ctx, uf, NCPoly({b: ONE}, alg))
                if not right:
                    continue
                left = act_U(ctx, ue, NCPoly({a: ONE}, alg))
                for x, s in left.terms.items():
                    for y, t in right.terms.items():
                        _add_into(out, (x, y), c * s * t)
        return out


@timed
def verify_pairing_bialgebra(ctx: ActionContext, degree: int = 2) -> VerificationReport:
    """ev(b b', c) = sum ev(b', c(1)) ev(b, c(2)) with c(1) (x) c(2) the braided coaddition of c.

    The legs pair in nested order, as for any duality in a braided category.
    """
    dual = Duality(ctx)
    alg = ctx.alg
    psi = ncalg.Braiding(ctx.R)
    params = {"degree": degree}
    count = 0

    def ev(b: Word, x: Word) -> QRat:
        return dual.ev_x(dual.p_alg.reduce({b: ONE}), alg.word(x))

    for d1 in range(degree + 1):
        for d2 in range(degree + 1 - d1):
            for b1 in itertools.product(range(ctx.n), repeat=d1):
                for b2 in itertools.product(range(ctx.n), repeat=d2):
                    for c in alg.normal_words(d1 + d2):
                        count += 1
                        lhs = ev(b1 + b2, c)
                        rhs = ZERO
                        for (u, v), k in ncalg.braided_coaddition(c, alg, psi).items():
                            if len(u) == d2:
                                rhs = rhs + k * ev(b2, u) * ev(b1, v)
                        if lhs != rhs:
                            return VerificationReport.failed(
                                "pairing-bialgebra",
                                f"ev(p-word {[i + 1 for i in b1 + b2]}, {alg.render_word(c)}) = {lhs.render()} "
                                f"but the coproduct side gives {rhs.render()}", params)
    return VerificationReport.passed("pairing-bialgebra", dict(params, evaluations=count))


def pairing(ctx: ActionContext, pword: Word, cword: Word) -> QRat:
    return Duality(ctx).pairing(pword, cword)


def braided_exp_truncated(ctx: ActionContext, degree: int) -> Tuple[UTensor, UTensor]:
    """(exp, exp^-1) truncated at ``degree``."""
    dual = Duality(ctx)
    return dual.braided_exp_truncated(degree), dual.braided_exp_truncated(degree, inverse=True)


def conjugate_coproduct_c(n: int, i: int) -> UTensor:
    """c_d (x) l-^d_i s + 1 (x) c_i."""
    out = UTensor.of(ONE_U, C(i))
    for d in range(n):
        out = out + UTensor.of(C(d), L(-1, d, i) * SIG(1))
    return out


@timed
def verify_exp_inverse(ctx: ActionContext, degree: int = 2) -> VerificationReport:
    """exp^-1 exp = 1 (x) 1 and exp exp^-1 = 1 (x) 1 on all word pairs of total degree <= degree."""
    dual = Duality(ctx)
    params = {"degree": degree}
    for a, b in _pairs(ctx.alg, degree):
        v = {(a, b): ONE}
        for first, second in ((False, True), (True, False)):
            got = dual.apply_exp(dual.apply_exp(v, first), second)
            if got != v:
                return VerificationReport.failed(
                    "exp-inverse", f"on {ctx.alg.render_word(a)} (x) {ctx.alg.render_word(b)}: "
                                   f"{ncalg.render_tensor(got, ctx.alg)}", params)
    return VerificationReport.passed("exp-inverse", params)


@timed
def verify_conjugation_identity(ctx: ActionContext, degree: int = 2) -> VerificationReport:
    """(* (x) *) Delta * on c_i, formally and against exp^-1 (Delta c_i) exp operationally."""
    n = ctx.n
    star = StarContext.from_context(ctx)
    params = {"degree": degree, "type": star.reality}
    parts = []
    # (1) closed form
    ok = True
    witness = None
    for i in range(n):
        got = canonical(coproduct(star(C(i)), n).map(star, star))
        want = canonical(conjugate_coproduct_c(n, i))
        if got != want:
            ok = False
            witness = f"c{i + 1}: {(got - want).render()}"
            break
    parts.append(VerificationReport.passed("conjugate-coproduct", {"generators": n}) if ok else
                 VerificationReport.failed("conjugate-coproduct", witness, {"generators": n}))
    # (2) operational
    dual = Duality(ctx)
    result = None
    count = 0
    for a, b in _pairs(ctx.alg, degree):
        v = {(a, b): ONE}
        for i in range(n):
            count += 1
            lhs = act_tensor(ctx, conjugate_coproduct_c(n, i), v)
            rhs = dual.apply_exp(act_tensor(ctx, coproduct(C(i), n), dual.apply_exp(v)), inverse=True)
            diff = dict(lhs)
            for k, c in rhs.items():
                _add_into(diff, k, -c)
            if diff:
                result = VerificationReport.failed(
                    "conjugation-operational", f"c{i + 1} on {ctx.alg.render_word(a)} (x) "
                    f"{ctx.alg.render_word(b)}: residual {ncalg.render_tensor(diff, ctx.alg)}", {"degree": degree})
                break
        if result:
            break
    parts.append(result or VerificationReport.passed("conjugation-operational",
                                                     {"degree": degree, "evaluations": count}))
    return VerificationReport.merge("conjugation", parts, params)
