"""R-matrix data, validity predicates and the spinorial gauge constructions.

Indices are 0-based internally; files and rendered output are 1-based.  An
entry ``R[i, j, k, l]`` is the coefficient usually written R^i_j^k_l, i.e.
row ``(i, k)`` and column ``(j, l)`` of the n^2 x n^2 matrix.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from . import linalg
from .qcoeff import ONE, QDIFF, QINV, ZERO, QRat, q
from .report import VerificationReport, timed

Index4 = Tuple[int, int, int, int]


class RMatrixError(ValueError):
    pass


class RMatrixData:
    """Sparse n^2 x n^2 matrix over Q(q) viewed as a 4-index tensor."""

    __slots__ = ("n", "entries", "name", "_by_lower", "_by_upper")

    def __init__(self, n: int, entries: Dict[Index4, QRat], name: str = ""):
        if n < 1:
            raise RMatrixError("dimension must be positive")
        clean = {}
        for (i, j, k, l), v in entries.items():
            if not all(0 <= t < n for t in (i, j, k, l)):
                raise RMatrixError(f"index {(i, j, k, l)} out of range for n={n}")
            v = QRat.coerce(v)
            if v:
                clean[(i, j, k, l)] = v
        self.n = n
        self.entries = clean
        self.name = name
        self._by_lower = None
        self._by_upper = None

    def __getitem__(self, idx: Index4) -> QRat:
        return self.entries.get(idx, ZERO)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RMatrixData):
            return NotImplemented
        return self.n == other.n and self.entries == other.entries

    def __repr__(self) -> str:
        return f"RMatrixData(n={self.n}, name={self.name!r}, nnz={len(self.entries)})"

    def by_lower(self) -> Dict[Tuple[int, int], List[Tuple[int, int, QRat]]]:
        """``(j, l) -> [(i, k, R^i_j^k_l), ...]``."""
        if self._by_lower is None:
            table: Dict[Tuple[int, int], list] = {}
            for (i, j, k, l), v in self.entries.items():
                table.setdefault((j, l), []).append((i, k, v))
            self._by_lower = table
        return self._by_lower

    def by_upper(self) -> Dict[Tuple[int, int], List[Tuple[int, int, QRat]]]:
        """``(i, k) -> [(j, l, R^i_j^k_l), ...]``."""
        if self._by_upper is None:
            table: Dict[Tuple[int, int], list] = {}
            for (i, j, k, l), v in self.entries.items():
                table.setdefault((i, k), []).append((j, l, v))
            self._by_upper = table
        return self._by_upper

    # matrix views -----------------------------------------------------------
    def to_matrix(self) -> List[List[QRat]]:
        n = self.n
        m = [[ZERO] * (n * n) for _ in range(n * n)]
        for (i, j, k, l), v in self.entries.items():
            m[i * n + k][j * n + l] = v
        return m

    @classmethod
    def from_matrix(cls, n: int, m: Sequence[Sequence[QRat]], name: str = "") -> "RMatrixData":
        entries = {}
        for r, row in enumerate(m):
            i, k = divmod(r, n)
            for c, v in enumerate(row):
                if v:
                    j, l = divmod(c, n)
                    entries[(i, j, k, l)] = v
        return cls(n, entries, name)

    def inverse(self) -> "RMatrixData":
        try:
            inv = linalg.inverse(self.to_matrix())
        except linalg.SingularMatrixError:
            raise RMatrixError(f"R-matrix {self.name!r} is not invertible") from None
        return RMatrixData.from_matrix(self.n, inv, f"{self.name}^-1")

    def flip(self) -> "RMatrixData":
        """R_21, with ``R_21^i_j^k_l = R^k_l^i_j``."""
        return RMatrixData(self.n, {(k, l, i, j): v for (i, j, k, l), v in self.entries.items()},
                           f"{self.name}_21")

    def partial_transpose2(self) -> "RMatrixData":
        return RMatrixData(self.n, {(i, j, l, k): v for (i, j, k, l), v in self.entries.items()},
                           f"{self.name}^t2")

    def scaled(self, c: QRat) -> "RMatrixData":
        return RMatrixData(self.n, {k: v * c for k, v in self.entries.items()}, self.name)

    # serialization ----------------------------------------------------------
    def entries_json(self) -> list:
        out = []
        for (i, j, k, l), v in sorted(self.entries.items()):
            d = {"i": i + 1, "j": j + 1, "k": k + 1, "l": l + 1}
            d.update(v.to_json())
            out.append(d)
        return out

    @classmethod
    def from_entries_json(cls, n: int, items: list, name: str = "") -> "RMatrixData":
        entries = {}
        for pos, e in enumerate(items):
            try:
                idx = (int(e["i"]) - 1, int(e["j"]) - 1, int(e["k"]) - 1, int(e["l"]) - 1)
                entries[idx] = QRat(e["num"], e.get("den", [1]))
            except (KeyError, TypeError, ValueError) as exc:
                raise RMatrixError(f"entries[{pos}]: {exc}") from None
        return cls(n, entries, name)


@dataclass
class MetricData:
    n: int
    eta_lower: List[List[QRat]]
    eta_upper: List[List[QRat]]

    @classmethod
    def from_lower(cls, eta_lower: Sequence[Sequence[QRat]]) -> "MetricData":
        lower = [[QRat.coerce(v) for v in row] for row in eta_lower]
        upper = linalg.transpose(linalg.inverse(lower))
        return cls(len(lower), lower, upper)

    @classmethod
    def from_upper(cls, eta_upper: Sequence[Sequence[QRat]]) -> "MetricData":
        upper = [[QRat.coerce(v) for v in row] for row in eta_upper]
        lower = linalg.inverse(linalg.transpose(upper))
        return cls(len(upper), lower, upper)

    def is_consistent(self) -> bool:
        prod = linalg.matmul(linalg.transpose(self.eta_upper), self.eta_lower)
        return prod == linalg.identity(self.n)

    def to_json(self) -> dict:
        return {"n": self.n, "eta_lower": [[v.to_json() for v in row] for row in self.eta_lower]}

    @classmethod
    def from_json(cls, obj: dict) -> "MetricData":
        m = cls.from_lower([[QRat.from_json(v) for v in row] for row in obj["eta_lower"]])
        if m.n != obj.get("n", m.n):
            raise RMatrixError("metric dimension mismatch")
        return m


@dataclass
class PairData:
    """The data (R', R, lambda) of a covector braided group, plus reality."""

    r_prime: RMatrixData
    r: RMatrixData
    lam: QRat
    metric: Optional[MetricData] = None
    reality: Optional[str] = None  # "I", "II" or None
    involution: Optional[Tuple[int, ...]] = None
    small: Optional[RMatrixData] = None
    gauge: Optional[str] = None
    name: str = ""

    def __post_init__(self):
        if self.r.n != self.r_prime.n:
            raise RMatrixError("R and R' must have equal dimension")
        if not self.lam:
            raise RMatrixError("lambda must be nonzero")
        if self.reality not in (None, "I", "II"):
            raise RMatrixError(f"unknown reality type {self.reality!r}")
        if self.reality == "II":
            inv = self.involution
            if inv is None or sorted(inv) != list(range(self.n)):
                raise RMatrixError("type II reality needs a permutation of 1..n")
            if any(inv[inv[i]] != i for i in range(self.n)):
                raise RMatrixError("type II involution is not its own inverse")

    @property
    def n(self) -> int:
        return self.r.n


# ---------------------------------------------------------------------------
# sparse operators on tensor powers
# ---------------------------------------------------------------------------

Operator = Dict[tuple, Dict[tuple, QRat]]


def _embed(R: RMatrixData, slots: Tuple[int, int], width: int) -> Operator:
    """R acting on tensor factors ``slots`` of a ``width``-fold tensor power."""
    n = R.n
    a, b = slots
    op: Operator = {}
    others = [p for p in range(width) if p not in slots]
    for rest in itertools.product(range(n), repeat=len(others)):
        for (i, j, k, l), v in R.entries.items():
            row = [0] * width
            col = [0] * width
            for p, val in zip(others, rest):
                row[p] = col[p] = val
            row[a], row[b] = i, k
            col[a], col[b] = j, l
            op.setdefault(tuple(row), {})[tuple(col)] = v
    return op


def _compose(A: Operator, B: Operator) -> Operator:
    out: Operator = {}
    for r, arow in A.items():
        acc: Dict[tuple, QRat] = {}
        for t, av in arow.items():
            brow = B.get(t)
            if not brow:
                continue
            for c, bv in brow.items():
                nv = acc.get(c, ZERO) + av * bv
                if nv:
                    acc[c] = nv
                else:
                    acc.pop(c, None)
        if acc:
            out[r] = acc
    return out


def _difference(A: Operator, B: Operator) -> Iterator[Tuple[tuple, tuple, QRat]]:
    for r in set(A) | set(B):
        ar, br = A.get(r, {}), B.get(r, {})
        for c in set(ar) | set(br):
            d = ar.get(c, ZERO) - br.get(c, ZERO)
            if d:
                yield r, c, d


def _fmt_idx(t: tuple) -> str:
    return "".join(str(v + 1) for v in t)


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------

@timed
def check_ybe(R: RMatrixData) -> VerificationReport:
    """R12 R13 R23 == R23 R13 R12 on V^{(x)3}."""
    r12, r13, r23 = (_embed(R, s, 3) for s in ((0, 1), (0, 2), (1, 2)))
    lhs = _compose(_compose(r12, r13), r23)
    rhs = _compose(_compose(r23, r13), r12)
    params = {"n": R.n, "name": R.name}
    for r, c, d in _difference(lhs, rhs):
        return VerificationReport.failed(
            "ybe", f"residual[{_fmt_idx(r)},{_fmt_idx(c)}] = {d.render()}", params)
    return VerificationReport.passed("ybe", params)


def permutation(n: int) -> RMatrixData:
    """The flip P with ``P^i_j^k_l = delta^i_l delta^k_j``."""
    return RMatrixData(n, {(i, j, j, i): ONE for i in range(n) for j in range(n)}, "P")


def identity_rmatrix(n: int) -> RMatrixData:
    return RMatrixData(n, {(i, i, k, k): ONE for i in range(n) for k in range(n)}, "id")


def pr_matrix(R: RMatrixData) -> List[List[QRat]]:
    return linalg.matmul(permutation(R.n).to_matrix(), R.to_matrix())


@timed
def check_hecke(R: RMatrixData) -> VerificationReport:
    """``(PR - q)(PR + q^-1) == 0``."""
    n2 = R.n * R.n
    pr = pr_matrix(R)
    a = [[pr[i][j] - (q if i == j else ZERO) for j in range(n2)] for i in range(n2)]
    b = [[pr[i][j] + (QINV if i == j else ZERO) for j in range(n2)] for i in range(n2)]
    prod = linalg.matmul(a, b)
    params = {"n": R.n, "name": R.name}
    for r in range(n2):
        for c in range(n2):
            if prod[r][c]:
                i, k = divmod(r, R.n)
                j, l = divmod(c, R.n)
                return VerificationReport.failed(
                    "hecke", f"residual[{_fmt_idx((i, k))},{_fmt_idx((j, l))}] = {prod[r][c].render()}",
                    params)
    return VerificationReport.passed("hecke", params)


@timed
def check_reality(pair: PairData) -> VerificationReport:
    """Reality conditions on R and the metric for real q (conjugation trivial on Q(q))."""
    if pair.reality is None:
        raise RMatrixError("no reality type declared")
    R = pair.r
    n = R.n
    params = {"type": pair.reality, "name": R.name}
    if pair.reality == "I":
        def partner(i, j, k, l):
            return (l, k, j, i)
    else:
        bar = pair.involution

        def partner(i, j, k, l):
            return (bar[j], bar[l], bar[i], bar[k])
    for idx in itertools.product(range(n), repeat=4):
        if R[idx] != R[partner(*idx)]:
            return VerificationReport.failed(
                "reality", f"R[{_fmt_idx(idx)}] = {R[idx].render()} but "
                           f"R[{_fmt_idx(partner(*idx))}] = {R[partner(*idx)].render()}", params)
    if pair.metric is not None:
        lo, up = pair.metric.eta_lower, pair.metric.eta_upper
        for i in range(n):
            for j in range(n):
                if pair.reality == "I":
                    want = up[j][i]
                else:
                    want = lo[pair.involution[j]][pair.involution[i]]
                if lo[i][j] != want:
                    return VerificationReport.failed(
                        "reality", f"eta_lower[{i + 1},{j + 1}] = {lo[i][j].render()} "
                                   f"!= {want.render()}", params)
    return VerificationReport.passed("reality", params)


# ---------------------------------------------------------------------------
# standard data and gauge constructions
# ---------------------------------------------------------------------------

def standard_su2() -> RMatrixData:
    """su_2 R-matrix in the q-Hecke normalisation."""
    e = {
        (0, 0, 0, 0): q,
        (0, 0, 1, 1): ONE,
        (1, 1, 0, 0): ONE,
        (1, 1, 1, 1): q,
        (0, 1, 1, 0): QDIFF,
    }
    return RMatrixData(2, e, "su2")


def _require_hecke(R: RMatrixData) -> None:
    rep = check_hecke(R)
    if not rep.ok:
        raise RMatrixError(f"small R-matrix {R.name!r} is not q-Hecke: {rep.witness}")


def build_euclidean_gauge(R: RMatrixData) -> PairData:
    _require_hecke(R)
    s = R.n
    Rinv = R.inverse()
    rp: Dict[Index4, QRat] = {}
    rb: Dict[Index4, QRat] = {}
    for (i1, j1, k1, l1), v in R.entries.items():
        # R'^i_j^k_l = R^-1^{l0}_{k0}^{j0}_{i0} R^{i1}_{j1}^{k1}_{l1}
        for (l0, k0, j0, i0), w in Rinv.entries.items():
            rp[(i0 * s + i1, j0 * s + j1, k0 * s + k1, l0 * s + l1)] = w * v
        # R^i_j^k_l = R^{j0}_{i0}^{l0}_{k0} R^{i1}_{j1}^{k1}_{l1}
        for (j0, i0, l0, k0), w in R.entries.items():
            rb[(i0 * s + i1, j0 * s + j1, k0 * s + k1, l0 * s + l1)] = w * v
    n = s * s
    return PairData(RMatrixData(n, rp, f"{R.name}-euclidean'"), RMatrixData(n, rb, f"{R.name}-euclidean"),
                    QINV, small=R, gauge="euclidean", name=f"{R.name}-euclidean")


def second_inverse(R: RMatrixData) -> RMatrixData:
    """((R^{t2})^{-1})^{t2}."""
    try:
        inv = R.partial_transpose2().inverse()
    except RMatrixError:
        raise RMatrixError("partial transpose of R is singular; second inverse does not exist") from None
    out = inv.partial_transpose2()
    out.name = f"{R.name}~"
    return out


def build_minkowski_gauge(R: RMatrixData) -> PairData:
    _require_hecke(R)
    s = R.n
    Rinv = R.inverse()
    Rt = second_inverse(R)
    rng = range(s)
    rp: Dict[Index4, QRat] = {}
    rb: Dict[Index4, QRat] = {}
    for i0, i1, j0, j1, k0, k1, l0, l1 in itertools.product(rng, repeat=8):
        acc_p = ZERO
        acc_b = ZERO
        for a, b, c, d in itertools.product(rng, repeat=4):
            tail = R[k1, b, a, i0]
            if not tail:
                continue
            tail = tail * R[i1, c, b, l1]
            if not tail:
                continue
            tail = tail * Rt[c, j1, l0, d]
            if not tail:
                continue
            h1 = Rinv[d, k0, j0, a]
            if h1:
                acc_p = acc_p + h1 * tail
            h2 = R[j0, a, d, k0]
            if h2:
                acc_b = acc_b + h2 * tail
        idx = (i0 * s + i1, j0 * s + j1, k0 * s + k1, l0 * s + l1)
        if acc_p:
            rp[idx] = acc_p
        if acc_b:
            rb[idx] = acc_b
    n = s * s
    pair = PairData(RMatrixData(n, rp, f"{R.name}-minkowski'"), RMatrixData(n, rb, f"{R.name}-minkowski"),
                    QINV, small=R, gauge="minkowski", name=f"{R.name}-minkowski")
    rep = check_ybe(pair.r)
    if not rep.ok:
        raise RMatrixError(f"Minkowski-gauge R fails the QYBE: {rep.witness}")
    return pair


# ---------------------------------------------------------------------------
# file formats
# ---------------------------------------------------------------------------

def load_rmatrix_file(path: str) -> dict:
    """Parse an R-matrix file into its components.

    Returns a dict with keys ``r`` (RMatrixData), ``lam`` (QRat or None),
    ``reality``, ``involution`` and ``r_prime`` (RMatrixData or None).
    """
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RMatrixError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    return rmatrix_from_json(obj, source=path)


def rmatrix_from_json(obj: dict, source: str = "<json>") -> dict:
    try:
        n = int(obj["n"])
        name = str(obj.get("name", ""))
        r = RMatrixData.from_entries_json(n, obj.get("entries", []), name)
        r_prime = None
        if "r_prime" in obj:
            r_prime = RMatrixData.from_entries_json(n, obj["r_prime"], f"{name}'")
        lam = QRat.from_json(obj["lambda"]) if "lambda" in obj else None
        reality = {"I": "I", "II": "II", "none": None, None: None}[obj.get("reality", "none")]
        inv = obj.get("involution")
        involution = tuple(int(v) - 1 for v in inv) if inv is not None else None
    except RMatrixError as exc:
        raise RMatrixError(f"{source}: {exc}") from None
    except (KeyError, TypeError, ValueError) as exc:
        raise RMatrixError(f"{source}: malformed R-matrix record ({exc!r})") from None
    return {"r": r, "r_prime": r_prime, "lam": lam, "reality": reality, "involution": involution}


def rmatrix_to_json(R: RMatrixData, lam: Optional[QRat] = None, reality: Optional[str] = None,
                    involution: Optional[Sequence[int]] = None, r_prime: Optional[RMatrixData] = None) -> dict:
    out = {"n": R.n, "name": R.name, "entries": R.entries_json(),
           "reality": reality or "none"}
    if r_prime is not None:
        out["r_prime"] = r_prime.entries_json()
    if lam is not None:
        out["lambda"] = lam.to_json()
    if involution is not None:
        out["involution"] = [v + 1 for v in involution]
    return out


def load_metric_file(path: str) -> MetricData:
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise RMatrixError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    try:
        return MetricData.from_json(obj)
    except (KeyError, TypeError, ValueError, linalg.SingularMatrixError) as exc:
        raise RMatrixError(f"{path}: malformed metric ({exc!r})") from None


# ---------------------------------------------------------------------------
# quantum metric
# ---------------------------------------------------------------------------

class MetricError(RMatrixError):
    pass


def find_metric(pair: PairData) -> MetricData:
    """Solve for eta with x.x = x_a x_b eta^{ba} central and Psi(x.x (x) x_i) = lam^-2 x_i (x) x.x.

    The two conditions are solved for x.x in normal-word coordinates, which
    must give a one-dimensional space.  The tensor eta^{ba} is then fixed by
    the covariance condition R^e_b^f_i eta^{ba} = lam^-2 eta^{eb} R^-1^a_b^f_i
    together with x_a x_b eta^{ba} = x.x.  Normalised so that eta^{1n} = 1 (the first nonzero entry if that one vanishes).
    """
    from . import ncalg  # local: ncalg depends on this module

    n = pair.n
    alg = ncalg.NCAlgebra.from_rmatrix(pair.r_prime)
    psi = ncalg.Braiding(pair.r)
    lam2 = pair.lam ** -2
    words = alg.normal_words(2)
    rows: Dict[tuple, Dict[tuple, QRat]] = {}

    def put(key, unknown, c):
        row = rows.setdefault(key, {})
        nv = row.get(unknown, ZERO) + c
        if nv:
            row[unknown] = nv
        else:
            row.pop(unknown, None)

    for w in words:
        for i in range(n):
            comm = alg.word(w + (i,)) - alg.word((i,) + w)
            for v, c in comm.terms.items():
                put(("central", i, v), w, c)
            braided = ncalg.reduce_tensor(psi.words(w, (i,)), alg, alg)
            braided[((i,), w)] = braided.get(((i,), w), ZERO) - lam2
            for key, c in braided.items():
                if c:
                    put(("scaling", i, key), w, c)
    sols = linalg.nullspace(list(rows.values()), words)
    if not sols:
        raise MetricError("no quantum metric")
    if len(sols) > 1:
        raise MetricError(f"metric not unique ({len(sols)}-dimensional solution space)")
    xx = sols[0]

    # lift x.x to eta^{ba}; unknowns ("e", b, a) and a scale ("t",)
    R, Rinv = pair.r, pair.r.inverse()
    lift: Dict[tuple, Dict[tuple, QRat]] = {}

    def lput(key, unknown, c):
        row = lift.setdefault(key, {})
        nv = row.get(unknown, ZERO) + c
        if nv:
            row[unknown] = nv
        else:
            row.pop(unknown, None)

    for (e, b, f, i), v in R.entries.items():
        for a in range(n):
            lput(("cov", e, f, i, a), ("e", b, a), v)
    for (a, b, f, i), v in Rinv.entries.items():
        for e in range(n):
            lput(("cov", e, f, i, a), ("e", e, b), -lam2 * v)
    for a in range(n):
        for b in range(n):
            for w, c in alg.normal_form((a, b)).items():
                lput(("sq", w), ("e", b, a), c)
    for w, c in xx.items():
        lput(("sq", w), ("t",), -c)
    unknowns = [("e", b, a) for b in range(n) for a in range(n)] + [("t",)]
    lifted = [s for s in linalg.nullspace(list(lift.values()), unknowns) if s.get(("t",))]
    if len(lifted) != 1:
        raise MetricError("x.x admits no unique covariant metric tensor"
                          if lifted else "no covariant metric tensor lifts x.x")
    sol = lifted[0]
    up = [[sol.get(("e", b, a), ZERO) for a in range(n)] for b in range(n)]
    pivot = up[0][n - 1] or next(v for row in up for v in row if v)
    norm = pivot.inverse()
    return MetricData.from_upper([[v * norm for v in row] for row in up])


@timed
def check_metric(pair: PairData, metric: Optional[MetricData] = None) -> VerificationReport:
    """Substitute eta back: x.x central and Psi(x.x (x) x_i) = lam^-2 x_i (x) x.x."""
    from . import ncalg

    metric = metric or pair.metric
    if metric is None:
        raise MetricError("no metric to check")
    params = {"name": pair.name}
    alg = ncalg.NCAlgebra.from_rmatrix(pair.r_prime)
    try:
        xx = ncalg.metric_square(metric, alg)
    except ncalg.NCAlgebraError as exc:
        return VerificationReport.failed("metric", str(exc), params)
    if not xx:
        return VerificationReport.failed("metric", "x.x vanishes", params)
    psi = ncalg.Braiding(pair.r)
    lam2 = pair.lam ** -2
    for i in range(pair.n):
        got = ncalg.braiding(xx, alg.gen(i), pair.r, psi)
        want = {((i,), w): c * lam2 for w, c in xx.terms.items()}
        diff = dict(got)
        for k, c in want.items():
            ncalg._add_into(diff, k, -c)
        if diff:
            return VerificationReport.failed(
                "metric", f"Psi(x.x (x) x{i + 1}) - lam^-2 x{i + 1} (x) x.x = {ncalg.render_tensor(diff, alg)}",
                params)
    return VerificationReport.passed("metric", params)
