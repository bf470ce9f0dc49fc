"""Dense and sparse exact linear algebra over Q(q).

Matrices are lists of lists of :class:`QRat`.  Row reduction works on sparse
rows (``dict`` column -> QRat) because the systems met here are wide and
mostly zero.
"""
from __future__ import annotations

from typing import Dict, Hashable, Iterable, List, Sequence

from .qcoeff import ONE, ZERO, QRat

SparseRow = Dict[Hashable, QRat]


class SingularMatrixError(ArithmeticError):
    pass


def identity(n: int) -> List[List[QRat]]:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence[QRat]], b: Sequence[Sequence[QRat]]) -> List[List[QRat]]:
    m, k, n = len(a), len(b), len(b[0]) if b else 0
    out = []
    for i in range(m):
        row = []
        ai = a[i]
        for j in range(n):
            acc = ZERO
            for t in range(k):
                x = ai[t]
                if x:
                    y = b[t][j]
                    if y:
                        acc = acc + x * y
            row.append(acc)
        out.append(row)
    return out


def transpose(a: Sequence[Sequence[QRat]]) -> List[List[QRat]]:
    return [list(col) for col in zip(*a)]


def inverse(a: Sequence[Sequence[QRat]]) -> List[List[QRat]]:
    """Gauss-Jordan inverse; raises :class:`SingularMatrixError`."""
    n = len(a)
    m = [list(row) + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular over Q(q)")
        m[col], m[piv] = m[piv], m[col]
        inv = m[col][col].inverse()
        m[col] = [v * inv if v else v for v in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                pr = m[col]
                m[r] = [x - f * y if y else x for x, y in zip(m[r], pr)]
    return [row[n:] for row in m]


def rref(rows: Iterable[SparseRow], order: Sequence[Hashable]) -> List[SparseRow]:
    """Reduced row-echelon form of sparse rows.

    ``order`` lists the columns from most to least significant; the pivot of
    each output row is its most significant nonzero column and carries
    coefficient one.  Zero rows are dropped.  Output is sorted by pivot.
    """
    rank = {c: i for i, c in enumerate(order)}
    pivots: Dict[Hashable, SparseRow] = {}
    for row in rows:
        r = {k: v for k, v in row.items() if v}
        # pivot rows contain no other pivot column, so one pass suffices
        for p in [c for c in r if c in pivots]:
            f = r.get(p)
            if f:
                _axpy(r, -f, pivots[p])
        if not r:
            continue
        lead = min(r, key=rank.__getitem__)
        inv = r[lead].inverse()
        r = {k: v * inv for k, v in r.items()}
        for prow in pivots.values():
            f = prow.get(lead)
            if f:
                _axpy(prow, -f, r)
        pivots[lead] = r
    return [pivots[c] for c in sorted(pivots, key=rank.__getitem__)]


def _axpy(target: SparseRow, f: QRat, src: SparseRow) -> None:
    for k, v in src.items():
        nv = target.get(k, ZERO) + f * v
        if nv:
            target[k] = nv
        else:
            target.pop(k, None)


def nullspace(rows: Iterable[SparseRow], unknowns: Sequence[Hashable]) -> List[Dict[Hashable, QRat]]:
    """Basis of the solution space of the homogeneous system ``rows . v = 0``."""
    rank = {u: i for i, u in enumerate(unknowns)}
    echelon = rref(rows, unknowns)
    leads = [min(r, key=rank.__getitem__) for r in echelon]
    pivot_cols = set(leads)
    free = [u for u in unknowns if u not in pivot_cols]
    basis = []
    for f in free:
        vec = {f: ONE}
        for p, r in zip(leads, echelon):
            c = r.get(f)
            if c:
                vec[p] = -c
        basis.append(vec)
    return basis
