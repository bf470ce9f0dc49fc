import dataclasses
import json
import itertools

import pytest

from braidkit import linalg, ncalg, rtensor
from braidkit.qcoeff import ONE, QDIFF, QINV, ZERO, eval_q1, q
from braidkit.rtensor import MetricData, MetricError, PairData, RMatrixData, RMatrixError


def test_standard_su2_entries():
    R = rtensor.standard_su2()
    assert R[0, 0, 0, 0] == q
    assert R[0, 1, 1, 0] == QDIFF  # row 12, column 21
    assert R[0, 0, 1, 1] == ONE and R[1, 1, 0, 0] == ONE and R[1, 1, 1, 1] == q
    assert len(R.entries) == 5


def test_ybe_examples():
    assert rtensor.check_ybe(rtensor.identity_rmatrix(2)).ok
    assert rtensor.check_ybe(rtensor.standard_su2()).ok
    broken = rtensor.standard_su2().entries.copy()
    broken[(0, 1, 1, 0)] = ONE
    rep = rtensor.check_ybe(RMatrixData(2, broken, "broken"))
    assert rep.status == "fail"
    assert "residual[" in rep.witness


def test_hecke_examples():
    assert rtensor.check_hecke(rtensor.standard_su2()).ok
    assert not rtensor.check_hecke(rtensor.identity_rmatrix(2)).ok
    assert not rtensor.check_hecke(rtensor.identity_rmatrix(2).scaled(q)).ok


def test_pr_minimal_polynomial():
    pr = rtensor.pr_matrix(rtensor.standard_su2())
    eye = linalg.identity(4)
    a = [[pr[i][j] - q * eye[i][j] for j in range(4)] for i in range(4)]
    b = [[pr[i][j] + QINV * eye[i][j] for j in range(4)] for i in range(4)]
    assert all(v == ZERO for row in linalg.matmul(a, b) for v in row)
    assert any(v != ZERO for row in a for v in row) and any(v != ZERO for row in b for v in row)


def test_euclidean_gauge(euclid):
    assert euclid.n == 4 and euclid.lam == QINV
    assert rtensor.check_ybe(euclid.r).ok
    # row-major flattening: R = R^t-factor (x) R-factor
    R = rtensor.standard_su2()
    for (i0, i1, j0, j1, k0, k1, l0, l1) in itertools.product(range(2), repeat=8):
        want = R[j0, i0, l0, k0] * R[i1, j1, k1, l1]
        assert euclid.r[2 * i0 + i1, 2 * j0 + j1, 2 * k0 + k1, 2 * l0 + l1] == want


def test_minkowski_gauge(mink):
    assert mink.n == 4 and mink.lam == QINV
    assert rtensor.check_ybe(mink.r).ok


def test_second_inverse_property():
    R = rtensor.standard_su2()
    Rt = rtensor.second_inverse(R)
    # ((R^t2)^-1)^t2 undoes R under partial transposition
    prod = linalg.matmul(R.partial_transpose2().to_matrix(), Rt.partial_transpose2().to_matrix())
    assert prod == linalg.identity(4)


def _mat(R):
    return {((i, k), (j, l)): v for (i, j, k, l), v in R.entries.items()}


def _mat_u(slot, gen, s):
    out = {}
    for a, b, c in itertools.product(range(s), repeat=3):
        key = ((a, c), (b, c)) if slot == 1 else ((c, a), (c, b))
        out[key] = gen(a, b)
    return out


def _mul(A, B):
    out = {}
    for (r, m), x in A.items():
        for (m2, c), y in B.items():
            if m != m2:
                continue
            xs = x if isinstance(x, dict) else {(): x}
            ys = y if isinstance(y, dict) else {(): y}
            acc = out.setdefault((r, c), {})
            for w1, c1 in xs.items():
                for w2, c2 in ys.items():
                    ncalg._add_into(acc, w1 + w2, c1 * c2)
    return out


def _relation_rows(lhs, rhs):
    rows = []
    for k in set(lhs) | set(rhs):
        d = dict(lhs.get(k, {}))
        for w, c in rhs.get(k, {}).items():
            ncalg._add_into(d, w, -c)
        if d:
            rows.append(d)
    return rows


def _same_span(alg, rows):
    order = sorted(itertools.product(range(alg.n), repeat=2), reverse=True)
    return all(not alg.reduce(r) for r in rows) and len(linalg.rref(rows, order)) == alg.rels.dimension


def test_euclidean_momentum_relations_are_spinor_matrix_relations(euclid):
    R = rtensor.standard_su2()
    R21 = R.flip()
    palg = ncalg.NCAlgebra(ncalg.build_relations(euclid.r_prime, "vector"))
    gen = lambda a, b: {((2 * b + a),): ONE}  # p^i with i = (i0, i1) is the matrix entry u^{i1}_{i0}
    u1, u2 = _mat_u(1, gen, 2), _mat_u(2, gen, 2)
    rows = _relation_rows(_mul(_mul(_mat(R21), u1), u2), _mul(_mul(u2, u1), _mat(R)))
    assert _same_span(palg, rows)


def test_minkowski_momentum_relations_are_braided_matrix_relations(mink):
    R = rtensor.standard_su2()
    R21 = R.flip()
    palg = ncalg.NCAlgebra(ncalg.build_relations(mink.r_prime, "vector"))
    lo = mink.metric.eta_lower
    gen = lambda a, b: {(k,): lo[2 * a + b][k] for k in range(4) if lo[2 * a + b][k]}  # eta_ia p^a = u^{i0}_{i1}
    u1, u2 = _mat_u(1, gen, 2), _mat_u(2, gen, 2)
    lhs = _mul(_mul(_mul(_mat(R21), u1), _mat(R)), u2)
    rhs = _mul(_mul(_mul(u2, _mat(R21)), u1), _mat(R))
    assert _same_span(palg, _relation_rows(lhs, rhs))


def test_euclidean_metric(euclid):
    up = [[ZERO, ZERO, ZERO, ONE], [ZERO, ZERO, -q, ZERO], [ZERO, -QINV, ZERO, ZERO], [ONE, ZERO, ZERO, ZERO]]
    assert euclid.metric.eta_upper == up
    assert euclid.metric.is_consistent()
    classical = [[eval_q1(v) for v in row] for row in euclid.metric.eta_lower]
    assert classical == [[0, 0, 0, 1], [0, 0, -1, 0], [0, -1, 0, 0], [1, 0, 0, 0]]
    assert rtensor.check_metric(euclid).ok


def test_minkowski_metric(mink):
    up = [[-ONE + QINV * QINV, ZERO, ZERO, ONE], [ZERO, ZERO, -q ** 2, ZERO],
          [ZERO, -ONE, ZERO, ZERO], [ONE, ZERO, ZERO, ZERO]]
    assert mink.metric.eta_upper == up
    assert rtensor.check_metric(mink).ok


def test_metric_not_unique_for_commutative_case():
    one = rtensor.identity_rmatrix(2)
    with pytest.raises(MetricError, match="metric not unique"):
        rtensor.find_metric(PairData(one, one, ONE))


def test_no_metric_for_free_algebra():
    p = rtensor.permutation(2)
    with pytest.raises(MetricError, match="no quantum metric"):
        rtensor.find_metric(PairData(p, p, ONE))


def test_reality(euclid, mink):
    assert rtensor.check_reality(euclid).ok
    rep = rtensor.check_reality(dataclasses.replace(mink, reality="I"))
    assert rep.status == "fail"
    assert rep.witness == "R[1114] = q^2 - 2 + q^-2 but R[4111] = 0"
    with pytest.raises(RMatrixError, match="no reality type declared"):
        rtensor.check_reality(mink)


def test_reality_small_cases():
    diag = RMatrixData(2, {(i, i, k, k): q for i in range(2) for k in range(2)})
    assert rtensor.check_reality(PairData(diag, diag, ONE, reality="I")).ok
    R = rtensor.standard_su2()
    rep = rtensor.check_reality(PairData(R, R, ONE, reality="II", involution=(0, 1)))
    assert rep.status == "fail"


def test_pair_invariants():
    R = rtensor.standard_su2()
    with pytest.raises(RMatrixError, match="lambda"):
        PairData(R, R, ZERO)
    with pytest.raises(RMatrixError):
        PairData(R, rtensor.identity_rmatrix(3), ONE)
    with pytest.raises(RMatrixError, match="permutation"):
        PairData(R, R, ONE, reality="II", involution=(0, 0))


def test_inverse_and_flip():
    R = rtensor.standard_su2()
    assert linalg.matmul(R.to_matrix(), R.inverse().to_matrix()) == linalg.identity(4)
    assert R.flip().flip() == R
    singular = RMatrixData(2, {(0, 0, 0, 0): ONE})
    with pytest.raises(RMatrixError, match="not invertible"):
        singular.inverse()


def test_file_round_trip(tmp_path, euclid):
    path = tmp_path / "euc.json"
    path.write_text(json.dumps(rtensor.rmatrix_to_json(euclid.r, euclid.lam, "I", r_prime=euclid.r_prime)))
    data = rtensor.load_rmatrix_file(str(path))
    assert data["r"] == euclid.r and data["r_prime"] == euclid.r_prime
    assert data["lam"] == QINV and data["reality"] == "I"
    mpath = tmp_path / "eta.json"
    mpath.write_text(json.dumps(euclid.metric.to_json()))
    assert rtensor.load_metric_file(str(mpath)).eta_upper == euclid.metric.eta_upper


def test_file_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(RMatrixError, match="bad.json:1"):
        rtensor.load_rmatrix_file(str(bad))
    bad.write_text(json.dumps({"n": 2, "entries": [{"i": 3, "j": 1, "k": 1, "l": 1, "num": [1]}]}))
    with pytest.raises(RMatrixError, match="out of range"):
        rtensor.load_rmatrix_file(str(bad))
    bad.write_text(json.dumps({"entries": []}))
    with pytest.raises(RMatrixError, match="malformed"):
        rtensor.load_rmatrix_file(str(bad))


def test_metric_data_transposed_inverse():
    m = MetricData.from_lower([[ONE, q], [ZERO, ONE]])
    assert m.is_consistent()
    assert MetricData.from_upper(m.eta_upper).eta_lower == m.eta_lower
