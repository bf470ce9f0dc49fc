import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from braidkit import ncalg, rtensor
from braidkit.ncalg import Braiding, NCAlgebra, NCAlgebraError, render_tensor
from braidkit.qcoeff import ONE, q


def test_relation_count_and_hilbert_series(alg):
    assert alg.rels.dimension == 6
    assert [len(alg.normal_words(d)) for d in range(5)] == [1, 4, 10, 20, 35]
    assert set(alg.rels.pivots) == {(j, i) for i in range(4) for j in range(4) if j > i}


def test_confluence(euclid, mink):
    for pair in (euclid, mink):
        assert ncalg.check_confluence(ncalg.build_relations(pair.r_prime), 3).ok
        assert ncalg.check_confluence(ncalg.build_relations(pair.r_prime, "vector"), 3).ok


def test_completion_restores_hilbert_series(mink):
    rels = ncalg.build_relations(mink.r_prime, "vector")
    assert rels.dimension == 6 and rels.quadratic == 6
    assert len(rels.rules) > 6 and rels.truncated
    palg = NCAlgebra(rels)
    assert [len(palg.normal_words(d)) for d in range(7)] == [1, 4, 10, 20, 35, 56, 84]
    with pytest.raises(NCAlgebraError, match="only known up to degree 6"):
        palg.normal_form((3,) * 7)
    assert not ncalg.build_relations(mink.r_prime).truncated


def test_confluence_detects_broken_rules(euclid):
    rels = ncalg.build_relations(euclid.r_prime)
    rels.rules[(3, 2)] = [((0, 0), ONE)]  # a tail no longer consistent with the other rules
    assert ncalg.check_confluence(rels, 3).status == "fail"


def test_identity_gives_commutative_and_flip_gives_free():
    com = NCAlgebra(ncalg.build_relations(rtensor.identity_rmatrix(3)))
    assert com.rels.dimension == 3
    assert com.parse("x2.x1") == com.parse("x1.x2")
    free = NCAlgebra(ncalg.build_relations(rtensor.permutation(3)))
    assert free.rels.dimension == 0
    assert len(free.normal_words(2)) == 9


def test_sample_relations(alg):
    assert alg.parse("x2.x1") == alg.parse("q*x1.x2")
    assert alg.parse("x4.x1") == alg.parse("x1.x4")
    assert alg.parse("x3.x2") == alg.parse("x2.x3 - (q-q^-1)*x1.x4")


words = st.lists(st.integers(0, 3), min_size=0, max_size=4).map(tuple)


@settings(max_examples=200, deadline=None)
@given(st.lists(words, min_size=1, max_size=4))
def test_reduce_idempotent(alg, ws):
    p = alg.reduce({w: q ** k for k, w in enumerate(ws)})
    assert alg.reduce(p.terms) == p
    assert all(alg.is_normal(w) for w in p.terms)


@settings(max_examples=100, deadline=None)
@given(words, words, words)
def test_product_associative(alg, u, v, w):
    a, b, c = alg.word(u), alg.word(v), alg.word(w)
    assert (a * b) * c == a * (b * c)


def test_parser_and_render(alg):
    p = alg.parse("x1 + q^-1*x2.x3 - (q-q^-1)/(q+q^-1)*x4")
    assert p.render() == "x1 + ((-q^2+1)/(q^2+1))*x4 + (q^-1)*x2.x3"
    assert alg.parse(p.render()) == p
    assert alg.parse("(1-q)/(1-q)") == alg.one()
    assert alg.zero().render() == "0"


@pytest.mark.parametrize("text, msg", [
    ("x1.", "unexpected end of input"),
    ("x5", "unknown symbol 'x5'"),
    ("2*(x1", r"missing '\)'"),
    ("x1/(1-1)", "division by zero"),
])
def test_parse_errors(alg, text, msg):
    with pytest.raises(NCAlgebraError, match=msg):
        alg.parse(text)


def test_braiding(euclid, alg):
    x1, x2 = alg.gen(0), alg.gen(1)
    assert ncalg.braiding(x1, x2, euclid.r) == {((1,), (0,)): q}
    assert ncalg.braiding(alg.one(), x2, euclid.r) == {((1,), ()): ONE}
    assert render_tensor(ncalg.braiding(x1, x2, euclid.r), alg) == "(q)*x2 (x) x1"


def test_braiding_hexagon(euclid):
    psi = Braiding(euclid.r)
    for u, v in itertools.product([(0,), (1, 2), (3, 0)], repeat=2):
        for w in [(2,), (0, 3)]:
            # Psi(uv (x) w) = (Psi_12)(Psi_23)
            direct = psi.words(u + v, w)
            staged = {}
            for (w1, v1), c in psi.words(v, w).items():
                for (w2, u1), d in psi.words(u, w1).items():
                    ncalg._add_into(staged, (w2, u1 + v1), c * d)
            assert direct == staged


def test_braided_antipode(euclid, alg):
    assert ncalg.braided_antipode(alg.gen(2), euclid.r) == -alg.gen(2)
    assert ncalg.braided_antipode(alg.parse("x1.x2"), euclid.r) == alg.parse("q^2*x1.x2")
    # antipode axiom on the braided line: m (S (x) id) Delta = 0 in positive degree
    psi = Braiding(euclid.r)
    S = ncalg.BraidedAntipode(alg, euclid.r)
    for w in alg.normal_words(2) + alg.normal_words(3)[:8]:
        acc = alg.zero()
        for (a, b), c in ncalg.braided_coaddition(w, alg, psi).items():
            acc = acc + (S(alg.word(a)) * alg.word(b)).scale(c)
        assert acc.is_zero()


def test_braided_coaddition(euclid, alg):
    delta = ncalg.braided_coaddition((0, 1), alg, Braiding(euclid.r))
    assert delta == {((0, 1), ()): ONE, ((0,), (1,)): ONE, ((1,), (0,)): q, ((), (0, 1)): ONE}


def test_metric_square_is_central(ctx, euclid, alg):
    xx = ncalg.metric_square(euclid.metric, alg)
    assert xx == alg.parse("(q^2+1)*x1.x4 - (q+q^-1)*x2.x3")
    assert ctx.x_square() == xx
