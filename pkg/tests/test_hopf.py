import pytest

from braidkit import hopf, presets
from braidkit.actions import ActionContext
from braidkit.hopf import C, L, ONE_U, P, SIG, SL, Duality, StarContext, UElement, UTensor
from braidkit.qcoeff import ONE, QDIFF, ZERO, q

N = 4


@pytest.fixture(scope="module")
def duality(ctx):
    return Duality(ctx)


def test_generators():
    gens = hopf.generators(N)
    assert len(gens) == 42
    assert gens[0][0] == "p1" and gens[-1][0] == "s^-1"


def test_grouplike_and_unit():
    assert hopf.coproduct(SIG(1), N) == UTensor.of(SIG(1), SIG(1))
    assert hopf.coproduct(ONE_U, N) == UTensor.of(ONE_U, ONE_U)
    assert hopf.coproduct(L(1, 0, 1), N) == hopf._sum_tensors(UTensor.of(L(1, 0, k), L(1, k, 1)) for k in range(N))


def test_coproduct_of_p_and_c():
    dp = hopf.coproduct(P(0), N)
    assert UTensor.of(P(0), ONE_U) - dp != UTensor()
    assert len(dp.terms) == 1 + N
    assert len(hopf.coproduct(P(0) * C(0), N).terms) == (1 + N) ** 2


def test_counit():
    assert hopf.counit(P(0)) == ZERO and hopf.counit(C(2)) == ZERO
    assert hopf.counit(L(1, 0, 0) * L(-1, 1, 1)) == ONE
    assert hopf.counit(L(1, 0, 1)) == ZERO
    assert hopf.counit(SIG(-1) + ONE_U.scale(3)) == 4 * ONE


def test_antipode_values():
    assert hopf.antipode(L(1, 0, 1), N) == SL(1, 0, 1)
    assert hopf.antipode(SIG(1), N) == SIG(-1)
    want = -hopf._sum_u(SL(-1, 0, k) * SIG(-1) * P(k) for k in range(N))
    assert hopf.antipode(P(0), N) == want
    # antimultiplicative
    assert hopf.antipode(P(0) * SIG(1), N) == hopf.antipode(SIG(1), N) * hopf.antipode(P(0), N)


def test_render():
    assert hopf.render_uword((("l", -1, 0, 1), ("s", -1))) == "l-12.s^-1"
    assert (SL(1, 1, 2) * C(0)).render() == "(1)*S(l+23).c1"
    assert hopf.render_uword(()) == "1"


def test_canonical_moves_dilaton_right():
    assert hopf.canonical(SIG(1) * L(1, 0, 0)) == L(1, 0, 0) * SIG(1)


def test_act_u(ctx, alg):
    x1 = alg.parse("x1")
    assert hopf.act_U(ctx, P(0) * C(0), x1) == alg.parse("(q+q^-1)*x1")
    assert hopf.act_U(ctx, C(0) * P(0), x1).is_zero()
    assert hopf.act_U(ctx, ONE_U, x1) == x1


def test_module_algebra_and_axioms(ctx):
    assert hopf.verify_module_algebra(ctx, C(1), 2, "c2").ok
    assert hopf.verify_hopf_axioms(ctx, 1).ok
    assert hopf.verify_relations_U(ctx, 1).ok


def test_relation_elements_act_as_zero(ctx, alg):
    names = [name for name, _ in hopf.relation_elements(ctx)]
    assert len(names) == len(set(names)) > 0
    for name, u in hopf.relation_elements(ctx)[:10]:
        for w in alg.normal_words(1):
            assert hopf.act_U(ctx, u, alg.word(w)).is_zero(), name


def test_star_type_one(ctx, alg):
    star = StarContext.from_context(ctx)
    assert star(P(0)) == P(3)
    assert star(C(0)) == C(3)
    assert star(L(1, 0, 1)) == L(-1, 3, 2).scale(-q)
    assert star(SIG(1)) == SIG(-1)
    for name, g in hopf.generators(N):
        assert hopf.canonical(star(star(g))) == hopf.canonical(g), name
    assert star.spacetime(alg.parse("x1.x2")) == alg.parse("-q*x3.x4")


def test_star_requires_reality(mink):
    with pytest.raises(Exception, match="no reality type declared"):
        StarContext.from_context(ActionContext(mink))(P(0))


def test_pairing_values(ctx, duality):
    assert hopf.pairing(ctx, (0,), (0,)) == QDIFF.inverse()
    assert hopf.pairing(ctx, (0,), (1,)) == ZERO
    assert hopf.pairing(ctx, (0, 1), (0,)) == ZERO


def test_gram_matrix_degree_two(duality):
    pw, xw, g = duality.gram(2)
    assert len(pw) == len(xw) == 10
    assert g[0][0] == ONE + q ** 2
    assert g[1][:3] == [ZERO, q, ZERO]
    from braidkit import linalg
    linalg.inverse(g)  # nondegenerate


def test_exp_low_degree(ctx):
    exp, exp_inv = hopf.braided_exp_truncated(ctx, 1)
    want = UTensor.of(ONE_U, ONE_U)
    for j in range(N):
        want = want + UTensor.of(C(j), P(j)).scale(QDIFF)
    assert exp == want
    want_inv = UTensor.of(ONE_U, ONE_U)
    for j in range(N):
        want_inv = want_inv - UTensor.of(C(j), P(j)).scale(QDIFF)
    assert exp_inv == want_inv


def test_conjugate_coproduct_shape():
    t = hopf.conjugate_coproduct_c(N, 0)
    assert isinstance(t, UTensor) and t.terms


@pytest.mark.parametrize("name", ["verify_star", "verify_pairing_bialgebra", "verify_exp_inverse",
                                  "verify_conjugation_identity"])
def test_conjugation_checks_pass(ctx, name):
    rep = getattr(hopf, name)(ctx, 2)
    assert rep.ok, str(rep)


def test_minkowski_duality(mink):
    c = ActionContext(mink)
    assert hopf.verify_pairing_bialgebra(c, 2).ok
    assert hopf.verify_exp_inverse(c, 2).ok


@pytest.mark.parametrize("preset", ["identity", "permutation"])
def test_trivial_braidings_have_exp(preset):
    c = ActionContext(presets.load_preset(preset))
    assert hopf.verify_exp_inverse(c, 2).ok
    assert hopf.verify_pairing_bialgebra(c, 2).ok


def test_degenerate_pairing_reported(ctx):
    d = Duality(ctx)
    pw, xw, _ = d.gram(1)
    d._gram[1] = (pw, xw, [[ZERO] * len(xw) for _ in pw])
    with pytest.raises(hopf.HopfError, match="degenerate pairing at degree 1"):
        d.exp_terms(1)


def test_u_element_arithmetic():
    a = P(0) + C(1)
    assert a - a == UElement()
    assert not UElement()
    assert (a * ONE_U) == a
    assert a.scale(0) == UElement()
