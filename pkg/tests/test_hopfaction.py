import random
from dataclasses import replace

import numpy as np
import pytest

from qqw.errors import (
    GammaConstraintViolated,
    GammaEFConditionViolated,
    SigmaConstraintViolated,
    SigmaFourViolated,
    WrongOrderOfQ,
)
from qqw.field import make_prime_field_context, make_rational_context
from qqw.fixtures import (
    break_fixture,
    cyclic_loop_fixture,
    cyclic_orbit_fixture,
    highest_weight_fixture,
    random_uqb_fixture,
)
from qqw.hopfaction import (
    UqbArrowData,
    UqbVertexData,
    UqslActionData,
    actions_equal,
    build_uqb_action,
    build_uqb_vertex_action,
    build_uqsl_action,
    check_taft_factorization,
    check_taft_vertex_factorization,
    check_uqsl_factorization,
    extract_uqb_data,
    sigma_commutation_holds,
    verify_hopf_action,
    verify_uqsl_action,
    x_power_action,
)
from qqw.quiverpath import Arrow, Path, Quiver

F7 = make_prime_field_context(7, 2)
Q2 = make_rational_context(2)
TRI = Quiver(("e0", "e1", "e2"), ())


# vertices -------------------------------------------------------------------

def test_vertex_action_example():
    data = UqbVertexData((1, 2, 0), (1, 4, 2))
    act = build_uqb_vertex_action(TRI, data, F7)
    x = act.mats["x"]
    assert list(x[:, 0]) == [1, 3, 0]


def test_vertex_action_zero_gamma_is_zero():
    act = build_uqb_vertex_action(TRI, UqbVertexData((1, 2, 0), (0, 0, 0)), F7)
    assert F7.field.is_zero_matrix(act.mats["x"])
    assert verify_hopf_action(act).passed


def test_vertex_gamma_constraint():
    with pytest.raises(GammaConstraintViolated):
        build_uqb_vertex_action(TRI, UqbVertexData((1, 2, 0), (1, 1, 1)), F7)
    with pytest.raises(GammaConstraintViolated):
        build_uqb_vertex_action(TRI, UqbVertexData((0, 1, 2), (1, 0, 0)), F7)


# arrows ---------------------------------------------------------------------

def test_zero_data_gives_zero_x():
    f = F7.field
    Qv = Quiver((0, 1), (Arrow("a", 0, 1), Arrow("b", 1, 1)))
    act = build_uqb_action(Qv, UqbVertexData((0, 1), (0, 0)), UqbArrowData(f.eye(2), f.zeros(4, 4)), 4, F7)
    assert f.is_zero_matrix(act.mats["x"])
    assert verify_hopf_action(act).passed


def test_cyclic_loops_skew_leibniz_by_hand():
    fx = cyclic_loop_fixture(F7, c=3)
    act = fx.build()
    alg, f = act.algebra, F7.field
    x = act.mats["x"]
    a = lambda *ids: alg.index[Path("v", "v", ids)]
    assert list(np.nonzero(x[:, a("a0")])[0]) == [a("a1")] and x[a("a1"), a("a0")] == 3
    # x(a0 a1) = a0 x(a1) + x(a0) g(a1) = 3 a0 a2 + 3 q a1 a1
    col = x[:, a("a0", "a1")]
    assert col[a("a0", "a2")] == 3 and col[a("a1", "a1")] == f.mul(3, F7.q)
    assert np.count_nonzero(col) == 2
    assert verify_hopf_action(act).passed


def test_single_loop_scalar_sigma_violates_sigma3():
    # sigma(a) = c a on a lone loop contradicts sigma(g a) = q^-1 g sigma(a) for q != 1
    f = F7.field
    loop = Quiver(("v",), (Arrow("a", "v", "v"),))
    sigma = f.zeros(2, 2)
    sigma[1, 1] = 2
    with pytest.raises(SigmaConstraintViolated) as e:
        build_uqb_action(loop, UqbVertexData((0,), (0,)), UqbArrowData(f.eye(1), sigma), 3, F7)
    assert e.value.condition == "sigma3"


def test_sigma2_break_caught_by_verifier():
    rng = random.Random(5)
    while True:
        fx = random_uqb_fixture(rng, F7, max_paths=300)
        bad = break_fixture(rng, fx, "sigma2")
        if bad is not None:
            break
    with pytest.raises(SigmaConstraintViolated) as e:
        bad.build()
    assert e.value.condition == "sigma2"
    rep = verify_hopf_action(bad.build(validate=False))
    assert not rep.passed
    assert rep.witness.check == "skew_leibniz"


def test_threads_do_not_change_result():
    rng = random.Random(11)
    fx = random_uqb_fixture(rng, F7, max_paths=300)
    bad = break_fixture(rng, fx, "sigma3")
    for obj in [fx] + ([bad] if bad else []):
        act = obj.build(validate=False)
        r1, r4 = verify_hopf_action(act), verify_hopf_action(act, threads=4)
        assert r1.to_dict() == r4.to_dict()


@pytest.mark.parametrize("seed", range(6))
def test_extract_then_rebuild(seed):
    rng = random.Random(seed)
    fx = random_uqb_fixture(rng, F7 if seed % 2 else Q2, max_paths=300)
    act = fx.build()
    vdata, adata = extract_uqb_data(act)
    assert vdata == fx.vertex or (vdata.perm == fx.vertex.perm and tuple(vdata.gamma) == tuple(fx.vertex.gamma))
    assert act.field.equal(adata.g1, fx.arrow.g1) and act.field.equal(adata.sigma, fx.arrow.sigma)
    assert actions_equal(act, build_uqb_action(fx.quiver, vdata, adata, fx.L, fx.ctx))


def test_extract_zero_x():
    f = F7.field
    Qv = Quiver((0,), (Arrow("a", 0, 0),))
    act = build_uqb_action(Qv, UqbVertexData((0,), (0,)), UqbArrowData(f.eye(1), f.zeros(2, 2)), 3, F7)
    vdata, adata = extract_uqb_data(act)
    assert vdata.gamma == (0,) and f.is_zero_matrix(adata.sigma)


# powers and Taft ------------------------------------------------------------

def test_x_power_action():
    act = build_uqb_vertex_action(TRI, UqbVertexData((1, 2, 0), (1, 4, 2)), F7)
    f = F7.field
    e0 = act.algebra.basis_vector(0)
    assert f.equal(x_power_action(act, 0, e0), e0)
    # orbit size 3 = r, so g^3 e0 = e0 and x^3 e0 = gamma_0^3 (e0 - e0) = 0
    assert f.is_zero_matrix(x_power_action(act, 3, e0)[:, None])
    zero = build_uqb_vertex_action(TRI, UqbVertexData((1, 2, 0), (0, 0, 0)), F7)
    assert f.is_zero_matrix(x_power_action(zero, 2, e0)[:, None])


def test_x_power_closed_form_on_long_orbit():
    six = Quiver(tuple(f"e{i}" for i in range(6)), ())
    f = F7.field
    gamma = tuple(f.mul(1, f.pow(F7.q_inv, i)) for i in range(6))
    act = build_uqb_vertex_action(six, UqbVertexData(tuple((i + 1) % 6 for i in range(6)), gamma), F7)
    for i in range(6):
        want = act.algebra.zero_vector()
        want[i] = f.pow(gamma[i], 3)
        want[(i + 3) % 6] = f.neg(f.pow(gamma[i], 3))
        assert f.equal(x_power_action(act, 3, act.algebra.basis_vector(i)), want)


def test_taft_vertex_examples():
    f = F7.field
    assert check_taft_vertex_factorization(TRI, UqbVertexData((1, 2, 0), (0, 0, 0)), 3, 3, F7).passed
    assert check_taft_vertex_factorization(TRI, UqbVertexData((1, 2, 0), (1, 4, 2)), 3, 6, F7).passed
    six = Quiver(tuple(range(6)), ())
    gamma = tuple(f.pow(F7.q_inv, i) for i in range(6))
    rep = check_taft_vertex_factorization(six, UqbVertexData(tuple((i + 1) % 6 for i in range(6)), gamma), 3, 6, F7)
    assert not rep.passed and not rep.checks["oracle"]
    with pytest.raises(WrongOrderOfQ):
        check_taft_vertex_factorization(TRI, UqbVertexData((1, 2, 0), (0, 0, 0)), 4, 4, F7)


def test_taft_arrow_examples():
    nil = check_taft_factorization(cyclic_loop_fixture(F7, c=2, broken_link=True).build(), 3, 3)
    assert nil.passed and all(nil.checks.values())
    full = check_taft_factorization(cyclic_loop_fixture(F7, c=2).build(), 3, 3)
    assert not full.passed and not full.checks["condition2"] and not full.checks["oracle"]


# U_q(sl2) -------------------------------------------------------------------

def test_uqsl_zero_data():
    f = F7.field
    Qv = Quiver((0, 1), (Arrow("a", 0, 1), Arrow("b", 1, 0)))
    data = UqslActionData((1, 0), (0, 0), (0, 0), f.matrix([[0, 1], [1, 0]]), f.zeros(4, 4), f.zeros(4, 4))
    act = build_uqsl_action(Qv, data, 3, F7)
    assert f.is_zero_matrix(act.mats["E"]) and f.is_zero_matrix(act.mats["F"])
    assert verify_uqsl_action(act).passed


def test_uqsl_disconnected_quiver():
    f = F7.field
    Qv = Quiver((0, 1, 2), (Arrow("a", 0, 0), Arrow("b", 1, 2), Arrow("c", 2, 1)))
    K1 = f.matrix([[1, 0, 0], [0, 0, 1], [0, 1, 0]])
    data = UqslActionData((0, 2, 1), (0, 0, 0), (0, 0, 0), K1, f.zeros(6, 6), f.zeros(6, 6))
    assert verify_uqsl_action(build_uqsl_action(Qv, data, 3, F7)).passed


@pytest.mark.parametrize("make", [lambda c: highest_weight_fixture(c, 2), lambda c: highest_weight_fixture(c, 3, -1),
                                  lambda c: cyclic_orbit_fixture(c), lambda c: cyclic_orbit_fixture(c, variant="cycleE")])
def test_uqsl_fixtures_verify(make):
    fx = make(F7)
    rep = verify_uqsl_action(build_uqsl_action(fx.quiver, fx.data, fx.L, fx.ctx))
    assert rep.passed, rep.witness


def test_sigma4_reduces_on_long_orbits():
    fx = cyclic_orbit_fixture(F7, variant="cycleE")
    assert sigma_commutation_holds(fx.data, F7, len(fx.quiver.vertices))


def test_gamma_ef_condition():
    fx = cyclic_orbit_fixture(F7)
    f = F7.field
    bad = replace(fx.data, gammaF=tuple(f.mul(2, g) for g in fx.data.gammaF))
    with pytest.raises(GammaEFConditionViolated):
        build_uqsl_action(fx.quiver, bad, 2, F7)
    rep = verify_uqsl_action(build_uqsl_action(fx.quiver, bad, 2, F7, validate=False))
    assert not rep.checks["vertex_bracket"] or not rep.checks["bracket"]


def test_sigma4_violation():
    fx = highest_weight_fixture(F7, 2)
    f = F7.field
    bad = replace(fx.data, sigmaF=f.scale(2, fx.data.sigmaF))
    with pytest.raises(SigmaFourViolated):
        build_uqsl_action(fx.quiver, bad, 2, F7)
    assert not verify_uqsl_action(build_uqsl_action(fx.quiver, bad, 2, F7, validate=False)).checks["bracket"]


def test_small_quantum_group_examples():
    f = F7.field
    one = Quiver(("v",), (Arrow("a", "v", "v"),))
    data = UqslActionData((0,), (0,), (0,), f.eye(1), f.zeros(2, 2), f.zeros(2, 2))
    assert check_uqsl_factorization(build_uqsl_action(one, data, 3, F7), 3).passed
    cyc = cyclic_orbit_fixture(F7, variant="cycleE")
    rep = check_uqsl_factorization(build_uqsl_action(cyc.quiver, cyc.data, cyc.L, F7), 3)
    assert not rep.passed and not rep.checks["condition3_E"] and not rep.details["oracle_E"]
    with pytest.raises(WrongOrderOfQ):
        check_uqsl_factorization(build_uqsl_action(one, data, 2, F7), 5)
