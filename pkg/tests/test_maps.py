from fractions import Fraction

import pytest

from garnierkit.exactalg import (
    K0, K1, KINF, P1, P2, Q1, Q2, S, T, TH1, TH2, Expression, PoleError, equals, is_polynomial_in,
)
from garnierkit.garnier import build_system
from garnierkit.maps import (
    ALL_NAMES, BACKLUND_NAMES, CHART_NAMES, BirationalMap, UnknownMapError, UnsupportedMapError,
    apply_point, catalog_get, check_polynomiality, check_symmetry, check_symplectic, compose, conjugate_by_phi1,
    identity_map, inverse, is_identity, polynomial_in_chart, provenance_table, pullback, transform_system,
    transformed_system, verify_eq6, verify_inverse,
)

q1, p1, q2, p2, t, s = (Expression.var(v) for v in (Q1, P1, Q2, P2, T, S))
k0, k1, kinf, th1, th2 = (Expression.var(v) for v in (K0, K1, KINF, TH1, TH2))
ONES = (1, 1, 1, 1, 1)


def test_catalog_entries():
    assert catalog_get("sigma2").base_fwd == (s, t)
    assert catalog_get("sigma3").param_fwd == (th2, k1, kinf, th1, k0)
    assert catalog_get("s1").phase_fwd[1] == p1 - k0 / q1
    with pytest.raises(UnknownMapError):
        catalog_get("s9")


def test_provenance_table_lists_every_map():
    table = provenance_table()
    for name in ALL_NAMES:
        assert f"\n{name}  " in "\n" + table


def test_apply_point_phi1():
    image, params = apply_point(catalog_get("phi1"), (3, 2, 1, 5, Fraction(1, 4), 7), ONES)
    assert image == (Fraction(1, 2), -6, 1, 7, Fraction(1, 4), 7)
    assert params == ONES


def test_apply_point_pi():
    a, b, c, d = Fraction(2), Fraction(-3, 5), Fraction(7), Fraction(1, 9)
    image, params = apply_point(catalog_get("pi"), (a, b, c, d, Fraction(1, 3), Fraction(5)), (1, 2, 3, 4, 5))
    assert image == (c, d, a, b, 5, Fraction(1, 3))
    assert params == (1, 2, 3, 5, 4)


def test_apply_point_pole_names_component():
    with pytest.raises(PoleError) as info:
        apply_point(catalog_get("s0"), (0, 2, 1, 5, Fraction(1, 4), 7), ONES)
    assert "1/q1" in str(info.value)
    assert info.value.component == "q1"


def test_pullback_examples():
    sys = build_system()
    assert equals(pullback(catalog_get("s3"), sys.h1), sys.h1)
    assert equals(pullback(catalog_get("pi"), sys.h1), sys.h2)
    f = q1 * p2 / (t - s)
    assert pullback(identity_map(), f) == f


def test_compose_examples():
    assert is_identity(compose(catalog_get("s1"), catalog_get("s1")))
    assert is_identity(compose(catalog_get("pi"), catalog_get("pi")))
    phi1 = catalog_get("phi1")
    assert is_identity(compose(phi1, inverse(phi1)))
    assert is_identity(compose(inverse(phi1), phi1))


def test_compose_order_convention():
    # compose(g, h) applies h to the point first
    g = compose(catalog_get("s1"), catalog_get("sigma1"))
    x, params = (Fraction(3), Fraction(2), Fraction(1, 2), Fraction(5), Fraction(1, 4), Fraction(7)), (1, 2, 3, 4, 5)
    mid, mid_params = apply_point(catalog_get("sigma1"), x, params)
    expected = apply_point(catalog_get("s1"), mid, mid_params)
    assert apply_point(g, x, params) == expected


def test_verify_inverse_examples():
    assert verify_inverse(catalog_get("phi1"))
    assert verify_inverse(catalog_get("r0"))
    good = catalog_get("s1")
    bad = BirationalMap.make("bad", good.phase_fwd, good.base_fwd, good.param_fwd,
                             (q1, p1 + 1, q2, p2), good.base_inv)
    assert not verify_inverse(bad)


@pytest.mark.parametrize("name", [n for n in ALL_NAMES if n != "identity"])
def test_catalog_inverse_and_symplectic(name):
    g = catalog_get(name)
    assert verify_inverse(g)
    if name != "S0":
        assert check_symplectic(g)


def test_symplectic_negative_control():
    scale = BirationalMap.make("scale", (2 * q1, p1, q2, p2), (t, s), (k0, k1, kinf, th1, th2),
                               (q1 / 2, p1, q2, p2), (t, s))
    assert verify_inverse(scale)
    assert not check_symplectic(scale)
    assert check_symplectic(catalog_get("r6"))


@pytest.mark.parametrize("name", BACKLUND_NAMES)
def test_symmetry_exact(name):
    rep = check_symmetry(catalog_get(name), build_system())
    assert rep.passed, rep.failing()


@pytest.mark.parametrize("name", ["s0", "s4", "sigma1", "sigma3"])
def test_symmetry_probabilistic(name):
    rep = check_symmetry(catalog_get(name), build_system(), mode="probabilistic", trials=20, seed=7)
    assert rep.passed
    assert rep.error_bound < 1e-50


def test_symmetry_rejects_non_symmetry():
    rep = check_symmetry(catalog_get("r0"), transformed_system())
    assert not rep.passed


def test_s0_negative_control_has_witness():
    rep = check_symmetry(catalog_get("S0"), transformed_system())
    assert not rep.passed
    assert rep.failing()
    w = rep.witness
    assert w is not None and w["value"] != 0
    assert all(isinstance(v, Fraction) for v in w["point"].values())


def test_transform_system_examples():
    sys = build_system()
    post = transformed_system()
    assert all(is_polynomial_in(h, (Q1, P1, Q2, P2)) for h in (post.h1, post.h2))
    same = transform_system(identity_map(), sys)
    assert equals(same.h1, sys.h1) and equals(same.h2, sys.h2)
    with pytest.raises(UnsupportedMapError):
        transform_system(catalog_get("sigma3"), sys)


def test_check_polynomiality_examples():
    assert not check_polynomiality(build_system())
    assert check_polynomiality(transformed_system())


@pytest.mark.parametrize("name", CHART_NAMES)
def test_charts_keep_polynomiality(name):
    assert polynomial_in_chart(name)


def test_eq6_rows():
    res = verify_eq6()
    assert set(res) == {"conj_s1s0", "conj_s1", "conj_sigma2"}
    for r in res.values():
        assert r.matches, r.mismatched
        assert r.symmetric
    c1 = catalog_get("conj_s1")
    assert c1.phase_fwd[1] == p1 - k0 * q2 / (q1 * q2 + 1)
    c2 = catalog_get("conj_sigma2")
    assert c2.phase_fwd[2] == q2 + 1 / q1


def test_eq6_word_reading_matters():
    # the other reading of the first row does not give the printed map
    swapped = conjugate_by_phi1(("s1", "s0"))
    closed = catalog_get("conj_s1s0")
    assert swapped.phase_fwd != closed.phase_fwd
