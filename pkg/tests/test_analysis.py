import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracle_values as ov
from psyllid import analysis as an
from psyllid.analysis import Label, PWSClass, Region, Stability
from psyllid.errors import PreconditionError
from psyllid.model import NO_CONTROL, TABLE1, ControlInputs, field_values, rhs_abundance, rhs_scarcity

from conftest import params_strategy, rel_close

viable = params_strategy(accept=lambda p: an.offspring_numbers(p)[1] > 1.0)
scarce_ok = params_strategy(accept=lambda p: an.derived_quantities(p).n_m > 1.0 and an.derived_quantities(p).theta_m > 1.0)


def central_jacobian(fun, x, rel=1e-6):
    x = np.asarray(x, dtype=float)
    J = np.empty((3, 3))
    for j in range(3):
        h = rel * max(1.0, abs(x[j]))
        e = np.zeros(3)
        e[j] = h
        J[:, j] = (np.asarray(fun(x + e)) - np.asarray(fun(x - e))) / (2 * h)
    return J


# ---------------------------------------------------------------------------
# derived quantities


def test_offspring_numbers_match_exact_rationals():
    n_m, n_f = an.offspring_numbers(TABLE1)
    assert rel_close(n_m, ov.N_M, 1e-12)
    assert rel_close(n_f, ov.N_F, 1e-12)
    r, rho, mu, delta, gamma, nu, eta = (Fraction(s) for s in ("0.41", "6.352", "0.021", "0.023", "1.2", "0.25", "1"))
    exact_m = gamma * r * rho * nu / (mu * (delta + eta))
    exact_f = (1 - r) * rho * nu / (delta * (delta + eta + nu))
    assert abs(Fraction(n_m) - exact_m) / exact_m < Fraction(1, 10**12)
    assert abs(Fraction(n_f) - exact_f) / exact_f < Fraction(1, 10**12)


def test_derived_quantities_table1():
    d = an.derived_quantities(TABLE1)
    assert d.theta_m == pytest.approx(4.48037115589, rel=1e-10)
    assert d.vartheta == pytest.approx(0.59 * 0.021 + 0.41 * 0.023, rel=1e-14)
    assert d.p_hat == pytest.approx(math.log(6.352 / 0.021) * 1000, rel=1e-14)


def test_theta_equivalent_form():
    """theta_M > 1 iff (1-r) rho / delta > N_M."""
    p = TABLE1
    d = an.derived_quantities(p)
    assert d.theta_m == pytest.approx((1 - p.r) * p.rho / p.delta / d.n_m, rel=1e-13)


# ---------------------------------------------------------------------------
# natural equilibria


def test_E1_matches_oracle():
    rep = an.equilibrium_E1(TABLE1)
    assert rep.exists
    for x, y in zip(rep.coords, ov.E1):
        assert rel_close(x, y, 1e-12)
    assert rep.coords.total == pytest.approx(ov.E1_TOTAL, rel=1e-12)


def test_E2_matches_oracle_and_alternative_form():
    rep = an.equilibrium_E2(TABLE1)
    assert rep.exists
    for x, y in zip(rep.coords, ov.E2):
        assert rel_close(x, y, 1e-12)
    alt = an.equilibrium_E2_alternative(TABLE1)
    for x, y in zip(rep.coords, alt):
        assert rel_close(x, y, 1e-12)


def test_E1_absent_when_females_do_not_replace():
    p = TABLE1.replace(rho=0.05)
    rep = an.equilibrium_E1(p)
    assert not rep.exists and rep.conditions == {"N_F > 1": False}


@given(viable)
def test_E1_residual_and_total(p):
    rep = an.equilibrium_E1(p)
    c = rep.coords
    res = max(abs(v) for v in rhs_abundance(p, NO_CONTROL, c))
    assert res <= 1e-9 * max(c)
    assert c.total == pytest.approx(math.log(an.offspring_numbers(p)[1]) / p.sigma, rel=1e-10)


@given(scarce_ok)
def test_E2_residual_total_and_forms(p):
    rep = an.equilibrium_E2(p)
    c = rep.coords
    res = max(abs(v) for v in rhs_scarcity(p, NO_CONTROL, c))
    assert res <= 1e-9 * max(c)
    assert c.total == pytest.approx(math.log(an.offspring_numbers(p)[0]) / p.sigma, rel=1e-10)


def test_E2_needs_theta_above_one():
    p = TABLE1.replace(mu=0.001)  # N_M grows past (1-r) rho / delta
    rep = an.equilibrium_E2(p)
    assert an.derived_quantities(p).theta_m < 1
    assert not rep.exists


@pytest.mark.parametrize(
    "n_m_gt_n_f, expect",
    [(True, (PWSClass.REGULAR, PWSClass.VIRTUAL)), (False, (PWSClass.VIRTUAL, PWSClass.REGULAR))],
)
def test_pws_classification(n_m_gt_n_f, expect):
    p = TABLE1 if n_m_gt_n_f else TABLE1.replace(gamma=1.0)
    n_m, n_f = an.offspring_numbers(p)
    assert (n_m > n_f) == n_m_gt_n_f
    cls = an.classify_pws(p)
    assert (cls["E1"], cls["E2"]) == expect


def test_pws_classification_matches_geometry():
    """A regular equilibrium lies inside its own region of validity."""
    for p in (TABLE1, TABLE1.replace(gamma=1.0)):
        e1, e2 = an.equilibrium_E1(p), an.equilibrium_E2(p)
        s1 = p.gamma * e1.coords.M - e1.coords.A
        s2 = p.gamma * e2.coords.M - e2.coords.A
        assert (s1 > 0) == (e1.pws_class is PWSClass.REGULAR)
        assert (s2 < 0) == (e2.pws_class is PWSClass.REGULAR)


def test_pws_coincident_equilibria():
    # choose gamma so that N_M == N_F exactly
    n_m, n_f = an.offspring_numbers(TABLE1)
    p = TABLE1.replace(gamma=TABLE1.gamma * n_f / n_m)
    cls = an.classify_pws(p)
    assert cls == {"E1": PWSClass.ON_PLANE, "E2": PWSClass.ON_PLANE}
    e1, e2 = an.equilibrium_E1(p).coords, an.equilibrium_E2(p).coords
    for x, y in zip(e1, e2):
        assert rel_close(x, y, 1e-9)


# ---------------------------------------------------------------------------
# Jacobians and stability


def test_jacobian_at_origin_matches_hand_form():
    p = TABLE1
    J1 = an.jacobian(p, NO_CONTROL, (0, 0, 0), Region.ABUNDANCE)
    expect1 = [[-p.mu, 0, p.r * p.rho], [0, -(p.nu + p.delta), p.eta + (1 - p.r) * p.rho], [0, p.nu, -(p.eta + p.delta)]]
    assert np.allclose(J1, expect1, rtol=0, atol=1e-15)
    J2 = an.jacobian(p, NO_CONTROL, (0, 0, 0), Region.SCARCITY)
    assert np.allclose(J2[2], [p.gamma * p.nu, 0, -(p.delta + p.eta)], rtol=0, atol=1e-15)


@given(
    p=params_strategy(),
    x=st.tuples(*[st.floats(1.0, 3000.0)] * 3),
    ap=st.floats(0.0, 3000.0),
    alpha=st.floats(0.0, 1.0),
    region=st.sampled_from([Region.ABUNDANCE, Region.SCARCITY]),
)
def test_jacobian_matches_finite_differences(p, x, ap, alpha, region):
    c = ControlInputs(ap, alpha)
    mode = 1 if region is Region.ABUNDANCE else 2
    J = an.jacobian(p, c, x, region)
    Jn = central_jacobian(lambda y: field_values(p, ap, alpha, *y, mode), x)
    scale = max(1e-12, float(np.max(np.abs(J))))
    assert np.max(np.abs(J - Jn)) <= 1e-6 * scale


@given(
    p=params_strategy(),
    x=st.tuples(*[st.floats(1.0, 3000.0)] * 3),
    k=st.floats(0.0, 50.0),
    alpha=st.floats(0.0, 1.0),
    region=st.sampled_from([Region.ABUNDANCE, Region.SCARCITY]),
)
def test_closed_loop_jacobian_matches_finite_differences(p, x, k, alpha, region):
    J = an.jacobian(p, ControlInputs(0.0, alpha), x, region, gain=k)
    Jn = central_jacobian(lambda y: an.closed_loop_field(p, k, alpha, y, region), x)
    scale = max(1e-12, float(np.max(np.abs(J))))
    assert np.max(np.abs(J - Jn)) <= 1e-6 * scale


def test_closed_loop_field_equals_substituted_field():
    p, k, alpha = TABLE1, 2.5, 0.4
    x = (900.0, 1200.0, 300.0)
    for region, mode in ((Region.ABUNDANCE, 1), (Region.SCARCITY, 2)):
        direct = field_values(p, k * x[1], alpha, *x, mode)
        assert np.allclose(an.closed_loop_field(p, k, alpha, x, region), direct, rtol=1e-13, atol=1e-12)


def test_routh_hurwitz_closed_forms_table1():
    p = TABLE1
    J1 = an.jacobian(p, NO_CONTROL, an.equilibrium_E1(p).coords, Region.ABUNDANCE)
    J2 = an.jacobian(p, NO_CONTROL, an.equilibrium_E2(p).coords, Region.SCARCITY)
    assert np.allclose(an.routh_hurwitz_E1(p), an.routh_hurwitz(J1)[0], rtol=1e-10, atol=0)
    assert np.allclose(an.routh_hurwitz_E2(p), an.routh_hurwitz(J2)[0], rtol=1e-10, atol=0)


@given(viable)
def test_routh_hurwitz_E1_closed_form_random(p):
    J1 = an.jacobian(p, NO_CONTROL, an.equilibrium_E1(p).coords, Region.ABUNDANCE)
    assert np.allclose(an.routh_hurwitz_E1(p), an.routh_hurwitz(J1)[0], rtol=1e-8, atol=1e-14)


@given(scarce_ok)
def test_routh_hurwitz_E2_closed_form_random(p):
    J2 = an.jacobian(p, NO_CONTROL, an.equilibrium_E2(p).coords, Region.SCARCITY)
    assert np.allclose(an.routh_hurwitz_E2(p), an.routh_hurwitz(J2)[0], rtol=1e-8, atol=1e-14)


def test_characteristic_polynomial_roots_are_eigenvalues():
    J = an.jacobian(TABLE1, NO_CONTROL, an.equilibrium_E1(TABLE1).coords, Region.ABUNDANCE)
    a1, a2, a3 = an.routh_hurwitz(J)[0]
    roots = np.sort_complex(np.roots([1, a1, a2, a3]))
    eig = np.sort_complex(np.linalg.eigvals(J))
    assert np.allclose(roots, eig, rtol=1e-9, atol=1e-12)


def test_table1_stability_verdicts():
    reps = {r.label: r for r in an.all_equilibria(TABLE1)}
    assert reps[Label.E1].stability.verdict is Stability.LAS
    assert reps[Label.E0].stability.verdict is Stability.UNSTABLE
    assert reps[Label.E1].pws_class is PWSClass.REGULAR
    assert reps[Label.E2].pws_class is PWSClass.VIRTUAL


def test_stability_of_missing_equilibrium_is_an_error():
    p = TABLE1.replace(rho=0.05)
    with pytest.raises(PreconditionError):
        an.stability_verdict(p, an.equilibrium_E1(p))


def test_origin_stable_without_replacement():
    p = TABLE1.replace(rho=0.05)
    reps = an.all_equilibria(p)
    assert [r.label for r in reps if r.exists] == [Label.E0]
    assert reps[0].stability.verdict is Stability.LAS


# ---------------------------------------------------------------------------
# next-generation matrices and the feedback threshold


@given(p=params_strategy(), k=st.floats(0.0, 60.0), alpha=st.floats(0.0, 1.0))
def test_ngm_spectral_radii(p, k, alpha):
    res = an.ngm_builder(p, k, alpha)
    assert rel_close(res.rho1, an.offspring_numbers(p)[1], 1e-12)
    assert rel_close(res.rho2, an.controlled_male_offspring(p, k, alpha), 1e-12)


def test_ngm_matrices_table1():
    res = an.ngm_builder(TABLE1, 2.5, 0.5)
    p = TABLE1
    assert res.F[0, 2] == p.r * p.rho and res.F[1, 2] == (1 - p.r) * p.rho
    assert res.V2[1, 0] == pytest.approx(p.gamma * p.nu / 3.5)


def test_ngm_zero_gain_recovers_natural_male_number():
    assert rel_close(an.ngm_builder(TABLE1, 0.0, 0.7).rho2, ov.N_M, 1e-12)


def test_k_star_is_the_unit_crossing_of_the_controlled_number():
    for alpha in (0.0, 0.2, 0.5, 1.0):
        ks = an.k_star(TABLE1, alpha)
        assert an.controlled_male_offspring(TABLE1, ks, alpha) == pytest.approx(1.0, rel=1e-12)


def test_k_star_with_published_male_number():
    assert an.feedback_threshold(37.4256, TABLE1.mu, 0.0) == pytest.approx(36.4256, abs=1e-12)
    assert round(an.feedback_threshold(37.4256, TABLE1.mu, 0.0), 2) == 36.43


def test_k_star_zero_when_males_do_not_replace():
    assert an.feedback_threshold(0.8, 0.02, 0.3) == 0.0


def test_k_star_rejects_bad_alpha():
    with pytest.raises(PreconditionError):
        an.k_star(TABLE1, 1.2)


# ---------------------------------------------------------------------------
# controlled equilibria


@given(alpha=st.floats(0.0, 1.0), ap=st.floats(0.0, 1e5))
def test_E1P_open_residual(alpha, ap):
    rep = an.equilibrium_E1P_open(TABLE1, alpha, ap)
    c = rep.coords
    assert min(c) > 0
    res = max(abs(v) for v in field_values(TABLE1, ap, alpha, *c, 1))
    assert res <= 1e-9 * max(c)
    assert c.total == pytest.approx(ov.E1_TOTAL, rel=1e-10)


def test_E1P_open_reduces_to_E1():
    c = an.equilibrium_E1P_open(TABLE1, 0.5, 0.0).coords
    for x, y in zip(c, ov.E1):
        assert rel_close(x, y, 1e-12)


def test_E1P_closed_residual_and_zero_gain():
    for alpha in (0.0, 0.3, 1.0):
        for k in (0.0, 2.5, 40.0):
            rep = an.equilibrium_E1P_closed(TABLE1, alpha, k)
            c = rep.coords
            res = max(abs(v) for v in an.closed_loop_field(TABLE1, k, alpha, c, Region.ABUNDANCE))
            assert res <= 1e-9 * max(c)
    c0 = an.equilibrium_E1P_closed(TABLE1, 0.4, 0.0).coords
    for x, y in zip(c0, ov.E1):
        assert rel_close(x, y, 1e-12)


def test_E1P_closed_males_fall_with_alpha():
    ms = [an.equilibrium_E1P_closed(TABLE1, a, 2.5).coords.M for a in np.linspace(0, 1, 11)]
    assert all(b < a for a, b in zip(ms, ms[1:]))


def test_E2P_closed_exists_below_threshold_only():
    for alpha in (0.0, 0.1, 0.25):
        ks = an.k_star(TABLE1, alpha)
        assert an.equilibrium_E2P_closed(TABLE1, alpha, 0.9 * ks).exists
        assert not an.equilibrium_E2P_closed(TABLE1, alpha, 1.1 * ks).exists


def test_E2P_closed_residual_and_zero_gain():
    for alpha, k in ((0.0, 2.5), (0.1, 3.0), (0.2, 1.0)):
        rep = an.equilibrium_E2P_closed(TABLE1, alpha, k)
        c = rep.coords
        res = max(abs(v) for v in an.closed_loop_field(TABLE1, k, alpha, c, Region.SCARCITY))
        assert res <= 1e-9 * max(c)
        assert c.total == pytest.approx(math.log(an.controlled_male_offspring(TABLE1, k, alpha)) / TABLE1.sigma, rel=1e-10)
    c0 = an.equilibrium_E2P_closed(TABLE1, 0.3, 0.0).coords
    for x, y in zip(c0, ov.E2):
        assert rel_close(x, y, 1e-12)


def test_report_serialization():
    d = an.all_equilibria(TABLE1, 0.5, 100.0, 2.5)[1].as_dict()
    assert d["label"] == "E1" and d["stability"] == "LAS"
    assert len(d["eigenvalues"]) == 3
