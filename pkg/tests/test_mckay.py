import cmath
import math

import numpy as np
import pytest
from scipy import integrate

from matchmeasure.counting import matching_stats
from matchmeasure.generators import large_girth_regular
from matchmeasure.mckay import (
    McKayParams,
    density,
    derivative_integral,
    derivative_integral_quad,
    gurvits_entropy_function,
    gurvits_max,
    integrate_against_density,
    log_abs_integral,
    log_abs_integral_quad,
    log_integral,
    log_integral_quad,
    reciprocal_integral,
    reciprocal_integral_quad,
    theorem_limits,
)

DEGREES = range(2, 11)


@pytest.mark.parametrize("d", DEGREES)
def test_density_is_a_probability_density(d):
    omega = 2 * math.sqrt(d - 1)
    total, _ = integrate.quad(lambda x: density(d, x), -omega, omega, limit=200)
    assert total == pytest.approx(1, abs=1e-9)
    assert density(d, omega + 0.1) == 0.0
    assert density(d, 0.3) == density(d, -0.3) > 0


@pytest.mark.parametrize("d", range(3, 8))
def test_density_moments_count_tree_walks(d):
    # closed walks at the root of the d-regular tree: 1, d, d(2d - 1), d(5d^2 - 6d + 2)
    expected = [1, d, d * (2 * d - 1), d * (5 * d * d - 6 * d + 2)]
    for k, want in enumerate(expected):
        got = integrate_against_density(d, lambda x: x ** (2 * k)).real
        assert got == pytest.approx(want, rel=1e-10)


def test_density_rejects_bad_degree():
    with pytest.raises(ValueError):
        density(1, 0.0)
    with pytest.raises(ValueError):
        McKayParams.from_degree(2.5)


@pytest.mark.parametrize("d", DEGREES)
@pytest.mark.parametrize("gamma", [1j, 0.5j, 2j, 0.1, -0.2, 0.3 + 0.4j])
def test_log_and_reciprocal_integrals_match_quadrature(d, gamma):
    if gamma.imag == 0 and 4 * (d - 1) * gamma.real**2 >= 1:
        pytest.skip("gamma on the branch cut for this degree")
    assert abs(log_integral(d, gamma) - log_integral_quad(d, gamma)) < 1e-10
    assert abs(reciprocal_integral(d, gamma) - reciprocal_integral_quad(d, gamma)) < 1e-10


@pytest.mark.parametrize("d", DEGREES)
def test_derivative_and_log_abs_match_quadrature(d):
    assert abs(derivative_integral(d) - derivative_integral_quad(d)) < 1e-10
    assert derivative_integral(d).real == 0
    assert abs(log_abs_integral(d) - log_abs_integral_quad(d)) < 1e-10


@pytest.mark.parametrize("d", [3, 5, 8])
def test_derivative_is_gamma_derivative_of_reciprocal(d):
    h = 1e-5
    fd = (reciprocal_integral(d, 1j + h) - reciprocal_integral(d, 1j - h)) / (2 * h)
    assert abs(fd - derivative_integral(d)) < 1e-8


def test_branch_cut_rejected():
    with pytest.raises(ValueError):
        log_integral(3, 0.5)
    with pytest.raises(ValueError):
        reciprocal_integral_quad(3, -1.0)


def test_cubic_constants():
    p = McKayParams.from_degree(3)
    assert p.omega == pytest.approx(2 * math.sqrt(2))
    assert p.xi == 0.5
    assert p.S_d == pytest.approx(16 / 5, rel=1e-15)
    assert p.schrijver_exponent == pytest.approx(0.5 * math.log(4 / 3), rel=1e-15)
    assert derivative_integral(3) == pytest.approx(0.32j, abs=1e-15)
    assert set(p.to_json()) == {"d", "omega", "xi", "S_d", "schrijver_exponent"}


@pytest.mark.parametrize("d", range(3, 11))
def test_limits_read_off_the_integrals(d):
    lim = theorem_limits(d)
    # entropy is Re int ln(1 + x^2)/2 = Re int ln(1 - i x)
    assert lim["entropy_limit"] == pytest.approx(log_integral(d, 1j).real, rel=1e-12)
    # expectation is (1 - Re int 1/(1 - i x)) / 2
    assert lim["expectation_limit"] == pytest.approx((1 - reciprocal_integral(d, 1j).real) / 2, rel=1e-12)
    # variance is Im of the derivative integral / 4
    assert lim["variance_limit"] == pytest.approx(derivative_integral(d).imag / 4, rel=1e-12)
    assert lim["pm_entropy_limit"] == pytest.approx(log_abs_integral(d), rel=1e-15)


def test_limits_need_degree_three():
    with pytest.raises(ValueError):
        theorem_limits(2)


def test_limits_direct_quadrature_of_statistics():
    d = 4
    lim = theorem_limits(d)
    ent = integrate_against_density(d, lambda x: 0.5 * math.log1p(x * x)).real
    exp_ = integrate_against_density(d, lambda x: 0.5 * x * x / (1 + x * x)).real
    var = integrate_against_density(d, lambda x: 0.5 * x * x / (1 + x * x) ** 2).real
    assert lim["entropy_limit"] == pytest.approx(ent, rel=1e-10)
    assert lim["expectation_limit"] == pytest.approx(exp_, rel=1e-10)
    assert lim["variance_limit"] == pytest.approx(var, rel=1e-10)


def test_large_girth_cubic_graphs_approach_limits():
    lim = theorem_limits(3)
    gaps = []
    for v in (14, 22, 30):
        st = matching_stats(large_girth_regular(v, 3, 6, seed=0))
        gaps.append(abs(st.variance_normalized - lim["variance_limit"]))
        assert abs(st.entropy_per_vertex - lim["entropy_limit"]) < 1e-3
        assert abs(st.expected_size_normalized - lim["expectation_limit"]) < 2e-3
    assert max(gaps) < 5e-3


@pytest.mark.parametrize("d", range(3, 11))
def test_gurvits_max_is_stationary_root(d):
    t, value = gurvits_max(d)
    # stationary points solve (d^2 + 1) t^2 - (2 d^2 + d) t + d^2 = 0
    a, b, c = d * d + 1, -(2 * d * d + d), d * d
    roots = sorted(np.roots([a, b, c]).real)
    assert t == pytest.approx(roots[0], abs=1e-8)
    assert value == pytest.approx(gurvits_entropy_function(d, roots[0]), abs=1e-14)
    assert value == pytest.approx(math.log(McKayParams.from_degree(d).S_d), abs=1e-9)


def test_gurvits_function_domain():
    assert gurvits_entropy_function(3, 0.0) == 0.0
    assert gurvits_entropy_function(3, 1.0) == pytest.approx(math.log(3) + 2 * math.log(2 / 3))
    with pytest.raises(ValueError):
        gurvits_entropy_function(3, 1.5)


def test_complex_log_branch():
    # ln(1 - i x) integrates to a real number by symmetry of the density
    assert abs(log_integral(5, 1j).imag) < 1e-15
    assert abs(cmath.phase(reciprocal_integral(5, 1j))) < 1e-15
