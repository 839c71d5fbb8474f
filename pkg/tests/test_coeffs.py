import math

import numpy as np
import pytest

import sharp_parabolic as sp
from sharp_parabolic.coeffs import commutation_defect
from sharp_parabolic.errors import DomainError, NotPositiveDefinite


def test_constant_coefficients_integrate_exactly():
    cs = sp.coefficient_set(n=2, m=2, T=2.0)
    acc = cs.accumulated(0.0, 2.0)
    np.testing.assert_allclose(acc.ia, 2.0 * np.eye(2), atol=1e-13)
    np.testing.assert_allclose(acc.ib, np.zeros(2), atol=1e-15)
    np.testing.assert_allclose(acc.ic, np.zeros((2, 2)), atol=1e-15)
    np.testing.assert_allclose(acc.exp_ic, np.eye(2), atol=1e-15)


def test_affine_diagonal_integral():
    a = sp.Affine(np.diag([1.0, 1.0]), np.diag([1.0, 0.0]))
    cs = sp.coefficient_set(n=2, m=1, T=1.0, A=a)
    acc = cs.accumulated(0.0, 1.0)
    np.testing.assert_allclose(acc.ia, np.diag([1.5, 1.0]), rtol=1e-12)


def test_tabulated_exponential_integral():
    # 33 uniform samples of e^t on [0,1]; monotone cubic interpolation keeps
    # the quadrature within 1e-6 of e - 1
    ts = np.linspace(0.0, 1.0, 33)
    tab = sp.Tabulated(ts, np.exp(ts)[:, None, None])
    cs = sp.coefficient_set(n=1, m=1, T=1.0, A=tab)
    acc = cs.accumulated(0.0, 1.0)
    assert acc.ia[0, 0] == pytest.approx(math.e - 1.0, abs=1e-6)


def test_derived_fields_consistent():
    rng = np.random.default_rng(23)
    g = rng.standard_normal((3, 3))
    a = g @ g.T + 0.3 * np.eye(3)
    c = rng.standard_normal((2, 2))
    cs = sp.coefficient_set(n=3, m=2, T=1.0, A=a, C=c)
    acc = cs.accumulated(0.2, 0.9)
    np.testing.assert_allclose(acc.ia_sqrt @ acc.ia_sqrt, acc.ia, rtol=1e-10)
    np.testing.assert_allclose(
        acc.ia_inv_sqrt @ acc.ia_sqrt, np.eye(3), atol=1e-11
    )
    assert acc.det_ia_sqrt == pytest.approx(
        math.sqrt(np.linalg.det(acc.ia)), rel=1e-10
    )
    np.testing.assert_allclose(
        acc.exp_ic_star, acc.exp_ic.T, rtol=1e-12, atol=1e-14
    )


def test_additivity_of_windows():
    a = sp.Affine(np.array([[1.0]]), np.array([[0.5]]))
    b = sp.Affine(np.array([0.0]), np.array([1.0]))
    cs = sp.coefficient_set(n=1, m=1, T=2.0, A=a, b=b, C=-0.2)
    whole = cs.accumulated(0.1, 1.7)
    left = cs.accumulated(0.1, 0.9)
    right = cs.accumulated(0.9, 1.7)
    np.testing.assert_allclose(left.ia + right.ia, whole.ia, rtol=1e-10)
    np.testing.assert_allclose(left.ib + right.ib, whole.ib, rtol=1e-10)
    np.testing.assert_allclose(left.ic + right.ic, whole.ic, rtol=1e-10)


def test_min_eigenvalue_monotone_in_t():
    a = sp.Affine(np.array([[1.0, 0.2], [0.2, 2.0]]), np.eye(2))
    cs = sp.coefficient_set(n=2, m=1, T=2.0, A=a)
    previous = 0.0
    for t in np.linspace(0.2, 2.0, 10):
        low = cs.accumulated(0.1, float(t)).ia_eigenvalues[-1]
        assert low >= previous - 1e-12
        previous = low


def test_degenerate_window_rejected():
    cs = sp.coefficient_set(n=1, m=1, T=1.0)
    with pytest.raises(DomainError):
        cs.accumulated(0.5, 0.5 + 1e-15)
    with pytest.raises(DomainError):
        cs.accumulated(0.7, 0.3)


def test_tabulated_coverage_enforced():
    ts = np.linspace(0.0, 0.5, 9)
    tab = sp.Tabulated(ts, np.ones((9, 1, 1)))
    with pytest.raises(DomainError):
        sp.coefficient_set(n=1, m=1, T=1.0, A=tab)


def test_tabulated_requires_increasing_times():
    with pytest.raises(DomainError):
        sp.Tabulated(np.array([0.0, 0.5, 0.4]), np.ones((3, 1)))


def test_construction_rejects_indefinite_A():
    with pytest.raises(NotPositiveDefinite):
        sp.coefficient_set(n=2, m=1, T=1.0, A=np.diag([1.0, -0.5]))
    # sign flip midway caught by the probe grid
    a = sp.Affine(np.array([[0.5]]), np.array([[-1.0]]))
    with pytest.raises(NotPositiveDefinite):
        sp.coefficient_set(n=1, m=1, T=1.0, A=a)


def test_window_scaling_exponents_constant():
    assert sp.window_scaling_exponents(
        sp.coefficient_set(n=2, m=1, T=1.0), 1.0
    ) == (1.0, 0.5)
    assert sp.window_scaling_exponents(
        sp.coefficient_set(n=1, m=1, T=1.0), 1.0
    ) == (0.5, 0.5)


def test_window_scaling_exponents_affine_fit():
    a = sp.Affine(np.eye(1), np.eye(1))  # A(t) = (1 + t) I
    cs = sp.coefficient_set(n=1, m=1, T=1.0, A=a)
    kernel_exp, grad_exp = sp.window_scaling_exponents(cs, 1.0)
    assert kernel_exp == pytest.approx(0.5, abs=0.01)
    assert grad_exp == pytest.approx(0.5, abs=0.01)


def test_commutation_defect():
    constant = sp.coefficient_set(
        n=1, m=2, T=1.0, C=np.array([[0.0, 1.0], [0.0, 0.0]])
    )
    assert commutation_defect(constant, 1.0) == pytest.approx(0.0, abs=1e-12)
    c = sp.Affine(np.array([[0.0, 1.0], [0.0, 0.0]]), np.array([[0.0, 0.0], [1.0, 0.0]]))
    varying = sp.coefficient_set(n=1, m=2, T=1.0, C=c)
    assert commutation_defect(varying, 1.0) > 1e-3


def test_quadrature_error_scales_with_tolerance():
    ts = np.linspace(0.0, 1.0, 65)
    tab = sp.Tabulated(ts, (1.0 + np.sin(3.0 * ts) ** 2)[:, None, None])
    cs = sp.coefficient_set(n=1, m=1, T=1.0, A=tab)
    loose = sp.integrate_coefficients(cs, 0.0, 1.0, tol=1e-4)
    tight = sp.integrate_coefficients(cs, 0.0, 1.0, tol=1e-12)
    assert abs(loose.ia[0, 0] - tight.ia[0, 0]) < 1e-4
