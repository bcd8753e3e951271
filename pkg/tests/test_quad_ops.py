import cmath
import math

import numpy as np
import pytest
import scipy.linalg
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from swanson.errors import NotHermitian, UnboundedBelow
from swanson.quad_ops import (
    PhaseQuadratic,
    QuadraticOperator,
    conjugate_by_gaussian,
    conjugate_by_ladder_squeeze,
    exact_spectrum,
    formal_omega_squared,
    hermitizing_lambda,
    is_hermitian,
    phase_discriminant,
    to_ladder_basis,
    to_phase_basis,
)

finite = st.floats(-5, 5, allow_nan=False, allow_infinity=False)
cplx = st.builds(complex, finite, finite)
ladder_ops = st.builds(QuadraticOperator, cplx, cplx, cplx, cplx)
phase_ops = st.builds(PhaseQuadratic, cplx, cplx, cplx, cplx)
small = st.builds(complex, st.floats(-1, 1), st.floats(-1, 1))


def assert_coeffs(got, expected, tol=1e-14):
    np.testing.assert_allclose(np.array(got.as_tuple()), np.array(expected, dtype=complex), atol=tol, rtol=0)


# -- independent oracle: x, p as operators on functions -------------------------

x = sp.symbols("x", real=True)
f = sp.Function("f")(x)


def apply_phase(op: PhaseQuadratic, g):
    """Apply g_pp p^2 + g_xx x^2 + g_cross (xp + px) + g_const with p = -i d/dx."""
    def p(h):
        return -sp.I * sp.diff(h, x)

    gpp, gxx, gx, g0 = (sp.nsimplify(c) for c in op.as_tuple())
    return gpp * p(p(g)) + gxx * x**2 * g + gx * (x * p(g) + p(x * g)) + g0 * g


def apply_ladder(op: QuadraticOperator, g):
    # i p = d/dx
    def a(h):
        return (x * h + sp.diff(h, x)) / sp.sqrt(2)

    def ad(h):
        return (x * h - sp.diff(h, x)) / sp.sqrt(2)

    cn, cl, cr, c0 = (sp.nsimplify(c) for c in op.as_tuple())
    return cn * (ad(a(g)) + g / 2) + cl * a(a(g)) + cr * ad(ad(g)) + c0 * g


@pytest.mark.parametrize(
    "coeffs",
    [(1, 0, 0, 0), (0, 1, 1, 0), (2, 0.5, 0.25, 0.75), (3, 1, 2, 0), (1, 0.5j, -2, 1j)],
)
def test_phase_conversion_matches_differential_operators(coeffs):
    op = QuadraticOperator(*coeffs)
    lhs = apply_ladder(op, f)
    rhs = apply_phase(to_phase_basis(op), f)
    assert sp.simplify(sp.expand(lhs - rhs)) == 0


@pytest.mark.parametrize("lam", [0.25, -0.25, 0.5j, 1 - 0.5j])
def test_gaussian_conjugation_matches_differential_operators(lam):
    op = PhaseQuadratic(1, 2, 0.5j, 0.25)
    lam_s = sp.nsimplify(lam)
    # exp(lam x^2) H exp(-lam x^2) applied to f
    lhs = sp.exp(lam_s * x**2) * apply_phase(op, sp.exp(-lam_s * x**2) * f)
    rhs = apply_phase(conjugate_by_gaussian(op, lam), f)
    assert sp.simplify(sp.expand(lhs - rhs)) == 0


def fock_matrix(op, N):
    n = np.arange(N)
    a = np.diag(np.sqrt(n[1:]), 1).astype(complex)
    ad = a.T.copy()
    return op.c_num * (ad @ a + 0.5 * np.eye(N)) + op.c_low * a @ a + op.c_raise * ad @ ad + op.c_const * np.eye(N)


@pytest.mark.parametrize("mu", [0.5, -0.3, 0.2 + 0.1j])
def test_ladder_squeeze_matches_matrix_conjugation(mu):
    # exp(mu a^dagger^2) is lower triangular, so the truncated conjugation is
    # exact away from the truncation edge
    N = 24
    op = QuadraticOperator(2.0, 0.7, -0.4 + 0.2j, 0.1)
    n = np.arange(N)
    ad = np.diag(np.sqrt(n[1:]), -1)
    S = scipy.linalg.expm(mu * ad @ ad)
    S_inv = scipy.linalg.expm(-mu * ad @ ad)
    conj = S @ fock_matrix(op, N) @ S_inv
    expected = fock_matrix(conjugate_by_ladder_squeeze(op, mu), N)
    inner = N - 4
    np.testing.assert_allclose(conj[:inner, :inner], expected[:inner, :inner], atol=1e-9, rtol=1e-12)


# -- documented examples -------------------------------------------------------


def test_to_phase_examples():
    w, a, b = 3.0, 0.7, 1.9
    assert_coeffs(to_phase_basis(QuadraticOperator(w, a, b)), [(w - a - b) / 2, (w + a + b) / 2, 1j * (a - b) / 2, 0])
    assert_coeffs(to_phase_basis(QuadraticOperator(1, 0, 0, 0)), [0.5, 0.5, 0, 0])
    assert_coeffs(to_phase_basis(QuadraticOperator(0, 1, 1, 0)), [-1, 1, 0, 0])


def test_to_ladder_examples():
    assert_coeffs(to_ladder_basis(PhaseQuadratic(0.5, 0.5, 0, 0)), [1, 0, 0, 0])
    assert_coeffs(to_ladder_basis(PhaseQuadratic(-1, 1, 0, 0)), [0, 1, 1, 0])
    w, a, b = 3.0, 0.7, 1.9
    ph = PhaseQuadratic((w - a - b) / 2, (w + a + b) / 2, 1j * (a - b) / 2, 0)
    assert_coeffs(to_ladder_basis(ph), [w, a, b, 0])


def test_ladder_squeeze_examples():
    w, a, b = 2.3, 0.4, 1.1
    assert_coeffs(conjugate_by_ladder_squeeze(QuadraticOperator(w, a, b), 0.5), [w - 2 * a, a, a + b - w, 0])
    assert_coeffs(conjugate_by_ladder_squeeze(QuadraticOperator(3, 1, 2), 0.5), [1, 1, 0, 0])
    op = QuadraticOperator(1.5, 0.2j, -3, 0.5)
    assert conjugate_by_ladder_squeeze(op, 0) == op


def test_gaussian_examples():
    reduced = to_phase_basis(QuadraticOperator(3, 1, 0, 0))
    assert_coeffs(reduced, [1, 2, 0.5j, 0])
    out = conjugate_by_gaussian(reduced, -0.25)
    assert_coeffs(out, [1, 9 / 4, 0, 0])
    assert is_hermitian(out)

    op = PhaseQuadratic(2, 0.3, 0.1j, 1)
    assert conjugate_by_gaussian(op, 0) == op

    for lam in (0.3, -1.2, 0.5j):
        out = conjugate_by_gaussian(PhaseQuadratic(0.5, 0.5), lam)
        assert out.g_cross == pytest.approx(1j * lam, abs=1e-15)
        assert out.g_xx == pytest.approx(0.5 - 2 * lam**2, abs=1e-15)


def test_is_hermitian_examples():
    assert is_hermitian(QuadraticOperator(2, 0.5, 0.5))
    assert not is_hermitian(QuadraticOperator(2, 0.2, 0.8))
    assert is_hermitian(PhaseQuadratic(1, 9 / 4, 0, 0))
    assert is_hermitian(QuadraticOperator(1, 0.3 + 0.2j, 0.3 - 0.2j))
    assert not is_hermitian(PhaseQuadratic(1, 1, 0.5j))
    with pytest.raises(ValueError):
        is_hermitian(PhaseQuadratic(1, 1), tol=-1)


def test_is_hermitian_consistent_between_bases():
    for op in [QuadraticOperator(1, 0.3 + 0.2j, 0.3 - 0.2j, 2), QuadraticOperator(2, 0.2, 0.8), QuadraticOperator(1j, 0, 0)]:
        assert is_hermitian(op) == is_hermitian(to_phase_basis(op))


def test_formal_omega_squared_examples():
    assert formal_omega_squared(QuadraticOperator(2, 0.5, 0.5)) == pytest.approx(3)
    assert formal_omega_squared(QuadraticOperator(1.7, 0, 0)) == pytest.approx(1.7**2)
    assert formal_omega_squared(QuadraticOperator(3, 1, 2)) == pytest.approx(1)


def test_exact_spectrum_examples():
    e0 = exact_spectrum(PhaseQuadratic(0.5, 1.5), 0)[0]
    assert e0 == pytest.approx(math.sqrt(3) / 2, abs=1e-15)
    assert exact_spectrum(PhaseQuadratic(0.5, 0.5), 2) == pytest.approx([0.5, 1.5, 2.5], abs=1e-15)
    levels = exact_spectrum(PhaseQuadratic(1, 9 / 4), 4)
    assert levels == pytest.approx([3 * (n + 0.5) for n in range(5)], abs=1e-14)


def test_exact_spectrum_errors():
    with pytest.raises(NotHermitian):
        exact_spectrum(PhaseQuadratic(1, 1, 0.5j), 2)
    with pytest.raises(UnboundedBelow):
        exact_spectrum(PhaseQuadratic(-1, 1), 2)
    with pytest.raises(UnboundedBelow):
        exact_spectrum(PhaseQuadratic(1, 1, 2), 2)


# -- properties ----------------------------------------------------------------


@given(ladder_ops)
def test_round_trip_ladder(op):
    back = to_ladder_basis(to_phase_basis(op))
    assert_coeffs(back, op.as_tuple(), tol=1e-14 * max(1.0, max(abs(c) for c in op.as_tuple())))


@given(phase_ops)
def test_round_trip_phase(op):
    back = to_phase_basis(to_ladder_basis(op))
    assert_coeffs(back, op.as_tuple(), tol=1e-14 * max(1.0, max(abs(c) for c in op.as_tuple())))


def _rel_close(a, b, scale, rtol=1e-12):
    return abs(a - b) <= rtol * max(scale, 1e-300)


@given(ladder_ops, small)
def test_ladder_squeeze_preserves_discriminant(op, mu):
    out = conjugate_by_ladder_squeeze(op, mu)
    scale = max(abs(o.c_num) ** 2 + 4 * abs(o.c_low * o.c_raise) for o in (op, out))
    assert _rel_close(formal_omega_squared(out), formal_omega_squared(op), scale)


@given(phase_ops, small)
def test_gaussian_preserves_discriminant(op, lam):
    out = conjugate_by_gaussian(op, lam)
    scale = max(4 * (abs(o.g_pp * o.g_xx) + abs(o.g_cross) ** 2) for o in (op, out))
    assert _rel_close(phase_discriminant(out), phase_discriminant(op), scale)


@given(ladder_ops)
def test_discriminant_agrees_between_bases(op):
    scale = abs(op.c_num) ** 2 + 4 * abs(op.c_low * op.c_raise) + 1
    assert _rel_close(formal_omega_squared(op), phase_discriminant(to_phase_basis(op)), scale)


@given(ladder_ops, small, small)
def test_ladder_squeeze_group_law(op, mu1, mu2):
    two = conjugate_by_ladder_squeeze(conjugate_by_ladder_squeeze(op, mu1), mu2)
    one = conjugate_by_ladder_squeeze(op, mu1 + mu2)
    scale = max(1.0, max(abs(c) for c in op.as_tuple()))
    assert_coeffs(two, one.as_tuple(), tol=1e-13 * scale)


@given(phase_ops, small, small)
def test_gaussian_group_law(op, l1, l2):
    two = conjugate_by_gaussian(conjugate_by_gaussian(op, l1), l2)
    one = conjugate_by_gaussian(op, l1 + l2)
    scale = max(1.0, max(abs(c) for c in op.as_tuple()))
    assert_coeffs(two, one.as_tuple(), tol=1e-13 * scale)


@settings(max_examples=200)
@given(phase_ops)
def test_hermitizing_lambda_kills_cross_term(op):
    if abs(op.g_pp) < 1e-3:
        return
    lam = hermitizing_lambda(op)
    out = conjugate_by_gaussian(op, lam)
    assert abs(out.g_cross) <= 1e-15 * max(1.0, abs(op.g_cross))


def test_hermitizing_lambda_requires_kinetic_term():
    with pytest.raises(ZeroDivisionError):
        hermitizing_lambda(PhaseQuadratic(0, 1, 1j))


def test_hermitizing_lambda_case2_value():
    # under a = (x+ip)/sqrt(2) the case II value is -alpha / (2 (beta - 2 alpha))
    for a, b in [(1, 4), (0.3, 2.0), (0.5, 1.7)]:
        reduced = to_phase_basis(QuadraticOperator(b - a, a, 0))
        assert hermitizing_lambda(reduced) == pytest.approx(-a / (2 * (b - 2 * a)), abs=1e-15)
        assert cmath.isclose(hermitizing_lambda(reduced).imag, 0, abs_tol=1e-15)
