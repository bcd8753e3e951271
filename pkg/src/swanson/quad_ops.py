"""Exact algebra of single-mode quadratic bosonic operators.

Convention (hbar = 1)::

    a = (x + i p) / sqrt(2),    [x, p] = i,    [a, a^dagger] = 1

Two equivalent representations are provided:

* :class:`QuadraticOperator` (ladder basis)::

    c_num (a^dagger a + 1/2) + c_low a^2 + c_raise (a^dagger)^2 + c_const

* :class:`PhaseQuadratic` (phase-space basis)::

    g_pp p^2 + g_xx x^2 + g_cross (x p + p x) + g_const

Conjugation by the two similarity generators ``exp(mu (a^dagger)^2)`` and
``exp(lambda x^2)`` acts linearly on (a, a^dagger) and (x, p), so the
transformed coefficients are closed-form and exact; no BCH truncation is
involved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .errors import NotHermitian, UnboundedBelow

__all__ = [
    "CONVENTION",
    "HERMITIAN_TOL",
    "QuadraticOperator",
    "PhaseQuadratic",
    "to_phase_basis",
    "to_ladder_basis",
    "conjugate_by_ladder_squeeze",
    "conjugate_by_gaussian",
    "hermitizing_lambda",
    "is_hermitian",
    "formal_omega_squared",
    "phase_discriminant",
    "exact_spectrum",
]

CONVENTION = "a=(x+ip)/sqrt(2), [x,p]=i, hbar=1"
HERMITIAN_TOL = 1e-12


@dataclass(frozen=True)
class QuadraticOperator:
    """``c_num (a^dagger a + 1/2) + c_low a^2 + c_raise (a^dagger)^2 + c_const``."""

    c_num: complex
    c_low: complex = 0.0
    c_raise: complex = 0.0
    c_const: complex = 0.0

    def __post_init__(self):
        for name in ("c_num", "c_low", "c_raise", "c_const"):
            object.__setattr__(self, name, complex(getattr(self, name)))

    def as_tuple(self) -> tuple[complex, complex, complex, complex]:
        return (self.c_num, self.c_low, self.c_raise, self.c_const)

    def transpose(self) -> "QuadraticOperator":
        """Operator whose Fock matrix is the transpose of this one's."""
        return QuadraticOperator(self.c_num, self.c_raise, self.c_low, self.c_const)


@dataclass(frozen=True)
class PhaseQuadratic:
    """``g_pp p^2 + g_xx x^2 + g_cross (x p + p x) + g_const``."""

    g_pp: complex
    g_xx: complex
    g_cross: complex = 0.0
    g_const: complex = 0.0

    def __post_init__(self):
        for name in ("g_pp", "g_xx", "g_cross", "g_const"):
            object.__setattr__(self, name, complex(getattr(self, name)))

    def as_tuple(self) -> tuple[complex, complex, complex, complex]:
        return (self.g_pp, self.g_xx, self.g_cross, self.g_const)


AnyQuadratic = Union[QuadraticOperator, PhaseQuadratic]


def to_phase_basis(op: QuadraticOperator) -> PhaseQuadratic:
    """Rewrite a ladder-basis operator in terms of x and p."""
    c_num, c_low, c_raise, c_const = op.as_tuple()
    return PhaseQuadratic(
        g_pp=(c_num - c_low - c_raise) / 2,
        g_xx=(c_num + c_low + c_raise) / 2,
        g_cross=1j * (c_low - c_raise) / 2,
        g_const=c_const,
    )


def to_ladder_basis(op: PhaseQuadratic) -> QuadraticOperator:
    """Inverse of :func:`to_phase_basis`."""
    g_pp, g_xx, g_cross, g_const = op.as_tuple()
    half_diff = (g_xx - g_pp) / 2
    return QuadraticOperator(
        c_num=g_pp + g_xx,
        c_low=half_diff - 1j * g_cross,
        c_raise=half_diff + 1j * g_cross,
        c_const=g_const,
    )


def conjugate_by_ladder_squeeze(op: QuadraticOperator, mu: complex) -> QuadraticOperator:
    """Return ``exp(mu a^dagger^2) H exp(-mu a^dagger^2)``.

    Under this conjugation ``a -> a - 2 mu a^dagger`` and ``a^dagger`` is
    unchanged; re-normal-ordering gives the coefficients below. ``mu = 1/2``
    maps ``w, alpha, beta`` to ``w - 2 alpha, alpha, alpha + beta - w``.
    """
    mu = complex(mu)
    c_num, c_low, c_raise, c_const = op.as_tuple()
    return QuadraticOperator(
        c_num=c_num - 4 * mu * c_low,
        c_low=c_low,
        c_raise=c_raise - 2 * mu * c_num + 4 * mu * mu * c_low,
        c_const=c_const,
    )


def conjugate_by_gaussian(op: PhaseQuadratic, lam: complex) -> PhaseQuadratic:
    """Return ``exp(lam x^2) H exp(-lam x^2)`` (``p -> p + 2 i lam x``)."""
    lam = complex(lam)
    g_pp, g_xx, g_cross, g_const = op.as_tuple()
    return PhaseQuadratic(
        g_pp=g_pp,
        g_xx=g_xx - 4 * lam * lam * g_pp + 4j * lam * g_cross,
        g_cross=g_cross + 2j * lam * g_pp,
        g_const=g_const,
    )


def hermitizing_lambda(op: PhaseQuadratic) -> complex:
    """Unique ``lam`` for which :func:`conjugate_by_gaussian` removes the cross term.

    Solves ``g_cross + 2 i lam g_pp = 0``. Raises ``ZeroDivisionError`` when
    ``g_pp`` vanishes.
    """
    if op.g_pp == 0:
        raise ZeroDivisionError("cross term cannot be removed when g_pp = 0")
    return 1j * op.g_cross / (2 * op.g_pp)


def _is_real(z: complex, tol: float) -> bool:
    return abs(z.imag) <= tol


def is_hermitian(op: AnyQuadratic, tol: float = HERMITIAN_TOL) -> bool:
    """Hermiticity test on the coefficients.

    Ladder basis: ``c_num`` and ``c_const`` real and ``c_raise == conj(c_low)``.
    Phase basis: all four coefficients real.
    """
    if tol < 0:
        raise ValueError("tol must be non-negative")
    if isinstance(op, PhaseQuadratic):
        return all(_is_real(g, tol) for g in op.as_tuple())
    return (
        _is_real(op.c_num, tol)
        and _is_real(op.c_const, tol)
        and abs(op.c_raise - op.c_low.conjugate()) <= tol
    )


def formal_omega_squared(op: QuadraticOperator) -> complex:
    """``c_num^2 - 4 c_low c_raise``; invariant under both conjugations."""
    return op.c_num * op.c_num - 4 * op.c_low * op.c_raise


def phase_discriminant(op: PhaseQuadratic) -> complex:
    """``4 (g_pp g_xx - g_cross^2)``, equal to :func:`formal_omega_squared`."""
    return 4 * (op.g_pp * op.g_xx - op.g_cross * op.g_cross)


def exact_spectrum(op: PhaseQuadratic, n_max: int) -> list[float]:
    """Closed-form levels ``2 sqrt(g_pp g_xx - g_cross^2) (n + 1/2) + g_const``.

    Parameters
    ----------
    op : PhaseQuadratic
        Must be Hermitian within :data:`HERMITIAN_TOL` and bounded below
        (``g_pp > 0`` and ``g_pp g_xx - g_cross^2 > 0``).
    n_max : int
        Highest level returned; the list has ``n_max + 1`` entries.
    """
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    if not is_hermitian(op, HERMITIAN_TOL):
        raise NotHermitian(f"operator is not Hermitian: {op}")
    g_pp, g_xx, g_cross, g_const = (g.real for g in op.as_tuple())
    det = g_pp * g_xx - g_cross * g_cross
    if g_pp <= 0 or det <= 0:
        raise UnboundedBelow(f"g_pp={g_pp!r}, g_pp*g_xx-g_cross^2={det!r}")
    omega = 2 * math.sqrt(det)
    return [omega * (n + 0.5) + g_const for n in range(n_max + 1)]

