"""Swanson oscillator: constructors, analytic spectrum and reality classifier.

The Hamiltonian is ``w (a^dagger a + 1/2) + alpha a^2 + beta (a^dagger)^2``
with real parameters. Two derived quantities drive everything here::

    omega_squared = w^2 - 4 alpha beta
    mass_term     = w - alpha - beta      (twice the p^2 coefficient)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import InvalidRegion, NotRealSpectrum, SingularDenominator
from .quad_ops import PhaseQuadratic, QuadraticOperator

CLASSIFY_TOL = 1e-10


class SpectrumClass(str, Enum):
    REAL_CASE_I = "RealCaseI"
    REAL_CASE_II = "RealCaseII"
    HERMITIAN_LIMIT = "HermitianLimit"
    COMPLEX_PAIR = "ComplexPair"
    DEGENERATE_BOUNDARY = "DegenerateBoundary"
    REAL_OMEGA_NEGATIVE_MASS = "RealOmegaNegativeMass"

    def __str__(self):
        return self.value


REAL_CLASSES = frozenset(
    {SpectrumClass.REAL_CASE_I, SpectrumClass.REAL_CASE_II, SpectrumClass.HERMITIAN_LIMIT}
)


@dataclass(frozen=True)
class SwansonParams:
    w: float
    alpha: float
    beta: float

    def __post_init__(self):
        for name in ("w", "alpha", "beta"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)

    @property
    def omega_squared(self) -> float:
        return self.w * self.w - 4 * self.alpha * self.beta

    @property
    def mass_term(self) -> float:
        # alpha + beta first keeps the value symmetric under alpha <-> beta
        return self.w - (self.alpha + self.beta)

    def swapped(self) -> "SwansonParams":
        return SwansonParams(self.w, self.beta, self.alpha)


def build_swanson(params: SwansonParams) -> QuadraticOperator:
    return QuadraticOperator(params.w, params.alpha, params.beta, 0.0)


def classify(params: SwansonParams, tol: float = CLASSIFY_TOL) -> SpectrumClass:
    """Tag the parameter point by the sign structure of omega^2 and the mass term.

    The sign of omega^2 is tested first, so the point alpha = beta = w/2
    reports ``DegenerateBoundary`` and alpha = beta with w^2 < 4 alpha^2
    reports ``ComplexPair``. ``HermitianLimit`` therefore always carries
    omega^2 > 0.
    """
    if tol < 0:
        raise ValueError("tol must be non-negative")
    om2 = params.omega_squared
    m = params.mass_term
    if abs(om2) <= tol:
        return SpectrumClass.DEGENERATE_BOUNDARY
    if om2 < 0:
        return SpectrumClass.COMPLEX_PAIR
    if abs(params.alpha - params.beta) <= tol:
        return SpectrumClass.HERMITIAN_LIMIT
    if abs(m) <= tol:
        return SpectrumClass.REAL_CASE_II
    if m > 0:
        return SpectrumClass.REAL_CASE_I
    return SpectrumClass.REAL_OMEGA_NEGATIVE_MASS


def exact_energy(params: SwansonParams, n: int, tol: float = CLASSIFY_TOL) -> float:
    """``(n + 1/2) sqrt(w^2 - 4 alpha beta)`` for the real-spectrum classes."""
    if n < 0:
        raise ValueError("level index must be non-negative")
    tag = classify(params, tol)
    if tag not in REAL_CLASSES:
        raise NotRealSpectrum(f"{tag} at {params}")
    if tag is SpectrumClass.HERMITIAN_LIMIT and params.mass_term <= 0:
        # w < 0: the Hermitian operator is bounded above, not below
        raise NotRealSpectrum(f"HermitianLimit with non-positive mass term at {params}")
    return (n + 0.5) * math.sqrt(params.omega_squared)


def hermitian_equivalent_case1(params: SwansonParams) -> PhaseQuadratic:
    """``(w-a-b)/2 p^2 + (w^2-4ab)/(2(w-a-b)) x^2`` for ``w > a + b``, omega^2 > 0."""
    m = params.mass_term
    om2 = params.omega_squared
    if not (m > 0 and om2 > 0):
        raise InvalidRegion(
            f"case I needs w-alpha-beta > 0 and omega^2 > 0; got {m!r}, {om2!r}"
        )
    return PhaseQuadratic(g_pp=m / 2, g_xx=om2 / (2 * m))


def case2_hermitian(params: SwansonParams, tol: float = CLASSIFY_TOL) -> PhaseQuadratic:
    """Hermitian form reached from the w = alpha + beta boundary.

    Returns ``(b-2a)/2 p^2 + (b-a)^2/(2(b-2a)) x^2``; defined for
    ``b > 2a`` and ``b > a``.
    """
    a, b = params.alpha, params.beta
    if abs(params.mass_term) > tol:
        raise InvalidRegion(f"case II needs w = alpha + beta; mass term is {params.mass_term!r}")
    kinetic = b - 2 * a
    if abs(kinetic) <= tol:
        raise SingularDenominator(f"beta - 2 alpha = {kinetic!r} vanishes")
    if kinetic < 0 or b - a <= 0:
        raise InvalidRegion(f"case II needs beta > 2 alpha and beta > alpha; got {params}")
    return PhaseQuadratic(g_pp=kinetic / 2, g_xx=(b - a) ** 2 / (2 * kinetic))
