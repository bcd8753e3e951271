"""Similarity-transformation pipelines and isospectrality checks.

Two chains are provided:

* case I (``w > alpha + beta``): one Gaussian ``exp(lam x^2)`` with
  ``lam = (beta - alpha) / (2 (w - alpha - beta))``.
* case II (``w = alpha + beta``): ``exp((a^dagger)^2 / 2)`` first, which
  leaves ``(beta - alpha)(a^dagger a + 1/2) + alpha a^2``, then a Gaussian.

The Gaussian parameter is always solved from the requirement that the
``xp + px`` term vanish. With ``a = (x + ip)/sqrt(2)`` the case II value is
``lam = -alpha / (2 (beta - 2 alpha))``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import fock_matrix as fm
from .errors import InvalidRegion, NoConvergedLevels, SingularDenominator
from .model import CLASSIFY_TOL, SpectrumClass, SwansonParams, build_swanson, classify
from .quad_ops import (
    QuadraticOperator,
    conjugate_by_gaussian,
    conjugate_by_ladder_squeeze,
    formal_omega_squared,
    hermitizing_lambda,
    is_hermitian,
    to_ladder_basis,
    to_phase_basis,
)

CHAIN_HERMITIAN_TOL = 1e-10


class Generator(str, Enum):
    LADDER_SQUEEZE = "LadderSqueeze"
    GAUSSIAN = "Gaussian"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class TransformStep:
    generator: Generator
    parameter: complex

    def apply(self, op: QuadraticOperator) -> QuadraticOperator:
        if self.generator is Generator.LADDER_SQUEEZE:
            return conjugate_by_ladder_squeeze(op, self.parameter)
        return to_ladder_basis(conjugate_by_gaussian(to_phase_basis(op), self.parameter))


@dataclass(frozen=True)
class TransformChain:
    steps: tuple[TransformStep, ...]
    input: QuadraticOperator
    output: QuadraticOperator
    hermitized: bool
    intermediates: tuple[QuadraticOperator, ...] = field(default=(), repr=False)

    def to_dict(self) -> dict:
        """JSON-ready description (complex numbers split into re/im)."""
        return {
            "steps": [
                {"generator": str(s.generator), "parameter": _cplx(s.parameter)}
                for s in self.steps
            ],
            "input": _ladder_dict(self.input),
            "output": _ladder_dict(self.output),
            "output_phase": _phase_dict(self.output),
            "hermitized": self.hermitized,
        }


def _cplx(z: complex) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def _ladder_dict(op: QuadraticOperator) -> dict:
    return {k: _cplx(v) for k, v in zip(("c_num", "c_low", "c_raise", "c_const"), op.as_tuple())}


def _phase_dict(op: QuadraticOperator) -> dict:
    ph = to_phase_basis(op)
    return {k: _cplx(v) for k, v in zip(("g_pp", "g_xx", "g_cross", "g_const"), ph.as_tuple())}


def apply_chain(op: QuadraticOperator, steps, hermitized: bool | None = None) -> TransformChain:
    """Apply ``steps`` in order. ``hermitized`` defaults to a hermiticity check."""
    steps = tuple(steps)
    current = op
    inter = []
    for step in steps:
        current = step.apply(current)
        inter.append(current)
    if hermitized is None:
        hermitized = is_hermitian(current, CHAIN_HERMITIAN_TOL)
    return TransformChain(steps, op, current, hermitized, tuple(inter))


def case1_hermitize(params: SwansonParams, tol: float = CLASSIFY_TOL) -> TransformChain:
    tag = classify(params, tol)
    if tag not in (SpectrumClass.REAL_CASE_I, SpectrumClass.HERMITIAN_LIMIT) or params.mass_term <= 0:
        raise InvalidRegion(f"case I chain needs RealCaseI or HermitianLimit, got {tag}")
    op = build_swanson(params)
    lam = (params.beta - params.alpha) / (2 * params.mass_term)
    if tag is SpectrumClass.HERMITIAN_LIMIT:
        lam = 0.0
    chain = apply_chain(op, [TransformStep(Generator.GAUSSIAN, lam)])
    if not chain.hermitized:
        raise InvalidRegion(f"Gaussian step failed to hermitize {params}")
    return chain


def case2_chain(params: SwansonParams, tol: float = CLASSIFY_TOL) -> TransformChain:
    tag = classify(params, tol)
    if tag is not SpectrumClass.REAL_CASE_II:
        raise InvalidRegion(f"case II chain needs RealCaseII, got {tag}")
    kinetic = params.beta - 2 * params.alpha
    if abs(kinetic) <= tol:
        raise SingularDenominator(f"beta - 2 alpha = {kinetic!r} vanishes")
    if kinetic < 0 or params.beta <= params.alpha:
        raise InvalidRegion(f"case II chain needs beta > 2 alpha; got {params}")

    op = build_swanson(params)
    squeeze = TransformStep(Generator.LADDER_SQUEEZE, 0.5)
    reduced = squeeze.apply(op)
    lam = hermitizing_lambda(to_phase_basis(reduced))
    if abs(lam.imag) <= tol * max(1.0, abs(lam)):
        lam = complex(lam.real, 0.0)
    chain = apply_chain(op, [squeeze, TransformStep(Generator.GAUSSIAN, lam)])
    if not chain.hermitized:
        raise InvalidRegion(f"case II chain failed to hermitize {params}")
    return chain


@dataclass(frozen=True)
class IsospectralReport:
    equal: bool
    levels_a: np.ndarray
    levels_b: np.ndarray
    deltas: np.ndarray
    compared: np.ndarray
    tol: float
    N: int


def verify_isospectral(
    a: QuadraticOperator,
    b: QuadraticOperator,
    N: int,
    k: int,
    tol: float,
    jobs: int = 1,
) -> IsospectralReport:
    """Compare the ``k`` lowest converged truncated eigenvalues of two operators.

    Convergence is judged per operator by :func:`~swanson.fock_matrix.convergence_study`
    on the dims ``(N // 2, N)`` with threshold ``tol``. Only levels stable for
    both operators are compared; their deltas must all be within ``tol``.
    """
    if N < 4 * k:
        raise ValueError(f"need N >= 4k, got N={N}, k={k}")
    dims = (N // 2, N)

    def study(op):
        return fm.convergence_study(op, dims, k=k, tol=tol)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=2) as pool:
            ra, rb = pool.map(study, (a, b))
    else:
        ra, rb = study(a), study(b)

    mask = ra.stable_mask & rb.stable_mask
    if not mask.any():
        raise NoConvergedLevels(f"no level converged for both operators at N={N}")
    la, lb = ra.levels[-1], rb.levels[-1]
    deltas = np.abs(la - lb)
    equal = bool(np.all(deltas[mask] <= tol))
    return IsospectralReport(equal, la, lb, deltas, mask, tol, N)


def _term_scale(op: QuadraticOperator) -> float:
    return abs(op.c_num) ** 2 + 4 * abs(op.c_low * op.c_raise)


def discriminant_preserved(chain: TransformChain, rtol: float = 1e-12) -> bool:
    """Check that ``formal_omega_squared`` survived the chain.

    The tolerance is relative to the largest ``|c_num|^2 + 4 |c_low c_raise|``
    met along the chain, which bounds the rounding error of the cancellation.
    """
    before = formal_omega_squared(chain.input)
    after = formal_omega_squared(chain.output)
    scale = max(_term_scale(op) for op in (chain.input, *chain.intermediates))
    return abs(after - before) <= rtol * max(scale, 1e-300)
