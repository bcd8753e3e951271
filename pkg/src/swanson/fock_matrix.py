"""Truncated Fock-space realization and dense eigenvalue analysis.

Truncating a non-Hermitian Swanson operator to the first ``N`` number
states gives a non-normal matrix whose eigenvalues can be far more sensitive
than those of a Hermitian truncation. For real-spectrum parameters the
Hermitian-equivalent route is authoritative; raw truncation is reported next
to it for comparison and convergence study.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg

from .errors import ConvergenceFailure, DimensionTooSmall
from .quad_ops import QuadraticOperator

PAIR_TOL = 1e-9
DEFAULT_DIMS = (64, 128, 256, 512)
# relative residual below which an eigenpair counts as converged
RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class FockMatrix:
    entries: np.ndarray

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=complex)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError("FockMatrix entries must be square")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class SpectrumResult:
    eigenvalues: np.ndarray
    max_residual: float
    truncation_dim: int
    converged_count: int
    residuals: np.ndarray = field(repr=False, default=None)


@dataclass(frozen=True)
class TruncationReport:
    dims_tested: list[int]
    k: int
    tol: float
    # levels[i]: the k tracked eigenvalues at dims_tested[i]
    levels: list[np.ndarray]
    # drift[i][n] = |E_n(dims[i]) - E_n(dims[i+1])|
    drift: list[np.ndarray]
    stable_levels: int

    @property
    def final_drift(self) -> np.ndarray:
        return self.drift[-1] if self.drift else np.zeros(self.k)

    @property
    def stable_mask(self) -> np.ndarray:
        return self.final_drift < self.tol


def materialize(op: QuadraticOperator, N: int) -> FockMatrix:
    """Matrix of ``op`` on ``|0>, ..., |N-1>``.

    Nonzero entries: diagonal ``c_num (n + 1/2) + c_const``,
    ``(n-2, n) = c_low sqrt(n (n-1))`` and ``(n+2, n) = c_raise sqrt((n+1)(n+2))``.
    """
    if N < 2:
        raise DimensionTooSmall(f"truncation dimension must be >= 2, got {N}")
    n = np.arange(N)
    H = np.zeros((N, N), dtype=complex)
    H[n, n] = op.c_num * (n + 0.5) + op.c_const
    if N > 2:
        k = np.arange(2, N)
        amp = np.sqrt(k * (k - 1.0))
        H[k - 2, k] = op.c_low * amp
        H[k, k - 2] = op.c_raise * amp
    return FockMatrix(H)


def sort_spectrum(values: np.ndarray) -> np.ndarray:
    """Ascending real part, ties broken by ascending imaginary part."""
    values = np.asarray(values, dtype=complex)
    return values[np.lexsort((values.imag, values.real))]


def eigenvalues(m: FockMatrix) -> SpectrumResult:
    H = m.entries
    try:
        vals, vecs = scipy.linalg.eig(H, check_finite=True)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise ConvergenceFailure(f"dense eigensolver failed at N={m.dim}: {exc}") from exc
    order = np.lexsort((vals.imag, vals.real))
    vals, vecs = vals[order], vecs[:, order]
    resid = np.linalg.norm(H @ vecs - vecs * vals, axis=0) / np.linalg.norm(vecs, axis=0)
    scale = max(np.abs(vals).max(), 1.0)
    return SpectrumResult(
        eigenvalues=vals,
        max_residual=float(resid.max()),
        truncation_dim=m.dim,
        converged_count=int(np.count_nonzero(resid <= RESIDUAL_TOL * scale)),
        residuals=resid,
    )


def conjugate_pairs_ok(values: np.ndarray, tol: float = PAIR_TOL) -> bool:
    """True when every non-real value has its conjugate among ``values``."""
    values = np.asarray(values, dtype=complex)
    for z in values[np.abs(values.imag) > tol]:
        if np.min(np.abs(values - np.conj(z))) > tol * max(1.0, abs(z)):
            return False
    return True


def lowest_levels(values: np.ndarray, k: int) -> np.ndarray:
    """The ``k`` values of smallest ``|Re|``, ordered by (|Re|, Im)."""
    values = np.asarray(values, dtype=complex)
    order = np.lexsort((values.imag, np.abs(values.real)))
    return values[order[:k]]


def convergence_study(
    op: QuadraticOperator,
    dims: Sequence[int] = DEFAULT_DIMS,
    k: int = 5,
    tol: float = 1e-8,
    jobs: int = 1,
) -> TruncationReport:
    """Track the ``k`` lowest-|Re| eigenvalues across increasing truncations.

    A level is stable when its drift between the two largest dimensions is
    below ``tol``.
    """
    dims = [int(d) for d in dims]
    if not dims:
        raise ValueError("dims must not be empty")
    if any(b <= a for a, b in zip(dims, dims[1:])):
        raise ValueError(f"dims must be strictly increasing, got {dims}")
    if k < 1 or dims[0] < k + 2:
        raise ValueError(f"each dim must be >= k + 2 (k={k}, dims={dims})")

    def levels_at(N: int) -> np.ndarray:
        return lowest_levels(eigenvalues(materialize(op, N)).eigenvalues, k)

    if jobs > 1 and len(dims) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            levels = list(pool.map(levels_at, dims))
    else:
        levels = [levels_at(N) for N in dims]

    drift = [np.abs(a - b) for a, b in zip(levels, levels[1:])]
    final = drift[-1] if drift else np.zeros(k)
    return TruncationReport(
        dims_tested=dims,
        k=k,
        tol=tol,
        levels=levels,
        drift=drift,
        stable_levels=int(np.count_nonzero(final < tol)) if drift else 0,
    )
