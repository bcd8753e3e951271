"""Rayleigh-Schrodinger series for ``H = w (a^dagger a + 1/2) + V``.

``V = alpha a^2 + beta (a^dagger)^2`` only couples levels two apart, so the
correction of order ``j`` for level ``n`` involves states ``|m>`` with
``|m - n| <= 2 j`` of the same parity. The recursion runs on that finite
window and is exact up to rounding.

Intermediate normalization (``<n|psi_n> = 1``) is used, and the bra side is
the plain Fock bra, so ``V[n, m] != V[m, n]`` when ``alpha != beta``.
The recursion includes every renormalization term; at fourth order this
is ``-E2 * sum_m V[n,m] V[m,n] / (w (n - m))^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientOrders, InvalidOrder, ZeroUnperturbedFrequency
from .model import SwansonParams

MAX_ORDER = 40
MIN_DIAGNOSTIC_ORDER = 6


@dataclass(frozen=True)
class PerturbSeries:
    level: int
    orders: np.ndarray
    partial_sums: np.ndarray
    converged: bool

    @property
    def max_order(self) -> int:
        return len(self.orders) - 1


@dataclass(frozen=True)
class ConvergenceDiagnostic:
    ratio_flag: bool
    exact_radius_ok: bool
    paper_condition_ok: bool
    ratios: tuple[float, ...] = ()


def matrix_element(params: SwansonParams, m: int, n: int) -> float:
    """``<m| alpha a^2 + beta (a^dagger)^2 |n>``."""
    if m < 0 or n < 0:
        raise ValueError("Fock indices must be non-negative")
    if m == n - 2:
        return params.alpha * math.sqrt(n * (n - 1))
    if m == n + 2:
        return params.beta * math.sqrt((n + 1) * (n + 2))
    return 0.0


def _check_w(params: SwansonParams) -> None:
    if params.w == 0:
        raise ZeroUnperturbedFrequency("unperturbed frequency w must be nonzero")


def rs_corrections(params: SwansonParams, n: int, K: int) -> PerturbSeries:
    """Energy corrections ``E^(0) .. E^(K)`` for level ``n``.

    With ``c^(0) = e_n``::

        E^(j)   = sum_q V[n, q] c_q^(j-1)
        c_m^(j) = (sum_q V[m, q] c_q^(j-1) - sum_{l=1}^{j-1} E^(l) c_m^(j-l)) / (w (n - m))

    for ``m != n`` and ``c_n^(j) = 0``.
    """
    if n < 0:
        raise ValueError("level index must be non-negative")
    if K < 0 or K > MAX_ORDER:
        raise InvalidOrder(f"order must lie in [0, {MAX_ORDER}], got {K}")
    _check_w(params)

    w = params.w
    lo = n % 2 if n - 2 * K < 0 else n - 2 * K
    states = np.arange(lo, n + 2 * K + 1, 2)
    pos = int(np.searchsorted(states, n))
    size = len(states)

    # V restricted to the parity window; off-diagonal bands only
    V = np.zeros((size, size))
    for i, m in enumerate(states):
        if i > 0:
            V[i - 1, i] = params.alpha * math.sqrt(m * (m - 1))
            V[i, i - 1] = params.beta * math.sqrt(m * (m - 1))
    denom = w * (n - states).astype(float)
    denom[pos] = 1.0

    energies = np.zeros(K + 1)
    energies[0] = w * (n + 0.5)
    coeffs = [np.zeros(size)]
    coeffs[0][pos] = 1.0
    for j in range(1, K + 1):
        Vc = V @ coeffs[j - 1]
        energies[j] = Vc[pos]
        rhs = Vc.copy()
        for l in range(1, j):
            rhs -= energies[l] * coeffs[j - l]
        c = rhs / denom
        c[pos] = 0.0
        coeffs.append(c)

    partial = np.cumsum(energies)
    series = PerturbSeries(level=n, orders=energies, partial_sums=partial, converged=False)
    if K >= MIN_DIAGNOSTIC_ORDER:
        flag = convergence_diagnostic(series, params).ratio_flag
        series = PerturbSeries(level=n, orders=energies, partial_sums=partial, converged=flag)
    return series


def closed_form_order2(params: SwansonParams, n: int) -> float:
    _check_w(params)
    return -(2 * n + 1) * params.alpha * params.beta / params.w


def closed_form_order4(params: SwansonParams, n: int) -> float:
    _check_w(params)
    ab = params.alpha * params.beta
    return -(2 * n + 1) * ab * ab / params.w**3


def _extrapolated_ratio(ratios) -> float:
    # ratios[j] compares term j+2 with term j+1 (terms counted from one)
    if not ratios:
        return 0.0
    if len(ratios) == 1:
        return ratios[0]
    k1, k2 = len(ratios), len(ratios) + 1
    return (k2 * ratios[-1] - k1 * ratios[-2]) / (k2 - k1)


def convergence_diagnostic(series: PerturbSeries, params: SwansonParams) -> ConvergenceDiagnostic:
    """Report three convergence criteria side by side.

    ``ratio_flag``
        Domb-Sykes estimate: the ratios ``r_k = |E^(2k) / E^(2k-2)|`` are
        extrapolated linearly in ``1/k`` to ``k -> infinity`` from the last
        two, giving the inverse radius in the coupling. The flag is set when
        that limit is below one. Raw ratios approach their limit only as
        ``1/k`` and would miss divergence just past the radius. A series
        whose terms vanish beyond some order counts as convergent.
    ``exact_radius_ok``
        ``4 |alpha beta| < w^2``, the branch point of ``sqrt(w^2 - 4 alpha beta)``.
    ``paper_condition_ok``
        ``|alpha / w| < 1`` and ``|beta / w| < 1``.

    The criteria can disagree (e.g. ``w = 2, alpha = beta = 1.5``); none
    overrides another.
    """
    if series.max_order < MIN_DIAGNOSTIC_ORDER:
        raise InsufficientOrders(
            f"need at least order {MIN_DIAGNOSTIC_ORDER}, series has {series.max_order}"
        )
    _check_w(params)
    terms = np.abs(series.orders[2::2])
    scale = max(abs(series.orders[0]), 1.0)
    nonzero = terms[terms > 1e-300 * scale]
    ratios = tuple(float(b / a) for a, b in zip(nonzero, nonzero[1:]))
    ratio_flag = _extrapolated_ratio(ratios) < 1
    w, a, b = params.w, params.alpha, params.beta
    return ConvergenceDiagnostic(
        ratio_flag=ratio_flag,
        exact_radius_ok=4 * abs(a * b) < w * w,
        paper_condition_ok=abs(a / w) < 1 and abs(b / w) < 1,
        ratios=ratios,
    )
