"""Amplitude damping channel for the two-fermion system.

Each ``|2,m>`` with ``m > -2`` decays to ``|2,m-1>`` with probability ``p`` by
handing one excitation to an environment that starts in its vacuum;
``|2,-2>`` and ``|0,0>`` are untouched.  In the angular-momentum basis this is
the Kraus pair

    K0 = diag(sqrt(1-p), sqrt(1-p), sqrt(1-p), sqrt(1-p), 1, 1)
    K1 = sqrt(p) * (|psi2><psi1| + |psi3><psi2| + |psi4><psi3| + |psi5><psi4|)

``p`` parametrises time, with ``p(t) = 1 - exp(-gamma t)`` in the decay model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BadProbability
from .measures import coherence, concurrence, purity, von_neumann_entropy
from .states import AngMomState, BasisTag, DensityMatrix6, change_basis


@dataclass(frozen=True)
class ADCParams:
    """Either a fixed damping probability ``p`` or a decay rate ``gamma_rate``."""

    p: float | None = None
    gamma_rate: float | None = None

    def __post_init__(self):
        if (self.p is None) == (self.gamma_rate is None):
            raise ValueError("give exactly one of p or gamma_rate")
        if self.p is not None:
            _check_p(self.p)
        elif not self.gamma_rate > 0:
            raise ValueError(f"gamma_rate must be positive, got {self.gamma_rate}")


@dataclass(frozen=True, eq=False)
class KrausPair:
    K0: np.ndarray
    K1: np.ndarray

    def completeness_error(self) -> float:
        s = self.K0.conj().T @ self.K0 + self.K1.conj().T @ self.K1
        return float(np.max(np.abs(s - np.eye(6))))


def _check_p(p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise BadProbability(f"damping probability must lie in [0, 1], got {p}")
    return float(p)


def p_of_t(t: float, params: ADCParams) -> float:
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    if params.p is not None:
        return params.p
    return -math.expm1(-params.gamma_rate * t)


def kraus_pair(p: float) -> KrausPair:
    p = _check_p(p)
    k0 = np.diag([math.sqrt(1.0 - p)] * 4 + [1.0, 1.0])
    k1 = np.zeros((6, 6))
    for n in range(4):
        k1[n + 1, n] = math.sqrt(p)
    return KrausPair(k0, k1)


def adc_evolve_pure(state: AngMomState, p: float) -> DensityMatrix6:
    """``|A><A| + |B><B|`` from the joint system-environment state.

    ``|A>`` is the no-decay branch (environment in vacuum) and ``|B>`` the
    branch where one excitation was emitted.
    """
    p = _check_p(p)
    a = state.alpha
    branch_a = np.array(a)
    branch_a[:4] *= math.sqrt(1.0 - p)
    branch_b = np.zeros(6, dtype=complex)
    branch_b[1:5] = math.sqrt(p) * a[:4]
    m = np.outer(branch_a, branch_a.conj()) + np.outer(branch_b, branch_b.conj())
    return DensityMatrix6(m, BasisTag.ANGMOM)


def adc_evolve(rho: DensityMatrix6, p: float) -> DensityMatrix6:
    """``K0 rho K0^dagger + K1 rho K1^dagger`` in the angular-momentum basis."""
    kp = kraus_pair(p)
    m = change_basis(rho, BasisTag.ANGMOM).m
    out = kp.K0 @ m @ kp.K0.T + kp.K1 @ m @ kp.K1.T
    return DensityMatrix6(out, BasisTag.ANGMOM)


def adc_asymptotic(state: AngMomState) -> DensityMatrix6:
    """The ``p -> 1`` state written out entry by entry.

    Population of ``|2,2>`` is gone, the amplitudes of ``psi1..psi3`` have moved
    down one level (keeping their mutual coherences), ``psi4`` has merged
    incoherently into ``psi5``, and only the ``psi5``/``psi6`` coherence is
    the original one.
    """
    a = state.alpha
    m = np.zeros((6, 6), dtype=complex)
    shifted = a[:4]
    m[1:5, 1:5] = np.outer(shifted, shifted.conj())
    m[4, 4] += abs(a[4]) ** 2
    m[4, 5] = a[4] * np.conj(a[5])
    m[5, 4] = np.conj(m[4, 5])
    m[5, 5] = abs(a[5]) ** 2
    return DensityMatrix6(m, BasisTag.ANGMOM)


def adc_time_series(
    rho0: DensityMatrix6, times: Sequence[float], params: ADCParams
) -> np.ndarray:
    """Rows ``(p, t, Cf, K, SvN, purity)``."""
    rows = []
    for t in times:
        p = p_of_t(float(t), params)
        rho = adc_evolve(rho0, p)
        rows.append(
            (p, float(t), concurrence(rho).value, coherence(rho), von_neumann_entropy(rho), purity(rho))
        )
    return np.array(rows, dtype=float)
