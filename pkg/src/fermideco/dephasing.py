"""Exact dephasing dynamics of the two-fermion system in an ohmic bosonic bath.

In the interaction picture every matrix element in the angular-momentum basis
evolves as ``rho_mn(t) = rho_mn(0) f_mn(t)`` with

    f_mn(t) = exp(-(L_m - L_n)^2 Gamma(t)) exp(-i (L_m^2 - L_n^2) r(t)),

where ``L = (2, 1, 0, -1, -2, 0)`` is the spectrum of the coupling operator
``J_z`` and ``r = Delta - Theta``.  For the spectral density
``J(w) ~ w exp(-w/w_c)`` the bath functions are

    Gamma(t) = (J0/2) int_0^inf exp(-w/w_c) sin^2(w t/2)/w coth(beta w/2) dw
    Delta(t) = int_0^inf exp(-w/w_c) sin(w t)/w dw = arctan(w_c t)
    Theta(t) = t int_0^inf exp(-w/w_c) dw = w_c t

``Gamma`` is evaluated by adaptive quadrature; ``Delta`` and ``Theta`` in
closed form.  Times and ``beta`` are in the same units as ``1/omega_c``.
"""

from __future__ import annotations

import enum
import functools
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy import integrate

from ._threads import default_workers
from .errors import QuadratureFailure, ZeroInitialEntanglement
from .measures import coherence, concurrence, concurrence_pure, purity, von_neumann_entropy
from .quadrature import gauss_kronrod
from .states import AngMomState, BasisTag, DensityMatrix6, change_basis

L_SPECTRUM = np.array([2.0, 1.0, 0.0, -1.0, -2.0, 0.0])
L_SPECTRUM.setflags(write=False)

_DL = L_SPECTRUM[:, None] - L_SPECTRUM[None, :]
_DECAY = _DL**2
_PHASE = L_SPECTRUM[:, None] ** 2 - L_SPECTRUM[None, :] ** 2

PERSISTENCE_MIN_CF0 = 1e-12

# Above this reduced time the integrand has too many periods for direct
# panelling; the high-frequency split is used instead.
_SPLIT_TAU = 2000.0
_NEAR_PERIODS = 64
_FOURIER_CUTOFF = 80.0


class ZeroT(enum.Enum):
    """Zero temperature (beta = infinity), where coth(beta w/2) == 1."""

    ZERO_T = "zero-temperature"

    def __repr__(self) -> str:
        return "ZERO_T"


ZERO_T = ZeroT.ZERO_T


@dataclass(frozen=True)
class BathParams:
    """Ohmic bath configuration.

    ``strict_spectral_density`` applies the ``4 J0`` prefactor of
    ``J(w) = 4 J0 w exp(-w/w_c)`` uniformly to all three bath functions
    (``Gamma`` x16, ``Delta`` and ``Theta`` x ``4 J0``).  Off by default, in
    which case the integrals above are used exactly as written.
    """

    beta: float | ZeroT
    J0: float = 8.0
    omega_c: float = 1.0
    quad_rel_tol: float = 1e-10
    strict_spectral_density: bool = False

    def __post_init__(self):
        if not self.J0 > 0:
            raise ValueError(f"J0 must be positive, got {self.J0}")
        if not self.omega_c > 0:
            raise ValueError(f"omega_c must be positive, got {self.omega_c}")
        if self.beta is not ZERO_T:
            if isinstance(self.beta, bool) or not float(self.beta) > 0:
                raise ValueError(f"beta must be positive or ZERO_T, got {self.beta!r}")
            object.__setattr__(self, "beta", float(self.beta))
        if not 0 < self.quad_rel_tol < 1:
            raise ValueError("quad_rel_tol must lie in (0, 1)")

    @property
    def zero_temperature(self) -> bool:
        return self.beta is ZERO_T


@dataclass(frozen=True)
class BathFunctions:
    gamma: float
    delta: float
    theta: float

    @property
    def r(self) -> float:
        return self.delta - self.theta


# -- Gamma(t) ---------------------------------------------------------------------


def _integrand(tau: float, b: float | None):
    """``exp(-x) sin^2(x tau/2)/x coth(b x/2)`` in the reduced variable x = w/w_c."""

    def f(x):
        s = np.sin(0.5 * tau * x)
        val = np.exp(-x) * s * s / x
        if b is not None:
            val = val / np.tanh(0.5 * b * x)
        # x -> 0 limit: tau^2/(2b) (finite T) or 0 (T = 0)
        return np.where(x > 0, val, 0.0 if b is None else tau * tau / (2.0 * b))

    return f


def _non_oscillatory(b: float | None):
    def f(x):
        val = np.exp(-x) / x
        return val if b is None else val / np.tanh(0.5 * b * x)

    return f


def _upper_limit(tau: float) -> float:
    return 50.0 + 10.0 * max(1.0, tau)


def _reduced_gamma(tau: float, b: float | None, rel_tol: float) -> float:
    """``int_0^X exp(-x) sin^2(x tau/2)/x coth(b x/2) dx``."""
    X = _upper_limit(tau)
    f = _integrand(tau, b)
    # Small-tau lower bound of the result (T = 0 part is (1/4) ln(1 + tau^2)),
    # used only to scale absolute floors.
    scale = 0.25 * math.log1p(tau * tau)
    if tau <= _SPLIT_TAU:
        period = 2.0 * math.pi / max(tau, 1e-300)
        h = min(1.0, 0.5 * period)
        near = min(X, 60.0)
        edges = np.linspace(0.0, near, int(math.ceil(near / h)) + 1)
        if X > near:
            tail = np.linspace(near, X, int(math.ceil((X - near) / 10.0)) + 1)
            edges = np.concatenate([edges, tail[1:]])
        value, _ = gauss_kronrod(f, edges, rel_tol=rel_tol, abs_tol=1e-3 * rel_tol * scale)
        return value

    # High frequency: 2 sin^2(u/2) = 1 - cos(u).  Resolve the first few periods
    # directly, then split the remainder into a smooth part and a Fourier part.
    a = 2.0 * math.pi * _NEAR_PERIODS / tau
    near_edges = np.linspace(0.0, a, 2 * _NEAR_PERIODS + 1)
    part1, _ = gauss_kronrod(f, near_edges, rel_tol=rel_tol, abs_tol=1e-3 * rel_tol * scale)
    g = _non_oscillatory(b)
    part2, _ = gauss_kronrod(
        g, np.geomspace(a, X, 400), rel_tol=rel_tol, abs_tol=1e-3 * rel_tol * scale
    )
    # exp(-x)/x < 1e-36 beyond the cutoff; the cosine-weighted tail is dropped there.
    upper = min(X, _FOURIER_CUTOFF)
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            part3, _ = integrate.quad(
                lambda x: float(g(np.asarray(x))),
                a,
                upper,
                weight="cos",
                wvar=tau,
                epsrel=rel_tol,
                epsabs=1e-3 * rel_tol * abs(part1 + 0.5 * part2),
                limit=2000,
                maxp1=200,
            )
        except integrate.IntegrationWarning as exc:
            raise QuadratureFailure(f"Fourier tail did not converge at tau={tau:g}: {exc}") from exc
    return part1 + 0.5 * part2 - 0.5 * part3


def gamma_of_t(t: float, params: BathParams) -> float:
    """Decoherence function ``Gamma(t) >= 0``.

    Raises:
        QuadratureFailure: if ``params.quad_rel_tol`` cannot be reached.
    """
    return bath_functions(t, params).gamma


def _gamma(t: float, params: BathParams) -> float:
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    if t == 0:
        return 0.0
    tau = params.omega_c * t
    b = None if params.zero_temperature else params.beta * params.omega_c
    prefactor = 8.0 * params.J0 if params.strict_spectral_density else 0.5 * params.J0
    return prefactor * _reduced_gamma(tau, b, params.quad_rel_tol)


def delta_of_t(t: float, params: BathParams) -> float:
    """``Delta(t) = arctan(omega_c t)`` (exact value of the integral)."""
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    value = math.atan(params.omega_c * t)
    return 4.0 * params.J0 * value if params.strict_spectral_density else value


def theta_of_t(t: float, params: BathParams) -> float:
    """``Theta(t) = omega_c t``."""
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    value = params.omega_c * t
    return 4.0 * params.J0 * value if params.strict_spectral_density else value


@functools.lru_cache(maxsize=8192)
def _cached_bath(t: float, params: BathParams) -> BathFunctions:
    return BathFunctions(_gamma(t, params), delta_of_t(t, params), theta_of_t(t, params))


def bath_functions(t: float, params: BathParams) -> BathFunctions:
    """``Gamma``, ``Delta`` and ``Theta`` at time ``t``, memoised per ``(t, params)``."""
    return _cached_bath(float(t), params)


# -- dynamics ---------------------------------------------------------------------


def dephasing_factor(m: int, n: int, t: float, params: BathParams) -> complex:
    """``f_mn(t)`` for 1-based basis indices ``m, n``."""
    if not (1 <= m <= 6 and 1 <= n <= 6):
        raise IndexError("basis indices run from 1 to 6")
    i, j = m - 1, n - 1
    if L_SPECTRUM[i] == L_SPECTRUM[j]:
        return 1.0 + 0.0j
    bf = bath_functions(t, params)
    return complex(np.exp(-_DECAY[i, j] * bf.gamma - 1j * _PHASE[i, j] * bf.r))


def factor_matrix(t: float, params: BathParams) -> np.ndarray:
    """All 36 factors ``f_mn(t)``; one bath evaluation per call."""
    bf = bath_functions(t, params)
    f = np.exp(-_DECAY * bf.gamma - 1j * _PHASE * bf.r)
    # Degenerate L pairs are exactly 1 regardless of Gamma.
    f[_DL == 0] = 1.0
    return f


def evolve(rho0: DensityMatrix6, t: float, params: BathParams) -> DensityMatrix6:
    """State at time ``t``; the result is in the angular-momentum basis."""
    m0 = change_basis(rho0, BasisTag.ANGMOM).m
    return DensityMatrix6(m0 * factor_matrix(t, params), BasisTag.ANGMOM)


def evolve_series(
    rho0: DensityMatrix6,
    times: Iterable[float],
    params: BathParams,
    workers: int | None = None,
) -> list[DensityMatrix6]:
    """Evolve ``rho0`` to every time in ``times``, preserving order."""
    times = [float(t) for t in times]
    workers = default_workers() if workers is None else workers
    if workers <= 1:
        return [evolve(rho0, t, params) for t in times]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda t: evolve(rho0, t, params), times))


def time_grid(
    t_min: float = 0.0, t_max: float = 30.0, count: int = 300, spacing: str = "linear"
) -> np.ndarray:
    """Evaluation times; ``spacing`` is ``"linear"`` or ``"log"`` (needs ``t_min > 0``)."""
    if count < 1:
        raise ValueError("count must be at least 1")
    if t_min < 0 or t_max < t_min:
        raise ValueError("need 0 <= t_min <= t_max")
    if spacing == "linear":
        return np.linspace(t_min, t_max, count)
    if spacing == "log":
        if t_min <= 0:
            raise ValueError("log spacing needs t_min > 0")
        return np.geomspace(t_min, t_max, count)
    raise ValueError(f"unknown spacing {spacing!r}")


def observables(rho: DensityMatrix6) -> tuple[float, float, float, float]:
    """``(concurrence, coherence, von Neumann entropy, purity)`` of ``rho``."""
    return (
        concurrence(rho).value,
        coherence(rho),
        von_neumann_entropy(rho),
        purity(rho),
    )


def time_series(
    rho0: DensityMatrix6,
    times: Sequence[float],
    params: BathParams,
    workers: int | None = None,
) -> np.ndarray:
    """Rows ``(t, Cf, K, SvN, purity)`` for each time."""
    states = evolve_series(rho0, times, params, workers)
    return np.array([(t, *observables(r)) for t, r in zip(times, states)], dtype=float)


# -- long-time limit --------------------------------------------------------------


def asymptotic_state(rho0: DensityMatrix6) -> DensityMatrix6:
    """Limit ``Gamma -> inf``: only populations and the (3,6) coherence survive."""
    m0 = change_basis(rho0, BasisTag.ANGMOM).m
    keep = _DL == 0
    return DensityMatrix6(np.where(keep, m0, 0.0), BasisTag.ANGMOM)


def asymptotic_coherence(state: AngMomState) -> float:
    """Long-time coherence ``| |a3|^2 - |a6|^2 + 2i Im(a3 a6*) |``."""
    a3, a6 = state.alpha[2], state.alpha[5]
    return float(abs(abs(a3) ** 2 - abs(a6) ** 2 + 2j * (a3 * np.conj(a6)).imag))


def asymptotic_concurrence(state: AngMomState) -> float:
    """``max(0, K_inf - 2(|a1 a5| + |a2 a4|))``."""
    a = np.abs(state.alpha)
    return max(0.0, asymptotic_coherence(state) - 2.0 * (a[0] * a[4] + a[1] * a[3]))


def persistence(state: AngMomState) -> float:
    """Ratio of asymptotic to initial concurrence.

    Raises:
        ZeroInitialEntanglement: if the initial concurrence is <= 1e-12.
    """
    cf0 = concurrence_pure(state)
    if cf0 <= PERSISTENCE_MIN_CF0:
        raise ZeroInitialEntanglement(f"initial concurrence {cf0:.3g} is zero")
    return asymptotic_concurrence(state) / cf0
