"""Fermionic concurrence, l1 coherence, entropy and purity."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonPhysical
from .states import (
    PSD_TOL,
    AngMomState,
    BasisTag,
    DensityMatrix6,
    change_basis,
)

# Real involution defining the flip operation rho -> M rho* M in the BTILDE basis.
FLIP_MATRIX = np.array(
    [
        [0, 0, 0, 0, 1, 0],
        [0, 0, 0, -1, 0, 0],
        [0, 0, 1, 0, 0, 0],
        [0, -1, 0, 0, 0, 0],
        [1, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 1],
    ],
    dtype=float,
)
FLIP_MATRIX.setflags(write=False)

IMAG_TOL = 1e-9
_OFF_DIAGONAL = ~np.eye(6, dtype=bool)
ENTROPY_CUTOFF = 1e-15
_RANK_CUTOFF = 16 * np.finfo(float).eps


@dataclass(frozen=True)
class ConcurrenceBreakdown:
    """Square-rooted spectrum of ``rho rho~`` (descending) and the concurrence."""

    lambdas: tuple[float, ...]
    value: float

    def __float__(self) -> float:
        return self.value


def concurrence_pure(state: AngMomState) -> float:
    """Closed form ``|a3^2 - a6^2 + 2(a1 a5 - a2 a4)|`` for a pure state."""
    a = state.alpha
    return float(abs(a[2] ** 2 - a[5] ** 2 + 2.0 * (a[0] * a[4] - a[1] * a[3])))


def flipped(rho: DensityMatrix6) -> DensityMatrix6:
    """``rho~ = M rho* M`` written in the BTILDE basis."""
    m = change_basis(rho, BasisTag.BTILDE).m
    return DensityMatrix6(FLIP_MATRIX @ m.conj() @ FLIP_MATRIX, BasisTag.BTILDE)


def _check_flip_spectrum(m: np.ndarray, m_tilde: np.ndarray) -> None:
    ev = np.linalg.eigvals(m @ m_tilde)
    if np.any(np.abs(ev.imag) > IMAG_TOL) or np.any(ev.real < -PSD_TOL):
        raise NonPhysical(
            "rho rho~ has eigenvalues off the nonnegative real axis: "
            + ", ".join(f"{z:.3g}" for z in ev)
        )


def concurrence(rho: DensityMatrix6) -> ConcurrenceBreakdown:
    """Fermionic concurrence ``max(0, l1 - l2 - ... - l6)`` of a density matrix.

    The ``l_i`` are the square roots of the eigenvalues of ``rho rho~``.  They
    are obtained as singular values of ``tau = W^T M W`` where ``rho = W W^dagger``;
    ``W^dagger M W*`` is ``conj(tau)`` and ``tau`` is symmetric, so
    ``eig(rho rho~) = eig(tau^dagger tau)``.  Taking singular values avoids the
    ~sqrt(eps) error a direct square root of tiny noisy eigenvalues would give.
    The plain eigenvalues are still computed to reject non-physical input.

    Raises:
        NonPhysical: if ``rho`` has an eigenvalue below -1e-10, or ``rho rho~``
            has an eigenvalue with real part < -1e-10 or ``|imag| > 1e-9``.
    """
    m = change_basis(rho, BasisTag.BTILDE).m
    m = 0.5 * (m + m.conj().T)
    m_tilde = FLIP_MATRIX @ m.conj() @ FLIP_MATRIX
    _check_flip_spectrum(m, m_tilde)

    p, vecs = np.linalg.eigh(m)
    if p[0] < -PSD_TOL:
        raise NonPhysical(f"density matrix has negative eigenvalue {p[0]:.3g}")
    # Eigenvalues at round-off level are noise; their square roots (~1e-8)
    # would otherwise leak into the lambdas.
    keep = p > _RANK_CUTOFF * max(p[-1], 0.0)
    w = vecs[:, keep] * np.sqrt(p[keep])
    tau = w.T @ FLIP_MATRIX @ w
    lam = np.zeros(6)
    lam[: tau.shape[0]] = np.linalg.svd(tau, compute_uv=False)
    lam = np.sort(lam)[::-1]
    value = max(0.0, float(lam[0] - lam[1:].sum()))
    return ConcurrenceBreakdown(tuple(float(x) for x in lam), value)


def coherence(rho: DensityMatrix6) -> float:
    """l1 norm of the off-diagonal part of ``rho`` in the Slater basis."""
    m = change_basis(rho, BasisTag.SLATER).m
    return float(np.abs(m[_OFF_DIAGONAL]).sum())


def von_neumann_entropy(rho: DensityMatrix6) -> float:
    """``-Tr(rho ln rho)`` in nats."""
    p = np.linalg.eigvalsh(0.5 * (rho.m + rho.m.conj().T))
    if p[0] < -PSD_TOL:
        raise NonPhysical(f"density matrix has negative eigenvalue {p[0]:.3g}")
    p = p[p > ENTROPY_CUTOFF]
    return float(-(p * np.log(p)).sum()) + 0.0


def purity(rho: DensityMatrix6) -> float:
    m = rho.m
    # Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
    return float(np.einsum("ij,ji->", m, m).real)
