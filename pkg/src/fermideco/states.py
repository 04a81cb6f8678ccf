"""Two-fermion (d=4) pure states, density matrices and basis changes.

Two orthonormal bases of the six-dimensional antisymmetric space are used:

* the angular-momentum basis ``|2,2>, |2,1>, |2,0>, |2,-1>, |2,-2>, |0,0>``
  (amplitudes ``alpha[0..5]``), in which the dephasing channel is diagonal;
* the ordered Slater-determinant basis ``|12>, |13>, |14>, |24>, |34>, |23>``
  (coefficients ``s[0..5]``), in which coherence is measured.

Slater coefficients are kept unit-norm.  They are twice the antisymmetric
``w_ij`` coefficients of the expansion ``sum_ij w_ij |ij>`` (which is
normalised as ``4 sum |w_ij|^2 = 1``), i.e. ``s_ij = 2 w_ij``.

A third basis, ``BTILDE``, equals the angular-momentum basis with the last
vector replaced by ``i|0,0>``; the concurrence flip matrix is real there.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .errors import BadLength, MalformedStateFile, NonPhysical, ZeroNorm

DIM = 6

ANGMOM_LABELS = ("|2,2>", "|2,1>", "|2,0>", "|2,-1>", "|2,-2>", "|0,0>")
SLATER_LABELS = ("12", "13", "14", "24", "34", "23")

_R = 1.0 / np.sqrt(2.0)

# Maps angular-momentum amplitudes to Slater coefficients; real, symmetric and
# its own inverse.
U = np.array(
    [
        [1, 0, 0, 0, 0, 0],
        [0, 1, 0, 0, 0, 0],
        [0, 0, _R, 0, 0, _R],
        [0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 1, 0],
        [0, 0, _R, 0, 0, -_R],
    ]
)
U.setflags(write=False)

# Amplitude phase change angular-momentum -> BTILDE.
_V_BTILDE = np.diag([1, 1, 1, 1, 1, -1j])
_V_BTILDE.setflags(write=False)

RENORM_THRESHOLD = 1e-6
ZERO_NORM = 1e-12

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10


class BasisTag(enum.Enum):
    ANGMOM = "angmom"
    SLATER = "slater"
    BTILDE = "btilde"


class SubspaceLabel(enum.Enum):
    DFS = "DFS"
    ED24 = "ED24"
    ED15 = "ED15"
    FAMILY_I = "FamilyI"
    GENERIC = "Generic"

    def __str__(self) -> str:
        return self.value


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


def _as_vector(values: Sequence[complex]) -> np.ndarray:
    arr = np.asarray(values, dtype=complex).reshape(-1)
    if arr.size != DIM:
        raise BadLength(f"expected {DIM} amplitudes, got {arr.size}")
    return arr


@dataclass(frozen=True, eq=False)
class AngMomState:
    """Pure state as amplitudes on the angular-momentum basis."""

    alpha: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "alpha", _frozen(_as_vector(self.alpha)))

    def __getitem__(self, n: int) -> complex:
        """1-based access, ``state[3]`` is the ``|2,0>`` amplitude."""
        return self.alpha[n - 1]

    def __repr__(self) -> str:
        return f"AngMomState({np.array2string(self.alpha, precision=6)})"


@dataclass(frozen=True, eq=False)
class SlaterState:
    """Pure state as coefficients ``(s12, s13, s14, s24, s34, s23)``."""

    s: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "s", _frozen(_as_vector(self.s)))

    def __repr__(self) -> str:
        return f"SlaterState({np.array2string(self.s, precision=6)})"


@dataclass(frozen=True, eq=False)
class DensityMatrix6:
    """6x6 density matrix together with the basis it is written in."""

    m: np.ndarray
    basis: BasisTag = BasisTag.ANGMOM

    def __post_init__(self):
        m = np.asarray(self.m, dtype=complex)
        if m.shape != (DIM, DIM):
            raise NonPhysical(f"density matrix must be {DIM}x{DIM}, got {m.shape}")
        object.__setattr__(self, "m", _frozen(m))
        object.__setattr__(self, "basis", BasisTag(self.basis))

    def violations(self) -> dict[str, float]:
        """Hermiticity deviation, trace deviation and minimum eigenvalue."""
        m = self.m
        herm = float(np.max(np.abs(m - m.conj().T)))
        trace = float(abs(np.trace(m) - 1.0))
        min_eig = float(np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0])
        return {"hermiticity": herm, "trace": trace, "min_eigenvalue": min_eig}

    def check(self) -> "DensityMatrix6":
        v = self.violations()
        if v["hermiticity"] > HERMITIAN_TOL:
            raise NonPhysical(f"not Hermitian (deviation {v['hermiticity']:.3g})")
        if v["trace"] > TRACE_TOL:
            raise NonPhysical(f"trace differs from 1 by {v['trace']:.3g}")
        if v["min_eigenvalue"] < -PSD_TOL:
            raise NonPhysical(f"negative eigenvalue {v['min_eigenvalue']:.3g}")
        return self

    def __array__(self, dtype=None, copy=None):
        return np.array(self.m, dtype=dtype)


def norm_deviation(alpha: Sequence[complex]) -> float:
    """``|sum |a_n|^2 - 1|`` of a raw amplitude vector."""
    arr = _as_vector(alpha)
    return abs(float(np.vdot(arr, arr).real) - 1.0)


def make_state(alpha: Sequence[complex]) -> AngMomState:
    """Build a normalised state from six (possibly unnormalised) amplitudes.

    Inputs within ``RENORM_THRESHOLD`` of unit norm are the common case of
    hand-typed fractions such as ``sqrt(1/10)``; anything further off is still
    renormalised, and callers that care can check :func:`norm_deviation`.

    Raises:
        BadLength: if ``alpha`` does not have six entries.
        ZeroNorm: if ``sum |alpha_n|^2 < 1e-12``.
    """
    arr = _as_vector(alpha)
    n2 = float(np.vdot(arr, arr).real)
    if n2 < ZERO_NORM:
        raise ZeroNorm("amplitude vector has zero norm")
    return AngMomState(arr / np.sqrt(n2))


def to_slater(state: AngMomState) -> SlaterState:
    return SlaterState(U @ state.alpha)


def from_slater(s: SlaterState) -> AngMomState:
    return AngMomState(U @ s.s)


def density_from_pure(state: AngMomState) -> DensityMatrix6:
    a = state.alpha
    return DensityMatrix6(np.outer(a, a.conj()), BasisTag.ANGMOM)


def _to_angmom(rho: DensityMatrix6) -> np.ndarray:
    m = rho.m
    if rho.basis is BasisTag.SLATER:
        return U @ m @ U
    if rho.basis is BasisTag.BTILDE:
        v = _V_BTILDE
        return v.conj().T @ m @ v
    return np.array(m)


def change_basis(rho: DensityMatrix6, target: BasisTag | str) -> DensityMatrix6:
    """Rewrite ``rho`` in another basis, ``rho' = V rho V^dagger``."""
    target = BasisTag(target)
    if rho.basis is target:
        return rho
    m = _to_angmom(rho)
    if target is BasisTag.SLATER:
        m = U @ m @ U
    elif target is BasisTag.BTILDE:
        v = _V_BTILDE
        m = v @ m @ v.conj().T
    return DensityMatrix6(m, target)


def classify_subspace(state: AngMomState, tol: float = 1e-12) -> SubspaceLabel:
    """Classify a pure state by the dephasing-relevant subspace it lies in.

    An amplitude counts as present when ``|alpha_n| > tol``.  Precedence is
    DFS > ED24 > ED15 > FamilyI > Generic.  FamilyI means both products
    ``alpha1*alpha5`` and ``alpha2*alpha4`` vanish (within ``tol``) while the
    long-time coherence ``| |a3|^2 - |a6|^2 + 2i Im(a3 a6*) |`` exceeds ``tol``.
    """
    mag = np.abs(state.alpha)
    present = {n + 1 for n in range(DIM) if mag[n] > tol}
    if present <= {3, 6}:
        return SubspaceLabel.DFS
    if present <= {2, 4}:
        return SubspaceLabel.ED24
    if present <= {1, 5}:
        return SubspaceLabel.ED15
    a = state.alpha
    k_inf = abs(abs(a[2]) ** 2 - abs(a[5]) ** 2 + 2j * (a[2] * np.conj(a[5])).imag)
    if mag[0] * mag[4] <= tol and mag[1] * mag[3] <= tol and k_inf > tol:
        return SubspaceLabel.FAMILY_I
    return SubspaceLabel.GENERIC


# -- state files ---------------------------------------------------------------


def parse_state_document(doc: Any) -> tuple[AngMomState, float]:
    """Parse ``{"basis": "angmom"|"slater", "amplitudes": [[re, im] x 6]}``.

    Returns the normalised state and the norm deviation of the raw amplitudes.
    """
    if not isinstance(doc, dict):
        raise MalformedStateFile("state document must be a JSON object")
    basis = doc.get("basis")
    if basis not in ("angmom", "slater"):
        raise MalformedStateFile(f"basis must be 'angmom' or 'slater', got {basis!r}")
    amps = doc.get("amplitudes")
    if not isinstance(amps, list) or len(amps) != DIM:
        raise MalformedStateFile(f"'amplitudes' must be a list of {DIM} [re, im] pairs")
    values = []
    for pair in amps:
        if (
            not isinstance(pair, (list, tuple))
            or len(pair) != 2
            or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in pair)
        ):
            raise MalformedStateFile(f"bad amplitude entry {pair!r}")
        values.append(complex(pair[0], pair[1]))
    if not np.all(np.isfinite(values)):
        raise MalformedStateFile("amplitudes must be finite")
    try:
        state = make_state(values)
    except ZeroNorm as exc:
        raise MalformedStateFile(str(exc)) from exc
    if basis == "slater":
        # U is unitary, so normalising before the transform is equivalent.
        state = from_slater(SlaterState(state.alpha))
    return state, norm_deviation(values)


def state_from_dict(doc: Any) -> AngMomState:
    return parse_state_document(doc)[0]


def read_state_file(path: str | Path) -> tuple[AngMomState, float]:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, ValueError) as exc:
        raise MalformedStateFile(f"cannot read state file {path}: {exc}") from exc
    return parse_state_document(doc)


def load_state(path: str | Path) -> AngMomState:
    return read_state_file(path)[0]


def state_to_json(state: AngMomState, basis: BasisTag | str = BasisTag.ANGMOM) -> str:
    """Serialise with 17 significant digits per component."""
    basis = BasisTag(basis)
    if basis is BasisTag.SLATER:
        vec = to_slater(state).s
    elif basis is BasisTag.ANGMOM:
        vec = state.alpha
    else:
        raise ValueError("state files are written in the angmom or slater basis only")
    pairs = ", ".join(f"[{c.real:.17g}, {c.imag:.17g}]" for c in vec)
    return f'{{"basis": "{basis.value}", "amplitudes": [{pairs}]}}\n'


def save_state(state: AngMomState, path: str | Path, basis: BasisTag | str = BasisTag.ANGMOM) -> None:
    Path(path).write_text(state_to_json(state, basis))
