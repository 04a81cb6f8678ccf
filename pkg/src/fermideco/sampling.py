"""Monte-Carlo atlas of real, nonnegative initial states.

Every state is mapped to ``(x, y, z) = (a2 a4, a1 a5, |a3^2 - a6^2|)``, a point of
the tetrahedron ``2(x + y) + z <= 1``, where the long-time concurrence is
``max(0, z - 2(x + y))``.

Samples are drawn in fixed-size chunks.  Chunk ``k`` uses its own Philox
stream keyed by ``(seed, k)``, so the output does not depend on how many
workers process the chunks.
"""

from __future__ import annotations

import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from ._threads import default_workers
from .states import AngMomState

CHUNK_SIZE = 4096
P_MIN_CF0 = 1e-12
ATLAS_HEADER = ("x", "y", "z", "cf0", "cf_inf", "P")


@dataclass(frozen=True)
class SamplerConfig:
    n_samples: int = 100_000
    seed: int = 0
    enforce_order: bool = True

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError("n_samples must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class PersistenceRecord:
    x: float
    y: float
    z: float
    cf0: float
    cf_inf: float
    p_ratio: float | None


def chunk_generator(seed: int, chunk_index: int) -> np.random.Generator:
    """Independent counter-based stream for one chunk of the sample index space."""
    ss = np.random.SeedSequence(seed, spawn_key=(chunk_index,))
    return np.random.Generator(np.random.Philox(ss))


def _draw(rng: np.random.Generator, size: int, enforce_order: bool) -> np.ndarray:
    g = np.abs(rng.standard_normal((size, 6)))
    alpha = g / np.linalg.norm(g, axis=1, keepdims=True)
    if enforce_order:
        swap = alpha[:, 2] < alpha[:, 5]
        alpha[swap, 2], alpha[swap, 5] = alpha[swap, 5], alpha[swap, 2]
    return alpha


def random_real_state(rng: np.random.Generator, enforce_order: bool = True) -> AngMomState:
    """Uniform point on the unit sphere restricted to the nonnegative orthant.

    With ``enforce_order`` the third and sixth amplitudes are swapped when
    needed so that ``a3 >= a6``.
    """
    return AngMomState(_draw(rng, 1, enforce_order)[0])


def xyz_map(state: AngMomState) -> tuple[float, float, float]:
    a = state.alpha.real
    return (
        float(abs(a[1] * a[3])),
        float(abs(a[0] * a[4])),
        float(abs(a[2] ** 2 - a[5] ** 2)),
    )


def asymptotic_concurrence_xyz(x: float, y: float, z: float) -> float:
    return max(0.0, z - 2.0 * (x + y))


def _chunk_bounds(n: int) -> Iterator[tuple[int, int]]:
    for k in range(math.ceil(n / CHUNK_SIZE)):
        yield k, min(CHUNK_SIZE, n - k * CHUNK_SIZE)


def sample_amplitudes(config: SamplerConfig, workers: int | None = None) -> np.ndarray:
    """All sampled amplitude vectors, shape ``(n_samples, 6)``, in index order."""
    if workers is None:
        workers = default_workers()
    jobs = list(_chunk_bounds(config.n_samples))

    def work(job):
        k, size = job
        return _draw(chunk_generator(config.seed, k), size, config.enforce_order)

    if workers <= 1 or len(jobs) == 1:
        parts = [work(j) for j in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(work, jobs))
    return np.concatenate(parts, axis=0)


def atlas_arrays(alpha: np.ndarray) -> dict[str, np.ndarray]:
    """Vectorised ``x, y, z, cf0, cf_inf, P`` (``P`` is NaN where ``cf0 <= 1e-12``)."""
    a1, a2, a3, a4, a5, a6 = alpha.T
    x = np.abs(a2 * a4)
    y = np.abs(a1 * a5)
    z = np.abs(a3**2 - a6**2)
    cf0 = np.abs(a3**2 - a6**2 + 2.0 * (a1 * a5 - a2 * a4))
    cf_inf = np.maximum(0.0, z - 2.0 * (x + y))
    with np.errstate(divide="ignore", invalid="ignore"):
        p = np.where(cf0 > P_MIN_CF0, cf_inf / cf0, np.nan)
    return {"x": x, "y": y, "z": z, "cf0": cf0, "cf_inf": cf_inf, "P": p}


def run_atlas(config: SamplerConfig, workers: int | None = None) -> list[PersistenceRecord]:
    cols = atlas_arrays(sample_amplitudes(config, workers))
    return [
        PersistenceRecord(x, y, z, c0, ci, None if math.isnan(p) else p)
        for x, y, z, c0, ci, p in zip(
            *(cols[k].tolist() for k in ("x", "y", "z", "cf0", "cf_inf", "P"))
        )
    ]


def atlas_csv(cols: dict[str, np.ndarray]) -> str:
    """CSV text with 12 significant digits; ``P`` left empty when undefined."""
    buf = io.StringIO()
    buf.write(",".join(ATLAS_HEADER) + "\n")
    for x, y, z, c0, ci, p in zip(*(cols[k].tolist() for k in ATLAS_HEADER)):
        ps = "" if math.isnan(p) else f"{p:.12g}"
        buf.write(f"{x:.12g},{y:.12g},{z:.12g},{c0:.12g},{ci:.12g},{ps}\n")
    return buf.getvalue()


def atlas_summary(cols: dict[str, np.ndarray]) -> dict[str, float]:
    p = cols["P"]
    defined = ~np.isnan(p)
    n = p.size
    bound = 2.0 * (cols["x"] + cols["y"]) + cols["z"] - 1.0
    return {
        "n_samples": int(n),
        "fraction_P_positive": float(np.count_nonzero(defined & (p > 0)) / n),
        "fraction_P_one": float(np.count_nonzero(defined & (np.abs(p - 1.0) <= 1e-9)) / n),
        "fraction_P_undefined": float(np.count_nonzero(~defined) / n),
        "max_tetrahedron_violation": float(max(0.0, bound.max())),
        "max_cf_inf_minus_cf0": float(max(0.0, (cols["cf_inf"] - cols["cf0"]).max())),
    }
