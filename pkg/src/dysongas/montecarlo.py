"""Metropolis sampling of the rescaled beta = 1 planar Coulomb gas.

Target density on N points of the plane::

    prod_{i<j} |z_i - z_j|^2 * exp(-N sum_i |z_i|^2)

whose mean pair energy ``<sum_{i<j} ln|z_i - z_j|^2>`` is the rescaled energy.

Random numbers come from numpy's PCG64, one stream per chain spawned from
``SeedSequence(seed)``; proposals and acceptance uniforms are drawn in
blocks and handed to the sweep kernel, which is compiled when the Cython
extension is available and pure Python otherwise.
"""
from __future__ import annotations

import logging
import math
import os
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _metropolis_py

log = logging.getLogger(__name__)

if os.environ.get("DYSONGAS_PURE_PYTHON"):
    _kernel = _metropolis_py
    BACKEND = "python"
else:
    try:
        from . import _metropolis as _kernel  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on build
        _kernel = _metropolis_py
        BACKEND = "python"

RESYNC_SWEEPS = 1000
ADAPT_SWEEPS = 100
TARGET_ACCEPTANCE = 0.5
DEFAULT_SWEEPS = 2_000_000
DEFAULT_CHAINS = 8
DEFAULT_BATCHES = 50
MIXING_SIGMA = 6.0


class MixingError(RuntimeError):
    pass


@dataclass
class GasConfiguration:
    """``points`` is an ``(N, 2)`` float64 array; the log-weight is cached."""

    points: np.ndarray
    cached_log_weight: float = field(default=float("nan"))

    def __post_init__(self):
        self.points = np.ascontiguousarray(self.points, dtype=np.float64)
        if self.points.ndim != 2 or self.points.shape[1] != 2:
            raise ValueError("points must have shape (N, 2)")
        if math.isnan(self.cached_log_weight):
            self.resync()

    @property
    def n(self) -> int:
        return self.points.shape[0]

    def log_weight(self) -> float:
        """Recompute ``sum_{i<j} ln|z_i-z_j|^2 - N sum_i |z_i|^2`` from scratch."""
        x, y = self.xy()
        return energy_observable(self) - self.n * _metropolis_py.full_confinement(x.tolist(), y.tolist())

    def resync(self) -> None:
        self.cached_log_weight = self.log_weight()

    def xy(self) -> tuple[np.ndarray, np.ndarray]:
        return np.ascontiguousarray(self.points[:, 0]), np.ascontiguousarray(self.points[:, 1])

    def rotated(self, angle: float) -> "GasConfiguration":
        c, s = math.cos(angle), math.sin(angle)
        rot = np.array([[c, -s], [s, c]])
        return GasConfiguration(self.points @ rot.T)


@dataclass(frozen=True)
class MCEstimate:
    mean: float
    stderr: float
    n_sweeps: int
    n_chains: int
    burn_in: int
    acceptance_rate: float
    seed: int
    n: int = 0
    step: tuple = ()
    chain_means: tuple = ()
    chain_stderrs: tuple = ()
    mixing_ok: bool = True

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "mean": self.mean,
            "stderr": self.stderr,
            "n_sweeps": self.n_sweeps,
            "n_chains": self.n_chains,
            "burn_in": self.burn_in,
            "acceptance_rate": self.acceptance_rate,
            "seed": self.seed,
            "step": list(self.step),
            "chain_means": list(self.chain_means),
            "chain_stderrs": list(self.chain_stderrs),
            "mixing_ok": self.mixing_ok,
        }

    @classmethod
    def from_json(cls, d: dict) -> "MCEstimate":
        d = dict(d)
        for key in ("step", "chain_means", "chain_stderrs"):
            d[key] = tuple(d[key])
        return cls(**d)


def energy_observable(c: GasConfiguration) -> float:
    """``sum_{i<j} ln|z_i - z_j|^2``."""
    p = c.points
    total = 0.0
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            dx = p[i, 0] - p[j, 0]
            dy = p[i, 1] - p[j, 1]
            r2 = dx * dx + dy * dy
            if r2 == 0.0:
                raise ValueError(f"points {i} and {j} coincide")
            total += math.log(r2)
    return float(total)


def initial_configuration(n: int, seed: int, chain: int = 0) -> GasConfiguration:
    """Ring of radius 1/sqrt(2) with small seed-derived angular and radial jitter."""
    rng = np.random.default_rng([seed, chain, 0x5EED])
    angles = 2 * np.pi * (np.arange(n) + 0.1 * rng.random(n)) / n
    radii = (1 / math.sqrt(2)) * (1 + 0.05 * (rng.random(n) - 0.5))
    return GasConfiguration(np.column_stack([radii * np.cos(angles), radii * np.sin(angles)]))


def acceptance_probability(c: GasConfiguration, i: int, new_point) -> float:
    """``min(1, w(new)/w(old))`` for moving particle ``i``; 0 on a collision."""
    moved = c.points.copy()
    moved[i] = new_point
    try:
        trial = GasConfiguration(moved)
    except ValueError:
        return 0.0
    return min(1.0, math.exp(trial.cached_log_weight - c.log_weight()))


def _draw(rng: np.random.Generator, sweeps: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    return rng.standard_normal((sweeps, n, 2)), rng.random((sweeps, n))


def metropolis_sweep(c: GasConfiguration, step: float, rng: np.random.Generator, kernel=None):
    """One sweep of N single-particle moves, in place; returns the accepted count."""
    if step <= 0:
        raise ValueError("step must be positive")
    kernel = kernel or _kernel
    normals, uniforms = _draw(rng, 1, c.n)
    x, y = c.xy()
    accepted, _, energy, conf = kernel.run_block(x, y, normals, uniforms, float(step))
    c.points = np.column_stack([x, y])
    c.cached_log_weight = energy - c.n * conf
    return c, accepted


@dataclass
class ChainResult:
    batch_means: np.ndarray
    accepted: int
    proposals: int
    step: float
    config: GasConfiguration


def run_chain(
    n: int,
    sweeps: int,
    burn_in: int,
    rng: np.random.Generator,
    initial: Optional[GasConfiguration] = None,
    step: Optional[float] = None,
    n_batches: int = DEFAULT_BATCHES,
    kernel=None,
) -> ChainResult:
    """Burn in with step adaptation, then record ``n_batches`` batch means."""
    kernel = kernel or _kernel
    config = initial if initial is not None else initial_configuration(n, 0)
    x, y = config.xy()
    x = x.copy()
    y = y.copy()
    step = float(step) if step is not None else 0.5 / math.sqrt(n)

    done = 0
    while done < burn_in:
        blk = min(ADAPT_SWEEPS, burn_in - done)
        normals, uniforms = _draw(rng, blk, n)
        acc, _, _, _ = kernel.run_block(x, y, normals, uniforms, step)
        rate = acc / (blk * n)
        step *= math.exp(rate - TARGET_ACCEPTANCE)
        done += blk

    batch_len = sweeps // n_batches
    if batch_len < 1:
        raise ValueError("fewer sweeps than batches")
    means = np.empty(n_batches)
    accepted = 0
    for b in range(n_batches):
        total = 0.0
        left = batch_len
        while left:
            blk = min(RESYNC_SWEEPS, left)
            normals, uniforms = _draw(rng, blk, n)
            acc, esum, _, _ = kernel.run_block(x, y, normals, uniforms, step)
            accepted += acc
            total += esum
            left -= blk
        means[b] = total / batch_len
    final = GasConfiguration(np.column_stack([x, y]))
    return ChainResult(means, accepted, batch_len * n_batches * n, step, final)


def estimate_energy(
    n: int,
    sweeps: int = DEFAULT_SWEEPS,
    chains: int = DEFAULT_CHAINS,
    seed: int = 0,
    burn_in: Optional[int] = None,
    n_batches: int = DEFAULT_BATCHES,
    initial_rotation: float = 0.0,
    kernel=None,
) -> MCEstimate:
    """Estimate the rescaled mean energy with batch-means error bars.

    ``sweeps`` and ``burn_in`` are per chain; burn-in defaults to ``sweeps // 10``
    and is run in addition to the measured sweeps.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if sweeps < 10_000:
        raise ValueError(f"need at least 10^4 sweeps per chain, got {sweeps}")
    if chains < 1:
        raise ValueError("need at least one chain")
    burn_in = sweeps // 10 if burn_in is None else burn_in
    streams = np.random.SeedSequence(seed).spawn(chains)
    results = []
    for c, ss in enumerate(streams):
        rng = np.random.Generator(np.random.PCG64(ss))
        init = initial_configuration(n, seed, c)
        if initial_rotation:
            init = init.rotated(initial_rotation)
        results.append(run_chain(n, sweeps, burn_in, rng, init, n_batches=n_batches, kernel=kernel))

    all_means = np.concatenate([r.batch_means for r in results])
    mean = float(all_means.mean())
    stderr = float(all_means.std(ddof=1) / math.sqrt(len(all_means)))
    chain_means = tuple(float(r.batch_means.mean()) for r in results)
    chain_se = tuple(float(r.batch_means.std(ddof=1) / math.sqrt(len(r.batch_means))) for r in results)
    mixing_ok = True
    for i in range(chains):
        for j in range(i + 1, chains):
            spread = math.hypot(chain_se[i], chain_se[j])
            if abs(chain_means[i] - chain_means[j]) > MIXING_SIGMA * spread:
                mixing_ok = False
                log.warning("chains %d and %d disagree beyond %g sigma", i, j, MIXING_SIGMA)
    accepted = sum(r.accepted for r in results)
    proposals = sum(r.proposals for r in results)
    return MCEstimate(
        mean=mean,
        stderr=stderr,
        n_sweeps=sweeps,
        n_chains=chains,
        burn_in=burn_in,
        acceptance_rate=accepted / proposals,
        seed=seed,
        n=n,
        step=tuple(r.step for r in results),
        chain_means=chain_means,
        chain_stderrs=chain_se,
        mixing_ok=mixing_ok,
    )
