"""Seeded, chunked Monte Carlo and exact support enumeration.

Chunk ``k`` of a run with seed ``s`` always draws from ``default_rng([s, k])``
and chunk statistics are combined in chunk order, so estimates do not depend
on how many worker threads were used.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .distributions import ProductInstance, SizeCapError, sample_profiles

CHUNK = 1 << 17
EXACT_CAP = 10**7


def worker_count() -> int:
    raw = os.environ.get("VPRICER_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"VPRICER_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise ValueError("VPRICER_THREADS must be non-negative")
    return n if n > 0 else min(8, os.cpu_count() or 1)


@dataclass(frozen=True)
class MonteCarlo:
    samples: int = 1_000_000
    seed: int = 0

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be at least 1")


@dataclass(frozen=True)
class RevenueReport:
    revenue: float
    chi: float
    per_index_sale_prob: tuple
    method: str
    mc_halfwidth: Optional[float] = None
    samples_used: Optional[int] = None


# An evaluator maps an (N, n) block of profiles to (payments, winner index or -1).
Evaluator = Callable[[np.ndarray], tuple]


def _chunk_stats(inst, evaluate, seed, k, size):
    stream = np.random.default_rng([seed, k])
    profiles = sample_profiles(inst, size, stream)
    pay, who = evaluate(profiles)
    counts = np.bincount(who[who >= 0], minlength=inst.n)
    return float(pay.sum()), float(np.square(pay).sum()), counts, int(np.sum(who < 0))


def monte_carlo(inst: ProductInstance, evaluate: Evaluator, cfg: MonteCarlo) -> RevenueReport:
    sizes = [CHUNK] * (cfg.samples // CHUNK)
    if cfg.samples % CHUNK:
        sizes.append(cfg.samples % CHUNK)
    jobs = [(inst, evaluate, cfg.seed, k, s) for k, s in enumerate(sizes)]
    workers = min(worker_count(), len(jobs))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda job: _chunk_stats(*job), jobs))
    else:
        parts = [_chunk_stats(*job) for job in jobs]
    total = math.fsum(p[0] for p in parts)
    total_sq = math.fsum(p[1] for p in parts)
    counts = np.sum([p[2] for p in parts], axis=0)
    unsold = sum(p[3] for p in parts)
    N = cfg.samples
    mean = total / N
    var = max(0.0, total_sq / N - mean * mean) * (N / (N - 1) if N > 1 else 0.0)
    return RevenueReport(
        revenue=mean,
        chi=unsold / N,
        per_index_sale_prob=tuple(float(c) / N for c in counts),
        method="mc",
        mc_halfwidth=1.96 * math.sqrt(var / N),
        samples_used=N,
    )


def check_enumerable(inst: ProductInstance, cap: int = EXACT_CAP) -> int:
    if not inst.all_discrete:
        raise ValueError("exact evaluation needs every item to be discrete")
    size = inst.support_size()
    if size > cap:
        raise SizeCapError(f"support product {size} exceeds the exact-evaluation cap {cap}")
    return size


def iter_profiles(inst: ProductInstance, block: int = CHUNK):
    """Yield ``(values, probabilities)`` blocks covering the full support product."""
    size = check_enumerable(inst)
    shape = tuple(len(d.values) for d in inst.items)
    vals = [np.array(d.values) for d in inst.items]
    masses = [np.array(d.masses) for d in inst.items]
    for start in range(0, size, block):
        flat = np.arange(start, min(size, start + block))
        idx = np.unravel_index(flat, shape)
        v = np.column_stack([vals[i][idx[i]] for i in range(inst.n)])
        w = np.ones(len(flat))
        for i in range(inst.n):
            w = w * masses[i][idx[i]]
        yield v, w


def enumerate_expectation(inst: ProductInstance, evaluate: Evaluator) -> RevenueReport:
    revenue = 0.0
    unsold = 0.0
    sale = np.zeros(inst.n)
    parts = []
    for v, w in iter_profiles(inst):
        pay, who = evaluate(v)
        parts.append(float(np.dot(w, pay)))
        unsold += float(w[who < 0].sum())
        sale += np.bincount(who[who >= 0], weights=w[who >= 0], minlength=inst.n)
    revenue = math.fsum(parts)
    return RevenueReport(revenue, min(1.0, max(0.0, unsold)), tuple(sale.tolist()), "exact")
