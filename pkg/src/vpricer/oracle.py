"""Brute-force references: profile enumeration, grid search, empirical revenue.

Nothing here calls into the pricing module's exact evaluator, so the two can
check each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numba
import numpy as np

from .distributions import ProductInstance, SizeCapError
from .montecarlo import MonteCarlo, iter_profiles
from .pricing import PriceVector, as_prices, pricing_revenue

GRID_CAP = 10**7
TIE_PROBE = 1e-9


def _choose(v: np.ndarray, p: np.ndarray):
    """Scan items in order, keeping the incumbent unless strictly beaten."""
    N, n = v.shape
    best_u = np.full(N, -np.inf)
    best_p = np.full(N, -np.inf)
    who = np.full(N, -1)
    for i in range(n):
        u = v[:, i] - p[i]
        better = (u > best_u) | ((u == best_u) & (p[i] > best_p))
        best_u = np.where(better, u, best_u)
        best_p = np.where(better, p[i], best_p)
        who = np.where(better, i, who)
    sold = best_u >= 0
    return np.where(sold, who, -1)


def enumerate_revenue(inst: ProductInstance, prices) -> float:
    """Expected payment by walking every profile of the support product."""
    p = as_prices(prices)
    if len(p) != inst.n:
        raise ValueError(f"{len(p)} prices for {inst.n} items")
    parts = []
    for v, w in iter_profiles(inst):
        who = _choose(v, p)
        paid = np.where(who >= 0, p[np.maximum(who, 0)], 0.0)
        parts.append(math.fsum(w * paid))
    return math.fsum(parts)


@dataclass(frozen=True)
class BruteForceResult:
    best_pricing: PriceVector
    best_revenue: float
    candidates_evaluated: int
    grid_description: str
    grid: tuple = ()


def candidate_grid(inst: ProductInstance, refinement: int = 0) -> np.ndarray:
    base = np.unique(np.concatenate([np.array(d.values) for d in inst.items]))
    pts = [base, base - TIE_PROBE]
    if refinement > 0:
        frac = np.arange(1, refinement + 1) / (refinement + 1)
        for a, b in zip(base[:-1], base[1:]):
            pts.append(a + frac * (b - a))
    grid = np.unique(np.concatenate(pts))
    return grid[grid >= 0]


@numba.njit(cache=True)
def _revenue_kernel(vals, mass, lens, p):
    n = p.shape[0]
    total = 0.0
    for i in range(n):
        for k in range(lens[i]):
            u = vals[i, k] - p[i]
            if u < 0:
                continue
            prob = mass[i, k]
            for j in range(n):
                if j == i:
                    continue
                keep = 0.0
                for l in range(lens[j]):
                    uj = vals[j, l] - p[j]
                    beats = uj > u or (uj == u and (p[j] > p[i] or (p[j] == p[i] and j < i)))
                    if not beats:
                        keep += mass[j, l]
                prob *= keep
                if prob == 0.0:
                    break
            total += p[i] * prob
    return total


@numba.njit(cache=True)
def _grid_search(vals, mass, lens, grid, n):
    m = grid.shape[0]
    digits = np.zeros(n, dtype=np.int64)
    p = np.empty(n)
    best = -1.0
    best_digits = digits.copy()
    count = 0
    while True:
        for i in range(n):
            p[i] = grid[digits[i]]
        r = _revenue_kernel(vals, mass, lens, p)
        count += 1
        if r > best * (1.0 + 1e-12) or best < 0:
            best = r
            best_digits[:] = digits
        # lexicographic odometer, last coordinate fastest
        pos = n - 1
        while pos >= 0:
            digits[pos] += 1
            if digits[pos] < m:
                break
            digits[pos] = 0
            pos -= 1
        if pos < 0:
            break
    return best, best_digits, count


def _pack(inst: ProductInstance):
    width = max(len(d.values) for d in inst.items)
    vals = np.full((inst.n, width), -np.inf)
    mass = np.zeros((inst.n, width))
    lens = np.zeros(inst.n, dtype=np.int64)
    for i, d in enumerate(inst.items):
        k = len(d.values)
        vals[i, :k] = d.values
        mass[i, :k] = d.masses
        lens[i] = k
    return vals, mass, lens


def grid_revenue(inst: ProductInstance, prices) -> float:
    """Compiled exact revenue, the brute-force inner loop."""
    vals, mass, lens = _pack(inst)
    return float(_revenue_kernel(vals, mass, lens, as_prices(prices)))


def brute_force_optimal(inst: ProductInstance, refinement: int = 0) -> BruteForceResult:
    """Exhaustive search over a shared per-item price grid.

    The grid is every support value, each value less a 1e-9 tie probe, and
    ``refinement`` evenly spaced prices between neighbouring support values.
    Among revenue ties the lexicographically smallest pricing wins.
    """
    if not inst.all_discrete:
        raise ValueError("brute force needs discrete items")
    if refinement < 0:
        raise ValueError("refinement must be non-negative")
    grid = candidate_grid(inst, refinement)
    total = len(grid) ** inst.n
    if total > GRID_CAP:
        raise SizeCapError(f"{len(grid)}^{inst.n} = {total} pricings exceeds the cap {GRID_CAP}")
    vals, mass, lens = _pack(inst)
    best, digits, count = _grid_search(vals, mass, lens, grid, inst.n)
    pricing = PriceVector(tuple(grid[digits]))
    checked = enumerate_revenue(inst, pricing)
    if not math.isclose(checked, best, rel_tol=1e-9, abs_tol=1e-12):
        raise RuntimeError(f"kernel revenue {best!r} disagrees with enumeration {checked!r}")
    desc = f"{len(grid)} prices per item (support, -{TIE_PROBE:g} probes, refinement {refinement})"
    return BruteForceResult(pricing, checked, int(count), desc, tuple(grid.tolist()))


def empirical_revenue(inst: ProductInstance, prices, samples: int, seed: int) -> float:
    """Average payment over ``samples`` seeded profiles."""
    return pricing_revenue(inst, prices, MonteCarlo(samples, seed)).revenue
