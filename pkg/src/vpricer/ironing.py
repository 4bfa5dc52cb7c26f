"""Concave envelope of the revenue curve and the ironed virtual valuation.

Discrete items are ironed exactly on the knots ``alpha_k = F_strict(v_k)`` with
``R_k = v_k (1 - alpha_k)`` plus ``(1, 0)``; the chord slope between two
consecutive knots is ``-phi(v_k)``, so hull segments read off phi-bar directly.
Continuous items are ironed on a uniform alpha grid.  Outside pooled regions the
analytic phi is kept, so regular inputs come back unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .distributions import (
    BISECT_MAXITER,
    BISECT_TOL,
    ItemDistribution,
    RevenueLinear,
    _as_float_array,
    _scalarize,
)
from .virtual import revenue_curve

HULL_RTOL = 1e-12


def upper_hull(x: np.ndarray, y: np.ndarray, rtol: float = HULL_RTOL) -> np.ndarray:
    """Indices of the upper concave hull of points sorted by strictly increasing ``x``.

    A point is dropped only when it sits below the chord of its neighbours by
    more than ``rtol`` times the curve scale, so collinear runs are kept.
    """
    tol = rtol * max(1.0, float(np.max(np.abs(y))))
    keep: list[int] = []
    for k in range(len(x)):
        while len(keep) >= 2:
            a, b = keep[-2], keep[-1]
            chord = y[a] + (y[k] - y[a]) * (x[b] - x[a]) / (x[k] - x[a])
            if y[b] < chord - tol:
                keep.pop()
            else:
                break
        keep.append(k)
    return np.array(keep)


@dataclass(frozen=True, eq=False)
class IronedCurve:
    source: ItemDistribution
    alpha_grid: np.ndarray  # all audited knots
    r_grid: np.ndarray  # R at alpha_grid
    hull_idx: np.ndarray  # indices into alpha_grid of envelope vertices
    slopes: np.ndarray  # envelope slope on each hull segment
    # discrete only: phi-bar at each support point
    support_phibar: Optional[np.ndarray] = None
    # continuous only: pooled segments as (alpha_start, alpha_end, nu)
    pools: tuple = ()

    @property
    def alpha_knots(self) -> np.ndarray:
        return self.alpha_grid[self.hull_idx]

    @property
    def rbar_at_knots(self) -> np.ndarray:
        return self.r_grid[self.hull_idx]

    @property
    def is_discrete(self) -> bool:
        return self.support_phibar is not None

    @property
    def lo(self) -> float:
        return self.source.lo

    @property
    def hi(self) -> float:
        return self.source.hi

    def rbar(self, alpha):
        """Envelope value at ``alpha`` (linear between vertices)."""
        a = np.clip(_as_float_array(alpha), 0.0, 1.0)
        return _scalarize(np.interp(a, self.alpha_knots, self.rbar_at_knots), alpha)

    @property
    def flat_intervals(self) -> list:
        """``(nu, left, right)`` for every ironed value shared by a nontrivial value interval."""
        out = []
        if self.is_discrete:
            vals = self.source._v
            phib = self.support_phibar
            start = 0
            for k in range(1, len(vals) + 1):
                if k == len(vals) or phib[k] != phib[start]:
                    if k - start > 1:
                        out.append((float(phib[start]), float(vals[start]), float(vals[k - 1])))
                    start = k
        else:
            for a0, a1, nu in self.pools:
                out.append((nu, float(self.source.quantile(a0)), float(self.source.quantile(a1))))
        return out

    def phibar(self, v):
        x = _as_float_array(v)
        if self.is_discrete:
            # right-continuous step: constant from each support point to the next
            idx = np.clip(np.searchsorted(self.source._v, x, side="right") - 1, 0, None)
            return _scalarize(self.support_phibar[idx], v)
        phi = np.asarray(self.source._virtual(x), dtype=float)
        if not self.pools:
            return _scalarize(phi, v)
        alpha = np.asarray(self.source.cdf(x), dtype=float)
        out = phi.copy()
        lows = np.array([p[0] for p in self.pools])
        highs = np.array([p[1] for p in self.pools])
        nus = np.array([p[2] for p in self.pools])
        # phi may not undercut a pool to its left or exceed one to its right
        j = np.searchsorted(lows, alpha, side="right") - 1
        below = nus[np.clip(j, 0, None)]
        out = np.where(j >= 0, np.maximum(out, below), out)
        jn = j + 1
        above = nus[np.clip(jn, None, len(nus) - 1)]
        out = np.where(jn < len(nus), np.minimum(out, above), out)
        inside = (j >= 0) & (alpha < highs[np.clip(j, 0, None)])
        out = np.where(inside, below, out)
        return _scalarize(out, v)

    @property
    def phibar_range(self) -> tuple:
        if self.is_discrete:
            return float(self.support_phibar[0]), float(self.support_phibar[-1])
        xs = np.array([self.lo, self.hi])
        lo, hi = np.asarray(self.phibar(xs))
        return float(lo), float(hi)


def _iron_discrete(d) -> IronedCurve:
    alpha = np.append(np.asarray(d.cdf(d._v, strict=True)), 1.0)
    R = np.append(d._v * (1.0 - alpha[:-1]), 0.0)
    hull = upper_hull(alpha, R)
    slopes = np.diff(R[hull]) / np.diff(alpha[hull])
    phibar = np.empty(len(d.values))
    raw = d.support_virtual_values
    for s, (a, b) in enumerate(zip(hull[:-1], hull[1:])):
        # unpooled segments keep the analytic value
        phibar[a:b] = raw[a] if b == a + 1 else -slopes[s]
    return IronedCurve(d, alpha, R, hull, slopes, support_phibar=phibar)


def _iron_continuous(d, grid_n: int) -> IronedCurve:
    alpha = np.linspace(0.0, 1.0, grid_n)
    R = np.asarray(revenue_curve(d, alpha), dtype=float)
    hull = upper_hull(alpha, R)
    slopes = np.diff(R[hull]) / np.diff(alpha[hull])
    pools = tuple(
        (float(alpha[a]), float(alpha[b]), float(-slopes[s]))
        for s, (a, b) in enumerate(zip(hull[:-1], hull[1:]))
        if b > a + 1
    )
    return IronedCurve(d, alpha, R, hull, slopes, pools=pools)


@lru_cache(maxsize=512)
def iron(d: ItemDistribution, grid_n: int = 4096) -> IronedCurve:
    """Iron ``d``: exact hull on a discrete support, ``grid_n``-point alpha grid otherwise."""
    if d.is_discrete:
        return _iron_discrete(d)
    if grid_n < 3:
        raise ValueError("ironing grid needs at least 3 points")
    return _iron_continuous(d, grid_n)


def ironed_virtual_value(ic: IronedCurve, v):
    x = _as_float_array(v)
    tol = 1e-12 * max(1.0, abs(ic.hi))
    if np.any((x < ic.lo - tol) | (x > ic.hi + tol)):
        raise ValueError(f"value outside [{ic.lo}, {ic.hi}]")
    return ic.phibar(v)


def _bisect_pred(pred, lo, hi) -> np.ndarray:
    """Smallest x in [lo, hi] with pred(x) true, for pred monotone false -> true.

    ``lo``/``hi`` broadcast; the result is the upper bracket end, so it satisfies pred.
    """
    a, b = np.broadcast_arrays(np.asarray(lo, dtype=float), np.asarray(hi, dtype=float))
    a, b = a.copy(), b.copy()
    for _ in range(BISECT_MAXITER):
        if np.all(b - a <= BISECT_TOL):
            break
        mid = 0.5 * (a + b)
        ok = pred(mid)
        b = np.where(ok, mid, b)
        a = np.where(ok, a, mid)
    return b


def ironed_inverse(ic: IronedCurve, nu, side: str = "left"):
    """Left: inf{v : phibar(v) >= nu}.  Right: sup{v : phibar(v) <= nu}.

    On a discrete support the right inverse is the next support value above the
    level set, the point where the right-continuous step leaves it.  When no
    support value qualifies either side returns a price just above ``hi``, which
    nothing clears; on atomless laws ``hi`` itself already sells nothing.
    """
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    target = _as_float_array(nu)
    past_top = float(np.nextafter(ic.hi, np.inf))
    if ic.is_discrete:
        phib = ic.support_phibar
        vals = ic.source._v
        if side == "left":
            idx = np.searchsorted(phib, target, side="left")
            out = np.where(idx < len(vals), vals[np.minimum(idx, len(vals) - 1)], past_top)
        else:
            idx = np.searchsorted(phib, target, side="right")
            out = np.where(idx < len(vals), vals[np.minimum(idx, len(vals) - 1)], past_top)
        return _scalarize(out, nu)
    lo, hi = ic.lo, ic.hi
    if side == "left":
        out = _bisect_pred(lambda x: ic.phibar(x) >= target, np.full(target.shape, lo), hi)
        out = np.where(ic.phibar(lo) >= target, lo, out)
        out = np.where(ic.phibar(hi) < target, hi, out)
    else:
        out = _bisect_pred(lambda x: ic.phibar(x) > target, np.full(target.shape, lo), hi)
        out = np.where(ic.phibar(lo) > target, lo, out)
        out = np.where(ic.phibar(hi) <= target, hi, out)
    return _scalarize(out, nu)


def attained_values(ic: IronedCurve) -> np.ndarray:
    if not ic.is_discrete:
        raise ValueError("attained ironed values are only enumerable on discrete supports")
    return np.unique(ic.support_phibar)


def regularize(ic: IronedCurve) -> RevenueLinear:
    """The companion law with revenue curve R-bar, i.e. CDF g^{-1} for g = R-bar / (1 - alpha)."""
    knots = tuple(zip(ic.alpha_knots.tolist(), ic.rbar_at_knots.tolist()))
    return RevenueLinear(knots)


def virtual_value_law(d: ItemDistribution, grid_n: int = 100_000):
    """Atoms and masses of phibar(V) for V ~ d.

    Exact for discrete and revenue-linear laws; otherwise a midpoint rule on the
    quantile scale with ``grid_n`` cells.
    """
    if d.is_discrete:
        return iron(d).support_phibar.copy(), np.array(d.masses)
    if isinstance(d, RevenueLinear):
        return -d._slope.copy(), np.diff(d._a)
    ic = iron(d)
    mids = (np.arange(grid_n) + 0.5) / grid_n
    return np.asarray(ic.phibar(d.quantile(mids)), dtype=float), np.full(grid_n, 1.0 / grid_n)
