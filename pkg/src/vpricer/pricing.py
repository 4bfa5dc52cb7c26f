"""Posted pricings for a unit-demand buyer and the virtual-price algorithms.

Purchase rule: the buyer takes an item of maximal utility ``v_i - p_i`` when
that utility is non-negative, preferring the most expensive such item and then
the lowest index.  Hence ``chi(p) = P(all v_i < p_i)`` and ``q_i = P(v_i >= p_i)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import roots_legendre

from .auctions import AuctionOutcome, _outcome
from .distributions import (
    BISECT_MAXITER,
    BISECT_TOL,
    Discrete,
    PiecewiseLinearCDF,
    ProductInstance,
    RevenueLinear,
    bisect_increasing,
)
from .ironing import attained_values, iron, ironed_inverse
from .montecarlo import MonteCarlo, RevenueReport, check_enumerable, monte_carlo
from .virtual import _reserve_unchecked, require_regular

NU_TOL = 1e-8
CHI_TOL = 1e-9


@dataclass(frozen=True)
class PriceVector:
    prices: tuple

    def __post_init__(self):
        prices = tuple(float(p) for p in np.atleast_1d(np.asarray(self.prices, dtype=float)))
        if not prices:
            raise ValueError("price vector is empty")
        if not all(math.isfinite(p) and p >= 0 for p in prices):
            raise ValueError(f"prices must be finite and non-negative, got {prices}")
        object.__setattr__(self, "prices", prices)

    def __len__(self) -> int:
        return len(self.prices)

    def __iter__(self):
        return iter(self.prices)

    def __getitem__(self, i):
        return self.prices[i]

    @property
    def array(self) -> np.ndarray:
        return np.array(self.prices)


def as_prices(prices) -> np.ndarray:
    if isinstance(prices, PriceVector):
        return prices.array
    return PriceVector(tuple(np.atleast_1d(prices))).array


def _check_len(inst: ProductInstance, p: np.ndarray) -> None:
    if len(p) != inst.n:
        raise ValueError(f"{len(p)} prices for {inst.n} items")


def purchase_probabilities(inst: ProductInstance, prices) -> np.ndarray:
    """q_i = P(v_i >= p_i)."""
    p = as_prices(prices)
    _check_len(inst, p)
    return np.array([1.0 - float(d.cdf(p[i], strict=True)) for i, d in enumerate(inst.items)])


def chi(inst: ProductInstance, prices) -> float:
    """Probability that nothing is bought: prod_i P(v_i < p_i)."""
    return float(np.prod(1.0 - purchase_probabilities(inst, prices)))


# Outcomes ------------------------------------------------------------------


def pricing_evaluator(prices: np.ndarray):
    p = np.asarray(prices, dtype=float)

    def evaluate(v: np.ndarray):
        u = v - p
        best = u.max(axis=1)
        tied = u == best[:, None]
        top_price = np.where(tied, p, -np.inf).max(axis=1)
        who = np.argmax(tied & (p == top_price[:, None]), axis=1)
        sold = best >= 0
        return np.where(sold, p[who], 0.0), np.where(sold, who, -1)

    return evaluate


def pricing_outcome(prices, vvec) -> AuctionOutcome:
    p = as_prices(prices)
    v = np.atleast_2d(np.asarray(vvec, dtype=float))
    if v.shape[1] != len(p):
        raise ValueError(f"{len(p)} prices but {v.shape[1]} values")
    return _outcome(pricing_evaluator(p), v)


# Revenue -------------------------------------------------------------------


def _exact_discrete(inst: ProductInstance, p: np.ndarray) -> RevenueReport:
    check_enumerable(inst)
    vals = [np.array(d.values) for d in inst.items]
    mass = [np.array(d.masses) for d in inst.items]
    sale = np.zeros(inst.n)
    for i in range(inst.n):
        u = vals[i] - p[i]
        live = u >= 0
        if not np.any(live):
            continue
        u = u[live]
        prob = mass[i][live].copy()
        for j in range(inst.n):
            if j == i:
                continue
            uj = (vals[j] - p[j])[None, :]
            wins_tie = p[j] > p[i] or (p[j] == p[i] and j < i)
            beats = (uj > u[:, None]) | ((uj == u[:, None]) & wins_tie)
            prob *= np.where(beats, 0.0, mass[j][None, :]).sum(axis=1)
        sale[i] = math.fsum(prob)
    revenue = math.fsum(p * sale)
    return RevenueReport(revenue, chi(inst, p), tuple(sale.tolist()), "exact")


_GL_X, _GL_W = roots_legendre(64)


def _kinks(d) -> list:
    if isinstance(d, PiecewiseLinearCDF):
        return [k[0] for k in d.knots]
    return [d.lo, d.hi]


def _quadrature(inst: ProductInstance, p: np.ndarray) -> RevenueReport:
    for i, d in enumerate(inst.items):
        if d.is_discrete or isinstance(d, RevenueLinear):
            raise ValueError(f"quadrature needs atomless items; item {i} is {d.kind}")
    sale = np.zeros(inst.n)
    for i, d in enumerate(inst.items):
        a = max(p[i], d.lo)
        b = d.hi
        if a >= b:
            continue
        # integrand kinks where a competitor's shifted price crosses one of its breakpoints
        cuts = {a, b}
        cuts.update(x for x in _kinks(d) if a < x < b)
        for j, e in enumerate(inst.items):
            if j != i:
                cuts.update(x + p[i] - p[j] for x in _kinks(e) if a < x + p[i] - p[j] < b)
        edges = np.array(sorted(cuts))
        total = []
        for lo, hi in zip(edges[:-1], edges[1:]):
            x = 0.5 * (hi - lo) * _GL_X + 0.5 * (hi + lo)
            f = np.asarray(d.pdf(x), dtype=float)
            for j, e in enumerate(inst.items):
                if j != i:
                    f = f * np.asarray(e.cdf(p[j] + x - p[i]), dtype=float)
            total.append(0.5 * (hi - lo) * float(np.dot(_GL_W, f)))
        sale[i] = math.fsum(total)
    revenue = math.fsum(p * sale)
    return RevenueReport(revenue, chi(inst, p), tuple(sale.tolist()), "quadrature")


def pricing_revenue(inst: ProductInstance, prices, method="exact") -> RevenueReport:
    """Expected revenue of posted prices.

    ``"exact"`` needs discrete items and uses a product-form sum over each
    item's support; ``"quadrature"`` integrates atomless continuous items;
    ``MonteCarlo(samples, seed)`` simulates.
    """
    p = as_prices(prices)
    _check_len(inst, p)
    if method == "exact":
        if not inst.all_discrete:
            raise ValueError("exact revenue needs discrete items; use 'quadrature' or MonteCarlo")
        return _exact_discrete(inst, p)
    if method == "quadrature":
        return _quadrature(inst, p)
    if isinstance(method, MonteCarlo):
        report = monte_carlo(inst, pricing_evaluator(p), method)
        return RevenueReport(
            report.revenue,
            chi(inst, p),
            report.per_index_sale_prob,
            "mc",
            report.mc_halfwidth,
            report.samples_used,
        )
    raise ValueError(f"method must be 'exact', 'quadrature' or MonteCarlo(...), got {method!r}")


def default_method(inst: ProductInstance):
    if inst.all_discrete:
        return "exact"
    if not any(d.is_discrete or isinstance(d, RevenueLinear) for d in inst.items):
        return "quadrature"
    return MonteCarlo()


def revenue(inst: ProductInstance, prices) -> float:
    return pricing_revenue(inst, prices, default_method(inst)).revenue


# Ironed inverses and the Q lower bound -------------------------------------


def left_prices(inst: ProductInstance, nu: float) -> np.ndarray:
    return np.array([float(ironed_inverse(iron(d), nu, "left")) for d in inst.items])


def right_prices(inst: ProductInstance, nu: float) -> np.ndarray:
    return np.array([float(ironed_inverse(iron(d), nu, "right")) for d in inst.items])


def q_lower_bound(inst: ProductInstance, prices, nu: float, method="exact") -> float:
    """E[Z]: p_i when i is the only purchasable item, nu when two or more are, else 0."""
    p = as_prices(prices)
    _check_len(inst, p)
    lo, hi = left_prices(inst, nu), right_prices(inst, nu)
    tol = NU_TOL * np.maximum(1.0, np.abs(p))
    # continuous inverses come from bisection, so allow its tolerance too
    slack = np.where([d.is_discrete for d in inst.items], 0.0, 1e-7)
    bad = np.nonzero((p < lo - tol - slack) | (p > hi + tol + slack))[0]
    if len(bad):
        i = int(bad[0])
        raise ValueError(
            f"price {p[i]:.12g} of item {i} is outside the level set [{lo[i]:.12g}, {hi[i]:.12g}] of nu={nu:.12g}"
        )
    if method == "exact":
        q = purchase_probabilities(inst, p)
        none = np.prod(1.0 - q)
        only = np.array([q[i] * np.prod(np.delete(1.0 - q, i)) for i in range(inst.n)])
        several = max(0.0, 1.0 - none - only.sum())
        return math.fsum(p * only) + nu * several
    if isinstance(method, MonteCarlo):
        def evaluate(v):
            hit = v >= p
            k = hit.sum(axis=1)
            who = np.argmax(hit, axis=1)
            pay = np.where(k == 1, p[who], np.where(k >= 2, nu, 0.0))
            return pay, np.where(k >= 1, who, -1)

        return monte_carlo(inst, evaluate, method).revenue
    raise ValueError(f"method must be 'exact' or MonteCarlo(...), got {method!r}")


# Solving for a virtual price -----------------------------------------------


@dataclass(frozen=True)
class NuSolution:
    nu: float
    prices: tuple  # r(nu), or the left inverses in ironed space
    chi: float
    right_prices: Optional[tuple] = None
    right_chi: Optional[float] = None
    space: str = "raw"


def _raw_prices(inst: ProductInstance, nu: float) -> np.ndarray:
    return np.array([float(_reserve_unchecked(d, nu)) for d in inst.items])


def _max_value_nu(inst: ProductInstance, ironed: bool) -> float:
    if ironed:
        return max(iron(d).phibar_range[1] for d in inst.items)
    return max(float(d._virtual(d.hi)) for d in inst.items)


def _candidate_nus(inst: ProductInstance, ironed: bool) -> np.ndarray:
    if ironed:
        return np.unique(np.concatenate([attained_values(iron(d)) for d in inst.items]))
    phis = np.concatenate([d.support_virtual_values for d in inst.items])
    return np.unique(np.concatenate([[0.0], phis[phis >= 0]]))


def solve_nu(inst: ProductInstance, x: float, space: str = "raw") -> NuSolution:
    """Virtual price nu_x with chi(r(nu_x)) = x, or the discrete analogue.

    On discrete instances no attained virtual value need hit x exactly.  Raw
    space takes the least non-negative attained nu with chi at or below x.
    Ironed space takes the largest such nu instead, so that chi at the left
    inverse is at most x and chi at the right inverse is at least x.
    """
    if not 0.0 < x < 1.0:
        raise ValueError(f"x must lie in (0, 1), got {x}")
    if space not in ("raw", "ironed"):
        raise ValueError(f"space must be 'raw' or 'ironed', got {space!r}")
    ironed = space == "ironed"
    if not ironed:
        for d in inst.items:
            require_regular(d)
    price_at = (lambda nu: left_prices(inst, nu)) if ironed else (lambda nu: _raw_prices(inst, nu))

    def finish(nu: float) -> NuSolution:
        p = price_at(nu)
        if ironed:
            r = right_prices(inst, nu)
            return NuSolution(nu, tuple(p), chi(inst, p), tuple(r), chi(inst, r), space)
        return NuSolution(nu, tuple(p), chi(inst, p), space=space)

    if inst.all_discrete:
        cands = _candidate_nus(inst, ironed)
        chis = np.array([chi(inst, price_at(nu)) for nu in cands])
        ok = np.nonzero(chis <= x)[0]
        if not len(ok) or (not ironed and chis[0] > x):
            raise ValueError(f"chi already exceeds {x} at the lowest virtual price; use nu = 0")
        if ironed and chi(inst, price_at(0.0)) > x:
            raise ValueError(f"chi(left(0)) exceeds {x}; use nu = 0")
        return finish(float(cands[ok[-1]] if ironed else cands[ok[0]]))

    hi_nu = _max_value_nu(inst, ironed)
    if chi(inst, price_at(0.0)) > x:
        raise ValueError(f"chi(r(0)) already exceeds {x}; use nu = 0")
    if chi(inst, price_at(hi_nu)) <= x:
        return finish(hi_nu)
    a, b = 0.0, hi_nu
    for _ in range(BISECT_MAXITER):
        mid = 0.5 * (a + b)
        c = chi(inst, price_at(mid))
        if abs(c - x) <= CHI_TOL:
            return finish(mid)
        if c <= x:
            a = mid
        else:
            b = mid
        if b - a <= BISECT_TOL:
            break
    return finish(a)


# Algorithms ----------------------------------------------------------------


def _require_all_regular(inst: ProductInstance) -> None:
    for d in inst.items:
        require_regular(d)


def optimal_prices(inst: ProductInstance) -> np.ndarray:
    """r(0) for a regular instance."""
    _require_all_regular(inst)
    return _raw_prices(inst, 0.0)


def price_regular(inst: ProductInstance) -> PriceVector:
    """Uniform virtual price max(0, nu_1/2); r(0) when chi(r(0)) >= 1/2."""
    r0 = optimal_prices(inst)
    if chi(inst, r0) >= 0.5:
        return PriceVector(tuple(r0))
    sol = solve_nu(inst, 0.5, "raw")
    return PriceVector(sol.prices)


def price_iid(inst: ProductInstance) -> PriceVector:
    """Uniform virtual price making each item sell with probability about 1/n."""
    if not inst.iid:
        raise ValueError("price_iid needs identically distributed items")
    d = inst.items[0]
    require_regular(d)
    n = inst.n
    if isinstance(d, Discrete):
        # largest support value still purchased with probability >= 1/n
        tail = d._tail[:-1]
        k = int(np.nonzero(tail >= 1.0 / n - 1e-15)[0][-1])
        nu = float(d.support_virtual_values[k])
    else:
        nu = float(d._virtual(d.quantile(1.0 - 1.0 / n)))
    p = _raw_prices(inst, max(0.0, nu))
    return PriceVector(tuple(p))


@dataclass(frozen=True)
class NonregularResult:
    left_pricing: PriceVector
    right_pricing: PriceVector
    crossover_index: Optional[int]
    target_x: float
    x0: float
    nu: float
    left_revenue: float
    right_revenue: float
    chosen: str

    @property
    def pricing(self) -> PriceVector:
        return self.left_pricing if self.chosen == "left" else self.right_pricing

    @property
    def revenue(self) -> float:
        return max(self.left_revenue, self.right_revenue)


def price_nonregular(inst: ProductInstance, method=None) -> NonregularResult:
    """Two neighbouring pricings around the ironed virtual price nu_x; keep the better."""
    method = default_method(inst) if method is None else method
    p0 = left_prices(inst, 0.0)
    x0 = chi(inst, p0)
    x = max(x0, 0.5)
    if x >= 1.0:
        nu = 0.0
        left, right = p0, right_prices(inst, 0.0)
    else:
        sol = solve_nu(inst, x, "ironed")
        nu = sol.nu
        left, right = np.array(sol.prices), np.array(sol.right_prices)
    # continuous inverses are bisection outputs; treat bracket-level gaps as equal
    cont = np.array([not d.is_discrete for d in inst.items])
    same = cont & (np.abs(right - left) <= 1e-8 * np.maximum(1.0, np.abs(left)))
    right = np.where(same, left, right)
    z_prev = left.copy()
    cross = None
    lo_p, hi_p = left, left
    for i in range(inst.n):
        if left[i] == right[i]:
            continue
        z = z_prev.copy()
        z[i] = right[i]
        if chi(inst, z) >= x - CHI_TOL:
            cross, lo_p, hi_p = i, z_prev, z
            break
        z_prev = z
    else:
        lo_p = hi_p = z_prev
    r_left = pricing_revenue(inst, lo_p, method).revenue
    r_right = pricing_revenue(inst, hi_p, method).revenue
    return NonregularResult(
        PriceVector(tuple(lo_p)),
        PriceVector(tuple(hi_p)),
        cross,
        x,
        x0,
        nu,
        r_left,
        r_right,
        "left" if r_left >= r_right else "right",
    )


@dataclass(frozen=True)
class ApproxConfig:
    epsilon: float = 0.1
    delta: float = 0.1
    seed: int = 0

    def __post_init__(self):
        for name in ("epsilon", "delta"):
            val = getattr(self, name)
            if not 0.0 < val < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {val}")

    @property
    def gamma(self) -> float:
        return 1.0 / (1.0 - self.epsilon)


@dataclass(frozen=True)
class ApproxPlan:
    config: ApproxConfig
    early_exit: bool
    r0: tuple
    grids: tuple = ()
    grid_phis: tuple = ()
    candidate_nus: tuple = ()
    pricings: tuple = ()
    range_ratio: float = float("nan")
    sample_count: int = 0


def power_grid(lo: float, hi: float, gamma: float) -> np.ndarray:
    """Integer powers of ``gamma`` inside [lo, hi]."""
    lg = math.log(gamma)
    k0 = math.ceil(math.log(lo) / lg - 1e-12)
    k1 = math.floor(math.log(hi) / lg + 1e-12)
    pts = gamma ** np.arange(k0, k1 + 1, dtype=float)
    return pts[(pts >= lo * (1 - 1e-12)) & (pts <= hi * (1 + 1e-12))]


def _grid_virtual(d, xs: np.ndarray) -> np.ndarray:
    if isinstance(d, Discrete):
        # a posted price sells exactly like the next support value up
        idx = np.minimum(np.searchsorted(d._v, xs * (1 - 1e-12), side="left"), len(d.values) - 1)
        return d.support_virtual_values[idx]
    return np.asarray(d._virtual(xs), dtype=float)


def approx_plan(inst: ProductInstance, cfg: ApproxConfig) -> ApproxPlan:
    _require_all_regular(inst)
    if any(d.lo <= 0 for d in inst.items):
        raise ValueError("the approximation grid needs strictly positive supports")
    r0 = _raw_prices(inst, 0.0)
    if chi(inst, r0) >= 0.5:
        return ApproxPlan(cfg, True, tuple(r0))
    grids, phis = [], []
    for d in inst.items:
        g = power_grid(d.lo, d.hi, cfg.gamma)
        if not len(g):
            g = np.array([d.lo])
        grids.append(g)
        phis.append(_grid_virtual(d, g))

    def r_prime(nu: float) -> np.ndarray:
        out = []
        for g, ph in zip(grids, phis):
            ok = np.nonzero(ph <= nu)[0]
            out.append(g[ok[-1]] if len(ok) else g[0])
        return np.array(out)

    cands, pricings, seen = [], [], set()
    scale = 1.0 + cfg.epsilon**2 - cfg.epsilon
    for nu in np.unique(np.concatenate(phis)):
        rp = r_prime(float(nu))
        if chi(inst, rp) <= 0.5:
            cands.append(float(nu))
            key = tuple(rp.tolist())
            if key not in seen:
                seen.add(key)
                pricings.append(tuple((scale * rp).tolist()))
    M = max(d.hi for d in inst.items) / min(d.lo for d in inst.items)
    count = 0
    if pricings:
        count = math.ceil(4.0 * M * M / cfg.epsilon**2 * math.log(2.0 * len(pricings) / cfg.delta))
    return ApproxPlan(
        cfg, False, tuple(r0), tuple(grids), tuple(phis), tuple(cands), tuple(pricings), M, count
    )


def price_approx(inst: ProductInstance, cfg: ApproxConfig = ApproxConfig()) -> PriceVector:
    """Best empirical pricing among rounded uniform-virtual-price candidates."""
    plan = approx_plan(inst, cfg)
    if plan.early_exit or not plan.pricings:
        return PriceVector(plan.r0)
    sample = MonteCarlo(plan.sample_count, cfg.seed)
    best, best_rev = None, -math.inf
    for p in plan.pricings:
        rev = pricing_revenue(inst, p, sample).revenue
        if rev > best_rev:
            best, best_rev = p, rev
    return PriceVector(best)


def price_vickrey_based(inst: ProductInstance, epsilon: float = 0.005) -> PriceVector:
    """Raise the optimal reserves r(0) to a common floor v until chi reaches 1/2."""
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    r0 = optimal_prices(inst)
    if chi(inst, r0) > 0.5:
        return PriceVector(tuple(r0))
    floor_chi = lambda v: chi(inst, np.maximum(r0, v))
    if inst.all_discrete:
        cands = np.unique(np.concatenate([r0] + [np.array(d.values) for d in inst.items]))
        ok = [v for v in cands if floor_chi(v) <= 0.5]
        v = max(ok) if ok else 0.0
        return PriceVector(tuple(np.maximum(r0, v)))
    a, b = float(r0.min()), max(d.hi for d in inst.items)
    if floor_chi(b) <= 0.5:
        return PriceVector(tuple(np.maximum(r0, b)))
    for _ in range(BISECT_MAXITER):
        mid = 0.5 * (a + b)
        c = floor_chi(mid)
        if c <= 0.5:
            a = mid
            if c >= 0.5 - epsilon:
                break
        else:
            b = mid
        if b - a <= BISECT_TOL:
            break
    return PriceVector(tuple(np.maximum(r0, a)))


def best_single_price(inst: ProductInstance) -> tuple:
    """Best common price p maximizing p * (1 - prod_i P(v_i < p))."""

    def rev(p):
        p = np.atleast_1d(np.asarray(p, dtype=float))
        none = np.ones(p.shape)
        for d in inst.items:
            none = none * np.asarray(d.cdf(p, strict=True))
        return p * (1.0 - none)

    pts = [np.array([d.lo, d.hi]) for d in inst.items]
    pts += [np.array(d.values) for d in inst.items if d.is_discrete]
    if not inst.all_discrete:
        lo = min(d.lo for d in inst.items)
        hi = max(d.hi for d in inst.items)
        pts.append(np.linspace(lo, hi, 4001))
    grid = np.unique(np.concatenate(pts))
    vals = rev(grid)
    k = int(np.argmax(vals))
    best_p, best_r = float(grid[k]), float(vals[k])
    if not inst.all_discrete:
        for a, b in ((grid[max(k - 1, 0)], grid[k]), (grid[k], grid[min(k + 1, len(grid) - 1)])):
            if b <= a:
                continue
            res = minimize_scalar(lambda p: -rev(p)[0], bounds=(a, b), method="bounded", options={"xatol": 1e-10})
            if -res.fun > best_r:
                best_p, best_r = float(res.x), float(-res.fun)
    return best_p, best_r
