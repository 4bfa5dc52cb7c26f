"""Myerson's optimal auction, its reserve variant, and Vickrey with personal reserves."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .distributions import ProductInstance
from .ironing import IronedCurve, _bisect_pred, iron, ironed_inverse, virtual_value_law
from .montecarlo import MonteCarlo, RevenueReport, enumerate_expectation, monte_carlo


@dataclass(frozen=True)
class AuctionOutcome:
    winner: Optional[int]
    payment: float = 0.0

    def __post_init__(self):
        if self.winner is None and self.payment != 0.0:
            raise ValueError("payment without a winner")


@dataclass(frozen=True)
class Myerson:
    reserve: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.reserve) and self.reserve >= 0):
            raise ValueError("Myerson reserve must be a finite non-negative virtual price")


@dataclass(frozen=True)
class Vickrey:
    prices: tuple

    def __post_init__(self):
        object.__setattr__(self, "prices", tuple(float(p) for p in self.prices))


Mechanism = Union[Myerson, Vickrey]


def _curves(inst: ProductInstance) -> list:
    return [iron(d) for d in inst.items]


def _check_profiles(inst: ProductInstance, v: np.ndarray) -> np.ndarray:
    v = np.atleast_2d(np.asarray(v, dtype=float))
    if v.shape[1] != inst.n:
        raise ValueError(f"valuation vector has {v.shape[1]} entries, instance has {inst.n} items")
    return v


def _phibar_matrix(curves: Sequence[IronedCurve], v: np.ndarray) -> np.ndarray:
    return np.column_stack([np.asarray(c.phibar(v[:, i]), dtype=float) for i, c in enumerate(curves)])


def _myerson_evaluator(inst: ProductInstance, reserve: float):
    curves = _curves(inst)
    floor = max(reserve, 0.0)

    def evaluate(v: np.ndarray):
        N, n = v.shape
        phib = _phibar_matrix(curves, v)
        masked = np.where(phib >= floor, phib, -np.inf)
        who = np.argmax(masked, axis=1)
        has = np.isfinite(masked[np.arange(N), who])
        who = np.where(has, who, -1)
        pay = np.zeros(N)
        cols = np.arange(n)
        for i in range(n):
            rows = np.nonzero(who == i)[0]
            if not len(rows):
                continue
            ph = phib[rows]
            c_strict = np.max(np.where(cols < i, ph, -np.inf), axis=1)
            c_weak = np.maximum(floor, np.max(np.where(cols > i, ph, -np.inf), axis=1))
            pay[rows] = _threshold(curves[i], v[rows, i], c_strict, c_weak)
        return pay, who

    return evaluate


def _threshold(ic: IronedCurve, won_at: np.ndarray, c_strict: np.ndarray, c_weak: np.ndarray) -> np.ndarray:
    """Lowest bid b with phibar(b) > c_strict and phibar(b) >= c_weak."""
    if ic.is_discrete:
        phis = ic.support_phibar
        idx = np.maximum(
            np.searchsorted(phis, c_strict, side="right"),
            np.searchsorted(phis, c_weak, side="left"),
        )
        return ic.source._v[np.minimum(idx, len(phis) - 1)]

    def wins(b):
        ph = ic.phibar(b)
        return (ph > c_strict) & (ph >= c_weak)

    # the winning bid itself always wins, so bisect on [lo, bid]
    b = _bisect_pred(wins, ic.lo, won_at.astype(float))
    return np.where(wins(np.full(won_at.shape, ic.lo)), ic.lo, b)


def _vickrey_evaluator(prices: np.ndarray):
    def evaluate(v: np.ndarray):
        N = v.shape[0]
        bids = np.where(v >= prices, v, -np.inf)
        who = np.argmax(bids, axis=1)
        has = np.isfinite(bids[np.arange(N), who])
        others = bids.copy()
        others[np.arange(N), who] = -np.inf
        pay = np.maximum(prices[who], others.max(axis=1))
        who = np.where(has, who, -1)
        return np.where(has, pay, 0.0), who

    return evaluate


def _outcome(evaluate, v) -> AuctionOutcome:
    pay, who = evaluate(v)
    w = int(who[0])
    return AuctionOutcome(None, 0.0) if w < 0 else AuctionOutcome(w, float(pay[0]))


def myerson_outcome(inst: ProductInstance, vvec, reserve: float = 0.0) -> AuctionOutcome:
    """Allocate to the highest ironed virtual value at or above ``max(reserve, 0)``."""
    v = _check_profiles(inst, vvec)
    for i, d in enumerate(inst.items):
        if not d.in_support(v[0, i]):
            raise ValueError(f"value {v[0, i]!r} is outside the support of item {i}")
    return _outcome(_myerson_evaluator(inst, Myerson(reserve).reserve), v)


def vickrey_reserve_outcome(prices, vvec) -> AuctionOutcome:
    p = np.asarray(getattr(prices, "prices", prices), dtype=float)
    v = np.atleast_2d(np.asarray(vvec, dtype=float))
    if v.shape[1] != len(p):
        raise ValueError(f"{len(p)} reserve prices but {v.shape[1]} bids")
    return _outcome(_vickrey_evaluator(p), v)


def mechanism_evaluator(inst: ProductInstance, mech: Mechanism):
    if isinstance(mech, Myerson):
        return _myerson_evaluator(inst, mech.reserve)
    if isinstance(mech, Vickrey):
        if len(mech.prices) != inst.n:
            raise ValueError(f"{len(mech.prices)} reserve prices for {inst.n} bidders")
        return _vickrey_evaluator(np.array(mech.prices))
    raise TypeError(f"unknown mechanism {mech!r}")


def auction_revenue(inst: ProductInstance, mech: Mechanism, method="exact") -> RevenueReport:
    """Expected revenue of ``mech`` by exact enumeration or seeded Monte Carlo."""
    evaluate = mechanism_evaluator(inst, mech)
    if method == "exact":
        return enumerate_expectation(inst, evaluate)
    if isinstance(method, MonteCarlo):
        return monte_carlo(inst, evaluate, method)
    raise ValueError(f"method must be 'exact' or MonteCarlo(...), got {method!r}")


def optimal_reserves(inst: ProductInstance) -> np.ndarray:
    """r(0) per item, taking the left ironed inverse on non-regular items."""
    return np.array([float(ironed_inverse(iron(d), 0.0, "left")) for d in inst.items])


def expected_virtual_surplus(inst: ProductInstance, reserve: float = 0.0, ironed: bool = True) -> float:
    """E[virtual value of Myerson's winner], enumerated exactly."""
    curves = _curves(inst)
    evaluate = _myerson_evaluator(inst, reserve)

    def surplus(v):
        _, who = evaluate(v)
        if ironed:
            vals = _phibar_matrix(curves, v)
        else:
            vals = np.column_stack(
                [np.asarray(d._virtual(v[:, i]), dtype=float) for i, d in enumerate(inst.items)]
            )
        got = vals[np.arange(len(who)), np.maximum(who, 0)]
        return np.where(who >= 0, got, 0.0), who

    return enumerate_expectation(inst, surplus).revenue


def myerson_revenue_quadrature(inst: ProductInstance, grid_n: int = 100_000) -> float:
    """E[max(0, max_i phibar_i(v_i))] from the per-item laws of phibar(V)."""
    laws = []
    for d in inst.items:
        atoms, masses = virtual_value_law(d, grid_n)
        order = np.argsort(atoms, kind="stable")
        laws.append((atoms[order], np.cumsum(masses[order])))
    knots = np.unique(np.concatenate([[0.0]] + [a[a > 0] for a, _ in laws]))
    prod = np.ones(len(knots))
    for atoms, cum in laws:
        k = np.searchsorted(atoms, knots, side="right")
        prod *= np.where(k > 0, cum[np.maximum(k - 1, 0)], 0.0)
    prod = np.minimum(prod, 1.0)
    return float(np.sum(np.diff(knots) * (1.0 - prod[:-1])))
