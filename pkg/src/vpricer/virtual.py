"""Virtual valuations, reserve prices and the revenue curve."""

from __future__ import annotations

import numpy as np

from .distributions import (
    BISECT_TOL,
    Discrete,
    ItemDistribution,
    Uniform,
    _as_float_array,
    _scalarize,
    bisect_increasing,
    regularity_report,
)


class NonRegularError(ValueError):
    """Raised when a regular-only routine receives a non-regular distribution."""


def _check_support(d: ItemDistribution, v) -> None:
    if not np.all(d.in_support(v)):
        bad = np.atleast_1d(_as_float_array(v))[~np.atleast_1d(d.in_support(v))][0]
        raise ValueError(f"value {bad!r} is outside the support of {d.kind}")


def virtual_value(d: ItemDistribution, v):
    """phi(v) = v - (1 - F(v)) / f(v); successor-gap form on discrete supports."""
    _check_support(d, v)
    return _scalarize(np.asarray(d._virtual(v), dtype=float), v)


def require_regular(d: ItemDistribution) -> None:
    rep = regularity_report(d)
    if not rep.regular:
        raise NonRegularError(
            f"{d.kind} item is not regular (virtual value drops at v={rep.witness:.6g}); iron it first"
        )


def reserve_price(d: ItemDistribution, nu):
    """Inverse virtual valuation phi^{-1}(nu), clamped to the support."""
    require_regular(d)
    return _reserve_unchecked(d, nu)


def _reserve_unchecked(d: ItemDistribution, nu):
    target = _as_float_array(nu)
    if isinstance(d, Discrete):
        phi = d.support_virtual_values
        idx = np.searchsorted(phi, target, side="left")
        # past the top virtual value nothing should sell, so step just above hi
        past_top = float(np.nextafter(d.hi, np.inf))
        out = np.where(idx < len(phi), d._v[np.minimum(idx, len(phi) - 1)], past_top)
        return _scalarize(out, nu)
    if isinstance(d, Uniform):
        return _scalarize(np.clip(0.5 * (target + d.hi), d.lo, d.hi), nu)
    lo, hi = d.lo, d.hi
    out = bisect_increasing(lambda x: d._virtual(x), target, lo, hi, tol=BISECT_TOL)
    out = np.where(target <= d._virtual(lo), lo, out)
    out = np.where(target > d._virtual(hi), hi, out)
    return _scalarize(out, nu)


def reserve_prices(inst, nu) -> np.ndarray:
    """The price vector r(nu) over a regular instance."""
    return np.array([float(reserve_price(d, nu)) for d in inst.items])


def revenue_curve(d: ItemDistribution, alpha):
    """R(alpha) = F^{-1}(alpha) (1 - alpha), with R(1) = 0 exactly."""
    a = np.clip(_as_float_array(alpha), 0.0, 1.0)
    out = np.where(a >= 1.0, 0.0, np.asarray(d.quantile(a)) * (1.0 - a))
    return _scalarize(out, alpha)


def tabulate(d: ItemDistribution, grid_n: int = 101):
    """Rows (v, F(v), phi(v), R(F(v))) for the ``curve`` command."""
    if d.is_discrete:
        xs = np.array(d.values)
        F = np.asarray(d.cdf(xs, strict=True))
    else:
        xs = np.linspace(d.lo, d.hi, grid_n)
        F = np.asarray(d.cdf(xs))
    phi = np.asarray(d._virtual(xs), dtype=float)
    R = xs * (1.0 - F)
    return xs, F, phi, R
