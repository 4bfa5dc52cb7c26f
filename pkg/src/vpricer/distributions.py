"""Single-item value distributions, product instances and regularity audits.

Every distribution is an immutable value object exposing vectorised
``cdf``/``pdf``/``quantile`` and a kind-specific virtual valuation.  Discrete
laws carry an explicit support; continuous laws come from a closed catalogue
(uniform, truncated exponential, piecewise-linear CDF) plus the piecewise
revenue-linear law produced by ironing.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Any, Iterable, Optional, Sequence

import numpy as np

MASS_TOL = 1e-12
BISECT_TOL = 1e-10
BISECT_MAXITER = 200


class InstanceError(ValueError):
    """Malformed distribution or instance data."""

    def __init__(self, message: str, item: Optional[int] = None, field: Optional[str] = None):
        self.item = item
        self.field = field
        self.detail = message
        where = []
        if item is not None:
            where.append(f"item {item}")
        if field is not None:
            where.append(f"field '{field}'")
        prefix = (", ".join(where) + ": ") if where else ""
        super().__init__(prefix + message)


class SizeCapError(RuntimeError):
    """An exact computation would exceed its enumeration cap."""


def _as_float_array(x) -> np.ndarray:
    return np.asarray(x, dtype=float)


def _scalarize(out: np.ndarray, like):
    return float(out) if np.ndim(like) == 0 else out


def bisect_increasing(fn, target, lo, hi, tol: float = BISECT_TOL, maxiter: int = BISECT_MAXITER):
    """Vectorised bisection for ``fn(v) = target`` with ``fn`` non-decreasing on ``[lo, hi]``.

    Targets outside ``[fn(lo), fn(hi)]`` clamp to the corresponding endpoint.
    """
    target = _as_float_array(target)
    a = np.full(target.shape, float(lo))
    b = np.full(target.shape, float(hi))
    for _ in range(maxiter):
        if np.all(b - a <= tol):
            break
        mid = 0.5 * (a + b)
        below = fn(mid) < target
        a = np.where(below, mid, a)
        b = np.where(below, b, mid)
    return 0.5 * (a + b)


# Distributions -------------------------------------------------------------


@dataclass(frozen=True)
class ItemDistribution:
    """Base class; concrete kinds are frozen dataclasses with tuple fields."""

    kind = "abstract"
    is_discrete = False

    @property
    def lo(self) -> float:
        raise NotImplementedError

    @property
    def hi(self) -> float:
        raise NotImplementedError

    def cdf(self, v, strict: bool = False):
        raise NotImplementedError

    def pdf(self, v):
        raise NotImplementedError

    def quantile(self, alpha):
        """Generic inverse CDF by bisection; kinds override with closed forms."""
        alpha = np.clip(_as_float_array(alpha), 0.0, 1.0)
        out = bisect_increasing(lambda x: self.cdf(x), alpha, self.lo, self.hi)
        return _scalarize(out, alpha)

    def _virtual(self, v):
        v = _as_float_array(v)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = v - (1.0 - self.cdf(v)) / self.pdf(v)
        return out

    def _hazard(self, v):
        v = _as_float_array(v)
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.pdf(v) / (1.0 - self.cdf(v))

    def in_support(self, v) -> np.ndarray:
        v = _as_float_array(v)
        tol = 1e-12 * max(1.0, abs(self.hi))
        return (v >= self.lo - tol) & (v <= self.hi + tol)

    def to_spec(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Discrete(ItemDistribution):
    values: tuple
    masses: tuple

    kind = "discrete"
    is_discrete = True

    def __post_init__(self):
        values = tuple(float(x) for x in self.values)
        masses = tuple(float(x) for x in self.masses)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "masses", masses)
        if not values:
            raise InstanceError("support must not be empty", field="values")
        if len(values) != len(masses):
            raise InstanceError(
                f"{len(values)} values but {len(masses)} masses", field="masses"
            )
        if not all(math.isfinite(x) for x in values + masses):
            raise InstanceError("values and masses must be finite", field="values")
        if any(x <= 0 for x in values):
            raise InstanceError("values must be strictly positive", field="values")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise InstanceError("values must be strictly increasing", field="values")
        if any(m <= 0 for m in masses):
            raise InstanceError("every mass must be positive", field="masses")
        total = math.fsum(masses)
        if abs(total - 1.0) > MASS_TOL:
            raise InstanceError(f"masses sum {total:.12g} ≠ 1", field="masses")

    @cached_property
    def _v(self) -> np.ndarray:
        return np.array(self.values)

    @cached_property
    def _m(self) -> np.ndarray:
        return np.array(self.masses)

    @cached_property
    def _cum(self) -> np.ndarray:
        # weak CDF at each support point; pinned to 1 at the top
        cum = np.cumsum(self._m)
        cum[-1] = 1.0
        return cum

    @cached_property
    def _tail(self) -> np.ndarray:
        # P(V >= v_k), with a trailing 0 so that _tail[k + 1] = 1 - F_weak(v_k)
        tail = np.cumsum(self._m[::-1])[::-1]
        tail[0] = 1.0
        return np.append(tail, 0.0)

    @cached_property
    def support_virtual_values(self) -> np.ndarray:
        v, m, tail = self._v, self._m, self._tail
        gaps = np.diff(v)
        phi = v.copy()
        phi[:-1] = v[:-1] - gaps * tail[1:-1] / m[:-1]
        return phi

    @property
    def lo(self) -> float:
        return self.values[0]

    @property
    def hi(self) -> float:
        return self.values[-1]

    def cdf(self, v, strict: bool = False):
        x = _as_float_array(v)
        idx = np.searchsorted(self._v, x, side="left" if strict else "right")
        padded = np.concatenate(([0.0], self._cum))
        return _scalarize(padded[idx], v)

    def pmf(self, v):
        x = _as_float_array(v)
        idx = self.support_index(x, strict=False)
        out = np.where(idx >= 0, self._m[np.maximum(idx, 0)], 0.0)
        return _scalarize(out, v)

    def pdf(self, v):
        raise TypeError("discrete distributions have no density; use pmf")

    def quantile(self, alpha):
        a = np.clip(_as_float_array(alpha), 0.0, 1.0)
        idx = np.searchsorted(self._cum, a, side="left")
        out = self._v[np.minimum(idx, len(self.values) - 1)]
        return _scalarize(out, alpha)

    def support_index(self, v, strict: bool = True) -> np.ndarray:
        """Index of each ``v`` in the support; -1 (or ValueError when strict) if absent."""
        x = _as_float_array(v)
        idx = np.clip(np.searchsorted(self._v, x), 0, len(self.values) - 1)
        hit = np.isclose(self._v[idx], x, rtol=1e-12, atol=0.0)
        lower = np.clip(idx - 1, 0, None)
        hit_lower = np.isclose(self._v[lower], x, rtol=1e-12, atol=0.0)
        idx = np.where(hit, idx, np.where(hit_lower, lower, -1))
        if strict and np.any(idx < 0):
            bad = np.atleast_1d(x)[np.atleast_1d(idx) < 0][0]
            raise ValueError(f"value {bad!r} is not a support point")
        return idx

    def _virtual(self, v):
        return self.support_virtual_values[self.support_index(v)]

    def _hazard(self, v):
        # mass per unit value over the upper tail, so that phi = v - 1/hazard
        k = self.support_index(v)
        gaps = np.append(np.diff(self._v), np.nan)
        with np.errstate(divide="ignore", invalid="ignore"):
            return self._m[k] / (gaps[k] * self._tail[k + 1])

    def in_support(self, v) -> np.ndarray:
        return self.support_index(v, strict=False) >= 0

    def to_spec(self) -> dict:
        return {"kind": "discrete", "values": list(self.values), "masses": list(self.masses)}


def _check_interval(lo: float, hi: float) -> None:
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise InstanceError("support bounds must be finite", field="lo")
    if lo < 0:
        raise InstanceError("lo must be non-negative", field="lo")
    if not lo < hi:
        raise InstanceError(f"need lo < hi, got lo={lo} hi={hi}", field="hi")


@dataclass(frozen=True)
class Uniform(ItemDistribution):
    low: float
    high: float

    kind = "uniform"

    def __post_init__(self):
        object.__setattr__(self, "low", float(self.low))
        object.__setattr__(self, "high", float(self.high))
        _check_interval(self.low, self.high)

    @property
    def lo(self) -> float:
        return self.low

    @property
    def hi(self) -> float:
        return self.high

    def cdf(self, v, strict: bool = False):
        x = _as_float_array(v)
        out = np.clip((x - self.low) / (self.high - self.low), 0.0, 1.0)
        return _scalarize(out, v)

    def pdf(self, v):
        x = _as_float_array(v)
        out = np.full(x.shape, 1.0 / (self.high - self.low))
        return _scalarize(out, v)

    def quantile(self, alpha):
        a = np.clip(_as_float_array(alpha), 0.0, 1.0)
        return _scalarize(self.low + a * (self.high - self.low), alpha)

    def _virtual(self, v):
        return 2.0 * _as_float_array(v) - self.high

    def to_spec(self) -> dict:
        return {"kind": "uniform", "lo": self.low, "hi": self.high}


@dataclass(frozen=True)
class TruncatedExponential(ItemDistribution):
    rate: float
    low: float
    high: float

    kind = "exp_trunc"

    def __post_init__(self):
        for name in ("rate", "low", "high"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not (math.isfinite(self.rate) and self.rate > 0):
            raise InstanceError("rate must be positive", field="rate")
        _check_interval(self.low, self.high)

    @property
    def lo(self) -> float:
        return self.low

    @property
    def hi(self) -> float:
        return self.high

    @cached_property
    def _z(self) -> float:
        return -math.expm1(-self.rate * (self.high - self.low))

    def cdf(self, v, strict: bool = False):
        x = np.clip(_as_float_array(v), self.low, self.high)
        out = -np.expm1(-self.rate * (x - self.low)) / self._z
        return _scalarize(np.clip(out, 0.0, 1.0), v)

    def pdf(self, v):
        x = _as_float_array(v)
        out = self.rate * np.exp(-self.rate * (x - self.low)) / self._z
        return _scalarize(out, v)

    def quantile(self, alpha):
        a = np.clip(_as_float_array(alpha), 0.0, 1.0)
        out = self.low - np.log1p(-a * self._z) / self.rate
        return _scalarize(np.clip(out, self.low, self.high), alpha)

    def _virtual(self, v):
        x = _as_float_array(v)
        return x + np.expm1(-self.rate * (self.high - x)) / self.rate

    def _hazard(self, v):
        x = _as_float_array(v)
        with np.errstate(divide="ignore"):
            return -self.rate / np.expm1(-self.rate * (self.high - x))

    def to_spec(self) -> dict:
        return {"kind": "exp_trunc", "rate": self.rate, "lo": self.low, "hi": self.high}


@dataclass(frozen=True)
class PiecewiseLinearCDF(ItemDistribution):
    """CDF interpolating ``knots = ((v_0, 0), ..., (v_k, 1))`` linearly."""

    knots: tuple

    kind = "pl_cdf"

    def __post_init__(self):
        try:
            knots = tuple((float(v), float(F)) for v, F in self.knots)
        except (TypeError, ValueError):
            raise InstanceError("knots must be [value, cdf] pairs", field="knots") from None
        object.__setattr__(self, "knots", knots)
        if len(knots) < 2:
            raise InstanceError("need at least two knots", field="knots")
        vs = [k[0] for k in knots]
        Fs = [k[1] for k in knots]
        if not all(math.isfinite(x) for x in vs + Fs):
            raise InstanceError("knots must be finite", field="knots")
        if vs[0] < 0:
            raise InstanceError("values must be non-negative", field="knots")
        if any(b <= a for a, b in zip(vs, vs[1:])):
            raise InstanceError("knot values must be strictly increasing", field="knots")
        if any(b <= a for a, b in zip(Fs, Fs[1:])):
            raise InstanceError("knot CDF values must be strictly increasing", field="knots")
        if abs(Fs[0]) > MASS_TOL or abs(Fs[-1] - 1.0) > MASS_TOL:
            raise InstanceError("CDF must run from 0 to 1", field="knots")

    @cached_property
    def _kv(self) -> np.ndarray:
        return np.array([k[0] for k in self.knots])

    @cached_property
    def _kF(self) -> np.ndarray:
        F = np.array([k[1] for k in self.knots])
        F[0], F[-1] = 0.0, 1.0
        return F

    @cached_property
    def _dens(self) -> np.ndarray:
        return np.diff(self._kF) / np.diff(self._kv)

    @property
    def lo(self) -> float:
        return self.knots[0][0]

    @property
    def hi(self) -> float:
        return self.knots[-1][0]

    def cdf(self, v, strict: bool = False):
        x = _as_float_array(v)
        return _scalarize(np.interp(x, self._kv, self._kF), v)

    def pdf(self, v):
        x = _as_float_array(v)
        piece = np.clip(np.searchsorted(self._kv, x, side="right") - 1, 0, len(self._dens) - 1)
        return _scalarize(self._dens[piece], v)

    def quantile(self, alpha):
        a = np.clip(_as_float_array(alpha), 0.0, 1.0)
        return _scalarize(np.interp(a, self._kF, self._kv), alpha)

    def to_spec(self) -> dict:
        return {"kind": "pl_cdf", "knots": [list(k) for k in self.knots]}


@dataclass(frozen=True)
class RevenueLinear(ItemDistribution):
    """Law whose revenue curve is the concave polyline through ``knots = ((alpha, R), ...)``.

    With ``g(alpha) = R(alpha) / (1 - alpha)`` the CDF is ``g^{-1}``.  On every
    segment but the last the virtual value is the negated segment slope; the last
    segment ends at ``(1, 0)``, where ``g`` is flat, so its mass sits as an atom
    on the top value.
    """

    knots: tuple

    kind = "pw_revenue"

    def __post_init__(self):
        try:
            knots = [(float(a), float(r)) for a, r in self.knots]
        except (TypeError, ValueError):
            raise InstanceError("knots must be [alpha, revenue] pairs", field="knots") from None
        if len(knots) < 2:
            raise InstanceError("need at least two knots", field="knots")
        if abs(knots[0][0]) > MASS_TOL or abs(knots[-1][0] - 1.0) > MASS_TOL or knots[-1][1] != 0.0:
            raise InstanceError("knots must start at alpha=0 and end at (1, 0)", field="knots")
        knots[0] = (0.0, knots[0][1])
        knots[-1] = (1.0, 0.0)
        if any(b[0] <= a[0] for a, b in zip(knots, knots[1:])):
            raise InstanceError("alpha knots must be strictly increasing", field="knots")
        # R(0) = lo may be zero; interior knots need positive revenue
        if knots[0][1] < 0 or any(r <= 0 for _, r in knots[1:-1]):
            raise InstanceError("revenue must be positive before alpha=1", field="knots")
        slopes = [(b[1] - a[1]) / (b[0] - a[0]) for a, b in zip(knots, knots[1:])]
        scale = max(1.0, max(abs(s) for s in slopes))
        if any(s1 > s0 + 1e-9 * scale for s0, s1 in zip(slopes, slopes[1:])):
            raise InstanceError("revenue polyline must be concave", field="knots")
        # collinear neighbours would make g flat away from the top
        merged = [knots[0]]
        for k in range(1, len(knots) - 1):
            s_in = (knots[k][1] - merged[-1][1]) / (knots[k][0] - merged[-1][0])
            s_out = (knots[k + 1][1] - knots[k][1]) / (knots[k + 1][0] - knots[k][0])
            if s_in - s_out > 1e-12 * scale:
                merged.append(knots[k])
        merged.append(knots[-1])
        object.__setattr__(self, "knots", tuple(merged))

    @cached_property
    def _a(self) -> np.ndarray:
        return np.array([k[0] for k in self.knots])

    @cached_property
    def _r(self) -> np.ndarray:
        return np.array([k[1] for k in self.knots])

    @cached_property
    def _slope(self) -> np.ndarray:
        return np.diff(self._r) / np.diff(self._a)

    @cached_property
    def _intercept(self) -> np.ndarray:
        return self._r[:-1] - self._slope * self._a[:-1]

    @cached_property
    def _vbreak(self) -> np.ndarray:
        # value at the start of each segment
        return self._r[:-1] / (1.0 - self._a[:-1])

    @property
    def lo(self) -> float:
        return float(self._vbreak[0])

    @property
    def hi(self) -> float:
        return float(self._vbreak[-1])

    @property
    def top_mass(self) -> float:
        return float(1.0 - self._a[-2])

    def _segment(self, x: np.ndarray) -> np.ndarray:
        return np.clip(np.searchsorted(self._vbreak, x, side="right") - 1, 0, len(self._slope) - 1)

    def cdf(self, v, strict: bool = False):
        x = _as_float_array(v)
        j = self._segment(x)
        a, b = self._intercept[j], self._slope[j]
        with np.errstate(divide="ignore", invalid="ignore"):
            alpha = (x - a) / (x + b)
        alpha = np.where(x < self.lo, 0.0, alpha)
        top = np.where(strict, x > self.hi, x >= self.hi)
        alpha = np.where(top, 1.0, np.where(x >= self.hi, self._a[-2], alpha))
        return _scalarize(np.clip(alpha, 0.0, 1.0), v)

    def pdf(self, v):
        x = _as_float_array(v)
        j = self._segment(x)
        a, b = self._intercept[j], self._slope[j]
        out = (a + b) / (x + b) ** 2
        return _scalarize(np.where(j == len(self._slope) - 1, 0.0, out), v)

    def quantile(self, alpha):
        al = np.clip(_as_float_array(alpha), 0.0, 1.0)
        j = np.clip(np.searchsorted(self._a, al, side="right") - 1, 0, len(self._slope) - 1)
        with np.errstate(divide="ignore", invalid="ignore"):
            v = (self._intercept[j] + self._slope[j] * al) / (1.0 - al)
        v = np.where(j == len(self._slope) - 1, self.hi, v)
        return _scalarize(np.clip(v, self.lo, self.hi), alpha)

    def _virtual(self, v):
        x = _as_float_array(v)
        j = self._segment(x)
        return np.where(x >= self.hi, x, -self._slope[j])

    def to_spec(self) -> dict:
        return {"kind": "pw_revenue", "knots": [list(k) for k in self.knots]}


# Instances -----------------------------------------------------------------


@dataclass(frozen=True)
class ProductInstance:
    items: tuple

    def __post_init__(self):
        items = tuple(self.items)
        object.__setattr__(self, "items", items)
        if not items:
            raise InstanceError("instance needs at least one item", field="items")
        for i, d in enumerate(items):
            if not isinstance(d, ItemDistribution):
                raise InstanceError("not an ItemDistribution", item=i)

    @property
    def n(self) -> int:
        return len(self.items)

    @property
    def iid(self) -> bool:
        return all(d == self.items[0] for d in self.items[1:])

    @property
    def all_discrete(self) -> bool:
        return all(d.is_discrete for d in self.items)

    @property
    def range_ratio(self) -> float:
        lo = min(d.lo for d in self.items)
        hi = max(d.hi for d in self.items)
        return math.inf if lo <= 0 else hi / lo

    def support_size(self) -> int:
        if not self.all_discrete:
            raise ValueError("support size is only defined for discrete instances")
        return math.prod(len(d.values) for d in self.items)

    def to_spec(self) -> dict:
        return {"items": [d.to_spec() for d in self.items]}

    def digest(self) -> str:
        blob = json.dumps(self.to_spec(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def item_from_spec(spec: Any, index: Optional[int] = None) -> ItemDistribution:
    if not isinstance(spec, dict):
        raise InstanceError("item must be a JSON object", item=index)
    kind = spec.get("kind")

    def need(name):
        if name not in spec:
            raise InstanceError("missing field", item=index, field=name)
        return spec[name]

    def num(name):
        x = need(name)
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise InstanceError("expected a number", item=index, field=name)
        return float(x)

    def seq(name):
        x = need(name)
        if not isinstance(x, list):
            raise InstanceError("expected a list", item=index, field=name)
        return x

    try:
        if kind == "discrete":
            values, masses = seq("values"), seq("masses")
            for name, xs in (("values", values), ("masses", masses)):
                if any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in xs):
                    raise InstanceError("expected a list of numbers", item=index, field=name)
            return Discrete(tuple(values), tuple(masses))
        if kind == "uniform":
            return Uniform(num("lo"), num("hi"))
        if kind == "exp_trunc":
            return TruncatedExponential(num("rate"), num("lo"), num("hi"))
        if kind == "pl_cdf":
            return PiecewiseLinearCDF(tuple(tuple(k) for k in seq("knots")))
        if kind == "pw_revenue":
            return RevenueLinear(tuple(tuple(k) for k in seq("knots")))
    except InstanceError as exc:
        if exc.item is None:
            raise InstanceError(exc.detail, item=index, field=exc.field) from None
        raise
    except TypeError:
        raise InstanceError("malformed knots", item=index, field="knots") from None
    raise InstanceError(f"unknown kind {kind!r}", item=index, field="kind")


def parse_instance(text: str) -> ProductInstance:
    """Parse instance-file JSON into a validated :class:`ProductInstance`."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"malformed JSON: {exc.msg} (line {exc.lineno})") from None
    if not isinstance(doc, dict) or "items" not in doc:
        raise InstanceError("expected an object with an 'items' list", field="items")
    items = doc["items"]
    if not isinstance(items, list):
        raise InstanceError("expected a list", field="items")
    if not items:
        raise InstanceError("item list is empty", field="items")
    return ProductInstance(tuple(item_from_spec(s, i) for i, s in enumerate(items)))


def load_instance(path) -> ProductInstance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def cdf(d: ItemDistribution, v, mode: str = "weak"):
    if mode not in ("weak", "strict"):
        raise ValueError(f"mode must be 'weak' or 'strict', got {mode!r}")
    return d.cdf(v, strict=mode == "strict")


def quantile(d: ItemDistribution, alpha):
    return d.quantile(alpha)


def sample(d: ItemDistribution, stream: np.random.Generator, size=None):
    """Inverse-transform draw(s) from ``d`` using ``stream``."""
    return d.quantile(stream.random(size))


def sample_profiles(inst: ProductInstance, count: int, stream: np.random.Generator) -> np.ndarray:
    u = stream.random((count, inst.n))
    return np.column_stack([d.quantile(u[:, i]) for i, d in enumerate(inst.items)])


# Regularity ----------------------------------------------------------------


@dataclass(frozen=True)
class RegularityReport:
    regular: bool
    mhr: bool
    witness: Optional[float] = None
    mhr_witness: Optional[float] = None
    audited: int = 0


def _first_drop(xs: np.ndarray, fs: np.ndarray, rtol: float) -> Optional[float]:
    ok = np.isfinite(fs)
    xs, fs = xs[ok], fs[ok]
    if len(fs) < 2:
        return None
    scale = np.maximum(1.0, np.maximum(np.abs(fs[:-1]), np.abs(fs[1:])))
    drops = np.nonzero(fs[1:] < fs[:-1] - rtol * scale)[0]
    return float(xs[drops[0] + 1]) if len(drops) else None


def audit_points(d: ItemDistribution, grid_n: int) -> np.ndarray:
    if d.is_discrete:
        return np.array(d.values)
    return np.linspace(d.lo, d.hi, grid_n)


@lru_cache(maxsize=1024)
def regularity_report(d: ItemDistribution, grid_n: int = 1000) -> RegularityReport:
    """Audit monotonicity of the virtual value and of the hazard rate."""
    if grid_n < 2:
        raise ValueError("grid_n must be at least 2")
    xs = audit_points(d, grid_n)
    rtol = 1e-12 if d.is_discrete else 1e-9
    phi = np.asarray(d._virtual(xs), dtype=float)
    witness = _first_drop(xs, phi, rtol)
    # the top point has an empty upper tail
    haz = np.asarray(d._hazard(xs[:-1]), dtype=float)
    mhr_witness = _first_drop(xs[:-1], haz, rtol)
    regular = witness is None
    mhr = mhr_witness is None and regular
    return RegularityReport(regular, mhr, witness, mhr_witness, len(xs))


def is_regular(d: ItemDistribution) -> bool:
    return regularity_report(d).regular


def discrete(values: Iterable[float], masses: Iterable[float]) -> Discrete:
    return Discrete(tuple(values), tuple(masses))


def iid(d: ItemDistribution, n: int) -> ProductInstance:
    return ProductInstance((d,) * n)
