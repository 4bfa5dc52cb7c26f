"""Command-line front end.

Reports go to stdout as TSV (or JSON with ``--json``), floats at 12 significant
digits.  Wall time goes to stderr so repeated runs give identical stdout.
Exit status: 0 ok, 2 bad input or usage, 3 enumeration cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Optional, Sequence

import numpy as np

from .auctions import Myerson, Vickrey, auction_revenue, optimal_reserves
from .distributions import InstanceError, SizeCapError, load_instance, regularity_report
from .ironing import iron
from .montecarlo import MonteCarlo, RevenueReport
from .oracle import brute_force_optimal
from .pricing import (
    ApproxConfig,
    PriceVector,
    best_single_price,
    price_approx,
    price_iid,
    price_nonregular,
    price_regular,
    price_vickrey_based,
    pricing_revenue,
    purchase_probabilities,
)
from .virtual import tabulate

ALGOS = ("regular", "iid", "nonregular", "approx", "vickrey", "single")


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, float) or isinstance(x, np.floating):
        return f"{float(x):.12g}"
    if isinstance(x, (list, tuple)):
        return ",".join(fmt(v) for v in x)
    return str(x)


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (float, np.floating)):
        return float(f"{float(x):.12g}")
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def emit_rows(header: Sequence[str], rows: Sequence[Sequence], as_json: bool, out=None) -> None:
    out = out or sys.stdout
    if as_json:
        out.write(json.dumps([_jsonable(dict(zip(header, r))) for r in rows], indent=2) + "\n")
        return
    out.write("\t".join(header) + "\n")
    for r in rows:
        out.write("\t".join(fmt(v) for v in r) + "\n")


def emit_object(obj: dict, as_json: bool, out=None) -> None:
    out = out or sys.stdout
    if as_json:
        out.write(json.dumps(_jsonable(obj), indent=2) + "\n")
        return
    for k, v in obj.items():
        out.write(f"{k}\t{fmt(v)}\n")


def _method(inst, args):
    if args.exact:
        return "exact"
    if inst.all_discrete:
        return "exact"
    return MonteCarlo(args.samples, args.seed)


def _compute_pricing(inst, args) -> PriceVector:
    algo = args.algo
    if algo == "regular":
        return price_regular(inst)
    if algo == "iid":
        return price_iid(inst)
    if algo == "nonregular":
        return price_nonregular(inst, _method(inst, args)).pricing
    if algo == "approx":
        return price_approx(inst, ApproxConfig(args.epsilon, args.delta, args.seed))
    if algo == "vickrey":
        return price_vickrey_based(inst, args.epsilon)
    p, _ = best_single_price(inst)
    return PriceVector((p,) * inst.n)


def _report_fields(prefix: str, rep: RevenueReport) -> dict:
    return {
        f"{prefix}_revenue": rep.revenue,
        f"{prefix}_method": rep.method,
        f"{prefix}_chi": rep.chi,
        f"{prefix}_halfwidth": rep.mc_halfwidth,
        f"{prefix}_samples": rep.samples_used,
    }


def _config(args) -> dict:
    cfg = {"seed": args.seed, "samples": args.samples, "exact": args.exact}
    if args.algo in ("approx", "vickrey"):
        cfg["epsilon"] = args.epsilon
    if args.algo == "approx":
        cfg["delta"] = args.delta
    return cfg


def cmd_price(args) -> int:
    inst = load_instance(args.instance)
    method = _method(inst, args)
    pricing = _compute_pricing(inst, args)
    prep = pricing_revenue(inst, pricing, method)
    mrep = auction_revenue(inst, Myerson(), method)
    report = {
        "instance": inst.digest(),
        "algorithm": args.algo,
        "config": ";".join(f"{k}={fmt(v)}" for k, v in _config(args).items()),
        "prices": list(pricing.prices),
    }
    report.update(_report_fields("pricing", prep))
    report["pricing_sale_prob"] = list(prep.per_index_sale_prob)
    report.update(_report_fields("myerson", mrep))
    report["ratio"] = mrep.revenue / prep.revenue if prep.revenue > 0 else float("inf")
    emit_object(report, args.json)
    return 0


def _parse_prices(text: str, n: int) -> PriceVector:
    try:
        vals = tuple(float(t) for t in text.split(","))
    except ValueError:
        raise InstanceError(f"cannot parse prices {text!r}", field="prices") from None
    if len(vals) != n:
        raise InstanceError(f"{len(vals)} prices for {n} items", field="prices")
    return PriceVector(vals)


def cmd_eval(args) -> int:
    inst = load_instance(args.instance)
    prices = _parse_prices(args.prices, inst.n)
    rep = pricing_revenue(inst, prices, _method(inst, args))
    obj = {"instance": inst.digest(), "prices": list(prices.prices)}
    obj.update(_report_fields("pricing", rep))
    obj["sale_prob"] = list(rep.per_index_sale_prob)
    obj["q"] = purchase_probabilities(inst, prices).tolist()
    emit_object(obj, args.json)
    return 0


def cmd_bench(args) -> int:
    inst = load_instance(args.instance)
    method = _method(inst, args)
    pricing = _compute_pricing(inst, args)
    reserves = tuple(optimal_reserves(inst))
    mrep = auction_revenue(inst, Myerson(), method)
    rows = []
    for name, prices, rep in (
        ("myerson", None, mrep),
        ("vickrey_r0", reserves, auction_revenue(inst, Vickrey(reserves), method)),
        (f"pricing_{args.algo}", pricing.prices, pricing_revenue(inst, pricing, method)),
    ):
        ratio = mrep.revenue / rep.revenue if rep.revenue > 0 else float("inf")
        rows.append(
            (name, list(prices) if prices else "", rep.revenue, rep.mc_halfwidth, rep.chi, ratio, rep.method, rep.samples_used)
        )
    header = ("mechanism", "prices", "revenue", "halfwidth", "chi", "myerson_ratio", "method", "samples")
    emit_rows(header, rows, args.json)
    return 0


def cmd_iron(args) -> int:
    inst = load_instance(args.instance)
    rows = []
    for i, d in enumerate(inst.items):
        if args.item is not None and i != args.item:
            continue
        ic = iron(d, args.grid)
        knots = ic.alpha_knots
        slopes = np.append(ic.slopes, np.nan)
        for a, r, s in zip(knots, ic.rbar_at_knots, slopes):
            rows.append((i, float(a), float(r), float(-s) if np.isfinite(s) else None))
    emit_rows(("item", "alpha", "rbar", "phibar_right"), rows, args.json)
    return 0


def cmd_curve(args) -> int:
    inst = load_instance(args.instance)
    rows = []
    for i, d in enumerate(inst.items):
        if args.item is not None and i != args.item:
            continue
        xs, F, phi, R = tabulate(d, args.grid)
        ph = np.asarray(iron(d).phibar(xs), dtype=float)
        for row in zip(xs, F, phi, ph, R):
            rows.append((i,) + tuple(float(x) for x in row))
    emit_rows(("item", "value", "cdf_strict", "phi", "phibar", "revenue"), rows, args.json)
    return 0


def cmd_check(args) -> int:
    inst = load_instance(args.instance)
    rows = []
    for i, d in enumerate(inst.items):
        rep = regularity_report(d, args.grid)
        rows.append((i, d.kind, rep.regular, rep.mhr, rep.witness, rep.mhr_witness))
    emit_rows(("item", "kind", "regular", "mhr", "witness", "mhr_witness"), rows, args.json)
    return 0


def cmd_bruteforce(args) -> int:
    inst = load_instance(args.instance)
    res = brute_force_optimal(inst, args.refinement)
    obj = {
        "instance": inst.digest(),
        "best_pricing": list(res.best_pricing.prices),
        "best_revenue": res.best_revenue,
        "candidates_evaluated": res.candidates_evaluated,
        "grid_description": res.grid_description,
    }
    out = sys.stdout
    if args.tsv:
        emit_object(obj, False, out)
    else:
        out.write(json.dumps(_jsonable(obj), indent=2) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vpricer", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, mc=True):
        p.add_argument("instance", help="instance JSON file")
        p.add_argument("--json", action="store_true", help="emit JSON instead of TSV")
        if mc:
            p.add_argument("--samples", type=int, default=1_000_000, help="Monte Carlo samples (default 1e6)")
            p.add_argument("--seed", type=int, default=0, help="root random seed (default 0)")
            p.add_argument("--exact", action="store_true", help="require exact enumeration")

    for name, helptext in (("price", "compute a pricing and compare it with Myerson"), ("bench", "pricing vs Myerson vs Vickrey with reserves")):
        p = sub.add_parser(name, help=helptext)
        common(p)
        p.add_argument("--algo", choices=ALGOS, default="regular")
        p.add_argument("--epsilon", type=float, default=None)
        p.add_argument("--delta", type=float, default=0.1)

    p = sub.add_parser("eval", help="revenue of a given pricing")
    common(p)
    p.add_argument("--prices", required=True, help="comma-separated prices")

    for name, helptext, grid in (("iron", "dump the ironed revenue envelope", 4096), ("curve", "tabulate phi, phibar and R", 101)):
        p = sub.add_parser(name, help=helptext)
        common(p, mc=False)
        p.add_argument("--item", type=int, default=None)
        p.add_argument("--grid", type=int, default=grid)

    p = sub.add_parser("check", help="regularity and MHR audit")
    common(p, mc=False)
    p.add_argument("--grid", type=int, default=1000)

    p = sub.add_parser("bruteforce", help="exhaustive grid search for the optimal pricing")
    p.add_argument("instance")
    p.add_argument("--refinement", type=int, default=0)
    p.add_argument("--tsv", action="store_true", help="emit key/value TSV instead of JSON")
    return parser


COMMANDS = {
    "price": cmd_price,
    "eval": cmd_eval,
    "bench": cmd_bench,
    "iron": cmd_iron,
    "curve": cmd_curve,
    "check": cmd_check,
    "bruteforce": cmd_bruteforce,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "epsilon", "unset") is None:
        args.epsilon = 0.1 if args.algo == "approx" else 0.005
    if getattr(args, "samples", 1) < 1:
        print("error: --samples must be at least 1", file=sys.stderr)
        return 2
    start = time.perf_counter()
    try:
        status = COMMANDS[args.command](args)
    except SizeCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (InstanceError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wall_time_s\t{time.perf_counter() - start:.3f}", file=sys.stderr)
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
