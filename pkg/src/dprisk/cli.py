"""Command-line interface.

Every command except ``curve`` prints one JSON envelope on stdout. ``curve``
prints CSV unless ``--json`` is given. Exit codes: 0 success, 1 usage error,
2 domain error, 3 infeasible request.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import List, Optional

from . import composition, guarantees, mechanisms, planner, risk_bounds
from .errors import DomainError, InfeasibleError

FORMAT_VERSION = "dprisk-output/1"

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_INFEASIBLE = 0, 1, 2, 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.format_usage()}{self.prog}: error: {message}\n")


def _clean(obj):
    """Make a payload JSON-safe: non-finite floats become strings, tuples lists."""
    if isinstance(obj, float):
        if math.isfinite(obj):
            return obj
        return "nan" if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def _emit(out, command: str, parameters: dict, result: dict, provenance: str) -> None:
    envelope = {
        "format_version": FORMAT_VERSION,
        "command": command,
        "parameters": parameters,
        "result": result,
        "provenance": provenance,
    }
    out.write(json.dumps(_clean(envelope), sort_keys=True, indent=2, allow_nan=False))
    out.write("\n")


def _params(args, *names) -> dict:
    return {n: getattr(args, n) for n in names if getattr(args, n, None) is not None}


def _criterion(name: str) -> str:
    return name.replace("-", "_")


# ---- bounds --------------------------------------------------------------

def _pdp_from_args(args):
    """Resolve (eps', delta', provenance) from --epsilon/--delta/--rho/--delta-prime."""
    if args.rho is not None:
        if args.delta_prime is None:
            raise DomainError("--rho needs --delta-prime")
        pdp, _ = guarantees.zcdp_to_pdp_optimized(args.rho, args.delta_prime)
        return pdp.epsilon, pdp.delta, "optimized-split"
    if args.epsilon is None:
        raise DomainError("give --epsilon (with optional --delta) or --rho")
    delta = args.delta or 0.0
    if args.delta_prime is None:
        if delta > 0.0:
            raise DomainError("approximate DP needs --delta-prime")
        return args.epsilon, 0.0, "closed-form"
    return guarantees.dp_to_pdp_epsilon(args.epsilon, delta, args.delta_prime), args.delta_prime, "closed-form"


def cmd_bounds(args, out, err) -> int:
    eps_p, delta_p, prov = _pdp_from_args(args)
    ratio = risk_bounds.ratio_interval(eps_p, delta_p)
    diff = risk_bounds.diff_interval(eps_p, delta_p)
    inc, dec = risk_bounds.worst_case_priors_diff(eps_p)
    result = {
        "epsilon_prime": eps_p,
        "delta_prime": delta_p,
        "confidence": 1.0 - delta_p,
        "ratio": {"lower": ratio.lower, "upper": ratio.upper},
        "difference": {"lower": diff.lower, "upper": diff.upper},
        "worst_case_priors_diff": {"increase": inc, "decrease": dec},
    }
    if args.prior is not None:
        iv = risk_bounds.posterior_interval(eps_p, delta_p, args.prior)
        result["posterior"] = {"lower": iv.lower, "upper": iv.upper}
        if 0.0 < args.prior < 1.0:
            wc = risk_bounds.combined_worst_case(eps_p, delta_p, args.prior)
            result["combined"] = {"ratio_max": wc.ratio_max, "diff_max": wc.diff_max}
    _emit(out, "bounds", _params(args, "epsilon", "delta", "rho", "delta_prime", "prior"), result, prov)
    return EXIT_OK


# ---- convert -------------------------------------------------------------

def cmd_convert(args, out, err) -> int:
    src, dst = args.source, args.target
    prov = "closed-form"
    extra = {}
    if src == "diff_bound":
        if args.epsilon is None or args.delta is None:
            raise DomainError("diff_bound needs --epsilon and --delta")
        first, second = guarantees.diff_bound_to_pdp(args.epsilon, args.delta)
        result = {"guarantees": [guarantees.guarantee_to_dict(first),
                                 guarantees.guarantee_to_dict(second) if second else None]}
        if second is None:
            result["note"] = "eps_tilde undefined for epsilon >= 2 log 3"
        _emit(out, "convert", _params(args, "source", "target", "epsilon", "delta"), result, prov)
        return EXIT_OK

    if src == "zcdp":
        if args.rho is None:
            raise DomainError("--from zcdp needs --rho")
        if dst == "approx_dp":
            if args.delta is None:
                raise DomainError("zcdp -> approx_dp needs --delta")
            g = guarantees.zcdp_to_dp(args.rho, args.delta)
        elif dst == "pdp":
            if args.delta_prime is None:
                raise DomainError("zcdp -> pdp needs --delta-prime")
            g, via = guarantees.zcdp_to_pdp_optimized(args.rho, args.delta_prime)
            extra["via"] = guarantees.guarantee_to_dict(via)
            prov = "optimized-split"
        else:
            raise DomainError(f"cannot convert zcdp to {dst}")
    else:
        if args.epsilon is None:
            raise DomainError(f"--from {src} needs --epsilon")
        if src == "pure_dp":
            source = guarantees.PureDP(args.epsilon)
        elif src == "approx_dp":
            source = guarantees.ApproxDP(args.epsilon, args.delta or 0.0)
        else:
            source = guarantees.PDP(args.epsilon, args.delta or 0.0)
        dp = guarantees.as_approx_dp(source)
        if dst == "approx_dp":
            g = dp
        elif dst == "pdp":
            if src == "pdp":
                g = source
            elif dp.delta == 0.0 and args.delta_prime is None:
                g = guarantees.PDP(dp.epsilon, 0.0)
            else:
                if args.delta_prime is None:
                    raise DomainError("approx_dp -> pdp needs --delta-prime")
                g = guarantees.dp_to_pdp(dp.epsilon, dp.delta, args.delta_prime)
        else:
            raise DomainError(f"cannot convert {src} to {dst}")

    result = {"guarantee": guarantees.guarantee_to_dict(g), **extra}
    if isinstance(g, guarantees.PDP):
        result["posterior_upper_at_half"] = risk_bounds.posterior_interval(g.epsilon, g.delta, 0.5).upper
    _emit(out, "convert", _params(args, "source", "target", "epsilon", "delta", "rho", "delta_prime"),
          result, prov)
    return EXIT_OK


# ---- compose -------------------------------------------------------------

def cmd_compose(args, out, err) -> int:
    k, method = args.k, args.method
    params = _params(args, "method", "k", "epsilon", "delta", "rho", "total_delta", "ell")
    if method == "zcdp":
        if args.rho is None:
            raise DomainError("zcdp composition needs --rho")
        g = composition.compose_zcdp([args.rho] * k)
        _emit(out, "compose", params, {"guarantee": guarantees.guarantee_to_dict(g)}, "closed-form")
        return EXIT_OK
    if args.epsilon is None:
        raise DomainError(f"{method} composition needs --epsilon")
    eps, delta = args.epsilon, args.delta or 0.0
    result = {}
    if method == "basic":
        g = composition.compose_basic([guarantees.ApproxDP(eps, delta)] * k)
    elif method == "advanced":
        if args.total_delta is None:
            raise DomainError("advanced composition needs --total-delta")
        g = composition.compose_advanced([eps] * k, [delta] * k, args.total_delta)
    else:
        if args.ell is not None:
            g = composition.compose_optimal_homogeneous(eps, delta, k, args.ell)
        elif args.total_delta is not None:
            ell, g = composition.select_frontier_point(eps, delta, k, args.total_delta)
            result["ell"] = ell
        else:
            raise DomainError("optimal composition needs --ell or --total-delta")
        if args.frontier:
            result["frontier"] = [{"ell": i, "epsilon": e, "delta": d}
                                  for i, (e, d) in enumerate(composition.optimal_frontier(eps, delta, k))]
    result["guarantee"] = guarantees.guarantee_to_dict(g)
    _emit(out, "compose", params, result, "closed-form")
    return EXIT_OK


# ---- curve ---------------------------------------------------------------

CSV_COLUMNS = ("k", "epsilon_total", "delta_total", "epsilon_prime", "criterion_value")


def cmd_curve(args, out, err) -> int:
    if args.method == "zcdp":
        if args.rho_per is None:
            raise DomainError("zcdp curves need --rho-per")
        per = guarantees.ZCDP(args.rho_per)
    else:
        if args.eps_per is None:
            raise DomainError(f"{args.method} curves need --eps-per")
        per = guarantees.ApproxDP(args.eps_per, args.delta_per)
    criterion = _criterion(args.criterion)
    points = composition.risk_curve(per, args.method, args.k_max, args.delta_prime,
                                    criterion, args.prior, k_min=args.k_min)
    crossing = composition.first_crossing(points, args.threshold) if args.threshold is not None else None
    if args.json:
        result = {"points": [{c: getattr(p, c) for c in CSV_COLUMNS} for p in points]}
        if args.threshold is not None:
            result["first_crossing_k"] = crossing
        _emit(out, "curve", _params(args, "method", "eps_per", "delta_per", "rho_per", "k_min", "k_max",
                                    "prior", "delta_prime", "criterion", "threshold"),
              result, "optimized-split")
        return EXIT_OK
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for p in points:
        writer.writerow([p.k] + [repr(float(getattr(p, c))) for c in CSV_COLUMNS[1:]])
    out.write(buf.getvalue())
    if args.threshold is not None:
        err.write(f"first_crossing_k={crossing if crossing is not None else 'none'}\n")
    return EXIT_OK


# ---- plan ----------------------------------------------------------------

def cmd_plan(args, out, err) -> int:
    profile = planner.RiskProfile(_criterion(args.criterion), args.threshold, args.delta_prime, args.prior)
    eps_prime = profile.epsilon_prime()
    result = {"epsilon_prime": eps_prime}
    eps_total = planner.max_total_epsilon(profile, args.total_delta)
    result["epsilon_total"] = eps_total
    if args.k is not None:
        schedule = planner.ReleaseSchedule(args.k, args.per_release_delta, args.total_delta, args.method)
        result["per_release_epsilon"] = planner.per_release_epsilon(schedule, eps_total)
        if args.compare_pure:
            pure_total = planner.max_total_epsilon(profile, 0.0)
            result["pure_basic_per_release_epsilon"] = planner.per_release_epsilon(
                planner.ReleaseSchedule(args.k, 0.0, 0.0, "basic"), pure_total)
    _emit(out, "plan", _params(args, "criterion", "threshold", "delta_prime", "prior", "total_delta",
                               "k", "per_release_delta", "method"),
          result, "closed-form" if args.k is None else "bisection")
    return EXIT_OK


# ---- mech ----------------------------------------------------------------

def _pair_from_args(args) -> mechanisms.DiscreteMechanismPair:
    chosen = [x is not None for x in (args.pair_file, args.rr, args.a6)]
    if sum(chosen) != 1:
        raise DomainError("give exactly one of --pair-file, --rr, --a6")
    if args.pair_file is not None:
        with open(args.pair_file, encoding="utf-8") as fh:
            pair = mechanisms.loads_pair(fh.read())
    elif args.rr is not None:
        pair = mechanisms.randomized_response(args.rr)
    else:
        pair = mechanisms.a6_counterexample(*args.a6)
    if args.compose_k and args.compose_k > 1:
        pair = mechanisms.compose_pairs([pair] * args.compose_k)
    return pair


def cmd_mech(args, out, err) -> int:
    pair = _pair_from_args(args)
    result = {"pair": pair.to_dict(),
              "plrv": {w: [list(a) for a in mechanisms.plrv(pair, w).atoms] for w in mechanisms.WORLDS}}
    if args.epsilon is not None:
        result["tight_delta"] = mechanisms.tight_delta(pair, args.epsilon)
        result["tight_delta_tail_form"] = mechanisms.tight_delta_tail_form(pair, args.epsilon)
        if args.delta is not None:
            result["pdp_holds"] = mechanisms.pdp_holds(pair, args.epsilon, args.delta)
            result["privacy_loss_tail"] = {w: mechanisms.privacy_loss_tail(pair, args.epsilon, w)
                                           for w in mechanisms.WORLDS}
    if args.prior is not None:
        result["posterior"] = {w: [list(a) for a in mechanisms.posterior_distribution(pair, args.prior, w).atoms]
                               for w in mechanisms.WORLDS}
        if args.epsilon is not None:
            iv = risk_bounds.posterior_interval(args.epsilon, args.delta or 0.0, args.prior)
            result["violation_probability"] = {
                w: mechanisms.violation_probability(pair, args.prior, iv, w) for w in mechanisms.WORLDS}
    _emit(out, "mech", _params(args, "pair_file", "rr", "a6", "compose_k", "epsilon", "delta", "prior"),
          result, "enumeration")
    return EXIT_OK


# ---- report --------------------------------------------------------------

def cmd_report(args, out, err) -> int:
    step = args.grid_step
    n = int(round(1.0 / step))
    grid = [] if args.no_grid else [i / n for i in range(1, n)]
    report = planner.worst_case_report(args.epsilon, args.delta, args.delta_prime,
                                       prior_grid=grid, extra_priors=args.prior or ())
    _emit(out, "report", _params(args, "epsilon", "delta", "delta_prime", "prior"),
          report.to_dict(), "closed-form")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dprisk", description="Disclosure-risk statements from privacy guarantees.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("bounds", help="risk intervals for a guarantee")
    p.add_argument("--epsilon", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--rho", type=float)
    p.add_argument("--delta-prime", type=float)
    p.add_argument("--prior", type=float)
    p.set_defaults(func=cmd_bounds)

    types = ("pure_dp", "approx_dp", "pdp", "zcdp")
    p = sub.add_parser("convert", help="convert between guarantee families")
    p.add_argument("--from", dest="source", required=True, choices=types + ("diff_bound",))
    p.add_argument("--to", dest="target", default="pdp", choices=("approx_dp", "pdp"))
    p.add_argument("--epsilon", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--rho", type=float)
    p.add_argument("--delta-prime", type=float)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("compose", help="compose k identical releases")
    p.add_argument("--method", required=True, choices=("basic", "advanced", "optimal", "zcdp"))
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--rho", type=float)
    p.add_argument("--total-delta", type=float)
    p.add_argument("--ell", type=int)
    p.add_argument("--frontier", action="store_true")
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("curve", help="risk bound versus number of releases")
    p.add_argument("--method", required=True, choices=composition.METHODS)
    p.add_argument("--eps-per", type=float)
    p.add_argument("--delta-per", type=float, default=0.0)
    p.add_argument("--rho-per", type=float)
    p.add_argument("--k-min", type=int, default=1)
    p.add_argument("--k-max", type=int, required=True)
    p.add_argument("--prior", type=float)
    p.add_argument("--delta-prime", type=float, required=True)
    p.add_argument("--criterion", default="posterior-upper",
                   choices=("posterior-upper", "diff-magnitude", "ratio-upper"))
    p.add_argument("--threshold", type=float)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("plan", help="privacy budget from a risk profile")
    p.add_argument("--criterion", required=True, choices=("posterior-upper", "diff-magnitude", "ratio-upper"))
    p.add_argument("--threshold", type=float, required=True)
    p.add_argument("--delta-prime", type=float, required=True)
    p.add_argument("--prior", type=float)
    p.add_argument("--total-delta", type=float, default=0.0)
    p.add_argument("--k", type=int)
    p.add_argument("--per-release-delta", type=float, default=0.0)
    p.add_argument("--method", default="basic", choices=("basic", "advanced", "optimal"))
    p.add_argument("--compare-pure", action="store_true")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("mech", help="exact oracles on a finite mechanism pair")
    p.add_argument("--pair-file")
    p.add_argument("--rr", type=float, metavar="EPS")
    p.add_argument("--a6", type=float, nargs=2, metavar=("EPS", "DELTA"))
    p.add_argument("--compose-k", type=int)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--prior", type=float)
    p.set_defaults(func=cmd_mech)

    p = sub.add_parser("report", help="worst-case prior report")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--delta-prime", type=float, required=True)
    p.add_argument("--prior", type=float, action="append")
    p.add_argument("--grid-step", type=float, default=0.001)
    p.add_argument("--no-grid", action="store_true")
    p.set_defaults(func=cmd_report)
    return parser


def run(argv: Optional[List[str]] = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        err.write(str(exc))
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    try:
        return args.func(args, out, err)
    except InfeasibleError as exc:
        err.write(f"infeasible: {exc}\n")
        return EXIT_INFEASIBLE
    except DomainError as exc:
        err.write(f"domain error: {exc}\n")
        return EXIT_DOMAIN
    except OSError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
