"""
@file: handlers/estimate.py
@description: Подкоманда estimate - оценка сложности для параметров RD/MinRank, пресеты таблиц и кривые
@dependencies: services/estimator.py, utils/report_utils.py
@created: 2025-01-21
"""

import asyncio
import logging
from typing import Any, Dict, List

from handlers.common import add_output_options, emit
from services import estimator
from utils.error_handler import UsageError, handle_errors
from utils.report_utils import ESTIMATE_COLUMNS, ReportUtils

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("estimate", help="оценка битовой сложности")
    parser.add_argument("target", nargs="?", choices=["rd", "minrank", "sweep", "curve"], default=None)
    parser.add_argument("--preset", choices=list(estimator.PRESETS), default=None)
    parser.add_argument("--q", type=int, default=2)
    parser.add_argument("--m", type=int, default=None)
    parser.add_argument("--n", type=int, default=None)
    parser.add_argument("--k", type=int, default=None)
    parser.add_argument("--K", type=int, default=None)
    parser.add_argument("--r", type=int, default=None)
    parser.add_argument("--omega", type=float, default=None)
    parser.add_argument("--solver", choices=list(estimator.SOLVER_POLICIES), default="best")
    parser.add_argument("--regime", choices=list(estimator.REGIMES), default="auto")
    parser.add_argument("--ratio-m-n", dest="ratio", type=float, default=1.18, help="n/m для кривых")
    mode = parser.add_mutually_exclusive_group()
    mode.add_argument("--n2k", dest="mode", action="store_const", const="n2k")
    mode.add_argument("--kn", dest="mode", action="store_const", const="kn")
    parser.add_argument("--n-min", type=int, default=20)
    parser.add_argument("--n-max", type=int, default=250)
    add_output_options(parser)
    parser.set_defaults(handler=handle, mode="n2k")


def _require(args, *names: str) -> None:
    missing = [f"--{name}" for name in names if getattr(args, name) is None]
    if missing:
        raise UsageError(f"estimate {args.target} requires {', '.join(missing)}")


def report_rows(report: estimator.ComplexityReport) -> List[Dict[str, Any]]:
    return [ReportUtils.plan_row(report.scheme, report.params, report.ratio, plan) for plan in report.plans]


def _minimum_row(report: estimator.ComplexityReport, published: Dict[str, Any]) -> Dict[str, Any]:
    minimum = report.minimum
    row = ReportUtils.plan_row(report.scheme, report.params, report.ratio, minimum) if minimum else {
        "scheme": report.scheme, "params": report.params}
    row["published"] = published
    return row


def preset_output(name: str, args) -> str:
    rows = estimator.estimate_preset(name, args.omega)
    payload = {"preset": name, "rows": [
        {"scheme": e["scheme"], "report": e["report"].to_dict(), "published": e["published"]} for e in rows]}
    if name == "new-params":
        table = []
        for entry in rows:
            report = entry["report"]
            for plan in report.plans:
                line = ReportUtils.plan_row(entry["scheme"], report.params, None, plan)
                table.append(line)
        return ReportUtils.render(ESTIMATE_COLUMNS, table, args.format, payload)
    table = [_minimum_row(entry["report"], entry["published"]) for entry in rows]
    return ReportUtils.render(ESTIMATE_COLUMNS + ["published"], table, args.format, payload)


def compute(args) -> str:
    if args.preset:
        return preset_output(args.preset, args)
    if args.target == "rd":
        _require(args, "m", "n", "k", "r")
        report = estimator.optimize(estimator.RdProblem(args.m, args.n, args.k, args.r, args.q), args.omega,
                                    args.solver)
    elif args.target == "minrank":
        _require(args, "m", "n", "K", "r")
        report = estimator.optimize(
            estimator.MinRankProblem(args.q, args.m, args.n, args.K, args.r, regime=args.regime), args.omega
        )
    elif args.target == "sweep":
        _require(args, "r")
        points = estimator.sweep(args.r, args.ratio, args.mode, args.n_min, args.n_max, args.omega)
        rows = [{"n": n, "log2_cost": round(cost, 2)} for n, cost in points]
        fmt = "csv" if args.format == "text" else args.format
        return ReportUtils.render(["n", "log2_cost"], rows, fmt, {"mode": args.mode, "r": args.r, "rows": rows})
    elif args.target == "curve":
        _require(args, "r")
        points = estimator.theoretical_maxmin_curve(args.r, args.ratio, args.n_min, args.n_max, args.omega)
        rows = [{"n": n, "m": m, "k": k, "log2_cost": round(cost, 2)} for n, m, k, cost in points]
        fmt = "csv" if args.format == "text" else args.format
        return ReportUtils.render(["n", "m", "k", "log2_cost"], rows, fmt, {"r": args.r, "rows": rows})
    else:
        raise UsageError("estimate needs a target (rd, minrank, sweep, curve) or --preset")

    rows = report_rows(report)
    if report.minimum is not None:
        rows.append(ReportUtils.plan_row(report.scheme or "minimum", report.params, report.ratio, report.minimum))
        rows[-1]["formula"] = f"minimum: {rows[-1]['formula']}"
    return ReportUtils.render(ESTIMATE_COLUMNS, rows, args.format, report.to_dict())


@handle_errors("estimate", reraise=True)
async def handle(args) -> int:
    loop = asyncio.get_event_loop()
    text = await loop.run_in_executor(None, lambda: compute(args))
    await emit(text, args.out)
    return 0
