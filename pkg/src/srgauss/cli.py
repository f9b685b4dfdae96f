"""Config-driven experiment runner.

Subcommands read a flat INI-style config (one experiment per file, section
headers with key = value lines) and emit schema-stable CSV or JSON reports;
every emitted number is reproducible from (config, seed) alone.

Exit codes: 0 ok, 2 config error, 3 numeric error, 4 budget refusal.
"""

from __future__ import annotations

import argparse
import configparser
import math
import sys

from . import report, sources
from .asymptotics import (
    ModerateQuery,
    RateQuery,
    jep_exponent,
    jep_exponent_lambda1,
    lambda_for_rates,
    moderate_constants,
    region_contains,
    second_order_plan,
    sep_exponents,
    sep_second_order,
)
from .codec import SchemeConfig
from .core import iid_nonexcess_exponent, spherical_cap_exponent
from .errors import BudgetError, ConfigError, NumericError
from .montecarlo import estimate, estimate_phi, estimate_psi, wilson_interval
from .sources import SourceSpec

DEFAULT_BUDGET = 10**10

_KIND_ALIASES = {"sp": "spherical", "spherical": "spherical", "iid": "iid"}


def _load(path: str) -> configparser.ConfigParser:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",))
    read = cp.read(path)
    if not read:
        raise ConfigError(f"config file not found: {path}")
    return cp


def _require(cp, section: str) -> configparser.SectionProxy:
    if not cp.has_section(section):
        raise ConfigError(f"config requires a [{section}] section")
    return cp[section]


def _floats(raw: str) -> list[float]:
    return [float(tok) for tok in raw.split()]


def _ints(raw: str) -> list[int]:
    return [int(tok) for tok in raw.split()]


def _kind(raw: str) -> str:
    k = raw.strip().lower()
    if k not in _KIND_ALIASES:
        raise ConfigError(f"codebook kind must be spherical|sp|iid, got {raw!r}")
    return _KIND_ALIASES[k]


def build_source(cp) -> SourceSpec:
    sec = _require(cp, "source")
    family = sec.get("family", "gaussian").strip().lower()
    if family == "gaussian":
        return sources.gaussian(sec.getfloat("sigma2", 1.0))
    if family == "uniform":
        return sources.uniform(sec.getfloat("half_width"))
    if family == "laplace":
        return sources.laplace(sec.getfloat("scale"))
    if family == "two_point":
        return sources.two_point(sec.getfloat("magnitude"))
    if family == "discrete":
        return sources.discrete(_floats(sec.get("values")), _floats(sec.get("probs")))
    raise ConfigError(f"unknown source family {family!r}")


def _distortions(cp) -> tuple[float, float]:
    sec = _require(cp, "distortion")
    return sec.getfloat("d1"), sec.getfloat("d2")


def _rate_axes(cp) -> tuple[list[float], list[float]]:
    sec = _require(cp, "rates")
    if "r1" in sec:
        r1s = _floats(sec.get("r1"))
        r2s = _floats(sec.get("r2"))
    else:
        r1s = _axis(sec, "r1")
        r2s = _axis(sec, "r2")
    if not r1s or not r2s:
        raise ConfigError("rate grid is empty")
    return r1s, r2s


def _axis(sec, name: str) -> list[float]:
    lo = sec.getfloat(f"{name}_min")
    hi = sec.getfloat(f"{name}_max")
    steps = sec.getint(f"{name}_steps")
    if lo is None or hi is None or steps is None:
        raise ConfigError(f"rates section needs {name} or {name}_min/{name}_max/{name}_steps")
    if steps < 1:
        raise ConfigError(f"requires {name}_steps >= 1, got {steps}")
    if steps == 1:
        return [lo]
    return [lo + (hi - lo) * i / (steps - 1) for i in range(steps)]


def _exponent_row(source, q: RateQuery) -> dict:
    reg = region_contains(q)
    row = {
        "r1": q.r1,
        "r2": q.r2,
        "region": reg.location,
        "eta": reg.eta,
        "lambda": lambda_for_rates(q.r2, q.d1, q.d2).value,
    }
    if q.r1 > 0:
        jep = jep_exponent(source, q)
        sep = sep_exponents(source, q)
        row.update(
            alpha_star=jep.auxiliaries["alpha_star"],
            jep_exponent=jep.value,
            jep_positive=jep.positive[0],
            sep_case=sep.case_tag,
            sep_e1=sep.values[0],
            sep_e2=sep.values[1],
            sep_e1_positive=sep.positive[0],
            sep_e2_positive=sep.positive[1],
        )
    l1 = jep_exponent_lambda1(source, q) if q.r1 > 0 else None
    if l1 is not None:
        row.update(l1_case=l1.case_tag, l1_exponent=l1.value, l1_positive=l1.positive[0])
    return row


ASYMPTOTICS_COLUMNS = [
    "r1", "r2", "region", "eta", "lambda", "alpha_star",
    "jep_exponent", "jep_positive",
    "l1_case", "l1_exponent", "l1_positive",
    "sep_case", "sep_e1", "sep_e2", "sep_e1_positive", "sep_e2_positive",
    "log_m1", "log_m2", "so_case", "sep_l1", "sep_l2",
    "v_jep", "v1", "v2",
]


def cmd_asymptotics(cp, args) -> tuple[list[dict], list[str]]:
    source = build_source(cp)
    d1, d2 = _distortions(cp)
    r1s, r2s = _rate_axes(cp)
    extra = {}
    columns = ASYMPTOTICS_COLUMNS[:16]
    if cp.has_section("second_order"):
        sec = cp["second_order"]
        plan = second_order_plan(
            source, d1, d2,
            sec.getfloat("lambda", 1.0),
            sec.getfloat("epsilon"),
            sec.getint("n"),
            c_log=sec.getfloat("c_log", 0.0),
            kind2=_kind(sec.get("kind2", "spherical")),
        )
        eps = sec.getfloat("epsilon")
        l1, l2 = sep_second_order(source, d1, d2, eps, eps)
        extra.update(log_m1=plan.log_m1, log_m2=plan.log_m2, so_case=plan.case,
                     sep_l1=l1, sep_l2=l2)
        columns = ASYMPTOTICS_COLUMNS[:21]
    if cp.has_section("moderate"):
        sec = cp["moderate"]
        mq = ModerateQuery(
            sec.getfloat("theta1"), sec.getfloat("theta2", 0.0),
            sec.getfloat("rho_exponent", 0.25),
        )
        v_jep, v1, v2 = moderate_constants(source, mq)
        extra.update(v_jep=v_jep, v1=v1, v2=v2)
        columns = ASYMPTOTICS_COLUMNS
    rows = []
    for r1 in r1s:
        for r2 in r2s:
            row = _exponent_row(source, RateQuery(r1, r2, source.sigma2, d1, d2))
            row.update(extra)
            rows.append(row)
    return rows, columns


SIMULATE_COLUMNS = [
    "point", "n", "kind1", "kind2", "m1", "m2", "trials", "seed", "method",
    "precision", "count_joint", "count1", "count2",
    "jep_hat", "jep_lo", "jep_hi",
    "sep1_hat", "sep1_lo", "sep1_hi",
    "sep2_hat", "sep2_lo", "sep2_hi",
    "partial", "target_eps", "pred_jep_exponent",
]

PSIPHI_COLUMNS = [
    "point", "n", "kind", "quantity", "norm_arg", "power", "distortion",
    "trials", "seed", "estimate", "lo", "hi", "pred_rate",
]


def _scheme_points(cp, source, args):
    sec = _require(cp, "simulate")
    ns = _ints(sec.get("n"))
    d1, d2 = _distortions(cp)
    kinds = [
        tuple(_kind(k) for k in pair.split(","))
        for pair in sec.get("kinds", "spherical,spherical").split()
    ]
    sizing = sec.get("sizing", "plan").strip().lower()
    points = []
    for n in ns:
        for kind1, kind2 in kinds:
            extra = {"target_eps": None, "pred_jep_exponent": None}
            if sizing == "plan":
                so = _require(cp, "second_order")
                lam = so.getfloat("lambda", 1.0)
                plan = second_order_plan(
                    source, d1, d2, lam, so.getfloat("epsilon"), n,
                    c_log=so.getfloat("c_log", 0.0), kind2=kind2,
                )
                m1, m2 = plan.m1, plan.m2
                extra["target_eps"] = so.getfloat("epsilon")
            elif sizing == "rates":
                rsec = _require(cp, "rates")
                r1 = rsec.getfloat("r1")
                r2 = rsec.getfloat("r2")
                lam_choice = lambda_for_rates(r2, d1, d2)
                if lam_choice.degenerate:
                    raise ConfigError(
                        "rate-based sizing requires r2 > 0 (degenerate power split)"
                    )
                lam = lam_choice.value
                m1 = max(1, math.ceil(math.exp(n * r1)))
                r2_eff = min(r2, 0.5 * math.log(lam * d1 / d2))
                m2 = max(1, math.ceil(math.exp(n * r2_eff)))
                q = RateQuery(r1, r2, source.sigma2, d1, d2)
                extra["pred_jep_exponent"] = jep_exponent(source, q).value
            elif sizing == "explicit":
                lam = sec.getfloat("lambda", 1.0)
                m1 = sec.getint("m1")
                m2 = sec.getint("m2")
            else:
                raise ConfigError(f"sizing must be plan|rates|explicit, got {sizing!r}")
            cfg = SchemeConfig(
                n=n, m1=m1, m2=m2, kind1=kind1, kind2=kind2,
                d1=d1, d2=d2, lam=lam, sigma2=source.sigma2,
            )
            points.append((cfg, extra))
    return points, sec


def cmd_simulate(cp, args) -> tuple[list[dict], list[str]]:
    source = build_source(cp)
    sec = _require(cp, "simulate")
    mode = sec.get("mode", "scheme").strip().lower()
    seed = args.seed if args.seed is not None else sec.getint("seed", 0)
    budget = args.budget if args.budget is not None else DEFAULT_BUDGET

    if mode in ("psi", "phi"):
        ns = _ints(sec.get("n"))
        kind = _kind(sec.get("kind", "iid"))
        arg = sec.getfloat("norm_arg")
        power = sec.getfloat("power")
        dist = sec.getfloat("distortion")
        trials = sec.getint("trials")
        cost = sum(trials * n for n in ns)
        if cost > budget:
            raise BudgetError(
                f"estimated {cost} distance multiply-adds exceed budget {budget}"
            )
        if kind == "iid":
            pred = iid_nonexcess_exponent(arg, power, dist)
        else:
            pred = spherical_cap_exponent(arg, power, dist)
        rows = []
        for i, n in enumerate(ns):
            fn = estimate_psi if mode == "psi" else estimate_phi
            est = fn(kind, n, arg, power, dist, trials, seed)
            lo, hi = wilson_interval(round(est * trials), trials)
            rows.append(
                {
                    "point": i, "n": n, "kind": kind, "quantity": mode,
                    "norm_arg": arg, "power": power, "distortion": dist,
                    "trials": trials, "seed": seed,
                    "estimate": est, "lo": lo, "hi": hi, "pred_rate": pred,
                }
            )
        return rows, PSIPHI_COLUMNS

    if mode != "scheme":
        raise ConfigError(f"simulate mode must be scheme|psi|phi, got {mode!r}")

    points, sec = _scheme_points(cp, source, args)
    trials = sec.getint("trials")
    method = sec.get("method", "direct").strip().lower()
    precision = sec.get("precision", "double").strip().lower()
    workers = args.workers
    cost = sum(trials * (cfg.m1 + cfg.m2) * cfg.n for cfg, _ in points)
    if cost > budget:
        raise BudgetError(
            f"estimated {cost} distance multiply-adds exceed budget {budget}; "
            "raise --budget to proceed"
        )
    rows = []
    for i, (cfg, extra) in enumerate(points):
        res = estimate(
            cfg, source, trials=trials, seed=seed, workers=workers,
            method=method, precision=precision,
        )
        jep_lo, jep_hi = res.jep_interval
        s1_lo, s1_hi = res.sep1_interval
        s2_lo, s2_hi = res.sep2_interval
        rows.append(
            {
                "point": i, "n": cfg.n, "kind1": cfg.kind1, "kind2": cfg.kind2,
                "m1": cfg.m1, "m2": cfg.m2, "trials": res.trials, "seed": seed,
                "method": method, "precision": precision,
                "count_joint": res.count_joint, "count1": res.count1,
                "count2": res.count2,
                "jep_hat": res.jep_hat, "jep_lo": jep_lo, "jep_hi": jep_hi,
                "sep1_hat": res.sep1_hat, "sep1_lo": s1_lo, "sep1_hi": s1_hi,
                "sep2_hat": res.sep2_hat, "sep2_lo": s2_lo, "sep2_hi": s2_hi,
                "partial": res.partial,
                "target_eps": extra["target_eps"],
                "pred_jep_exponent": extra["pred_jep_exponent"],
            }
        )
    return rows, SIMULATE_COLUMNS


EXPONENT_GRID_COLUMNS = [
    "r1", "r2", "region", "lambda",
    "jep_exponent", "jep_positive", "l1_exponent", "l1_case",
    "sep_e1", "sep_e2", "zero_edge",
]


def cmd_exponent_grid(cp, args) -> tuple[list[dict], list[str]]:
    source = build_source(cp)
    d1, d2 = _distortions(cp)
    r1s, r2s = _rate_axes(cp)
    values = {}
    rows = []
    for i, r1 in enumerate(r1s):
        for j, r2 in enumerate(r2s):
            q = RateQuery(r1, r2, source.sigma2, d1, d2)
            reg = region_contains(q)
            if r1 > 0:
                jep = jep_exponent(source, q).value
                l1 = jep_exponent_lambda1(source, q)
                sep = sep_exponents(source, q)
                row = {
                    "r1": r1, "r2": r2, "region": reg.location,
                    "lambda": lambda_for_rates(r2, d1, d2).value,
                    "jep_exponent": jep, "jep_positive": jep > 0,
                    "l1_exponent": l1.value, "l1_case": l1.case_tag,
                    "sep_e1": sep.values[0], "sep_e2": sep.values[1],
                }
            else:
                jep = 0.0
                row = {
                    "r1": r1, "r2": r2, "region": reg.location,
                    "lambda": lambda_for_rates(r2, d1, d2).value,
                    "jep_exponent": 0.0, "jep_positive": False,
                    "l1_exponent": 0.0, "l1_case": "iii",
                    "sep_e1": 0.0, "sep_e2": 0.0,
                }
            values[(i, j)] = jep
            rows.append(row)
    # mark the edge of the zero set: zero cells adjacent to a positive cell
    k = 0
    for i in range(len(r1s)):
        for j in range(len(r2s)):
            edge = False
            if values[(i, j)] == 0.0:
                for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                    if values.get((i + di, j + dj), 0.0) > 0.0:
                        edge = True
                        break
            rows[k]["zero_edge"] = edge
            k += 1
    return rows, EXPONENT_GRID_COLUMNS


COMPARE_COLUMNS = [
    "row_kind", "point", "n", "estimate", "lo", "hi",
    "prediction", "gap", "per_n_exponent",
    "slope", "slope_stderr", "slope_target", "within_2se",
]


def cmd_compare(cp, args) -> tuple[list[dict], list[str]]:
    sec = _require(cp, "compare")
    sim_path = sec.get("simulation")
    if not sim_path:
        raise ConfigError("compare requires simulation = <path to a simulate report>")
    sim_rows = report.read_report(sim_path)
    if not sim_rows:
        raise ConfigError(f"empty simulation input: {sim_path}")
    quantity = sec.get("quantity", "estimate").strip().lower()
    col = {
        "jep": "jep_hat", "sep1": "sep1_hat", "sep2": "sep2_hat",
        "estimate": "estimate",
    }.get(quantity)
    if col is None:
        raise ConfigError(f"quantity must be jep|sep1|sep2|estimate, got {quantity!r}")
    if col not in sim_rows[0] or sim_rows[0].get(col) is None:
        raise ConfigError(
            f"mismatched report: column {col!r} absent from {sim_path}"
        )

    have_rate = sim_rows[0].get("pred_rate") is not None
    have_eps = sim_rows[0].get("target_eps") is not None
    have_exp = sim_rows[0].get("pred_jep_exponent") is not None
    if not (have_rate or have_eps or have_exp):
        raise ConfigError("simulation report carries no prediction columns")

    rows = []
    pts = []
    for i, r in enumerate(sim_rows):
        n = r["n"]
        est = float(r[col])
        if have_rate:
            rate = float(r["pred_rate"])
            prediction = math.exp(-n * rate)
            target = rate
        elif have_exp:
            target = float(r["pred_jep_exponent"])
            prediction = math.exp(-n * target)
        else:
            prediction = float(r["target_eps"])
            target = None
        lo = r.get("lo", r.get(col.replace("_hat", "_lo")))
        hi = r.get("hi", r.get(col.replace("_hat", "_hi")))
        per_n = -math.log(est) / n if est > 0 else None
        rows.append(
            {
                "row_kind": "point", "point": i, "n": n, "estimate": est,
                "lo": lo, "hi": hi, "prediction": prediction,
                "gap": est - prediction, "per_n_exponent": per_n,
            }
        )
        if est > 0:
            pts.append((n, -math.log(est), target))

    slope_row = {"row_kind": "slope", "point": None}
    ns = sorted({p[0] for p in pts})
    if len(ns) >= 2:
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        xbar = sum(xs) / len(xs)
        ybar = sum(ys) / len(ys)
        sxx = sum((x - xbar) ** 2 for x in xs)
        slope = sum((x - xbar) * (y - ybar) for x, y in zip(xs, ys)) / sxx
        intercept = ybar - slope * xbar
        rss = sum((y - slope * x - intercept) ** 2 for x, y in zip(xs, ys))
        dof = len(xs) - 2
        stderr = math.sqrt(rss / dof / sxx) if dof > 0 else math.nan
        target = pts[0][2]
        slope_row.update(
            slope=slope, slope_stderr=stderr, slope_target=target,
            within_2se=(
                abs(slope - target) <= 2 * stderr
                if target is not None and math.isfinite(stderr)
                else None
            ),
        )
    rows.append(slope_row)
    return rows, COMPARE_COLUMNS


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="srgauss",
        description="Mismatched successive refinement: simulators and calculators",
    )
    parser.add_argument("command", choices=["asymptotics", "simulate", "exponent-grid", "compare"])
    parser.add_argument("--config", required=True, help="experiment config file")
    parser.add_argument("--seed", type=int, default=None, help="master seed (u64)")
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--out", default=None, help="output path (default stdout)")
    parser.add_argument("--format", default="csv", choices=["csv", "json"])
    parser.add_argument("--budget", type=int, default=None,
                        help="compute budget in distance multiply-adds")
    args = parser.parse_args(argv)

    handlers = {
        "asymptotics": cmd_asymptotics,
        "simulate": cmd_simulate,
        "exponent-grid": cmd_exponent_grid,
        "compare": cmd_compare,
    }
    try:
        cp = _load(args.config)
        rows, columns = handlers[args.command](cp, args)
        report.write(rows, columns, args.format, args.out)
    except BudgetError as exc:
        print(f"budget refusal: {exc}", file=sys.stderr)
        return 4
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (NumericError, ArithmeticError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
