"""Command-line entry point: ``twentyv count | verify | curve | sample``.

Angles are read as rational multiples of pi (``1/8`` means pi/8) unless
``--radians`` is given.  Every report is deterministic for fixed arguments,
and a failed cross-check or identity exits with status 1 after writing a
JSON failure record to stderr.
"""

from __future__ import annotations

import math
import random
import sys
from fractions import Fraction

import click

from . import arctic, identities
from .caps import cap
from .enumerate import ExactSampler, count_brute, count_transfer, sample_k_histogram
from .errors import PhaseViolation, TwentyVError
from .exact6v import refined_from_6v
from .lattice import BC_NAMES, build_domain, first_hit_position
from .render import config_svg, curve_svg, to_csv, to_json
from .weights import WeightParams

EXIT_FAIL = 1
EXIT_INPUT = 2

UNIFORM_POINT = (Fraction(1, 8), Fraction(5, 8), Fraction(0))
FREE_FERMION_ETA = Fraction(1, 4)
CURVE_RESIDUAL_TOL = 1e-6
HISTOGRAM_SIGMAS = 3.0


class Failure(Exception):
    """A correctness alarm: the payload is written to stderr as JSON."""

    def __init__(self, payload: dict):
        super().__init__(payload.get("reason", "failure"))
        self.payload = payload


def parse_angle(text: str, radians: bool) -> tuple[float, str]:
    """Angle in radians plus a label that records how it was given."""
    try:
        value = Fraction(text) if not radians else float(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise click.BadParameter(f"cannot read angle {text!r}") from exc
    if radians:
        return value, f"{value!r}"
    return float(value) * math.pi, f"{value}pi"


def _emit(text: str, output) -> None:
    if output is None:
        click.echo(text, nl=False)
    else:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _fail(payload: dict) -> None:
    raise Failure({"status": "fail", **payload})


# count ----------------------------------------------------------------------------

def _routes(m: int, bc: str, brute_max: int) -> dict:
    """Refined coefficient tuples from every route that applies at this size."""
    out = {"determinant": tuple(refined_from_6v(m, bc).refined(m))}
    domain = build_domain(m, bc)
    if m <= cap("transfer"):
        out["transfer"] = tuple(count_transfer(domain).refined)
    if m <= min(brute_max, cap("brute")):
        out["brute"] = tuple(count_brute(domain).refined)
    return out


@click.group()
def main():
    """Exact counts, identities, arctic curves and samples for the 20V model with DWBC."""


@main.command("count")
@click.option("--m", "m", type=click.IntRange(min=1), required=True, help="Triangle size.")
@click.option("--bc", type=click.Choice([b.lower() for b in BC_NAMES], case_sensitive=False),
              default="dwbc3", show_default=True)
@click.option("--brute-max", type=int, default=6, show_default=True,
              help="Largest m also checked by brute force.")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
@click.option("--output", type=click.Path(dir_okay=False), default=None)
def cmd_count(m, bc, brute_max, fmt, output):
    """Total and refined counts at the combinatorial point, cross-checked across routes."""
    bc = bc.upper()
    routes = _routes(m, bc, brute_max)
    ref = routes["determinant"]
    disagree = sorted(name for name, vals in routes.items() if vals != ref)
    record = {"command": "count", "m": m, "bc": bc, "routes": sorted(routes),
              "total": str(sum(ref)), "refined": [str(v) for v in ref]}
    if disagree:
        _fail({**record, "reason": "route disagreement",
               "byRoute": {k: [str(v) for v in vals] for k, vals in sorted(routes.items())}})
    if fmt == "json":
        _emit(to_json({**record, "status": "ok"}), output)
    else:
        rows = [(k, v) for k, v in enumerate(ref, 1)] + [("total", sum(ref))]
        _emit(to_csv(["k", "count"], rows), output)


# verify ------------------------------------------------------------------------------

@main.command("verify")
@click.option("--identity", "names", multiple=True,
              type=click.Choice(sorted(identities.REGISTRY)), help="Run only these (repeatable).")
@click.option("--m", "m", type=click.IntRange(min=1), default=None,
              help="Restrict size-parametrised checks that take a list of sizes.")
@click.option("--seed", type=int, default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
@click.option("--output", type=click.Path(dir_okay=False), default=None)
def cmd_verify(names, m, seed, fmt, output):
    """Run the identity suite and report each result."""
    overrides = {"seed": seed}
    if m is not None:
        overrides["ms"] = (m,)
    results = identities.run(list(names) or None, **overrides)
    record = {"command": "verify", "results": [r.to_json() for r in results],
              "passed": all(r.passed for r in results)}
    if fmt == "json":
        _emit(to_json({**record, "status": "ok" if record["passed"] else "fail"}), output)
    else:
        rows = [(r.name, "pass" if r.passed else "fail", r.exact, r.max_residual, r.tolerance, r.checked)
                for r in results]
        _emit(to_csv(["identity", "status", "exact", "max_residual", "tolerance", "checked"], rows), output)
    if not record["passed"]:
        _fail({"command": "verify", "reason": "identity failure",
               "failed": [r.to_json() for r in results if not r.passed]})


# curve ---------------------------------------------------------------------------------

def _is_point(given: dict, point) -> bool:
    return all(given[k] == v for k, v in zip(("eta", "lambda", "mu"), point))


def _curve_report(p: WeightParams, branches, exact: dict) -> dict:
    report = {"tangency": {b.branch: b.max_tangency_residual() for b in branches}}
    if exact and _is_point(exact, UNIFORM_POINT):
        ne = next(b for b in branches if b.branch == "NE")
        report["degree10"] = max(arctic.degree10_residual(x, y) for _, x, y, *_ in ne.points)
    if exact and exact["eta"] == FREE_FERMION_ETA:
        report["junctions"] = arctic.junctions(p)
        report["diagonal"] = {k: abs(x + y) for k, (x, y) in arctic.diagonal_ends(p).items()}
    return report


def _report_worst(report: dict) -> float:
    vals = list(report["tangency"].values())
    vals.append(report.get("degree10", 0.0))
    for j in report.get("junctions", []):
        vals += [j["position_gap"], j["direction_gap"]]
    vals += list(report.get("diagonal", {}).values())
    return max(vals)


@main.command("curve")
@click.option("--eta", required=True, help="Angle, as a multiple of pi unless --radians.")
@click.option("--lambda", "lam", required=True)
@click.option("--mu", default="0", show_default=True)
@click.option("--radians", is_flag=True, help="Read angles as plain radians.")
@click.option("--nu", type=float, default=1.0, show_default=True)
@click.option("--num-points", type=click.IntRange(min=2), default=101, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json", "svg"]), default="csv", show_default=True)
@click.option("--output", type=click.Path(dir_okay=False), default=None)
def cmd_curve(eta, lam, mu, radians, nu, num_points, fmt, output):
    """The three arctic branches (NE, SE, NW) in the rescaled frame."""
    (e, e_txt), (l, l_txt), (u, u_txt) = (parse_angle(t, radians) for t in (eta, lam, mu))
    exact = {} if radians else {"eta": Fraction(eta), "lambda": Fraction(lam), "mu": Fraction(mu)}
    p = WeightParams(e, l, u, nu)
    p.require_curve_regime()
    branches = [arctic.branch(p, which, num_points) for which in arctic.BRANCHES]
    report = _curve_report(p, branches, exact)
    params = {"eta": e_txt, "lambda": l_txt, "mu": u_txt, "nu": nu}
    if fmt == "csv":
        rows = [(b.branch, *pt) for b in branches for pt in b.points]
        _emit(to_csv(["branch", "xi", "X", "Y", "A", "kappa"], rows), output)
    elif fmt == "json":
        payload = {"command": "curve", "params": params, "report": report,
                   "branches": {b.branch: {"xiRange": list(b.xi_range),
                                           "points": [list(pt) for pt in b.points]} for b in branches}}
        _emit(to_json(payload), output)
    else:
        title = f"eta={e_txt} lambda={l_txt} mu={u_txt}"
        _emit(curve_svg(branches, title=title), output)
    worst = _report_worst(report)
    if not worst <= CURVE_RESIDUAL_TOL:
        _fail({"command": "curve", "reason": "residual report above tolerance", "params": params,
               "tolerance": CURVE_RESIDUAL_TOL, "report": report})


# sample ----------------------------------------------------------------------------------

def _histogram_report(m: int, bc: str, n: int, seed: int) -> dict:
    hist = sample_k_histogram(build_domain(m, bc), n, seed)
    exact = refined_from_6v(m, bc).refined(m)
    total = sum(exact)
    rows = []
    for k, (h, z) in enumerate(zip(hist, exact), 1):
        prob = z / total
        sd = math.sqrt(n * prob * (1 - prob))
        dev = abs(h - n * prob)
        rows.append({"k": k, "observed": h, "expected": n * prob, "sigma": sd,
                     "within": dev <= HISTOGRAM_SIGMAS * sd if sd else dev == 0})
    return {"m": m, "bc": bc, "draws": n, "seed": seed, "sigmas": HISTOGRAM_SIGMAS, "bins": rows,
            "passed": all(r["within"] for r in rows)}


@main.command("sample")
@click.option("--m", "m", type=click.IntRange(min=1), required=True)
@click.option("--bc", type=click.Choice([b.lower() for b in BC_NAMES], case_sensitive=False),
              default="dwbc3", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--n", "n", type=click.IntRange(min=1), default=1, show_default=True, help="Number of draws.")
@click.option("--histogram", is_flag=True, help="Compare the k-histogram with the exact refined counts.")
@click.option("--phases", is_flag=True, help="Colour windows by frozen-phase label.")
@click.option("--window", type=click.IntRange(min=1), default=2, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["svg", "json", "csv"]), default=None,
              help="Default: json with --histogram, svg otherwise.")
@click.option("--output", type=click.Path(dir_okay=False), default=None)
def cmd_sample(m, bc, seed, n, histogram, phases, window, fmt, output):
    """Uniform exact samples at the combinatorial point."""
    bc = bc.upper()
    if histogram:
        fmt = fmt or "json"
        rep = _histogram_report(m, bc, n, seed)
        if fmt == "json":
            _emit(to_json({"command": "sample", "histogram": rep}), output)
        elif fmt == "csv":
            _emit(to_csv(["k", "observed", "expected", "sigma", "within"],
                         [tuple(r.values()) for r in rep["bins"]]), output)
        else:
            raise click.UsageError("--histogram writes json or csv")
        if not rep["passed"]:
            _fail({"command": "sample", "reason": "histogram outside the band", "histogram": rep})
        return
    fmt = fmt or "svg"
    sampler = ExactSampler(build_domain(m, bc))
    rng = random.Random(seed)
    configs = [sampler.draw(rng) for _ in range(n)]
    if fmt == "svg":
        if n != 1:
            raise click.UsageError("svg output draws a single sample; use json for --n > 1")
        _emit(config_svg(configs[0], phases=phases, window=window), output)
    elif fmt == "json":
        _emit(to_json({"command": "sample", "m": m, "bc": bc, "seed": seed,
                       "samples": [c.to_json() for c in configs]}), output)
    else:
        _emit(to_csv(["draw", "k"], [(i, first_hit_position(c)) for i, c in enumerate(configs)]), output)


def run(argv=None) -> int:
    """Invoke the command group and map failures onto exit codes."""
    try:
        main.main(args=argv, standalone_mode=False)
    except Failure as exc:
        sys.stderr.write(to_json(exc.payload))
        return EXIT_FAIL
    except PhaseViolation as exc:
        sys.stderr.write(to_json({"status": "error", "error": "PhaseViolation",
                                  "violated": exc.violated, "message": str(exc)}))
        return EXIT_INPUT
    except TwentyVError as exc:
        sys.stderr.write(to_json({"status": "error", "error": type(exc).__name__, "message": str(exc)}))
        return EXIT_INPUT
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.Abort:
        return EXIT_INPUT
    return 0


def entry() -> None:
    sys.exit(run())


__all__ = ["main", "run", "entry", "parse_angle"]
