"""Acceptance criteria 1-10, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v``; the lines are repeated in a
summary section after the run.  ``python tests/test_acceptance.py`` prints
them directly.
"""

import math
import time

import pytest

from acceptance_log import LINES
from reference import REFINED_DWBC2, REFINED_DWBC3, TOTALS
from twentyv import identities
from twentyv.enumerate import count_brute, count_transfer, sample_k_histogram
from twentyv.exact6v import counts_from_6v, refined_from_6v
from twentyv.lattice import build_domain


def _record(n, title, ok, detail):
    line = f"criterion {n:>2} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
    LINES[n] = line
    print(line)
    return ok


def _summarise(results):
    ok = all(r.passed for r in results)
    parts = []
    for r in results:
        if r.exact:
            parts.append(f"{r.name} exact {r.checked} cases")
        else:
            parts.append(f"{r.name} max {r.max_residual:.2e} <= {r.tolerance:g}")
    return ok, "; ".join(parts)


# each criterion returns (ok, detail) -----------------------------------------------

def exact_counts():
    t0 = time.perf_counter()
    bad = []
    for m in range(1, 11):
        want = TOTALS[m - 1]
        dom = build_domain(m)
        got = {"det": counts_from_6v(m), "transfer": count_transfer(dom).total}
        if m <= 7:
            got["brute"] = count_brute(dom).total
        bad += [f"{route} m={m}: {v}" for route, v in got.items() if v != want]
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 120
    return ok, f"brute m<=7, transfer and det m<=10 match the sequence; {elapsed:.1f}s" + (
        f"; mismatches {bad}" if bad else "")


def refined_tables():
    bad = []
    for m in range(1, 9):
        for bc, table in (("DWBC3", REFINED_DWBC3), ("DWBC2", REFINED_DWBC2)):
            want = table[m]
            routes = {"transfer": count_transfer(build_domain(m, bc)).refined,
                      "det": refined_from_6v(m, bc).refined(m)}
            if m <= 7:
                routes["brute"] = count_brute(build_domain(m, bc)).refined
            bad += [f"{bc} {r} m={m}" for r, v in routes.items() if tuple(v) != want]
        one = count_transfer(build_domain(m, "DWBC1")).refined
        if tuple(one) != REFINED_DWBC2[m] or tuple(refined_from_6v(m, "DWBC1").refined(m)) != REFINED_DWBC2[m]:
            bad.append(f"DWBC1 m={m}")
    return not bad, "DWBC3/DWBC2 tables m<=8 by brute, transfer and det; DWBC1 = DWBC2" + (
        f"; mismatches {bad}" if bad else "")


def structural():
    return _summarise(identities.run(["evenodd", "refined-evenodd", "top-coefficient", "reversal",
                                      "bijection"]))


def inhomogeneous():
    return _summarise([identities.check_inhomogeneous(ms=(2, 3, 4), draws=20, seed=0, tol=1e-10)])


def weight_symmetry():
    return _summarise([identities.check_weight_symmetry(10_000, seed=0, tol=1e-12)])


def combinatorial_tau():
    return _summarise([identities.check_combinatorial_tau(tol=1e-12)])


def saddle():
    return _summarise([identities.check_saddle(20, 50, seed=0, tol=1e-8),
                       identities.check_stationarity(20, 50, seed=0, tol=1e-8)])


def uniform_geometry():
    return _summarise(identities.check_uniform_geometry(tol_poly=1e-6, tol_image=1e-8))


def free_fermion():
    res = [identities.check_free_fermion_junctions(tol=1e-6)]
    res += identities.check_lambda_limits(tol_closed=1e-9, tol_hausdorff=5e-2)
    res += identities.check_mu_limits(tol_hausdorff=5e-2)
    return _summarise(res)


def sampler_histogram():
    m, draws, seed = 8, 10_000, 1
    hist = sample_k_histogram(build_domain(m), draws, seed)
    row = REFINED_DWBC3[m]
    total = sum(row)
    worst = 0.0
    for h, z in zip(hist, row):
        p = z / total
        worst = max(worst, abs(h - draws * p) / math.sqrt(draws * p * (1 - p)))
    return worst <= 3.0, f"m=8, 10^4 draws, seed 1: worst bin {worst:.2f} sigma (limit 3)"


CRITERIA = {
    1: ("exact counts", exact_counts),
    2: ("refined polynomials", refined_tables),
    3: ("structural identities", structural),
    4: ("inhomogeneous relation", inhomogeneous),
    5: ("weight symmetries", weight_symmetry),
    6: ("combinatorial-point closed forms", combinatorial_tau),
    7: ("saddle consistency", saddle),
    8: ("uniform-case geometry", uniform_geometry),
    9: ("free-fermion analyticity and limits", free_fermion),
    10: ("sampler statistics", sampler_histogram),
}


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_acceptance_criterion(n):
    title, fn = CRITERIA[n]
    ok, detail = fn()
    assert _record(n, title, ok, detail), LINES[n]


if __name__ == "__main__":
    import sys

    failed = 0
    for n in sorted(CRITERIA):
        title, fn = CRITERIA[n]
        failed += not _record(n, title, *fn())
    sys.exit(1 if failed else 0)
