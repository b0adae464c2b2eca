"""Exit criteria, one test each. Every test prints a single PASS/FAIL line.

Conjecture criteria (8, 9) print FINDING on a mismatch and only fail under
``--strict-conjectures``.
"""

import math
import warnings

import numpy as np
import pytest

from gapforge.chain import (
    ParamVector,
    build_transition,
    detailed_balance_residual,
    ma1_stationary,
    is_regular,
    params_from_weights,
    stationarity_residual,
    stationary,
)
from gapforge.cli import run
from gapforge.explorer import (
    GridSpec,
    PathSpec,
    multiplicity_census,
    random_half_pattern,
    random_regular,
    scan_grid_min,
    scan_path,
)
from gapforge.mixing import esc_report, front_probability, geometric_weights, random_weights
from gapforge.perm import build_table
from gapforge.spectral import (
    gap_report,
    kth_largest,
    n3_gap_closed,
    pairing_defect,
    similarity_certificate,
    spectrum_of,
    unweighted_gap,
)
from oracles import front_probability_exact

SEED = 7


@pytest.fixture
def verdict(capsys, request):
    strict = request.config.getoption("--strict-conjectures")

    def report(label, ok, detail="", soft=False):
        status = "PASS" if ok else ("FINDING" if soft and not strict else "FAIL")
        with capsys.disabled():
            print(f"\n[{status}] {label}: {detail}")
        if not ok and soft and not strict:
            warnings.warn(f"conjecture finding in {label}: {detail}")
            return
        assert ok, f"{label}: {detail}"

    return report


def random_corpus(n, count, rng):
    return [ParamVector.from_values(n, rng.uniform(0.01, 0.99, size=n * (n - 1) // 2)) for _ in range(count)]


def test_criterion_01_unweighted_gap(verdict):
    errs = {n: abs(gap_report(ParamVector.uniform(n)).lam - unweighted_gap(n)) for n in range(2, 7)}
    verdict("C1 unweighted gap n=2..6", max(errs.values()) <= 1e-9, f"max err {max(errs.values()):.2e} (tol 1e-9)")


def test_criterion_02_n3_closed_form(verdict):
    rng = np.random.default_rng(SEED)
    worst, n_regular, bad_mult = 0.0, 0, []
    for P in random_corpus(3, 100, rng):
        rep = gap_report(P)
        worst = max(worst, abs(rep.lam - n3_gap_closed(P)))
        if is_regular(P)[0]:
            n_regular += 1
            if rep.beta_multiplicity != 2:
                bad_mult.append(P)
    # mix in regular vectors so the multiplicity clause is exercised
    for _ in range(20):
        P = random_regular(3, rng)
        n_regular += 1
        worst = max(worst, abs(gap_report(P).lam - n3_gap_closed(P)))
        if gap_report(P).beta_multiplicity != 2:
            bad_mult.append(P)
    verdict("C2 n=3 closed form and multiplicity", worst <= 1e-9 and not bad_mult and n_regular > 0,
            f"max err {worst:.2e} (tol 1e-9), {n_regular} regular, {len(bad_mult)} with multiplicity != 2")


def test_criterion_03_stronger_a(verdict, stronger_a):
    a = gap_report(stronger_a).lam
    b = gap_report(stronger_a.replace(p12=0.6)).lam
    ok = abs(a - 0.1261) <= 5e-4 and abs(b - 0.1259) <= 5e-4 and b < a
    verdict("C3 non-monotone in p12", ok, f"lambda {a:.6f} -> {b:.6f} (targets 0.1261, 0.1259 +- 5e-4)")


def test_criterion_04_stronger_b(verdict):
    u = kth_largest(spectrum_of(ParamVector.uniform(4)), 5)
    w = kth_largest(spectrum_of(ParamVector.uniform(4).replace(p24=0.95, p14=0.95)), 5)
    ok = abs(u - 0.7887) <= 5e-4 and abs(w - 0.7944) <= 5e-4
    verdict("C4 fifth eigenvalue", ok, f"{u:.6f} and {w:.6f} (targets 0.7887, 0.7944 +- 5e-4)")


def test_criterion_05_pairing_similarity(verdict):
    rng = np.random.default_rng(SEED)
    pair = sim = trace = 0.0
    mineig = math.inf
    for n in (3, 4):
        table = build_table(n)
        for P in random_corpus(n, 100, rng):
            spec = spectrum_of(P, table)
            cert = similarity_certificate(P, table)
            pair = max(pair, pairing_defect(spec))
            mineig = min(mineig, float(spec.eigenvalues[-1]))
            sim = max(sim, cert.residual)
            trace = max(trace, abs(cert.trace_defect))
    ok = pair <= 1e-9 and mineig >= -1e-10 and sim <= 1e-8 and trace <= 1e-9
    verdict("C5 pairing/similarity", ok,
            f"pairing {pair:.1e}, min eig {mineig:.1e}, similarity {sim:.1e}, trace {trace:.1e}")


def test_criterion_06_reversibility(verdict):
    rng = np.random.default_rng(SEED)
    db = st = 0.0
    for n in (3, 4):
        table = build_table(n)
        for P in random_corpus(n, 100, rng):
            K, pi = build_transition(P, table), stationary(P, table)
            db = max(db, detailed_balance_residual(K, pi))
            st = max(st, stationarity_residual(K, pi))
    hend = 0.0
    for n in (3, 4, 5):
        table = build_table(n)
        for _ in range(20):
            w = random_weights(n, rng)
            a = stationary(params_from_weights(w), table).probs
            b = ma1_stationary(w, table).probs
            hend = max(hend, float(np.max(np.abs(a - b) / b)))
    ok = db <= 1e-13 and st <= 1e-12 and hend <= 1e-13
    verdict("C6 detailed balance/stationarity/power-form", ok,
            f"balance {db:.1e} (1e-13), stationarity {st:.1e} (1e-12), power-form {hend:.1e} (1e-13)")


def test_criterion_07_grid_scan(verdict):
    res = scan_grid_min(GridSpec(4, 0.05), parallelism=4)
    contains = any(r.values == (0.5,) * 6 for r in res.argmin)
    err = abs(res.min_lambda - unweighted_gap(4))
    verdict("C7 n=4 step 0.05 grid", contains and err <= 1e-9,
            f"{res.total} points, {len(res.argmin)} minimizers, unweighted in argmin={contains}, "
            f"min err {err:.1e}, {res.wall_time:.1f}s")


@pytest.mark.slow
def test_criterion_07b_grid_scan_n5(verdict):
    res = scan_grid_min(GridSpec(5, 0.1), parallelism=4)
    contains = any(r.values == (0.5,) * 10 for r in res.argmin)
    err = abs(res.min_lambda - unweighted_gap(5))
    verdict("C7b n=5 step 0.1 grid", contains and err <= 1e-9,
            f"{res.total} points, unweighted in argmin={contains}, min err {err:.1e}, {res.wall_time:.1f}s")


def test_criterion_08_paths(verdict):
    rng = np.random.default_rng(SEED)
    bad = []
    worst_mono = worst_conv = -math.inf
    for k in range(50):
        prof = scan_path(PathSpec(random_regular(4, rng), 11))
        worst_mono = max(worst_mono, float(np.diff(prof.lam).max()))
        worst_conv = max(worst_conv, float(-prof.second_differences.min()))
        if not (prof.nonincreasing and prof.convex):
            bad.append(k)
    verdict("C8 paths nonincreasing and convex", not bad,
            f"{50 - len(bad)}/50 paths ok; max increase {worst_mono:.1e}, max concavity {worst_conv:.1e} (tol 1e-8)",
            soft=True)


def test_criterion_09_census(verdict):
    n = 4
    problems = []
    for label, P in (("nu=n", ParamVector.uniform(n)), ("nu=n-2", ParamVector.uniform(n).replace(p14=0.6))):
        c = multiplicity_census(P)
        if c.mu != n - 1:
            problems.append(f"{label}: mu={c.mu}")
    rng = np.random.default_rng(SEED)
    seen = set()
    for k in range(10):
        c = multiplicity_census(random_half_pattern(n, int(rng.integers(1, n + 1)), rng))
        seen.add(c.half_indices)
        if not c.matches_unweighted_gap:
            problems.append(f"pattern {k}: gap {c.lam!r}")
        # mu = nu outside the two exceptional patterns
        if c.mu != c.predicted_mu:
            problems.append(f"pattern {k} {c.half_indices}: mu={c.mu}, predicted {c.predicted_mu}")
    verdict("C9 multiplicity census", not problems,
            f"patterns seen {sorted(seen)}; " + ("; ".join(problems) or "all agree"), soft=True)


def test_criterion_10_esc_ordering(verdict):
    rng = np.random.default_rng(SEED)
    worst = -math.inf
    for n in (3, 4, 5):
        table = build_table(n)
        for _ in range(50):
            rep = esc_report(random_weights(n, rng), table)
            worst = max(worst, rep.esc_ma1 - rep.esc_mtf)
    verdict("C10 ESC(MA1) <= ESC(MTF)", worst <= 1e-10, f"max esc_ma1 - esc_mtf = {worst:.3e}")


def test_criterion_11_geometric(verdict):
    vals = {n: front_probability(geometric_weights(n), n - 1, n) for n in range(3, 7)}
    exact = float(front_probability_exact((4, 2, 1), 2, 3))
    ok = all(v > 0.5 for v in vals.values()) and abs(vals[3] - 52 / 74) <= 1e-12 and abs(exact - 52 / 74) <= 1e-15
    verdict("C11 geometric front probability", ok,
            ", ".join(f"n={n}: {v:.6f}" for n, v in vals.items()) + f"; n=3 vs 52/74 err {abs(vals[3] - 52 / 74):.1e}")


def test_criterion_12_determinism(verdict, tmp_path, capsys):
    paths = {}
    for jobs in (1, 8):
        paths[jobs] = tmp_path / f"scan{jobs}.csv"
        assert run(["scan-grid", "--n", "4", "--step", "0.05", "--jobs", str(jobs), "--format", "csv",
                    "--out", str(paths[jobs]), "--quiet"]) == 0
    same_csv = paths[1].read_bytes() == paths[8].read_bytes()
    reports = []
    for _ in range(2):
        run(["verify", "--n", "4", "--p", "1,2=0.5;2,3=0.7;3,4=0.5;1,3=0.7;2,4=0.8;1,4=0.9", "--deterministic"])
        reports.append(capsys.readouterr().out)
    verdict("C12 determinism", same_csv and reports[0] == reports[1],
            f"jobs 1 vs 8 CSV identical={same_csv}, repeated report identical={reports[0] == reports[1]}")
