import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gapforge.chain import ParamVector, is_regular
from gapforge.errors import SizeLimitError, ValidationError
from gapforge.explorer import (
    GridSpec,
    PathSpec,
    multiplicity_census,
    predicted_multiplicity,
    random_half_pattern,
    random_regular,
    regular_grid,
    scan_grid_min,
    scan_path,
    scan_points,
)
from gapforge.spectral import gap_report, unweighted_gap


def brute_grid(n, step):
    M = round(1 / step)
    values = [k / M for k in range(1, M)]
    out = set()
    for combo in itertools.product(values, repeat=n * (n - 1) // 2):
        if is_regular(ParamVector.from_values(n, combo))[0]:
            out.add(combo)
    return out


def test_gridspec_validation():
    for bad in (0.0, 0.6, 0.3, -0.1):
        with pytest.raises(ValidationError):
            GridSpec(3, bad)
    assert GridSpec(3, 0.05).denominator == 20
    assert GridSpec(3, 1 / 6).denominator == 6


def test_n3_quarter_grid():
    pts = [tuple(P.values()) for P in regular_grid(GridSpec(3, 0.25))]
    # canonical order (p12, p13, p23)
    expected = {(.5, .5, .5), (.5, .75, .5), (.5, .75, .75), (.75, .75, .5), (.75, .75, .75)}
    assert len(pts) == 5 and set(pts) == expected
    assert pts == sorted(pts)


@pytest.mark.parametrize("n,step", [(3, 0.05), (3, 0.1), (3, 1 / 6), (4, 0.25), (4, 1 / 6)])
def test_grid_matches_brute_force(n, step):
    got = [tuple(P.values()) for P in regular_grid(GridSpec(n, step))]
    assert len(got) == len(set(got))
    assert set(got) == brute_grid(n, step)
    assert tuple([0.5] * (n * (n - 1) // 2)) in set(got)


def test_scan_n3_quarter():
    res = scan_grid_min(GridSpec(3, 0.25))
    assert res.total == 5
    assert res.min_lambda == pytest.approx(0.25, abs=1e-9)
    arg = {r.values for r in res.argmin}
    assert arg == {(.5, .5, .5), (.5, .75, .5)}


def test_scan_n2_all_one():
    res = scan_grid_min(GridSpec(2, 0.1))
    assert res.total == 5
    assert all(abs(r.lam - 1) < 1e-12 for r in res.records)
    assert len(res.argmin) == 5


def test_scan_records_reproducible():
    res = scan_grid_min(GridSpec(4, 0.25))
    for r in res.records:
        assert r.lam == gap_report(ParamVector.from_values(4, r.values)).lam
    assert res.min_lambda == min(r.lam for r in res.records)
    assert res.argmin


def test_scan_determinism_across_workers(monkeypatch):
    import gapforge.explorer as ex
    # small chunks so eight workers all get work
    monkeypatch.setattr(ex, "CHUNK", 64)
    spec = GridSpec(4, 0.1)
    a = scan_grid_min(spec, parallelism=1)
    b = scan_grid_min(spec, parallelism=8)
    assert a.to_csv() == b.to_csv()


def test_scan_cap():
    with pytest.raises(SizeLimitError):
        scan_grid_min(GridSpec(6, 0.5))
    with pytest.raises(ValidationError):
        scan_points(3, [], 1)


def test_scan_csv_layout():
    lines = scan_grid_min(GridSpec(3, 0.25)).to_csv().splitlines()
    assert lines[0] == "p12,p13,p23,lambda,multiplicity"
    assert len(lines) == 6


def test_path_endpoints(stronger_a):
    prof = scan_path(PathSpec(stronger_a, 11))
    assert prof.lam[0] == pytest.approx(gap_report(stronger_a).lam, abs=1e-14)
    assert prof.lam[-1] == pytest.approx(unweighted_gap(4), abs=1e-9)
    assert prof.nonincreasing and prof.convex
    assert len(prof.second_differences) == 9


def test_path_unweighted_constant():
    prof = scan_path(PathSpec(ParamVector.uniform(4), 5))
    assert np.ptp(prof.lam) <= 1e-12


def test_path_rejects_irregular():
    with pytest.raises(ValidationError, match="not regular"):
        PathSpec(ParamVector.uniform(3).replace(p12=0.4))
    with pytest.raises(ValidationError):
        PathSpec(ParamVector.uniform(3), steps=1)


def test_path_csv(stronger_a):
    lines = scan_path(PathSpec(stronger_a, 3)).to_csv().splitlines()
    assert lines[0] == "t,lambda,second_difference"
    assert lines[1].endswith(",") and not lines[2].endswith(",")


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 5), st.integers(0, 2**32 - 1), st.floats(0, 1))
def test_regular_set_convex_along_path(n, seed, t):
    P = random_regular(n, np.random.default_rng(seed))
    assert is_regular(P)[0]
    assert is_regular(PathSpec(P).point(t), tol=1e-15)[0]


def test_census_examples():
    c = multiplicity_census(ParamVector.uniform(4))
    assert (c.nu, c.mu, c.predicted_mu, c.matches_unweighted_gap) == (4, 3, 3, True)
    c = multiplicity_census(ParamVector.uniform(4).replace(p14=0.9))
    assert c.half_indices == (2, 3) and c.nu == 2 and c.matches_unweighted_gap
    # nu = n - 2 is exception (ii)
    assert c.predicted_mu == 3 and c.mu == 3
    c = multiplicity_census(ParamVector.uniform(4).replace(p14=0.6))
    assert c.predicted_mu == 3 and c.mu == 3


def test_predicted_multiplicity_rule():
    assert predicted_multiplicity(5, 5) == 4
    assert predicted_multiplicity(5, 3) == 4
    assert predicted_multiplicity(5, 2) == 2
    assert predicted_multiplicity(5, 0) == 0


def test_census_no_half_index(stronger_a):
    c = multiplicity_census(stronger_a)
    assert c.nu == 0 and not c.matches_unweighted_gap


@pytest.mark.parametrize("index", [1, 2, 3, 4])
def test_half_pattern_sampler(index, rng):
    for _ in range(5):
        P = random_half_pattern(4, index, rng)
        assert is_regular(P)[0]
        assert index in multiplicity_census(P).half_indices
