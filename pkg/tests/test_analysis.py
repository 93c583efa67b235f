import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hardy_w.analysis import (
    BoundReport,
    asymptotic_config,
    asymptotic_oracle_check,
    asymptotic_scaling_check,
    asymptotic_vectors,
    batch_violation,
    draw_feasible_w,
    exact_pairwise_dot_sum,
    ghz_w_comparison,
    is_unimodal,
    oracle_equivalence_check,
    sample_feasible_bound_check,
)
from hardy_w.geometric_model import EPS_W, violation_probability_from_w
from hardy_w.optimizer import OptOptions, perfect_w_table
from hardy_w.quantum_core import Amplitudes, ValidationError

# (1/2)^2 / ((1 + 1/12)^2 (1 + 25/12)) reduced by hand
CONSTRUCTION_N3 = Fraction(432, 6253)


def test_construction_n3_vectors():
    vecs = asymptotic_vectors(3)
    assert vecs.v == pytest.approx([-2 / 3, -2 / 3, 1 / 3], abs=1e-15)
    assert vecs.u == pytest.approx(0.5, abs=1e-15)
    assert vecs.u_i == pytest.approx([-1 / 6, -1 / 6, 5 / 6], abs=1e-15)


def test_construction_n3_value_and_oracle():
    _, entry = asymptotic_config(3)
    assert entry.probability == pytest.approx(float(CONSTRUCTION_N3), abs=1e-15)
    oracle, residual = asymptotic_oracle_check(3)
    assert abs(oracle - float(CONSTRUCTION_N3)) <= 1e-10
    assert residual <= 1e-10


def test_construction_w_free():
    w_free, entry = asymptotic_config(4)
    assert np.allclose(w_free, [[1 / 3, 0]] * 3)
    assert violation_probability_from_w(Amplitudes.uniform(4), w_free) == pytest.approx(entry.probability, abs=1e-12)


@pytest.mark.parametrize("n", [3, 7, 100, 10_000])
def test_construction_identities(n):
    vecs = asymptotic_vectors(n)
    assert np.allclose(vecs.v[:-1], -(n - 1) / n, atol=1e-14)
    assert vecs.v[-1] == pytest.approx(1 / n, abs=1e-14)
    assert vecs.u == pytest.approx((n - 2) / (n - 1), abs=1e-14)
    assert np.all(np.abs(vecs.u_i[:-1] + 1 / (n * (n - 1))) <= 1e-14)
    assert abs(vecs.u_i[-1] - (n * n - n - 1) / (n * (n - 1))) <= 1e-14


def test_construction_n10_below_optimum():
    _, entry = asymptotic_config(10)
    assert entry.probability == pytest.approx(0.0725, abs=1e-4)
    assert entry.probability < 0.0755777


def test_scaling():
    entries = asymptotic_scaling_check([10, 100, 1000, 10_000])
    assert [e.n_times_p for e in entries] == sorted(e.n_times_p for e in entries)
    assert entries[1].n_times_p == pytest.approx(0.970, abs=1e-3)
    assert entries[2].n_times_p == pytest.approx(0.997, abs=1e-3)
    assert all(0.9 <= e.n_times_p <= 1.0 for e in entries[1:])
    assert all(0.0 < e.probability < 1.0 for e in entries)


def test_scaling_large_n():
    _, entry = asymptotic_config(10**6)
    assert 0.9 <= entry.n_times_p <= 1.0


def test_construction_rejects_small_n():
    with pytest.raises(ValidationError):
        asymptotic_config(2)


def test_construction_never_beats_optimizer():
    table = perfect_w_table(3, 12, OptOptions(starts=4))
    for n, p in table:
        assert asymptotic_config(n)[1].probability <= p + 1e-12


def test_batch_formula_matches_scalar_path():
    rng = np.random.default_rng(5)
    w, _ = draw_feasible_w(rng, 200)
    a = Amplitudes.uniform(3)
    batch = batch_violation(np.full(3, 1 / 3), w)
    for wi, p in zip(w[:50], batch[:50]):
        w_free = np.column_stack([wi[:2].real, wi[:2].imag])
        assert p == pytest.approx(violation_probability_from_w(a, w_free), rel=1e-9, abs=1e-15)


def test_draws_are_feasible_and_cover_strata():
    rng = np.random.default_rng(1)
    w, strata = draw_feasible_w(rng, 5000)
    norms = np.abs(w)
    assert np.all((norms >= EPS_W) & (norms <= 1 / EPS_W))
    assert np.allclose(w.sum(axis=1), 0, atol=1e-9 * norms.max())
    assert set(strata.tolist()) == {0, 1, 2, 3, 4}
    assert norms.min() < 1e-5 and norms.max() > 1e5


def test_planar_dot_sum_vanishes():
    rng = np.random.default_rng(2)
    w, strata = draw_feasible_w(rng, 2000)
    planar = w[strata == 1]
    assert len(planar) > 200
    exact = [float(exact_pairwise_dot_sum(row)) for row in planar[:200]]
    assert max(abs(x) for x in exact) <= 1e-12


@settings(max_examples=40)
@given(st.floats(-3, 3), st.floats(0, 2 * math.pi), st.floats(-3, 3), st.floats(0, 2 * math.pi))
def test_exact_dot_sum_non_positive(m1, t1, m2, t2):
    w1 = 10**m1 * complex(math.cos(t1), math.sin(t1))
    w2 = 10**m2 * complex(math.cos(t2), math.sin(t2))
    if abs(w1 + w2) < 1e-6:
        return
    assert exact_pairwise_dot_sum([w1, w2, -(w1 + w2)]) <= 0


@pytest.mark.parametrize("seed", [0, 1, 7])
def test_bound_report(seed):
    report = sample_feasible_bound_check(20_000, seed)
    assert report.samples == 20_000
    assert report.violations_of_ninth == 0
    assert report.max_probability_seen <= 1 / 9 + 1e-9
    assert report.max_pairwise_dot_sum <= 1e-12
    assert report.ok


def test_bound_report_independent_of_workers():
    assert sample_feasible_bound_check(25_000, 3, workers=1) == sample_feasible_bound_check(25_000, 3, workers=2)


def test_bound_report_merge_is_order_independent():
    parts = [BoundReport(10, 0.05, 0, -1.0, 1), BoundReport(5, 0.07, 0, 1e-13, 0), BoundReport(1, 0.01, 0, -2.0, 0)]
    assert BoundReport.merge(parts) == BoundReport.merge(parts[::-1])


def test_bound_check_rejects_zero_samples():
    with pytest.raises(ValidationError):
        sample_feasible_bound_check(0)


def test_oracle_equivalence():
    report = oracle_equivalence_check(300, seed=4)
    assert report.ok
    assert report.max_abs_diff_quadratic > 0.0  # N=3 cases were drawn


def test_ghz_w_comparison_small():
    rows = ghz_w_comparison(3, 4, OptOptions(starts=8))
    assert rows[0].p_ghz == pytest.approx(0.125, abs=1e-3)
    assert rows[0].ghz_wins
    assert rows[1].p_ghz < rows[1].p_w and not rows[1].ghz_wins


def test_comparison_range():
    with pytest.raises(ValidationError):
        ghz_w_comparison(2, 4)
    with pytest.raises(ValidationError):
        ghz_w_comparison(3, 9)


def test_is_unimodal():
    assert is_unimodal([1, 2, 3, 2, 1])
    assert is_unimodal([3, 2, 1])
    assert not is_unimodal([1, 3, 2, 3])
    assert not is_unimodal([1, 2, 2, 1])
