"""Executable checks: the 1/9 bound for W3, the 1/N construction, W vs GHZ."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .geometric_model import (
    EPS_W,
    constraint_residuals,
    geo_joint_probability,
    geo_probability_from_settings,
    hardy_config_from_w,
    target_probability,
)
from .optimizer import (
    ORACLE_MAX_QUBITS,
    OptOptions,
    _run_indexed,
    maximize_generic,
    maximize_w_violation,
)
from .quantum_core import (
    MINUS,
    PLUS,
    Amplitudes,
    MeasurementSetting,
    ValidationError,
    build_ghz_state,
    build_w_state,
    joint_probability_statevector,
    quadratic_form_probability,
)

NINTH = 1.0 / 9.0
BOUND_SLACK = 1e-9
DOT_SUM_TOL = 1e-12
SAMPLE_CHUNK = 10_000
LOG_MAG_RANGE = (math.log(1e-3), math.log(1e3))
GEO_RECHECK_MAX_N = 5_000


@dataclass(frozen=True)
class AsymptoticEntry:
    n: int
    probability: float
    n_times_p: float

    def to_json(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class AsymptoticVectors:
    """Scalar (x-axis) vectors of the 1/N construction; index -1 is qubit N."""

    w: np.ndarray
    v: np.ndarray
    u: float
    u_i: np.ndarray


def asymptotic_vectors(n: int) -> AsymptoticVectors:
    """Apply the constraint relations to ``w_i = 1/(n-1)`` (i < n), ``w_n = -1``."""
    if n < 3:
        raise ValidationError("construction needs n >= 3")
    a2 = 1.0 / n
    w = np.full(n, 1.0 / (n - 1))
    w[-1] = -1.0
    v = -a2 / w  # -a^2 w / |w|^2 for scalars
    u = -math.fsum(v) / (n - 1)
    return AsymptoticVectors(w=w, v=v, u=u, u_i=v + u)


def asymptotic_probability(vecs: AsymptoticVectors) -> float:
    n = len(vecs.w)
    log_den = math.fsum(np.log1p(n * vecs.u_i**2))
    return math.exp(2.0 * math.log(abs(vecs.u)) - log_den)


def asymptotic_config(n: int) -> tuple[np.ndarray, AsymptoticEntry]:
    """Free w-vectors of the construction and its exact violation probability."""
    vecs = asymptotic_vectors(n)
    p = asymptotic_probability(vecs)
    if n <= GEO_RECHECK_MAX_N:
        t = np.column_stack([vecs.u_i, np.zeros(n)])
        q = geo_joint_probability(Amplitudes.uniform(n), t)
        if abs(q - p) > 1e-12:
            raise ArithmeticError(f"closed form {p!r} and geometric formula {q!r} disagree")
    w_free = np.column_stack([vecs.w[:-1], np.zeros(n - 1)])
    return w_free, AsymptoticEntry(n=n, probability=p, n_times_p=n * p)


def asymptotic_scaling_check(n_list: Iterable[int]) -> list[AsymptoticEntry]:
    return [asymptotic_config(n)[1] for n in n_list]


# --- random feasible samples for the W3 bound ---------------------------------------


@dataclass(frozen=True)
class BoundReport:
    samples: int
    max_probability_seen: float
    violations_of_ninth: int
    max_pairwise_dot_sum: float
    exact_rechecks: int = 0

    @property
    def ok(self) -> bool:
        return (
            self.violations_of_ninth == 0
            and self.max_probability_seen <= NINTH + BOUND_SLACK
            and self.max_pairwise_dot_sum <= DOT_SUM_TOL
        )

    def to_json(self) -> dict:
        out = asdict(self)
        out["ok"] = self.ok
        return out

    @staticmethod
    def merge(parts: Sequence["BoundReport"]) -> "BoundReport":
        return BoundReport(
            samples=sum(p.samples for p in parts),
            max_probability_seen=max(p.max_probability_seen for p in parts),
            violations_of_ninth=sum(p.violations_of_ninth for p in parts),
            max_pairwise_dot_sum=max(p.max_pairwise_dot_sum for p in parts),
            exact_rechecks=sum(p.exact_rechecks for p in parts),
        )


def _log_uniform(rng, lo, hi, size):
    return np.exp(rng.uniform(lo, hi, size=size))


def draw_feasible_w(rng: np.random.Generator, count: int) -> tuple[np.ndarray, np.ndarray]:
    """Random (w_1, w_2, w_3) summing to zero, as complex arrays of shape (count, 3).

    Returns ``(w, stratum)`` with strata 0 = generic 2D, 1 = planar,
    2 = near the small-norm boundary, 3 = near the large-norm boundary,
    4 = w_3 nearly cancelled.
    """
    stratum = rng.choice(5, size=count, p=[0.6, 0.2, 0.08, 0.06, 0.06])
    angles = rng.uniform(0.0, 2 * math.pi, size=(count, 2))
    planar = stratum == 1
    angles[planar] = rng.choice([0.0, math.pi], size=(int(planar.sum()), 2))
    mags = _log_uniform(rng, *LOG_MAG_RANGE, (count, 2))
    small = stratum == 2
    mags[small, 0] = _log_uniform(rng, math.log(EPS_W), math.log(1e-5), int(small.sum()))
    large = stratum == 3
    mags[large, 0] = _log_uniform(rng, math.log(1e5), math.log(0.3 / EPS_W), int(large.sum()))
    w1 = mags[:, 0] * np.exp(1j * angles[:, 0])
    w2 = mags[:, 1] * np.exp(1j * angles[:, 1])
    cancel = stratum == 4
    k = int(cancel.sum())
    delta = _log_uniform(rng, math.log(EPS_W), math.log(1e-3), k) * np.exp(
        1j * rng.uniform(0.0, 2 * math.pi, k)
    )
    w2[cancel] = -w1[cancel] + delta * np.abs(w1[cancel])
    w = np.column_stack([w1, w2, -(w1 + w2)])
    norms = np.abs(w)
    ok = np.all((norms >= EPS_W) & (norms <= 1.0 / EPS_W), axis=1)
    return w[ok], stratum[ok]


def batch_scaled(a2: np.ndarray, w: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised ``v_i`` and ``u_i`` for rows of complex w-vectors."""
    n = w.shape[1]
    v = -a2 / np.conj(w)
    u = -v.sum(axis=1, keepdims=True) / (n - 1)
    return v, v + u


def batch_violation(a2: np.ndarray, w: np.ndarray) -> np.ndarray:
    _, ui = batch_scaled(a2, w)
    u = ui.sum(axis=1)
    return np.abs(u) ** 2 / np.prod(1.0 + np.abs(ui) ** 2 / a2, axis=1)


def pairwise_dot_sum(v: np.ndarray) -> np.ndarray:
    """``v1.v2 + v2.v3 + v3.v1`` for rows of three complex-encoded planar vectors."""
    dot = lambda p, q: (p * np.conj(q)).real  # noqa: E731
    return dot(v[:, 0], v[:, 1]) + dot(v[:, 1], v[:, 2]) + dot(v[:, 2], v[:, 0])


def exact_pairwise_dot_sum(w_row: Sequence[complex]) -> Fraction:
    """Same quantity in exact rational arithmetic.

    ``w_1`` and ``w_2`` are taken as given and ``w_3`` is closed exactly, since
    the rounded float ``w_3`` does not make the sum vanish.
    """
    third = Fraction(1, 3)
    ws = [(Fraction(float(z.real)), Fraction(float(z.imag))) for z in w_row[:2]]
    ws.append((-ws[0][0] - ws[1][0], -ws[0][1] - ws[1][1]))
    pts = []
    for x, y in ws:
        n2 = x * x + y * y
        pts.append((-third * x / n2, -third * y / n2))
    (x1, y1), (x2, y2), (x3, y3) = pts
    return x1 * x2 + y1 * y2 + x2 * x3 + y2 * y3 + x3 * x1 + y3 * y1


def _bound_chunk(args) -> BoundReport:
    seed, index, count = args
    rng = np.random.default_rng([seed, index])
    a2 = np.full(3, 1.0 / 3.0)
    ws = []
    have = 0
    while have < count:
        w, _ = draw_feasible_w(rng, count - have)
        ws.append(w)
        have += len(w)
    w = np.vstack(ws)[:count]
    p = batch_violation(a2, w)
    v, _ = batch_scaled(a2, w)
    dots = pairwise_dot_sum(v)
    suspect = np.flatnonzero(dots > DOT_SUM_TOL)
    for i in suspect:
        # float rounding on ~1e7-sized vectors; settle the sign exactly
        dots[i] = float(exact_pairwise_dot_sum(w[i]))
    return BoundReport(
        samples=count,
        max_probability_seen=float(p.max()),
        violations_of_ninth=int(np.sum(p > NINTH + BOUND_SLACK)),
        max_pairwise_dot_sum=float(dots.max()),
        exact_rechecks=len(suspect),
    )


def sample_feasible_bound_check(samples: int, seed: int = 0, workers: int = 1) -> BoundReport:
    """Random feasible W3 configurations against the 1/9 bound and the dot-sum step."""
    if samples < 1:
        raise ValidationError("samples must be >= 1")
    chunks = []
    for index, start in enumerate(range(0, samples, SAMPLE_CHUNK)):
        chunks.append((seed, index, min(SAMPLE_CHUNK, samples - start)))
    return BoundReport.merge(_run_indexed(_bound_chunk, chunks, workers))


# --- W vs GHZ -----------------------------------------------------------------------------


@dataclass(frozen=True)
class ComparisonRow:
    n: int
    p_w: float
    p_ghz: float

    @property
    def ghz_wins(self) -> bool:
        return self.p_ghz > self.p_w


def ghz_w_comparison(n_min: int, n_max: int, opts: OptOptions = OptOptions()) -> list[ComparisonRow]:
    if not 3 <= n_min <= n_max <= 8:
        raise ValidationError("comparison range must lie within [3, 8]")
    rows = []
    for n in range(n_min, n_max + 1):
        p_w = maximize_w_violation(Amplitudes.uniform(n), opts).best_probability
        p_ghz = maximize_generic(build_ghz_state(n), opts).best_probability
        rows.append(ComparisonRow(n=n, p_w=p_w, p_ghz=p_ghz))
    return rows


def is_unimodal(values: Sequence[float]) -> bool:
    """Strictly rises to a single peak and then strictly falls."""
    peak = int(np.argmax(values))
    rising = all(values[i] < values[i + 1] for i in range(peak))
    falling = all(values[i] > values[i + 1] for i in range(peak, len(values) - 1))
    return rising and falling


# --- closed form vs statevector ---------------------------------------------------------


@dataclass(frozen=True)
class OracleReport:
    cases: int
    max_abs_diff_geo: float
    max_abs_diff_quadratic: float

    @property
    def ok(self) -> bool:
        return max(self.max_abs_diff_geo, self.max_abs_diff_quadratic) <= ORACLE_TOL

    def to_json(self) -> dict:
        out = asdict(self)
        out["ok"] = self.ok
        return out


ORACLE_TOL = 1e-10


def random_instance(rng: np.random.Generator, n: int):
    """Random amplitudes, settings and outcome pattern for an n-qubit W state."""
    raw = rng.uniform(0.05, 1.0, size=n)
    a = Amplitudes(tuple(raw / np.linalg.norm(raw)))
    settings = [
        MeasurementSetting(float(p), float(t))
        for p, t in zip(rng.uniform(0.01, math.pi / 2 - 0.01, n), rng.uniform(0.0, 2 * math.pi, n))
    ]
    outcomes = [int(o) for o in rng.choice([PLUS, MINUS], size=n)]
    return a, settings, outcomes


def oracle_equivalence_check(cases: int, seed: int = 0, n_range: tuple[int, int] = (2, 8)) -> OracleReport:
    """Closed-form probabilities against the dense statevector on random instances."""
    if cases < 1:
        raise ValidationError("cases must be >= 1")
    rng = np.random.default_rng(seed)
    max_geo = max_qf = 0.0
    for _ in range(cases):
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        a, settings, outcomes = random_instance(rng, n)
        exact = joint_probability_statevector(build_w_state(a), settings, outcomes)
        max_geo = max(max_geo, abs(geo_probability_from_settings(a, settings, outcomes) - exact))
        if n == 3:
            max_qf = max(max_qf, abs(quadratic_form_probability(a, settings, outcomes) - exact))
    return OracleReport(cases=cases, max_abs_diff_geo=max_geo, max_abs_diff_quadratic=max_qf)


def asymptotic_oracle_check(n: int) -> tuple[float, float]:
    """Statevector target and worst constraint residual of the construction (n <= 12)."""
    if n > ORACLE_MAX_QUBITS:
        raise ValidationError(f"oracle check limited to n <= {ORACLE_MAX_QUBITS}")
    a = Amplitudes.uniform(n)
    w_free, _ = asymptotic_config(n)
    config, _ = hardy_config_from_w(a, w_free)
    state = build_w_state(a)
    return target_probability(state, config), max(constraint_residuals(state, config))
