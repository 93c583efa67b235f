"""Multistart maximisation of the Hardy violation probability.

Three search spaces:

* W states: the free w-vectors.  Every point there is a feasible Hardy
  configuration, so the search is unconstrained.
* Arbitrary states: all 4N measurement angles, with a growing quadratic
  penalty on the constraint amplitudes.
* Symmetric W ansatz: one amplitude split plus one collinear w magnitude.

Each start draws from its own RNG seeded by ``(seed, start_index)`` and results
are reduced in start order, so the outcome does not depend on ``workers``.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np
from scipy import optimize

from .geometric_model import (
    EPS_W,
    HardyConfig,
    constraint_residuals,
    hardy_config_from_w,
    target_probability,
)
from .quantum_core import (
    Amplitudes,
    MeasurementSetting,
    StateVector,
    ValidationError,
    build_w_state,
    eigenstate,
)

ORACLE_MAX_QUBITS = 12
MAX_PENALTY_ROUNDS = 20
GENERIC_MAX_QUBITS = 12
INIT_LOG_MAG = (math.log(1e-2), math.log(1e2))


class OptimizationError(RuntimeError):
    """No start produced an acceptable result."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


@dataclass(frozen=True)
class OptOptions:
    starts: int = 64
    seed: int = 0
    max_iters: int = 2000
    f_tol: float = 1e-12
    penalty_initial: float = 1.0
    penalty_growth: float = 10.0
    residual_target: float = 1e-8
    planar_only: bool = False
    workers: int = 1

    def __post_init__(self):
        if self.starts < 1:
            raise ValidationError("starts must be >= 1")
        if self.f_tol <= 0:
            raise ValidationError("f_tol must be > 0")
        if self.penalty_growth <= 1:
            raise ValidationError("penalty_growth must be > 1")
        if self.workers < 1:
            raise ValidationError("workers must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValidationError("seed must be a 64-bit unsigned integer")


@dataclass
class OptResult:
    best_probability: float
    config: HardyConfig
    w_free: np.ndarray | None
    residual_max: float
    starts_converged: int
    evaluations: int
    diagnostics: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "best_probability": self.best_probability,
            "config": self.config.to_json(),
            "w_free": None if self.w_free is None else self.w_free.tolist(),
            "residual_max": self.residual_max,
            "starts_converged": self.starts_converged,
            "evaluations": self.evaluations,
            "diagnostics": self.diagnostics,
        }


@dataclass(frozen=True)
class AmplitudeGridSpec:
    resolution: int = 64
    margin: float = 0.01

    def __post_init__(self):
        if self.resolution < 2:
            raise ValidationError("resolution must be >= 2")
        if not 0 < self.margin < math.pi / 4:
            raise ValidationError("margin must lie in (0, pi/4)")

    def axis(self) -> np.ndarray:
        return np.linspace(self.margin, math.pi / 2 - self.margin, self.resolution)


def _start_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([seed, index])


def _derived_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([seed, index]).generate_state(1, np.uint64)[0])


def _run_indexed(fn: Callable, items: Sequence, workers: int) -> list:
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


def _best_index(values: Sequence[float]) -> int:
    # strict > keeps the lowest start index on ties
    best = -1
    for i, v in enumerate(values):
        if math.isfinite(v) and (best < 0 or v > values[best]):
            best = i
    return best


def _verify_with_oracle(state: StateVector, config: HardyConfig) -> tuple[float, float]:
    residuals = constraint_residuals(state, config)
    return target_probability(state, config), max(residuals)


# --- W-state search in w coordinates ------------------------------------------


class _WObjective:
    """Violation probability as a function of a packed search vector.

    One vector, ``w_dep`` (the longest at the start point), is the dependent
    one, ``-sum`` of the rest, so near-cancelling short vectors stay easy to
    reach.  Another, ``w_gauge``, is pinned to the x-axis to remove the
    rotation freedom.  Layout: ``x[0]`` is ``log ||w_gauge||``, then for every
    other free vector its log-norm and, unless planar, its polar angle.
    Planar searches keep every w on the x-axis with fixed ``signs``.

    Points with any ``||w_i||`` outside ``[EPS_W, 1/EPS_W]`` evaluate to
    ``nan`` (rejected, not penalised).  Reported vectors are rotated so that
    ``w_1`` lies on the negative x-axis.
    """

    def __init__(self, a: Amplitudes, planar: bool, dep: int, gauge: int, signs: Sequence[float]):
        self.a2 = a.as_array() ** 2
        self._a2 = [float(q) for q in self.a2]
        self.n = a.n
        self.planar = planar
        self.dep = dep
        self.gauge = gauge
        self.free = [k for k in range(self.n) if k not in (dep, gauge)]
        self.signs = [float(t) for t in signs]
        self.evaluations = 0
        self.max_seen = -math.inf

    @classmethod
    def from_w(cls, a: Amplitudes, w: np.ndarray, planar: bool) -> tuple["_WObjective", np.ndarray]:
        """Objective and packed vector reproducing the full list ``w``."""
        w = np.asarray(w, dtype=complex)
        dep = int(np.argmax(np.abs(w)))
        gauge = 0 if dep != 0 else 1
        w = w * np.conj(w[gauge]) / abs(w[gauge])  # w_gauge on the positive axis
        free = [k for k in range(len(w)) if k not in (dep, gauge)]
        signs = [1.0] + [-1.0 if w[k].real < 0 else 1.0 for k in free]
        obj = cls(a, planar, dep, gauge, signs)
        x = [math.log(abs(w[gauge]))]
        for k in free:
            x.append(math.log(abs(w[k])))
            if not planar:
                x.append(float(np.angle(w[k])))
        return obj, np.array(x)

    def _w_list(self, x) -> list[complex]:
        w = [0j] * self.n
        w[self.gauge] = complex(self.signs[0] * math.exp(x[0]), 0.0)
        if self.planar:
            for k, sg, t in zip(self.free, self.signs[1:], x[1:]):
                w[k] = complex(sg * math.exp(t), 0.0)
        else:
            for j, k in enumerate(self.free):
                r, ang = math.exp(x[1 + 2 * j]), x[2 + 2 * j]
                w[k] = complex(r * math.cos(ang), r * math.sin(ang))
        w[self.dep] = -sum(w)
        return w

    def w_complex(self, x: np.ndarray) -> np.ndarray:
        w = np.array(self._w_list(x), dtype=complex)
        w = -w * np.conj(w[0]) / abs(w[0])
        w[0] = -abs(w[0])  # exactly on the negative real axis
        return w

    def w_free(self, x: np.ndarray) -> np.ndarray:
        w = self.w_complex(x)[:-1]
        return np.column_stack([w.real, w.imag])

    def __call__(self, x) -> float:
        # scalar complex arithmetic: N is small and numpy call overhead dominates
        self.evaluations += 1
        limit = -math.log(EPS_W)
        logs = x if self.planar else [x[0], *x[1::2]]
        if any(abs(t) > limit for t in logs):
            return math.nan
        w = self._w_list(x)
        v = []
        for q, z in zip(self._a2, w):
            m = abs(z)
            if not EPS_W <= m <= 1.0 / EPS_W:
                return math.nan
            v.append(-q / z.conjugate())
        u = -sum(v) / (self.n - 1)
        p = u.real * u.real + u.imag * u.imag
        for q, vi in zip(self._a2, v):
            d = vi + u
            p /= 1.0 + (d.real * d.real + d.imag * d.imag) / q
        if p > self.max_seen:
            self.max_seen = p
        return p


def _barrier(fun: Callable[[np.ndarray], float]) -> Callable[[np.ndarray], float]:
    def neg(x):
        p = fun(x)
        return math.inf if math.isnan(p) else -p

    return neg


def _w_initial_w(a: Amplitudes, rng: np.random.Generator, planar: bool, odd: int = 0) -> np.ndarray:
    """Random start; log-uniform magnitudes for the unscaled vectors ``w_i / a_i``.

    Planar starts put ``w_odd`` on the positive x-axis and every other w on the
    negative one (all optima found so far have this shape); ``odd`` cycles
    with the start index so each choice is covered.
    """
    n = a.n
    amps = a.as_array()
    log_lo, log_hi = INIT_LOG_MAG
    while True:
        mags = amps * np.exp(rng.uniform(log_lo, log_hi, size=n))
        if planar:
            w = -mags.astype(complex)
            w[odd] = mags.sum() - mags[odd]
            if odd == 0:
                w = -w  # rotate by pi so w_1 stays on the negative axis
        else:
            w = np.empty(n, dtype=complex)
            w[0] = -mags[0]
            w[1:-1] = mags[1:-1] * np.exp(1j * rng.uniform(0.0, 2 * math.pi, size=n - 2))
            w[-1] = -w[:-1].sum()
        norms = np.abs(w)
        if np.all((norms >= EPS_W) & (norms <= 1.0 / EPS_W)):
            return w


def _simplex_search(
    neg: Callable, x0: np.ndarray, opts: OptOptions, step: float = 0.5
) -> tuple[np.ndarray, float, bool]:
    # explicit simplex: scipy's default (5% of each coordinate) is useless for log-norms near 0
    simplex = np.vstack([x0, x0 + step * np.eye(len(x0))])
    nm = optimize.minimize(
        neg,
        x0,
        method="Nelder-Mead",
        options={
            "maxiter": opts.max_iters,
            "fatol": opts.f_tol,
            "xatol": math.sqrt(opts.f_tol),
            "adaptive": len(x0) > 4,
            "initial_simplex": simplex,
        },
    )
    f = float(nm.fun)
    return nm.x, f, bool(nm.success) and math.isfinite(f)


def _polish(neg: Callable, x: np.ndarray, f: float) -> tuple[np.ndarray, float]:
    """Finite-difference BFGS from the incumbent, kept only if it improves."""
    with warnings.catch_warnings(), np.errstate(invalid="ignore"):
        # finite differences may probe the barrier and produce inf - inf
        warnings.simplefilter("ignore", RuntimeWarning)
        pol = optimize.minimize(neg, x, method="BFGS", options={"maxiter": 200, "gtol": 1e-10})
    if math.isfinite(pol.fun) and pol.fun < f:
        return pol.x, float(pol.fun)
    return x, f


def _w_start(args):
    a, opts, index = args
    planar = opts.planar_only or index % 2 == 0
    odd = (index if opts.planar_only else index // 2) % a.n
    w0 = _w_initial_w(a, _start_rng(opts.seed, index), planar, odd=odd)
    obj, x0 = _WObjective.from_w(a, w0, opts.planar_only)
    x, f, ok = _simplex_search(_barrier(obj), x0, opts)
    return obj.w_complex(x), -f, ok, obj.evaluations, obj.max_seen


def _finish_w_result(a: Amplitudes, w_free: np.ndarray, diagnostics: dict, converged: int, evals: int) -> OptResult:
    config, _ = hardy_config_from_w(a, w_free)
    best = float(diagnostics["geometric_probability"])
    residual_max = math.nan
    if a.n <= ORACLE_MAX_QUBITS:
        oracle_p, residual_max = _verify_with_oracle(build_w_state(a), config)
        diagnostics["oracle_probability"] = oracle_p
        best = oracle_p
    return OptResult(
        best_probability=best,
        config=config,
        w_free=w_free,
        residual_max=residual_max,
        starts_converged=converged,
        evaluations=evals,
        diagnostics=diagnostics,
    )


def maximize_w_violation(a: Amplitudes, opts: OptOptions = OptOptions()) -> OptResult:
    if a.n < 2:
        raise ValidationError("need at least two qubits")
    runs = _run_indexed(_w_start, [(a, opts, i) for i in range(opts.starts)], opts.workers)
    values = [r[1] if math.isfinite(r[1]) else -math.inf for r in runs]
    best = _best_index(values)
    if best < 0:
        raise OptimizationError("no start converged", {"starts": opts.starts})
    obj, x0 = _WObjective.from_w(a, runs[best][0], opts.planar_only)
    x, f = _polish(_barrier(obj), x0, -values[best])
    diagnostics = {
        "geometric_probability": -f,
        "best_start": best,
        "max_evaluated": float(max([r[4] for r in runs] + [obj.max_seen])),
        "per_start": [float(v) for v in values],
        "diagnostic_n2": a.n == 2,
    }
    return _finish_w_result(
        a,
        obj.w_free(x),
        diagnostics,
        sum(1 for r in runs if r[2]),
        sum(r[3] for r in runs) + obj.evaluations,
    )


# --- symmetric ansatz -----------------------------------------------------------


def _symmetric_amplitudes(n: int, gamma: float) -> Amplitudes:
    a = math.cos(gamma) / math.sqrt(n - 1)
    return Amplitudes((a,) * (n - 1) + (math.sin(gamma),))


def _symmetric_w_free(n: int, log_m: float) -> np.ndarray:
    return np.tile([-math.exp(log_m), 0.0], (n - 1, 1))


def _symmetric_value(n: int, x: np.ndarray, gamma_fixed: float | None) -> float:
    log_m = x[0]
    gamma = gamma_fixed if gamma_fixed is not None else x[1]
    if not 0.0 < gamma < math.pi / 2 or abs(log_m) > -math.log(EPS_W) - math.log(n):
        return math.nan
    a = _symmetric_amplitudes(n, gamma).as_array()
    m = math.exp(log_m)
    w = np.full(n, -m)
    w[-1] = (n - 1) * m
    v = -(a**2) / w
    u = -v.sum() / (n - 1)
    ui = v + u
    return u * u / float(np.prod(1.0 + ui**2 / a**2))


def _symmetric_start(args):
    n, gamma_fixed, opts, index = args
    rng = _start_rng(opts.seed, index)
    tally = {"count": 0, "max": -math.inf}

    def fun(x):
        tally["count"] += 1
        p = _symmetric_value(n, x, gamma_fixed)
        tally["max"] = max(tally["max"], p) if math.isfinite(p) else tally["max"]
        return p

    x0 = [rng.uniform(*INIT_LOG_MAG)]
    if gamma_fixed is None:
        x0.append(rng.uniform(0.05, math.pi / 2 - 0.05))
    neg = _barrier(fun)
    x, f, ok = _simplex_search(neg, np.array(x0), opts)
    x, f = _polish(neg, x, f)
    return x, -f, ok, tally["count"], tally["max"]


def maximize_symmetric_w(
    n: int, opts: OptOptions = OptOptions(), *, uniform_amplitudes: bool = False
) -> OptResult:
    """Best violation over amplitudes ``(a, ..., a, a_N)`` with ``w_1 = ... = w_{N-1}`` collinear."""
    if n < 3:
        raise ValidationError("symmetric ansatz needs n >= 3")
    gamma_fixed = math.asin(1.0 / math.sqrt(n)) if uniform_amplitudes else None
    runs = _run_indexed(
        _symmetric_start, [(n, gamma_fixed, opts, i) for i in range(opts.starts)], opts.workers
    )
    best = _best_index([r[1] for r in runs])
    if best < 0:
        raise OptimizationError("no start converged", {"starts": opts.starts})
    x = runs[best][0]
    gamma = gamma_fixed if gamma_fixed is not None else float(x[1])
    a = Amplitudes.uniform(n) if uniform_amplitudes else _symmetric_amplitudes(n, gamma)
    diagnostics = {
        "geometric_probability": float(runs[best][1]),
        "best_start": best,
        "max_evaluated": float(max(r[4] for r in runs)),
        "amplitude_angle": gamma,
        "log_m": float(x[0]),
    }
    return _finish_w_result(
        a,
        _symmetric_w_free(n, float(x[0])),
        diagnostics,
        sum(1 for r in runs if r[2]),
        sum(r[3] for r in runs),
    )


# --- generic penalty search over measurement angles --------------------------------


class _GenericObjective:
    """Target and constraint probabilities from raw angles, with gradients.

    ``x`` holds ``(phi, theta)`` of ``U_1 .. U_N`` followed by ``D_1 .. D_N``.
    Events are ordered as the N mixed constraints, the all-D "-" constraint,
    then the target.
    """

    def __init__(self, state: StateVector):
        n = self.n = state.n
        self.psi = state.amps.reshape([2] * n)
        self.evaluations = 0
        letters = "abcdefghijklmnopqrstuvwxyz"
        legs = letters[:n]
        # env[i]: contract every leg except i
        self._env_exprs = []
        for i in range(n):
            ops = ",".join(f"K{legs[j]}" for j in range(n) if j != i)
            expr = f"{legs},{ops}->K{legs[i]}"
            self._env_exprs.append(expr)
        # param block feeding each (event, qubit) slot
        k = n + 2
        self.block = np.empty((k, n), dtype=int)
        self.kind = np.empty((k, n), dtype=int)  # 0: U+, 1: D+, 2: D-
        for ev in range(k):
            for q in range(n):
                if ev < n and ev == q:
                    self.block[ev, q], self.kind[ev, q] = n + q, 1
                elif ev == n:
                    self.block[ev, q], self.kind[ev, q] = n + q, 2
                else:
                    self.block[ev, q], self.kind[ev, q] = q, 0

    def settings(self, x: np.ndarray) -> tuple[list[MeasurementSetting], list[MeasurementSetting]]:
        pairs = np.asarray(x).reshape(2, self.n, 2)
        U = [MeasurementSetting(float(p), float(t)) for p, t in pairs[0]]
        D = [MeasurementSetting(float(p), float(t)) for p, t in pairs[1]]
        return U, D

    def _vectors(self, x: np.ndarray):
        pairs = np.asarray(x, dtype=float).reshape(2 * self.n, 2)
        phi = pairs[self.block, 0]
        ph = np.exp(1j * pairs[self.block, 1])
        c, s = np.cos(phi), np.sin(phi)
        minus = self.kind == 2
        e = np.where(minus[..., None], np.stack([s, -ph * c], -1), np.stack([c, ph * s], -1))
        d_phi = np.where(minus[..., None], np.stack([c, ph * s], -1), np.stack([-s, ph * c], -1))
        d_theta = np.where(
            minus[..., None],
            np.stack([np.zeros_like(c), -1j * ph * c], -1),
            np.stack([np.zeros_like(c), 1j * ph * s], -1),
        )
        return e, d_phi, d_theta

    def _environments(self, e: np.ndarray) -> np.ndarray:
        ce = np.conj(e)
        env = np.empty(e.shape, dtype=complex)
        for i, expr in enumerate(self._env_exprs):
            others = [ce[:, j] for j in range(self.n) if j != i]
            env[:, i] = np.einsum(expr, self.psi, *others)
        return env

    def amplitudes(self, x: np.ndarray) -> np.ndarray:
        e, _, _ = self._vectors(x)
        env = self._environments(e)
        return np.einsum("kc,kc->k", np.conj(e[:, 0]), env[:, 0])

    def evaluate(self, x: np.ndarray) -> tuple[float, np.ndarray]:
        self.evaluations += 1
        p = np.abs(self.amplitudes(x)) ** 2
        return float(p[-1]), p[:-1]

    def penalized(self, x: np.ndarray, mu: float) -> tuple[float, np.ndarray]:
        """``(-target/mu + sum(residuals), gradient)``; the 1/mu scaling keeps values O(1)."""
        self.evaluations += 1
        e, d_phi, d_theta = self._vectors(x)
        env = self._environments(e)
        amp = np.einsum("kc,kc->k", np.conj(e[:, 0]), env[:, 0])
        weights = np.ones(self.n + 2)
        weights[-1] = -1.0 / mu
        value = float(weights @ (np.abs(amp) ** 2))
        coef = 2.0 * weights[:, None] * np.conj(amp)[:, None]
        g_phi = (coef * np.einsum("kqc,kqc->kq", np.conj(d_phi), env)).real
        g_theta = (coef * np.einsum("kqc,kqc->kq", np.conj(d_theta), env)).real
        grad = np.zeros((2 * self.n, 2))
        np.add.at(grad[:, 0], self.block, g_phi)
        np.add.at(grad[:, 1], self.block, g_theta)
        return value, grad.ravel()

    def seed_d_settings(self, x: np.ndarray) -> np.ndarray:
        """Pick each D_i orthogonal to the U-environment of qubit i.

        This zeroes the N mixed constraints at the initial point, leaving only
        the all-D condition for the penalty to enforce.
        """
        x = np.array(x, dtype=float).reshape(2, self.n, 2)
        e, _, _ = self._vectors(x.ravel())
        env = self._environments(e)[-1]  # target event: all U+
        for i in range(self.n):
            c0, c1 = env[i]
            # want conj(d) . env = 0  ->  d proportional to (conj c1, -conj c0)
            d0, d1 = np.conj(c1), -np.conj(c0)
            norm = math.hypot(abs(d0), abs(d1))
            if norm == 0.0:
                continue
            s = _wrap_setting_vec(d0 / norm, d1 / norm)
            x[1, i] = (s.phi, s.theta)
        return x.ravel()


def _generic_start(args):
    state, opts, index = args
    rng = _start_rng(opts.seed, index)
    obj = _GenericObjective(state)
    n = state.n
    x = np.empty((2, n, 2))
    x[..., 0] = rng.uniform(0.0, math.pi / 2, size=(2, n))
    if opts.planar_only or index % 2 == 0:
        x[..., 1] = rng.choice([0.0, math.pi], size=(2, n))
    else:
        x[..., 1] = rng.uniform(0.0, 2 * math.pi, size=(2, n))
    x = obj.seed_d_settings(x.ravel())
    # seeded D angles can sit on a stationary point of the penalty (e.g. product states)
    x[2 * n :] += rng.normal(0.0, 1e-3, size=2 * n)
    mu = opts.penalty_initial
    rounds = 0
    while True:
        res = optimize.minimize(
            obj.penalized,
            x,
            args=(mu,),
            jac=True,
            method="BFGS",
            options={"maxiter": opts.max_iters, "gtol": 1e-12},
        )
        x = res.x
        target, residuals = obj.evaluate(x)
        rounds += 1
        if residuals.max() <= opts.residual_target or rounds >= MAX_PENALTY_ROUNDS:
            break
        mu *= opts.penalty_growth
    feasible = bool(residuals.max() <= opts.residual_target)
    return x, float(target), float(residuals.max()), feasible, obj.evaluations, mu


def maximize_generic(state: StateVector, opts: OptOptions = OptOptions()) -> OptResult:
    if not 2 <= state.n <= GENERIC_MAX_QUBITS:
        raise ValidationError(f"generic path supports 2 <= n <= {GENERIC_MAX_QUBITS}")
    runs = _run_indexed(_generic_start, [(state, opts, i) for i in range(opts.starts)], opts.workers)
    values = [r[1] if r[3] else -math.inf for r in runs]
    best = _best_index(values)
    evals = sum(r[4] for r in runs)
    if best < 0:
        raise OptimizationError(
            "penalty search did not reach the residual target",
            {
                "residual_target": opts.residual_target,
                "min_residual_max": float(min(r[2] for r in runs)),
                "final_penalty": float(max(r[5] for r in runs)),
            },
        )
    obj = _GenericObjective(state)
    U, D = obj.settings(runs[best][0])
    U = [_wrap_setting(s) for s in U]
    D = [_wrap_setting(s) for s in D]
    amps = _state_amplitude_hint(state)
    config = HardyConfig(n=state.n, amplitudes=amps, U=tuple(U), D=tuple(D))
    oracle_p, residual_max = _verify_with_oracle(state, config)
    return OptResult(
        best_probability=oracle_p,
        config=config,
        w_free=None,
        residual_max=residual_max,
        starts_converged=sum(1 for r in runs if r[3]),
        evaluations=evals,
        diagnostics={
            "best_start": best,
            "final_penalty": float(runs[best][5]),
            "per_start": [float(v) for v in values],
        },
    )


def _wrap_setting(s: MeasurementSetting) -> MeasurementSetting:
    """Fold arbitrary angles into phi in [0, pi/2], theta in [0, 2 pi).

    The +1 eigenvector keeps its ray; only its global phase changes.
    """
    c0, c1 = eigenstate(s, 1)
    return _wrap_setting_vec(c0, c1)


def _wrap_setting_vec(c0: complex, c1: complex) -> MeasurementSetting:
    if abs(c0) > 0:
        c1 = c1 * np.conj(c0) / abs(c0)
        c0 = abs(c0)
    phi = math.atan2(abs(c1), c0.real)
    theta = float(np.angle(c1)) % (2 * math.pi) if abs(c1) > 0 else 0.0
    return MeasurementSetting(phi, theta)


def _state_amplitude_hint(state: StateVector) -> Amplitudes:
    # HardyConfig carries W amplitudes; for non-W states record per-qubit |1> weights.
    p1 = []
    probs = np.abs(state.amps.reshape([2] * state.n)) ** 2
    for q in range(state.n):
        p1.append(float(probs.sum(axis=tuple(k for k in range(state.n) if k != q))[1]))
    vals = np.sqrt(np.maximum(p1, 1e-300))
    return Amplitudes(tuple(vals / np.linalg.norm(vals)))


# --- batch drivers ------------------------------------------------------------------


def scan_point_amplitudes(alpha: float, beta: float) -> Amplitudes:
    return Amplitudes(
        (math.cos(beta) * math.cos(alpha), math.cos(beta) * math.sin(alpha), math.sin(beta))
    )


def _scan_cell(args):
    alpha, beta, opts = args
    try:
        return maximize_w_violation(scan_point_amplitudes(alpha, beta), opts).best_probability
    except (OptimizationError, ValidationError):
        return math.nan


def scan_amplitudes(grid: AmplitudeGridSpec = AmplitudeGridSpec(), opts: OptOptions = OptOptions()) -> list[tuple[float, float, float]]:
    """Row-major grid of ``(alpha, beta, best_probability)``; beta indexes rows.

    Failed cells carry ``nan``.
    """
    axis = grid.axis()
    inner = replace(opts, workers=1)
    cells = []
    for row, beta in enumerate(axis):
        for col, alpha in enumerate(axis):
            index = row * grid.resolution + col
            cells.append((float(alpha), float(beta), replace(inner, seed=_derived_seed(opts.seed, index))))
    values = _run_indexed(_scan_cell, cells, opts.workers)
    return [(alpha, beta, float(p)) for (alpha, beta, _), p in zip(cells, values)]


def perfect_w_table(n_min: int, n_max: int, opts: OptOptions = OptOptions()) -> list[tuple[int, float]]:
    if not 3 <= n_min <= n_max <= 12:
        raise ValidationError("need 3 <= n_min <= n_max <= 12")
    return [
        (n, maximize_w_violation(Amplitudes.uniform(n), opts).best_probability)
        for n in range(n_min, n_max + 1)
    ]
