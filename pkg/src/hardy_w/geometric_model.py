"""Representation vectors and the closed-form W-state Hardy probabilities.

A qubit eigenstate ``cos(phi)|0> + exp(i theta) sin(phi)|1>`` is encoded by the
planar vector ``tan(phi) * (cos theta, sin theta)``.  For a generalized W
state with amplitudes ``a`` and scaled vectors ``t_i = a_i * r_i`` the joint
outcome probability is

    ||sum_i t_i||^2 / prod_i (1 + ||t_i||^2 / a_i^2)

Feasible Hardy configurations are parameterized by the scaled -1 vectors of
the D observables (``w_i``), which only need to sum to zero; every other
vector follows from them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .quantum_core import (
    MINUS,
    PLUS,
    Amplitudes,
    MeasurementSetting,
    StateVector,
    ValidationError,
    _check_outcome,
    joint_probability_statevector,
)

EPS_W = 1e-8
HARDY_CONFIG_SCHEMA_VERSION = 1


class DegenerateVectorError(ValueError):
    """A vector needed by a formula is zero or not well defined."""


@dataclass(frozen=True)
class RepVector:
    """Representation vector, or the marker for ``phi = pi/2`` (``xy is None``)."""

    xy: tuple[float, float] | None

    @property
    def kind(self) -> str:
        return "infinite" if self.xy is None else "finite"

    @property
    def finite(self) -> bool:
        return self.xy is not None

    def as_array(self) -> np.ndarray:
        if self.xy is None:
            raise DegenerateVectorError("representation vector is not well defined")
        return np.array(self.xy, dtype=float)


INFINITE = RepVector(None)


def rep_vector(s: MeasurementSetting, outcome: int = PLUS) -> RepVector:
    if _check_outcome(outcome) == PLUS:
        if s.phi == math.pi / 2:
            return INFINITE
        r = math.tan(s.phi)
        return RepVector((r * math.cos(s.theta), r * math.sin(s.theta)))
    # -1 eigenstate is (pi/2 - phi, theta + pi) in canonical form
    if s.phi == 0.0:
        return INFINITE
    r = -1.0 / math.tan(s.phi)
    return RepVector((r * math.cos(s.theta), r * math.sin(s.theta)))


def setting_from_rep_vector(r: Sequence[float]) -> MeasurementSetting:
    x, y = float(r[0]), float(r[1])
    norm = math.hypot(x, y)
    if not math.isfinite(norm):
        raise DegenerateVectorError(f"non-finite representation vector {r!r}")
    if norm == 0.0:
        return MeasurementSetting(0.0, 0.0)
    return MeasurementSetting(math.atan(norm), math.atan2(y, x) % (2 * math.pi))


def conjugate_rep(r: Sequence[float]) -> np.ndarray:
    """Map the rep vector of one eigenstate of an observable to the other one's."""
    r = np.asarray(r, dtype=float)
    nsq = float(r @ r)
    if nsq == 0.0:
        raise DegenerateVectorError("zero vector: the paired representation vector is infinite")
    return -r / nsq


def geo_joint_probability(a: Amplitudes, t: Sequence[Sequence[float]]) -> float:
    t = np.asarray(t, dtype=float)
    if t.shape != (a.n, 2):
        raise ValidationError(f"expected {a.n} planar vectors, got array of shape {t.shape}")
    if not np.all(np.isfinite(t)):
        raise DegenerateVectorError("scaled vectors must be finite")
    amps = a.as_array()
    num = float(np.sum(np.sum(t, axis=0) ** 2))
    den = float(np.prod(1.0 + np.sum(t * t, axis=1) / amps**2))
    return num / den


def geo_probability_from_settings(
    a: Amplitudes, settings: Sequence[MeasurementSetting], outcomes: Sequence[int]
) -> float:
    """Closed-form probability from settings; raises if any rep vector is infinite."""
    reps = [rep_vector(s, o) for s, o in zip(settings, outcomes)]
    if not all(r.finite for r in reps):
        raise DegenerateVectorError("infinite representation vector")
    amps = a.as_array()
    t = amps[:, None] * np.array([r.xy for r in reps])
    return geo_joint_probability(a, t)


@dataclass(frozen=True, eq=False)
class ScaledVectors:
    """Per-qubit scaled vectors (rows are qubits) and their sums."""

    n: int
    u_i: np.ndarray
    v_i: np.ndarray
    w_i: np.ndarray

    @property
    def u(self) -> np.ndarray:
        return self.u_i.sum(axis=0)

    @property
    def v(self) -> np.ndarray:
        return self.v_i.sum(axis=0)

    @property
    def w(self) -> np.ndarray:
        return self.w_i.sum(axis=0)


@dataclass(frozen=True)
class HardyConfig:
    n: int
    amplitudes: Amplitudes
    U: tuple[MeasurementSetting, ...]
    D: tuple[MeasurementSetting, ...]

    def __post_init__(self):
        if len(self.U) != self.n or len(self.D) != self.n:
            raise ValidationError("U and D must each hold n settings")

    def to_json(self) -> dict:
        return {
            "schema_version": HARDY_CONFIG_SCHEMA_VERSION,
            "n": self.n,
            "amplitudes": list(self.amplitudes.values),
            "U": [s.to_json() for s in self.U],
            "D": [s.to_json() for s in self.D],
        }

    @classmethod
    def from_json(cls, data: dict) -> "HardyConfig":
        version = data.get("schema_version", HARDY_CONFIG_SCHEMA_VERSION)
        if version != HARDY_CONFIG_SCHEMA_VERSION:
            raise ValidationError(f"unsupported HardyConfig schema version {version}")
        return cls(
            n=int(data["n"]),
            amplitudes=Amplitudes(tuple(data["amplitudes"])),
            U=tuple(MeasurementSetting.from_json(s) for s in data["U"]),
            D=tuple(MeasurementSetting.from_json(s) for s in data["D"]),
        )


def complete_w(w_free: Sequence[Sequence[float]]) -> np.ndarray:
    """Append ``w_N = -sum(w_free)`` and check every norm is in the allowed box."""
    w_free = np.asarray(w_free, dtype=float).reshape(-1, 2)
    w = np.vstack([w_free, -w_free.sum(axis=0)])
    norms = np.hypot(w[:, 0], w[:, 1])
    if not np.all((norms >= EPS_W) & (norms <= 1.0 / EPS_W)):
        raise DegenerateVectorError(f"w-vector norms {norms} outside [{EPS_W}, {1 / EPS_W}]")
    return w


def scaled_vectors_from_w(a: Amplitudes, w_free: Sequence[Sequence[float]]) -> ScaledVectors:
    w = complete_w(w_free)
    n = w.shape[0]
    if n != a.n:
        raise ValidationError(f"{a.n} amplitudes but {n - 1} free w-vectors")
    amps = a.as_array()
    v_i = -(amps**2)[:, None] * w / np.sum(w * w, axis=1)[:, None]
    u = -v_i.sum(axis=0) / (n - 1)
    u_i = v_i + u
    return ScaledVectors(n=n, u_i=u_i, v_i=v_i, w_i=w)


def hardy_config_from_w(
    a: Amplitudes, w_free: Sequence[Sequence[float]]
) -> tuple[HardyConfig, ScaledVectors]:
    sv = scaled_vectors_from_w(a, w_free)
    amps = a.as_array()
    U = tuple(setting_from_rep_vector(u / ai) for u, ai in zip(sv.u_i, amps))
    D = tuple(setting_from_rep_vector(v / ai) for v, ai in zip(sv.v_i, amps))
    return HardyConfig(n=sv.n, amplitudes=a, U=U, D=D), sv


def violation_probability_from_w(a: Amplitudes, w_free: Sequence[Sequence[float]]) -> float:
    return geo_joint_probability(a, scaled_vectors_from_w(a, w_free).u_i)


def hardy_events(c: HardyConfig):
    """Yield ``(settings, outcomes)`` for the N+1 constraints, then the target."""
    n = c.n
    for i in range(n):
        settings = list(c.U)
        settings[i] = c.D[i]
        yield settings, [PLUS] * n
    yield list(c.D), [MINUS] * n
    yield list(c.U), [PLUS] * n


def constraint_residuals(state: StateVector, c: HardyConfig) -> list[float]:
    if state.n != c.n:
        raise ValidationError(f"state has {state.n} qubits, config has {c.n}")
    events = list(hardy_events(c))[:-1]
    return [joint_probability_statevector(state, s, o) for s, o in events]


def target_probability(state: StateVector, c: HardyConfig) -> float:
    if state.n != c.n:
        raise ValidationError(f"state has {state.n} qubits, config has {c.n}")
    return joint_probability_statevector(state, list(c.U), [PLUS] * c.n)
