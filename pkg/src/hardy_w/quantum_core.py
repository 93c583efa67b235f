"""Dense statevector oracle for Hardy-scenario probabilities.

Basis convention: qubit 1 is the most significant bit of the basis index, so
for three qubits ``|100>`` is index 4.

Everything here is computed the slow, obvious way (explicit tensor products
and inner products).  The geometric formulas elsewhere in the package are
checked against these functions, so keep them independent of that code.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

MAX_DENSE_QUBITS = 20
NORM_TOL = 1e-12
RENORMALIZE_TOL = 1e-5
CLAMP_TOL = 1e-12
LHV_MAX_QUBITS = 10


class ValidationError(ValueError):
    """Input violates a documented invariant."""


class ProbabilityRangeError(ArithmeticError):
    """A computed probability left [0, 1] by more than the clamping slack."""


@dataclass(frozen=True)
class Amplitudes:
    """Positive real amplitudes of a generalized W state.

    Inputs whose squared sum is within ``RENORMALIZE_TOL`` of one are rescaled
    to unit norm; anything further off is rejected.
    """

    values: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if len(vals) < 2:
            raise ValidationError(f"need at least 2 amplitudes, got {len(vals)}")
        if not all(math.isfinite(v) and v > 0.0 for v in vals):
            raise ValidationError(f"amplitudes must be finite and > 0: {vals}")
        sq = math.fsum(v * v for v in vals)
        if abs(sq - 1.0) > RENORMALIZE_TOL:
            raise ValidationError(f"sum of squared amplitudes is {sq!r}, not 1")
        scale = 1.0 / math.sqrt(sq)
        object.__setattr__(self, "values", tuple(v * scale for v in vals))

    @classmethod
    def uniform(cls, n: int) -> "Amplitudes":
        return cls((1.0 / math.sqrt(n),) * n)

    @property
    def n(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


@dataclass(frozen=True, eq=False)
class StateVector:
    n: int
    amps: np.ndarray

    def __post_init__(self):
        if not 1 <= self.n <= MAX_DENSE_QUBITS:
            raise ValidationError(f"n={self.n} outside [1, {MAX_DENSE_QUBITS}]")
        amps = np.asarray(self.amps, dtype=complex)
        if amps.shape != (2**self.n,):
            raise ValidationError(f"expected {2**self.n} amplitudes, got shape {amps.shape}")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValidationError(f"state norm^2 is {norm!r}")
        object.__setattr__(self, "amps", amps)

    @classmethod
    def product(cls, bits: Sequence[int]) -> "StateVector":
        """Computational basis state, ``bits[0]`` being qubit 1."""
        n = len(bits)
        amps = np.zeros(2**n, dtype=complex)
        amps[int("".join(str(int(b)) for b in bits), 2)] = 1.0
        return cls(n, amps)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "amps": [[float(z.real), float(z.imag)] for z in self.amps],
        }

    @classmethod
    def from_json(cls, data: dict) -> "StateVector":
        return cls(int(data["n"]), np.array([complex(re, im) for re, im in data["amps"]]))


@dataclass(frozen=True)
class MeasurementSetting:
    """Two-outcome qubit observable.

    The +1 eigenstate is ``cos(phi)|0> + exp(i theta) sin(phi)|1>`` and the -1
    eigenstate is the orthogonal ``sin(phi)|0> - exp(i theta) cos(phi)|1>``.
    """

    phi: float
    theta: float

    def to_json(self) -> dict:
        return {"phi": float(self.phi), "theta": float(self.theta)}

    @classmethod
    def from_json(cls, data: dict) -> "MeasurementSetting":
        return cls(float(data["phi"]), float(data["theta"]))


PLUS = 1
MINUS = -1


def _check_outcome(o: int) -> int:
    if o not in (PLUS, MINUS):
        raise ValidationError(f"outcome must be +1 or -1, got {o!r}")
    return o


def build_w_state(a: Amplitudes) -> StateVector:
    n = a.n
    if n > MAX_DENSE_QUBITS:
        raise ValidationError(f"n={n} exceeds dense cap {MAX_DENSE_QUBITS}")
    amps = np.zeros(2**n, dtype=complex)
    for i, ai in enumerate(a.values):
        amps[1 << (n - 1 - i)] = ai
    return StateVector(n, amps)


def build_ghz_state(n: int) -> StateVector:
    if not 2 <= n <= MAX_DENSE_QUBITS:
        raise ValidationError(f"GHZ qubit count {n} outside [2, {MAX_DENSE_QUBITS}]")
    amps = np.zeros(2**n, dtype=complex)
    amps[0] = amps[-1] = 1.0 / math.sqrt(2.0)
    return StateVector(n, amps)


def eigenstate(s: MeasurementSetting, o: int) -> np.ndarray:
    _check_outcome(o)
    c, sn = math.cos(s.phi), math.sin(s.phi)
    ph = complex(math.cos(s.theta), math.sin(s.theta))
    if o == PLUS:
        return np.array([c, ph * sn], dtype=complex)
    return np.array([sn, -ph * c], dtype=complex)


def clamp_probability(p: float) -> float:
    if 0.0 <= p <= 1.0:
        return p
    if -CLAMP_TOL <= p < 0.0:
        return 0.0
    if 1.0 < p <= 1.0 + CLAMP_TOL:
        return 1.0
    raise ProbabilityRangeError(f"probability {p!r} outside [0, 1]")


def joint_probability_statevector(
    state: StateVector,
    settings: Sequence[MeasurementSetting],
    outcomes: Sequence[int],
) -> float:
    """``<psi| (x)_i |phi_i><phi_i| |psi>`` by an explicit Kronecker product."""
    if len(settings) != state.n or len(outcomes) != state.n:
        raise ValidationError(
            f"state has {state.n} qubits but got {len(settings)} settings, {len(outcomes)} outcomes"
        )
    bra = np.ones(1, dtype=complex)
    for s, o in zip(settings, outcomes):
        bra = np.kron(bra, eigenstate(s, o))
    amp = np.vdot(bra, state.amps)
    return clamp_probability(float(abs(amp) ** 2))


def _canonical(s: MeasurementSetting, o: int) -> tuple[float, float]:
    """(phi, theta) of the eigenstate for outcome ``o`` written in +1 form."""
    if _check_outcome(o) == PLUS:
        return s.phi, s.theta
    return math.pi / 2 - s.phi, s.theta + math.pi


def quadratic_form_parts(
    a: Amplitudes,
    settings: Sequence[MeasurementSetting],
    outcomes: Sequence[int],
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return ``(Q, avec, B)`` with ``P = avec^T Q avec`` and ``Q = B^T B``."""
    if a.n != 3 or len(settings) != 3 or len(outcomes) != 3:
        raise ValidationError("quadratic-form path is defined for three qubits only")
    phis, thetas = zip(*(_canonical(s, o) for s, o in zip(settings, outcomes)))
    phis = np.array(phis)
    thetas = np.array(thetas)
    cos_p, sin_p = np.cos(phis), np.sin(phis)
    avec = np.array(
        [a.values[i] * sin_p[i] * np.prod(np.delete(cos_p, i)) for i in range(3)]
    )
    Q = np.cos(thetas[:, None] - thetas[None, :])
    B = np.vstack([np.cos(thetas), np.sin(thetas)])
    return Q, avec, B


def quadratic_form_probability(
    a: Amplitudes,
    settings: Sequence[MeasurementSetting],
    outcomes: Sequence[int],
) -> float:
    Q, avec, _ = quadratic_form_parts(a, settings, outcomes)
    return clamp_probability(float(avec @ Q @ avec))


def factorized_probability(
    a: Amplitudes,
    settings: Sequence[MeasurementSetting],
    outcomes: Sequence[int],
) -> float:
    """Same probability through ``||B avec||^2``."""
    _, avec, B = quadratic_form_parts(a, settings, outcomes)
    return clamp_probability(float(np.sum((B @ avec) ** 2)))


@dataclass(frozen=True)
class LhvReport:
    n: int
    strategies_total: int
    strategies_satisfying_constraints: int
    max_target_probability: float
    paradox_confirmed: bool

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "strategies_total": self.strategies_total,
            "strategies_satisfying_constraints": self.strategies_satisfying_constraints,
            "max_target_probability": self.max_target_probability,
            "paradox_confirmed": self.paradox_confirmed,
        }


def lhv_paradox_check(n: int, *, drop_last_constraint: bool = False) -> LhvReport:
    """Enumerate every deterministic local strategy for the N-party Hardy test.

    A strategy fixes the sign each party outputs for U_i and for D_i (4^n in
    total).  Mixed local models need not be enumerated: the target probability
    is linear in the mixture weights and so is maximised at a deterministic
    strategy.

    With ``drop_last_constraint`` the all-D "- - ... -" condition is ignored,
    which lets the all-plus strategy through.
    """
    if not 2 <= n <= LHV_MAX_QUBITS:
        raise ValidationError(f"LHV enumeration needs 2 <= n <= {LHV_MAX_QUBITS}, got {n}")
    # Bit i of the U mask (D mask) is 1 when party i outputs + for U_i (D_i).
    masks = np.arange(2**n, dtype=np.int64)
    u_mask = masks[:, None]
    d_mask = masks[None, :]
    full = 2**n - 1
    violated = np.zeros((2**n, 2**n), dtype=bool)
    for i in range(n):
        bit = 1 << i
        others = full ^ bit
        violated |= ((d_mask & bit) != 0) & ((u_mask & others) == others)
    if not drop_last_constraint:
        violated |= d_mask == 0
    ok = ~violated
    target = np.broadcast_to(u_mask == full, ok.shape)
    satisfying = int(ok.sum())
    max_target = float(target[ok].max()) if satisfying else 0.0
    return LhvReport(
        n=n,
        strategies_total=4**n,
        strategies_satisfying_constraints=satisfying,
        max_target_probability=max_target,
        paradox_confirmed=max_target == 0.0,
    )


def outcome_patterns(n: int):
    """All 2^n sign patterns, in lexicographic order with + first."""
    return itertools.product((PLUS, MINUS), repeat=n)
