"""Single-qubit noise channels and their independent action on registers."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from .qstate import I2, SIGMA_X, SIGMA_Z, KrausChannel, apply_channel, num_qubits


def _check_prob(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value!r}")
    return value


def bit_flip(p: float) -> KrausChannel:
    p = _check_prob("p", p)
    return KrausChannel((np.sqrt(1 - p) * I2, np.sqrt(p) * SIGMA_X))


def phase_flip(p: float) -> KrausChannel:
    p = _check_prob("p", p)
    return KrausChannel((np.sqrt(1 - p) * I2, np.sqrt(p) * SIGMA_Z))


def amplitude_damping(gamma: float) -> KrausChannel:
    """Energy-loss channel with ``E0 = diag(1, sqrt(1-g))`` and ``E1 = sqrt(g)|0><1|``."""
    gamma = _check_prob("gamma", gamma)
    e0 = np.array([[1, 0], [0, np.sqrt(1 - gamma)]], dtype=complex)
    e1 = np.array([[0, np.sqrt(gamma)], [0, 0]], dtype=complex)
    return KrausChannel((e0, e1))


def pauli_hop(p_bit: float, p_phase: float) -> KrausChannel:
    """Bit flip followed by an independent phase flip, as one 4-operator channel."""
    return bit_flip(p_bit).then(phase_flip(p_phase))


def apply_iid(rho: np.ndarray, ch: KrausChannel) -> np.ndarray:
    """Apply the single-qubit channel ``ch`` to every qubit of ``rho``."""
    for q in range(num_qubits(rho.shape[0])):
        rho = apply_channel(rho, ch, [q])
    return rho


def lift_iid(ch: KrausChannel, k: int) -> Callable[[np.ndarray], np.ndarray]:
    """Return a function applying ``ch`` independently to each of ``k`` qubits."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if ch.dim_in != 2 or ch.dim_out != 2:
        raise ValueError("lift_iid needs a single-qubit channel")

    def apply(rho: np.ndarray) -> np.ndarray:
        if rho.shape[0] != 2**k:
            raise ValueError(f"expected a {k}-qubit state, got dimension {rho.shape[0]}")
        return apply_iid(rho, ch)

    return apply


class NoiseKind(str, Enum):
    PAULI = "pauli"
    DAMPING = "damping"


@dataclass(frozen=True)
class NoiseSpec:
    """Noise on one hop of the protocol.

    For ``PAULI`` noise the hop applies a bit flip with ``p_bit`` and a phase
    flip with ``p_phase``; for ``DAMPING`` it applies amplitude damping of
    strength ``gamma``.
    """

    kind: NoiseKind
    p_bit: float = 0.0
    p_phase: float = 0.0
    gamma: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", NoiseKind(self.kind))
        for name in ("p_bit", "p_phase", "gamma"):
            object.__setattr__(self, name, _check_prob(name, getattr(self, name)))
        if self.kind is NoiseKind.PAULI and self.gamma:
            raise ValueError("Pauli noise takes no gamma")
        if self.kind is NoiseKind.DAMPING and (self.p_bit or self.p_phase):
            raise ValueError("damping noise takes no flip probabilities")

    @classmethod
    def pauli(cls, p: float, p_phase: float | None = None) -> "NoiseSpec":
        return cls(NoiseKind.PAULI, p_bit=p, p_phase=p if p_phase is None else p_phase)

    @classmethod
    def damping(cls, gamma: float) -> "NoiseSpec":
        return cls(NoiseKind.DAMPING, gamma=gamma)

    @property
    def is_noiseless(self) -> bool:
        return self.p_bit == 0 and self.p_phase == 0 and self.gamma == 0

    def channel(self) -> KrausChannel:
        if self.kind is NoiseKind.PAULI:
            return pauli_hop(self.p_bit, self.p_phase)
        return amplitude_damping(self.gamma)

    def to_dict(self) -> dict:
        if self.kind is NoiseKind.PAULI:
            return {"p_bit": self.p_bit, "p_phase": self.p_phase}
        return {"gamma": self.gamma}
