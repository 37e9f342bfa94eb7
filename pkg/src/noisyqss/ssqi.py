"""Secret sharing of a qubit: teleportation whose outcome bits travel by QSS.

Alice teleports a qubit to Bob but, instead of announcing the two Bell
measurement bits, shares each of them with the other receivers through the
classical-bit protocol. A shared bit arrives wrong with the protocol's
error probability, and Bob then applies the wrong correction.
"""

from __future__ import annotations

from dataclasses import replace

import numpy as np

from .protocol import ProtocolConfig, QecSpec, run_exact
from .qstate import (
    HADAMARD,
    SIGMA_X,
    SIGMA_Z,
    TOL_ALG,
    check_state_vector,
    fidelity,
    lift_operator,
    partial_trace,
)

#: Bell pair (|00> + |11>)/sqrt(2) on qubits 1 (Alice) and 2 (Bob). Measuring
#: qubit 0 gives the phase bit ``a`` and qubit 1 the bit-flip bit ``b``; Bob
#: corrects with ``Z^a X^b`` (X applied first).
CORRECTION_CONVENTION = "bell=(|00>+|11>)/sqrt2; correction=Z^a X^b; a=phase bit (qubit 0), b=flip bit (qubit 1)"

_CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


def correction_convention() -> str:
    return CORRECTION_CONVENTION


def correction(a: int, b: int) -> np.ndarray:
    return np.linalg.matrix_power(SIGMA_Z, a) @ np.linalg.matrix_power(SIGMA_X, b)


def _pre_measurement_state(psi: np.ndarray) -> np.ndarray:
    bell = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
    state = np.kron(psi, bell)
    state = lift_operator(_CNOT, [0, 1], 3) @ state
    state = lift_operator(HADAMARD, [0], 3) @ state
    return np.outer(state, state.conj())


def teleport_fidelity(psi, e_phase: float = 0.0, e_bit: float = 0.0) -> float:
    """Average fidelity of Bob's qubit when the outcome bits flip independently.

    ``e_phase`` and ``e_bit`` are the probabilities that the phase and the
    bit-flip correction bits reach Bob inverted.
    """
    psi = np.asarray(psi, dtype=complex)
    check_state_vector(psi)
    if psi.shape != (2,):
        raise ValueError("teleportation input must be a single qubit")
    rho = _pre_measurement_state(psi)
    total = 0.0
    for a in (0, 1):
        for b in (0, 1):
            proj = np.zeros((8, 8), dtype=complex)
            for c in (0, 1):
                i = (a << 2) | (b << 1) | c
                proj[i, i] = 1.0
            branch = proj @ rho @ proj
            p_ab = float(np.real(np.trace(branch)))
            if p_ab <= 0:
                continue
            bob = partial_trace(branch, [2]) / p_ab
            for fa, pa in ((0, 1 - e_phase), (1, e_phase)):
                for fb, pb in ((0, 1 - e_bit), (1, e_bit)):
                    if pa * pb == 0:
                        continue
                    u = correction(a ^ fa, b ^ fb)
                    total += p_ab * pa * pb * fidelity(u @ bob @ u.conj().T, psi)
    return total


def run_ssqi(cfg: ProtocolConfig, psi) -> float:
    """Teleportation fidelity when both outcome bits are shared under ``cfg``."""
    e = run_exact(cfg).error_exact
    return teleport_fidelity(psi, e, e)


def ssqi_report(cfg: ProtocolConfig, psi) -> dict:
    """Compare sharing the outcome bits with and without the configured code.

    Fidelity falls strictly as the shared-bit error grows on ``[0, 1/2]``,
    so there ``fidelity_improved`` and ``qec_effective`` agree. Past 1/2 a
    miscorrection can be undone by a second one and fidelity is no longer
    monotone in the error.
    """
    plain = replace(cfg, qec=QecSpec())
    e_noise = run_exact(plain).error_exact
    e_qec = run_exact(cfg).error_exact
    f_without = teleport_fidelity(psi, e_noise, e_noise)
    f_with = teleport_fidelity(psi, e_qec, e_qec)
    return {
        "e_noise": e_noise,
        "e_qec": e_qec,
        "fidelity_without": f_without,
        "fidelity_with": f_with,
        "fidelity_improved": f_with - f_without > TOL_ALG,
        "qec_effective": e_noise - e_qec > TOL_ALG,
        "convention": CORRECTION_CONVENTION,
    }


__all__ = ["CORRECTION_CONVENTION", "correction_convention", "run_ssqi", "ssqi_report", "teleport_fidelity"]
