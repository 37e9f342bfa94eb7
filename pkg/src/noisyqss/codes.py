"""Error-correcting codes used to protect the shared qubits.

Three schemes are provided:

* ``rep3``: three protocol copies decoded by classical majority vote.
* ``five``: the five-qubit perfect code with a 16-operator recovery that
  resets four ancillas after decoding. The decoded data qubit sits on the
  middle wire (qubit 2) so each recovery operator factorizes as
  ``|00><s1| (x) sigma (x) |00><s2|``.
* ``four``: the four-qubit approximate amplitude-damping code with a
  syndrome-based recovery (pair parities, damped-qubit identification and a
  no-damping rebalancing rotation).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cache
from typing import Callable, Sequence

import numpy as np

from .qstate import (
    I2,
    PAULI_Y,
    SIGMA_X,
    SIGMA_Z,
    TOL_ALG,
    KrausChannel,
    apply_unitary,
    check_state_vector,
    is_unitary,
    ket,
    partial_trace,
    tensor_all,
)

_PAULIS = {"I": I2, "X": SIGMA_X, "Y": PAULI_Y, "Z": SIGMA_Z}


def rep3_majority(bits: Sequence[int]) -> int:
    """Majority value of three decoded bits."""
    if len(bits) != 3 or any(b not in (0, 1) for b in bits):
        raise ValueError(f"expected three bits, got {bits!r}")
    return int(sum(bits) >= 2)


def pauli_string(label: str) -> np.ndarray:
    """Matrix of a Pauli string like ``"IXZYI"`` (Y is the Hermitian Pauli)."""
    return tensor_all([_PAULIS[c] for c in label])


# ---------------------------------------------------------------------------
# Five-qubit perfect code
# ---------------------------------------------------------------------------

_S = 1 / (2 * np.sqrt(2))
_FIVE_ZERO = {
    "00000": -1, "00110": 1, "01001": 1, "01111": 1,
    "10011": -1, "10101": 1, "11010": 1, "11100": 1,
}
_FIVE_ONE = {
    "11111": -1, "11001": 1, "10110": 1, "10000": 1,
    "01100": 1, "01010": -1, "00101": -1, "00011": -1,
}

# Data-qubit correction of recovery operator R_k, k = 4 * s1 + s2 where s1
# and s2 are the 2-bit syndromes read on the two ancilla pairs.
FIVE_RECOVERY_PAULIS = (
    "I", "Z", "I", "I",
    "I", "Z", "X", "X",
    "I", "X", "Z", "X",
    "Z", "XZ", "X", "Z",
)

FIVE_DATA_QUBIT = 2


def _correction(label: str) -> np.ndarray:
    if label == "XZ":
        return SIGMA_X @ SIGMA_Z
    return _PAULIS[label]


def five_logical_states() -> tuple[np.ndarray, np.ndarray]:
    zero = sum(sign * _S * ket(b) for b, sign in _FIVE_ZERO.items())
    one = sum(sign * _S * ket(b) for b, sign in _FIVE_ONE.items())
    return zero, one


def _symplectic(label: str) -> int:
    x = sum(1 << i for i, c in enumerate(label) if c in "XY")
    z = sum(1 << i for i, c in enumerate(label) if c in "ZY")
    return (x << 5) | z


def _anticommute(a: int, b: int) -> int:
    ax, az = a >> 5, a & 31
    bx, bz = b >> 5, b & 31
    return (bin(ax & bz).count("1") + bin(az & bx).count("1")) & 1


@cache
def five_stabilizer_generators() -> tuple[str, ...]:
    """Four independent Pauli stabilizers of the code (signs dropped).

    Found by search: a Pauli string stabilizes the code when it maps both
    logical states to the same multiple (+1 or -1) of themselves.
    """
    code = np.stack(five_logical_states(), axis=1)
    gens: list[str] = []
    span = {0}
    for chars in itertools.product("IXYZ", repeat=5):
        label = "".join(chars)
        if label == "IIIII":
            continue
        image = pauli_string(label) @ code
        if not (np.allclose(image, code) or np.allclose(image, -code)):
            continue
        v = _symplectic(label)
        if v in span:
            continue
        gens.append(label)
        span |= {s ^ v for s in span}
        if len(gens) == 4:
            break
    return tuple(gens)


@cache
def five_syndrome_errors() -> tuple[str, ...]:
    """Single-qubit Pauli error flagged by each of the 16 syndromes."""
    gens = [_symplectic(g) for g in five_stabilizer_generators()]
    table: dict[int, str] = {0: "IIIII"}
    for q in range(5):
        for p in "XYZ":
            label = "I" * q + p + "I" * (4 - q)
            v = _symplectic(label)
            k = sum(_anticommute(v, g) << (3 - j) for j, g in enumerate(gens))
            if k in table:
                raise RuntimeError("five-qubit code is degenerate for single-qubit errors")
            table[k] = label
    return tuple(table[k] for k in range(16))


def _five_register_index(s1: int, bit: int, s2: int) -> int:
    return (s1 << 3) | (bit << 2) | s2


@cache
def five_encoding_unitary() -> np.ndarray:
    """32x32 encoder mapping ``|00>|b>|00>`` to the logical state ``|b_L>``.

    The remaining columns are fixed so that undoing the encoder after a
    single-qubit Pauli error ``E`` leaves the ancillas in the syndrome of
    ``E`` and the data qubit in a state the matching recovery operator
    corrects: ``Enc |s1> chi |s2> = E_k L sigma_k chi``.
    """
    logical = np.stack(five_logical_states(), axis=1)
    enc = np.zeros((32, 32), dtype=complex)
    errors = five_syndrome_errors()
    for k in range(16):
        s1, s2 = k >> 2, k & 3
        block = pauli_string(errors[k]) @ logical @ _correction(FIVE_RECOVERY_PAULIS[k])
        for bit in (0, 1):
            enc[:, _five_register_index(s1, bit, s2)] = block[:, bit]
    if not is_unitary(enc):
        raise RuntimeError("five-qubit encoder completion is not unitary")
    return enc


@cache
def five_recovery_operators() -> tuple[np.ndarray, ...]:
    """The 16 recovery operators ``R_k = |00><s1| (x) sigma_k (x) |00><s2|``."""
    ops = []
    for k, label in enumerate(FIVE_RECOVERY_PAULIS):
        s1, s2 = k >> 2, k & 3
        left = np.zeros((4, 4), dtype=complex)
        left[0, s1] = 1.0
        right = np.zeros((4, 4), dtype=complex)
        right[0, s2] = 1.0
        ops.append(tensor_all([left, _correction(label), right]))
    return tuple(ops)


def five_encode(psi) -> np.ndarray:
    """Encode a single-qubit state as ``alpha|0_L> + beta|1_L>``."""
    psi = np.asarray(psi, dtype=complex)
    check_state_vector(psi)
    zero, one = five_logical_states()
    return psi[0] * zero + psi[1] * one


def five_recover_decode(rho5: np.ndarray) -> np.ndarray:
    """Undo the encoder, apply the recovery channel and discard the ancillas."""
    rho = apply_unitary(rho5, five_encoding_unitary().conj().T)
    rho = sum(r @ rho @ r.conj().T for r in five_recovery_operators())
    return partial_trace(rho, [FIVE_DATA_QUBIT])


@cache
def five_decoder() -> KrausChannel:
    """Decode-and-recover as a 5-qubit to 1-qubit channel (16 operators)."""
    enc_dag = five_encoding_unitary().conj().T
    bra_anc = np.zeros((2, 32), dtype=complex)
    for bit in (0, 1):
        bra_anc[bit, _five_register_index(0, bit, 0)] = 1.0
    return KrausChannel(tuple(bra_anc @ r @ enc_dag for r in five_recovery_operators()))


@cache
def five_encoder() -> np.ndarray:
    """32x2 isometry ``|b> -> |b_L>``."""
    return np.stack(five_logical_states(), axis=1)


def five_logical(u: np.ndarray) -> np.ndarray:
    """Logical version ``Enc (I (x) u (x) I) Enc^dag`` of a one-qubit unitary."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2) or not is_unitary(u):
        raise ValueError("five_logical needs a single-qubit unitary")
    enc = five_encoding_unitary()
    full = tensor_all([np.eye(4), u, np.eye(4)])
    return enc @ full @ enc.conj().T


# ---------------------------------------------------------------------------
# Four-qubit approximate amplitude-damping code
# ---------------------------------------------------------------------------

_SQ2 = 1 / np.sqrt(2)


def four_logical_states() -> tuple[np.ndarray, np.ndarray]:
    zero = _SQ2 * (ket("0000") + ket("1111"))
    one = _SQ2 * (ket("0011") + ket("1100"))
    return zero, one


def _four_completion() -> list[np.ndarray]:
    # Columns 0..15 of the encoder, indexed data*8 + ancilla.
    zero, one = four_logical_states()
    cols: dict[int, np.ndarray] = {
        0: zero,
        8: one,
        1: _SQ2 * (ket("0000") - ket("1111")),
        9: _SQ2 * (ket("0011") - ket("1100")),
    }
    even_even = {"0000", "0011", "1100", "1111"}
    rest = [format(i, "04b") for i in range(16) if format(i, "04b") not in even_even]
    free = [c for c in range(16) if c not in cols]
    for c, bits in zip(free, rest):
        cols[c] = ket(bits)
    return [cols[c] for c in range(16)]


@cache
def four_encoding_unitary() -> np.ndarray:
    """16x16 encoder with ``Enc4 |b>|000> = |b_L>`` (data on qubit 0)."""
    enc = np.stack(_four_completion(), axis=1)
    if not is_unitary(enc):
        raise RuntimeError("four-qubit encoder completion is not unitary")
    return enc


@cache
def four_encoder() -> np.ndarray:
    return np.stack(four_logical_states(), axis=1)


def four_encode(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    check_state_vector(psi)
    zero, one = four_logical_states()
    return psi[0] * zero + psi[1] * one


def four_logical(u: np.ndarray) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2) or not is_unitary(u):
        raise ValueError("four_logical needs a single-qubit unitary")
    enc = four_encoding_unitary()
    return enc @ np.kron(u, np.eye(8)) @ enc.conj().T


@dataclass(frozen=True)
class Syndrome:
    """Parity syndrome of the four-qubit code.

    ``damped_qubit`` (0-based) is set exactly when one pair has odd parity.
    """

    pair1_parity: int
    pair2_parity: int
    damped_qubit: int | None = None

    def __post_init__(self):
        one_odd = (self.pair1_parity + self.pair2_parity) == 1
        if one_odd != (self.damped_qubit is not None):
            raise ValueError("damped_qubit must be given iff exactly one pair parity is odd")


def four_syndrome(bits: str) -> Syndrome:
    """Syndrome read off a 4-bit computational basis string."""
    b = [int(c) for c in bits]
    p1, p2 = b[0] ^ b[1], b[2] ^ b[3]
    damped = None
    if p1 and not p2:
        damped = 0 if b[0] == 0 else 1
    elif p2 and not p1:
        damped = 2 if b[2] == 0 else 3
    return Syndrome(p1, p2, damped)


# Basis states reached by a single damping event on each qubit, as
# (image of |0_L>, image of |1_L>).
FOUR_DAMPED_IMAGES = {
    0: ("0111", "0100"),
    1: ("1011", "1000"),
    2: ("1101", "0001"),
    3: ("1110", "0010"),
}


def rebalance_angle(gamma: float) -> float:
    """Rotation angle restoring the |0000>/|1111> balance after no damping."""
    return np.pi / 4 - np.arctan((1 - gamma) ** 2)


def rebalance_rotation(gamma: float) -> np.ndarray:
    """Rotation by ``rebalance_angle(gamma)`` in span{|0000>, |1111>}."""
    theta = rebalance_angle(gamma)
    w = np.eye(16, dtype=complex)
    a, b = int("0000", 2), int("1111", 2)
    w[a, a] = w[b, b] = np.cos(theta)
    w[b, a] = np.sin(theta)
    w[a, b] = -np.sin(theta)
    return w


def _basis_projector(states: Sequence[str]) -> np.ndarray:
    p = np.zeros((16, 16), dtype=complex)
    for s in states:
        i = int(s, 2)
        p[i, i] = 1.0
    return p


def _branch_states(p1: int, p2: int) -> list[str]:
    states = []
    for i in range(16):
        syn = four_syndrome(format(i, "04b"))
        if (syn.pair1_parity, syn.pair2_parity) == (p1, p2):
            states.append(format(i, "04b"))
    return states


def four_recover_decode(rho4: np.ndarray, gamma: float) -> np.ndarray:
    """Syndrome-based recovery of the four-qubit code, returning the data qubit.

    The pair parities of qubits (0, 1) and (2, 3) are measured. With both
    even the rebalancing rotation is applied and the encoder undone. With one
    odd pair, the damped qubit is identified from the pair's first bit and the
    two basis states it can reach are mapped back to ``|0>`` and ``|1>``. Two
    odd pairs are uncorrectable and yield ``|0><0|``.
    """
    if not 0.0 <= gamma < 1.0:
        raise ValueError(f"gamma must lie in [0, 1), got {gamma!r}")
    rho4 = np.asarray(rho4, dtype=complex)
    out = np.zeros((2, 2), dtype=complex)

    p_ee = _basis_projector(_branch_states(0, 0))
    branch = p_ee @ rho4 @ p_ee
    if np.trace(branch).real > 0:
        w = rebalance_rotation(gamma)
        enc_dag = four_encoding_unitary().conj().T
        branch = enc_dag @ w @ branch @ w.conj().T @ enc_dag.conj().T
        out += partial_trace(branch, [0])

    for states in FOUR_DAMPED_IMAGES.values():
        iso = np.zeros((2, 16), dtype=complex)
        iso[0, int(states[0], 2)] = 1.0
        iso[1, int(states[1], 2)] = 1.0
        out += iso @ rho4 @ iso.conj().T

    p_oo = _basis_projector(_branch_states(1, 1))
    out[0, 0] += np.trace(p_oo @ rho4)
    return 0.5 * (out + out.conj().T)


@cache
def _four_decoder_cached(gamma: float) -> KrausChannel:
    ops = []
    p_ee = _basis_projector(_branch_states(0, 0))
    m = four_encoding_unitary().conj().T @ rebalance_rotation(gamma) @ p_ee
    for anc in range(8):
        # rows (data, anc) of the decoded register
        k = m[[anc, 8 + anc], :]
        if np.any(np.abs(k) > 0):
            ops.append(k)
    for states in FOUR_DAMPED_IMAGES.values():
        iso = np.zeros((2, 16), dtype=complex)
        iso[0, int(states[0], 2)] = 1.0
        iso[1, int(states[1], 2)] = 1.0
        ops.append(iso)
    for s in _branch_states(1, 1):
        k = np.zeros((2, 16), dtype=complex)
        k[0, int(s, 2)] = 1.0
        ops.append(k)
    return KrausChannel(tuple(ops))


def four_decoder(gamma: float) -> KrausChannel:
    """Recovery-and-decode of the four-qubit code as a 4-to-1 qubit channel."""
    gamma = float(gamma)
    if not 0.0 <= gamma < 1.0:
        raise ValueError(f"gamma must lie in [0, 1), got {gamma!r}")
    return _four_decoder_cached(gamma)


# ---------------------------------------------------------------------------
# Scheme registry
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CodeSpec:
    """An encoded-qubit scheme usable by the protocol simulator.

    ``encoder`` is the ``2**m x 2`` isometry onto the code space, ``decoder``
    maps a noise strength to the recovery-and-decode channel, and ``logical``
    lifts a one-qubit unitary to the code.
    """

    name: str
    physical_qubits: int
    encoder: Callable[[], np.ndarray]
    decoder: Callable[[float], KrausChannel]
    logical: Callable[[np.ndarray], np.ndarray]


FIVE_QUBIT = CodeSpec("five_qubit", 5, five_encoder, lambda _gamma: five_decoder(), five_logical)
FOUR_QUBIT = CodeSpec("four_qubit", 4, four_encoder, four_decoder, four_logical)

CODES = {c.name: c for c in (FIVE_QUBIT, FOUR_QUBIT)}


def completeness_error(ops: Sequence[np.ndarray]) -> float:
    """Max deviation of ``sum R^dag R`` from the identity."""
    total = sum(r.conj().T @ r for r in ops)
    return float(np.max(np.abs(total - np.eye(total.shape[0]))))


__all__ = [
    "CODES",
    "CodeSpec",
    "FIVE_QUBIT",
    "FOUR_QUBIT",
    "Syndrome",
    "TOL_ALG",
    "completeness_error",
    "five_decoder",
    "five_encode",
    "five_encoding_unitary",
    "five_logical",
    "five_recover_decode",
    "five_recovery_operators",
    "four_decoder",
    "four_encode",
    "four_encoding_unitary",
    "four_logical",
    "four_recover_decode",
    "four_syndrome",
    "rep3_majority",
]
