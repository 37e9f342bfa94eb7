"""Dense state algebra for small qubit registers.

States, operators and channels are plain numpy arrays. Qubit 0 is the most
significant bit of the basis index everywhere in this package, so
``|q0 q1 ... q(k-1)>`` has index ``q0 * 2**(k-1) + ... + q(k-1)``.

Nothing here mutates its inputs; every function returns a new array.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

#: Tolerance for algebraic identities (unitarity, CPTP, trace, Hermiticity).
TOL_ALG = 1e-12
#: Tolerance for analytic-versus-simulation comparisons.
TOL_SIM = 1e-9
#: Lowest eigenvalue accepted for a density matrix.
TOL_EIG = 1e-10

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
# Real form |0><1| - |1><0| used by the protocol parties; equals -i * Y.
SIGMA_Y = np.array([[0, 1], [-1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)

KET_0 = np.array([1, 0], dtype=complex)
KET_1 = np.array([0, 1], dtype=complex)
KET_PLUS = np.array([1, 1], dtype=complex) / np.sqrt(2)
KET_MINUS = np.array([1, -1], dtype=complex) / np.sqrt(2)


class Basis(str, Enum):
    COMPUTATIONAL = "computational"
    HADAMARD = "hadamard"


def num_qubits(dim: int) -> int:
    k = int(dim).bit_length() - 1
    if dim < 1 or 2**k != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return k


def ket(bits: str) -> np.ndarray:
    """Computational basis vector for a bit string such as ``"0110"``."""
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1.0
    return v


def normalize(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    norm = np.linalg.norm(psi)
    if norm == 0:
        raise ValueError("cannot normalize the zero vector")
    return psi / norm


def state_from_angles(theta: float, phi: float) -> np.ndarray:
    """Bloch-sphere pure state ``cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>``."""
    return np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)])


def density(psi) -> np.ndarray:
    """Projector ``|psi><psi|`` of a normalized state vector."""
    psi = np.asarray(psi, dtype=complex)
    check_state_vector(psi)
    return np.outer(psi, psi.conj())


def check_state_vector(psi: np.ndarray) -> None:
    num_qubits(psi.shape[0])
    if not np.all(np.isfinite(psi)):
        raise ValueError("state vector has non-finite amplitudes")
    if abs(np.linalg.norm(psi) - 1.0) > TOL_ALG:
        raise ValueError(f"state vector norm {np.linalg.norm(psi)!r} is not 1")


def check_density_matrix(rho: np.ndarray, tol: float = TOL_ALG) -> None:
    """Raise ``ValueError`` unless ``rho`` is a valid density matrix."""
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got shape {rho.shape}")
    num_qubits(rho.shape[0])
    if not np.all(np.isfinite(rho)):
        raise ValueError("density matrix has non-finite entries")
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > tol:
        raise ValueError(f"density matrix trace {np.trace(rho).real!r} is not 1")
    if np.linalg.eigvalsh(rho).min() < -TOL_EIG:
        raise ValueError("density matrix has a negative eigenvalue")


def is_unitary(u: np.ndarray, tol: float = TOL_ALG) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return bool(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) <= tol)


@dataclass(frozen=True)
class KrausChannel:
    """A CPTP map given by its Kraus operators.

    Operators may be rectangular (``dim_out x dim_in``), which is how encoders
    and decoders between registers of different size are represented.
    """

    operators: tuple

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=complex) for k in self.operators)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        shape = ops[0].shape
        if any(k.ndim != 2 or k.shape != shape for k in ops):
            raise ValueError("Kraus operators must be matrices of one shape")
        if not all(np.all(np.isfinite(k)) for k in ops):
            raise ValueError("Kraus operators have non-finite entries")
        completeness = sum(k.conj().T @ k for k in ops)
        if np.max(np.abs(completeness - np.eye(shape[1]))) > TOL_ALG:
            raise ValueError("Kraus operators are not trace preserving (sum K^dag K != I)")
        object.__setattr__(self, "operators", ops)

    @property
    def dim_in(self) -> int:
        return self.operators[0].shape[1]

    @property
    def dim_out(self) -> int:
        return self.operators[0].shape[0]

    def __len__(self) -> int:
        return len(self.operators)

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        return apply_channel(rho, self)

    def then(self, other: "KrausChannel") -> "KrausChannel":
        """Channel applying ``self`` first and ``other`` second."""
        return KrausChannel(tuple(b @ a for b in other.operators for a in self.operators))


def identity_channel(dim: int = 2) -> KrausChannel:
    return KrausChannel((np.eye(dim),))


def tensor(a, b) -> np.ndarray:
    """Kronecker product; ``a`` occupies the high-order (leading) qubits."""
    return np.kron(np.asarray(a), np.asarray(b))


def tensor_all(factors: Sequence) -> np.ndarray:
    out = np.ones((1,) * np.asarray(factors[0]).ndim, dtype=complex)
    for f in factors:
        out = np.kron(out, f)
    return out


def _check_targets(targets: Sequence[int], n: int) -> tuple[int, ...]:
    targets = tuple(int(t) for t in targets)
    if len(set(targets)) != len(targets):
        raise ValueError(f"duplicate target qubits {targets}")
    for t in targets:
        if not 0 <= t < n:
            raise ValueError(f"target qubit {t} outside register of {n} qubits")
    return targets


def _act_left(op: np.ndarray, tensor_: np.ndarray, axes: Sequence[int]) -> np.ndarray:
    t = len(axes)
    op_t = op.reshape((2,) * (2 * t))
    out = np.tensordot(op_t, tensor_, axes=(list(range(t, 2 * t)), list(axes)))
    return np.moveaxis(out, list(range(t)), list(axes))


def _sandwich(rho: np.ndarray, ops: Sequence[np.ndarray], targets: tuple[int, ...]) -> np.ndarray:
    """``sum_k K rho K^dag`` with each ``K`` acting on ``targets``."""
    n = num_qubits(rho.shape[0])
    dim = rho.shape[0]
    rho_t = rho.reshape((2,) * (2 * n))
    col_axes = [n + t for t in targets]
    out = np.zeros_like(rho_t, dtype=complex)
    for k in ops:
        tmp = _act_left(k, rho_t, targets)
        out += _act_left(k.conj(), tmp, col_axes)
    return out.reshape(dim, dim)


def lift_operator(op: np.ndarray, targets: Sequence[int], n: int) -> np.ndarray:
    """Full ``2**n`` matrix of ``op`` acting on ``targets`` (in that order)."""
    targets = _check_targets(targets, n)
    op = np.asarray(op, dtype=complex)
    if op.shape != (2 ** len(targets),) * 2:
        raise ValueError(f"operator shape {op.shape} does not match {len(targets)} targets")
    eye = np.eye(2**n, dtype=complex).reshape((2,) * (2 * n))
    return _act_left(op, eye, targets).reshape(2**n, 2**n)


def _hermitize(rho: np.ndarray) -> np.ndarray:
    return 0.5 * (rho + rho.conj().T)


def apply_unitary(rho: np.ndarray, u: np.ndarray, targets: Sequence[int] | None = None) -> np.ndarray:
    """Conjugate ``rho`` by ``u`` acting on the ordered ``targets``."""
    u = np.asarray(u, dtype=complex)
    if not is_unitary(u):
        raise ValueError("operator is not unitary")
    n = num_qubits(rho.shape[0])
    if targets is None:
        targets = range(n)
    targets = _check_targets(targets, n)
    if u.shape[0] != 2 ** len(targets):
        raise ValueError(f"unitary of dimension {u.shape[0]} cannot act on {len(targets)} qubits")
    return _hermitize(_sandwich(rho, [u], targets))


def apply_channel(rho: np.ndarray, ch: KrausChannel, targets: Sequence[int] | None = None) -> np.ndarray:
    """Apply ``ch`` to the qubits ``targets`` of ``rho``.

    With ``targets=None`` the channel acts on the whole register and may change
    its dimension (encoders and decoders).
    """
    rho = np.asarray(rho, dtype=complex)
    if targets is None:
        if ch.dim_in != rho.shape[0]:
            raise ValueError(f"channel input dimension {ch.dim_in} != state dimension {rho.shape[0]}")
        out = sum(k @ rho @ k.conj().T for k in ch.operators)
        return _hermitize(out)
    n = num_qubits(rho.shape[0])
    targets = _check_targets(targets, n)
    if ch.dim_in != ch.dim_out or ch.dim_in != 2 ** len(targets):
        raise ValueError(f"channel of dimension {ch.dim_in}->{ch.dim_out} cannot act on {len(targets)} qubits")
    return _hermitize(_sandwich(rho, ch.operators, targets))


def partial_trace(rho: np.ndarray, keep: Sequence[int]) -> np.ndarray:
    """Reduced state on ``keep`` (output keeps the listed order)."""
    n = num_qubits(rho.shape[0])
    keep = _check_targets(keep, n)
    if not keep:
        raise ValueError("keep at least one qubit")
    drop = [q for q in range(n) if q not in keep]
    rho_t = np.asarray(rho).reshape((2,) * (2 * n))
    letters = "abcdefghijklmnopqrstuvwxyz"
    rows = list(letters[:n])
    cols = list(letters[n : 2 * n])
    for q in drop:
        cols[q] = rows[q]
    out = "".join(rows[q] for q in keep) + "".join(cols[q] for q in keep)
    reduced = np.einsum("".join(rows) + "".join(cols) + "->" + out, rho_t)
    d = 2 ** len(keep)
    return reduced.reshape(d, d)


def projector(basis: Basis | str, outcome: int) -> np.ndarray:
    basis = Basis(basis)
    if outcome not in (0, 1):
        raise ValueError(f"outcome must be 0 or 1, got {outcome!r}")
    if basis is Basis.COMPUTATIONAL:
        v = KET_0 if outcome == 0 else KET_1
    else:
        v = KET_PLUS if outcome == 0 else KET_MINUS
    return np.outer(v, v.conj())


def measure_probability(rho: np.ndarray, target: int, basis: Basis | str = Basis.COMPUTATIONAL, outcome: int = 0) -> float:
    """Probability of ``outcome`` when measuring qubit ``target`` in ``basis``."""
    n = num_qubits(rho.shape[0])
    (target,) = _check_targets([target], n)
    reduced = partial_trace(rho, [target])
    p = float(np.real(np.trace(projector(basis, outcome) @ reduced)))
    return min(max(p, 0.0), 1.0)


def fidelity(rho: np.ndarray, psi: np.ndarray) -> float:
    """Pure-target fidelity ``<psi|rho|psi>``."""
    psi = np.asarray(psi, dtype=complex)
    if rho.shape[0] != psi.shape[0]:
        raise ValueError(f"state dimension {psi.shape[0]} does not match rho {rho.shape}")
    return float(np.real(psi.conj() @ rho @ psi))


def purity(rho: np.ndarray) -> float:
    return float(np.real(np.trace(rho @ rho)))


def channel_from_map(fn, dim_in: int) -> KrausChannel:
    """Kraus form of a linear CPTP map given as a Python callable.

    The map is evaluated on each matrix unit ``|i><j|`` to build its Choi
    matrix, whose eigendecomposition yields a minimal Kraus set. ``fn`` is
    only ever called on Hermitian inputs (units are split as
    ``|i><j| = (A - iB) / 2`` with ``A``, ``B`` Hermitian), so maps that
    symmetrize their output are handled correctly.
    """
    blocks = {}
    for i in range(dim_in):
        for j in range(dim_in):
            unit = np.zeros((dim_in, dim_in), dtype=complex)
            unit[i, j] = 1.0
            herm_a = unit + unit.conj().T
            herm_b = 1j * (unit - unit.conj().T)
            blocks[i, j] = 0.5 * (np.asarray(fn(herm_a), dtype=complex) - 1j * np.asarray(fn(herm_b), dtype=complex))
    dim_out = blocks[0, 0].shape[0]
    choi = np.zeros((dim_in * dim_out, dim_in * dim_out), dtype=complex)
    for (i, j), b in blocks.items():
        choi[i * dim_out : (i + 1) * dim_out, j * dim_out : (j + 1) * dim_out] = b
    choi = 0.5 * (choi + choi.conj().T)
    vals, vecs = np.linalg.eigh(choi)
    ops = []
    for lam, v in zip(vals, vecs.T):
        if lam > 1e-14:
            # v = sum_i |i> (x) K|i>, so column i of K is the i-th block of v
            ops.append(np.sqrt(lam) * v.reshape(dim_in, dim_out).T)
    return KrausChannel(tuple(ops))
