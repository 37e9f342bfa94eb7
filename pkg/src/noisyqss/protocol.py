"""Multiparty secret sharing of a classical bit over noisy hops.

Parties, in order of the qubit's journey: Bob prepares one of
``|0>, |1>, |+>, |->``; each of the ``n - 2`` intermediate receivers applies a
random operation from ``{I, Y, H}``; Alice encodes her secret bit with ``I``
(0) or ``Y`` (1) and sends the qubit back to the first receiver. The
receivers then undo their operations (last intermediate first, Bob last) and
measure in the computational basis.

Hops are indexed in that order: ``hops[0]`` is Bob to the first receiver,
``hops[i]`` leaves intermediate ``i``, ``hops[n-2]`` arrives at Alice and
``hops[n-1]`` is Alice back to the first receiver. For three parties this is
``(B, C, A)`` in the usual channel naming.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cache, cached_property

import numpy as np

from . import closed_form
from .codes import CODES, CodeSpec
from .noise import NoiseKind, NoiseSpec, apply_iid
from .qstate import (
    HADAMARD,
    I2,
    KET_0,
    SIGMA_X,
    SIGMA_Y,
    Basis,
    KrausChannel,
    apply_channel,
    channel_from_map,
    lift_operator,
)

MAX_EXACT_PARTIES = 8


class Preparation(str, Enum):
    ZERO = "0"
    ONE = "1"
    PLUS = "+"
    MINUS = "-"

    @property
    def basis(self) -> Basis:
        return Basis.COMPUTATIONAL if self in (Preparation.ZERO, Preparation.ONE) else Basis.HADAMARD

    @property
    def unitary(self) -> np.ndarray:
        """Bob's operation ``U_B`` with ``U_B|0>`` the prepared state."""
        return {
            Preparation.ZERO: I2,
            Preparation.ONE: SIGMA_X,
            Preparation.PLUS: HADAMARD,
            Preparation.MINUS: HADAMARD @ SIGMA_X,
        }[self]


class PartyOp(str, Enum):
    I = "I"
    Y = "Y"
    H = "H"

    @property
    def matrix(self) -> np.ndarray:
        return {PartyOp.I: I2, PartyOp.Y: SIGMA_Y, PartyOp.H: HADAMARD}[self]


def alice_operation(secret: int) -> PartyOp:
    """Alice's encoding: ``I`` for 0, ``Y`` for 1."""
    if secret not in (0, 1):
        raise ValueError(f"secret must be 0 or 1, got {secret!r}")
    return PartyOp.Y if secret else PartyOp.I


@dataclass(frozen=True)
class ChoiceTuple:
    """One joint random choice of all parties."""

    prep: Preparation
    intermediate_ops: tuple[PartyOp, ...]
    secret: int

    def __post_init__(self):
        object.__setattr__(self, "prep", Preparation(self.prep))
        object.__setattr__(self, "intermediate_ops", tuple(PartyOp(o) for o in self.intermediate_ops))
        if self.secret not in (0, 1):
            raise ValueError(f"secret must be 0 or 1, got {self.secret!r}")

    @property
    def parties(self) -> int:
        return len(self.intermediate_ops) + 2

    def label(self) -> str:
        ops = "".join(o.value for o in self.intermediate_ops)
        return f"{self.prep.value}|{ops}|{self.secret}"


def all_tuples(parties: int) -> list[ChoiceTuple]:
    """All ``4 * 3**(n-2) * 2`` choice tuples in table order."""
    if parties < 3:
        raise ValueError("the protocol needs at least three parties")
    return [
        ChoiceTuple(prep, ops, secret)
        for prep in Preparation
        for ops in itertools.product(PartyOp, repeat=parties - 2)
        for secret in (0, 1)
    ]


class QecScheme(str, Enum):
    NONE = "none"
    REPETITION = "repetition"
    FIVE_QUBIT = "five_qubit"
    FOUR_QUBIT = "four_qubit"


class QecMode(str, Enum):
    SINGLE_CYCLE = "single_cycle"
    PER_HOP = "per_hop"


@dataclass(frozen=True)
class QecSpec:
    scheme: QecScheme = QecScheme.NONE
    mode: QecMode = QecMode.SINGLE_CYCLE

    def __post_init__(self):
        object.__setattr__(self, "scheme", QecScheme(self.scheme))
        object.__setattr__(self, "mode", QecMode(self.mode))
        if self.scheme is QecScheme.REPETITION and self.mode is QecMode.PER_HOP:
            raise ValueError("the repetition code needs the preparation basis and cannot run per hop")

    @property
    def code(self) -> CodeSpec | None:
        return CODES.get(self.scheme.value)


class EvalMode(str, Enum):
    EXACT = "exact"
    MONTE_CARLO = "monte_carlo"


@dataclass(frozen=True)
class Evaluation:
    mode: EvalMode = EvalMode.EXACT
    trials: int = 100_000
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "mode", EvalMode(self.mode))
        if int(self.trials) < 1:
            raise ValueError("trials must be at least 1")
        if int(self.seed) < 0:
            raise ValueError("seed must be non-negative")


@dataclass(frozen=True)
class ProtocolConfig:
    parties: int
    hops: tuple[NoiseSpec, ...]
    qec: QecSpec = field(default_factory=QecSpec)
    evaluation: Evaluation = field(default_factory=Evaluation)

    def __post_init__(self):
        object.__setattr__(self, "hops", tuple(self.hops))
        if self.parties < 3:
            raise ValueError("the protocol needs at least three parties")
        if len(self.hops) != self.parties:
            raise ValueError(f"{self.parties} parties need {self.parties} hops, got {len(self.hops)}")

    @classmethod
    def uniform(cls, parties: int, noise: NoiseSpec, **kwargs) -> "ProtocolConfig":
        return cls(parties, (noise,) * parties, **kwargs)

    @property
    def noise_kind(self) -> NoiseKind:
        kinds = {h.kind for h in self.hops}
        return kinds.pop() if len(kinds) == 1 else NoiseKind.PAULI

    def with_qec(self, scheme: QecScheme | str, mode: QecMode | str = QecMode.SINGLE_CYCLE) -> "ProtocolConfig":
        return replace(self, qec=QecSpec(scheme, mode))


@dataclass
class ErrorReport:
    """Secret-bit error probabilities for one configuration.

    ``error_majority_of_average`` is only set for the repetition code: it
    applies the majority formula to the tuple-averaged single-copy error,
    whereas ``error_exact`` averages the per-tuple majority error.
    """

    error_exact: float | None = None
    error_mc: float | None = None
    mc_stderr: float | None = None
    trials: int | None = None
    seed: int | None = None
    error_analytic: float | None = None
    error_majority_of_average: float | None = None
    per_tuple: dict[ChoiceTuple, float] | None = None

    def to_dict(self, include_tuples: bool = False) -> dict:
        out = {
            "error_exact": self.error_exact,
            "error_mc": self.error_mc,
            "mc_stderr": self.mc_stderr,
            "trials": self.trials,
            "seed": self.seed,
            "error_analytic": self.error_analytic,
            "error_majority_of_average": self.error_majority_of_average,
        }
        if include_tuples and self.per_tuple is not None:
            out["per_tuple"] = [
                {
                    "prep": t.prep.value,
                    "ops": [o.value for o in t.intermediate_ops],
                    "secret": t.secret,
                    "error": e,
                }
                for t, e in self.per_tuple.items()
            ]
        return out


def _majority(e: float) -> float:
    return e * e * (3 - 2 * e)


def _dagger(m: np.ndarray) -> np.ndarray:
    return np.swapaxes(m, -1, -2).conj()


def _kraus_batch(kset: np.ndarray, rho: np.ndarray) -> np.ndarray:
    return sum(k @ rho @ k.conj().T for k in kset)


def _clip(p: float) -> float:
    return min(max(p, 0.0), 1.0)


def decoder_gamma(cfg: ProtocolConfig, hop: int | None = None) -> float:
    """Damping strength tuned into the four-qubit recovery.

    Per hop it is that hop's ``gamma``; for a single cycle it is the
    cumulative strength ``1 - prod(1 - gamma_h)`` of all hops.
    """
    if hop is not None:
        return cfg.hops[hop].gamma
    survive = math.prod(1 - h.gamma for h in cfg.hops)
    return min(1 - survive, 1 - 1e-12)


@cache
def effective_hop_channel(code_name: str, noise: NoiseSpec, gamma: float) -> KrausChannel:
    """Encode, apply noise to every physical qubit, recover and decode."""
    code = CODES[code_name]
    enc = code.encoder()
    decoder = code.decoder(gamma)
    ch = noise.channel()

    def hop(rho):
        return apply_channel(apply_iid(enc @ rho @ enc.conj().T, ch), decoder)

    return channel_from_map(hop, 2)


class Pipeline:
    """Per-configuration operators shared by the exact and sampled runners."""

    def __init__(self, cfg: ProtocolConfig):
        self.cfg = cfg
        self.code = cfg.qec.code
        self.encoded = self.code is not None and cfg.qec.mode is QecMode.SINGLE_CYCLE
        self.copies = 3 if cfg.qec.scheme is QecScheme.REPETITION else 1

    @property
    def wire_qubits(self) -> int:
        return self.code.physical_qubits if self.encoded else 1

    @cached_property
    def hop_channels(self) -> list[KrausChannel]:
        """Channel acting on the carried register at each hop (unencoded wires)."""
        if self.code is not None and self.cfg.qec.mode is QecMode.PER_HOP:
            return [
                effective_hop_channel(self.code.name, h, decoder_gamma(self.cfg, i))
                for i, h in enumerate(self.cfg.hops)
            ]
        return [h.channel() for h in self.cfg.hops]

    @cached_property
    def final_decoder(self) -> KrausChannel | None:
        if not self.encoded:
            return None
        return self.code.decoder(decoder_gamma(self.cfg))

    def op(self, u: np.ndarray) -> np.ndarray:
        return self.code.logical(u) if self.encoded else u

    def initial_vector(self, prep: Preparation) -> np.ndarray:
        psi = prep.unitary @ KET_0
        return self.code.encoder() @ psi if self.encoded else psi

    def sender_ops(self, t: ChoiceTuple) -> list[np.ndarray]:
        """Operation applied right before each hop (Bob's is his preparation)."""
        ops = [np.eye(2 ** self.wire_qubits)]
        ops += [self.op(o.matrix) for o in t.intermediate_ops]
        ops.append(self.op(alice_operation(t.secret).matrix))
        return ops

    def undo_ops(self, t: ChoiceTuple) -> list[np.ndarray]:
        """Inverse operations in application order, ending with Bob's."""
        ops = [self.op(o.matrix).conj().T for o in reversed(t.intermediate_ops)]
        ops.append(self.op(t.prep.unitary).conj().T)
        return ops

    def single_error(self, t: ChoiceTuple) -> float:
        """Wrong-bit probability of one protocol copy."""
        if t.parties != self.cfg.parties:
            raise ValueError(f"tuple for {t.parties} parties used with a {self.cfg.parties}-party config")
        psi = self.initial_vector(t.prep)
        rho = np.outer(psi, psi.conj())
        for i, (u, hop) in enumerate(zip(self.sender_ops(t), self.cfg.hops)):
            rho = u @ rho @ u.conj().T
            if self.encoded:
                rho = apply_iid(rho, hop.channel())
            else:
                rho = apply_channel(rho, self.hop_channels[i])
        for u in self.undo_ops(t):
            rho = u @ rho @ u.conj().T
        if self.encoded:
            rho = apply_channel(rho, self.final_decoder)
        p_correct = float(np.real(rho[t.secret, t.secret])) / float(np.real(np.trace(rho)))
        return _clip(1.0 - p_correct)

    @cached_property
    def _hop_kraus(self) -> list[list[np.ndarray]]:
        """Per hop, the stacked Kraus sets applied one after another."""
        if not self.encoded:
            return [[np.stack(ch.operators)] for ch in self.hop_channels]
        k = self.wire_qubits
        return [
            [np.stack([lift_operator(op, [q], k) for op in h.channel().operators]) for q in range(k)]
            for h in self.cfg.hops
        ]

    def batch_single_errors(self, tuples: list[ChoiceTuple]) -> np.ndarray:
        """Vectorized :meth:`single_error` over many tuples at once."""
        if any(t.parties != self.cfg.parties for t in tuples):
            raise ValueError("tuple party count does not match the config")
        n = self.cfg.parties
        preps = list(Preparation)
        ops = list(PartyOp)
        op_mats = np.stack([self.op(o.matrix) for o in ops])
        alice = np.stack([self.op(alice_operation(s).matrix) for s in (0, 1)])
        prep_idx = np.array([preps.index(t.prep) for t in tuples])
        op_idx = np.array([[ops.index(o) for o in t.intermediate_ops] for t in tuples]).reshape(len(tuples), n - 2)
        secret = np.array([t.secret for t in tuples])

        init = np.stack([self.initial_vector(p) for p in preps])[prep_idx]
        rho = init[:, :, None] * init.conj()[:, None, :]
        senders = [None] + [op_mats[op_idx[:, i]] for i in range(n - 2)] + [alice[secret]]
        for u, kraus_sets in zip(senders, self._hop_kraus):
            if u is not None:
                rho = u @ rho @ _dagger(u)
            for kset in kraus_sets:
                rho = _kraus_batch(kset, rho)
        undo = [_dagger(op_mats[op_idx[:, i]]) for i in reversed(range(n - 2))]
        undo.append(_dagger(np.stack([self.op(p.unitary) for p in preps])[prep_idx]))
        for u in undo:
            rho = u @ rho @ _dagger(u)
        if self.encoded:
            kset = np.stack(self.final_decoder.operators)
            rho = _kraus_batch(kset, rho)
        rows = np.arange(len(tuples))
        p_correct = np.real(rho[rows, secret, secret]) / np.real(np.trace(rho, axis1=1, axis2=2))
        return np.clip(1.0 - p_correct, 0.0, 1.0)

    def tuple_error(self, t: ChoiceTuple) -> float:
        e = self.single_error(t)
        return _majority(e) if self.copies == 3 else e


@cache
def pipeline(cfg: ProtocolConfig) -> Pipeline:
    return Pipeline(cfg)


def run_tuple(cfg: ProtocolConfig, t: ChoiceTuple) -> float:
    """Exact wrong-bit probability for one choice tuple."""
    return pipeline(cfg).tuple_error(t)


def analytic_error(cfg: ProtocolConfig) -> float | None:
    """Closed-form error when one exists for this configuration, else None."""
    scheme = cfg.qec.scheme
    if scheme not in (QecScheme.NONE, QecScheme.REPETITION):
        return None
    e = None
    if cfg.noise_kind is NoiseKind.PAULI and all(h.p_bit == h.p_phase for h in cfg.hops):
        e = closed_form.e1_flip_hops([h.p_bit for h in cfg.hops])
    elif all(h.kind is NoiseKind.DAMPING for h in cfg.hops) and cfg.parties == 3:
        g_b, g_c, g_a = (h.gamma for h in cfg.hops)
        e = closed_form.e1_damp_general(g_a, g_b, g_c)
    if e is None:
        return None
    return closed_form.e_majority(e) if scheme is QecScheme.REPETITION else e


def run_exact(cfg: ProtocolConfig) -> ErrorReport:
    """Uniform average of the exact per-tuple error over all choice tuples."""
    if cfg.parties > MAX_EXACT_PARTIES:
        raise ValueError(f"exact enumeration supports at most {MAX_EXACT_PARTIES} parties")
    pipe = pipeline(cfg)
    tuples = all_tuples(cfg.parties)
    single = [float(e) for e in pipe.batch_single_errors(tuples)]
    report = ErrorReport(error_analytic=analytic_error(cfg))
    if pipe.copies == 3:
        per = [_majority(e) for e in single]
        report.error_majority_of_average = _majority(float(np.mean(single)))
    else:
        per = single
    report.per_tuple = dict(zip(tuples, per))
    report.error_exact = _clip(float(np.mean(per)))
    return report


def run(cfg: ProtocolConfig, workers: int = 1) -> ErrorReport:
    """Evaluate ``cfg`` as configured; exact values are included when feasible."""
    from .montecarlo import run_montecarlo

    report = run_exact(cfg) if cfg.parties <= MAX_EXACT_PARTIES else ErrorReport(error_analytic=analytic_error(cfg))
    if cfg.evaluation.mode is EvalMode.MONTE_CARLO:
        mc = run_montecarlo(cfg, workers=workers)
        report.error_mc, report.mc_stderr = mc.error_mc, mc.mc_stderr
        report.trials, report.seed = mc.trials, mc.seed
    return report
