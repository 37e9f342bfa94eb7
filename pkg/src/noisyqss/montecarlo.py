"""Seeded Monte Carlo estimate of the secret-bit error.

Each trial follows one quantum trajectory: pure states, with a Kraus branch
sampled for every noisy qubit at every hop and for every recovery step.

Reproducibility contract. Trials are split into fixed blocks of
``BLOCK_SIZE``; block ``b`` draws from ``numpy.random.Generator(PCG64)``
seeded with ``SeedSequence([seed, b])``. Inside a block the draws are taken,
vectorized over trials, in this order: preparation, intermediate operations,
secret bit; then hop by hop the noise branch of each physical qubit (qubit 0
first) followed by the recovery branch when decoding per hop; then the final
recovery branch (single-cycle codes); then the measurement. Blocks may be
evaluated by any number of workers and the result does not change.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .protocol import (
    ErrorReport,
    Pipeline,
    PartyOp,
    Preparation,
    ProtocolConfig,
    QecMode,
    alice_operation,
    decoder_gamma,
    pipeline,
)

BLOCK_SIZE = 10_000


def block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), int(block)])))


def sample_kraus(psi: np.ndarray, ops: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Sample one Kraus branch per row of ``psi`` (shape ``(M, d_in)``)."""
    cand = np.matmul(ops, psi.T).transpose(0, 2, 1)
    return _pick(cand, rng)


def _pick(cand: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    m = cand.shape[1]
    weights = np.sum(np.abs(cand.reshape(cand.shape[0], m, -1)) ** 2, axis=2)
    cum = np.cumsum(weights, axis=0)
    u = rng.random(m) * cum[-1]
    k = np.argmax(cum > u[None, :], axis=0)
    rows = np.arange(m)
    chosen = cand[k, rows]
    return chosen / np.sqrt(weights[k, rows]).reshape((m,) + (1,) * (chosen.ndim - 1))


def sample_local_kraus(psi: np.ndarray, ops: np.ndarray, qubit: int, n: int, rng) -> np.ndarray:
    """Sample a branch of a single-qubit channel acting on ``qubit`` of ``n``."""
    m = psi.shape[0]
    psi_t = psi.reshape(m, 2**qubit, 2, 2 ** (n - qubit - 1))
    cand = np.tensordot(ops, psi_t, axes=([2], [2])).transpose(0, 2, 3, 1, 4)
    return _pick(cand.reshape(ops.shape[0], m, 2**n), rng)


def _apply(mats: np.ndarray, idx: np.ndarray, psi: np.ndarray) -> np.ndarray:
    return np.matmul(mats[idx], psi[:, :, None])[:, :, 0]


class _Sampler:
    def __init__(self, pipe: Pipeline):
        cfg = pipe.cfg
        self.pipe = pipe
        self.cfg = cfg
        self.n = cfg.parties
        self.preps = list(Preparation)
        ops = list(PartyOp)
        self.init = np.stack([pipe.initial_vector(p) for p in self.preps])
        self.prep_undo = np.stack([pipe.op(p.unitary).conj().T for p in self.preps])
        self.op_mats = np.stack([pipe.op(o.matrix) for o in ops])
        self.op_undo = np.stack([m.conj().T for m in self.op_mats])
        self.alice = np.stack([pipe.op(alice_operation(s).matrix) for s in (0, 1)])
        self.noise = [np.stack(h.channel().operators) for h in cfg.hops]
        self.per_hop = pipe.code is not None and cfg.qec.mode is QecMode.PER_HOP
        if self.per_hop:
            self.encoder = pipe.code.encoder()
            self.hop_decoders = [
                np.stack(pipe.code.decoder(decoder_gamma(cfg, i)).operators) for i in range(self.n)
            ]
        if pipe.encoded:
            self.final_decoder = np.stack(pipe.final_decoder.operators)

    def _noisy_register(self, psi, hop, rng):
        k = int(round(math.log2(psi.shape[1])))
        for q in range(k):
            psi = sample_local_kraus(psi, self.noise[hop], q, k, rng)
        return psi

    def _hop(self, psi, hop, rng):
        if self.per_hop:
            psi = psi @ self.encoder.T
            psi = self._noisy_register(psi, hop, rng)
            return sample_kraus(psi, self.hop_decoders[hop], rng)
        if self.pipe.encoded:
            return self._noisy_register(psi, hop, rng)
        return sample_kraus(psi, self.noise[hop], rng)

    def wrong_bits(self, size: int, rng: np.random.Generator) -> int:
        n, copies = self.n, self.pipe.copies
        prep = rng.integers(len(self.preps), size=size)
        ops = rng.integers(3, size=(size, n - 2))
        secret = rng.integers(2, size=size)

        prep_r = np.repeat(prep, copies)
        ops_r = np.repeat(ops, copies, axis=0)
        secret_r = np.repeat(secret, copies)

        psi = self.init[prep_r].astype(complex)
        psi = self._hop(psi, 0, rng)
        for i in range(n - 2):
            psi = _apply(self.op_mats, ops_r[:, i], psi)
            psi = self._hop(psi, i + 1, rng)
        psi = _apply(self.alice, secret_r, psi)
        psi = self._hop(psi, n - 1, rng)

        for i in reversed(range(n - 2)):
            psi = _apply(self.op_undo, ops_r[:, i], psi)
        psi = _apply(self.prep_undo, prep_r, psi)
        if self.pipe.encoded:
            psi = sample_kraus(psi, self.final_decoder, rng)

        p1 = np.abs(psi[:, 1]) ** 2 / np.sum(np.abs(psi) ** 2, axis=1)
        bits = (rng.random(psi.shape[0]) < p1).astype(int)
        wrong = bits != secret_r
        if copies == 3:
            wrong = wrong.reshape(size, 3).sum(axis=1) >= 2
        return int(wrong.sum())


def run_montecarlo(
    cfg: ProtocolConfig,
    trials: int | None = None,
    seed: int | None = None,
    workers: int = 1,
) -> ErrorReport:
    """Estimate the secret-bit error by sampling ``trials`` protocol runs."""
    trials = cfg.evaluation.trials if trials is None else int(trials)
    seed = cfg.evaluation.seed if seed is None else int(seed)
    if trials < 1:
        raise ValueError("trials must be at least 1")
    sampler = _Sampler(pipeline(cfg))
    sizes = [min(BLOCK_SIZE, trials - b * BLOCK_SIZE) for b in range(math.ceil(trials / BLOCK_SIZE))]

    def block(b: int) -> int:
        return sampler.wrong_bits(sizes[b], block_rng(seed, b))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            wrong = sum(pool.map(block, range(len(sizes))))
    else:
        wrong = sum(block(b) for b in range(len(sizes)))
    e = wrong / trials
    return ErrorReport(error_mc=e, mc_stderr=math.sqrt(e * (1 - e) / trials), trials=trials, seed=seed)
