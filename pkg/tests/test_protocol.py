import itertools
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from noisyqss import closed_form as cf
from noisyqss.noise import NoiseSpec
from noisyqss.protocol import (
    ChoiceTuple,
    Evaluation,
    PartyOp,
    Preparation,
    ProtocolConfig,
    QecScheme,
    QecSpec,
    all_tuples,
    alice_operation,
    analytic_error,
    decoder_gamma,
    effective_hop_channel,
    pipeline,
    run,
    run_exact,
    run_tuple,
)
from noisyqss.qstate import TOL_ALG, TOL_SIM, Basis, apply_channel, density, fidelity, is_unitary

probs = st.floats(0, 1)
SCHEMES = [
    QecSpec(),
    QecSpec("repetition"),
    QecSpec("five_qubit", "single_cycle"),
    QecSpec("five_qubit", "per_hop"),
    QecSpec("four_qubit", "single_cycle"),
    QecSpec("four_qubit", "per_hop"),
]


def damping3(g_a, g_b, g_c, **kw):
    return ProtocolConfig(3, (NoiseSpec.damping(g_b), NoiseSpec.damping(g_c), NoiseSpec.damping(g_a)), **kw)


class TestTypes:
    def test_preparation_basis(self):
        assert Preparation("0").basis is Basis.COMPUTATIONAL
        assert Preparation("-").basis is Basis.HADAMARD
        for p in Preparation:
            assert is_unitary(p.unitary)

    def test_party_ops_unitary(self):
        for o in PartyOp:
            assert is_unitary(o.matrix)

    def test_alice_mapping(self):
        assert alice_operation(0) is PartyOp.I
        assert alice_operation(1) is PartyOp.Y
        with pytest.raises(ValueError):
            alice_operation(2)

    def test_tuple_count(self):
        for n in (3, 4, 5):
            ts = all_tuples(n)
            assert len(ts) == 4 * 3 ** (n - 2) * 2 == len(set(ts))

    def test_config_invariants(self):
        with pytest.raises(ValueError):
            ProtocolConfig(2, (NoiseSpec.pauli(0),) * 2)
        with pytest.raises(ValueError):
            ProtocolConfig(3, (NoiseSpec.pauli(0),) * 2)
        with pytest.raises(ValueError):
            Evaluation("monte_carlo", trials=0)

    def test_repetition_per_hop_rejected(self):
        with pytest.raises(ValueError):
            QecSpec("repetition", "per_hop")

    def test_tuple_length_checked(self):
        cfg = ProtocolConfig.uniform(4, NoiseSpec.pauli(0.1))
        with pytest.raises(ValueError):
            run_tuple(cfg, ChoiceTuple(Preparation("0"), (PartyOp.I,), 0))


class TestTableOne:
    def test_examples(self):
        g = 0.37
        cfg = ProtocolConfig.uniform(3, NoiseSpec.damping(g))
        t = lambda p, o, s: ChoiceTuple(Preparation(p), (PartyOp(o),), s)  # noqa: E731
        assert run_tuple(cfg, t("0", "I", 0)) == pytest.approx(0, abs=TOL_SIM)
        assert run_tuple(cfg, t("0", "I", 1)) == pytest.approx(g, abs=TOL_SIM)
        assert run_tuple(cfg, t("1", "I", 0)) == pytest.approx(3 * g - 3 * g**2 + g**3, abs=TOL_SIM)

    @settings(max_examples=15, deadline=None)
    @given(probs)
    def test_all_entries(self, g):
        report = run_exact(ProtocolConfig.uniform(3, NoiseSpec.damping(g)))
        for t, e in report.per_tuple.items():
            assert e == pytest.approx(cf.table1_entry(t.prep, t.intermediate_ops[0], t.secret, g), abs=TOL_SIM)
        assert report.error_exact == pytest.approx(cf.e1_damp(g), abs=TOL_SIM)

    @settings(max_examples=15, deadline=None)
    @given(probs, probs, probs)
    def test_table_two(self, a, b, c):
        report = run_exact(damping3(a, b, c))
        for t, e in report.per_tuple.items():
            assert e == pytest.approx(cf.table2_entry(t.prep, t.intermediate_ops[0], t.secret, a, b, c), abs=TOL_SIM)

    @settings(max_examples=15, deadline=None)
    @given(probs, probs, probs)
    def test_a_c_symmetry(self, a, b, c):
        x = run_exact(damping3(a, b, c)).error_exact
        y = run_exact(damping3(c, b, a)).error_exact
        assert abs(x - y) < TOL_ALG


class TestRunExact:
    def test_damping_example(self):
        assert run_exact(ProtocolConfig.uniform(3, NoiseSpec.damping(0.1))).error_exact == pytest.approx(0.104661, abs=1e-6)

    def test_pauli_example(self):
        assert run_exact(ProtocolConfig.uniform(4, NoiseSpec.pauli(0.1))).error_exact == pytest.approx(0.2952, abs=1e-12)

    @pytest.mark.parametrize("qec", SCHEMES, ids=lambda q: f"{q.scheme.value}-{q.mode.value}")
    @pytest.mark.parametrize("n", [3, 4])
    def test_noiseless_is_exact(self, qec, n):
        for noise in (NoiseSpec.pauli(0), NoiseSpec.damping(0)):
            report = run_exact(ProtocolConfig.uniform(n, noise, qec=qec))
            assert max(report.per_tuple.values()) < TOL_ALG

    @settings(max_examples=20, deadline=None)
    @given(probs, st.integers(3, 5))
    def test_flip_tuple_independence(self, p, n):
        report = run_exact(ProtocolConfig.uniform(n, NoiseSpec.pauli(p)))
        target = cf.e1_flip_nparty(p, n)
        assert all(abs(e - target) < TOL_SIM for e in report.per_tuple.values())

    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_certain_flips(self, n):
        e = run_exact(ProtocolConfig.uniform(n, NoiseSpec.pauli(1))).error_exact
        assert e == pytest.approx(n % 2, abs=TOL_SIM)

    def test_parties_cap(self):
        with pytest.raises(ValueError):
            run_exact(ProtocolConfig.uniform(9, NoiseSpec.pauli(0.1)))

    def test_mixed_flip_hops(self):
        ps = [0.1, 0.2, 0.05, 0.3]
        cfg = ProtocolConfig(4, tuple(NoiseSpec.pauli(p) for p in ps))
        assert run_exact(cfg).error_exact == pytest.approx(cf.e1_flip_hops(ps), abs=TOL_SIM)

    def test_unequal_bit_and_phase(self):
        # computational preps only see bit flips, Hadamard-basis preps phase flips
        cfg = ProtocolConfig.uniform(3, NoiseSpec.pauli(0.1, 0.0))
        for t, e in run_exact(cfg).per_tuple.items():
            if t.intermediate_ops[0] is PartyOp.H:
                continue
            want = cf.e1_flip(0.1) if t.prep.basis is Basis.COMPUTATIONAL else 0.0
            assert e == pytest.approx(want, abs=TOL_SIM)

    @pytest.mark.parametrize("qec", SCHEMES[2:], ids=lambda q: f"{q.scheme.value}-{q.mode.value}")
    def test_batch_matches_single(self, qec):
        cfg = ProtocolConfig.uniform(3, NoiseSpec.damping(0.15), qec=qec)
        pipe = pipeline(cfg)
        ts = all_tuples(3)
        batch = pipe.batch_single_errors(ts)
        assert np.allclose(batch, [pipe.single_error(t) for t in ts], atol=1e-12)


class TestRepetition:
    @settings(max_examples=20, deadline=None)
    @given(probs)
    def test_flip_matches_majority(self, p):
        cfg = ProtocolConfig.uniform(3, NoiseSpec.pauli(p), qec=QecSpec("repetition"))
        r = run_exact(cfg)
        assert r.error_exact == pytest.approx(cf.e_majority(cf.e1_flip(p)), abs=TOL_SIM)
        assert r.error_majority_of_average == pytest.approx(r.error_exact, abs=TOL_SIM)

    def test_damping_jensen_gap(self):
        cfg = ProtocolConfig.uniform(3, NoiseSpec.damping(0.3), qec=QecSpec("repetition"))
        r = run_exact(cfg)
        per = [cf.e_majority(cf.table1_entry(t.prep, t.intermediate_ops[0], t.secret, 0.3)) for t in r.per_tuple]
        assert r.error_exact == pytest.approx(np.mean(per), abs=TOL_SIM)
        assert r.error_majority_of_average == pytest.approx(cf.ef_damp(0.3), abs=TOL_SIM)
        assert r.error_exact > r.error_majority_of_average

    @pytest.mark.parametrize("g", np.round(np.arange(0.05, 0.96, 0.05), 2))
    def test_damping_improves(self, g):
        base = ProtocolConfig.uniform(3, NoiseSpec.damping(g))
        assert run_exact(base.with_qec("repetition")).error_exact < run_exact(base).error_exact


class TestCodes:
    def test_decoder_gamma(self):
        cfg = ProtocolConfig(3, (NoiseSpec.damping(0.1), NoiseSpec.damping(0.2), NoiseSpec.damping(0.3)))
        assert decoder_gamma(cfg, 1) == 0.2
        assert decoder_gamma(cfg) == pytest.approx(1 - 0.9 * 0.8 * 0.7)
        assert decoder_gamma(ProtocolConfig.uniform(3, NoiseSpec.pauli(0.1))) == 0

    def test_effective_hop_noiseless(self):
        for code in ("five_qubit", "four_qubit"):
            ch = effective_hop_channel(code, NoiseSpec.damping(0), 0.0)
            rho = density(np.array([0.6, 0.8j]))
            assert np.allclose(apply_channel(rho, ch), rho, atol=1e-12)

    def test_five_per_hop_quadratic(self):
        errs = [run_exact(ProtocolConfig.uniform(3, NoiseSpec.pauli(p), qec=QecSpec("five_qubit", "per_hop"))).error_exact
                for p in (0.005, 0.01)]
        assert 3.5 < errs[1] / errs[0] < 4.5

    def test_four_per_hop_beats_bare_damping_at_low_gamma(self):
        base = ProtocolConfig.uniform(3, NoiseSpec.damping(0.05))
        assert run_exact(base.with_qec("four_qubit", "per_hop")).error_exact < run_exact(base).error_exact

    def test_effective_channel_second_order(self):
        # a Y eigenstate is hit by both flips; bare infidelity is 2p(1-p)
        psi = np.array([1, 1j]) / np.sqrt(2)
        infid = []
        for p in (1e-3, 1e-2):
            ch = effective_hop_channel("five_qubit", NoiseSpec.pauli(p), 0.0)
            infid.append(1 - fidelity(apply_channel(density(psi), ch), psi))
            assert infid[-1] < 0.2 * 2 * p * (1 - p)
        assert 80 < infid[1] / infid[0] < 120


class TestAnalyticAndRun:
    def test_analytic_availability(self):
        assert analytic_error(ProtocolConfig.uniform(5, NoiseSpec.pauli(0.1))) == pytest.approx(cf.e1_flip_nparty(0.1, 5))
        assert analytic_error(ProtocolConfig.uniform(4, NoiseSpec.damping(0.1))) is None
        assert analytic_error(ProtocolConfig.uniform(3, NoiseSpec.pauli(0.1), qec=QecSpec("five_qubit"))) is None
        assert analytic_error(ProtocolConfig.uniform(3, NoiseSpec.pauli(0.1, 0.2))) is None

    def test_run_includes_exact_and_mc(self):
        cfg = ProtocolConfig.uniform(3, NoiseSpec.pauli(0.1), evaluation=Evaluation("monte_carlo", 20_000, 4))
        r = run(cfg)
        assert r.error_exact == pytest.approx(0.244)
        assert abs(r.error_mc - 0.244) <= 4 * r.mc_stderr
        assert (r.trials, r.seed) == (20_000, 4)

    def test_run_beyond_exact_cap(self):
        cfg = ProtocolConfig.uniform(10, NoiseSpec.pauli(0.05), evaluation=Evaluation("monte_carlo", 5_000, 0))
        r = run(cfg)
        assert r.error_exact is None
        assert abs(r.error_mc - cf.e1_flip_nparty(0.05, 10)) <= 4 * r.mc_stderr

    def test_report_dict(self):
        r = run_exact(ProtocolConfig.uniform(3, NoiseSpec.pauli(0.1)))
        d = r.to_dict(include_tuples=True)
        assert len(d["per_tuple"]) == 24
        assert {"prep", "ops", "secret", "error"} <= set(d["per_tuple"][0])
        assert "per_tuple" not in r.to_dict()


def test_per_tuple_probabilities_on_grid():
    for scheme, g in itertools.product(SCHEMES, (0.0, 0.4, 0.9)):
        cfg = ProtocolConfig.uniform(3, NoiseSpec.damping(g), qec=scheme)
        r = run_exact(cfg)
        assert all(0 <= e <= 1 for e in r.per_tuple.values())


def test_with_qec_keeps_noise():
    base = ProtocolConfig.uniform(3, NoiseSpec.damping(0.2))
    cfg = base.with_qec(QecScheme.FIVE_QUBIT, "per_hop")
    assert cfg.hops == base.hops
    assert replace(cfg, qec=QecSpec()) == base
