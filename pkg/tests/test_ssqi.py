import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from noisyqss.noise import NoiseSpec
from noisyqss.protocol import ProtocolConfig, QecSpec, run_exact
from noisyqss.qstate import KET_0, KET_1, KET_PLUS, TOL_ALG, state_from_angles
from noisyqss.ssqi import CORRECTION_CONVENTION, correction, correction_convention, run_ssqi, ssqi_report, teleport_fidelity

angles = st.tuples(st.floats(0, np.pi), st.floats(0, 2 * np.pi, exclude_max=True))


@pytest.mark.parametrize("psi", [KET_0, KET_1, np.array([1, 1j]) / np.sqrt(2)])
def test_convention_round_trips(psi):
    assert teleport_fidelity(psi) == pytest.approx(1, abs=TOL_ALG)
    assert "Z^a X^b" in correction_convention() == CORRECTION_CONVENTION


@given(angles)
def test_noiseless_any_state(ang):
    assert teleport_fidelity(state_from_angles(*ang)) == pytest.approx(1, abs=TOL_ALG)


def test_flip_bit_error_on_zero():
    assert teleport_fidelity(KET_0, e_bit=0.1) == pytest.approx(0.9)
    assert teleport_fidelity(KET_0, e_phase=0.1) == pytest.approx(1)
    assert teleport_fidelity(KET_PLUS, e_phase=0.1) == pytest.approx(0.9)


@given(angles, st.floats(0, 1))
def test_fidelity_decreasing_in_error(ang, e):
    psi = state_from_angles(*ang)
    assert teleport_fidelity(psi, e, e) <= 1 + TOL_ALG
    # both bits wrong half the time gives the fully depolarized average 1/2
    assert teleport_fidelity(psi, 0.5, 0.5) == pytest.approx(0.5, abs=1e-12)


def test_correction_matrices():
    assert np.allclose(correction(0, 0), np.eye(2))
    assert np.allclose(correction(1, 1), np.array([[0, 1], [-1, 0]]))


def test_rejects_multi_qubit():
    with pytest.raises(ValueError):
        teleport_fidelity(np.array([1, 0, 0, 0]))


def test_run_ssqi_uses_exact_error():
    cfg = ProtocolConfig.uniform(3, NoiseSpec.damping(0.2))
    e = run_exact(cfg).error_exact
    assert run_ssqi(cfg, KET_0) == pytest.approx(teleport_fidelity(KET_0, e, e))


def test_noiseless_report():
    r = ssqi_report(ProtocolConfig.uniform(3, NoiseSpec.pauli(0), qec=QecSpec("repetition")), KET_PLUS)
    assert r["fidelity_without"] == pytest.approx(1)
    assert r["fidelity_with"] == pytest.approx(1)
    assert not r["fidelity_improved"] and not r["qec_effective"]


def test_repetition_improves_damping():
    r = ssqi_report(ProtocolConfig.uniform(3, NoiseSpec.damping(0.2), qec=QecSpec("repetition")), state_from_angles(1.0, 0.3))
    assert r["fidelity_with"] > r["fidelity_without"]
    assert r["qec_effective"]


@settings(max_examples=25, deadline=None)
@given(angles, st.floats(0, 1), st.sampled_from(["repetition", "five_qubit", "four_qubit"]), st.sampled_from(["pauli", "damping"]))
def test_improvement_iff_lower_error(ang, x, scheme, kind):
    # shared-bit errors stay in [0, 1/2] here, where fidelity falls strictly with e
    noise = NoiseSpec.pauli(x / 2) if kind == "pauli" else NoiseSpec.damping(min(x, 0.99))
    mode = "single_cycle" if scheme == "repetition" else "per_hop"
    r = ssqi_report(ProtocolConfig.uniform(3, noise, qec=QecSpec(scheme, mode)), state_from_angles(*ang))
    assert r["fidelity_improved"] == r["qec_effective"]


def test_fidelity_not_monotone_beyond_half():
    # for a Y eigenstate F(e) = 1 - 2e + 2e^2, which rises again past e = 1/2
    psi = np.array([1, 1j]) / np.sqrt(2)
    assert teleport_fidelity(psi, 0.3, 0.3) == pytest.approx(1 - 0.6 + 0.18)
    assert teleport_fidelity(psi, 0.95, 0.95) > teleport_fidelity(psi, 0.9, 0.9)
