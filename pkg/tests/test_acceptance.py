"""Acceptance criteria, one check per criterion with its runtime budget.

Each check returns ``(passed, detail)``; the pytest wrapper asserts both the
outcome and the time limit. Running this file directly prints one PASS/FAIL
line per criterion, and ``conftest.py`` prints the same lines at the end of a
pytest session.
"""

from __future__ import annotations

import time

import numpy as np
import pytest

from noisyqss import closed_form as cf
from noisyqss import codes
from noisyqss.experiments import damping_slope
from noisyqss.montecarlo import run_montecarlo
from noisyqss.noise import NoiseSpec, amplitude_damping
from noisyqss.protocol import ProtocolConfig, QecSpec, all_tuples, run_exact
from noisyqss.qstate import KET_0, KET_1, KET_PLUS, density, fidelity, lift_operator, state_from_angles
from noisyqss.ssqi import ssqi_report, teleport_fidelity

RESULTS: dict[int, str] = {}


def damping_hops(g_a, g_b, g_c, qec=QecSpec()):
    # hop order is Bob->Charlie, Charlie->Alice, Alice->Charlie
    hops = (NoiseSpec.damping(g_b), NoiseSpec.damping(g_c), NoiseSpec.damping(g_a))
    return ProtocolConfig(3, hops, qec)


def tuple_key(t):
    return t.prep.value, t.intermediate_ops[0].value, t.secret


def table_devs(report, entry):
    return [abs(e - entry(*tuple_key(t))) for t, e in report.per_tuple.items()]


def criterion_1():
    worst = 0.0
    for g in (0.1, 0.3, 0.7):
        r = run_exact(ProtocolConfig.uniform(3, NoiseSpec.damping(g)))
        assert len(r.per_tuple) == 24
        worst = max(worst, *table_devs(r, lambda p, o, s: cf.table1_entry(p, o, s, g)))
        worst = max(worst, abs(r.error_exact - cf.e1_damp(g)))
    return worst <= 1e-9, f"max |sim - closed form| = {worst:.2e}"


def criterion_2():
    a, b, c = 0.1, 0.2, 0.3
    r = run_exact(damping_hops(a, b, c))
    worst = max(table_devs(r, lambda p, o, s: cf.table2_entry(p, o, s, a, b, c)))
    swapped = run_exact(damping_hops(c, b, a)).error_exact
    asym = abs(r.error_exact - swapped)
    return worst <= 1e-9 and asym <= 1e-12, f"max entry dev = {worst:.2e}, |avg(A,C) - avg(C,A)| = {asym:.2e}"


def criterion_3():
    worst = 0.0
    ends = []
    for n in (3, 4, 5, 6):
        for p in np.linspace(0, 1, 21):
            e = run_exact(ProtocolConfig.uniform(n, NoiseSpec.pauli(p))).error_exact
            worst = max(worst, abs(e - 0.5 * (1 - (1 - 2 * p) ** n)))
        ends.append(abs(e - (n % 2)))
    ok = worst <= 1e-9 and max(ends) <= 1e-9
    return ok, f"max dev = {worst:.2e}, endpoint dev = {max(ends):.2e}"


def criterion_4():
    worst, improved = 0.0, True
    for p in np.linspace(0, 1, 21):
        none = run_exact(ProtocolConfig.uniform(3, NoiseSpec.pauli(p))).error_exact
        rep = run_exact(ProtocolConfig.uniform(3, NoiseSpec.pauli(p), qec=QecSpec("repetition"))).error_exact
        worst = max(worst, abs(rep - cf.e_majority(cf.e1_flip(p))))
        if 0 < p < 0.5:
            improved &= rep < none
    return worst <= 1e-9 and improved, f"max |rep - majority(e1)| = {worst:.2e}, improves on (0, 0.5): {improved}"


def criterion_5():
    below = []
    for g in np.round(np.arange(0.05, 0.951, 0.05), 2):
        none = run_exact(ProtocolConfig.uniform(3, NoiseSpec.damping(g))).error_exact
        rep = run_exact(ProtocolConfig.uniform(3, NoiseSpec.damping(g), qec=QecSpec("repetition"))).error_exact
        below.append(rep < none)
    g = 1e-3
    ratio = cf.ef_damp(g) / g**2
    lead_ok = abs(ratio / (3 / 32) - 1) <= 0.05
    sim = run_exact(ProtocolConfig.uniform(3, NoiseSpec.damping(g), qec=QecSpec("repetition"))).error_exact / g**2
    detail = (f"rep < none at {sum(below)}/{len(below)} points; ef_damp/g^2 = {ratio:.4f} vs 3/32 = {3 / 32:.4f}"
              f" (per-tuple simulation gives {sim:.4f})")
    return all(below) and lead_ok, detail


def criterion_6():
    ops = codes.five_recovery_operators()
    comp = codes.completeness_error(ops)
    worst = 0.0
    singles = [lab for lab in codes.five_syndrome_errors() if lab != "IIIII"]
    assert len(singles) == 15
    for psi in (KET_0, KET_1, KET_PLUS):
        enc = codes.five_encode(psi)
        for lab in singles:
            out = codes.five_recover_decode(density(codes.pauli_string(lab) @ enc))
            worst = max(worst, 1 - fidelity(out, psi))
    return comp <= 1e-12 and worst <= 1e-12, f"max infidelity = {worst:.2e}, |sum R^dag R - I| = {comp:.2e}"


def criterion_7():
    jump = np.array([[0, 1], [0, 0]], dtype=complex)
    worst = 0.0
    for psi in (KET_0, KET_1, KET_PLUS, state_from_angles(1.1, 0.4)):
        enc = codes.four_encode(psi)
        for q in range(4):
            v = lift_operator(jump, [q], 4) @ enc
            v = v / np.linalg.norm(v)
            worst = max(worst, 1 - fidelity(codes.four_recover_decode(density(v), 0.05), psi))
    slope = damping_slope(np.geomspace(1e-3, 1e-2, 7))
    return worst <= 1e-12 and abs(slope - 2) <= 0.1, f"single-jump infidelity = {worst:.2e}, slope = {slope:.4f}"


def criterion_8():
    bad = []
    points = [("pauli", x) for x in (0.05, 0.1, 0.2)] + [("damping", x) for x in (0.05, 0.1, 0.2)]
    for kind, x in points:
        noise = NoiseSpec.pauli(x) if kind == "pauli" else NoiseSpec.damping(x)

        def err(scheme="none", mode="single_cycle"):
            return run_exact(ProtocolConfig.uniform(3, noise, qec=QecSpec(scheme, mode))).error_exact

        none, rep, five = err(), err("repetition"), err("five_qubit", "per_hop")
        if not rep < none < five:
            bad.append(f"{kind} {x}: rep={rep:.4f} none={none:.4f} five={five:.4f}")
        if kind == "damping":
            four = err("four_qubit", "per_hop")
            if not none < four:
                bad.append(f"{kind} {x}: none={none:.4f} four={four:.4f}")
    return not bad, "all orderings hold" if not bad else "violations: " + "; ".join(bad)


MC_CONFIGS = {
    "pauli p=0.1": ProtocolConfig.uniform(3, NoiseSpec.pauli(0.1)),
    "damping g=0.2": ProtocolConfig.uniform(3, NoiseSpec.damping(0.2)),
    "repetition damping g=0.2": ProtocolConfig.uniform(3, NoiseSpec.damping(0.2), qec=QecSpec("repetition")),
}


def criterion_9():
    ok, parts = True, []
    for name, cfg in MC_CONFIGS.items():
        exact = run_exact(cfg).error_exact
        hits = 0
        for seed in range(100):
            r = run_montecarlo(cfg, trials=100_000, seed=seed)
            hits += abs(r.error_mc - exact) <= 4 * r.mc_stderr
        ok &= hits >= 99
        parts.append(f"{name}: {hits}/100")
    return ok, ", ".join(parts)


def criterion_10():
    rng = np.random.default_rng(2024)
    states = [state_from_angles(rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi)) for _ in range(20)]
    noiseless = max(abs(1 - teleport_fidelity(psi)) for psi in states)
    schemes = [("repetition", "single_cycle"), ("five_qubit", "per_hop"), ("five_qubit", "single_cycle"),
               ("four_qubit", "per_hop"), ("four_qubit", "single_cycle")]
    mismatches, total = 0, 0
    for g in np.linspace(0, 0.95, 20):
        for scheme, mode in schemes:
            cfg = ProtocolConfig.uniform(3, NoiseSpec.damping(g), qec=QecSpec(scheme, mode))
            for psi in states[:3]:
                r = ssqi_report(cfg, psi)
                total += 1
                mismatches += r["fidelity_improved"] != r["qec_effective"]
    ok = noiseless <= 1e-12 and mismatches == 0
    return ok, f"iff holds on {total - mismatches}/{total} cases, noiseless max |1 - F| = {noiseless:.2e}"


CRITERIA = [
    (1, "uniform damping table", criterion_1, 1),
    (2, "per-hop damping table", criterion_2, 1),
    (3, "n-party flip law", criterion_3, 10),
    (4, "repetition under flips", criterion_4, 10),
    (5, "repetition under damping", criterion_5, 10),
    (6, "five-qubit code correctness", criterion_6, 5),
    (7, "four-qubit approximate code", criterion_7, 10),
    (8, "QEC ordering at low noise", criterion_8, 60),
    (9, "Monte Carlo consistency", criterion_9, 120),
    (10, "qubit-sharing condition", criterion_10, 30),
]


def evaluate(number, title, check, budget):
    start = time.perf_counter()
    passed, detail = check()
    elapsed = time.perf_counter() - start
    in_time = elapsed < budget
    status = "PASS" if passed and in_time else "FAIL"
    line = f"{status} criterion {number:>2} {title}: {detail}; {elapsed:.2f}s (limit {budget}s)"
    RESULTS[number] = line
    return passed, in_time, line


@pytest.mark.parametrize("number, title, check, budget", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(number, title, check, budget):
    passed, in_time, line = evaluate(number, title, check, budget)
    print(line)
    assert passed, line
    assert in_time, line


def test_tuple_count_matches_tables():
    # the table criteria rely on 4 preparations x 3 operations x 2 secrets
    assert len(all_tuples(3)) == 24


def test_damping_channel_is_standard():
    assert np.allclose(amplitude_damping(0.3).operators[1], [[0, np.sqrt(0.3)], [0, 0]])


if __name__ == "__main__":
    for crit in CRITERIA:
        print(evaluate(*crit)[2], flush=True)
