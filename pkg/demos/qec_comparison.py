"""How much each error-correcting scheme helps the shared secret bit.

Three parties, exact evaluation. The repetition code sends three copies and
takes a majority; the five- and four-qubit codes protect the travelling qubit
either once around the whole loop or on every hop.
"""

from noisyqss import NoiseSpec, ProtocolConfig, QecSpec, run_exact

SCHEMES = [
    ("none", "single_cycle"),
    ("repetition", "single_cycle"),
    ("five_qubit", "single_cycle"),
    ("five_qubit", "per_hop"),
    ("four_qubit", "single_cycle"),
    ("four_qubit", "per_hop"),
]


def table(label, make_noise, xs):
    print(f"\n{label}")
    print(f"{'scheme':<26}" + "".join(f"{x:>10}" for x in xs))
    for scheme, mode in SCHEMES:
        name = scheme if scheme in ("none", "repetition") else f"{scheme} ({mode})"
        errs = [run_exact(ProtocolConfig.uniform(3, make_noise(x), qec=QecSpec(scheme, mode))).error_exact for x in xs]
        print(f"{name:<26}" + "".join(f"{e:10.5f}" for e in errs))


table("bit and phase flips, probability p", NoiseSpec.pauli, [0.01, 0.05, 0.1, 0.2])
table("amplitude damping, strength gamma", NoiseSpec.damping, [0.01, 0.05, 0.1, 0.2])

# below p = 1/2 the majority vote always wins, and it loses above
for p in (0.3, 0.5, 0.7):
    none = run_exact(ProtocolConfig.uniform(3, NoiseSpec.pauli(p))).error_exact
    rep = run_exact(ProtocolConfig.uniform(3, NoiseSpec.pauli(p), qec=QecSpec("repetition"))).error_exact
    print(f"p={p}: no code {none:.4f}, repetition {rep:.4f}")
