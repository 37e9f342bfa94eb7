"""Sharing a qubit by teleportation when the correction bits travel through noise.

Alice teleports a state to Bob and sends the two correction bits through the
secret-sharing loop. Each bit arrives wrong with the loop's error
probability, so error correction on the loop raises the teleportation
fidelity exactly when it lowers that probability.
"""

import numpy as np

from noisyqss import NoiseSpec, ProtocolConfig, QecSpec, ssqi_report
from noisyqss.qstate import state_from_angles
from noisyqss.ssqi import correction_convention

print(correction_convention())
psi = state_from_angles(np.pi / 3, np.pi / 4)

print(f"\n{'gamma':>6} {'scheme':<12} {'e none':>8} {'e qec':>8} {'F none':>8} {'F qec':>8}  improved")
for gamma in (0.05, 0.2, 0.5):
    for scheme, mode in (("repetition", "single_cycle"), ("four_qubit", "per_hop"), ("five_qubit", "per_hop")):
        cfg = ProtocolConfig.uniform(3, NoiseSpec.damping(gamma), qec=QecSpec(scheme, mode))
        r = ssqi_report(cfg, psi)
        print(f"{gamma:6.2f} {scheme:<12} {r['e_noise']:8.4f} {r['e_qec']:8.4f} "
              f"{r['fidelity_without']:8.4f} {r['fidelity_with']:8.4f}  {r['fidelity_improved']}")
