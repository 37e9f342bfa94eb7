"""Closed-form secret-bit error rates.

These are pure formulas with no dependency on the simulator, so the two can
be checked against each other. Preparations are labelled ``"0", "1", "+",
"-"`` and party operations ``"I", "Y", "H"`` (``"Y"`` is the real
``|0><1| - |1><0|``).
"""

from __future__ import annotations

import math
from itertools import product
from typing import Callable

PREPS = ("0", "1", "+", "-")
OPS = ("I", "Y", "H")
SECRETS = (0, 1)


def _check(name: str, x: float) -> float:
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {x!r}")
    return x


def _pow32(x: float) -> float:
    return x * math.sqrt(x)


def _pow52(x: float) -> float:
    return x * x * math.sqrt(x)


def e1_flip(p: float) -> float:
    """Three-party flip error ``3p(1-p)^2 + p^3``."""
    p = _check("p", p)
    return 3 * p * (1 - p) ** 2 + p**3


def e1_flip_three(p_a: float, p_b: float, p_c: float) -> float:
    """Probability of an odd number of flips over three hops."""
    a, b, c = (_check(n, v) for n, v in (("p_a", p_a), ("p_b", p_b), ("p_c", p_c)))
    return (
        (1 - a) * (1 - c) * b
        + (1 - a) * c * (1 - b)
        + a * (1 - c) * (1 - b)
        + a * c * b
    )


def e1_flip_nparty(p: float, n: int) -> float:
    """``(1 - (1-2p)^n) / 2``: odd number of flips over ``n`` equal hops."""
    p = _check("p", p)
    if n < 1:
        raise ValueError("n must be at least 1")
    return 0.5 * (1 - (1 - 2 * p) ** n)


def e1_flip_hops(ps) -> float:
    """Odd-flip probability for hops with individual flip probabilities."""
    prod = 1.0
    for i, p in enumerate(ps):
        prod *= 1 - 2 * _check(f"p[{i}]", p)
    return 0.5 * (1 - prod)


def e1_damp(gamma: float) -> float:
    """Average three-party error under uniform amplitude damping."""
    g = _check("gamma", gamma)
    s = 1 - g
    return (3 + 8 * g - 7 * g**2 + 2 * g**3 - 2 * _pow32(s) - _pow52(s)) / 12


def e1_damp_general(g_a: float, g_b: float, g_c: float) -> float:
    """Average three-party error with per-channel damping strengths.

    ``g_b`` is the Bob-to-Charlie channel, ``g_c`` Charlie-to-Alice and
    ``g_a`` Alice-to-Charlie.
    """
    a, b, c = (_check(n, v) for n, v in (("g_a", g_a), ("g_b", g_b), ("g_c", g_c)))
    return (
        4
        + 2 * (a + b + c)
        - 2 * (a * b + b * c + c * a)
        + 2 * a * b * c
        - (1 - a) * (1 - c) * math.sqrt(1 - b)
        - (1 - b) * math.sqrt((1 - a) * (1 - c))
        - 2 * math.sqrt((1 - a) * (1 - b) * (1 - c))
    ) / 12


def _table2(a: float, b: float, c: float) -> dict[tuple[str, str, int], float]:
    r_ac = math.sqrt((1 - a) * (1 - c))
    r_abc = math.sqrt((1 - a) * (1 - b) * (1 - c))
    hb = (1 - a) * (1 - c) * math.sqrt(1 - b)
    hadamard_basis = (1 - r_abc) / 2
    t = {
        ("0", "I", 0): 0.0,
        ("0", "I", 1): a,
        ("0", "Y", 0): a + c - a * c,
        ("0", "Y", 1): c - a * c,
        ("0", "H", 0): (1 - r_ac) / 2,
        ("0", "H", 1): (1 - r_ac) / 2,
        ("1", "I", 0): a + b + c - a * b - b * c - c * a + a * b * c,
        ("1", "I", 1): b + c - a * b - b * c - c * a + a * b * c,
        ("1", "Y", 0): b - a * b - b * c + a * b * c,
        ("1", "Y", 1): a + b - a * b - b * c + a * b * c,
        ("1", "H", 0): (1 + (2 * b - 1) * r_ac) / 2,
        ("1", "H", 1): (1 + (2 * b - 1) * r_ac) / 2,
        ("+", "H", 0): (1 - a - c + a * c - hb) / 2,
        ("+", "H", 1): (1 + a - c + a * c - hb) / 2,
        ("-", "H", 0): (1 + a + c - a * c - hb) / 2,
        ("-", "H", 1): (1 - a + c - a * c - hb) / 2,
    }
    for prep, op, s in product("+-", "IY", SECRETS):
        t[prep, op, s] = hadamard_basis
    return t


def _table1(g: float) -> dict[tuple[str, str, int], float]:
    s32 = _pow32(1 - g)
    s52 = _pow52(1 - g)
    t = {
        ("0", "I", 0): 0.0,
        ("0", "I", 1): g,
        ("0", "Y", 0): 2 * g - g**2,
        ("0", "Y", 1): g - g**2,
        ("0", "H", 0): g / 2,
        ("0", "H", 1): g / 2,
        ("1", "I", 0): 3 * g - 3 * g**2 + g**3,
        ("1", "I", 1): 2 * g - 3 * g**2 + g**3,
        ("1", "Y", 0): g - 2 * g**2 + g**3,
        ("1", "Y", 1): 2 * g - 2 * g**2 + g**3,
        ("1", "H", 0): (3 * g - 2 * g**2) / 2,
        ("1", "H", 1): (3 * g - 2 * g**2) / 2,
        ("+", "H", 0): (1 - 2 * g + g**2 - s52) / 2,
        ("+", "H", 1): (1 + g**2 - s52) / 2,
        ("-", "H", 0): (1 + 2 * g - g**2 - s52) / 2,
        ("-", "H", 1): (1 - g**2 - s52) / 2,
    }
    for prep, op, s in product("+-", "IY", SECRETS):
        t[prep, op, s] = (1 - s32) / 2
    return t


def _key(prep, op, secret) -> tuple[str, str, int]:
    key = (str(getattr(prep, "value", prep)), str(getattr(op, "value", op)), int(secret))
    if key[0] not in PREPS or key[1] not in OPS or key[2] not in SECRETS:
        raise ValueError(f"invalid tuple {key!r}")
    return key


def table1_entry(prep, op, secret, gamma: float) -> float:
    """Per-case three-party error under uniform damping ``gamma``."""
    return _table1(_check("gamma", gamma))[_key(prep, op, secret)]


def table2_entry(prep, op, secret, g_a: float, g_b: float, g_c: float) -> float:
    """Per-case three-party error with per-channel damping strengths."""
    a, b, c = (_check(n, v) for n, v in (("g_a", g_a), ("g_b", g_b), ("g_c", g_c)))
    return _table2(a, b, c)[_key(prep, op, secret)]


def table_rows() -> list[tuple[str, str, int]]:
    """The 24 three-party cases in table order."""
    return list(product(PREPS, OPS, SECRETS))


def e_majority(e: float) -> float:
    """Majority-of-three failure ``3e^2(1-e) + e^3``."""
    e = _check("e", e)
    return 3 * e**2 * (1 - e) + e**3


def ef_flip_nparty(p: float, n: int) -> float:
    """Repetition-code error over ``n`` flip hops."""
    x = (1 - 2 * _check("p", p)) ** n
    return 0.25 * (1 - x) ** 2 * (2 + x)


def ef_damp(gamma: float) -> float:
    """Repetition-code error with the majority formula applied to ``e1_damp``."""
    return e_majority(e1_damp(gamma))


def correction_effective(e: float) -> bool:
    """Whether majority voting strictly lowers an error rate ``e > 0``."""
    e = _check("e", e)
    return e > 0 and e_majority(e) < e


def average_table(entry: Callable[..., float], *params: float) -> float:
    return sum(entry(*row, *params) for row in table_rows()) / 24
