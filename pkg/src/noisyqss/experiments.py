"""Parameter sweeps, figure datasets, table reproduction and the validation battery."""

from __future__ import annotations

import csv
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Iterable

import numpy as np

from . import closed_form as cf
from .codes import (
    completeness_error,
    five_encode,
    five_logical,
    five_recover_decode,
    five_recovery_operators,
    five_syndrome_errors,
    four_decoder,
    four_encode,
    four_recover_decode,
    pauli_string,
    rep3_majority,
)
from .montecarlo import run_montecarlo
from .noise import NoiseKind, NoiseSpec, amplitude_damping, apply_iid
from .protocol import (
    MAX_EXACT_PARTIES,
    EvalMode,
    ProtocolConfig,
    QecSpec,
    analytic_error,
    run_exact,
)
from .qstate import (
    HADAMARD,
    I2,
    KET_0,
    KET_1,
    KET_PLUS,
    SIGMA_Y,
    TOL_SIM,
    density,
    fidelity,
    normalize,
)

SWEEP_COLUMNS = (
    "sweep_param", "value", "n_parties", "noise_model", "qec_scheme", "qec_mode",
    "error_analytic", "error_exact", "error_mc", "mc_stderr", "trials", "seed",
)
SWEEP_PARAMS = ("p", "gamma", "gamma_A", "gamma_B", "gamma_C", "n")
FIGURES = ("fig1", "fig2", "fig3", "fig4", "fig5", "fig6")
# hop index of each named channel in a three-party run
THREE_PARTY_HOP = {"gamma_B": 0, "gamma_C": 1, "gamma_A": 2}


class SpecError(ValueError):
    """Invalid sweep, figure or table request."""


class BoundsError(RuntimeError):
    """A computed probability left [0, 1]."""


def fmt(x) -> str:
    """Fixed 12-significant-digit decimal text; empty for missing values."""
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return np.format_float_positional(float(x), precision=12, unique=False, fractional=False, trim="-")


def write_csv(dest, columns: Iterable[str], rows: Iterable[dict]) -> None:
    """Write ``rows`` to a path or an open text stream, formatted by :func:`fmt`."""
    if hasattr(dest, "write"):
        _write_rows(dest, list(columns), rows)
        return
    path = Path(dest)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        _write_rows(fh, list(columns), rows)


def _write_rows(fh, columns: list[str], rows: Iterable[dict]) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(row.get(c)) for c in columns])


PROBABILITY_FIELDS = ("error_analytic", "error_exact", "error_mc", "error_majority_of_average")


def check_bounds(values: dict, keys=None) -> None:
    """Raise BoundsError if a probability in ``values`` leaves [0, 1]."""
    for key, v in values.items():
        if v is None or (keys is not None and key not in keys):
            continue
        if not (0.0 <= v <= 1.0):
            raise BoundsError(f"{key}={v!r} outside [0, 1]")


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SweepSpec:
    vary: str
    start: float
    stop: float
    steps: int
    base: ProtocolConfig

    def __post_init__(self):
        if self.vary not in SWEEP_PARAMS:
            raise SpecError(f"cannot vary {self.vary!r}; choose from {SWEEP_PARAMS}")
        if self.steps < 2:
            raise SpecError("steps must be at least 2")
        if self.start > self.stop:
            raise SpecError("sweep start must not exceed its stop")
        kind = self.base.noise_kind
        if self.vary == "p" and kind is not NoiseKind.PAULI:
            raise SpecError("'p' sweeps need Pauli noise")
        if self.vary.startswith("gamma") and kind is not NoiseKind.DAMPING:
            raise SpecError(f"{self.vary!r} sweeps need damping noise")
        if self.vary in THREE_PARTY_HOP and self.base.parties != 3:
            raise SpecError(f"{self.vary!r} names a channel of the three-party protocol")
        if self.vary == "n":
            if any(abs(v - round(v)) > 1e-9 for v in self.values()) or self.start < 3:
                raise SpecError("'n' sweeps need integer party counts of at least 3")
        elif not (0.0 <= self.start and self.stop <= 1.0):
            raise SpecError("probability sweeps must stay within [0, 1]")

    def values(self) -> list[float]:
        return [float(v) for v in np.linspace(self.start, self.stop, self.steps)]

    def config_at(self, value: float) -> ProtocolConfig:
        return apply_param(self.base, self.vary, value)


def apply_param(base: ProtocolConfig, vary: str, value: float) -> ProtocolConfig:
    if vary == "p":
        return replace(base, hops=(NoiseSpec.pauli(value),) * base.parties)
    if vary == "gamma":
        return replace(base, hops=(NoiseSpec.damping(value),) * base.parties)
    if vary in THREE_PARTY_HOP:
        hops = list(base.hops)
        hops[THREE_PARTY_HOP[vary]] = NoiseSpec.damping(value)
        return replace(base, hops=tuple(hops))
    if vary == "n":
        n = int(round(value))
        return replace(base, parties=n, hops=(base.hops[0],) * n)
    raise SpecError(f"unknown sweep parameter {vary!r}")


def evaluate(cfg: ProtocolConfig, trials: int | None = None, seed: int | None = None) -> dict:
    """Analytic, exact and (if requested) Monte Carlo errors for ``cfg``."""
    out = {"error_analytic": analytic_error(cfg), "error_exact": None, "error_mc": None,
           "mc_stderr": None, "trials": None, "seed": None}
    if cfg.parties <= MAX_EXACT_PARTIES:
        out["error_exact"] = run_exact(cfg).error_exact
    if trials:
        mc = run_montecarlo(cfg, trials=trials, seed=seed)
        out.update(error_mc=mc.error_mc, mc_stderr=mc.mc_stderr, trials=mc.trials, seed=mc.seed)
    check_bounds(out, PROBABILITY_FIELDS)
    return out


def sweep_rows(spec: SweepSpec, workers: int = 1) -> list[dict]:
    """One row per grid point, in grid order whatever ``workers`` is."""
    base = spec.base
    trials = base.evaluation.trials if base.evaluation.mode is EvalMode.MONTE_CARLO else None

    def row(value: float) -> dict:
        cfg = spec.config_at(value)
        res = evaluate(cfg, trials, base.evaluation.seed)
        return {
            "sweep_param": spec.vary,
            "value": int(round(value)) if spec.vary == "n" else value,
            "n_parties": cfg.parties,
            "noise_model": cfg.noise_kind.value,
            "qec_scheme": cfg.qec.scheme.value,
            "qec_mode": cfg.qec.mode.value,
            **res,
        }

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(row, spec.values()))
    return [row(v) for v in spec.values()]


def write_sweep(spec: SweepSpec, path, workers: int = 1) -> list[dict]:
    rows = sweep_rows(spec, workers)
    write_csv(path, SWEEP_COLUMNS, rows)
    return rows


# ---------------------------------------------------------------------------
# Figures
# ---------------------------------------------------------------------------


@dataclass
class Curve:
    name: str
    kind: str  # analytic | exact | monte_carlo
    x_param: str
    xs: list[float]
    ys: list[float]
    scheme: str = "none"
    mode: str = "single_cycle"
    n: int = 3
    stderr: list[float] | None = None
    note: str = ""
    fixed: dict = field(default_factory=dict)

    def rows(self) -> list[dict]:
        out = []
        for i, (x, y) in enumerate(zip(self.xs, self.ys)):
            row = {self.x_param: x, "error": y}
            if self.stderr is not None:
                row["stderr"] = self.stderr[i]
            out.append(row)
        return out

    @property
    def columns(self) -> list[str]:
        return [self.x_param, "error"] + (["stderr"] if self.stderr is not None else [])


def _grid(steps: int) -> list[float]:
    if steps < 2:
        raise SpecError("figure grids need at least 2 points")
    return [float(v) for v in np.linspace(0.0, 1.0, steps)]


def _sim_curves(name, x_param, xs, make_cfg, scheme, mode, n, trials, seed, analytic=None) -> list[Curve]:
    curves = []
    if analytic is not None:
        curves.append(Curve(f"{name}_analytic", "analytic", x_param, xs, [analytic(x) for x in xs], scheme, mode, n))
    cfgs = [make_cfg(x) for x in xs]
    exact = [run_exact(c) for c in cfgs]
    curves.append(Curve(f"{name}_exact", "exact", x_param, xs, [r.error_exact for r in exact], scheme, mode, n))
    if scheme == "repetition":
        curves.append(Curve(
            f"{name}_majority_of_average", "exact", x_param, xs,
            [r.error_majority_of_average for r in exact], scheme, mode, n,
            note="majority formula applied to the tuple-averaged single-copy error",
        ))
    if trials:
        mcs = [run_montecarlo(c, trials=trials, seed=seed) for c in cfgs]
        curves.append(Curve(
            f"{name}_mc", "monte_carlo", x_param, xs, [m.error_mc for m in mcs], scheme, mode, n,
            stderr=[m.mc_stderr for m in mcs],
        ))
    return curves


def _pauli_cfg(n, scheme="none", mode="single_cycle"):
    return lambda p: ProtocolConfig.uniform(n, NoiseSpec.pauli(p), qec=QecSpec(scheme, mode))


def _damp_cfg(n, scheme="none", mode="single_cycle"):
    return lambda g: ProtocolConfig.uniform(n, NoiseSpec.damping(g), qec=QecSpec(scheme, mode))


def figure_curves(fig: str, steps: int = 101, trials: int = 0, seed: int = 0) -> list[Curve]:
    """Data behind one figure. ``trials=0`` skips the Monte Carlo curves."""
    if fig not in FIGURES:
        raise SpecError(f"unknown figure {fig!r}; choose from {FIGURES}")
    xs = _grid(steps)
    curves: list[Curve] = []
    if fig == "fig1":
        names = {"gamma_A": 2, "gamma_B": 0, "gamma_C": 1}
        for vary, hop in names.items():
            for fixed in (0.0, 0.5):
                def make(g, hop=hop, fixed=fixed):
                    hops = [NoiseSpec.damping(fixed)] * 3
                    hops[hop] = NoiseSpec.damping(g)
                    return ProtocolConfig(3, tuple(hops))

                def analytic(g, vary=vary, fixed=fixed):
                    params = {"gamma_A": fixed, "gamma_B": fixed, "gamma_C": fixed, vary: g}
                    return cf.e1_damp_general(params["gamma_A"], params["gamma_B"], params["gamma_C"])

                name = f"fig1_{vary}_others{fixed:g}"
                for c in _sim_curves(name, vary, xs, make, "none", "single_cycle", 3, 0, seed, analytic):
                    c.fixed = {k: fixed for k in names if k != vary}
                    curves.append(c)
    elif fig == "fig2":
        for n in (3, 4, 5, 6):
            curves += _sim_curves(f"fig2_n{n}", "p", xs, _pauli_cfg(n), "none", "single_cycle", n, 0, seed,
                                  lambda p, n=n: cf.e1_flip_nparty(p, n))
    elif fig == "fig3":
        for n in (3, 4, 5, 6):
            curves += _sim_curves(f"fig3_n{n}_none", "p", xs, _pauli_cfg(n), "none", "single_cycle", n,
                                  trials, seed, lambda p, n=n: cf.e1_flip_nparty(p, n))
            curves += _sim_curves(f"fig3_n{n}_repetition", "p", xs, _pauli_cfg(n, "repetition"), "repetition",
                                  "single_cycle", n, trials, seed, lambda p, n=n: cf.ef_flip_nparty(p, n))
    elif fig == "fig4":
        for n in (3, 4, 5, 6):
            a_none = cf.e1_damp if n == 3 else None
            a_rep = cf.ef_damp if n == 3 else None
            curves += _sim_curves(f"fig4_n{n}_none", "gamma", xs, _damp_cfg(n), "none", "single_cycle", n,
                                  trials, seed, a_none)
            curves += _sim_curves(f"fig4_n{n}_repetition", "gamma", xs, _damp_cfg(n, "repetition"), "repetition",
                                  "single_cycle", n, trials, seed, a_rep)
    elif fig == "fig5":
        curves += _sim_curves("fig5_none", "p", xs, _pauli_cfg(3), "none", "single_cycle", 3, trials, seed, cf.e1_flip)
        curves += _sim_curves("fig5_repetition", "p", xs, _pauli_cfg(3, "repetition"), "repetition",
                              "single_cycle", 3, trials, seed, lambda p: cf.e_majority(cf.e1_flip(p)))
        curves += _sim_curves("fig5_five_qubit", "p", xs, _pauli_cfg(3, "five_qubit", "per_hop"), "five_qubit",
                              "per_hop", 3, trials, seed)
    else:
        # damping grid stops short of 1: the four-qubit recovery needs gamma < 1
        xs = [min(x, 1 - 1e-9) for x in xs]
        curves += _sim_curves("fig6_none", "gamma", xs, _damp_cfg(3), "none", "single_cycle", 3, trials, seed, cf.e1_damp)
        curves += _sim_curves("fig6_repetition", "gamma", xs, _damp_cfg(3, "repetition"), "repetition",
                              "single_cycle", 3, trials, seed, cf.ef_damp)
        for code in ("five_qubit", "four_qubit"):
            curves += _sim_curves(f"fig6_{code}", "gamma", xs, _damp_cfg(3, code, "per_hop"), code, "per_hop", 3,
                                  trials, seed)
    for c in curves:
        check_bounds({c.name: y for y in c.ys})
    return curves


def write_figure(fig: str, out_dir, steps: int = 101, trials: int = 0, seed: int = 0) -> list[Curve]:
    out_dir = Path(out_dir)
    curves = figure_curves(fig, steps, trials, seed)
    manifest = {"figure": fig, "steps": steps, "trials": trials or None, "seed": seed if trials else None, "curves": []}
    for c in curves:
        fname = f"{c.name}.csv"
        write_csv(out_dir / fname, c.columns, c.rows())
        entry = {"file": fname, "kind": c.kind, "scheme": c.scheme, "mode": c.mode, "n": c.n, "x": c.x_param}
        if c.fixed:
            entry["fixed"] = c.fixed
        if c.note:
            entry["note"] = c.note
        manifest["curves"].append(entry)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    return curves


# ---------------------------------------------------------------------------
# Tables
# ---------------------------------------------------------------------------

TABLE_COLUMNS = ("prep", "op", "secret", "closed_form", "exact_sim", "abs_diff")


def table_rows(gammas) -> list[dict]:
    """Closed-form against simulated error for the 24 three-party cases.

    ``gammas`` is one damping strength (uniform table) or the triple
    ``(gamma_A, gamma_B, gamma_C)``.
    """
    if isinstance(gammas, (int, float)):
        g = float(gammas)
        cfg = ProtocolConfig.uniform(3, NoiseSpec.damping(g))
        entry = lambda prep, op, s: cf.table1_entry(prep, op, s, g)  # noqa: E731
    else:
        g_a, g_b, g_c = (float(x) for x in gammas)
        cfg = ProtocolConfig(3, (NoiseSpec.damping(g_b), NoiseSpec.damping(g_c), NoiseSpec.damping(g_a)))
        entry = lambda prep, op, s: cf.table2_entry(prep, op, s, g_a, g_b, g_c)  # noqa: E731
    report = run_exact(cfg)
    rows = []
    for t, sim in report.per_tuple.items():
        closed = entry(t.prep.value, t.intermediate_ops[0].value, t.secret)
        rows.append({
            "prep": t.prep.value,
            "op": t.intermediate_ops[0].value,
            "secret": t.secret,
            "closed_form": closed,
            "exact_sim": sim,
            "abs_diff": abs(closed - sim),
        })
    return rows


# ---------------------------------------------------------------------------
# Validation battery
# ---------------------------------------------------------------------------


@dataclass
class CheckResult:
    name: str
    group: str
    passed: bool
    max_dev: float
    detail: str = ""


def _dev_check(name, group, devs, tol) -> CheckResult:
    devs = list(devs)
    worst = max(devs) if devs else 0.0
    return CheckResult(name, group, worst <= tol, worst)


def _check_tables(tol, gammas) -> list[CheckResult]:
    out = []
    for g in gammas:
        rows = table_rows(g)
        out.append(_dev_check(f"table1 gamma={g:g}", "tables", [r["abs_diff"] for r in rows], tol))
        avg = np.mean([r["exact_sim"] for r in rows])
        out.append(_dev_check(f"table1 average gamma={g:g}", "tables", [abs(avg - cf.e1_damp(g))], tol))
    rows = table_rows((0.1, 0.2, 0.3))
    out.append(_dev_check("table2 (0.1,0.2,0.3)", "tables", [r["abs_diff"] for r in rows], tol))
    avg = np.mean([r["exact_sim"] for r in rows])
    out.append(_dev_check("table2 average", "tables", [abs(avg - cf.e1_damp_general(0.1, 0.2, 0.3))], tol))
    return out


def _check_flip(tol) -> list[CheckResult]:
    devs = []
    for n in (3, 4, 5, 6):
        for p in np.linspace(0, 1, 21):
            e = run_exact(ProtocolConfig.uniform(n, NoiseSpec.pauli(p))).error_exact
            devs.append(abs(e - cf.e1_flip_nparty(p, n)))
    return [_dev_check("n-party flip law n=3..6", "flip", devs, tol)]


def _check_repetition(tol) -> list[CheckResult]:
    devs = []
    for p in np.linspace(0, 1, 21):
        cfg = ProtocolConfig.uniform(3, NoiseSpec.pauli(p), qec=QecSpec("repetition"))
        devs.append(abs(run_exact(cfg).error_exact - cf.e_majority(cf.e1_flip(p))))
    exhaustive = all(rep3_majority((b, b, c)) == b for b in (0, 1) for c in (0, 1))
    exhaustive = exhaustive and all(rep3_majority((b, c, b)) == b and rep3_majority((c, b, b)) == b
                                    for b in (0, 1) for c in (0, 1))
    return [
        _dev_check("repetition equals majority of e1 (flips)", "repetition", devs, tol),
        CheckResult("majority vote corrects one wrong bit", "repetition", exhaustive, 0.0),
    ]


def _check_symmetry(tol) -> list[CheckResult]:
    devs = []
    for a, b, c in [(0.1, 0.2, 0.3), (0.7, 0.05, 0.4), (0.0, 0.9, 0.6)]:
        x = run_exact(ProtocolConfig(3, tuple(NoiseSpec.damping(v) for v in (b, c, a)))).error_exact
        y = run_exact(ProtocolConfig(3, tuple(NoiseSpec.damping(v) for v in (b, a, c)))).error_exact
        devs.append(abs(x - y))
    perm = []
    for ps in [(0.1, 0.2, 0.3), (0.9, 0.4, 0.05)]:
        ref = cf.e1_flip_three(*ps)
        perm += [abs(cf.e1_flip_three(*q) - ref) for q in
                 [(ps[1], ps[0], ps[2]), (ps[2], ps[1], ps[0]), (ps[0], ps[2], ps[1])]]
    return [
        _dev_check("gamma_A <-> gamma_C symmetry", "symmetry", devs, tol),
        _dev_check("flip error symmetric in channels", "symmetry", perm, tol),
    ]


_TEST_STATES = {"0": KET_0, "1": KET_1, "+": KET_PLUS}


def _check_codes(tol) -> list[CheckResult]:
    devs = []
    for psi in list(_TEST_STATES.values()) + [normalize([0.6, 0.8j])]:
        v = five_encode(psi)
        devs.append(1 - fidelity(five_recover_decode(density(v)), psi))
        w = four_encode(psi)
        devs.append(1 - fidelity(four_recover_decode(density(w), 0.0), psi))
    comp = [completeness_error(five_recovery_operators()), completeness_error(four_decoder(0.3).operators)]
    return [
        _dev_check("five/four-qubit round trips", "codes", devs, tol),
        _dev_check("recovery completeness", "codes", comp, tol),
    ]


def _check_pauli(tol) -> list[CheckResult]:
    devs = []
    for u in (I2, SIGMA_Y, HADAMARD):
        lu = five_logical(u)
        for psi in _TEST_STATES.values():
            target = u @ psi
            for err in five_syndrome_errors():
                v = pauli_string(err) @ lu @ five_encode(psi)
                devs.append(1 - fidelity(five_recover_decode(density(v)), target))
    return [_dev_check("five-qubit corrects all single Paulis", "pauli", devs, tol)]


def damping_slope(gammas=None) -> float:
    """Log-log slope of four-qubit infidelity under i.i.d. damping of |+>."""
    gammas = np.geomspace(1e-3, 1e-2, 5) if gammas is None else np.asarray(gammas)
    infid = []
    for g in gammas:
        rho = apply_iid(density(four_encode(KET_PLUS)), amplitude_damping(g))
        infid.append(1 - fidelity(four_recover_decode(rho, g), KET_PLUS))
    slope, _ = np.polyfit(np.log(gammas), np.log(infid), 1)
    return float(slope)


def _check_slope(_tol) -> list[CheckResult]:
    s = damping_slope()
    return [CheckResult("four-qubit infidelity slope 2 +/- 0.1", "slope", abs(s - 2) <= 0.1, abs(s - 2), f"slope={s:.4f}")]


VALIDATION_GROUPS: dict[str, Callable] = {
    "tables": None,  # needs gammas, dispatched below
    "flip": _check_flip,
    "repetition": _check_repetition,
    "symmetry": _check_symmetry,
    "codes": _check_codes,
    "pauli": _check_pauli,
    "slope": _check_slope,
}


def validate(tolerance: float = TOL_SIM, only: Iterable[str] | None = None, gammas=(0.1, 0.3, 0.7)) -> list[CheckResult]:
    groups = list(VALIDATION_GROUPS) if not only else list(only)
    unknown = [g for g in groups if g not in VALIDATION_GROUPS]
    if unknown:
        raise SpecError(f"unknown validation group(s) {unknown}; choose from {list(VALIDATION_GROUPS)}")
    results = []
    for g in groups:
        if g == "tables":
            results += _check_tables(tolerance, gammas)
        else:
            results += VALIDATION_GROUPS[g](tolerance)
    return results


__all__ = [
    "BoundsError",
    "PROBABILITY_FIELDS",
    "TABLE_COLUMNS",
    "VALIDATION_GROUPS",
    "CheckResult",
    "Curve",
    "FIGURES",
    "SWEEP_COLUMNS",
    "SpecError",
    "SweepSpec",
    "apply_param",
    "check_bounds",
    "damping_slope",
    "evaluate",
    "figure_curves",
    "fmt",
    "sweep_rows",
    "table_rows",
    "validate",
    "write_csv",
    "write_figure",
    "write_sweep",
]
