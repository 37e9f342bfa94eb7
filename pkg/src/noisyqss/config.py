"""JSON configuration files.

Example::

    {
      "parties": 3,
      "noise": {"kind": "damping", "uniform": {"gamma": 0.1}},
      "qec": {"scheme": "repetition", "mode": "single_cycle"},
      "evaluation": {"mode": "monte_carlo", "trials": 100000, "seed": 7}
    }

``noise`` takes either ``uniform`` (one parameter set for every hop) or
``per_hop`` (a list in hop order, see :mod:`noisyqss.protocol`). Pauli
parameters are ``{"p": x}`` or ``{"p_bit": x, "p_phase": y}``; damping takes
``{"gamma": x}``. Unknown fields are errors.
"""

from __future__ import annotations

import json
from pathlib import Path

from .noise import NoiseKind, NoiseSpec
from .protocol import Evaluation, ProtocolConfig, QecSpec


class ConfigError(ValueError):
    pass


def _expect_keys(obj, where: str, required: set[str], optional: set[str] = frozenset()):
    if not isinstance(obj, dict):
        raise ConfigError(f"{where}: expected an object, got {type(obj).__name__}")
    unknown = set(obj) - required - optional
    if unknown:
        raise ConfigError(f"{where}: unknown field(s) {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise ConfigError(f"{where}: missing field(s) {sorted(missing)}")


def _number(obj: dict, key: str, where: str) -> float:
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{where}.{key}: expected a number, got {v!r}")
    return float(v)


def _integer(obj: dict, key: str, where: str) -> int:
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"{where}.{key}: expected an integer, got {v!r}")
    return v


def _noise_params(kind: NoiseKind, obj, where: str) -> NoiseSpec:
    try:
        if kind is NoiseKind.DAMPING:
            _expect_keys(obj, where, {"gamma"})
            return NoiseSpec.damping(_number(obj, "gamma", where))
        if isinstance(obj, dict) and "p" in obj:
            _expect_keys(obj, where, {"p"})
            return NoiseSpec.pauli(_number(obj, "p", where))
        _expect_keys(obj, where, {"p_bit", "p_phase"})
        return NoiseSpec.pauli(_number(obj, "p_bit", where), _number(obj, "p_phase", where))
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def _noise(obj, parties: int) -> tuple[NoiseSpec, ...]:
    _expect_keys(obj, "noise", {"kind"}, {"uniform", "per_hop"})
    try:
        kind = NoiseKind(obj["kind"])
    except ValueError:
        raise ConfigError(f"noise.kind: expected 'pauli' or 'damping', got {obj['kind']!r}") from None
    if ("uniform" in obj) == ("per_hop" in obj):
        raise ConfigError("noise: give exactly one of 'uniform' or 'per_hop'")
    if "uniform" in obj:
        return (_noise_params(kind, obj["uniform"], "noise.uniform"),) * parties
    hops = obj["per_hop"]
    if not isinstance(hops, list):
        raise ConfigError("noise.per_hop: expected a list")
    if len(hops) != parties:
        raise ConfigError(f"noise.per_hop: {parties} parties need {parties} hops, got {len(hops)}")
    return tuple(_noise_params(kind, h, f"noise.per_hop[{i}]") for i, h in enumerate(hops))


def config_from_dict(data) -> ProtocolConfig:
    _expect_keys(data, "config", {"parties", "noise"}, {"qec", "evaluation"})
    parties = _integer(data, "parties", "config")
    if parties < 3:
        raise ConfigError("config.parties: need at least 3 parties")
    hops = _noise(data["noise"], parties)

    qec = QecSpec()
    if "qec" in data:
        _expect_keys(data["qec"], "qec", {"scheme"}, {"mode"})
        try:
            qec = QecSpec(data["qec"]["scheme"], data["qec"].get("mode", "single_cycle"))
        except ValueError as exc:
            raise ConfigError(f"qec: {exc}") from None

    evaluation = Evaluation()
    if "evaluation" in data:
        ev = data["evaluation"]
        _expect_keys(ev, "evaluation", {"mode"}, {"trials", "seed"})
        kwargs = {"mode": ev["mode"]}
        for key in ("trials", "seed"):
            if key in ev:
                kwargs[key] = _integer(ev, key, "evaluation")
        try:
            evaluation = Evaluation(**kwargs)
        except ValueError as exc:
            raise ConfigError(f"evaluation: {exc}") from None

    return ProtocolConfig(parties, hops, qec, evaluation)


def parse_config(text: str) -> ProtocolConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return config_from_dict(data)


def load_config(path) -> ProtocolConfig:
    return parse_config(Path(path).read_text())


def config_to_dict(cfg: ProtocolConfig) -> dict:
    kinds = {h.kind for h in cfg.hops}
    if len(kinds) != 1:
        raise ValueError("configs mixing noise kinds have no JSON form")
    hops = [h.to_dict() for h in cfg.hops]
    noise = {"kind": kinds.pop().value}
    if all(h == hops[0] for h in hops):
        noise["uniform"] = hops[0]
    else:
        noise["per_hop"] = hops
    return {
        "parties": cfg.parties,
        "noise": noise,
        "qec": {"scheme": cfg.qec.scheme.value, "mode": cfg.qec.mode.value},
        "evaluation": {
            "mode": cfg.evaluation.mode.value,
            "trials": cfg.evaluation.trials,
            "seed": cfg.evaluation.seed,
        },
    }
