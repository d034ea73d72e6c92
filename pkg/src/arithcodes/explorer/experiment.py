"""End-to-end experiments: config -> enumeration -> code -> distances -> volume checks."""

from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import dataclass, field

import jsonschema
import numpy as np

from ..algebra import load_algebra, prime_data, ramified_residue_map, splitting_map
from ..codes import (Code, DistanceReport, collision_norm_check, distance_bound_add, distance_bound_mult,
                     min_distance, theta)
from ..exactnum.zeta import dedekind_zeta
from ..geometry import EmbeddingData, enumerate_additive_ball, enumerate_units_in_ball, t2_gram
from ..geometry.balls import EnumResult, closed_under_inverse, count_in_translate
from ..volumes import additive_volumes, prasad_quaternion, vol_ball_quaternion_closed

MODES = ("multiplicative", "additive", "ramified-alphabet")

_RATIONAL = {"type": ["string", "integer"]}
_FIELD_ELEM = {"oneOf": [_RATIONAL, {"type": "array", "items": _RATIONAL, "minItems": 1}]}

CONFIG_SCHEMA = {
    "type": "object",
    "required": ["algebra", "mode", "t", "primes"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "algebra": {
            "type": "object",
            "required": ["a", "b", "order_basis"],
            "properties": {
                "name": {"type": "string"},
                "field": {
                    "type": "object",
                    "required": ["poly", "signature"],
                    "properties": {
                        "poly": {"type": "array", "items": {"type": "integer"}, "minItems": 2},
                        "integral_basis": {"type": "array", "items": {"type": "array", "items": _RATIONAL}},
                        "signature": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
                        "name": {"type": "string"},
                    },
                },
                "a": _FIELD_ELEM,
                "b": _FIELD_ELEM,
                "ramified_primes": {"type": "array"},
                "order_basis": {"type": "array", "items": {"type": "array", "items": _RATIONAL}},
            },
        },
        "mode": {"enum": list(MODES)},
        "t": {"type": ["number", "string"]},
        "primes": {
            "type": "array",
            "minItems": 1,
            "items": {"oneOf": [
                {"type": "integer", "minimum": 2},
                {"type": "object", "required": ["p"],
                 "properties": {"p": {"type": "integer", "minimum": 2},
                                "g": {"type": "array", "items": {"type": "integer"}}}},
            ]},
        },
        "center": {"type": "array", "items": {"type": "number"}},
        "seed": {"type": "integer"},
        "translates": {"type": "integer", "minimum": 0},
        "zeta_cutoff": {"type": "integer", "minimum": 10},
        "tolerances": {"type": "object", "properties": {"slack": {"type": "number"},
                                                        "translate_rel": {"type": "number"}}},
        "outputs": {"type": "object", "properties": {"dir": {"type": "string"}}},
    },
}


class ConfigError(ValueError):
    pass


def validate_config(cfg: dict) -> dict:
    try:
        jsonschema.validate(cfg, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ConfigError(exc.message) from exc
    return cfg


@dataclass
class Check:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": bool(self.passed), **({"detail": self.detail} if self.detail else {})}


@dataclass
class Bundle:
    config: dict
    enum: EnumResult
    code: Code
    distance: DistanceReport | None
    volumes: dict
    checks: list

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def report(self) -> dict:
        return {
            "config": self.config,
            "enumeration": {"kind": self.enum.kind, "t": self.enum.t, "size": len(self.enum),
                            "borderline": len(self.enum.borderline), "stats": self.enum.stats},
            "code": {"size": len(self.code), "s": self.code.s, "d": self.code.d, "q0": self.code.q0,
                     "N": self.code.N, "q": self.code.q, "collisions": [list(c) for c in self.code.collisions],
                     "rate": self.code.rate},
            "distance": None if self.distance is None else self.distance.to_dict(),
            "volumes": self.volumes,
            "checks": [c.to_dict() for c in self.checks],
            "all_checks_passed": self.ok,
        }

    def report_json(self) -> str:
        return json.dumps(_plain(self.report()), sort_keys=True, indent=2) + "\n"


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    return x


def _maps(O, A, cfg, mode):
    out = []
    for entry in cfg["primes"]:
        p, g = (entry, None) if isinstance(entry, int) else (entry["p"], entry.get("g"))
        pd = prime_data(A, p, g)
        if mode == "ramified-alphabet":
            out.append(ramified_residue_map(O, pd))
        else:
            if not pd.unramified_in_A:
                raise ConfigError(f"prime {p} ramifies in A; use mode ramified-alphabet")
            out.append(splitting_map(O, pd))
    return out


def run_experiment(cfg: dict) -> Bundle:
    """Run the pipeline described by ``cfg`` and embed every bound-versus-measurement check."""
    validate_config(cfg)
    mode = cfg["mode"]
    F, A, O = load_algebra(cfg["algebra"])
    rep = O.verify()
    checks = [Check("order_verified", rep.ok, rep.to_dict()),
              Check("order_maximal", rep.is_maximal, {"disc_norm": rep.disc_norm,
                                                      "expected": A.reduced_discriminant_norm**2})]
    E = EmbeddingData(A)
    slack = cfg.get("tolerances", {}).get("slack", 1e-9)
    t = cfg["t"]
    n = F.degree
    maps = _maps(O, A, cfg, mode)
    if mode == "additive":
        enum = enumerate_additive_ball(O, E, _as_number(t), center=cfg.get("center"), slack=slack)
    else:
        enum = enumerate_units_in_ball(O, E, _as_number(t), slack=slack)
        checks.append(Check("units_closed_under_negation", enum.stats["closed_under_negation"]))
        checks.append(Check("units_closed_under_inverse", closed_under_inverse(enum)))
    checks.append(Check("no_borderline_points", len(enum.borderline) == 0, {"borderline": len(enum.borderline)}))
    meta = {"t": str(t), "mode": mode, "algebra": A.name or f"({A.a}, {A.b})",
            "center": cfg.get("center")}
    code = theta(enum.coords, maps, meta)
    tf = float(_as_number(t))
    bound = None
    if mode != "ramified-alphabet":
        q = code.q
        bound = (distance_bound_mult if mode == "multiplicative" else distance_bound_add)(n, 2, tf, q, code.N)
    dist = min_distance(code, bound) if len(code) >= 2 else None
    if dist is not None:
        checks.append(Check("sum_rank_below_hamming", dist.d_R <= dist.d_H <= code.N,
                            {"d_R": dist.d_R, "d_H": dist.d_H, "N": code.N}))
    if bound is not None:
        applies = bound > 0
        checks.append(Check("injective_when_bound_positive", (not applies) or not code.collisions,
                            {"bound": bound, "collisions": len(code.collisions)}))
        if dist is not None:
            checks.append(Check("distance_bound_holds", (not applies) or dist.d_R >= bound,
                                {"bound": bound, "d_R": dist.d_R, "applies": applies}))
    if code.collisions and mode != "ramified-alphabet":
        els = enum.elements
        ok = all(collision_norm_check(O, els[i], els[j], code.q0) for i, j in code.collisions)
        checks.append(Check("collision_norms_divisible", ok))
    volumes = _volume_report(cfg, F, A, O, E, enum, mode, checks)
    return Bundle(cfg, enum, code, dist, volumes, checks)


def _as_number(t):
    from fractions import Fraction

    if isinstance(t, str):
        return Fraction(t)
    return Fraction(t).limit_denominator(10**12) if isinstance(t, float) else t


def _volume_report(cfg, F, A, O, E, enum, mode, checks) -> dict:
    n = F.degree
    tf = float(_as_number(cfg["t"]))
    out = {}
    if mode == "additive":
        r1, r2 = F.signature
        av = additive_volumes(2, n, r1, r2, tf, A.absolute_discriminant)
        out["additive"] = av.to_dict()
        k = cfg.get("translates", 0)
        if k:
            avg = translate_average(O, E, tf, k, cfg.get("seed", 0))
            pred = float(av.lenstra_lb.value)
            rel = abs(avg["mean"] - pred) / pred
            tol = cfg.get("tolerances", {}).get("translate_rel", 0.05)
            out["translate_average"] = {**avg, "prediction": pred, "relative_error": rel}
            checks.append(Check("translate_average_matches_volume", rel <= tol, {"relative_error": rel}))
        return out
    if mode == "multiplicative":
        r1, r2 = F.signature
        u = r1 - len(A.ramified_real)
        z = dedekind_zeta(F, 2, cfg.get("zeta_cutoff", 10**4))
        cov = prasad_quaternion(n, F.abs_discriminant, A.ramified_norms, z)
        ball = vol_ball_quaternion_closed(u, r1 - u, r2, tf)
        out["covolume"] = cov.to_dict()
        out["ball"] = ball.to_dict()
        out["zeta_F2"] = z.to_dict()
        out["predicted_unit_count"] = float(ball.value / cov.value)
        out["measured_unit_count"] = len(enum)
    return out


def translate_average(O, E, t: float, count: int, seed: int) -> dict:
    """Mean of |O cap (c + B(t))| over uniform translates c in the fundamental parallelepiped."""
    if O.base.degree != 1:
        raise NotImplementedError("translate averaging is implemented for algebras over Q")
    gram = t2_gram(O, E)
    rng = np.random.default_rng(seed)
    centers = rng.random((count, O.rank))
    counts = np.array([count_in_translate(O, gram, t, c) for c in centers])
    return {"count": count, "seed": seed, "mean": float(counts.mean()),
            "std_error": float(counts.std(ddof=1) / math.sqrt(count)) if count > 1 else 0.0}


def write_atomic(path, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def load_config(path) -> dict:
    with open(path) as fh:
        return validate_config(json.load(fh))
