"""Catalog configuration files.

A config is a JSON document tagged ``"schema": "qdim/1"`` selecting one
catalog kind with its parameters, an optional working precision and
optional resource guards.  Unknown keys are rejected outright so typos
fail loudly instead of being ignored.  Numeric literals are read exactly:
JSON numbers are parsed into rationals, and strings like ``"1/2"`` or
``"0.4332"`` are accepted wherever a scalar is expected.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ValidationError
from .fusion import (
    FreeAbelianDualRing,
    FreeGroupDualRing,
    FreeUnitaryRing,
    FusionRing,
    Guards,
    TemperleyLiebRing,
)
from .numerics import as_scalar

__all__ = ["GroupConfig", "parse_config", "load_config", "SCHEMA_TAG"]

SCHEMA_TAG = "qdim/1"

_TOP_KEYS = {"schema", "kind", "params", "precision", "guards"}
_GUARD_KEYS = {"max_total_dim", "max_labels"}
_PARAM_KEYS = {
    "ao": {"n", "q"},
    "au": {"F", "diag", "normalize"},
    "group_dual": {"group", "rank"},
}


@dataclass
class GroupConfig:
    kind: str
    params: dict
    precision: int = 60
    guards: Guards = field(default_factory=Guards)

    def build_ring(self) -> FusionRing:
        if self.kind == "ao":
            if "q" in self.params:
                return TemperleyLiebRing(q=self.params["q"], guards=self.guards)
            return TemperleyLiebRing(n=self.params["n"], guards=self.guards)
        if self.kind == "au":
            matrix = self.params.get("F")
            if matrix is None:
                diag = self.params["diag"]
                zero = as_scalar(0)
                matrix = [
                    [diag[i] if i == j else zero for j in range(len(diag))]
                    for i in range(len(diag))
                ]
            return FreeUnitaryRing(
                F=matrix,
                normalize=self.params.get("normalize", True),
                guards=self.guards,
            )
        if self.params["group"] == "free_abelian":
            return FreeAbelianDualRing(self.params["rank"], guards=self.guards)
        return FreeGroupDualRing(self.params["rank"], guards=self.guards)

    def summary(self) -> dict:
        """JSON-ready description for output documents."""
        out = {"kind": self.kind}
        if self.kind == "ao":
            if "q" in self.params:
                out["q"] = as_scalar(self.params["q"]).decimal_str()
            else:
                out["n"] = self.params["n"]
        elif self.kind == "au":
            if "diag" in self.params:
                out["diag"] = [as_scalar(v).decimal_str() for v in self.params["diag"]]
            else:
                out["size"] = len(self.params["F"])
            out["normalize"] = self.params.get("normalize", True)
        else:
            out["group"] = self.params["group"]
            out["rank"] = self.params["rank"]
        return out


def _plain_int(value, name: str, minimum: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(f"{name} must be an integer")
    if value < minimum:
        raise ValidationError(f"{name} must be >= {minimum}")
    return value


def _scalar_value(value, name: str):
    if isinstance(value, bool):
        raise ValidationError(f"{name} must be a number or numeric string")
    if isinstance(value, (int, Fraction, str, float)):
        try:
            return as_scalar(value)
        except ValidationError as exc:
            raise ValidationError(f"{name}: {exc}") from exc
    raise ValidationError(f"{name} must be a number or numeric string")


def parse_config(data) -> GroupConfig:
    if not isinstance(data, dict):
        raise ValidationError("config must be a JSON object")
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise ValidationError(
            "unknown config keys: " + ", ".join(sorted(unknown))
        )
    if data.get("schema") != SCHEMA_TAG:
        raise ValidationError(f'config must carry "schema": "{SCHEMA_TAG}"')
    kind = data.get("kind")
    if kind not in _PARAM_KEYS:
        raise ValidationError(
            "kind must be one of: " + ", ".join(sorted(_PARAM_KEYS))
        )
    raw_params = data.get("params")
    if not isinstance(raw_params, dict):
        raise ValidationError('config needs a "params" object')
    unknown = set(raw_params) - _PARAM_KEYS[kind]
    if unknown:
        raise ValidationError(
            f"unknown params for kind {kind!r}: " + ", ".join(sorted(unknown))
        )

    precision = 60
    if "precision" in data:
        precision = _plain_int(data["precision"], "precision", 30)

    guards = Guards()
    if "guards" in data:
        raw = data["guards"]
        if not isinstance(raw, dict):
            raise ValidationError('"guards" must be an object')
        unknown = set(raw) - _GUARD_KEYS
        if unknown:
            raise ValidationError(
                "unknown guard keys: " + ", ".join(sorted(unknown))
            )
        guards = Guards(
            max_total_dim=_plain_int(
                raw.get("max_total_dim", Guards.max_total_dim),
                "guards.max_total_dim",
                1,
            ),
            max_labels=_plain_int(
                raw.get("max_labels", Guards.max_labels), "guards.max_labels", 1
            ),
        )

    params = _parse_params(kind, raw_params)
    return GroupConfig(kind=kind, params=params, precision=precision, guards=guards)


def _parse_params(kind: str, raw: dict) -> dict:
    if kind == "ao":
        if ("n" in raw) == ("q" in raw):
            raise ValidationError('"ao" params need exactly one of "n" or "q"')
        if "n" in raw:
            return {"n": _plain_int(raw["n"], "params.n", 2)}
        q = _scalar_value(raw["q"], "params.q")
        if not q.is_positive():
            raise ValidationError("params.q must be strictly positive")
        return {"q": q}

    if kind == "au":
        if ("F" in raw) == ("diag" in raw):
            raise ValidationError('"au" params need exactly one of "F" or "diag"')
        params: dict = {}
        if "normalize" in raw:
            if not isinstance(raw["normalize"], bool):
                raise ValidationError("params.normalize must be a boolean")
            params["normalize"] = raw["normalize"]
        if "diag" in raw:
            diag = raw["diag"]
            if not isinstance(diag, list) or not diag:
                raise ValidationError("params.diag must be a non-empty list")
            params["diag"] = [
                _scalar_value(v, f"params.diag[{i}]") for i, v in enumerate(diag)
            ]
            return params
        matrix = raw["F"]
        if not isinstance(matrix, list) or not matrix:
            raise ValidationError("params.F must be a non-empty matrix")
        size = len(matrix)
        rows = []
        for i, row in enumerate(matrix):
            if not isinstance(row, list) or len(row) != size:
                raise ValidationError("params.F must be square")
            entries = []
            for j, cell in enumerate(row):
                if not isinstance(cell, list) or len(cell) != 2:
                    raise ValidationError(
                        f"params.F[{i}][{j}] must be an [re, im] pair"
                    )
                entries.append(
                    (
                        _scalar_value(cell[0], f"params.F[{i}][{j}].re"),
                        _scalar_value(cell[1], f"params.F[{i}][{j}].im"),
                    )
                )
            rows.append(entries)
        params["F"] = rows
        return params

    flavor = raw.get("group")
    if flavor not in ("free_abelian", "free"):
        raise ValidationError(
            'params.group must be "free_abelian" or "free"'
        )
    return {
        "group": flavor,
        "rank": _plain_int(raw.get("rank"), "params.rank", 1),
    }


def load_config(path) -> GroupConfig:
    """Read and validate a config file; numbers are parsed exactly."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh, parse_float=Fraction)
    except OSError as exc:
        raise ValidationError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config {path} is not valid JSON: {exc}") from exc
    return parse_config(data)
