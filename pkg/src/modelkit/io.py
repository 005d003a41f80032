"""JSON encoding of lattices, arrow sets, model structures and sequences.

Arrows are written as ``[source, target]`` element ids.  On input, grid
arrows may also be given by coordinates, ``[[x1, y1], [x2, y2]]``, and
lattices by the shorthands ``grid:MxN`` and ``chain:N``.
"""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Any

from .errors import FormatError, ModelkitError
from .lattice import Arrow, ArrowSet, Lattice
from .localization import LocalizationSequence, LocalizationStep
from .model import ModelStructure
from .saturation import SaturatedGridDatum

_SHORTHAND = re.compile(r"^(grid):(\d+)x(\d+)$|^(chain):(\d+)$")


def dumps_line(obj: Any) -> str:
    """Canonical one-line JSON: sorted keys, no spaces."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def dumps(obj: Any) -> str:
    return dumps_line(obj) + "\n"


# -- lattices ------------------------------------------------------------------


def lattice_to_json(lat: Lattice) -> dict:
    kind = lat.tag[0]
    if kind == "grid":
        return {"type": "grid", "m": lat.tag[1], "n": lat.tag[2]}
    if kind == "chain":
        return {"type": "chain", "n": lat.tag[1]}
    return {"type": "explicit", "size": lat.size, "leq": [list(a) for a in lat.arrows]}


def lattice_from_json(data: Any) -> Lattice:
    if isinstance(data, str):
        return parse_shorthand(data)
    if not isinstance(data, dict) or "type" not in data:
        raise FormatError(f"not a lattice description: {data!r}")
    try:
        kind = data["type"]
        if kind == "grid":
            return Lattice.grid(int(data["m"]), int(data["n"]))
        if kind == "chain":
            return Lattice.chain(int(data["n"]))
        if kind == "explicit":
            labels = data.get("labels")
            if labels is not None:
                labels = [tuple(x) if isinstance(x, list) else x for x in labels]
            return Lattice.explicit(int(data["size"]), [tuple(p) for p in data["leq"]], labels)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed lattice description: {exc}") from None
    raise FormatError(f"unknown lattice type {kind!r}")


def parse_shorthand(text: str) -> Lattice:
    m = _SHORTHAND.match(text.strip())
    if not m:
        raise FormatError(f"expected grid:MxN or chain:N, got {text!r}")
    if m.group(1):
        return Lattice.grid(int(m.group(2)), int(m.group(3)))
    return Lattice.chain(int(m.group(5)))


def load_lattice(text: str) -> Lattice:
    """A shorthand, or a path to a JSON lattice file."""
    if _SHORTHAND.match(text.strip()):
        return parse_shorthand(text)
    return lattice_from_json(read_json(text))


# -- arrows ----------------------------------------------------------------------


def arrow_from_json(lat: Lattice, data: Any) -> Arrow:
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError:
            raise FormatError(f"cannot parse arrow {data!r}") from None
    if not isinstance(data, (list, tuple)) or len(data) != 2:
        raise FormatError(f"an arrow is a [source, target] pair, got {data!r}")
    s, t = data
    return lat.arrow(tuple(s) if isinstance(s, list) else s, tuple(t) if isinstance(t, list) else t)


def arrows_to_json(S: ArrowSet) -> list[list[int]]:
    return [list(a) for a in S]


def arrows_from_json(lat: Lattice, data: Any) -> ArrowSet:
    if not isinstance(data, list):
        raise FormatError("expected a list of arrows")
    return ArrowSet.from_pairs(lat, [arrow_from_json(lat, a) for a in data])


# -- structures --------------------------------------------------------------------


def arrowset_to_json(S: ArrowSet) -> dict:
    return {"lattice": lattice_to_json(S.lattice), "arrows": arrows_to_json(S)}


def arrowset_from_json(data: dict, lat: Lattice | None = None) -> ArrowSet:
    lat = _lattice_of(data, lat)
    return arrows_from_json(lat, data.get("arrows", []))


def model_to_json(ms: ModelStructure) -> dict:
    return {"lattice": lattice_to_json(ms.lattice), "W": arrows_to_json(ms.W), "AF": arrows_to_json(ms.AF)}


def model_from_json(data: dict, lat: Lattice | None = None) -> ModelStructure:
    """Decode ``{"lattice", "W", "AF"}`` without validating the pair."""
    lat = _lattice_of(data, lat)
    if "W" not in data:
        raise FormatError("model structure needs a W field")
    W = arrows_from_json(lat, data["W"])
    AF = arrows_from_json(lat, data.get("AF", []))
    return ModelStructure(W, AF)


def step_to_json(step: LocalizationStep) -> dict:
    return {"side": step.side, "arrow": list(step.arrow)}


def sequence_to_json(seq: LocalizationSequence) -> dict:
    base = model_to_json(seq.base)
    del base["lattice"]
    return {
        "lattice": lattice_to_json(seq.base.lattice),
        "base": base,
        "steps": [step_to_json(s) for s in seq.steps],
    }


def sequence_from_json(data: dict, lat: Lattice | None = None) -> LocalizationSequence:
    lat = _lattice_of(data, lat)
    base = data.get("base")
    ms = model_from_json(base, lat) if base else ModelStructure.trivial(lat)
    steps = []
    for raw in data.get("steps", []):
        side = raw.get("side")
        if side not in ("left", "right"):
            raise FormatError(f"step side must be left or right, got {side!r}")
        steps.append(LocalizationStep(side, arrow_from_json(lat, raw.get("arrow"))))
    return LocalizationSequence(ms, tuple(steps))


def datum_to_json(d: SaturatedGridDatum) -> dict:
    return {
        "m": d.m,
        "n": d.n,
        "A": list(d.A),
        "inner": arrows_to_json(d.inner),
        "top_verticals": d.top_verticals,
        "top_joins": list(d.top_joins),
    }


def datum_from_json(data: dict) -> SaturatedGridDatum:
    try:
        m, n, A = int(data["m"]), int(data["n"]), tuple(data["A"])
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed datum: {exc}") from None
    small = Lattice.grid(len(A) - 1, n)
    inner = arrows_from_json(small, data.get("inner", []))
    joins = data.get("top_joins")
    return SaturatedGridDatum(m, n, A, inner, data.get("top_verticals"), None if joins is None else tuple(joins))


# -- files -------------------------------------------------------------------------


def read_json(path: str | Path) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from None


def _lattice_of(data: Any, lat: Lattice | None) -> Lattice:
    if not isinstance(data, dict):
        raise FormatError("expected a JSON object")
    if "lattice" in data:
        return lattice_from_json(data["lattice"])
    if lat is None:
        raise FormatError("no lattice given")
    return lat


__all__ = [
    "ModelkitError",
    "arrow_from_json",
    "arrows_from_json",
    "arrowset_from_json",
    "arrowset_to_json",
    "datum_from_json",
    "datum_to_json",
    "dumps",
    "dumps_line",
    "lattice_from_json",
    "lattice_to_json",
    "load_lattice",
    "model_from_json",
    "model_to_json",
    "read_json",
    "sequence_from_json",
    "sequence_to_json",
]
