"""JSON file formats for instances and solutions.

Both formats carry an explicit schema_version and reject unknown fields.
Coordinates are serialized at full float precision (shortest round-trip
repr), so read(write(x)) is exact.
"""

from __future__ import annotations

import json
from pathlib import Path

from .model import BinState, Instance, Item, Placement, Solution, objective

SCHEMA_VERSION = 1


class FormatError(ValueError):
    """Raised when a file does not parse as a valid instance/solution."""


def _check_keys(obj: dict, allowed: set[str], required: set[str], what: str):
    unknown = set(obj) - allowed
    if unknown:
        raise FormatError(f"{what}: unknown fields {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise FormatError(f"{what}: missing fields {sorted(missing)}")


def instance_to_dict(inst: Instance) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "name": inst.name,
        "bin_radius": inst.bin_radius,
        "items": [{"id": it.id, "radius": it.radius} for it in inst.items],
        "metadata": {"family": inst.family, "n0": inst.n0, "seed": inst.seed},
    }


def instance_from_dict(data: dict) -> Instance:
    _check_keys(data, {"schema_version", "name", "bin_radius", "items", "metadata"},
                {"schema_version", "name", "bin_radius", "items"}, "instance")
    if data["schema_version"] != SCHEMA_VERSION:
        raise FormatError(f"unsupported schema_version {data['schema_version']}")
    meta = data.get("metadata", {}) or {}
    _check_keys(meta, {"family", "n0", "seed"}, set(), "instance.metadata")
    items = []
    for it in data["items"]:
        _check_keys(it, {"id", "radius"}, {"id", "radius"}, "instance.items[]")
        items.append(Item(int(it["id"]), float(it["radius"])))
    try:
        return Instance(
            name=str(data["name"]),
            bin_radius=float(data["bin_radius"]),
            items=tuple(items),
            family=meta.get("family", "custom"),
            n0=meta.get("n0"),
            seed=meta.get("seed"),
        )
    except ValueError as e:
        raise FormatError(str(e)) from e


def solution_to_dict(sol: Solution) -> dict:
    m = objective(sol)
    return {
        "schema_version": SCHEMA_VERSION,
        "instance_name": sol.instance.name,
        "bins": [
            [{"item_id": p.item_id, "x": p.x, "y": p.y} for p in b.placements]
            for b in sol.bins
        ],
        "metrics": {"K": m.k_used, "densities": list(m.densities), "F": m.f_obj},
    }


def solution_from_dict(data: dict, instance: Instance) -> Solution:
    _check_keys(data, {"schema_version", "instance_name", "bins", "metrics"},
                {"schema_version", "instance_name", "bins"}, "solution")
    if data["schema_version"] != SCHEMA_VERSION:
        raise FormatError(f"unsupported schema_version {data['schema_version']}")
    bins = []
    for bin_data in data["bins"]:
        placements = []
        for p in bin_data:
            _check_keys(p, {"item_id", "x", "y"}, {"item_id", "x", "y"},
                        "solution.bins[][]")
            placements.append(Placement(int(p["item_id"]), float(p["x"]), float(p["y"])))
        bins.append(BinState(tuple(placements)))
    return Solution(instance, tuple(bins))


def _dump(data: dict, path: Path) -> None:
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")


def _load(path: Path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}: not valid JSON: {e}") from e


def write_instance(inst: Instance, path: str | Path) -> None:
    _dump(instance_to_dict(inst), Path(path))


def read_instance(path: str | Path) -> Instance:
    return instance_from_dict(_load(Path(path)))


def write_solution(sol: Solution, path: str | Path) -> None:
    _dump(solution_to_dict(sol), Path(path))


def read_solution(path: str | Path, instance: Instance) -> Solution:
    return solution_from_dict(_load(Path(path)), instance)
