"""JSON instance and rectangle files, and result records.

Instance file (one JSON object, unknown keys rejected)::

    {"version": 1, "ground_size": n, "balls": [[...], ...],
     "left_size": m, "adjacency": [[...], ...],
     "decompositions": [[{"outer": i, "holes": [j, ...]}, ...], ...],  # optional
     "bound": N,                                                       # optional
     "metadata": {"kind": ..., "seed": ..., "params": {...}}}          # optional

Ball indices in ``decompositions`` refer to positions in ``balls``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

from .cheese import CheeseDecomposition, SwissCheese
from .errors import MalformedInputError
from .extractor import guarantee_holds
from .instance import ExtractionInstance, HomogeneousRectangle
from .laminar import DirectedFamily, ElementSet

FORMAT_VERSION = 1
INSTANCE_KEYS = {"version", "ground_size", "balls", "left_size", "adjacency", "decompositions", "bound", "metadata"}
REQUIRED_KEYS = {"version", "ground_size", "balls", "left_size", "adjacency"}
METADATA_KEYS = {"kind", "seed", "params"}
CHEESE_KEYS = {"outer", "holes"}
RECT_KEYS = {"version", "kind", "left", "right"}

CSV_COLUMNS = (
    "instance_id", "kind", "seed", "n_left", "n_right", "bound_N", "out_left", "out_right",
    "rect_kind", "branches", "guarantee_ok", "oracle_minside", "micros",
)


def _dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":")) + "\n"


def _check_keys(obj, allowed, required, what):
    if not isinstance(obj, dict):
        raise MalformedInputError(f"{what} must be a JSON object")
    unknown = set(obj) - allowed
    if unknown:
        raise MalformedInputError(f"unknown {what} field(s): {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise MalformedInputError(f"missing {what} field(s): {sorted(missing)}")


def _int(value, what) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise MalformedInputError(f"{what} must be an integer, got {value!r}")
    return value


def _index_list(value, what) -> list[int]:
    if not isinstance(value, list):
        raise MalformedInputError(f"{what} must be a list")
    return [_int(v, what) for v in value]


def _element_set(value, n, what) -> ElementSet:
    # ElementSet.of checks each member's type and range itself
    if not isinstance(value, list):
        raise MalformedInputError(f"{what} must be a list")
    return ElementSet.of(n, value)


def instance_to_json(inst: ExtractionInstance) -> dict:
    fam = inst.family
    doc = {
        "version": FORMAT_VERSION,
        "ground_size": fam.ground_size,
        "balls": [list(b.members) for b in fam.balls],
        "left_size": inst.left_size,
        "adjacency": [list(a.members) for a in inst.adjacency],
        "decompositions": [
            [{"outer": fam.index_of(c.outer), "holes": [fam.index_of(h) for h in c.holes]} for c in d.cheeses]
            for d in inst.decomps
        ],
        "bound": inst.bound,
    }
    if inst.metadata:
        doc["metadata"] = inst.metadata
    return doc


def dumps_instance(inst: ExtractionInstance) -> str:
    return _dumps(instance_to_json(inst))


def instance_from_json(doc) -> ExtractionInstance:
    _check_keys(doc, INSTANCE_KEYS, REQUIRED_KEYS, "instance")
    if doc["version"] != FORMAT_VERSION:
        raise MalformedInputError(f"unsupported format version {doc['version']!r}")
    n = _int(doc["ground_size"], "ground_size")
    m = _int(doc["left_size"], "left_size")
    if n < 0 or m < 0:
        raise MalformedInputError("sizes must be nonnegative")
    if not isinstance(doc["balls"], list) or not isinstance(doc["adjacency"], list):
        raise MalformedInputError("balls and adjacency must be lists")
    balls = [_element_set(b, n, "ball") for b in doc["balls"]]
    family = DirectedFamily(n, tuple(balls))
    if len(doc["adjacency"]) != m:
        raise MalformedInputError(f"adjacency has {len(doc['adjacency'])} rows, left_size is {m}")
    adjacency = [_element_set(a, n, "adjacency row") for a in doc["adjacency"]]

    decomps = None
    if doc.get("decompositions") is not None:
        rows = doc["decompositions"]
        if not isinstance(rows, list) or len(rows) != m:
            raise MalformedInputError("decompositions must list one entry per left vertex")

        def ball(i):
            i = _int(i, "ball index")
            if not 0 <= i < len(balls):
                raise MalformedInputError(f"ball index {i} out of range")
            return balls[i]

        decomps = []
        for row in rows:
            if not isinstance(row, list):
                raise MalformedInputError("a decomposition must be a list of cheeses")
            cheeses = []
            for c in row:
                _check_keys(c, CHEESE_KEYS, CHEESE_KEYS, "cheese")
                holes = c["holes"]
                if not isinstance(holes, list):
                    raise MalformedInputError("holes must be a list")
                cheeses.append(SwissCheese(ball(c["outer"]), tuple(ball(h) for h in holes)))
            decomps.append(CheeseDecomposition(n, tuple(cheeses)))

    bound = doc.get("bound")
    if bound is not None:
        bound = _int(bound, "bound")
    metadata = doc.get("metadata") or {}
    _check_keys(metadata, METADATA_KEYS, set(), "metadata")
    return ExtractionInstance.build(family, adjacency, decomps, bound, metadata)


def loads_instance(text: str) -> ExtractionInstance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"not valid JSON: {exc}") from None
    return instance_from_json(doc)


def dumps_rectangle(rect: HomogeneousRectangle) -> str:
    return _dumps({"version": FORMAT_VERSION, "kind": rect.kind, "left": list(rect.left), "right": list(rect.right.members)})


def loads_rectangle(text: str, right_size: int) -> HomogeneousRectangle:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"not valid JSON: {exc}") from None
    _check_keys(doc, RECT_KEYS, RECT_KEYS, "rectangle")
    if doc["version"] != FORMAT_VERSION:
        raise MalformedInputError(f"unsupported format version {doc['version']!r}")
    right = _element_set(doc["right"], right_size, "right")
    return HomogeneousRectangle(tuple(_index_list(doc["left"], "left")), right, doc["kind"])


@dataclass(frozen=True)
class ResultRecord:
    instance_id: str
    kind: str
    seed: int | None
    n_left: int
    n_right: int
    bound_N: int
    out_left: int
    out_right: int
    rect_kind: str
    branches: tuple[str, ...]
    oracle_minside: int | str | None = None
    micros: int | None = None

    @property
    def guarantee_ok(self) -> bool:
        # recomputed from the sizes, never stored
        if self.rect_kind not in ("complete", "empty"):
            return False
        return guarantee_holds(self.n_left, self.n_right, self.bound_N, self.out_left, self.out_right)

    def to_json(self) -> dict:
        return {
            "instance_id": self.instance_id,
            "kind": self.kind,
            "seed": self.seed,
            "n_left": self.n_left,
            "n_right": self.n_right,
            "bound_N": self.bound_N,
            "out_left": self.out_left,
            "out_right": self.out_right,
            "rect_kind": self.rect_kind,
            "branches": list(self.branches),
            "guarantee_ok": self.guarantee_ok,
            "oracle_minside": self.oracle_minside,
            "micros": self.micros,
        }

    def to_line(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    def to_row(self) -> list:
        d = self.to_json()
        d["branches"] = ";".join(self.branches)
        d["guarantee_ok"] = "true" if self.guarantee_ok else "false"
        return ["" if d[c] is None else d[c] for c in CSV_COLUMNS]
