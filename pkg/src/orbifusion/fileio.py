"""On-disk document formats and their parsers.

Every document is JSON. Ring files, graph files, and orbifold request
files carry a ``format`` field pinned to ``"orbifusion/1"``; permutation
files are bare JSON objects mapping label to label. Anything that fails
to parse, carries the wrong format tag, has unknown or missing keys, or
holds a value of the wrong shape raises :class:`SchemaError` before any
computation touches it.

Ring file::

    {"format": "orbifusion/1",
     "labels": ["id", "alpha", "rho"],
     "unit": "id",
     "dual": {"id": "id", "alpha": "alpha", "rho": "rho"},
     "N": [["alpha", "alpha", "id", 1], ...]}

Unlisted triples are zero; listed multiplicities must be >= 1.

Graph file::

    {"format": "orbifusion/1",
     "even": ["id", "rho"], "odd": ["m1"],
     "edges": [["rho", "m1", 2], ...]}

Orbifold request file: ``ring`` is either an inline ring object or a
path, resolved relative to the request file; ``alpha`` and ``rho`` are
labels, ``loi_trivial`` the explicit attestation, and ``obstruction``
an optional exact root of unity ``{"j": int, "n": int}``.

Writers emit byte-stable text: keys in one fixed order, arrays in index
order, two-space indent, trailing newline. Floats elsewhere in reports
go through :func:`fmt_float` so repeated runs agree to the byte.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

from .errors import SchemaError
from .graphs import BipartiteGraph
from .orbifold import ObstructionValue
from .rings import FusionRing

__all__ = [
    "SCHEMA",
    "load_json",
    "parse_ring",
    "load_ring",
    "dump_ring",
    "parse_graph",
    "load_graph",
    "dump_graph",
    "load_perm",
    "OrbifoldRequest",
    "parse_request",
    "load_request",
    "is_request",
    "dump_json",
    "fmt_float",
    "graph_dot",
]

SCHEMA = "orbifusion/1"


def fmt_float(x: float) -> str:
    return f"{float(x):.10g}"


def dump_json(doc) -> str:
    """Serialize a report document; keys keep their insertion order."""
    return json.dumps(doc, indent=2) + "\n"


def load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from None
    try:
        doc = json.loads(text)
    except ValueError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise SchemaError(f"{path} must hold a JSON object at top level")
    return doc


def _expect_keys(doc: dict, required: set[str], optional: set[str] = frozenset()):
    keys = set(doc)
    missing = required - keys
    if missing:
        raise SchemaError(f"missing keys: {', '.join(sorted(missing))}")
    unknown = keys - required - optional
    if unknown:
        raise SchemaError(f"unknown keys: {', '.join(sorted(unknown))}")


def _expect_format(doc: dict):
    tag = doc.get("format")
    if tag != SCHEMA:
        raise SchemaError(f"format must be {SCHEMA!r}, got {tag!r}")


def _string(x, what: str) -> str:
    if not isinstance(x, str):
        raise SchemaError(f"{what} must be a string, got {x!r}")
    return x


def _count(x, what: str) -> int:
    # bool is an int subclass, and JSON true/false must not pass here
    if not isinstance(x, int) or isinstance(x, bool):
        raise SchemaError(f"{what} must be an integer, got {x!r}")
    return x


def _string_list(x, what: str) -> list[str]:
    if not isinstance(x, list):
        raise SchemaError(f"{what} must be an array")
    return [_string(v, f"{what} entry") for v in x]


# ---------------------------------------------------------------------------
# rings
# ---------------------------------------------------------------------------

def parse_ring(doc: dict) -> FusionRing:
    _expect_format(doc)
    _expect_keys(doc, {"format", "labels", "unit", "dual", "N"})
    labels = _string_list(doc["labels"], "labels")
    unit = _string(doc["unit"], "unit")
    dual = doc["dual"]
    if not isinstance(dual, dict):
        raise SchemaError("dual must be an object mapping label to label")
    dual = {
        _string(k, "dual key"): _string(v, "dual value") for k, v in dual.items()
    }
    rows = doc["N"]
    if not isinstance(rows, list):
        raise SchemaError("N must be an array of [label, label, label, count]")
    triples = []
    for row in rows:
        if not (isinstance(row, list) and len(row) == 4):
            raise SchemaError(f"N entry must be [label, label, label, count]: {row!r}")
        a, b, c = (_string(x, "N label") for x in row[:3])
        n = _count(row[3], "N count")
        if n < 1:
            raise SchemaError(f"N count must be >= 1, got {n} at {row[:3]}")
        triples.append((a, b, c, n))
    return FusionRing.from_labels(labels, unit=unit, dual=dual, triples=triples)


def load_ring(path: str) -> FusionRing:
    return parse_ring(load_json(path))


def _row_block(name: str, rows: list[list], last: bool) -> list[str]:
    """A key whose value is an array of short rows, one row per line."""
    out = [f'  "{name}": [']
    for t, row in enumerate(rows):
        comma = "," if t + 1 < len(rows) else ""
        out.append("    " + json.dumps(row) + comma)
    out.append("  ]" + ("" if last else ","))
    return out


def dump_ring(ring: FusionRing) -> str:
    lab = ring.labels
    lines = ["{", f'  "format": {json.dumps(SCHEMA)},']
    lines.append(f'  "labels": {json.dumps(list(lab))},')
    lines.append(f'  "unit": {json.dumps(lab[ring.unit])},')
    dual = {lab[i]: lab[ring.dual[i]] for i in range(ring.size)}
    lines.append(f'  "dual": {json.dumps(dual)},')
    rows = [[lab[i], lab[j], lab[k], int(v)] for i, j, k, v in ring.iter_entries()]
    lines.extend(_row_block("N", rows, last=True))
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# graphs
# ---------------------------------------------------------------------------

def parse_graph(doc: dict) -> BipartiteGraph:
    _expect_format(doc)
    _expect_keys(doc, {"format", "even", "odd", "edges"})
    even = _string_list(doc["even"], "even")
    odd = _string_list(doc["odd"], "odd")
    rows = doc["edges"]
    if not isinstance(rows, list):
        raise SchemaError("edges must be an array of [even, odd, multiplicity]")
    edges = []
    for row in rows:
        if not (isinstance(row, list) and len(row) == 3):
            raise SchemaError(f"edge must be [even, odd, multiplicity]: {row!r}")
        e = _string(row[0], "edge even endpoint")
        o = _string(row[1], "edge odd endpoint")
        m = _count(row[2], "edge multiplicity")
        if m < 1:
            raise SchemaError(f"edge multiplicity must be >= 1, got {m} at ({e}, {o})")
        edges.append((e, o, m))
    return BipartiteGraph.from_edges(even=even, odd=odd, edges=edges)


def load_graph(path: str) -> BipartiteGraph:
    return parse_graph(load_json(path))


def dump_graph(graph: BipartiteGraph) -> str:
    lines = ["{", f'  "format": {json.dumps(SCHEMA)},']
    lines.append(f'  "even": {json.dumps(list(graph.even))},')
    lines.append(f'  "odd": {json.dumps(list(graph.odd))},')
    rows = [[e, o, int(m)] for e, o, m in graph.edges()]
    lines.extend(_row_block("edges", rows, last=True))
    lines.append("}")
    return "\n".join(lines) + "\n"


def _dot_quote(lab: str) -> str:
    return '"' + lab.replace("\\", "\\\\").replace('"', '\\"') + '"'


def graph_dot(graph: BipartiteGraph) -> str:
    """DOT text: even vertices circles, odd squares, counts as labels."""
    lines = ["graph principal {"]
    for lab in graph.even:
        lines.append(f"  {_dot_quote(lab)} [shape=circle];")
    for lab in graph.odd:
        lines.append(f"  {_dot_quote(lab)} [shape=square];")
    for e, o, m in graph.edges():
        attr = f' [label="{m}"]' if m >= 2 else ""
        lines.append(f"  {_dot_quote(e)} -- {_dot_quote(o)}{attr};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# permutations and orbifold requests
# ---------------------------------------------------------------------------

def load_perm(path: str) -> dict[str, str]:
    doc = load_json(path)
    return {
        _string(k, "permutation key"): _string(v, "permutation value")
        for k, v in doc.items()
    }


@dataclass(frozen=True)
class OrbifoldRequest:
    """Parsed orbifold request: the ring plus the run parameters."""

    ring: FusionRing
    alpha: str
    rho: str | None
    loi_trivial: bool
    obstruction: ObstructionValue | None


def is_request(doc: dict) -> bool:
    """Distinguish a request document from a bare ring document."""
    return "alpha" in doc


def parse_request(doc: dict, *, base: str = ".") -> OrbifoldRequest:
    _expect_format(doc)
    _expect_keys(
        doc,
        {"format", "ring", "alpha", "loi_trivial"},
        optional={"rho", "obstruction"},
    )
    ring_field = doc["ring"]
    if isinstance(ring_field, str):
        ring = load_ring(os.path.join(base, ring_field))
    elif isinstance(ring_field, dict):
        ring = parse_ring(ring_field)
    else:
        raise SchemaError("ring must be an inline ring object or a path string")
    alpha = _string(doc["alpha"], "alpha")
    rho = _string(doc["rho"], "rho") if "rho" in doc else None
    loi = doc["loi_trivial"]
    if not isinstance(loi, bool):
        raise SchemaError(f"loi_trivial must be true or false, got {loi!r}")
    obstruction = None
    if "obstruction" in doc:
        ob = doc["obstruction"]
        if not isinstance(ob, dict):
            raise SchemaError('obstruction must be an object {"j": int, "n": int}')
        _expect_keys(ob, {"j", "n"})
        jj = _count(ob["j"], "obstruction j")
        nn = _count(ob["n"], "obstruction n")
        if nn < 1:
            raise SchemaError(f"obstruction n must be >= 1, got {nn}")
        obstruction = ObstructionValue(jj % nn, nn)
    return OrbifoldRequest(
        ring=ring, alpha=alpha, rho=rho, loi_trivial=loi, obstruction=obstruction
    )


def load_request(path: str) -> OrbifoldRequest:
    return parse_request(load_json(path), base=os.path.dirname(path) or ".")
