"""JSON graph documents and DOT export.

Graph document::

    {
      "nodes": ["a", "b"],
      "directed": [["a", "b"]],
      "bidirected": [["a", "b"]],
      "comment": "optional free text, preserved"
    }

A DMEG document has the same shape with a third ``"solid"`` or ``"dashed"``
entry on every edge.  Loops are always written solid.

Canonical form keeps the node order as given, writes each bidirected pair in
node order, and sorts both edge lists by node position.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .equivalence import Dmeg
from .graph import BIDIRECTED, DIRECTED, Dmg, DuplicateEdgeError, Edge, GraphError, make_dmg

STATUSES = ("solid", "dashed")


class GraphFormatError(GraphError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)


def _load_json(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"syntax error: {exc.msg}", exc.lineno, exc.colno) from None


def _pairs(doc: dict, key: str, width: int) -> list[list]:
    raw = doc.get(key, [])
    if not isinstance(raw, list):
        raise GraphFormatError(f"{key!r} must be a list")
    for item in raw:
        if not isinstance(item, list) or len(item) != width:
            raise GraphFormatError(f"every entry of {key!r} must be a list of length {width}")
    return raw


def _graph_from_doc(doc: Any, width: int) -> tuple[Dmg, dict]:
    if not isinstance(doc, dict):
        raise GraphFormatError("top level must be an object")
    unknown = set(doc) - {"nodes", "directed", "bidirected", "comment"}
    if unknown:
        raise GraphFormatError(f"unknown keys: {', '.join(sorted(unknown))}")
    nodes = doc.get("nodes")
    if not isinstance(nodes, list):
        raise GraphFormatError("'nodes' must be a list of labels")
    directed = _pairs(doc, "directed", width)
    bidirected = _pairs(doc, "bidirected", width)
    g = make_dmg(nodes, [p[:2] for p in directed], [p[:2] for p in bidirected])
    status = {}
    if width == 3:
        for kind, rows in ((DIRECTED, directed), (BIDIRECTED, bidirected)):
            for u, v, st in rows:
                if st not in STATUSES:
                    raise GraphFormatError(f"edge status must be solid or dashed, got {st!r}")
                e = Edge(kind, g.index(u), g.index(v))
                if kind == BIDIRECTED:
                    e = Edge.bidirected(e.u, e.v)
                status[e] = st
    return g, status


def parse_graph(text: str) -> Dmg:
    g, _ = _graph_from_doc(_load_json(text), 2)
    return g


def parse_comment(text: str) -> str | None:
    doc = _load_json(text)
    return doc.get("comment") if isinstance(doc, dict) else None


def parse_dmeg(text: str) -> Dmeg:
    g, status = _graph_from_doc(_load_json(text), 3)
    dashed = frozenset(e for e, st in status.items() if st == "dashed")
    if any(e.is_loop for e in dashed):
        raise GraphFormatError("loops are always solid")
    return Dmeg(g, dashed)


def _edge_rows(g: Dmg, status: dict[Edge, str] | None):
    lab = g.labels
    d, b = [], []
    for e in g.edges():
        row = [lab[e.u], lab[e.v]]
        if status is not None:
            row.append(status.get(e, "solid"))
        (d if e.kind == DIRECTED else b).append(row)
    return d, b


def _dump(nodes, directed, bidirected, comment) -> str:
    enc = json.dumps
    lines = ["{"]
    if comment is not None:
        lines.append(f'  "comment": {enc(comment, ensure_ascii=False)},')
    lines.append(f'  "nodes": {enc(list(nodes), ensure_ascii=False)},')
    for key, rows, last in (("directed", directed, False), ("bidirected", bidirected, True)):
        if rows:
            body = ",\n".join("    " + enc(r, ensure_ascii=False) for r in rows)
            text = f'  "{key}": [\n{body}\n  ]'
        else:
            text = f'  "{key}": []'
        lines.append(text + ("" if last else ","))
    lines.append("}")
    return "\n".join(lines) + "\n"


def serialize_graph(g: Dmg, comment: str | None = None) -> str:
    d, b = _edge_rows(g, None)
    return _dump(g.labels, d, b, comment)


def serialize_dmeg(m: Dmeg, comment: str | None = None) -> str:
    status = {e: "dashed" for e in m.dashed}
    d, b = _edge_rows(m.maximal, status)
    return _dump(m.maximal.labels, d, b, comment)


def canonicalize(text: str) -> str:
    """Parse then serialize, keeping any comment."""
    doc = _load_json(text)
    comment = doc.get("comment") if isinstance(doc, dict) else None
    rows = (doc.get("directed") or []) + (doc.get("bidirected") or []) if isinstance(doc, dict) else []
    if rows and all(isinstance(r, list) and len(r) == 3 for r in rows):
        return serialize_dmeg(parse_dmeg(text), comment)
    return serialize_graph(parse_graph(text), comment)


def read_graph(path: str | Path) -> Dmg:
    return parse_graph(Path(path).read_text(encoding="utf-8"))


def read_dmeg(path: str | Path) -> Dmeg:
    return parse_dmeg(Path(path).read_text(encoding="utf-8"))


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(g: Dmg | Dmeg, name: str = "G") -> str:
    """Graphviz text; bidirected edges get ``dir=both``, dashed ones ``style=dashed``."""
    dashed: frozenset[Edge] = frozenset()
    if isinstance(g, Dmeg):
        g, dashed = g.maximal, g.dashed
    lab = g.labels
    out = [f"digraph {_quote(name)} {{"]
    for v in lab:
        out.append(f"  {_quote(v)};")
    for e in g.edges():
        attrs = []
        if e.kind == BIDIRECTED:
            attrs.append("dir=both")
        if e in dashed:
            attrs.append("style=dashed")
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        out.append(f"  {_quote(lab[e.u])} -> {_quote(lab[e.v])}{suffix};")
    out.append("}")
    return "\n".join(out) + "\n"


__all__ = [
    "DuplicateEdgeError", "GraphFormatError", "canonicalize", "export_dot", "parse_comment",
    "parse_dmeg", "parse_graph", "read_dmeg", "read_graph", "serialize_dmeg", "serialize_graph",
]
