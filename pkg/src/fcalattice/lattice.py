"""The concept digraph: vertex table, cover edges, validation and exporters."""
from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Sequence

from .context import FormalContext, iter_bits, to_bits
from .core import Concept, intent_key
from .errors import DanglingEdge, ParseError
from . import oracle

__all__ = [
    "LatticeGraph",
    "ValidationReport",
    "build_lattice",
    "validate_lattice",
    "export_dot",
    "export_graphml",
    "export_concepts_tsv",
    "parse_concepts_tsv",
]


@dataclass
class LatticeGraph:
    """Vertices ``0..n-1`` in (level, intent) order; edges run from a concept to its upper cover."""

    vertices: list[Concept]
    edges: list[tuple[int, int]]
    objects: Sequence[str] | None = None
    attributes: Sequence[str] | None = None

    @property
    def levels(self) -> list[int]:
        return [c.level for c in self.vertices]

    def sources(self) -> list[int]:
        has_in = {b for _, b in self.edges}
        return [v for v in range(len(self.vertices)) if v not in has_in]

    def sinks(self) -> list[int]:
        has_out = {a for a, _ in self.edges}
        return [v for v in range(len(self.vertices)) if v not in has_out]

    def object_names(self, extent: int) -> list[str]:
        names = self.objects
        return [names[g] if names else str(g) for g in iter_bits(extent)]

    def attribute_names(self, intent: int) -> list[str]:
        names = self.attributes
        return [names[m] if names else str(m) for m in iter_bits(intent)]


def _sort_key(c: Concept):
    return (c.level, intent_key(c.intent))


def build_lattice(
    concepts: list[Concept],
    evidence,
    context: FormalContext | None = None,
) -> LatticeGraph:
    """Number the concepts and keep the evidence pairs that are covers.

    A pair (p, c) is dropped when another evidence child of p has an extent
    strictly inside c's; given that the evidence holds every cover of p, this
    is exactly the pairs with an intermediate concept.
    """
    vertices = sorted(concepts, key=_sort_key)
    vid = {c.intent: i for i, c in enumerate(vertices)}
    if len(vid) != len(vertices):
        raise ValueError("concepts must have pairwise distinct intents")
    children: dict[int, set[int]] = defaultdict(set)
    for p, c in evidence:
        if p not in vid or c not in vid:
            missing = p if p not in vid else c
            raise DanglingEdge(f"evidence references unknown intent {intent_key(missing)}")
        children[vid[p]].add(vid[c])
    edges = []
    for a, cs in children.items():
        for b in cs:
            ext_b = vertices[b].extent
            if not any(
                w != b and vertices[w].extent & ~ext_b == 0 and vertices[w].extent != ext_b
                for w in cs
            ):
                edges.append((a, b))
    edges.sort()
    return LatticeGraph(
        vertices,
        edges,
        context.objects if context is not None else None,
        context.attributes if context is not None else None,
    )


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)
    checks: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def _is_acyclic(n: int, edges) -> bool:
    indeg = [0] * n
    out = defaultdict(list)
    for a, b in edges:
        out[a].append(b)
        indeg[b] += 1
    queue = deque(v for v in range(n) if indeg[v] == 0)
    seen = 0
    while queue:
        v = queue.popleft()
        seen += 1
        for w in out[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    return seen == n


def validate_lattice(graph: LatticeGraph, ctx: FormalContext, oracle_limit: int = 10) -> ValidationReport:
    """Collect every structural violation; compares against the oracle for small contexts."""
    report = ValidationReport()
    V = graph.vertices
    n = len(V)

    report.checks.append("acyclic")
    if not _is_acyclic(n, graph.edges):
        report.violations.append("graph has a cycle")

    report.checks.append("unique source and sink")
    if n:
        sources, sinks = graph.sources(), graph.sinks()
        if len(sources) != 1:
            report.violations.append(f"expected one source, found {sources}")
        if len(sinks) != 1:
            report.violations.append(f"expected one sink, found {sinks}")

    report.checks.append("edges strictly grow the extent")
    for a, b in graph.edges:
        ea, eb = V[a].extent, V[b].extent
        if ea & ~eb or ea == eb:
            report.violations.append(f"edge {a}->{b}: extent not strictly contained")
        if V[b].level > V[a].level + 1:
            report.violations.append(
                f"edge {a}->{b}: level jumps from {V[a].level} to {V[b].level}"
            )

    if ctx.n_objects <= oracle_limit:
        report.checks.append("concepts and covers match the brute-force oracle")
        truth = oracle.brute_force_concepts(ctx)
        as_sets = {
            c.intent: (frozenset(iter_bits(c.extent)), frozenset(iter_bits(c.intent))) for c in V
        }
        got_concepts = set(as_sets.values())
        if got_concepts != set(truth):
            report.violations.append(
                f"concept set mismatch: {len(got_concepts - set(truth))} unexpected, "
                f"{len(set(truth) - got_concepts)} missing"
            )
        want = oracle.brute_force_covers(truth)
        got = {(as_sets[V[a].intent], as_sets[V[b].intent]) for a, b in graph.edges}
        for extra in sorted(got - want, key=repr):
            report.violations.append(f"edge is not a cover: {_fmt(extra)}")
        for missing in sorted(want - got, key=repr):
            report.violations.append(f"cover missing from graph: {_fmt(missing)}")
    return report


def _fmt(pair) -> str:
    (ea, ia), (eb, ib) = pair
    return f"({sorted(ea)}, {sorted(ia)}) -> ({sorted(eb)}, {sorted(ib)})"


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def _label(graph: LatticeGraph, c: Concept, labels: str) -> str:
    if labels == "sizes":
        return f"{c.extent.bit_count()}/{c.intent.bit_count()}"
    objs = ",".join(graph.object_names(c.extent))
    attrs = ",".join(graph.attribute_names(c.intent))
    return f"{{{objs}}} / {{{attrs}}}"


def export_dot(graph: LatticeGraph, labels: str = "full") -> str:
    if labels not in ("full", "sizes"):
        raise ValueError(f"labels must be 'full' or 'sizes', got {labels!r}")
    out = ["digraph lattice {", "  rankdir=BT;", "  node [shape=box];"]
    for i, c in enumerate(graph.vertices):
        out.append(f'  {i} [label="{_dot_escape(_label(graph, c, labels))}", level={c.level}];')
    for a, b in graph.edges:
        out.append(f"  {a} -> {b};")
    out.append("}")
    return "\n".join(out) + "\n"


def export_graphml(graph: LatticeGraph) -> str:
    ns = "http://graphml.graphdrawing.org/xmlns"
    root = ET.Element("graphml", xmlns=ns)
    for key in ("level", "extent", "intent"):
        ET.SubElement(
            root,
            "key",
            {"id": key, "for": "node", "attr.name": key,
             "attr.type": "int" if key == "level" else "string"},
        )
    g = ET.SubElement(root, "graph", id="lattice", edgedefault="directed")
    for i, c in enumerate(graph.vertices):
        node = ET.SubElement(g, "node", id=f"n{i}")
        ET.SubElement(node, "data", key="level").text = str(c.level)
        ET.SubElement(node, "data", key="extent").text = ",".join(graph.object_names(c.extent))
        ET.SubElement(node, "data", key="intent").text = ",".join(graph.attribute_names(c.intent))
    for a, b in graph.edges:
        ET.SubElement(g, "edge", source=f"n{a}", target=f"n{b}")
    ET.indent(root)
    return ET.tostring(root, encoding="unicode", xml_declaration=True) + "\n"


_TSV_SPECIAL = re.compile(r"([\\,{}])")


def _tsv_escape(name: str) -> str:
    if "\t" in name:
        raise ValueError(f"name {name!r} contains a tab")
    return _TSV_SPECIAL.sub(r"\\\1", name)


def _tsv_split(field_text: str, lineno: int) -> list[str]:
    if len(field_text) < 2 or field_text[0] != "{" or field_text[-1] != "}":
        raise ParseError(f"line {lineno}: expected a braced name list, got {field_text!r}")
    inner = field_text[1:-1]
    if not inner:
        return []
    names, buf, i = [], [], 0
    while i < len(inner):
        ch = inner[i]
        if ch == "\\" and i + 1 < len(inner):
            buf.append(inner[i + 1])
            i += 2
            continue
        if ch == ",":
            names.append("".join(buf))
            buf = []
        else:
            buf.append(ch)
        i += 1
    names.append("".join(buf))
    return names


def export_concepts_tsv(concepts: list[Concept], ctx: FormalContext) -> str:
    """``level<TAB>{objects}<TAB>{attributes}`` per concept, sorted by (level, intent)."""
    lines = []
    for c in sorted(concepts, key=_sort_key):
        objs = ",".join(_tsv_escape(ctx.objects[g]) for g in iter_bits(c.extent))
        attrs = ",".join(_tsv_escape(ctx.attributes[m]) for m in iter_bits(c.intent))
        lines.append(f"{c.level}\t{{{objs}}}\t{{{attrs}}}\n")
    return "".join(lines)


def parse_concepts_tsv(text: str, ctx: FormalContext) -> list[Concept]:
    oid = {n: i for i, n in enumerate(ctx.objects)}
    aid = {n: i for i, n in enumerate(ctx.attributes)}
    concepts = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ParseError(f"line {lineno}: expected 3 tab-separated fields")
        try:
            level = int(parts[0])
            extent = to_bits(oid[n] for n in _tsv_split(parts[1], lineno))
            intent = to_bits(aid[n] for n in _tsv_split(parts[2], lineno))
        except (ValueError, KeyError) as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
        concepts.append(Concept(extent, intent, True, level))
    return concepts
