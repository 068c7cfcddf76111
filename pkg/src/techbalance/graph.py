"""Creational dependency graphs.

A creational graph records which assets a player must already hold
before another asset may be built: nodes are asset types, a directed
edge ``prerequisite -> product`` means "you need ``required_count``
live instances of the prerequisite to create one product".  A valid
graph is a DAG with at most one edge per (prerequisite, product) pair.

Construction is deliberately permissive: :class:`CreationalGraph`
accepts any candidate node/edge lists (including cyclic or duplicated
ones) so that :func:`validate` can inspect and report the problems
instead of crashing.  All query operations are pure; a validated graph
is immutable in practice and safe to share between matches.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import UnknownAssetError
from .validation import ValidationReport

# A player's live asset counts, keyed by asset id.  Absent key == 0.
Holdings = Mapping[str, int]


@dataclass(frozen=True)
class AssetType:
    id: str
    display_name: str = ""

    def __post_init__(self):
        if not self.display_name:
            object.__setattr__(self, "display_name", self.id)


@dataclass(frozen=True)
class CreationalEdge:
    """Direct prerequisite relation: ``required_count`` instances of
    ``prerequisite`` must be held before ``product`` can be created."""

    prerequisite: str
    product: str
    required_count: int = 1


class CreationalGraph:
    """Asset types plus their direct prerequisite edges.

    Keeps assets and edges in input order (scenario files round-trip
    through this order).  Edge indexes skip edges whose endpoints are
    unknown; :func:`validate` reports those separately.
    """

    def __init__(self, assets: Iterable[AssetType], edges: Iterable[CreationalEdge]):
        self.assets: list[AssetType] = list(assets)
        self.edges: list[CreationalEdge] = list(edges)
        self.assets_by_id: dict[str, AssetType] = {}
        for asset in self.assets:
            self.assets_by_id.setdefault(asset.id, asset)
        self._out: dict[str, list[CreationalEdge]] = {a.id: [] for a in self.assets}
        self._in: dict[str, list[CreationalEdge]] = {a.id: [] for a in self.assets}
        for edge in self.edges:
            if edge.prerequisite in self.assets_by_id and edge.product in self.assets_by_id:
                self._out[edge.prerequisite].append(edge)
                self._in[edge.product].append(edge)
        self._closure: dict[str, frozenset[str]] | None = None

    def __contains__(self, asset_id: str) -> bool:
        return asset_id in self.assets_by_id

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CreationalGraph):
            return NotImplemented
        return self.assets == other.assets and self.edges == other.edges

    def __repr__(self) -> str:
        return f"CreationalGraph(assets={len(self.assets)}, edges={len(self.edges)})"

    def asset_ids(self) -> list[str]:
        return [a.id for a in self.assets]

    def incoming(self, asset_id: str) -> list[CreationalEdge]:
        self._require(asset_id)
        return self._in[asset_id]

    def outgoing(self, asset_id: str) -> list[CreationalEdge]:
        self._require(asset_id)
        return self._out[asset_id]

    @property
    def roots(self) -> list[str]:
        """Assets with no incoming edge, in declaration order."""
        return [a.id for a in self.assets if not self._in[a.id]]

    def _require(self, asset_id: str) -> None:
        if asset_id not in self.assets_by_id:
            raise UnknownAssetError(asset_id)


def validate(graph: CreationalGraph) -> ValidationReport:
    """Check every structural invariant of a candidate graph.

    Errors: duplicate asset ids, self-edges, non-positive required
    counts, edges naming unknown assets, duplicate (prerequisite,
    product) pairs, and cycles (one full cycle path is reported).
    Warnings: no roots, and assets unreachable from every root
    (scenario authors may stage content, so orphans are not fatal).
    """
    report = ValidationReport()

    seen_ids: set[str] = set()
    for asset in graph.assets:
        if asset.id in seen_ids:
            report.error("duplicate-asset", f"asset id {asset.id!r} declared more than once")
        seen_ids.add(asset.id)

    seen_pairs: set[tuple[str, str]] = set()
    for edge in graph.edges:
        pair = (edge.prerequisite, edge.product)
        for endpoint in pair:
            if endpoint not in graph.assets_by_id:
                report.error("unknown-asset", f"edge {pair[0]!r} -> {pair[1]!r} references unknown asset {endpoint!r}")
        if edge.prerequisite == edge.product:
            report.error("self-edge", f"asset {edge.prerequisite!r} cannot be its own prerequisite")
        if edge.required_count < 1:
            report.error(
                "bad-count",
                f"edge {pair[0]!r} -> {pair[1]!r} has required_count {edge.required_count}; must be >= 1",
            )
        if pair in seen_pairs:
            report.error("duplicate-edge", f"duplicate edge {pair[0]!r} -> {pair[1]!r}")
        seen_pairs.add(pair)

    cycle = _find_cycle(graph)
    if cycle is not None:
        report.error("cycle", "cycle: " + " -> ".join(cycle))

    if not graph.assets:
        report.warn("no-roots", "graph has no assets and therefore no roots")
    else:
        roots = graph.roots
        if not roots:
            report.warn("no-roots", "graph has no root assets (every asset has a prerequisite)")
        else:
            reached = _reachable_from(graph, roots)
            orphans = [a.id for a in graph.assets if a.id not in reached]
            if orphans:
                report.warn(
                    "orphan-assets",
                    "assets unreachable from any root: " + ", ".join(orphans),
                )
    return report


def _find_cycle(graph: CreationalGraph) -> list[str] | None:
    """Return one full cycle path (first node repeated at the end), or None."""
    WHITE, GREY, BLACK = 0, 1, 2
    color = {a.id: WHITE for a in graph.assets}
    for start in graph.asset_ids():
        if color[start] != WHITE:
            continue
        # Iterative DFS; `path` mirrors the grey stack so the cycle can
        # be cut out when a back edge appears.
        stack: list[tuple[str, int]] = [(start, 0)]
        path: list[str] = []
        while stack:
            node, edge_idx = stack.pop()
            if edge_idx == 0:
                color[node] = GREY
                path.append(node)
            out = graph._out[node]
            advanced = False
            for i in range(edge_idx, len(out)):
                succ = out[i].product
                if color[succ] == GREY:
                    return path[path.index(succ):] + [succ]
                if color[succ] == WHITE:
                    stack.append((node, i + 1))
                    stack.append((succ, 0))
                    advanced = True
                    break
            if not advanced:
                color[node] = BLACK
                path.pop()
    return None


def _reachable_from(graph: CreationalGraph, sources: Iterable[str]) -> set[str]:
    seen = set(sources)
    queue = deque(seen)
    while queue:
        node = queue.popleft()
        for edge in graph._out[node]:
            if edge.product not in seen:
                seen.add(edge.product)
                queue.append(edge.product)
    return seen


def reachable(graph: CreationalGraph, ancestor: str, descendant: str) -> bool:
    """True iff a directed path of one or more edges leads from
    ``ancestor`` to ``descendant``.  Strict: ``reachable(a, a)`` is
    False unless the (invalid) graph routes a cycle through ``a``.
    """
    graph._require(ancestor)
    graph._require(descendant)
    seen: set[str] = set()
    stack = [e.product for e in graph._out[ancestor]]
    while stack:
        node = stack.pop()
        if node == descendant:
            return True
        if node in seen:
            continue
        seen.add(node)
        stack.extend(e.product for e in graph._out[node])
    return False


def descendants(graph: CreationalGraph, asset_id: str) -> frozenset[str]:
    """All assets strictly below ``asset_id``: {d : reachable(asset, d)}.

    Computed from a whole-graph transitive closure (reverse topological
    accumulation), which deliberately shares no code with the per-query
    search in :func:`reachable`; the two cross-check each other.
    """
    graph._require(asset_id)
    if graph._closure is None:
        graph._closure = _transitive_closure(graph)
    return graph._closure[asset_id]


def _transitive_closure(graph: CreationalGraph) -> dict[str, frozenset[str]]:
    order = _kahn_order(graph)
    closure: dict[str, frozenset[str]] = {}
    if order is None:
        # Cyclic candidate graph: fall back to per-node BFS so queries
        # on invalid-but-inspectable graphs still terminate.
        for asset in graph.assets:
            closure[asset.id] = frozenset(
                _reachable_from(graph, [e.product for e in graph._out[asset.id]])
            )
        return closure
    for node in reversed(order):
        acc: set[str] = set()
        for edge in graph._out[node]:
            acc.add(edge.product)
            acc.update(closure[edge.product])
        closure[node] = frozenset(acc)
    return closure


def _kahn_order(graph: CreationalGraph) -> list[str] | None:
    """Topological order via in-degree peeling; None if a cycle remains."""
    degree = {a.id: len(graph._in[a.id]) for a in graph.assets}
    queue = deque(a.id for a in graph.assets if degree[a.id] == 0)
    order: list[str] = []
    while queue:
        node = queue.popleft()
        order.append(node)
        for edge in graph._out[node]:
            degree[edge.product] -= 1
            if degree[edge.product] == 0:
                queue.append(edge.product)
    if len(order) != len(graph.assets):
        return None
    return order


def missing_prerequisites(
    graph: CreationalGraph, asset_id: str, holdings: Holdings
) -> list[tuple[str, int, int]]:
    """Unsatisfied incoming edges as (prerequisite, required, held)."""
    missing = []
    for edge in graph.incoming(asset_id):
        have = holdings.get(edge.prerequisite, 0)
        if have < edge.required_count:
            missing.append((edge.prerequisite, edge.required_count, have))
    return missing


def can_create(graph: CreationalGraph, asset_id: str, holdings: Holdings) -> bool:
    """True iff every incoming edge's count requirement is met.

    Roots have no incoming edges and are always creatable.
    """
    return not missing_prerequisites(graph, asset_id, holdings)


def creation_frontier(graph: CreationalGraph, holdings: Holdings) -> set[str]:
    """Every asset the holdings currently permit creating."""
    return {a.id for a in graph.assets if can_create(graph, a.id, holdings)}
