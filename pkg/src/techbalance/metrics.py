"""Dependency values, aggregate significance, and cease-fire policies.

Each (ancestor, descendant) pair of assets may carry a positive integer
dependency value: how much the descendant's creation leans on the
ancestor's survival.  Values are keyed on *reachable* pairs, not just
direct edges, because a deep prerequisite matters to everything built
above it.  Summing an asset's row gives its aggregate significance,
which in turn drives how long an attacker is frozen after destroying
it (the cease-fire policy).  All arithmetic is exact integer math.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .errors import UnknownAssetError
from .graph import CreationalGraph, reachable
from .validation import Issue, ValidationReport


@dataclass(frozen=True)
class DependencyValueMatrix:
    """Sparse (ancestor id, descendant id) -> weight map.

    Absent pairs read as 0.  Stored values must be >= 1 and must sit on
    reachable pairs of the companion graph; use :meth:`checked` to
    enforce that at construction, or :func:`matrix_issues` to collect
    violations without raising.
    """

    values: Mapping[tuple[str, str], int] = field(default_factory=dict)

    @classmethod
    def checked(
        cls, graph: CreationalGraph, values: Mapping[tuple[str, str], int]
    ) -> "DependencyValueMatrix":
        matrix = cls(dict(values))
        issues = matrix_issues(graph, matrix)
        if issues:
            raise ValueError("; ".join(i.render() for i in issues))
        return matrix


def matrix_issues(graph: CreationalGraph, matrix: DependencyValueMatrix) -> list[Issue]:
    """Every way the matrix disagrees with its graph."""
    issues = []
    for (ancestor, descendant), value in matrix.values.items():
        if ancestor not in graph or descendant not in graph:
            missing = ancestor if ancestor not in graph else descendant
            issues.append(Issue("unknown-asset", f"value on pair ({ancestor!r}, {descendant!r}) references unknown asset {missing!r}"))
            continue
        if value < 1:
            issues.append(Issue("bad-value", f"value on pair ({ancestor!r}, {descendant!r}) is {value}; must be >= 1"))
        if not reachable(graph, ancestor, descendant):
            issues.append(
                Issue(
                    "unreachable-pair",
                    f"value on unreachable pair: no creational path from {ancestor!r} to {descendant!r}",
                )
            )
    return issues


def dependency_value(
    graph: CreationalGraph, matrix: DependencyValueMatrix, ancestor: str, descendant: str
) -> int:
    """Stored weight for the pair, or 0 when unkeyed."""
    graph._require(ancestor)
    graph._require(descendant)
    return matrix.values.get((ancestor, descendant), 0)


def aggregate_path_value(
    graph: CreationalGraph, matrix: DependencyValueMatrix, asset_id: str
) -> int:
    """Row sum of the asset's dependency values; 0 for leaves."""
    graph._require(asset_id)
    return sum(v for (a, _), v in matrix.values.items() if a == asset_id)


def aggregate_table(graph: CreationalGraph, matrix: DependencyValueMatrix) -> dict[str, int]:
    """Aggregate value for every asset, keyed by id."""
    totals = {a.id: 0 for a in graph.assets}
    for (ancestor, _), value in matrix.values.items():
        if ancestor in totals:
            totals[ancestor] += value
    return totals


def significance_ranking(
    graph: CreationalGraph, matrix: DependencyValueMatrix
) -> list[tuple[str, int]]:
    """Assets ordered by aggregate value, highest first.

    Ties break on asset id (ascending) so the ordering is deterministic
    across runs and platforms.
    """
    totals = aggregate_table(graph, matrix)
    return sorted(totals.items(), key=lambda item: (-item[1], item[0]))


@dataclass(frozen=True)
class CeasefirePolicy:
    """Per-asset No-Attack durations, in whole seconds.

    ``durations`` is the explicit table.  When ``interpolate`` is on,
    assets missing from the table get a duration interpolated linearly
    between the two nearest keyed aggregate totals (clamped above the
    largest keyed total, anchored at (total 0, 0 s) below the smallest)
    so an unkeyed asset can never outrank a keyed one.
    """

    durations: Mapping[str, int] = field(default_factory=dict)
    interpolate: bool = True


def ceasefire_duration(
    policy: CeasefirePolicy,
    graph: CreationalGraph,
    matrix: DependencyValueMatrix,
    asset_id: str,
) -> int:
    """Effective No-Attack seconds for destroying the asset."""
    graph._require(asset_id)
    if asset_id in policy.durations:
        return max(0, policy.durations[asset_id])
    if not policy.interpolate:
        return 0
    totals = aggregate_table(graph, matrix)
    return _interpolated(policy, totals, totals[asset_id])


def _interpolated(policy: CeasefirePolicy, totals: Mapping[str, int], total: int) -> int:
    # Knots: (aggregate total -> duration) from every keyed asset that
    # exists in the table, plus the implicit zero anchor.  For totals
    # shared by several keyed assets, the longest duration wins (a
    # monotone policy has no such conflict anyway).
    knots: dict[int, int] = {0: 0}
    for asset_id, seconds in policy.durations.items():
        if asset_id in totals:
            t = totals[asset_id]
            knots[t] = max(knots.get(t, 0), max(0, seconds))
    points = sorted(knots.items())
    if total <= points[0][0]:
        return points[0][1]
    for (t0, d0), (t1, d1) in zip(points, points[1:]):
        if total <= t1:
            # Integer linear interpolation; floor keeps the result
            # monotone in `total` for non-decreasing segments.
            return d0 + (d1 - d0) * (total - t0) // (t1 - t0)
    return points[-1][1]


def effective_durations(
    policy: CeasefirePolicy, graph: CreationalGraph, matrix: DependencyValueMatrix
) -> dict[str, int]:
    """Resolved duration for every asset (explicit or interpolated)."""
    return {
        a.id: ceasefire_duration(policy, graph, matrix, a.id) for a in graph.assets
    }


def validate_policy(
    policy: CeasefirePolicy, graph: CreationalGraph, matrix: DependencyValueMatrix
) -> ValidationReport:
    """Check the policy against the aggregate table.

    Errors: durations keyed to unknown assets; negative durations; any
    asset pair where the higher-aggregate asset has the strictly
    shorter effective duration; zero-aggregate assets with a nonzero
    duration; and, with interpolation disabled, any positive-aggregate
    asset the table fails to cover.
    """
    report = ValidationReport()
    for asset_id, seconds in policy.durations.items():
        if asset_id not in graph:
            report.error("unknown-asset", f"cease-fire entry references unknown asset {asset_id!r}")
        if seconds < 0:
            report.error("bad-duration", f"cease-fire for {asset_id!r} is {seconds}s; must be >= 0")
    if not report.ok:
        return report

    totals = aggregate_table(graph, matrix)
    effective = effective_durations(policy, graph, matrix)

    if not policy.interpolate:
        for asset_id, total in totals.items():
            if total > 0 and asset_id not in policy.durations:
                report.error(
                    "missing-duration",
                    f"asset {asset_id!r} has aggregate value {total} but no cease-fire entry",
                )

    for asset_id, total in totals.items():
        if total == 0 and effective[asset_id] != 0:
            report.error(
                "nonzero-at-zero",
                f"asset {asset_id!r} has aggregate value 0 but cease-fire {effective[asset_id]}s",
            )

    ordered = sorted(totals.items(), key=lambda item: (-item[1], item[0]))
    for i, (a, total_a) in enumerate(ordered):
        for b, total_b in ordered[i + 1:]:
            if total_a > total_b and effective[a] < effective[b]:
                report.error(
                    "monotonicity",
                    f"{a!r} (aggregate {total_a}) has shorter cease-fire "
                    f"{effective[a]}s than {b!r} (aggregate {total_b}, {effective[b]}s)",
                )
    return report
