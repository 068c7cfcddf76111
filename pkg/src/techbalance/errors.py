"""Exception types shared across the package."""
from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .validation import Issue


class UnknownAssetError(ValueError):
    """An operation referenced an asset id the graph does not contain."""

    def __init__(self, asset_id: str):
        super().__init__(f"unknown asset id: {asset_id!r}")
        self.asset_id = asset_id


class UnknownPlayerError(ValueError):
    """An operation referenced a player id the match does not contain."""

    def __init__(self, player_id: str):
        super().__init__(f"unknown player id: {player_id!r}")
        self.player_id = player_id


class PrerequisiteError(ValueError):
    """A creation was attempted with unmet prerequisites.

    ``missing`` lists (prerequisite id, required count, held count) for
    every unsatisfied incoming edge of the requested asset.
    """

    def __init__(self, asset_id: str, missing: list[tuple[str, int, int]]):
        detail = ", ".join(f"{p} (need {need}, have {have})" for p, need, have in missing)
        super().__init__(f"cannot create {asset_id!r}: missing {detail}")
        self.asset_id = asset_id
        self.missing = missing


class InsufficientResourcesError(ValueError):
    def __init__(self, asset_id: str, cost: int, available: int):
        super().__init__(
            f"cannot create {asset_id!r}: costs {cost}, have {available}"
        )
        self.asset_id = asset_id
        self.cost = cost
        self.available = available


class InvalidEventError(ValueError):
    """A destruction event failed validation; state was left unchanged."""


class InvalidConfigError(ValueError):
    """A match or experiment configuration is unusable."""


class ScenarioError(ValueError):
    """A scenario document failed to parse or validate.

    Carries the full list of :class:`~techbalance.validation.Issue`
    findings so callers can report every problem, not just the first.
    """

    def __init__(self, issues: list["Issue"]):
        super().__init__(
            "invalid scenario: " + "; ".join(i.render() for i in issues[:5])
            + ("" if len(issues) <= 5 else f" (+{len(issues) - 5} more)")
        )
        self.issues = issues
