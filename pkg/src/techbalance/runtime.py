"""Parallel per-player graph instances and the cease-fire mechanism.

Every player in a match holds their own instance (holdings, resources)
of one shared creational graph.  The balancing mechanism bridges those
instances: when an attacker destroys a protected player's asset, the
attacker is placed under a No-Attack window whose length is the
destroyed asset's cease-fire duration.  Windows restrict attacks only;
building and income continue normally for everyone.

State is mutated exclusively through time-ordered event application
(:meth:`MatchState.apply_destruction`, :meth:`MatchState.apply_creation`),
which makes match logs replayable: the same event sequence applied to a
fresh state always lands on the same final state.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import (
    InsufficientResourcesError,
    InvalidEventError,
    PrerequisiteError,
    UnknownPlayerError,
)
from .graph import CreationalGraph, missing_prerequisites
from .metrics import CeasefirePolicy, DependencyValueMatrix, effective_durations


class Controller(enum.Enum):
    HUMAN_PROXY = "human_proxy"
    AI = "ai"


@dataclass(frozen=True)
class Player:
    id: str
    controller: Controller = Controller.AI


@dataclass
class PlayerInstance:
    """One player's side of the parallel graphs."""

    player: Player
    holdings: dict[str, int] = field(default_factory=dict)
    resources: int = 0

    def total_assets(self) -> int:
        return sum(self.holdings.values())


@dataclass(frozen=True)
class DestructionEvent:
    """``attacker`` destroyed ``count`` instances of the victim's asset."""

    time: int
    victim: str
    attacker: str
    asset: str
    count: int = 1


@dataclass(frozen=True)
class CeasefireWindow:
    restricted_player: str
    end_time: int


@dataclass(frozen=True)
class BalancingConfig:
    """When and for whom destructions trigger No-Attack windows.

    Destroying an asset belonging to a player in ``protected_players``
    freezes the attacker; destructions of anyone else's assets never
    do.  The shipped convention protects the human side only.
    """

    policy: CeasefirePolicy
    protected_players: frozenset[str] = frozenset()
    enabled: bool = True


def merge_window(existing_end: int, now: int, duration: int) -> int:
    """New window end after a fresh imposition: windows never shorten.

    Overlapping cease-fires merge by max-end rather than summing, so a
    player cannot farm unbounded immunity out of cheap sacrifices.
    """
    if duration < 0:
        raise ValueError(f"duration must be >= 0, got {duration}")
    return max(existing_end, now + duration)


# Event log record types (the wire format's `type` field).
INCOME = "income"
BUILD = "build"
ATTACK = "attack"
ATTACK_BLOCKED = "attack_blocked"
DESTRUCTION = "destruction"
CEASEFIRE_IMPOSED = "ceasefire_imposed"
MATCH_END = "match_end"


@dataclass
class Event:
    """One structured log record.

    Serializes to ``{tick, type, player, asset, count, detail}``; the
    unused fields of a given type are null.
    """

    tick: int
    type: str
    player: str | None = None
    asset: str | None = None
    count: int | None = None
    detail: dict | None = None

    def to_dict(self) -> dict:
        return {
            "tick": self.tick,
            "type": self.type,
            "player": self.player,
            "asset": self.asset,
            "count": self.count,
            "detail": self.detail,
        }

    @classmethod
    def from_dict(cls, record: Mapping) -> "Event":
        return cls(
            tick=record["tick"],
            type=record["type"],
            player=record.get("player"),
            asset=record.get("asset"),
            count=record.get("count"),
            detail=record.get("detail"),
        )


class MatchState:
    """Mutable state of one running match.

    Owned by a single driver (the simulator or a test); all mutation
    goes through the apply_* methods, which append to the event log.
    Independent matches never share state and may run concurrently.
    """

    def __init__(
        self,
        graph: CreationalGraph,
        matrix: DependencyValueMatrix,
        players: Iterable[PlayerInstance],
        balancing: BalancingConfig,
        time: int = 0,
    ):
        self.graph = graph
        self.balancing = balancing
        self.players: dict[str, PlayerInstance] = {}
        for instance in players:
            if instance.player.id in self.players:
                raise ValueError(f"duplicate player id {instance.player.id!r}")
            self.players[instance.player.id] = instance
        unknown = [p for p in balancing.protected_players if p not in self.players]
        if unknown:
            raise UnknownPlayerError(sorted(unknown)[0])
        # Resolve policy durations once; windows only need a lookup.
        self.durations = effective_durations(balancing.policy, graph, matrix)
        self.windows: dict[str, int] = {}
        self.events: list[Event] = []
        self.time = time

    # -- queries -----------------------------------------------------------

    def player(self, player_id: str) -> PlayerInstance:
        try:
            return self.players[player_id]
        except KeyError:
            raise UnknownPlayerError(player_id) from None

    def is_attack_allowed(self, attacker: str, time: int) -> bool:
        """False iff the attacker sits inside a No-Attack window.

        Windows are half-open [imposed_at, end): the end tick itself is
        attackable again.  Building is never restricted.
        """
        self.player(attacker)
        return time >= self.windows.get(attacker, 0)

    def active_window(self, player_id: str) -> CeasefireWindow | None:
        end = self.windows.get(player_id, 0)
        if end > self.time:
            return CeasefireWindow(player_id, end)
        return None

    def snapshot(self) -> dict:
        """Comparable view of the replay-relevant state."""
        return {
            "time": self.time,
            "windows": dict(self.windows),
            "players": {
                pid: {"holdings": dict(p.holdings), "resources": p.resources}
                for pid, p in sorted(self.players.items())
            },
        }

    # -- event application -------------------------------------------------

    def record(self, event: Event) -> None:
        self.events.append(event)

    def apply_destruction(self, event: DestructionEvent) -> CeasefireWindow | None:
        """Apply one destruction; returns the imposed window, if any.

        Rejects (leaving state untouched) events that name unknown
        players or assets, self-attacks, stale times, or counts above
        the victim's live holdings.  Destroying a prerequisite never
        cascades: already-built dependents survive, only new creations
        are blocked.
        """
        victim = self.player(event.victim)
        attacker = self.player(event.attacker)
        self.graph._require(event.asset)
        if event.victim == event.attacker:
            raise InvalidEventError(f"player {event.victim!r} cannot destroy its own assets")
        if event.time < self.time:
            raise InvalidEventError(
                f"event time {event.time} is before current time {self.time}"
            )
        if event.count < 1:
            raise InvalidEventError(f"destruction count must be >= 1, got {event.count}")
        held = victim.holdings.get(event.asset, 0)
        if event.count > held:
            raise InvalidEventError(
                f"{event.victim!r} holds {held} of {event.asset!r}, cannot destroy {event.count}"
            )

        victim.holdings[event.asset] = held - event.count
        if victim.holdings[event.asset] == 0:
            del victim.holdings[event.asset]
        self.time = event.time
        self.record(
            Event(
                tick=event.time,
                type=DESTRUCTION,
                player=event.victim,
                asset=event.asset,
                count=event.count,
                detail={"by": event.attacker},
            )
        )

        if not self.balancing.enabled:
            return None
        if event.victim not in self.balancing.protected_players:
            return None
        duration = self.durations.get(event.asset, 0)
        if duration <= 0:
            return None
        # One window per event regardless of count; max-merge would
        # collapse repeated impositions to the same end anyway.
        end = merge_window(self.windows.get(attacker.player.id, 0), event.time, duration)
        self.windows[attacker.player.id] = end
        self.record(
            Event(
                tick=event.time,
                type=CEASEFIRE_IMPOSED,
                player=event.attacker,
                asset=event.asset,
                detail={"until": end, "seconds": duration},
            )
        )
        return CeasefireWindow(attacker.player.id, end)

    def apply_creation(self, player_id: str, asset_id: str, time: int, cost: int = 0) -> None:
        """Create one instance of the asset for the player.

        Allowed during the player's own cease-fire window; only attacks
        are restricted.  Rejects when prerequisites or resources fall
        short, leaving state unchanged.
        """
        instance = self.player(player_id)
        self.graph._require(asset_id)
        missing = missing_prerequisites(self.graph, asset_id, instance.holdings)
        if missing:
            raise PrerequisiteError(asset_id, missing)
        if instance.resources < cost:
            raise InsufficientResourcesError(asset_id, cost, instance.resources)
        instance.resources -= cost
        instance.holdings[asset_id] = instance.holdings.get(asset_id, 0) + 1
        self.time = max(self.time, time)
        self.record(
            Event(
                tick=time,
                type=BUILD,
                player=player_id,
                asset=asset_id,
                count=1,
                detail={"cost": cost},
            )
        )
