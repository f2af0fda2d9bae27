"""Short-term session buffer and the append-only long-term interaction log.

The log is line-delimited JSON with a schema header line, so a crashed
writer can at worst leave one partial trailing line, which replay detects
and skips.
"""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from afeng.affect import (
    AppraisalResult,
    BehaviorSet,
    EmotionDistribution,
    Valence,
)
from afeng.errors import DuplicateId, IoFailure
from afeng.labels import EmotionLabel

logger = logging.getLogger(__name__)

LOG_HEADER = "#afeng-log v1"
DEFAULT_CAPACITY = 10


@dataclass(frozen=True)
class InteractionRecord:
    id: int
    timestamp: str
    text: str
    distribution: EmotionDistribution
    appraisal: AppraisalResult
    behaviors: BehaviorSet
    bml_id: str


def record_to_json(rec: InteractionRecord) -> str:
    payload = {
        "id": rec.id,
        "timestamp": rec.timestamp,
        "text": rec.text,
        "distribution": [float(p) for p in rec.distribution.probs],
        "dominant": rec.appraisal.dominant.canonical_name,
        "intensity": rec.appraisal.intensity,
        "valence": rec.appraisal.valence.value,
        "agent_emotion": rec.appraisal.agent_emotion,
        "event_goal": rec.appraisal.event_goal,
        "behaviors": {
            "goal": rec.behaviors.goal_behavior,
            "self": rec.behaviors.self_behavior,
            "other": rec.behaviors.other_behavior,
        },
        "bml_id": rec.bml_id,
    }
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def record_from_json(line: str) -> InteractionRecord:
    data = json.loads(line)
    return InteractionRecord(
        id=int(data["id"]),
        timestamp=data["timestamp"],
        text=data["text"],
        distribution=EmotionDistribution(probs=np.array(data["distribution"])),
        appraisal=AppraisalResult(
            dominant=EmotionLabel.from_name(data["dominant"]),
            intensity=float(data["intensity"]),
            valence=Valence(data["valence"]),
            agent_emotion=data["agent_emotion"],
            event_goal=data["event_goal"],
        ),
        behaviors=BehaviorSet(
            goal_behavior=data["behaviors"]["goal"],
            self_behavior=data["behaviors"]["self"],
            other_behavior=data["behaviors"]["other"],
        ),
        bml_id=data["bml_id"],
    )


@dataclass
class SessionBuffer:
    capacity: int = DEFAULT_CAPACITY
    records: list = field(default_factory=list)

    def __post_init__(self):
        if self.capacity < 1:
            raise ValueError("capacity must be positive")

    def add(self, rec: InteractionRecord) -> None:
        if self.records and rec.id <= self.records[0].id:
            raise DuplicateId(rec.id, self.records[0].id)
        self.records.insert(0, rec)
        del self.records[self.capacity:]

    def recent(self, n: int) -> list:
        if n < 0:
            raise ValueError("n must be non-negative")
        return self.records[:n]

    def __len__(self) -> int:
        return len(self.records)


class LongTermStore:
    """Append-only record log plus the model checkpoint directory."""

    def __init__(self, log_path, checkpoint_dir=None):
        self.log_path = os.fspath(log_path)
        self.checkpoint_dir = os.fspath(checkpoint_dir) if checkpoint_dir else None
        self.last_id = 0
        self._replayed: list = []
        self._replay()

    def _replay(self) -> None:
        self._replayed = []
        self.last_id = 0
        if not os.path.exists(self.log_path):
            return
        try:
            with open(self.log_path, "r", encoding="utf-8") as fh:
                raw = fh.read()
        except OSError as exc:
            raise IoFailure(f"cannot read log {self.log_path}: {exc}") from exc
        if raw == "":
            return
        complete = raw.endswith("\n")
        lines = raw.split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        if not lines or lines[0] != LOG_HEADER:
            raise IoFailure(
                f"log {self.log_path} missing header line {LOG_HEADER!r}"
            )
        body = lines[1:]
        for pos, line in enumerate(body):
            last = pos == len(body) - 1
            try:
                rec = record_from_json(line)
            except (ValueError, KeyError, TypeError) as exc:
                if last and not complete:
                    logger.warning(
                        "ignoring partial trailing line in %s", self.log_path
                    )
                    return
                raise IoFailure(
                    f"log {self.log_path} line {pos + 2} is corrupt: {exc}"
                ) from exc
            if rec.id <= self.last_id:
                raise IoFailure(
                    f"log {self.log_path} line {pos + 2}: id {rec.id} not increasing"
                )
            self._replayed.append(rec)
            self.last_id = rec.id

    def replay(self) -> list:
        """All complete records in id order."""
        return list(self._replayed)

    def append(self, rec: InteractionRecord) -> None:
        if rec.id <= self.last_id:
            raise DuplicateId(rec.id, self.last_id)
        line = record_to_json(rec) + "\n"
        try:
            fresh = not os.path.exists(self.log_path) or (
                os.path.getsize(self.log_path) == 0
            )
            with open(self.log_path, "a", encoding="utf-8") as fh:
                if fresh:
                    fh.write(LOG_HEADER + "\n")
                fh.write(line)
                fh.flush()
        except OSError as exc:
            raise IoFailure(f"cannot append to {self.log_path}: {exc}") from exc
        self.last_id = rec.id
        self._replayed.append(rec)

    def next_id(self) -> int:
        return self.last_id + 1

    def load_buffer(self, capacity: int = DEFAULT_CAPACITY) -> SessionBuffer:
        buffer = SessionBuffer(capacity=capacity)
        for rec in self._replayed[-capacity:]:
            buffer.add(rec)
        return buffer


def record(
    store: Optional[LongTermStore], buffer: SessionBuffer, rec: InteractionRecord
) -> SessionBuffer:
    """Persist then remember: log append happens before buffer insertion."""
    if store is not None:
        store.append(rec)
    buffer.add(rec)
    return buffer
