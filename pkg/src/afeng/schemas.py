"""Request/response bodies for the HTTP interface."""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field


class InteractRequest(BaseModel):
    text: str


class BehaviorsModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    goal: str
    self_behavior: str = Field(alias="self")
    other: str


class InteractResponse(BaseModel):
    text: str
    distribution: dict
    dominant: str
    intensity: float
    valence: str
    agent_emotion: str
    event_goal: str
    behaviors: BehaviorsModel
    bml: str
    record_id: int
    timestamp: str


class HistoryItem(BaseModel):
    record_id: int
    timestamp: str
    text: str
    dominant: str
    intensity: float
    valence: str
    bml_id: str
    distribution: dict


class ModelInfo(BaseModel):
    checkpoint_sha256: str
    hyperparameters: dict
    emotion_order: list
    vocab_size: int
    seed: Optional[int] = None


class ErrorBody(BaseModel):
    code: str
    message: str
