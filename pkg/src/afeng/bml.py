"""Behavior Markup Language documents: compose, canonical XML, validation.

A document carries one facial-expression directive for the dominant
emotion and exactly two gesture directives (one aimed at the agent
itself, one at the other party). Serialization is canonical so equal
documents always produce identical bytes.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from typing import Optional

from afeng.affect import AppraisalResult, BehaviorSet, affect_table
from afeng.labels import EMOTION_NAMES

FACE_TIMING = (0.0, 2.0)
SELF_TIMING = (0.0, 2.5)
OTHER_TIMING = (0.5, 2.5)

FACE_LEXEMES = tuple(name.upper() for name in EMOTION_NAMES)


def behavior_lexeme(behavior: str) -> str:
    """Gesture lexeme: first label of a compound, uppercased, underscored."""
    first = behavior.split(",")[0].strip()
    return first.upper().replace(" ", "_")


def _gesture_lexicon() -> tuple:
    names = []
    for row in affect_table():
        names.append(behavior_lexeme(row.self_behavior))
        names.append(behavior_lexeme(row.other_behavior))
    return tuple(names)


GESTURE_LEXEMES = _gesture_lexicon()


@dataclass(frozen=True)
class FaceDirective:
    id: str
    lexeme: str
    amount: float
    start: float = FACE_TIMING[0]
    end: float = FACE_TIMING[1]

    def __post_init__(self):
        if not 0.0 < self.amount <= 1.0:
            raise ValueError(f"amount {self.amount} outside (0, 1]")
        if not 0.0 <= self.start < self.end:
            raise ValueError(f"bad timing [{self.start}, {self.end}]")
        if self.lexeme not in FACE_LEXEMES:
            raise ValueError(f"unknown face lexeme {self.lexeme!r}")


@dataclass(frozen=True)
class GestureDirective:
    id: str
    lexeme: str
    mode: str
    description: str
    start: float
    end: float

    def __post_init__(self):
        if self.mode not in ("SELF", "OTHER"):
            raise ValueError(f"mode must be SELF or OTHER, not {self.mode!r}")
        if self.lexeme not in GESTURE_LEXEMES:
            raise ValueError(f"unknown gesture lexeme {self.lexeme!r}")
        if not 0.0 <= self.start < self.end:
            raise ValueError(f"bad timing [{self.start}, {self.end}]")


@dataclass(frozen=True)
class BmlDocument:
    id: str
    face: FaceDirective
    gestures: tuple
    character: str = "agent"

    def __post_init__(self):
        gestures = tuple(
            sorted(self.gestures, key=lambda g: 0 if g.mode == "SELF" else 1)
        )
        object.__setattr__(self, "gestures", gestures)
        modes = [g.mode for g in gestures]
        if modes != ["SELF", "OTHER"]:
            raise ValueError("document needs exactly one SELF and one OTHER gesture")
        ids = [self.id, self.face.id] + [g.id for g in gestures]
        if len(set(ids)) != len(ids):
            raise ValueError("ids must be unique within the document")


def compose(
    appraisal: AppraisalResult,
    behaviors: BehaviorSet,
    doc_id: str = "bml-1",
    character: str = "agent",
) -> BmlDocument:
    face = FaceDirective(
        id="f1",
        lexeme=appraisal.dominant.canonical_name.upper(),
        amount=appraisal.intensity,
        start=FACE_TIMING[0],
        end=FACE_TIMING[1],
    )
    self_gesture = GestureDirective(
        id="g1",
        lexeme=behavior_lexeme(behaviors.self_behavior),
        mode="SELF",
        description=behaviors.self_behavior,
        start=SELF_TIMING[0],
        end=SELF_TIMING[1],
    )
    other_gesture = GestureDirective(
        id="g2",
        lexeme=behavior_lexeme(behaviors.other_behavior),
        mode="OTHER",
        description=behaviors.other_behavior,
        start=OTHER_TIMING[0],
        end=OTHER_TIMING[1],
    )
    return BmlDocument(
        id=doc_id, face=face, gestures=(self_gesture, other_gesture), character=character
    )


def _fmt(x: float) -> str:
    # repr of a float is the shortest round-trip form, always with a decimal
    return repr(float(x))


def _attr(value: str) -> str:
    return (
        value.replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
    )


def serialize(doc: BmlDocument) -> str:
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<bml id="{_attr(doc.id)}" character="{_attr(doc.character)}">',
        (
            f'  <face id="{_attr(doc.face.id)}" lexeme="{_attr(doc.face.lexeme)}"'
            f' amount="{_fmt(doc.face.amount)}" start="{_fmt(doc.face.start)}"'
            f' end="{_fmt(doc.face.end)}"/>'
        ),
    ]
    for g in doc.gestures:
        lines.append(
            f'  <gesture id="{_attr(g.id)}" lexeme="{_attr(g.lexeme)}"'
            f' mode="{g.mode}" description="{_attr(g.description)}"'
            f' start="{_fmt(g.start)}" end="{_fmt(g.end)}"/>'
        )
    lines.append("</bml>")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ValidationIssue:
    kind: str
    detail: str = ""

    def __str__(self) -> str:
        return f"{self.kind}({self.detail})" if self.detail else self.kind


@dataclass
class ValidationResult:
    document: Optional[BmlDocument]
    issues: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.issues and self.document is not None


def _float_attr(elem, name: str, issues: list, elem_id: str) -> Optional[float]:
    raw = elem.get(name)
    if raw is None:
        issues.append(ValidationIssue("Malformed", f"{elem.tag} missing {name}"))
        return None
    try:
        return float(raw)
    except ValueError:
        issues.append(
            ValidationIssue("Malformed", f"{elem.tag} {elem_id}: {name}={raw!r}")
        )
        return None


def validate(xml: str) -> ValidationResult:
    """Collect every schema and invariant violation in the given markup."""
    issues: list = []
    try:
        root = ET.fromstring(xml)
    except ET.ParseError as exc:
        return ValidationResult(None, [ValidationIssue("Malformed", str(exc))])

    if root.tag != "bml":
        return ValidationResult(
            None, [ValidationIssue("Malformed", f"root element {root.tag!r}")]
        )
    doc_id = root.get("id")
    character = root.get("character", "agent")
    if not doc_id:
        issues.append(ValidationIssue("Malformed", "bml element missing id"))

    faces = root.findall("face")
    gestures = root.findall("gesture")
    unknown = [child.tag for child in root if child.tag not in ("face", "gesture")]
    for tag in unknown:
        issues.append(ValidationIssue("Malformed", f"unexpected element {tag!r}"))
    if len(faces) != 1:
        issues.append(ValidationIssue("Malformed", f"expected 1 face, found {len(faces)}"))
    if len(gestures) != 2:
        issues.append(
            ValidationIssue("Malformed", f"expected 2 gestures, found {len(gestures)}")
        )

    face = None
    if len(faces) == 1:
        elem = faces[0]
        face_id = elem.get("id") or ""
        lexeme = elem.get("lexeme") or ""
        if not face_id:
            issues.append(ValidationIssue("Malformed", "face missing id"))
        if lexeme not in FACE_LEXEMES:
            issues.append(ValidationIssue("UnknownLexeme", lexeme))
        amount = _float_attr(elem, "amount", issues, face_id)
        start = _float_attr(elem, "start", issues, face_id)
        end = _float_attr(elem, "end", issues, face_id)
        if amount is not None and not 0.0 < amount <= 1.0:
            issues.append(ValidationIssue("BadAmount", repr(amount)))
        if start is not None and end is not None and not 0.0 <= start < end:
            issues.append(ValidationIssue("BadTiming", face_id))
        face = (face_id, lexeme, amount, start, end)

    parsed_gestures = []
    for elem in gestures:
        g_id = elem.get("id") or ""
        lexeme = elem.get("lexeme") or ""
        mode = elem.get("mode") or ""
        description = elem.get("description", "")
        if not g_id:
            issues.append(ValidationIssue("Malformed", "gesture missing id"))
        if lexeme not in GESTURE_LEXEMES:
            issues.append(ValidationIssue("UnknownLexeme", lexeme))
        if mode not in ("SELF", "OTHER"):
            issues.append(ValidationIssue("Malformed", f"gesture mode {mode!r}"))
        start = _float_attr(elem, "start", issues, g_id)
        end = _float_attr(elem, "end", issues, g_id)
        if start is not None and end is not None and not 0.0 <= start < end:
            issues.append(ValidationIssue("BadTiming", g_id))
        parsed_gestures.append((g_id, lexeme, mode, description, start, end))

    if len(parsed_gestures) == 2:
        modes = sorted(g[2] for g in parsed_gestures)
        if modes != ["OTHER", "SELF"]:
            issues.append(
                ValidationIssue("Malformed", "need exactly one SELF and one OTHER gesture")
            )
    all_ids = [doc_id] + ([face[0]] if face else []) + [g[0] for g in parsed_gestures]
    present = [i for i in all_ids if i]
    if len(set(present)) != len(present):
        issues.append(ValidationIssue("Malformed", "duplicate ids"))

    if issues:
        return ValidationResult(None, issues)
    document = BmlDocument(
        id=doc_id,
        character=character,
        face=FaceDirective(
            id=face[0], lexeme=face[1], amount=face[2], start=face[3], end=face[4]
        ),
        gestures=tuple(
            GestureDirective(
                id=g[0], lexeme=g[1], mode=g[2], description=g[3], start=g[4], end=g[5]
            )
            for g in parsed_gestures
        ),
    )
    return ValidationResult(document, [])


def parse(xml: str) -> BmlDocument:
    result = validate(xml)
    if not result.ok:
        raise ValueError("; ".join(str(issue) for issue in result.issues))
    return result.document
