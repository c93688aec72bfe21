"""Versioned JSON envelopes for profiles, measures, geometry and campaign results."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

from . import __version__
from .bipartition import ConcurrenceProfile
from .errors import MalformedInput, SchemaMismatch
from .geometry import QuadrilateralGeometry, TriangleSides
from .measures import GmeReport, SeparabilityClass
from .verify import CampaignResult

SCHEMA_VERSION = "1.0"
KINDS = ("profile", "gme", "geometry", "campaign", "fill")


@dataclass(frozen=True)
class FillReport:
    """Three-qubit result: concurrence fill plus the cut profile."""

    fill: float
    profile: ConcurrenceProfile
    separability: SeparabilityClass

    def to_json(self) -> dict:
        return {"fill": self.fill, "profile": self.profile.as_dict(), "class": self.separability.to_json()}

    @classmethod
    def from_json(cls, d: dict) -> "FillReport":
        return cls(d["fill"], ConcurrenceProfile.from_dict(3, d["profile"]), SeparabilityClass.from_json(d["class"]))


def _profile_to_json(p: ConcurrenceProfile) -> dict:
    return {"n_qubits": p.n, "cuts": p.as_dict()}


def _profile_from_json(d: dict) -> ConcurrenceProfile:
    return ConcurrenceProfile.from_dict(d["n_qubits"], d["cuts"])


def _geometry_to_json(quads: list[QuadrilateralGeometry]) -> list[dict]:
    out = []
    for q in quads:
        rec = q.to_json()
        rec["triangles"] = [
            {"labels": list(t.labels), "sides": list(t.as_tuple())} for t in (q.triangle_1, q.triangle_2)
        ]
        out.append(rec)
    return out


def _geometry_from_json(items: list[dict]) -> list[QuadrilateralGeometry]:
    quads = []
    for d in items:
        t1, t2 = (TriangleSides(*t["sides"], labels=tuple(t["labels"])) for t in d["triangles"])
        quads.append(
            QuadrilateralGeometry(
                diagonal_cut=d["diagonal"],
                sides=dict(d["sides"]),
                diagonal=d["diagonal_len"],
                triangle_1=t1,
                triangle_2=t2,
                area_1=d["areas"][0],
                area_2=d["areas"][1],
                vertices=tuple(tuple(v) for v in d["vertices"]),
                use_squared=d["mode"] == "squared",
            )
        )
    return quads


_ENCODE = {
    "profile": _profile_to_json,
    "gme": lambda r: r.to_json(),
    "geometry": _geometry_to_json,
    "campaign": lambda r: r.to_json(),
    "fill": lambda r: r.to_json(),
}
_DECODE = {
    "profile": _profile_from_json,
    "gme": GmeReport.from_json,
    "geometry": _geometry_from_json,
    "campaign": CampaignResult.from_json,
    "fill": FillReport.from_json,
}


@dataclass(frozen=True)
class ReportEnvelope:
    kind: str
    payload: Any
    inputs_echo: Any = None
    schema_version: str = SCHEMA_VERSION
    tool_version: str = __version__

    def to_json(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "tool_version": self.tool_version,
            "kind": self.kind,
            "inputs_echo": self.inputs_echo,
            "payload": _ENCODE[self.kind](self.payload),
        }

    def __eq__(self, other) -> bool:
        if not isinstance(other, ReportEnvelope):
            return NotImplemented
        return self.to_json() == other.to_json()


def dumps(obj: Any) -> str:
    """Canonical JSON text: sorted keys, shortest round-trip floats, no NaN."""
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False)


def serialize(envelope: ReportEnvelope) -> bytes:
    if envelope.kind not in KINDS:
        raise MalformedInput(f"unknown payload kind {envelope.kind!r}")
    return (dumps(envelope.to_json()) + "\n").encode("utf-8")


def deserialize(data: bytes | str) -> ReportEnvelope:
    try:
        doc = json.loads(data)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise MalformedInput(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise MalformedInput("report must be a JSON object")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaMismatch(f"unsupported schema_version {version!r}; expected {SCHEMA_VERSION}")
    kind = doc.get("kind")
    if kind not in _DECODE:
        raise MalformedInput(f"unknown payload kind {kind!r}")
    try:
        payload = _DECODE[kind](doc["payload"])
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise MalformedInput(f"malformed {kind} payload: {exc}") from exc
    return ReportEnvelope(
        kind=kind,
        payload=payload,
        inputs_echo=doc.get("inputs_echo"),
        schema_version=version,
        tool_version=doc.get("tool_version", ""),
    )
