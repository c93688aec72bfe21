"""Genuine multipartite entanglement measures built on concurrence triangles.

For four qubits, ``F`` is the geometric mean of the six triangle areas
(each scaled by 4/sqrt(3)) whose sides are squared concurrences; ``F1``
does the same with plain concurrences.  The scale makes an equilateral
unit triangle count as 1, so both measures equal 1 on GHZ4.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .bipartition import (
    ZERO_THRESHOLD,
    ConcurrenceProfile,
    CutKind,
    enumerate_bipartitions,
    profile,
    profile_batch,
)
from .errors import UnsupportedSize
from .geometry import (
    DIAGONAL_LABELS,
    DIAGONALS,
    TriangleSides,
    heron_area_batch,
    profile_row,
    snap_zeros,
    triangle_sides_batch,
)
from .state import StateVector

NORMALIZATION = 4.0 / math.sqrt(3.0)
_LOG_FLOOR = 1e-300


def geometric_mean_scaled(areas: np.ndarray) -> np.ndarray:
    """``(prod_i NORMALIZATION * A_i) ** (1/k)`` over the last axis, computed in log space."""
    areas = np.asarray(areas, dtype=float)
    scaled = NORMALIZATION * areas
    zero = np.any(areas <= _LOG_FLOOR, axis=-1)
    with np.errstate(divide="ignore"):
        logs = np.log(np.where(areas > _LOG_FLOOR, scaled, 1.0))
    return np.where(zero, 0.0, np.exp(logs.mean(axis=-1)))


def _require4(n: int) -> None:
    if n != 4:
        raise UnsupportedSize(f"F and F1 are defined for four-qubit states, got {n} qubits")


def triangle_areas_batch(c2: np.ndarray, zero_threshold: float = ZERO_THRESHOLD):
    """Areas ``(N, 6)`` in squared and in plain-concurrence mode from ``(N, 7)`` rows."""
    c2 = snap_zeros(c2, zero_threshold)
    sq = heron_area_batch(triangle_sides_batch(c2)).reshape(c2.shape[:-1] + (6,))
    cc = heron_area_batch(triangle_sides_batch(np.sqrt(c2))).reshape(c2.shape[:-1] + (6,))
    return sq, cc


def gme_from_c2(c2: np.ndarray, zero_threshold: float = ZERO_THRESHOLD) -> tuple[np.ndarray, np.ndarray]:
    sq, cc = triangle_areas_batch(c2, zero_threshold)
    return geometric_mean_scaled(sq), geometric_mean_scaled(cc)


def gme_batch(psi: np.ndarray, zero_threshold: float = ZERO_THRESHOLD) -> tuple[np.ndarray, np.ndarray]:
    """``(F, F1)`` for a batch of four-qubit amplitude rows."""
    return gme_from_c2(profile_batch(psi, 4), zero_threshold)


def gme_f(state: StateVector) -> float:
    _require4(state.n_qubits)
    return float(gme_batch(state.amplitudes[None])[0][0])


def gme_f1(state: StateVector) -> float:
    _require4(state.n_qubits)
    return float(gme_batch(state.amplitudes[None])[1][0])


def six_triangles(prof: ConcurrenceProfile, use_squared: bool = True) -> list[TriangleSides]:
    """Triangles in order (AB|CD, AC|BD, AD|BC) x (first pair, second pair)."""
    _require4(prof.n)
    sides = triangle_sides_batch(profile_row(prof, use_squared))
    names = [c.label for c in enumerate_bipartitions(4)]
    out = []
    for k, (d, pair1, pair2) in enumerate(DIAGONALS):
        for h, (i, j) in enumerate((pair1, pair2)):
            out.append(TriangleSides(*map(float, sides[k, h]), labels=(names[i], names[j], names[d])))
    return out


def concurrence_fill_batch(c2: np.ndarray, zero_threshold: float = ZERO_THRESHOLD) -> np.ndarray:
    """Scaled area of the triangle with the three one-to-two squared concurrences as sides."""
    return NORMALIZATION * heron_area_batch(snap_zeros(c2, zero_threshold))


def concurrence_fill_3q(state: StateVector) -> float:
    if state.n_qubits != 3:
        raise UnsupportedSize(f"concurrence fill needs 3 qubits, got {state.n_qubits}")
    return float(concurrence_fill_batch(profile_batch(state.amplitudes[None], 3))[0])


class SeparabilityKind(enum.Enum):
    GENUINELY_ENTANGLED = "GenuinelyEntangled"
    ONE_TO_THREE = "OneToThreeSeparable"
    TWO_TO_TWO = "TwoToTwoSeparable"
    FULLY_PRODUCT = "FullyProduct"


@dataclass(frozen=True)
class SeparabilityClass:
    kind: SeparabilityKind
    cuts: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {"kind": self.kind.value, "cuts": list(self.cuts)}

    @classmethod
    def from_json(cls, data: dict) -> "SeparabilityClass":
        return cls(SeparabilityKind(data["kind"]), tuple(data["cuts"]))


def classify_separability(prof: ConcurrenceProfile, zero_threshold: float = ZERO_THRESHOLD) -> SeparabilityClass:
    """List every cut whose concurrence falls below ``zero_threshold``."""
    separable = [c for c in prof.cuts() if prof.entries[c].c < zero_threshold]
    if not separable:
        return SeparabilityClass(SeparabilityKind.GENUINELY_ENTANGLED)
    labels = tuple(c.label for c in separable)
    ones = [c for c in separable if c.kind is CutKind.ONE_TO_REST]
    if len(ones) == prof.n:
        return SeparabilityClass(SeparabilityKind.FULLY_PRODUCT, labels)
    if ones:
        return SeparabilityClass(SeparabilityKind.ONE_TO_THREE, labels)
    return SeparabilityClass(SeparabilityKind.TWO_TO_TWO, labels)


@dataclass(frozen=True)
class TriangleRecord:
    diagonal: str
    half: int
    labels: tuple[str, str, str]
    sides_squared: tuple[float, float, float]
    sides_concurrence: tuple[float, float, float]
    area_sq_mode: float
    area_c_mode: float

    def to_json(self) -> dict:
        return {
            "diagonal": self.diagonal,
            "half": self.half,
            "labels": list(self.labels),
            "sides": {"squared": list(self.sides_squared), "concurrence": list(self.sides_concurrence)},
            "area_sq_mode": self.area_sq_mode,
            "area_c_mode": self.area_c_mode,
        }

    @classmethod
    def from_json(cls, d: dict) -> "TriangleRecord":
        return cls(
            d["diagonal"],
            d["half"],
            tuple(d["labels"]),
            tuple(d["sides"]["squared"]),
            tuple(d["sides"]["concurrence"]),
            d["area_sq_mode"],
            d["area_c_mode"],
        )


@dataclass(frozen=True)
class GmeReport:
    f: float
    f1: float
    triangles: tuple[TriangleRecord, ...]
    separability: SeparabilityClass
    profile: ConcurrenceProfile
    normalization: float = NORMALIZATION

    @property
    def degenerate(self) -> list[dict]:
        return [
            {"squared": t.area_sq_mode == 0.0, "concurrence": t.area_c_mode == 0.0}
            for t in self.triangles
        ]

    def recompute(self) -> tuple[float, float]:
        sq = np.array([t.area_sq_mode for t in self.triangles])
        cc = np.array([t.area_c_mode for t in self.triangles])
        return float(geometric_mean_scaled(sq)), float(geometric_mean_scaled(cc))

    def to_json(self) -> dict:
        return {
            "f": self.f,
            "f1": self.f1,
            "normalization": self.normalization,
            "class": self.separability.to_json(),
            "profile": self.profile.as_dict(),
            "triangles": [t.to_json() for t in self.triangles],
            "degenerate": self.degenerate,
        }

    @classmethod
    def from_json(cls, d: dict) -> "GmeReport":
        return cls(
            f=d["f"],
            f1=d["f1"],
            triangles=tuple(TriangleRecord.from_json(t) for t in d["triangles"]),
            separability=SeparabilityClass.from_json(d["class"]),
            profile=ConcurrenceProfile.from_dict(4, d["profile"]),
            normalization=d["normalization"],
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, GmeReport):
            return NotImplemented
        return self.to_json() == other.to_json()


def gme_report(state: StateVector, zero_threshold: float = ZERO_THRESHOLD) -> GmeReport:
    _require4(state.n_qubits)
    prof = profile(state)
    c2 = profile_row(prof, True)[None]
    sq, cc = triangle_areas_batch(c2, zero_threshold)
    f, f1 = geometric_mean_scaled(sq)[0], geometric_mean_scaled(cc)[0]
    snapped = snap_zeros(c2, zero_threshold)
    sides_sq = triangle_sides_batch(snapped)[0]
    sides_c = triangle_sides_batch(np.sqrt(snapped))[0]
    names = [c.label for c in enumerate_bipartitions(4)]
    records = []
    for k, (d, pair1, pair2) in enumerate(DIAGONALS):
        for h, (i, j) in enumerate((pair1, pair2)):
            records.append(
                TriangleRecord(
                    diagonal=DIAGONAL_LABELS[k],
                    half=h,
                    labels=(names[i], names[j], names[d]),
                    sides_squared=tuple(map(float, sides_sq[k, h])),
                    sides_concurrence=tuple(map(float, sides_c[k, h])),
                    area_sq_mode=float(sq[0, 2 * k + h]),
                    area_c_mode=float(cc[0, 2 * k + h]),
                )
            )
    return GmeReport(
        f=float(f),
        f1=float(f1),
        triangles=tuple(records),
        separability=classify_separability(prof, zero_threshold),
        profile=prof,
    )
