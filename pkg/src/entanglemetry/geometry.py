"""Triangle and quadrilateral geometry built from a four-qubit concurrence profile.

Four-qubit squared concurrences are handled as rows of seven numbers in
enumeration order ``A|BCD, B|ACD, C|ABD, D|ABC, AB|CD, AC|BD, AD|BC``.
Each two-to-two cut is the diagonal of one quadrilateral whose sides are
the four one-to-three values; it splits the quadrilateral into a triangle
over the pair on its ``side_a`` and one over the complementary pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bipartition import (
    PARTIES,
    ZERO_THRESHOLD,
    Bipartition,
    ConcurrenceProfile,
    CutKind,
    enumerate_bipartitions,
    one_to_rest,
)
from .errors import NegativeSide, NotTwoToTwo, TriangleViolation, UnsupportedSize

# absolute slack for "inequality satisfied"
TOLERANCE = 1e-9
# a strict inequality must clear this margin
STRICT_TOL = 1e-12
# gaps within this many ulps of the longest side count as collinear
_COLLINEAR_ULPS = 4 * np.finfo(float).eps

# (diagonal index in the 7-row, first pair, second pair)
DIAGONALS = (
    (4, (0, 1), (2, 3)),
    (5, (0, 2), (1, 3)),
    (6, (0, 3), (1, 2)),
)
DIAGONAL_LABELS = ("AB|CD", "AC|BD", "AD|BC")


@dataclass(frozen=True)
class TriangleSides:
    a: float
    b: float
    c: float
    labels: tuple = ("", "", "")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.a, self.b, self.c)

    def margin(self) -> float:
        a, b, c = self.a, self.b, self.c
        return min(a + b - c, b + c - a, c + a - b)


def _stable_radicand(a: float, b: float, c: float) -> float:
    # a >= b >= c; Kahan's parenthesization
    gap = c - (a - b)
    if gap <= _COLLINEAR_ULPS * a:
        return 0.0
    rad = (a + (b + c)) * gap * (c + (a - b)) * (a + (b - c))
    return max(rad, 0.0)


def heron_area(t: TriangleSides | tuple, tolerance: float = TOLERANCE) -> float:
    """Area of a triangle from its sides, accurate for needle-thin triangles.

    Raises :class:`TriangleViolation` when the sides miss the triangle
    inequality by more than ``tolerance``; smaller misses give area 0.
    """
    sides = t.as_tuple() if isinstance(t, TriangleSides) else tuple(t)
    if any(s < 0 for s in sides):
        raise NegativeSide(f"negative side length in {sides}")
    a, b, c = sorted(sides, reverse=True)
    if c - (a - b) < -tolerance:
        raise TriangleViolation(f"sides {sides} violate the triangle inequality")
    return 0.25 * math.sqrt(_stable_radicand(a, b, c))


def heron_area_batch(sides: np.ndarray) -> np.ndarray:
    """Vectorized :func:`heron_area` over the last axis; no violation checks.

    Bit-identical to the scalar routine for valid triangles.
    """
    s = -np.sort(-np.asarray(sides, dtype=float), axis=-1)
    a, b, c = s[..., 0], s[..., 1], s[..., 2]
    gap = c - (a - b)
    rad = (a + (b + c)) * gap * (c + (a - b)) * (a + (b - c))
    rad = np.where(gap <= _COLLINEAR_ULPS * a, 0.0, np.maximum(rad, 0.0))
    return 0.25 * np.sqrt(rad)


def profile_row(profile: ConcurrenceProfile, use_squared: bool = True) -> np.ndarray:
    if profile.n != 4:
        raise UnsupportedSize(f"quadrilateral geometry needs 4 qubits, got {profile.n}")
    cuts = enumerate_bipartitions(4)
    if use_squared:
        return np.array([profile.entries[c].c2 for c in cuts])
    return np.array([profile.entries[c].c for c in cuts])


def snap_zeros(c2: np.ndarray, zero_threshold: float = ZERO_THRESHOLD) -> np.ndarray:
    """Set squared concurrences of separable cuts (``c < zero_threshold``) to exactly 0."""
    return np.where(c2 < zero_threshold**2, 0.0, c2)


def triangle_sides_batch(values: np.ndarray) -> np.ndarray:
    """Six triangles ``(..., 3, 2, 3)``: diagonal x half x (side_i, side_j, diagonal)."""
    out = np.empty(values.shape[:-1] + (3, 2, 3))
    for k, (d, (i, j), (p, q)) in enumerate(DIAGONALS):
        out[..., k, 0, 0] = values[..., i]
        out[..., k, 0, 1] = values[..., j]
        out[..., k, 0, 2] = values[..., d]
        out[..., k, 1, 0] = values[..., p]
        out[..., k, 1, 1] = values[..., q]
        out[..., k, 1, 2] = values[..., d]
    return out


def triangle_margins_batch(sides: np.ndarray) -> np.ndarray:
    """``(s_i + s_j - d, d + s_i - s_j, d + s_j - s_i)`` per triangle."""
    si, sj, d = sides[..., 0], sides[..., 1], sides[..., 2]
    return np.stack([si + sj - d, d + si - sj, d + sj - si], axis=-1)


def polygon_margins_batch(c2: np.ndarray) -> np.ndarray:
    ones = c2[..., :4]
    return ones.sum(axis=-1, keepdims=True) - 2 * ones


def _party_index(i) -> int:
    if isinstance(i, str):
        return PARTIES.index(i.upper())
    return int(i)


def _require4(profile: ConcurrenceProfile) -> None:
    if profile.n != 4:
        raise UnsupportedSize(f"this operation needs a 4-qubit profile, got {profile.n}")


def polygon_margin(profile: ConcurrenceProfile, i) -> float:
    """Sum of the other one-to-three squared concurrences minus party ``i``'s."""
    _require4(profile)
    c2 = profile.one_to_rest_c2()
    k = _party_index(i)
    return sum(v for j, v in enumerate(c2) if j != k) - c2[k]


def sum_of_three_margin(profile: ConcurrenceProfile, i) -> float:
    return abs(polygon_margin(profile, i))


def sum_of_three_applicable(profile: ConcurrenceProfile, zero_threshold: float = ZERO_THRESHOLD) -> bool:
    _require4(profile)
    return sum(math.sqrt(v) >= zero_threshold for v in profile.one_to_rest_c2()) >= 3


def _diag_index(diag: Bipartition | str) -> int:
    label = diag if isinstance(diag, str) else diag.label
    if label not in DIAGONAL_LABELS:
        if isinstance(diag, Bipartition) and diag.kind is not CutKind.TWO_TO_TWO:
            raise NotTwoToTwo(f"{label} is not a two-to-two cut")
        raise NotTwoToTwo(f"{label!r} is not a two-to-two cut of four qubits")
    return DIAGONAL_LABELS.index(label)


def _pair_labels(k: int) -> tuple[tuple[str, str], tuple[str, str], str]:
    _, (i, j), (p, q) = DIAGONALS[k]
    lab = [one_to_rest(4, x).label for x in (i, j, p, q)]
    return (lab[0], lab[1]), (lab[2], lab[3]), DIAGONAL_LABELS[k]


def triangle_margins(profile: ConcurrenceProfile, diag, use_squared: bool = True):
    """Triangle-inequality margins for both halves of the quadrilateral on ``diag``.

    Returns ``(first, second)``; each is the triple
    ``(s_i + s_j - d, d + s_i - s_j, d + s_j - s_i)``.
    """
    _require4(profile)
    k = _diag_index(diag)
    sides = triangle_sides_batch(profile_row(profile, use_squared))[k]
    m = triangle_margins_batch(sides)
    return tuple(map(float, m[0])), tuple(map(float, m[1]))


def _apex(r0: float, r1: float, d: float, sign: float) -> tuple[float, float]:
    if d == 0.0:
        return (sign * r0, 0.0)
    x = (d * d + r0 * r0 - r1 * r1) / (2 * d)
    y = math.sqrt(max((r0 - x) * (r0 + x), 0.0))
    return (x, sign * y)


@dataclass(frozen=True)
class QuadrilateralGeometry:
    diagonal_cut: str
    sides: dict
    diagonal: float
    triangle_1: TriangleSides
    triangle_2: TriangleSides
    area_1: float
    area_2: float
    vertices: tuple = field(default_factory=tuple)
    use_squared: bool = True

    @property
    def degenerate(self) -> tuple[bool, bool]:
        return (self.area_1 == 0.0, self.area_2 == 0.0)

    def to_json(self) -> dict:
        return {
            "diagonal": self.diagonal_cut,
            "mode": "squared" if self.use_squared else "concurrence",
            "sides": dict(self.sides),
            "diagonal_len": self.diagonal,
            "areas": [self.area_1, self.area_2],
            "vertices": [list(v) for v in self.vertices],
            "degenerate": list(self.degenerate),
        }


def build_quadrilateral(
    profile: ConcurrenceProfile,
    diag,
    use_squared: bool = True,
    tolerance: float = TOLERANCE,
    zero_threshold: float = ZERO_THRESHOLD,
) -> QuadrilateralGeometry:
    """Assemble the quadrilateral whose diagonal is the two-to-two cut ``diag``.

    The diagonal runs from (0, 0) to (d, 0); the first triangle's apex lies
    above the axis and the second's below.  Vertices are listed as a closed
    walk: origin, apex 1, diagonal end, apex 2.
    """
    _require4(profile)
    k = _diag_index(diag)
    c2 = snap_zeros(profile_row(profile, True), zero_threshold)
    values = c2 if use_squared else np.sqrt(c2)
    sides = triangle_sides_batch(values)[k]
    (li, lj), (lk, ll), dlabel = _pair_labels(k)
    t1 = TriangleSides(*map(float, sides[0]), labels=(li, lj, dlabel))
    t2 = TriangleSides(*map(float, sides[1]), labels=(lk, ll, dlabel))
    a1 = heron_area(t1, tolerance)
    a2 = heron_area(t2, tolerance)
    d = float(sides[0, 2])
    verts = (
        (0.0, 0.0),
        _apex(t1.a, t1.b, d, 1.0),
        (d, 0.0),
        _apex(t2.a, t2.b, d, -1.0),
    )
    return QuadrilateralGeometry(
        diagonal_cut=dlabel,
        sides={li: t1.a, lj: t1.b, lk: t2.a, ll: t2.b},
        diagonal=d,
        triangle_1=t1,
        triangle_2=t2,
        area_1=a1,
        area_2=a2,
        vertices=verts,
        use_squared=use_squared,
    )


def quadrilaterals(profile: ConcurrenceProfile, use_squared: bool = True, **kw) -> list[QuadrilateralGeometry]:
    return [build_quadrilateral(profile, lab, use_squared, **kw) for lab in DIAGONAL_LABELS]


@dataclass(frozen=True)
class InequalityReport:
    name: str
    subject: str
    margin: float
    # None when the inequality's nonzero precondition fails
    satisfied: bool | None

    def to_json(self) -> dict:
        return {"name": self.name, "subject": self.subject, "margin": self.margin, "satisfied": self.satisfied}


def sharpened_subadditivity_margin(s_i: float, s_j: float, s_ij: float) -> float:
    """Slack in ``S_ij <= S_i + S_j - 2 (1 - sqrt(1 - S_i)) (1 - sqrt(1 - S_j))``.

    Arguments are linear entropies ``1 - Tr rho^2``.
    """
    gi = 1.0 - math.sqrt(max(1.0 - s_i, 0.0))
    gj = 1.0 - math.sqrt(max(1.0 - s_j, 0.0))
    return s_i + s_j - 2.0 * gi * gj - s_ij


def strictness_margins(
    profile: ConcurrenceProfile,
    diag,
    zero_threshold: float = ZERO_THRESHOLD,
    strict_tol: float = STRICT_TOL,
) -> list[InequalityReport]:
    _require4(profile)
    k = _diag_index(diag)
    c2 = profile_row(profile, True)
    sides = triangle_sides_batch(c2)[k]
    (li, lj), (lk, ll), dlabel = _pair_labels(k)
    reports = []
    for half, (x, y) in zip(sides, ((li, lj), (lk, ll))):
        si, sj, d = map(float, half)
        applicable = min(si, sj, d) >= zero_threshold**2
        subject = f"{x},{y};{dlabel}"

        def verdict(m: float) -> bool | None:
            return (m > strict_tol) if applicable else None

        m_sum = si + sj - d
        m_diff = d - abs(si - sj)
        m_sharp = sharpened_subadditivity_margin(si / 2, sj / 2, d / 2)
        reports.append(InequalityReport("StrictSum", subject, m_sum, verdict(m_sum)))
        reports.append(InequalityReport("StrictDiff", subject, m_diff, verdict(m_diff)))
        reports.append(
            InequalityReport("SharpenedSubadditivity", subject, m_sharp, m_sharp >= -TOLERANCE)
        )
    return reports
