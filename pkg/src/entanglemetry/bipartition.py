"""Bipartitions of a qubit register and their I-concurrences."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, MalformedInput, UnsupportedSize
from .state import MAX_QUBITS, StateVector, purities_batch, qubits_of, split_matrix

PARTIES = "ABCDEFGH"
DOMAIN_SLACK = 1e-12
# concurrence below this classifies a cut as separable
ZERO_THRESHOLD = 1e-7


class CutKind(enum.Enum):
    ONE_TO_REST = "OneToRest"
    TWO_TO_TWO = "TwoToTwo"
    OTHER = "Other"


def _popcount(mask: int) -> int:
    return bin(mask).count("1")


def canonical_mask(mask: int, n: int) -> int:
    """Pick the representative side of a cut.

    The smaller side wins; on a tie (n even, halves) the side holding qubit 0.
    Singletons therefore always label one-to-rest cuts, e.g. ``B|ACD``.
    """
    full = (1 << n) - 1
    if mask <= 0 or mask >= full or mask & ~full:
        raise DomainError(f"mask {mask:#b} is not a proper nonempty subset of {n} qubits")
    comp = full ^ mask
    a, b = _popcount(mask), _popcount(comp)
    if a != b:
        return mask if a < b else comp
    return mask if mask & 1 else comp


@dataclass(frozen=True, order=True)
class Bipartition:
    n: int
    side_a: int

    def __post_init__(self):
        object.__setattr__(self, "side_a", canonical_mask(self.side_a, self.n))

    @property
    def side_b(self) -> int:
        return ((1 << self.n) - 1) ^ self.side_a

    @property
    def kind(self) -> CutKind:
        a = _popcount(self.side_a)
        if a == 1:
            return CutKind.ONE_TO_REST
        if self.n == 4 and a == 2:
            return CutKind.TWO_TO_TWO
        return CutKind.OTHER

    @property
    def label(self) -> str:
        left = "".join(PARTIES[q] for q in qubits_of(self.side_a, self.n))
        right = "".join(PARTIES[q] for q in qubits_of(self.side_b, self.n))
        return f"{left}|{right}"

    def canonicalize(self) -> "Bipartition":
        return Bipartition(self.n, self.side_a)

    def relabel(self, perm) -> "Bipartition":
        """The same cut after old qubit ``q`` became qubit ``perm[q]``."""
        mask = 0
        for q in qubits_of(self.side_a, self.n):
            mask |= 1 << perm[q]
        return Bipartition(self.n, mask)

    def __str__(self) -> str:
        return self.label


def parse_cut(label: str, n: int = 4) -> Bipartition:
    try:
        left, right = label.strip().upper().split("|")
        left_q = [PARTIES.index(ch) for ch in left]
        right_q = [PARTIES.index(ch) for ch in right]
    except ValueError as exc:
        raise MalformedInput(f"bad cut label {label!r}") from exc
    if sorted(left_q + right_q) != list(range(n)) or not left_q or not right_q:
        raise MalformedInput(f"cut {label!r} does not split {n} parties")
    mask = 0
    for q in left_q:
        mask |= 1 << q
    return Bipartition(n, mask)


@lru_cache(maxsize=None)
def enumerate_bipartitions(n: int) -> tuple[Bipartition, ...]:
    """All ``2**(n-1) - 1`` cuts, ordered by side size then by party letters."""
    if not 2 <= n <= MAX_QUBITS:
        raise UnsupportedSize(f"bipartitions need 2..{MAX_QUBITS} qubits, got {n}")
    full = (1 << n) - 1
    cuts = {Bipartition(n, m) for m in range(1, full)}
    return tuple(
        sorted(cuts, key=lambda b: (_popcount(b.side_a), qubits_of(b.side_a, n)))
    )


def one_to_rest(n: int, party: int) -> Bipartition:
    return Bipartition(n, 1 << party)


# below this, 2 (1 - purity) is dominated by rounding and is recomputed
_REFINE_BELOW = 1e-8


def _c2_from_singular_values(m: np.ndarray) -> np.ndarray:
    """``4 * sum_{i<j} p_i p_j`` over Schmidt weights; no cancellation near product states."""
    p = np.linalg.svd(m, compute_uv=False) ** 2
    p = p / p.sum(axis=-1, keepdims=True)
    k = p.shape[-1]
    acc = np.zeros(p.shape[:-1])
    for i in range(k):
        for j in range(i + 1, k):
            acc += p[..., i] * p[..., j]
    return 4.0 * acc


def concurrence_squared_batch(psi: np.ndarray, n: int, cut: Bipartition) -> np.ndarray:
    c2 = np.maximum(2.0 * (1.0 - purities_batch(psi, n, cut.side_a)), 0.0)
    small = np.nonzero(c2 < _REFINE_BELOW)[0] if c2.ndim == 1 else None
    if small is not None and small.size:
        m = split_matrix(np.asarray(psi)[small], n, cut.side_a)
        c2[small] = _c2_from_singular_values(m)
    return c2


def concurrence(state: StateVector, cut: Bipartition) -> float:
    """I-concurrence ``sqrt(2 (1 - Tr rho_A^2))`` across ``cut``."""
    if cut.n != state.n_qubits:
        raise UnsupportedSize(f"cut for {cut.n} qubits applied to a {state.n_qubits}-qubit state")
    c2 = concurrence_squared_batch(state.amplitudes[None], state.n_qubits, cut)[0]
    return math.sqrt(c2)


def _clamp_unit(x: float, what: str) -> float:
    if not -DOMAIN_SLACK <= x <= 1.0 + DOMAIN_SLACK or math.isnan(x):
        raise DomainError(f"{what} {x!r} outside [0, 1]")
    return min(max(x, 0.0), 1.0)


def schmidt_weight_from_squared(c2: float) -> float:
    """Normalized Schmidt weight ``1 - sqrt(1 - c2)`` of a one-qubit marginal."""
    c2 = _clamp_unit(c2, "squared concurrence")
    # rationalized form keeps relative precision for small c2
    return c2 / (1.0 + math.sqrt(1.0 - c2))


def squared_from_schmidt_weight(y: float) -> float:
    y = _clamp_unit(y, "Schmidt weight")
    return y * (2.0 - y)


@dataclass(frozen=True)
class CutValue:
    c: float
    c2: float
    y: float | None = None


@dataclass(frozen=True)
class ConcurrenceProfile:
    n: int
    entries: dict

    def __getitem__(self, key) -> CutValue:
        if isinstance(key, str):
            key = parse_cut(key, self.n)
        return self.entries[key]

    def c2(self, key) -> float:
        return self[key].c2

    def c(self, key) -> float:
        return self[key].c

    def one_to_rest_c2(self) -> list[float]:
        return [self.entries[one_to_rest(self.n, q)].c2 for q in range(self.n)]

    def cuts(self) -> tuple[Bipartition, ...]:
        return enumerate_bipartitions(self.n)

    def as_dict(self) -> dict:
        out = {}
        for cut in self.cuts():
            v = self.entries[cut]
            rec = {"c": v.c, "c2": v.c2}
            if v.y is not None:
                rec["y"] = v.y
            out[cut.label] = rec
        return out

    @classmethod
    def from_dict(cls, n: int, data: dict) -> "ConcurrenceProfile":
        entries = {}
        for label, rec in data.items():
            entries[parse_cut(label, n)] = CutValue(rec["c"], rec["c2"], rec.get("y"))
        return cls(n, entries)


def profile_from_c2(n: int, c2_values) -> ConcurrenceProfile:
    """Assemble a profile from squared concurrences listed in enumeration order."""
    cuts = enumerate_bipartitions(n)
    entries = {}
    for cut, c2 in zip(cuts, c2_values, strict=True):
        c2 = float(c2)
        y = None
        if cut.kind is CutKind.ONE_TO_REST:
            y = schmidt_weight_from_squared(min(c2, 1.0))
        entries[cut] = CutValue(math.sqrt(c2), c2, y)
    return ConcurrenceProfile(n, entries)


def profile_batch(psi: np.ndarray, n: int) -> np.ndarray:
    """Squared concurrences ``(N, n_cuts)`` in :func:`enumerate_bipartitions` order."""
    cuts = enumerate_bipartitions(n)
    return np.stack([concurrence_squared_batch(psi, n, cut) for cut in cuts], axis=-1)


def profile(state: StateVector) -> ConcurrenceProfile:
    n = state.n_qubits
    if n not in (3, 4):
        raise UnsupportedSize(f"profiles are defined for 3 or 4 qubits, got {n}")
    return profile_from_c2(n, profile_batch(state.amplitudes[None], n)[0])
