"""Benchmark states, the G_abcd / L_ab3 families and seeded random ensembles."""

from __future__ import annotations

import cmath
import enum
import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, InvalidCount, UnknownName
from .state import StateVector, basis_state, from_amplitudes, permute_batch

OMEGA = cmath.exp(2j * math.pi / 3)
# fixed so that per-block numerics never depend on the worker count
BLOCK_SIZE = 2048


def _from_terms(n: int, terms: dict[str, complex]) -> StateVector:
    amps = np.zeros(2**n, dtype=np.complex128)
    for bits, coeff in terms.items():
        amps[int(bits, 2)] += coeff
    return from_amplitudes(n, amps)


def ghz(n: int) -> StateVector:
    return _from_terms(n, {"0" * n: 1, "1" * n: 1})


def w_state(n: int) -> StateVector:
    return _from_terms(n, {"0" * k + "1" + "0" * (n - k - 1): 1 for k in range(n)})


def cluster4() -> StateVector:
    return _from_terms(4, {"0000": 1, "0011": 1, "1100": 1, "1111": -1})


def higuchi_sudbery() -> StateVector:
    w, w2 = OMEGA, OMEGA**2
    return _from_terms(
        4,
        {"0011": 1, "1100": 1, "0101": w, "1010": w, "0110": w2, "1001": w2},
    )


def bell_pair_product() -> StateVector:
    """Bell pairs on AB and on CD."""
    return _from_terms(4, {"0000": 1, "0011": 1, "1100": 1, "1111": 1})


NAMED = {
    "ghz3": lambda: ghz(3),
    "ghz4": lambda: ghz(4),
    "w3": lambda: w_state(3),
    "w4": lambda: w_state(4),
    "cluster4": cluster4,
    "hs": higuchi_sudbery,
    "bellxbell": bell_pair_product,
}


def build_named(name: str) -> StateVector:
    """Resolve a catalog name; ``basis:0101`` gives a computational basis state."""
    key = name.strip().lower()
    if key.startswith("basis:"):
        bits = key.split(":", 1)[1]
        if not bits or set(bits) - {"0", "1"}:
            raise UnknownName(f"bad basis bitstring {bits!r}")
        return basis_state(bits)
    if key.startswith("ghz") and key[3:].isdigit():
        return ghz(int(key[3:]))
    if key.startswith("w") and key[1:].isdigit():
        return w_state(int(key[1:]))
    try:
        return NAMED[key]()
    except KeyError:
        raise UnknownName(f"unknown state name {name!r}; known: {', '.join(NAMED)}") from None


def gabcd(a: complex, b: complex, c: complex, d: complex) -> StateVector:
    p, m = (a + d) / 2, (a - d) / 2
    q, r = (b + c) / 2, (b - c) / 2
    amps = np.zeros(16, dtype=np.complex128)
    for bits, coeff in (
        ("0000", p), ("1111", p),
        ("0011", m), ("1100", m),
        ("0101", q), ("1010", q),
        ("0110", r), ("1001", r),
    ):
        amps[int(bits, 2)] += coeff
    return from_amplitudes(4, amps)


def lab3(a: complex, b: complex) -> StateVector:
    s = 1j / math.sqrt(2)
    amps = np.zeros(16, dtype=np.complex128)
    for bits, coeff in (
        ("0000", a), ("1111", a),
        ("0101", (a + b) / 2), ("1010", (a + b) / 2),
        ("0110", (a - b) / 2), ("1001", (a - b) / 2),
        ("0001", s), ("0010", s), ("0111", s), ("1011", s),
    ):
        amps[int(bits, 2)] += coeff
    return from_amplitudes(4, amps)


@dataclass(frozen=True)
class FamilyParams:
    family: str
    params: tuple[complex, ...]


FAMILY_ARITY = {"gabcd": 4, "lab3": 2}


def build_family(p: FamilyParams) -> StateVector:
    fam = p.family.lower()
    if fam not in FAMILY_ARITY:
        raise UnknownName(f"unknown family {p.family!r}")
    if len(p.params) != FAMILY_ARITY[fam]:
        raise ConfigError(f"{fam} takes {FAMILY_ARITY[fam]} parameters, got {len(p.params)}")
    return gabcd(*p.params) if fam == "gabcd" else lab3(*p.params)


def parse_complex(text: str) -> complex:
    """Parse ``re+imi`` style literals (``1``, ``-0.5i``, ``1+2i``, ``i``)."""
    t = text.strip().replace(" ", "").replace("i", "j")
    t = re.sub(r"(^|[+-])j", r"\g<1>1j", t)
    try:
        return complex(t)
    except ValueError:
        raise ConfigError(f"bad complex literal {text!r}") from None


def parse_family(spec: str) -> FamilyParams:
    """``gabcd:a,b,c,d`` or ``lab3:a,b``."""
    try:
        fam, args = spec.split(":", 1)
    except ValueError:
        raise ConfigError(f"family spec {spec!r} must look like name:p1,p2,...") from None
    return FamilyParams(fam.strip().lower(), tuple(parse_complex(x) for x in args.split(",")))


# ---------------------------------------------------------------- ensembles


class EnsembleKind(enum.Enum):
    HAAR = "haar"
    PRODUCT_ONE_THREE = "product13"
    PRODUCT_TWO_TWO = "product22"
    FULLY_PRODUCT = "fullproduct"
    FAMILY_SWEEP = "family"


ENSEMBLE_ALIASES = {
    "haar": (EnsembleKind.HAAR, 4),
    "haar3": (EnsembleKind.HAAR, 3),
    "haar4": (EnsembleKind.HAAR, 4),
    "product13": (EnsembleKind.PRODUCT_ONE_THREE, 4),
    "product22": (EnsembleKind.PRODUCT_TWO_TWO, 4),
    "fullproduct": (EnsembleKind.FULLY_PRODUCT, 4),
    "gabcd": (EnsembleKind.FAMILY_SWEEP, 4),
    "lab3": (EnsembleKind.FAMILY_SWEEP, 4),
}


@dataclass(frozen=True)
class EnsembleSpec:
    kind: EnsembleKind
    seed: int
    count: int
    n_qubits: int = 4
    family: str = "gabcd"

    def __post_init__(self):
        if self.count < 1:
            raise InvalidCount(f"sample count must be >= 1, got {self.count}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.kind is not EnsembleKind.HAAR and self.n_qubits != 4:
            raise ConfigError(f"{self.kind.value} ensembles are four-qubit only")
        if self.kind is EnsembleKind.FAMILY_SWEEP and self.family not in FAMILY_ARITY:
            raise ConfigError(f"unknown family {self.family!r}")

    @property
    def name(self) -> str:
        if self.kind is EnsembleKind.HAAR:
            return f"haar{self.n_qubits}"
        if self.kind is EnsembleKind.FAMILY_SWEEP:
            return self.family
        return self.kind.value

    def to_json(self) -> dict:
        return {"ensemble": self.name, "seed": self.seed, "count": self.count}

    @classmethod
    def from_name(cls, name: str, seed: int, count: int) -> "EnsembleSpec":
        key = name.strip().lower()
        if key not in ENSEMBLE_ALIASES:
            raise ConfigError(f"unknown ensemble {name!r}; known: {', '.join(ENSEMBLE_ALIASES)}")
        kind, n = ENSEMBLE_ALIASES[key]
        family = key if kind is EnsembleKind.FAMILY_SWEEP else "gabcd"
        return cls(kind, seed, count, n, family)


def sample_rng(seed: int, index: int, stream: int = 0) -> np.random.Generator:
    """Generator keyed by ``(seed, index)``; ``stream`` separates independent uses."""
    key = [seed, index] if stream == 0 else [seed, index, stream]
    return np.random.default_rng(key)


def haar_vector(rng: np.random.Generator, n: int) -> np.ndarray:
    z = rng.standard_normal((2, 2**n))
    v = z[0] + 1j * z[1]
    return v / np.sqrt(np.sum(np.abs(v) ** 2))


def haar_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix with phase correction."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * ph


def _embed(factor_a: np.ndarray, factor_b: np.ndarray, positions_a: list[int]) -> np.ndarray:
    """Tensor two factors, then move factor A's qubits to ``positions_a``."""
    n_a = int(np.log2(factor_a.size))
    n = n_a + int(np.log2(factor_b.size))
    rest = [q for q in range(n) if q not in positions_a]
    perm = list(positions_a) + rest
    return permute_batch(np.kron(factor_a, factor_b), n, perm)


_PAIRINGS = ([0, 1], [0, 2], [0, 3])


def _draw(spec: EnsembleSpec, index: int) -> np.ndarray:
    rng = sample_rng(spec.seed, index)
    kind = spec.kind
    if kind is EnsembleKind.HAAR:
        return haar_vector(rng, spec.n_qubits)
    if kind is EnsembleKind.PRODUCT_ONE_THREE:
        party = int(rng.integers(4))
        return _embed(haar_vector(rng, 1), haar_vector(rng, 3), [party])
    if kind is EnsembleKind.PRODUCT_TWO_TWO:
        pair = _PAIRINGS[int(rng.integers(3))]
        return _embed(haar_vector(rng, 2), haar_vector(rng, 2), pair)
    if kind is EnsembleKind.FULLY_PRODUCT:
        out = haar_vector(rng, 1)
        for _ in range(3):
            out = np.kron(out, haar_vector(rng, 1))
        return out
    k = FAMILY_ARITY[spec.family]
    z = rng.standard_normal((2, k))
    params = tuple(complex(x, y) for x, y in zip(z[0], z[1]))
    return build_family(FamilyParams(spec.family, params)).amplitudes


def _block(spec: EnsembleSpec, start: int, stop: int) -> np.ndarray:
    return np.stack([_draw(spec, i) for i in range(start, stop)])


def blocks(count: int, block_size: int = BLOCK_SIZE) -> list[tuple[int, int]]:
    return [(s, min(s + block_size, count)) for s in range(0, count, block_size)]


def sample_array(spec: EnsembleSpec, threads: int = 1) -> np.ndarray:
    """All samples as an ``(count, 2**n)`` array, identical for any ``threads``."""
    spans = blocks(spec.count)
    if threads <= 1 or len(spans) == 1:
        parts = [_block(spec, a, b) for a, b in spans]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda ab: _block(spec, *ab), spans))
    return np.concatenate(parts)


def sample(spec: EnsembleSpec, threads: int = 1) -> list[StateVector]:
    arr = sample_array(spec, threads)
    return [StateVector(spec.n_qubits, row) for row in arr]
