"""Pure-state tensor algebra on qubit registers.

Basis convention: qubit 0 (party A) is the most significant bit of the
basis index, so ``|0011>`` is index 3 and the leftmost ket character
belongs to party A.  Qubit subsets are bitmasks over *qubit labels*
(bit ``q`` set means qubit ``q`` is in the subset), which is independent
of the basis-index bit order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    EmptySubset,
    FullSubset,
    InvalidDensityMatrix,
    InvalidPermutation,
    LengthMismatch,
    MalformedInput,
    NormOutOfTolerance,
    SizeOverflow,
    UnsupportedSize,
    ZeroVector,
)

MIN_QUBITS = 1
MAX_QUBITS = 8
RENORM_TOL = 1e-6
NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
EIGEN_FLOOR = -1e-10


@dataclass(frozen=True, eq=False)
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128)
        if amps.shape != (2**self.n_qubits,):
            raise LengthMismatch(
                f"expected {2**self.n_qubits} amplitudes, got shape {amps.shape}"
            )
        if abs(np.sum(amps.real**2 + amps.imag**2) - 1.0) > NORM_TOL:
            raise NormOutOfTolerance("amplitudes are not normalized; use from_amplitudes")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((2,) * self.n_qubits)

    def __repr__(self) -> str:
        return f"StateVector(n_qubits={self.n_qubits}, amplitudes={self.amplitudes!r})"


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    n_qubits: int
    entries: np.ndarray

    def __post_init__(self):
        rho = np.array(self.entries, dtype=np.complex128)
        d = 2**self.n_qubits
        if rho.shape != (d, d):
            raise LengthMismatch(f"expected a {d}x{d} matrix, got {rho.shape}")
        if np.max(np.abs(rho - rho.conj().T)) > HERMITIAN_TOL:
            raise InvalidDensityMatrix("matrix is not Hermitian")
        if abs(np.trace(rho) - 1.0) > NORM_TOL:
            raise InvalidDensityMatrix(f"trace {np.trace(rho).real!r} is not 1")
        if np.linalg.eigvalsh(rho).min() < EIGEN_FLOOR:
            raise InvalidDensityMatrix("matrix has a negative eigenvalue")
        rho.setflags(write=False)
        object.__setattr__(self, "entries", rho)

    @property
    def dim(self) -> int:
        return 2**self.n_qubits


def _check_size(n: int) -> None:
    if not MIN_QUBITS <= n <= MAX_QUBITS:
        raise UnsupportedSize(f"{n} qubits outside supported range {MIN_QUBITS}..{MAX_QUBITS}")


def from_amplitudes(n: int, amps: Iterable[complex], strict: bool = False) -> StateVector:
    """Build a normalized state from raw amplitudes.

    Any nonzero vector is rescaled to unit norm unless ``strict`` is set,
    in which case a norm further than ``RENORM_TOL`` from 1 is rejected.
    """
    _check_size(n)
    vec = np.asarray(list(amps) if not isinstance(amps, np.ndarray) else amps, dtype=np.complex128)
    if vec.shape != (2**n,):
        raise LengthMismatch(f"expected {2**n} amplitudes for {n} qubits, got {vec.size}")
    norm = float(np.sqrt(np.sum(np.abs(vec) ** 2)))
    if norm == 0.0 or not np.isfinite(norm):
        raise ZeroVector("amplitude vector has zero (or non-finite) norm")
    if strict and abs(norm - 1.0) >= RENORM_TOL:
        raise NormOutOfTolerance(f"norm {norm!r} deviates from 1 by more than {RENORM_TOL}")
    return StateVector(n, vec / norm)


def basis_state(bits: str) -> StateVector:
    n = len(bits)
    amps = np.zeros(2**n, dtype=np.complex128)
    amps[int(bits, 2)] = 1.0
    return StateVector(n, amps)


def mask_of(qubits: Iterable[int]) -> int:
    mask = 0
    for q in qubits:
        mask |= 1 << q
    return mask


def qubits_of(mask: int, n: int) -> list[int]:
    return [q for q in range(n) if mask >> q & 1]


def _check_keep(keep: int, n: int) -> None:
    full = (1 << n) - 1
    if keep & ~full:
        raise UnsupportedSize(f"mask {keep:#b} names qubits outside a {n}-qubit register")
    if keep == 0:
        raise EmptySubset("cannot keep an empty set of qubits")
    if keep == full:
        raise FullSubset("cannot trace out an empty set of qubits")


def split_matrix(psi: np.ndarray, n: int, keep: int) -> np.ndarray:
    """Reshape a batch of amplitude vectors ``(..., 2**n)`` into ``(..., d_keep, d_rest)``."""
    lead = psi.shape[:-1]
    kept = qubits_of(keep, n)
    rest = [q for q in range(n) if q not in kept]
    off = len(lead)
    t = psi.reshape(lead + (2,) * n)
    axes = list(range(off)) + [off + q for q in kept] + [off + q for q in rest]
    return t.transpose(axes).reshape(lead + (2 ** len(kept), 2 ** len(rest)))


def reduced_density(state: StateVector, keep: int) -> DensityMatrix:
    """Partial trace of ``|psi><psi|`` over every qubit not in ``keep``.

    Kept qubits appear in increasing label order, lowest label most significant.
    """
    n = state.n_qubits
    _check_keep(keep, n)
    m = split_matrix(state.amplitudes, n, keep)
    rho = m @ m.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(bin(keep).count("1"), rho)


def reduced_density_dense(state: StateVector, keep: int) -> np.ndarray:
    """Reference partial trace: build the full projector and sum matching index pairs.

    Deliberately naive; used as a test oracle for :func:`reduced_density`.
    """
    n = state.n_qubits
    _check_keep(keep, n)
    psi = state.amplitudes
    full = np.outer(psi, psi.conj())
    kept = qubits_of(keep, n)
    rest = [q for q in range(n) if q not in kept]

    def bit(idx: int, q: int) -> int:
        return idx >> (n - 1 - q) & 1

    def sub_index(idx: int, qs: Sequence[int]) -> int:
        out = 0
        for q in qs:
            out = out << 1 | bit(idx, q)
        return out

    dk = 2 ** len(kept)
    rho = np.zeros((dk, dk), dtype=np.complex128)
    for i in range(2**n):
        for j in range(2**n):
            if sub_index(i, rest) == sub_index(j, rest):
                rho[sub_index(i, kept), sub_index(j, kept)] += full[i, j]
    return rho


def purity(rho: DensityMatrix | np.ndarray) -> float:
    m = rho.entries if isinstance(rho, DensityMatrix) else np.asarray(rho)
    return float(np.sum(np.abs(m) ** 2))


def linear_entropy(rho: DensityMatrix | np.ndarray) -> float:
    return 1.0 - purity(rho)


def purities_batch(psi: np.ndarray, n: int, keep: int) -> np.ndarray:
    """Purities of the ``keep`` reductions for a batch of amplitude rows ``(N, 2**n)``.

    Uses whichever of ``M M^dagger`` / ``M^dagger M`` is smaller; both share
    the nonzero spectrum, so the purity is the same.
    """
    _check_keep(keep, n)
    m = split_matrix(np.asarray(psi), n, keep)
    if m.shape[-2] <= m.shape[-1]:
        g = m @ np.conj(np.swapaxes(m, -1, -2))
    else:
        g = np.conj(np.swapaxes(m, -1, -2)) @ m
    return np.sum(g.real**2 + g.imag**2, axis=(-2, -1))


def tensor_product(a: StateVector, b: StateVector) -> StateVector:
    n = a.n_qubits + b.n_qubits
    if n > MAX_QUBITS:
        raise SizeOverflow(f"{n} qubits exceeds the supported maximum of {MAX_QUBITS}")
    return StateVector(n, np.kron(a.amplitudes, b.amplitudes))


def _check_perm(perm: Sequence[int], n: int) -> list[int]:
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(n)):
        raise InvalidPermutation(f"{perm} is not a permutation of 0..{n - 1}")
    return perm


def permute_qubits(state: StateVector, perm: Sequence[int]) -> StateVector:
    """Relabel qubits: old qubit ``q`` becomes qubit ``perm[q]``."""
    n = state.n_qubits
    perm = _check_perm(perm, n)
    inverse = [0] * n
    for q, p in enumerate(perm):
        inverse[p] = q
    return StateVector(n, state.tensor().transpose(inverse).reshape(-1))


def permute_batch(psi: np.ndarray, n: int, perm: Sequence[int]) -> np.ndarray:
    perm = _check_perm(perm, n)
    inverse = [0] * n
    for q, p in enumerate(perm):
        inverse[p] = q
    lead = psi.shape[:-1]
    t = psi.reshape(lead + (2,) * n)
    off = len(lead)
    return t.transpose(list(range(off)) + [off + q for q in inverse]).reshape(psi.shape)


def apply_local(psi: np.ndarray, n: int, unitaries: np.ndarray) -> np.ndarray:
    """Apply one 2x2 matrix per qubit to a batch ``(N, 2**n)``; ``unitaries`` is ``(N, n, 2, 2)``."""
    out = np.asarray(psi, dtype=np.complex128)
    batch = out.shape[0]
    for q in range(n):
        t = out.reshape(batch, 2**q, 2, 2 ** (n - q - 1))
        out = np.einsum("nij,najb->naib", unitaries[:, q], t).reshape(batch, 2**n)
    return out


def apply_local_unitaries(state: StateVector, unitaries: Sequence[np.ndarray]) -> StateVector:
    n = state.n_qubits
    if len(unitaries) != n:
        raise LengthMismatch(f"need {n} single-qubit matrices, got {len(unitaries)}")
    u = np.asarray(unitaries, dtype=np.complex128)[None]
    out = apply_local(state.amplitudes[None], n, u)[0]
    return StateVector(n, out)


def state_to_json(state: StateVector) -> dict:
    return {
        "n_qubits": state.n_qubits,
        "amplitudes": [[float(a.real), float(a.imag)] for a in state.amplitudes],
    }


def state_from_json(data: dict | str, strict: bool = False) -> StateVector:
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise MalformedInput(f"state file is not valid JSON: {exc}") from exc
    try:
        n = int(data["n_qubits"])
        amps = [complex(float(re), float(im)) for re, im in data["amplitudes"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"bad state record: {exc}") from exc
    return from_amplitudes(n, amps, strict=strict)
