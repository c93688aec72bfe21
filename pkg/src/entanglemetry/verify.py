"""Ensemble campaigns that check the concurrence inequalities and measure properties.

Every check yields, per sample, a margin and a three-valued status
(pass / fail / not applicable).  Inequality checks report their slack
(``>= 0`` when satisfied); equality checks report ``-deviation``.
"""

from __future__ import annotations

import enum
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .bipartition import ZERO_THRESHOLD, profile_batch
from .catalog import EnsembleSpec, _draw, blocks, haar_unitary, sample_rng
from .errors import ConfigError, EntanglemetryError
from .geometry import (
    DIAGONALS,
    STRICT_TOL,
    TOLERANCE,
    polygon_margins_batch,
    snap_zeros,
    triangle_margins_batch,
    triangle_sides_batch,
)
from .measures import NORMALIZATION, concurrence_fill_batch, gme_from_c2, triangle_areas_batch
from .state import apply_local, permute_batch

FIG3_TOL = 1e-6
HIST_BINS = 64
HIST_LO, HIST_HI = 1e-12, 4.0

PASS, FAIL, NA = 1, 0, -1


class Check(enum.Enum):
    T1 = "T1"
    T2_SQUARED = "T2_squared"
    T2_UNSQUARED = "T2_unsquared"
    T3_STRICT = "T3_strict"
    T4_SUM = "T4_sum"
    FIG2_REDUCTION = "Fig2_reduction"
    FIG3_COLLINEAR = "Fig3_collinear"
    LU_INVARIANCE = "LU_invariance"
    PERMUTATION_INVARIANCE = "Permutation_invariance"
    BISEPARABLE_ZERO = "Biseparable_zero"
    GME_POSITIVE = "GME_positive"
    SATURATION_ADJACENT = "Saturation_adjacent"
    SATURATION_ABSENT = "Saturation_absent"


THEOREM_CHECKS = (
    Check.T1,
    Check.T2_SQUARED,
    Check.T2_UNSQUARED,
    Check.T3_STRICT,
    Check.T4_SUM,
)
ALL_CHECKS = THEOREM_CHECKS + (
    Check.FIG2_REDUCTION,
    Check.FIG3_COLLINEAR,
    Check.LU_INVARIANCE,
    Check.PERMUTATION_INVARIANCE,
    Check.BISEPARABLE_ZERO,
    Check.GME_POSITIVE,
)

CHECK_ALIASES = {
    "all": ALL_CHECKS,
    "theorems": THEOREM_CHECKS,
    "t1": (Check.T1,),
    "t2": (Check.T2_SQUARED, Check.T2_UNSQUARED),
    "t2sq": (Check.T2_SQUARED,),
    "t2c": (Check.T2_UNSQUARED,),
    "t3": (Check.T3_STRICT,),
    "t4": (Check.T4_SUM,),
    "fig2": (Check.FIG2_REDUCTION,),
    "fig3": (Check.FIG3_COLLINEAR,),
    "lu": (Check.LU_INVARIANCE,),
    "perm": (Check.PERMUTATION_INVARIANCE,),
    "bisep": (Check.BISEPARABLE_ZERO,),
    "positive": (Check.GME_POSITIVE,),
    "saturation": (Check.SATURATION_ADJACENT, Check.SATURATION_ABSENT),
}


def parse_checks(text: str) -> tuple[Check, ...]:
    out: list[Check] = []
    for item in text.split(","):
        key = item.strip()
        if not key:
            continue
        if key.lower() in CHECK_ALIASES:
            found = CHECK_ALIASES[key.lower()]
        else:
            try:
                found = (Check(key),)
            except ValueError:
                raise ConfigError(f"unknown check {key!r}") from None
        out.extend(c for c in found if c not in out)
    if not out:
        raise ConfigError("no checks selected")
    return tuple(out)


@dataclass(frozen=True)
class CampaignConfig:
    ensemble: EnsembleSpec
    checks: tuple[Check, ...] = ALL_CHECKS
    tolerance: float = TOLERANCE
    zero_threshold: float = ZERO_THRESHOLD
    strict_tol: float = STRICT_TOL
    fail_fast: bool = False

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ConfigError("tolerance must be positive")
        if not self.zero_threshold > self.tolerance:
            raise ConfigError("zero_threshold must exceed tolerance")
        if not self.checks:
            raise ConfigError("no checks selected")
        if self.ensemble.n_qubits != 4:
            raise ConfigError(f"campaigns need a four-qubit ensemble, got {self.ensemble.name}")

    def check_tolerance(self, check: Check) -> float:
        if check in (Check.FIG3_COLLINEAR, Check.SATURATION_ADJACENT):
            return max(FIG3_TOL, self.tolerance)
        if check in (Check.T3_STRICT, Check.T4_SUM, Check.GME_POSITIVE, Check.SATURATION_ABSENT):
            return self.strict_tol
        return self.tolerance

    def to_json(self) -> dict:
        return {
            **self.ensemble.to_json(),
            "checks": [c.value for c in self.checks],
            "tolerance": self.tolerance,
            "zero_threshold": self.zero_threshold,
            "strict_tol": self.strict_tol,
            "fail_fast": self.fail_fast,
        }


# ------------------------------------------------------------- per-block


@dataclass
class _Block:
    cfg: CampaignConfig
    start: int
    psi: np.ndarray
    c2: np.ndarray = field(init=False)
    f: np.ndarray = field(init=False)
    f1: np.ndarray = field(init=False)

    def __post_init__(self):
        self.c2 = profile_batch(self.psi, 4)
        self.f, self.f1 = gme_from_c2(self.c2, self.cfg.zero_threshold)

    @property
    def size(self) -> int:
        return self.psi.shape[0]

    @property
    def nonzero(self) -> np.ndarray:
        return self.c2 >= self.cfg.zero_threshold**2


def _inequality(margin: np.ndarray, tol: float, applicable=None):
    status = np.where(margin >= -tol, PASS, FAIL)
    if applicable is not None:
        status = np.where(applicable, status, NA)
    return margin, status


def _strict(margin: np.ndarray, tol: float, applicable: np.ndarray):
    status = np.where(margin > tol, PASS, FAIL)
    return margin, np.where(applicable, status, NA)


def _equality(deviation: np.ndarray, tol: float, applicable=None):
    return _inequality(-deviation, tol, applicable)


def _check_t1(b: _Block, tol: float):
    return _inequality(polygon_margins_batch(b.c2).min(axis=-1), tol)


def _check_t2(b: _Block, tol: float, squared: bool):
    values = b.c2 if squared else np.sqrt(b.c2)
    m = triangle_margins_batch(triangle_sides_batch(values))
    return _inequality(m.reshape(b.size, -1).min(axis=-1), tol)


def _check_t3(b: _Block, tol: float):
    sides = triangle_sides_batch(b.c2)
    m = triangle_margins_batch(sides).min(axis=-1)
    ok = np.all(sides >= b.cfg.zero_threshold**2, axis=-1)
    masked = np.where(ok, m, np.inf).reshape(b.size, -1).min(axis=-1)
    applicable = ok.reshape(b.size, -1).any(axis=-1)
    return _strict(np.where(applicable, masked, np.nan), tol, applicable)


def _check_t4(b: _Block, tol: float):
    applicable = b.nonzero[:, :4].sum(axis=-1) >= 3
    m = np.abs(polygon_margins_batch(b.c2)).min(axis=-1)
    return _strict(m, tol, applicable)


def _principal_vector(rho: np.ndarray) -> np.ndarray:
    _, vecs = np.linalg.eigh(rho)
    return vecs[..., -1]


def _check_fig2(b: _Block, tol: float):
    zero_party = ~b.nonzero[:, :4]
    applicable = zero_party.sum(axis=-1) == 1
    deviation = np.full(b.size, np.nan)
    party = np.argmax(zero_party, axis=-1)
    sq_areas, _ = triangle_areas_batch(b.c2, b.cfg.zero_threshold)
    sq_areas = NORMALIZATION * sq_areas.reshape(b.size, 3, 2)
    for p in range(4):
        rows = np.nonzero(applicable & (party == p))[0]
        if rows.size == 0:
            continue
        rest = [q for q in range(4) if q != p]
        psi = b.psi[rows].reshape((rows.size,) + (2,) * 4)
        m = np.moveaxis(psi, [1 + q for q in rest] + [1 + p], [1, 2, 3, 4]).reshape(rows.size, 8, 2)
        rho = m @ np.conj(np.swapaxes(m, -1, -2))
        chi = _principal_vector(rho)
        fill = concurrence_fill_batch(profile_batch(chi, 3), b.cfg.zero_threshold)
        dev = np.zeros(rows.size)
        for k, (_, pair1, pair2) in enumerate(DIAGONALS):
            live, dead = (1, 0) if p in pair1 else (0, 1)
            dev = np.maximum(dev, np.abs(sq_areas[rows, k, live] - fill))
            dev = np.maximum(dev, np.abs(sq_areas[rows, k, dead]))
        deviation[rows] = dev
    return _equality(deviation, tol, applicable)


def _check_fig3(b: _Block, tol: float):
    zero_diag = ~b.nonzero[:, 4:]
    applicable = zero_diag.any(axis=-1)
    deviation = np.zeros(b.size)
    sq_areas, _ = triangle_areas_batch(b.c2, b.cfg.zero_threshold)
    sq_areas = sq_areas.reshape(b.size, 3, 2)
    for k, (d, (i, j), (p, q)) in enumerate(DIAGONALS):
        others = [x for x in (4, 5, 6) if x != d]
        dev = np.max(
            np.stack(
                [
                    np.abs(b.c2[:, i] - b.c2[:, j]),
                    np.abs(b.c2[:, p] - b.c2[:, q]),
                    np.abs(b.c2[:, others[0]] - b.c2[:, others[1]]),
                    sq_areas[:, k, 0],
                    sq_areas[:, k, 1],
                ]
            ),
            axis=0,
        )
        deviation = np.where(zero_diag[:, k], np.maximum(deviation, dev), deviation)
    return _equality(np.where(applicable, deviation, np.nan), tol, applicable)


def _local_unitaries(cfg: CampaignConfig, start: int, size: int) -> np.ndarray:
    out = np.empty((size, 4, 2, 2), dtype=np.complex128)
    for r in range(size):
        rng = sample_rng(cfg.ensemble.seed, start + r, stream=1)
        for q in range(4):
            out[r, q] = haar_unitary(rng, 2)
    return out


def _check_lu(b: _Block, tol: float):
    moved = apply_local(b.psi, 4, _local_unitaries(b.cfg, b.start, b.size))
    f, f1 = gme_from_c2(profile_batch(moved, 4), b.cfg.zero_threshold)
    return _equality(np.maximum(np.abs(f - b.f), np.abs(f1 - b.f1)), tol)


PERMUTATIONS = tuple(itertools.permutations(range(4)))


def _check_perm(b: _Block, tol: float):
    dev = np.zeros(b.size)
    for perm in PERMUTATIONS[1:]:
        f, f1 = gme_from_c2(profile_batch(permute_batch(b.psi, 4, perm), 4), b.cfg.zero_threshold)
        dev = np.maximum(dev, np.maximum(np.abs(f - b.f), np.abs(f1 - b.f1)))
    return _equality(dev, tol)


def _check_bisep(b: _Block, tol: float):
    applicable = ~b.nonzero.all(axis=-1)
    return _equality(np.maximum(b.f, b.f1), tol, applicable)


def _check_positive(b: _Block, tol: float):
    applicable = b.nonzero.all(axis=-1)
    return _strict(np.minimum(b.f, b.f1), tol, applicable)


def _check_saturation_adjacent(b: _Block, tol: float):
    """A vanishing side forces its neighbour to equal the diagonal."""
    sides = triangle_sides_batch(b.c2).reshape(b.size, 6, 3)
    zt2 = b.cfg.zero_threshold**2
    zi, zj = sides[..., 0] < zt2, sides[..., 1] < zt2
    one_zero = zi ^ zj
    other = np.where(zi, sides[..., 1], sides[..., 0])
    dev = np.where(one_zero, np.abs(other - sides[..., 2]), 0.0).max(axis=-1)
    applicable = one_zero.any(axis=-1)
    return _equality(np.where(applicable, dev, np.nan), tol, applicable)


_CHECKS = {
    Check.T1: _check_t1,
    Check.T2_SQUARED: lambda b, t: _check_t2(b, t, True),
    Check.T2_UNSQUARED: lambda b, t: _check_t2(b, t, False),
    Check.T3_STRICT: _check_t3,
    Check.T4_SUM: _check_t4,
    Check.FIG2_REDUCTION: _check_fig2,
    Check.FIG3_COLLINEAR: _check_fig3,
    Check.LU_INVARIANCE: _check_lu,
    Check.PERMUTATION_INVARIANCE: _check_perm,
    Check.BISEPARABLE_ZERO: _check_bisep,
    Check.GME_POSITIVE: _check_positive,
    Check.SATURATION_ADJACENT: _check_saturation_adjacent,
    Check.SATURATION_ABSENT: _check_t3,
}


class CampaignError(EntanglemetryError):
    pass


def _evaluate(cfg: CampaignConfig, start: int, stop: int) -> dict:
    spec = cfg.ensemble
    rows = []
    for i in range(start, stop):
        try:
            rows.append(_draw(spec, i))
        except EntanglemetryError as exc:
            raise CampaignError(f"sample {i}: {exc}") from exc
    block = _Block(cfg, start, np.stack(rows))
    return {c: _CHECKS[c](block, cfg.check_tolerance(c)) for c in cfg.checks}


# ------------------------------------------------------------- aggregation


def _histogram(values: np.ndarray) -> dict:
    edges = np.logspace(math.log10(HIST_LO), math.log10(HIST_HI), HIST_BINS + 1)
    v = values[np.isfinite(values)]
    counts, _ = np.histogram(v, bins=edges)
    return {
        "bins": HIST_BINS,
        "lo": HIST_LO,
        "hi": HIST_HI,
        "underflow": int(np.sum(v < HIST_LO)),
        "counts": [int(x) for x in counts],
        "overflow": int(np.sum(v > HIST_HI)),
    }


@dataclass
class CheckResult:
    check: str
    tolerance: float
    count: int = 0
    passes: int = 0
    failures: int = 0
    not_applicable: int = 0
    min_margin: float | None = None
    violations: list = field(default_factory=list)
    histogram: dict = field(default_factory=lambda: _histogram(np.empty(0)))

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_json(self) -> dict:
        return {
            "check": self.check,
            "tolerance": self.tolerance,
            "count": self.count,
            "passes": self.passes,
            "failures": self.failures,
            "not_applicable": self.not_applicable,
            "min_margin": self.min_margin,
            "violations": [[i, m] for i, m in self.violations],
            "histogram": self.histogram,
            "passed": self.passed,
        }

    @classmethod
    def from_json(cls, d: dict) -> "CheckResult":
        return cls(
            check=d["check"],
            tolerance=d["tolerance"],
            count=d["count"],
            passes=d["passes"],
            failures=d["failures"],
            not_applicable=d["not_applicable"],
            min_margin=d["min_margin"],
            violations=[(int(i), float(m)) for i, m in d["violations"]],
            histogram=d["histogram"],
        )


@dataclass
class CampaignResult:
    config: dict
    checks: dict
    samples_evaluated: int

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.checks.values())

    def __getitem__(self, check) -> CheckResult:
        key = check.value if isinstance(check, Check) else check
        return self.checks[key]

    def to_json(self) -> dict:
        return {
            "config": self.config,
            "samples_evaluated": self.samples_evaluated,
            "passed": self.passed,
            "checks": {k: v.to_json() for k, v in self.checks.items()},
        }

    @classmethod
    def from_json(cls, d: dict) -> "CampaignResult":
        return cls(
            config=d["config"],
            checks={k: CheckResult.from_json(v) for k, v in d["checks"].items()},
            samples_evaluated=d["samples_evaluated"],
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, CampaignResult):
            return NotImplemented
        return self.to_json() == other.to_json()


def _aggregate(cfg: CampaignConfig, parts: list[tuple[int, dict]], stop_at: int | None) -> CampaignResult:
    results = {}
    total = 0
    for check in cfg.checks:
        margins, statuses, indices = [], [], []
        for start, res in parts:
            m, s = res[check]
            idx = np.arange(start, start + len(m))
            margins.append(m)
            statuses.append(s)
            indices.append(idx)
        m = np.concatenate(margins)
        s = np.concatenate(statuses)
        idx = np.concatenate(indices)
        if stop_at is not None:
            keep = idx <= stop_at
            m, s, idx = m[keep], s[keep], idx[keep]
        total = len(idx)
        applicable = s != NA
        slack = np.abs(m[applicable])
        bad = s == FAIL
        results[check.value] = CheckResult(
            check=check.value,
            tolerance=cfg.check_tolerance(check),
            count=int(len(s)),
            passes=int(np.sum(s == PASS)),
            failures=int(np.sum(bad)),
            not_applicable=int(np.sum(~applicable)),
            min_margin=float(np.min(m[applicable])) if applicable.any() else None,
            violations=[(int(i), float(x)) for i, x in zip(idx[bad], m[bad])],
            histogram=_histogram(slack),
        )
    return CampaignResult(cfg.to_json(), results, total)


def run_campaign(cfg: CampaignConfig, threads: int = 1) -> CampaignResult:
    """Evaluate every selected check on every sample of the ensemble.

    Samples are processed in fixed-size blocks keyed by sample index, so the
    result is the same for any ``threads``.  With ``fail_fast`` the campaign
    stops after the first violating sample.
    """
    spans = blocks(cfg.ensemble.count)
    parts: list[tuple[int, dict]] = []
    stop_at = None

    def first_failure(res: dict, start: int):
        hits = [np.nonzero(s == FAIL)[0] for _, s in res.values()]
        hits = [h[0] for h in hits if h.size]
        return start + min(hits) if hits else None

    if threads <= 1:
        for a, b in spans:
            res = _evaluate(cfg, a, b)
            parts.append((a, res))
            if cfg.fail_fast and (hit := first_failure(res, a)) is not None:
                stop_at = hit
                break
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for (a, _), res in zip(spans, pool.map(lambda ab: _evaluate(cfg, *ab), spans)):
                parts.append((a, res))
                if cfg.fail_fast and (hit := first_failure(res, a)) is not None:
                    stop_at = hit
                    break
    return _aggregate(cfg, parts, stop_at)


def saturation_probe(cfg: CampaignConfig, threads: int = 1) -> CampaignResult:
    """Run the saturation checks: a zero side pins its neighbour to the diagonal;
    with all three sides nonzero no triangle saturates."""
    probe = CampaignConfig(
        cfg.ensemble,
        (Check.SATURATION_ADJACENT, Check.SATURATION_ABSENT),
        cfg.tolerance,
        cfg.zero_threshold,
        cfg.strict_tol,
        cfg.fail_fast,
    )
    return run_campaign(probe, threads)
