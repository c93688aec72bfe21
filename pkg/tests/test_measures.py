import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from entanglemetry.bipartition import profile
from entanglemetry.catalog import build_named, ghz, w_state
from entanglemetry.errors import UnsupportedSize
from entanglemetry.measures import (
    NORMALIZATION,
    GmeReport,
    SeparabilityKind,
    classify_separability,
    concurrence_fill_3q,
    geometric_mean_scaled,
    gme_batch,
    gme_f,
    gme_f1,
    gme_report,
    six_triangles,
)
from entanglemetry.state import apply_local_unitaries, basis_state, permute_qubits, tensor_product
from oracles import f_oracle, haar_state

seeds = st.integers(0, 2**32 - 1)

def _equilateral_and(d, side=1.0):
    # area of the isosceles triangle (side, side, d)
    return 0.25 * math.sqrt((2 * side + d) * d * d * (2 * side - d))


@pytest.mark.parametrize("name", ["w4", "ghz4", "cluster4", "hs"])
def test_named_states_match_oracle(name):
    s = build_named(name)
    assert gme_f(s) == pytest.approx(f_oracle(s.amplitudes), abs=1e-12)
    assert gme_f1(s) == pytest.approx(f_oracle(s.amplitudes, squared=False), abs=1e-12)


def test_closed_forms():
    w = build_named("w4")
    assert gme_f(w) == pytest.approx(NORMALIZATION * math.sqrt(5) / 8, abs=1e-12)
    assert gme_f1(w) == pytest.approx(NORMALIZATION * math.sqrt(2) / 4, abs=1e-12)
    # cluster: one equilateral quadrilateral, two with diagonal 3/2
    eq = math.sqrt(3) / 4
    wide = _equilateral_and(1.5)
    expected = NORMALIZATION * (eq**2 * wide**4) ** (1 / 6)
    assert gme_f(build_named("cluster4")) == pytest.approx(expected, abs=1e-12)
    # HS: every diagonal is 4/3
    assert gme_f(build_named("hs")) == pytest.approx(NORMALIZATION * _equilateral_and(4 / 3), abs=1e-12)


def test_normalization():
    assert abs(gme_f(ghz(4)) - 1) < 1e-12
    assert abs(gme_f1(ghz(4)) - 1) < 1e-12
    assert abs(concurrence_fill_3q(ghz(3)) - 1) < 1e-12


def test_w3_fill():
    # sides 8/9: area scales with the square of the side
    assert concurrence_fill_3q(w_state(3)) == pytest.approx((8 / 9) ** 2, abs=1e-12)


def test_fill_of_biseparable_three_qubit_state():
    s = tensor_product(basis_state("0"), ghz(2))
    assert concurrence_fill_3q(s) == 0.0


@given(seeds)
def test_f_matches_oracle(seed):
    s = haar_state(4, seed)
    assert gme_f(s) == pytest.approx(f_oracle(s.amplitudes), abs=1e-10)
    assert gme_f1(s) == pytest.approx(f_oracle(s.amplitudes, squared=False), abs=1e-10)


@given(seeds)
def test_batch_equals_scalar(seed):
    states = [haar_state(4, seed + k) for k in range(3)]
    f, f1 = gme_batch(np.stack([s.amplitudes for s in states]))
    for k, s in enumerate(states):
        assert f[k] == gme_f(s)
        assert f1[k] == gme_f1(s)


@given(seeds, st.permutations(range(4)))
def test_permutation_invariance(seed, perm):
    s = haar_state(4, seed)
    t = permute_qubits(s, perm)
    assert abs(gme_f(s) - gme_f(t)) < 1e-12
    assert abs(gme_f1(s) - gme_f1(t)) < 1e-12


@given(seeds)
def test_local_unitary_invariance(seed):
    rng = np.random.default_rng(seed)
    s = haar_state(4, seed)
    us = [np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))[0] for _ in range(4)]
    t = apply_local_unitaries(s, us)
    assert abs(gme_f(s) - gme_f(t)) < 1e-9
    assert abs(gme_f1(s) - gme_f1(t)) < 1e-9


@given(seeds, st.integers(0, 3))
def test_vanishes_on_one_to_three_products(seed, party):
    chi = haar_state(3, seed)
    s = tensor_product(basis_state("0"), chi)
    perm = [party] + [q for q in range(4) if q != party]
    s = permute_qubits(s, perm)
    assert gme_f(s) == 0.0
    assert gme_f1(s) == 0.0
    assert classify_separability(profile(s)).kind is SeparabilityKind.ONE_TO_THREE


@given(seeds)
def test_vanishes_on_two_to_two_products(seed):
    s = tensor_product(haar_state(2, seed), haar_state(2, seed + 1))
    assert gme_f(s) == 0.0
    assert gme_f1(s) == 0.0


@given(seeds)
def test_positive_on_haar_states(seed):
    s = haar_state(4, seed)
    assert gme_f(s) > 0
    assert gme_f1(s) > 0
    assert classify_separability(profile(s)).kind is SeparabilityKind.GENUINELY_ENTANGLED


def test_separability_classes():
    assert classify_separability(profile(basis_state("0110"))).kind is SeparabilityKind.FULLY_PRODUCT
    bell = classify_separability(profile(build_named("bellxbell")))
    assert bell.kind is SeparabilityKind.TWO_TO_TWO
    assert bell.cuts == ("AB|CD",)


def test_geometric_mean_with_zero_area():
    assert geometric_mean_scaled(np.array([1.0, 0.0, 2.0])) == 0.0
    assert geometric_mean_scaled(np.full(6, math.sqrt(3) / 4)) == pytest.approx(1.0, abs=1e-15)


def test_six_triangles_order():
    tris = six_triangles(profile(build_named("cluster4")))
    assert [t.labels[2] for t in tris] == ["AB|CD"] * 2 + ["AC|BD"] * 2 + ["AD|BC"] * 2
    assert tris[0].labels[:2] == ("A|BCD", "B|ACD")
    assert tris[1].labels[:2] == ("C|ABD", "D|ABC")


def test_report_consistency():
    rep = gme_report(build_named("hs"))
    assert rep.recompute() == pytest.approx((rep.f, rep.f1), abs=1e-15)
    assert GmeReport.from_json(rep.to_json()) == rep
    assert not any(d["squared"] for d in rep.degenerate)
    flat = gme_report(build_named("bellxbell"))
    assert flat.degenerate[0] == {"squared": True, "concurrence": True}


def test_size_errors():
    with pytest.raises(UnsupportedSize):
        gme_f(ghz(3))
    with pytest.raises(UnsupportedSize):
        concurrence_fill_3q(ghz(4))
