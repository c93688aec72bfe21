import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from entanglemetry.bipartition import (
    Bipartition,
    ConcurrenceProfile,
    CutKind,
    concurrence,
    enumerate_bipartitions,
    parse_cut,
    profile,
    profile_batch,
    schmidt_weight_from_squared,
    squared_from_schmidt_weight,
)
from entanglemetry.catalog import build_named
from entanglemetry.errors import DomainError, MalformedInput, UnsupportedSize
from entanglemetry.state import basis_state, from_amplitudes
from oracles import CUT_ORDER, c2_eig, c2_row, haar_state

seeds = st.integers(0, 2**32 - 1)


def test_enumeration_order_and_labels():
    labels = [b.label for b in enumerate_bipartitions(4)]
    assert labels == ["A|BCD", "B|ACD", "C|ABD", "D|ABC", "AB|CD", "AC|BD", "AD|BC"]
    assert [b.label for b in enumerate_bipartitions(3)] == ["A|BC", "B|AC", "C|AB"]
    assert len(enumerate_bipartitions(5)) == 15


def test_canonical_representative():
    assert Bipartition(4, 0b1110) == Bipartition(4, 0b0001)
    assert Bipartition(4, 0b1100).label == "AB|CD"
    assert parse_cut("CD|AB") == parse_cut("AB|CD")
    assert parse_cut("BCD|A").kind is CutKind.ONE_TO_REST
    assert parse_cut("AD|BC").kind is CutKind.TWO_TO_TWO


def test_parse_cut_errors():
    for bad in ["AB", "AB|C", "AA|CD", "|ABCD", "AB|CX"]:
        with pytest.raises(MalformedInput):
            parse_cut(bad)


def test_relabel():
    cut = parse_cut("AB|CD")
    assert cut.relabel([0, 2, 1, 3]).label == "AC|BD"


@pytest.mark.parametrize(
    "name, expected",
    [
        ("w4", [0.75] * 4 + [1.0] * 3),
        ("hs", [1.0] * 4 + [4 / 3] * 3),
        ("cluster4", [1.0] * 4 + [1.0, 1.5, 1.5]),
        ("ghz4", [1.0] * 7),
        ("bellxbell", [1.0] * 4 + [0.0, 1.5, 1.5]),
    ],
)
def test_closed_form_profiles(name, expected):
    psi = build_named(name).amplitudes
    oracle = c2_row(psi)
    got = [profile(build_named(name)).c2(b) for b in enumerate_bipartitions(4)]
    assert np.allclose(oracle, expected, atol=1e-12)
    assert np.allclose(got, expected, atol=1e-12)


@given(seeds)
def test_profile_matches_eigen_oracle(seed):
    s = haar_state(4, seed)
    row = profile_batch(s.amplitudes[None], 4)[0]
    assert np.allclose(row, c2_row(s.amplitudes), atol=1e-12)


@given(seeds, st.integers(1, 2**32 - 1))
def test_near_product_refinement(seed, scale_seed):
    # |0> (x) chi with a tiny admixture: C^2 of A|BCD is far below the
    # purity formula's rounding floor but the SVD path keeps relative accuracy
    rng = np.random.default_rng(scale_seed)
    eps = 10 ** rng.uniform(-7, -5)
    chi = haar_state(3, seed).amplitudes
    other = haar_state(3, seed + 1).amplitudes
    psi = np.concatenate([chi, eps * other])
    psi /= np.linalg.norm(psi)
    s = from_amplitudes(4, psi)
    c2 = profile(s).c2("A|BCD")
    # exact: 4 det(rho_A) for rho_A = [[1-p, x], [x*, p]] / norm
    rho = np.array([[1, eps * np.vdot(other, chi)], [eps * np.vdot(chi, other), eps**2]]) / (1 + eps**2)
    exact = 4 * np.linalg.det(rho).real
    assert c2 == pytest.approx(exact, rel=1e-6)


def test_product_state_is_exactly_zero():
    s = basis_state("0101")
    assert all(v == 0.0 for v in profile_batch(s.amplitudes[None], 4)[0])


def test_concurrence_of_bell():
    bell = from_amplitudes(2, [1, 0, 0, 1])
    assert concurrence(bell, Bipartition(2, 1)) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(UnsupportedSize):
        concurrence(bell, Bipartition(3, 1))


def test_schmidt_weight_examples():
    assert schmidt_weight_from_squared(0.75) == pytest.approx(0.5, abs=1e-15)
    assert schmidt_weight_from_squared(1.0) == 1.0
    assert schmidt_weight_from_squared(0.0) == 0.0
    with pytest.raises(DomainError):
        schmidt_weight_from_squared(1.5)
    with pytest.raises(DomainError):
        squared_from_schmidt_weight(-0.1)


@given(st.floats(0, 1))
def test_schmidt_weight_round_trip(y):
    assert squared_from_schmidt_weight(schmidt_weight_from_squared(squared_from_schmidt_weight(y))) == pytest.approx(
        squared_from_schmidt_weight(y), abs=1e-15
    )
    assert schmidt_weight_from_squared(squared_from_schmidt_weight(y)) == pytest.approx(y, abs=1e-7)


def test_profile_lookup_and_dict_round_trip():
    p = profile(build_named("w4"))
    assert p["A|BCD"].y == pytest.approx(0.5)
    assert p["BCD|A"] == p["A|BCD"]
    assert p.c("AB|CD") == pytest.approx(1.0)
    q = ConcurrenceProfile.from_dict(4, p.as_dict())
    assert q.as_dict() == p.as_dict()


def test_profile_sizes():
    assert len(profile(build_named("w3")).cuts()) == 3
    with pytest.raises(UnsupportedSize):
        profile(basis_state("00000"))


def test_three_qubit_w_values():
    p = profile(build_named("w3"))
    for cut in p.cuts():
        assert p.c2(cut) == pytest.approx(8 / 9, abs=1e-12)
        assert p.c2(cut) == pytest.approx(c2_eig(build_named("w3").amplitudes, 3, [cut.side_a.bit_length() - 1]), abs=1e-12)


def test_cut_order_matches_oracle_order():
    for cut, keep in zip(enumerate_bipartitions(4), CUT_ORDER):
        assert cut.side_a == sum(1 << q for q in keep)
