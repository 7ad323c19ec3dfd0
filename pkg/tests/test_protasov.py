"""Residue tree search and the per-integer vanishing check."""

import math
import random

import pytest

from cyclotile.cyclo import cyc_divides, euler_phi, expand_indices
from cyclotile.errors import NotInTree, WrongCardinality
from cyclotile.intpoly import mask_polynomial
from cyclotile.phitree import decide_tile_digit_set
from cyclotile.protasov import (
    KenyonReport,
    Vertex,
    default_level_bound,
    fiber,
    kenyon_check,
    level_vertices,
    parse_label,
    protasov_decide,
    tau_index,
    vertex_children,
    vertex_label,
)


def test_tau_index_frozen():
    assert tau_index(3, 1, 6) == 2
    assert tau_index(1, 1, 6) == 6
    assert tau_index(2, 1, 6) == 3
    assert tau_index(4, 1, 6) == 3
    assert tau_index(5, 1, 6) == 6
    assert tau_index(8, 2, 6) == 9  # label "12"
    assert tau_index(1, 2, 4) == 16
    assert tau_index(6, 1, 12) == 2


def test_labels_roundtrip():
    assert vertex_label(Vertex(2, 8), 6) == "12"
    assert parse_label("12", 6) == Vertex(2, 8)
    assert vertex_label(Vertex(1, 3), 6) == "3"
    assert vertex_label(Vertex(2, 1), 4) == "01"
    assert vertex_label(Vertex(2, 13), 12) == "1.1"
    assert parse_label("1.1", 12) == Vertex(2, 13)
    rng = random.Random(11)
    for b in (4, 6, 12):
        for _ in range(50):
            level = rng.randrange(1, 4)
            value = rng.randrange(1, b**level)
            if value % b == 0:
                continue
            v = Vertex(level, value)
            assert parse_label(vertex_label(v, b), b) == v


def test_labels_reject_bad_vertices():
    with pytest.raises(NotInTree):
        vertex_label(Vertex(1, 6), 6)  # would be the zero residue digit
    with pytest.raises(NotInTree):
        vertex_label(Vertex(2, 40), 6)  # out of range
    with pytest.raises(NotInTree):
        parse_label("10", 6)  # trailing zero digit
    with pytest.raises(NotInTree):
        parse_label("7", 6)


def test_level_vertices():
    assert [v.value for v in level_vertices(6, 1)] == [1, 2, 3, 4, 5]
    level2 = level_vertices(6, 2)
    assert len(level2) == 30  # 36 residues minus the 6 ending in zero
    assert all(v.value % 6 != 0 for v in level2)


def test_vertex_children():
    v = Vertex(1, 3)
    kids = vertex_children(v, 6)
    assert [c.value for c in kids] == [3, 9, 15, 21, 27, 33]
    assert all(c.level == 2 for c in kids)


def test_children_indices_match_expansion():
    # The index set downstairs is exactly the expansion of the index upstairs.
    for b in (4, 6, 10, 12):
        for level in (1, 2):
            for v in level_vertices(b, level):
                t = tau_index(v.value, v.level, b)
                got = {
                    tau_index(c.value, c.level, b) for c in vertex_children(v, b)
                }
                assert got == expand_indices(t, b)


def test_fiber_sizes_are_totients():
    for b in (4, 6, 9, 12):
        for level in (1, 2, 3):
            groups: dict[int, int] = {}
            for v in level_vertices(b, level):
                t = tau_index(v.value, v.level, b)
                groups[t] = groups.get(t, 0) + 1
            for t, count in groups.items():
                assert count == euler_phi(t)
                members = fiber(b, level, t)
                assert len(members) == count
                assert all(
                    tau_index(v.value, level, b) == t for v in members
                )


def test_fiber_rejects_non_dividing_index():
    with pytest.raises(ValueError):
        fiber(6, 1, 5)


def test_default_level_bound():
    # Past the bound every vertex index has totient above the degree.
    for deg in (1, 5, 9, 100):
        bound = default_level_bound(deg)
        assert 2 ** (bound - 1) > deg


def test_blocking_for_b4_tile():
    result = protasov_decide(4, [0, 1, 8, 9])
    assert result.status == "blocking"
    assert result.is_tile
    labels = result.labels()
    assert labels == ("2", "01", "03", "11", "13", "21", "23", "31", "33")
    taus = {tau_index(v.value, v.level, 4) for v in result.blocking}
    assert taus == {2, 16}
    mask = mask_polynomial([0, 1, 8, 9])
    assert all(cyc_divides(t, mask) for t in taus)


def test_absent_for_b4_non_tile():
    result = protasov_decide(4, [0, 1, 4, 5])
    assert result.status == "absent"
    assert result.blocking is None
    assert not result.is_tile


def test_inconclusive_when_depth_starved():
    result = protasov_decide(4, [0, 1, 8, 9], max_level=1)
    assert result.status == "inconclusive"
    assert result.blocking is None


def test_full_residue_digits_block_at_level_one():
    for b in (2, 3, 4, 6, 12):
        result = protasov_decide(b, range(b))
        assert result.status == "blocking"
        assert all(v.level == 1 for v in result.blocking)
        assert len(result.blocking) == b - 1


def test_cardinality_enforced():
    with pytest.raises(WrongCardinality):
        protasov_decide(4, [0, 1, 2])
    with pytest.raises(WrongCardinality):
        kenyon_check(4, [0, 1, 2])


def test_blocking_closed_under_fibers():
    result = protasov_decide(6, [0, 1, 2, 3, 4, 5])
    members = set(result.blocking)
    for v in result.blocking:
        t = tau_index(v.value, v.level, 6)
        assert set(fiber(6, v.level, t)) <= members


def test_agreement_with_divisor_tree_search():
    rng = random.Random(20240818)
    agreements = 0
    for _ in range(150):
        rest = rng.sample(range(1, 30), 3)
        digits = [0] + rest
        try:
            cert = decide_tile_digit_set(4, digits)
        except Exception:
            continue
        result = protasov_decide(4, digits)
        assert result.status in ("blocking", "absent")
        assert result.is_tile == cert.is_tile
        agreements += 1
    assert agreements >= 100


def test_kenyon_frozen():
    report = kenyon_check(4, [0, 1, 8, 9], m_limit=10)
    assert report.holds
    assert report.failing is None
    assert report.witnesses[1] == 2
    assert report.witnesses[2] == 1
    assert report.witnesses[3] == 2
    assert report.witnesses[8] == 2  # index stalls at one, then reaches 2

    report = kenyon_check(4, [0, 1, 4, 5], m_limit=10)
    assert not report.holds
    assert report.failing == 1
    assert isinstance(report, KenyonReport)


def test_kenyon_agrees_with_decision():
    rng = random.Random(99)
    for _ in range(60):
        rest = rng.sample(range(1, 25), 3)
        digits = [0] + rest
        try:
            cert = decide_tile_digit_set(4, digits)
        except Exception:
            continue
        report = kenyon_check(4, digits, m_limit=60)
        if cert.is_tile:
            assert report.holds
        else:
            assert not report.holds


def test_kenyon_handles_base_power_multiples():
    # Integers loaded with base powers stall at index one before growing.
    report = kenyon_check(4, [0, 1, 8, 9], m_limit=64)
    assert report.holds
    assert report.witnesses[64] >= 3
