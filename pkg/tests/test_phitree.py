"""Tree structure, blocking search, kernels, and certificates."""

import json
import random

import pytest

from cyclotile.cyclo import cyclotomic, cyclotomic_product, euler_phi
from cyclotile.errors import (
    CertificateError,
    InvalidBlocking,
    InvalidDigitSet,
    NormalizationRequired,
    NotInTree,
    WrongCardinality,
)
from cyclotile.intpoly import IntPoly, mask_polynomial
from cyclotile.phitree import (
    Blocking,
    blocking_search,
    certificate_from_json,
    certificate_to_json,
    check_p1,
    children,
    decide_tile_digit_set,
    enumerate_blockings,
    enumerate_dividing_blockings,
    is_blocking,
    kernel_polynomial,
    pk_order,
    refine_blocking,
    root_indices,
    search_dot,
)


def test_root_indices():
    assert root_indices(4) == (2, 4)
    assert root_indices(6) == (2, 3, 6)
    assert root_indices(12) == (2, 3, 4, 6, 12)
    with pytest.raises(ValueError):
        root_indices(1)


def test_children_frozen():
    assert children(2, 4) == (8,)
    assert children(4, 4) == (16,)
    assert children(8, 4) == (32,)
    assert children(2, 6) == (4, 12)
    assert children(3, 6) == (9, 18)
    assert children(6, 6) == (36,)
    assert children(4, 12) == (16, 48)
    assert children(3, 12) == (9, 18, 36)
    assert children(6, 12) == (72,)


def test_children_rejects_foreign_indices():
    with pytest.raises(NotInTree):
        children(5, 6)
    with pytest.raises(NotInTree):
        children(3, 4)


def test_decide_tile_b4():
    cert = decide_tile_digit_set(4, [0, 1, 8, 9])
    assert cert.is_tile
    assert cert.verdict == "tile"
    assert cert.blocking == (2, 16)
    assert cert.order == 1
    assert cert.report.prime_powers == (2, 16)
    assert cert.report.t1
    assert cert.report.structure.passed
    assert cert.report.structure.exponents == {2: (1, 4)}
    assert cert.kernel() == mask_polynomial([0, 1, 8, 9])


def test_decide_not_tile_b4():
    cert = decide_tile_digit_set(4, [0, 1, 4, 5])
    assert not cert.is_tile
    assert cert.blocking is None
    assert cert.order is None
    assert cert.kernel() is None
    assert cert.report.prime_powers == (2, 8)
    assert not cert.report.structure.passed


def test_decide_full_residue_digits():
    for b in (2, 3, 4, 6, 10, 12):
        cert = decide_tile_digit_set(b, range(b))
        assert cert.is_tile
        assert cert.blocking == root_indices(b)
        assert cert.order == 1


def test_decide_rejects_bad_digit_sets():
    with pytest.raises(WrongCardinality):
        decide_tile_digit_set(4, [0, 1, 2])
    with pytest.raises(NormalizationRequired):
        decide_tile_digit_set(4, [1, 2, 3, 4])
    with pytest.raises(NormalizationRequired):
        decide_tile_digit_set(4, [0, 2, 4, 6])
    with pytest.raises(InvalidDigitSet):
        decide_tile_digit_set(4, [0, 1, 1, 2])
    with pytest.raises(InvalidDigitSet):
        decide_tile_digit_set(4, [0, -1, 2, 3])


def test_first_hit_blocking_is_a_valid_blocking():
    rng = random.Random(20240817)
    tiles = 0
    for _ in range(200):
        rest = rng.sample(range(1, 25), 3)
        digits = [0] + rest
        try:
            cert = decide_tile_digit_set(4, digits)
        except NormalizationRequired:
            continue
        if not cert.is_tile:
            assert cert.order is None or pk_order(4, digits) is None
            continue
        tiles += 1
        assert is_blocking(4, cert.blocking)
        blk = Blocking.checked(4, cert.blocking)
        assert blk.divides(mask_polynomial(digits))
        assert cert.order is not None and cert.order >= 1
    assert tiles >= 10


def test_kernel_polynomial_identity():
    # (1 + x)(1 + x**8) is itself a mask: the kernel certificate is literal.
    assert kernel_polynomial(4, [2, 16]) == mask_polynomial([0, 1, 8, 9])
    assert kernel_polynomial(4, [2, 4]) == mask_polynomial([0, 1, 2, 3])


def test_is_blocking_frozen_cases():
    assert is_blocking(4, [2, 4])
    assert is_blocking(4, [2, 16])
    assert is_blocking(4, [4, 8])
    assert is_blocking(6, [2, 3, 6])
    assert not is_blocking(4, [2, 4, 16])  # 16 sits below 4
    assert not is_blocking(4, [2, 8])  # 8 sits below 2
    assert not is_blocking(4, [4])  # root-2 path escapes
    assert not is_blocking(4, [2])  # root-4 path escapes
    assert not is_blocking(6, [2, 3])
    assert not is_blocking(4, [])
    assert not is_blocking(4, [3])  # not a tree node


def test_blocking_checked_reports_reasons():
    with pytest.raises(InvalidBlocking) as info:
        Blocking.checked(4, [2, 4, 16])
    assert "below" in str(info.value)
    with pytest.raises(InvalidBlocking) as info:
        Blocking.checked(4, [2])
    assert "escapes" in str(info.value)
    with pytest.raises(InvalidBlocking):
        Blocking.checked(4, [3, 4])


def test_refine_blocking():
    blk = Blocking.checked(6, [2, 3, 6])
    refined = refine_blocking(blk, 3)
    assert refined.indices == (2, 6, 9, 18)
    assert is_blocking(6, refined.indices)
    with pytest.raises(InvalidBlocking):
        refine_blocking(blk, 4)


def test_refinement_keeps_blockings_valid():
    rng = random.Random(71)
    for b in (4, 6, 12):
        blk = Blocking(b, root_indices(b))
        for _ in range(5):
            d = rng.choice(blk.indices)
            blk = refine_blocking(blk, d)
            assert is_blocking(b, blk.indices)


def test_refinement_kernel_identity():
    # Replacing d by its children multiplies the kernel by the factors of
    # the d-th cyclotomic in x**b and divides out the d-th cyclotomic.
    rng = random.Random(72)
    for b in (4, 6, 12):
        blk = Blocking(b, root_indices(b))
        for _ in range(4):
            d = rng.choice(blk.indices)
            refined = refine_blocking(blk, d)
            lhs = refined.kernel() * cyclotomic(d)
            rhs = blk.kernel() * cyclotomic_product(children(d, b))
            assert lhs == rhs
            blk = refined


def test_kernel_value_at_one_is_base():
    rng = random.Random(73)
    for b in (4, 6, 12):
        blk = Blocking(b, root_indices(b))
        for _ in range(5):
            assert blk.kernel().at_one() == b
            blk = refine_blocking(blk, rng.choice(blk.indices))


def test_enumerate_blockings_frozen():
    assert [blk.indices for blk in enumerate_blockings(4, 9)] == [
        (2, 4),
        (4, 8),
        (2, 16),
    ]
    assert [blk.indices for blk in enumerate_blockings(4, 3)] == [(2, 4)]
    assert [blk.indices for blk in enumerate_blockings(6, 5)] == [(2, 3, 6)]
    assert [blk.indices for blk in enumerate_blockings(2, 8)] == [
        (2,),
        (4,),
        (8,),
        (16,),
    ]


def test_enumerate_blockings_properties():
    for b in (4, 6, 12):
        found = enumerate_blockings(b, 40)
        assert len({blk.indices for blk in found}) == len(found)
        for blk in found:
            assert is_blocking(b, blk.indices)
            assert blk.kernel_degree <= 40
            assert blk.kernel().degree == blk.kernel_degree


def test_enumerate_dividing_blockings():
    found = enumerate_dividing_blockings(4, [0, 1, 8, 9])
    assert [blk.indices for blk in found] == [(2, 16)]
    mask = mask_polynomial([0, 1, 8, 9])
    assert all(blk.divides(mask) for blk in found)
    assert [blk.indices for blk in enumerate_dividing_blockings(4, range(4))] == [(2, 4)]
    assert enumerate_dividing_blockings(4, [0, 1, 4, 5]) == []


def test_check_p1():
    report = check_p1(4, [0, 1, 8, 9])
    assert report.holds
    assert report.witnesses == {2: 0, 4: 1}
    assert report.failing is None

    report = check_p1(4, [0, 1, 4, 5])
    assert not report.holds
    assert report.failing == 4
    assert report.witnesses == {2: 0}


def test_pk_order_frozen():
    assert pk_order(4, [0, 1, 8, 9]) == 1
    assert pk_order(4, [0, 1, 4, 5]) is None
    for b in (2, 3, 4, 6, 12):
        assert pk_order(b, range(b)) == 1


def test_blocking_search_on_plain_polynomials():
    got, _, _ = blocking_search(mask_polynomial([0, 1, 2, 3]), 2)
    assert got == frozenset((2,))
    got, _, _ = blocking_search(IntPoly.one(), 2)
    assert got is None
    with pytest.raises(ValueError):
        blocking_search(IntPoly.zero(), 2)


def test_certificate_json_roundtrip():
    cert = decide_tile_digit_set(4, [0, 1, 8, 9])
    text = certificate_to_json(cert, indent=2)
    payload = json.loads(text)
    assert list(payload)[:14] == [
        "schema",
        "base",
        "digits",
        "verdict",
        "blocking",
        "kernel",
        "pk_order",
        "prime_power_spectrum",
        "t1",
        "t2",
        "thm42",
        "thm42_pass",
        "thm42_violation",
        "general_spectrum",
    ]
    assert payload["schema"] == "cyclotile.certificate/1"
    assert payload["blocking"] == [2, 16]
    assert payload["kernel"] == [2, 16]
    assert payload["pk_order"] == 1
    assert payload["thm42"] == {"2": [1, 4]}
    assert payload["thm42_pass"] is True

    back = certificate_from_json(text)
    assert back.base == cert.base
    assert back.digits == cert.digits
    assert back.verdict == cert.verdict
    assert back.blocking == cert.blocking
    assert back.order == cert.order


def test_certificate_json_not_tile():
    cert = decide_tile_digit_set(4, [0, 1, 4, 5])
    payload = json.loads(certificate_to_json(cert))
    assert payload["verdict"] == "not-tile"
    assert payload["blocking"] is None
    assert payload["pk_order"] is None
    back = certificate_from_json(certificate_to_json(cert))
    assert not back.is_tile


def test_certificate_tampering_detected():
    cert = decide_tile_digit_set(4, [0, 1, 8, 9])
    payload = json.loads(certificate_to_json(cert))

    broken = dict(payload)
    broken["blocking"] = [2, 4]  # valid blocking, wrong kernel
    with pytest.raises(CertificateError):
        certificate_from_json(json.dumps(broken))

    broken = dict(payload)
    broken["blocking"] = [2, 4, 16]  # not a blocking at all
    with pytest.raises(CertificateError):
        certificate_from_json(json.dumps(broken))

    broken = dict(payload)
    broken["blocking"] = None
    with pytest.raises(CertificateError):
        certificate_from_json(json.dumps(broken))

    broken = dict(payload)
    broken["schema"] = "cyclotile.certificate/0"
    with pytest.raises(CertificateError):
        certificate_from_json(json.dumps(broken))

    with pytest.raises(CertificateError):
        certificate_from_json("not json at all")

    # verify=False trusts the payload
    broken = dict(payload)
    broken["blocking"] = [2, 4]
    got = certificate_from_json(json.dumps(broken), verify=False)
    assert got.blocking == (2, 4)


def test_search_dot_rendering():
    cert = decide_tile_digit_set(4, [0, 1, 8, 9])
    dot = search_dot(cert)
    assert dot.startswith("digraph")
    assert "doublecircle" in dot
    assert '"4" -> "16"' in dot
    cert = decide_tile_digit_set(4, [0, 1, 4, 5])
    dot = search_dot(cert)
    assert "octagon" in dot and "dashed" in dot


def test_search_stats_populated():
    cert = decide_tile_digit_set(4, [0, 1, 8, 9])
    assert cert.stats.nodes >= 3
    assert cert.stats.divisions >= 3
    assert cert.stats.max_depth >= 1


def test_totients_grow_along_edges():
    # Justifies the pruning rule: totients at least double on every edge.
    for b in (4, 6, 10, 12):
        frontier = set(root_indices(b))
        for _ in range(3):
            nxt = set()
            for e in frontier:
                for c in children(e, b):
                    assert c % e == 0 and c >= 2 * e
                    assert euler_phi(c) >= 2 * euler_phi(e)
                    nxt.add(c)
            frontier = nxt
