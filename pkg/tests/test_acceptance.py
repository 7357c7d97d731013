"""Acceptance suite: one test per criterion, each printing a PASS line.

Every context is symbolic unless stated; zero tolerance means exact
equality in the coefficient field.
"""

import time

import pytest

from tlk import monoid
from tlk.coxeter import index_orbits, parse_sigma_spec, parse_type_spec
from tlk.lkrep import (
    build_lk_context,
    family_residuals,
    rank_one_power_check,
    verify_braid_relations,
    verify_equivariance,
)
from tlk.rootsys import census
from tlk.scalars import d, dcheck, f
from tlk.twisted import (
    annihilator,
    build_context,
    burnside_certificate,
    coupling_coefficient,
    equivalence_discriminant,
    expected_block,
    spare_annihilator_report,
    spectrum,
    verify_blocks,
)

CONTEXTS = [
    ("A3", "order2"),
    ("A5", "order2"),
    ("A7", "order2"),
    ("D4", "order2"),
    ("D5", "order2"),
    ("D6", "order2"),
    ("E6", "full"),
    ("A2", "order2"),
    ("A4", "order2"),
    ("A6", "order2"),
    ("A8", "order2"),
    ("D4", "order3"),
]

EXPECTED_CENSUS = {
    ("A3", "order2"): {"A": {"A1": 1, "A2": 1, "A3": 1}, "B": {"B1": 1, "B4": 1}},
    ("A5", "order2"): {
        "A": {"A1": 1, "A2": 4, "A3": 2},
        "B": {"B1": 1, "B2": 1, "B3": 2, "B4": 1},
    },
    ("A7", "order2"): {
        "A": {"A1": 1, "A2": 9, "A3": 3},
        "B": {"B1": 1, "B2": 4, "B3": 4, "B4": 1},
    },
    ("D4", "order2"): {
        "A": {"A1": 1, "A2": 2, "A3": 3},
        "B": {"B1": 1, "B2": 2, "B4": 2},
    },
    ("D5", "order2"): {
        "A": {"A1": 1, "A2": 5, "A3": 5},
        "B": {"B1": 1, "B2": 6, "B4": 3},
    },
    ("D6", "order2"): {
        "A": {"A1": 1, "A2": 10, "A3": 7},
        "B": {"B1": 1, "B2": 12, "B4": 4},
    },
    ("E6", "full"): {
        "A": {"A1": 1, "A2": 9, "A3": 7},
        "B": {"B1": 1, "B2": 6, "B3": 4, "B4": 3},
    },
    ("A2", "order2"): {"D": {"D1": 1}},
    ("A4", "order2"): {
        "B": {"B1": 1, "B3": 1, "B4": 1},
        "D": {"D1": 1, "D2": 1, "D3": 1},
    },
    ("A6", "order2"): {
        "B": {"B1": 1, "B2": 2, "B3": 3, "B4": 1},
        "D": {"D1": 1, "D2": 4, "D3": 2},
    },
    ("A8", "order2"): {
        "B": {"B1": 1, "B2": 6, "B3": 5, "B4": 1},
        "D": {"D1": 1, "D2": 9, "D3": 3},
    },
    ("D4", "order3"): {
        "A": {"A1": 1, "A2": 1, "A3": 2},
        "C": {"C1": 1, "C2": 1, "C5": 1},
    },
}

STAR_F3 = {"a": 1, "b": 1, "d": 2, "f": 3}


def _ok(criterion, text):
    print(f"ACCEPTANCE {criterion}: PASS ({text})")


def test_criterion_1_census_reproduction():
    start = time.monotonic()
    for spec, sig in CONTEXTS:
        m = parse_type_spec(spec)
        s = parse_sigma_spec(m, sig)
        for J in index_orbits(m, s):
            got = census(m, s, J)
            assert got == EXPECTED_CENSUS[(spec, sig)][J.orbit_type], (spec, sig, J)
    elapsed = time.monotonic() - start
    assert elapsed < 10.0, f"census suite took {elapsed:.1f}s"
    _ok(1, f"12 contexts reproduced in {elapsed:.2f}s")


def test_criterion_2_block_fidelity():
    checked = 0
    for spec, sig in CONTEXTS:
        ctx = build_context(spec, sig)
        for J in ctx.quotient.orbits:
            report = verify_blocks(ctx, J)
            assert report["off_block_zero"], (spec, J.members)
            for block in report["blocks"]:
                assert block["matches_template"], (spec, J.members, block["tag"])
                assert block["charpoly_ok"], (spec, J.members, block["tag"])
                checked += 1
    _ok(2, f"{checked} blocks matched symbolically")


def test_criterion_3_annihilation():
    checked = 0
    for spec, sig in CONTEXTS:
        ctx = build_context(spec, sig)
        for J in ctx.quotient.orbits:
            _, report = annihilator(ctx, J)
            assert report["annihilates"], (spec, J.members)
            assert report["image_in_span_ok"], (spec, J.members)
            for fact in spare_annihilator_report(ctx, J):
                assert fact["annihilates"], (spec, J.members, fact)
            checked += 1
    # the configurations absent from these censuses still satisfy the
    # smaller-polynomial annihilation facts on their reference matrices
    for big, small in (("B5", "B4"), ("C6", "C5"), ("D5", "D4")):
        from tlk.lkrep import poly_at_matrix

        matrix, _ = expected_block(big)
        _, chi = expected_block(small)
        assert poly_at_matrix(chi, matrix).is_zero()
    from tlk.lkrep import poly_at_matrix
    from tlk.twisted import c4_cubic

    c4, _ = expected_block("C4")
    assert poly_at_matrix(c4_cubic(), c4).is_zero()
    _ok(3, f"{checked} generators annihilated exactly")


def test_criterion_4_decomposition():
    from tlk.lkrep import outer

    checked = 0
    for spec, sig in CONTEXTS:
        ctx = build_context(spec, sig)
        for J in ctx.quotient.orbits:
            gen = ctx.gen(J)
            expected = gen.phi + outer(gen.theta_pos, gen.form_row, gen.phi.labels)
            if gen.second_form_row is not None:
                assert J.orbit_type == "D"
                expected = expected + outer(
                    gen.theta_prime_pos, gen.second_form_row, gen.phi.labels
                )
            assert expected == gen.psi, (spec, J.members)
            checked += 1
    _ok(4, f"{checked} generators split exactly")


def test_criterion_5_coupling_coefficients():
    contexts = [
        ("A5", "order2"),
        ("D4", "order2"),
        ("A7", "order2"),
        ("D5", "order2"),
        ("E6", "full"),
        ("D4", "order3"),
    ]
    checked = 0
    for spec, sig in contexts:
        ctx = build_context(spec, sig)
        for J in ctx.quotient.orbits:
            for K in ctx.quotient.orbits:
                if J.key == K.key:
                    continue
                rep = coupling_coefficient(ctx, J, K)
                if rep["m"] == 2:
                    assert rep["value"] == 0, (spec, J.key, K.key)
                else:
                    assert rep["matches"] is True, (spec, J.key, K.key, rep)
                checked += 1
    _ok(5, f"{checked} ordered pairs matched the closed forms")


def test_criterion_6_spectra():
    expected_e6 = {d: 16, dcheck: 7, f: 1}
    ctx = build_context("E6", "full")
    assert spectrum(ctx, ctx.quotient.orbit_by_key("2"), validate=True) == expected_e6
    checked = 0
    for spec, sig in CONTEXTS:
        ctx = build_context(spec, sig)
        for J in ctx.quotient.orbits:
            if J.orbit_type not in ("A", "B"):
                continue
            table = spectrum(ctx, J, validate=True)
            assert sum(table.values()) == ctx.dimension
            checked += 1
    _ok(6, f"{checked} eigenvalue tables validated by annihilation and rank")


def test_criterion_7_burnside_certificates():
    results = {}
    for spec, sig, expected in (
        ("A3", "full", 16),
        ("D4", "order3", 36),
        ("A5", "order2", 81),
    ):
        r = burnside_certificate(build_context(spec, sig, STAR_F3))
        assert r["algebra_dimension"] == expected and r["irreducible"], (spec, r)
        results[spec] = r["algebra_dimension"]
    r = burnside_certificate(build_context("A2", "order2", STAR_F3))
    assert r["algebra_dimension"] == 1 and not r["irreducible"]
    results["A2"] = 1
    _ok(7, f"dimensions {results}")


@pytest.mark.heavy
def test_criterion_7_heavy_f4():
    start = time.monotonic()
    r = burnside_certificate(build_context("E6", "full", STAR_F3), max_products=128)
    elapsed = time.monotonic() - start
    assert r["algebra_dimension"] == 576 and r["irreducible"]
    assert elapsed < 600.0
    _ok(7, f"F4 heavy: 576/576 in {elapsed:.1f}s")


def test_criterion_8_faithfulness_spotchecks():
    for spec, sig, max_len in (
        ("A3", "full", 6),
        ("D4", "order3", 6),
        ("A5", "order2", 4),
    ):
        ctx = build_context(spec, sig)
        assert not ctx.spec.values  # symbolic field, f indeterminate
        report = monoid.faithfulness_spotcheck(ctx, max_len)
        assert report["collisions"] == [], (spec, report["collisions"])
        assert report["class_image_mismatches"] == [], spec
    _ok(8, "zero collisions for B2/G2 at length 6 and B3 at length 4")


def test_criterion_9_non_equivalence():
    pairs = [
        ({"a": 1, "b": 1, "d": 2, "f": 1}, {"a": 1, "b": 1, "d": 3, "f": 1}),
        ({"a": 1, "b": 1, "d": 2, "f": 1}, {"a": 1, "b": 1, "d": 2, "f": 5}),
        ({"a": 1, "b": 2, "d": 3, "f": 1}, {"a": 2, "b": 1, "d": 3, "f": 1}),
    ]
    for left, right in pairs:
        rep = equivalence_discriminant(
            build_context("A5", "order2", left), build_context("A5", "order2", right)
        )
        assert rep["verdict"] == "NotEquivalent", (left, right, rep)
    rep = equivalence_discriminant(
        build_context("A7", "order2"), build_context("D5", "order2")
    )
    assert rep["verdict"] == "NotEquivalent" and rep["reason"] == "spectrum"
    rep = equivalence_discriminant(
        build_context("A5", "order2"), build_context("A6", "order2")
    )
    assert rep["verdict"] == "NotEquivalent" and rep["reason"] == "dimension"
    _ok(9, "3 parameter pairs, A7-vs-D5, and the 9-vs-12 dimension split")


def test_criterion_10_property_suites():
    for spec, sig in (
        ("A3", "full"),
        ("A5", "order2"),
        ("D4", "full"),
        ("E6", "full"),
        ("A2", "full"),
        ("A4", "full"),
    ):
        m = parse_type_spec(spec)
        lk = build_lk_context(m)
        assert all(not r for r in family_residuals(lk.family)), spec
        assert all(r["pass"] for r in verify_braid_relations(lk)), spec
        sigma = parse_sigma_spec(m, sig)
        assert all(r["pass"] for r in verify_equivariance(lk, sigma)), spec
        assert lk.family.sigma_symmetric(sigma), spec
    assert rank_one_power_check(seed=0, trials=4, size=4, max_power=4)
    _ok(10, "family residuals, braid, equivariance, power lemma")
