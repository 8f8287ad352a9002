from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

import naive_oracles as ref
from mgonal import (
    ConformanceRow,
    Density,
    InternalConsistencyError,
    PolygonalForm,
    ResourceCapError,
    ShiftedDiagonalLattice,
    WrongDispatchError,
    classify_universality_pattern,
    conformance_csv,
    density_p_dividing_N,
    h_of_ell,
    jordan_decompose,
    lattice_from_form,
    local_density,
    siegel_count_density,
    stabilization_threshold,
    tau_gauss_sum,
    tau_lemma_value,
    verify_case_bounds,
    yang_density_odd,
    yang_density_two,
)

# ---------------------------------------------------------------------------
# Jordan data


def test_jordan_decompose_splits_exponents_and_units():
    jd = jordan_decompose(3, (1, 1, 1, 3))
    assert jd.exponents == (0, 0, 0, 1)
    assert jd.units == (1, 1, 1, 1)
    jd2 = jordan_decompose(2, (1, 2, 4, 12))
    assert jd2.exponents == (0, 1, 2, 2)
    assert jd2.units == (1, 1, 1, 3)
    assert sorted(jd2.gram()) == sorted((1, 2, 4, 12))


def test_jordan_decompose_orders_by_exponent():
    jd = jordan_decompose(5, (50, 3, 1, 25))
    assert jd.exponents == (0, 0, 2, 2)
    assert jd.units == (3, 1, 2, 1)


def test_jordan_requires_a_prime():
    with pytest.raises(ValueError):
        jordan_decompose(4, (1, 1))


# ---------------------------------------------------------------------------
# gauss sums


def test_tau_lemma_values():
    assert tau_lemma_value(3, 1, 3) == 0
    assert tau_lemma_value(3, 4, 9) == 0
    assert tau_lemma_value(5, 2, 10) == 0
    assert tau_lemma_value(2, 1, 2) == 1
    assert tau_lemma_value(2, 2, 6) == 1
    assert tau_lemma_value(2, 3, 6) == 0
    assert tau_lemma_value(2, 1, 4) == 1
    assert tau_lemma_value(2, 2, 12) == 0
    assert tau_lemma_value(3, 2, 5) is None  # p does not divide N


def test_tau_numeric_matches_the_lemma_values():
    cases = {(3, 3): (1, 2), (5, 5): (1, 2, 3, 4), (2, 2): (1,), (2, 4): (1, 3)}
    for (p, N), cs in cases.items():
        for t in (1, 2, 3):
            expected = tau_lemma_value(p, t, N)
            for alpha in range(1, 3 * p):
                if alpha % p == 0:
                    continue
                for c in cs:
                    err = abs(tau_gauss_sum(p, t, alpha, N, c) - expected)
                    assert err < 1e-9


def test_tau_input_validation():
    with pytest.raises(ValueError):
        tau_gauss_sum(3, 0, 1, 3, 1)
    with pytest.raises(ValueError):
        tau_gauss_sum(3, 1, 6, 3, 1)  # alpha not a unit
    with pytest.raises(ValueError):
        tau_gauss_sum(2, 1, 1, 4, 2)  # c shares a factor with N
    with pytest.raises(ResourceCapError):
        tau_gauss_sum(2, 19, 1, 2, 1)


# ---------------------------------------------------------------------------
# closed forms on the conductor


def test_closed_form_density_table():
    assert density_p_dividing_N(3, 3).value == Fraction(1, 3)
    assert density_p_dividing_N(3, 45).value == Fraction(1, 9)
    assert density_p_dividing_N(5, 10).value == Fraction(1, 5)
    assert density_p_dividing_N(2, 2).value == Fraction(2)
    assert density_p_dividing_N(2, 6).value == Fraction(2)
    assert density_p_dividing_N(2, 4).value == Fraction(1, 2)
    assert density_p_dividing_N(2, 24).value == Fraction(1, 4)
    d = density_p_dividing_N(7, 49)
    assert d == Density(Fraction(1, 49), "closed_form")
    assert d.t is None and d.stabilized is None


def test_closed_form_density_requires_p_dividing_N():
    with pytest.raises(WrongDispatchError):
        density_p_dividing_N(3, 5)
    with pytest.raises(ValueError):
        density_p_dividing_N(4, 8)


# ---------------------------------------------------------------------------
# explicit formulas, frozen hand-checked values


def test_six_squares_two_adic_densities():
    jd = jordan_decompose(2, (1,) * 6)
    assert yang_density_two(jd, 1).value == Fraction(3, 4)
    assert yang_density_two(jd, 2).value == Fraction(15, 16)


def test_six_squares_five_adic_density():
    jd = jordan_decompose(5, (1,) * 6)
    d = yang_density_odd(jd, 1)
    assert d.value == Fraction(124, 125)
    assert d.method == "yang_odd"


def test_non_unimodular_three_adic_densities():
    jd = jordan_decompose(3, (1, 1, 1, 3))
    assert yang_density_odd(jd, 1).value == Fraction(2, 3)
    assert yang_density_odd(jd, 3).value == Fraction(10, 9)


def test_yang_input_validation():
    jd4 = jordan_decompose(3, (1, 1, 1, 3))
    with pytest.raises(WrongDispatchError):
        yang_density_odd(jordan_decompose(2, (1, 1, 1, 1)), 1)
    with pytest.raises(WrongDispatchError):
        yang_density_two(jd4, 1)
    with pytest.raises(ValueError):
        yang_density_odd(jd4, 0)
    with pytest.raises(ValueError):
        yang_density_odd(jd4, Fraction(1, 3))  # not a 3-adic integer
    with pytest.raises(ValueError):
        yang_density_odd(jordan_decompose(3, (1, 1, 1)), 1)
    with pytest.raises(ValueError):
        yang_density_two(jordan_decompose(2, (1, 1, 1, 1, 1)), 1)


# ---------------------------------------------------------------------------
# the counting oracle


@pytest.mark.parametrize(
    "p,t,gram,targets",
    [
        (3, 1, (1, 1, 2), (0, 1, 2)),
        (3, 2, (2, 5), (0, 1, 4, Fraction(1, 5))),
        (2, 2, (1, 3), (0, 1, 2, 3)),
        (2, 3, (1, 2, 3, 4), (1, 5, 8)),
        (5, 1, (1, 2, 3), (0, 2, 4)),
    ],
)
def test_oracle_matches_naive_residue_counting(p, t, gram, targets):
    for h in targets:
        fast = siegel_count_density(p, gram, h, t).value
        assert fast == ref.residue_density(p, t, gram, h)


def test_oracle_stabilizes_at_the_threshold():
    gram = (1, 1, 1, 3)
    t = stabilization_threshold(3, gram, 1)
    assert t == 3
    d = siegel_count_density(3, gram, 1, t)
    assert d.method == "oracle"
    assert d.t == t
    assert d.stabilized
    assert d.value == Fraction(2, 3)


def test_stabilization_threshold_formula():
    assert stabilization_threshold(3, (1, 3, 9), 9) == 2 * 3 + 2 + 1
    assert stabilization_threshold(2, (1, 2), 1) == 2 * 2 + 0 + 1
    assert stabilization_threshold(5, (1, 1), Fraction(25, 2)) == 0 + 2 + 1


def test_oracle_input_validation():
    with pytest.raises(WrongDispatchError):
        siegel_count_density(3, (1, 1, 1, 1), 1, 2, N=6)
    with pytest.raises(ValueError):
        siegel_count_density(3, (1, 1), 1, 0)
    with pytest.raises(ValueError):
        siegel_count_density(3, (1, 1), -1, 1)
    with pytest.raises(ValueError):
        siegel_count_density(3, (1, 1), Fraction(1, 3), 1)
    with pytest.raises(ValueError):
        siegel_count_density(3, (), 1, 1)
    with pytest.raises(ResourceCapError):
        siegel_count_density(2, (1, 1), 1, 30)


def test_oracle_accepts_jordan_input():
    jd = jordan_decompose(3, (1, 1, 1, 3))
    direct = siegel_count_density(3, (1, 1, 1, 3), 1, 3)
    via_jd = siegel_count_density(3, jd, 1, 3)
    assert direct.value == via_jd.value


@settings(max_examples=25, deadline=None)
@given(
    st.sampled_from([2, 3]),
    st.lists(st.sampled_from([1, 2, 3, 5, 6, 7, 9, 10]), min_size=4, max_size=4),
    st.sampled_from([1, 2, 3, 4, 6, 8, 9, 12]),
)
def test_yang_formulas_match_the_stabilized_oracle(p, gram, h):
    gram = tuple(gram)
    t = stabilization_threshold(p, gram, h)
    assume(t + 2 <= {2: 12, 3: 8}[p])
    jd = jordan_decompose(p, gram)
    formula = yang_density_two(jd, h) if p == 2 else yang_density_odd(jd, h)
    oracle = siegel_count_density(p, gram, h, t)
    assert oracle.stabilized
    assert formula.value == oracle.value


# ---------------------------------------------------------------------------
# the dispatcher


def test_dispatcher_routes_conductor_primes_to_closed_forms():
    form = PolygonalForm.of(7, 1, 1, 1, 1)
    X = lattice_from_form(form)  # N = 10, c = 3
    h = h_of_ell(form, 5)
    assert local_density(X, h, 2).value == Fraction(2)
    assert local_density(X, h, 5).value == Fraction(1, 5)
    assert local_density(X, h, 2).method == "closed_form"


def test_dispatcher_uses_yang_off_the_conductor_and_survives_the_oracle():
    form = PolygonalForm.of(7, 1, 1, 1, 1)
    X = lattice_from_form(form)
    for ell in (1, 5, 12):
        h = h_of_ell(form, ell)
        for p in (3, 7):
            checked = local_density(X, h, p, check_oracle=True)
            assert checked.method == "yang_odd"
            assert checked.value > 0
    two = local_density(ShiftedDiagonalLattice((1, 1, 1, 1), 0, 1), 8, 2,
                        check_oracle=True)
    assert two.method == "yang_two"


def test_dispatcher_validates_inputs():
    X = lattice_from_form(PolygonalForm.of(7, 1, 1, 1, 1))
    with pytest.raises(ValueError):
        local_density(X, 1, 3)  # h = 1 is not an admissible target here
    with pytest.raises(ValueError):
        local_density(ShiftedDiagonalLattice((2, 2, 4, 4), 0, 1), 8, 3)
    with pytest.raises(ValueError):
        local_density(ShiftedDiagonalLattice((1, 1, 1), 0, 1), 8, 3)  # odd rank
    with pytest.raises(ValueError):
        local_density(X, h_of_ell(PolygonalForm.of(7, 1, 1, 1, 1), 1), 4)


def test_dispatcher_oracle_check_raises_on_injected_disagreement(monkeypatch):
    import mgonal.localdensity as ld

    X = ShiftedDiagonalLattice((1, 1, 1, 1), 0, 1)
    wrong = Density(Fraction(99), "oracle", t=5, stabilized=True)
    monkeypatch.setattr(ld, "siegel_count_density", lambda *a, **k: wrong)
    with pytest.raises(InternalConsistencyError):
        ld.local_density(X, 8, 3, check_oracle=True)


# ---------------------------------------------------------------------------
# classification and case bounds


CLASSIFIED = {
    (3, (1, 1, 1, 1, 1, 9)): "case1",
    (3, (1, 2, 3, 3, 9, 27)): "case2",
    (3, (1, 1, 3, 3, 9, 9)): "case3",
    (5, (1, 1, 2, 5, 5, 5)): "case1",
    (5, (1, 4, 5, 5, 25, 25)): "case2",
    (5, (1, 2, 5, 5, 25, 25)): "case3",
    (2, (1, 3, 5, 4, 8, 16)): "case1",
    (2, (1, 3, 2, 8, 16, 32)): "case2",
    (2, (1, 2, 2, 4, 16, 32)): "case3",
    (2, (1, 2, 4, 8, 16, 64)): "case4",
}


def test_classification_of_known_patterns():
    for (p, gram), label in CLASSIFIED.items():
        assert classify_universality_pattern(jordan_decompose(p, gram)) == label


def test_classification_unclassified_patterns():
    for p, gram in [
        (3, (3, 3, 3, 3, 3, 3)),
        (3, (1, 1, 3, 9, 9, 9)),
        (2, (1, 4, 4, 4, 8, 8)),
    ]:
        assert classify_universality_pattern(jordan_decompose(p, gram)) == "unclassified"


def test_classification_needs_even_rank_at_least_six():
    with pytest.raises(ValueError):
        classify_universality_pattern(jordan_decompose(3, (1, 1, 1, 3)))
    with pytest.raises(ValueError):
        classify_universality_pattern(jordan_decompose(3, (1,) * 7))


def test_case_bounds_pass_on_classified_examples():
    rows = verify_case_bounds(jordan_decompose(3, (1, 1, 1, 1, 1, 9)), list(range(1, 26)))
    assert len(rows) == 25
    assert all(r.method == "case1_bound" for r in rows)
    assert all(r.passed for r in rows)


def test_case_bounds_split_unit_targets_from_divisible_ones():
    rows = verify_case_bounds(jordan_decompose(3, (1, 2, 3, 3, 9, 27)), [1, 2, 3, 9])
    assert [r.method for r in rows] == [
        "case2_unit_bound", "case2_unit_bound", "case2_bound", "case2_bound",
    ]
    # unit targets keep only the boundary term: R1 = -1/p here
    assert rows[0].value == Fraction(-1, 3)
    assert rows[0].reference == Fraction(1, 3)
    assert all(r.passed for r in rows)


def test_case_bounds_two_adic_series_rows():
    rows = verify_case_bounds(jordan_decompose(2, (1, 3, 2, 8, 16, 32)), [1, 2, 3, 8])
    methods = [r.method for r in rows]
    assert "lemma4_tail" in methods
    assert "lemma4_tail_sharpened" in methods  # exponent pattern (0,0,1,3)
    assert "lemma5_middle" in methods
    assert methods.count("two_adic_range") == 4
    assert all(r.passed for r in rows)


def test_case_bounds_reject_unclassified_input():
    with pytest.raises(ValueError):
        verify_case_bounds(jordan_decompose(3, (3, 3, 3, 3, 3, 3)), [1])


# ---------------------------------------------------------------------------
# reporting


def test_conformance_csv_golden():
    rows = [
        ConformanceRow(3, (1, 1), 3, 1, Fraction(1), "not_admissible", None, None, None),
        ConformanceRow(3, (1, 1, 1), 3, 1, Fraction(3), "closed_form",
                       Fraction(1, 3), None, True),
        ConformanceRow(2, (1, 2), None, None, None, "lemma4_tail",
                       Fraction(1, 8), Fraction(1, 4), False),
    ]
    assert conformance_csv(rows) == (
        "p,gram,N,c,h_num,h_den,method,value_num,value_den,oracle_num,oracle_den,pass\n"
        "3,1 1,3,1,1,1,not_admissible,,,,,skipped\n"
        "3,1 1 1,3,1,3,1,closed_form,1,3,,,true\n"
        "2,1 2,,,,,lemma4_tail,1,8,1,4,false\n"
    )
