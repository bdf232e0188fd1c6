from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lieconformal import zoo
from lieconformal.algebra import (ConformalAlgebra, TruncationOverflow,
                                  structurally_equal)
from lieconformal.classify import (BracketAnsatz, ClassificationError,
                                   ClassifiedFamily, Family, GaugeMove,
                                   _Classifier, _flip, _forcing_monomial,
                                   _one_parameter_upper, algebra_table,
                                   apply_gauge, closed_form_bracket,
                                   free_family, inverse_move,
                                   normalize_parameter, proportionality,
                                   pure_partial_names, skew_family,
                                   stage_solve, verify_closed_form,
                                   window_evidence)
from lieconformal.poly import MultiPoly, v

l, d = v("l"), v("d")
b, c = v("b"), v("c")

rationals = st.fractions(min_value=-3, max_value=3, max_denominator=4)


# -- expensive runs shared across the whole module -------------------------

@pytest.fixture(scope="module")
def midpoint():
    return stage_solve(stages="midpoint")


@pytest.fixture(scope="module")
def cascade(midpoint):
    ext = _Classifier._fork(midpoint.ansatz(), 0)
    ext._run_cascade()
    return ext


@pytest.fixture(scope="module")
def full():
    return stage_solve()


# -- slot families ---------------------------------------------------------

class TestSlotFamilies:
    def test_free_family_spans_all_monomials(self):
        fam = free_family("f", 3)
        assert len(fam.names) == 10          # (3+1)(3+2)/2
        degrees = sorted((p.degree_in("l"), p.degree_in("d"))
                         for p in fam.basis)
        assert degrees == sorted((a, t - a) for t in range(4)
                                 for a in range(t + 1))

    def test_skew_family_members_are_flip_symmetric(self):
        fam = skew_family("s", 4)
        val = fam.value()
        assert (_flip(val) - val).is_zero
        # odd powers of 2λ+∂ paired with powers of ∂, total degree <= 4
        assert len(fam.names) == 6

    def test_value_and_build_agree(self):
        fam = free_family("f", 2)
        coords = [Fraction(i, 3) for i in range(len(fam.names))]
        built = fam.build(coords)
        bound = fam.value().substitute(dict(zip(fam.names, coords)))
        assert (built - bound).is_zero

    def test_pure_partial_names_pick_lambda_free_monomials(self):
        fam = free_family("f", 3)
        names = pure_partial_names(fam)
        assert names == ["f_2", "f_5", "f_9"]
        for n in names:
            mono = fam.basis[fam.names.index(n)]
            assert mono.degree_in("l") == 0 and mono.degree_in("d") >= 1


# -- the ansatz table ------------------------------------------------------

class TestBracketAnsatz:
    def test_from_upper_stores_both_orientations(self):
        a = BracketAnsatz.from_upper((-1, 0), {(-1, 0): {-1: l},
                                               (-1, -1): {}, (0, 0): {0: 2 * l + d}})
        assert (a.slot(0, -1, -1) - (l + d)).is_zero

    def test_diagonal_slot_must_be_flip_consistent(self):
        with pytest.raises(ValueError):
            BracketAnsatz.from_upper((0,), {(0, 0): {0: l ** 2}})

    def test_slot_outside_table_is_zero_but_pair_access_raises(self):
        a = BracketAnsatz.from_upper((-1, 0), {(-1, -1): {}, (-1, 0): {-1: l},
                                               (0, 0): {0: 2 * l + d}})
        assert a.slot(0, 0, -1).is_zero
        alg = BracketAnsatz.from_upper((0, 1), {(0, 0): {0: 2 * l + d},
                                                (0, 1): {1: 3 * l + d}}).algebra()
        with pytest.raises(TruncationOverflow):
            alg.structure(1, 1)

    def test_substitute_reaches_every_slot(self):
        a = BracketAnsatz.from_upper((-1, 0, 1, 2), _one_parameter_upper())
        assert a.params == frozenset({"c"})
        a0 = a.substitute({"c": Fraction(0)})
        assert a0.params == frozenset()
        assert a0.slot(-1, 1, -1).is_zero


# -- gauge moves -----------------------------------------------------------

class TestGaugeMoves:
    def test_corrections_must_point_downward(self):
        with pytest.raises(ValueError):
            GaugeMove(1, {1: d})
        with pytest.raises(ValueError):
            GaugeMove(1, {2: d})

    def test_corrections_reject_lambda_variables(self):
        with pytest.raises(ValueError):
            GaugeMove(2, {0: v("l")})

    def test_scale_must_be_exact_and_nonzero(self):
        with pytest.raises(ValueError):
            GaugeMove(1, {}, scale=0)
        with pytest.raises(TypeError):
            GaugeMove(1, {}, scale=0.5)

    def test_describe_mentions_every_part(self):
        s = GaugeMove(2, {0: 3 * d ** 2}, scale=Fraction(1, 2)).describe()
        assert "J(2)" in s and "J(0)" in s and "1/2" in s

    def test_inverse_round_trip_is_identity(self):
        base = zoo.gr_gc1(4)
        mv = GaugeMove(2, {0: d ** 2, 1: Fraction(3, 2) * d}, scale=Fraction(2))
        there = apply_gauge(base, mv)
        back = apply_gauge(there, inverse_move(mv))
        assert structurally_equal(back, base)

    def test_gauge_preserves_axioms(self):
        alg = BracketAnsatz.from_upper(
            (-1, 0, 1, 2), _one_parameter_upper(Fraction(-1))).algebra()
        moved = apply_gauge(alg, GaugeMove(2, {1: d, -1: d ** 3}))
        rep = moved.verify(skip_overflow=True)
        assert rep["failures"] == []

    @given(q0=rationals, q1=rationals, s=rationals.filter(bool))
    @settings(max_examples=15, deadline=None)
    def test_round_trip_property(self, q0, q1, s):
        base = zoo.gr_gc1(3)
        mv = GaugeMove(2, {0: q0 * d ** 2, 1: q1 * d}, scale=s)
        back = apply_gauge(apply_gauge(base, mv), inverse_move(mv))
        assert structurally_equal(back, base)


# -- small exact helpers ---------------------------------------------------

class TestExactHelpers:
    def test_proportionality_finds_the_scalar(self):
        p = Fraction(11, 2) * b * c ** 2 - Fraction(6, 5) * b ** 2
        assert proportionality(-3 * p, p) == Fraction(-3)
        assert proportionality(MultiPoly.zero(), p) == Fraction(0)
        assert proportionality(p, p + b) is None
        assert proportionality(p, MultiPoly.zero()) is None

    def test_forcing_monomial_spots_a_pure_power(self):
        rels = [b ** 2 + b * c, b * c]
        forced = _forcing_monomial(rels, "b")
        assert forced is not None and forced.to_str() in ("b^2", "b*c")
        assert _forcing_monomial([b * c + b ** 2], "b") is None
        assert _forcing_monomial([c ** 2], "b") is None
        assert _forcing_monomial([], "b") is None


# -- the two-parameter midpoint -------------------------------------------

class TestMidpoint:
    def test_parameters_and_relations(self, midpoint):
        assert midpoint.stage == "midpoint"
        assert midpoint.parameters == ("b", "c")
        assert midpoint.relations == {"k": "c^2 - (7/5) b",
                                      "t": "(3/2) b c"}

    def test_level_one_slots(self, midpoint):
        a = midpoint.ansatz()
        assert (a.slot(-1, 1, -1) - c * l ** 2).is_zero
        assert (a.slot(0, 1, 0) - c * l ** 2).is_zero
        assert (a.slot(0, 1, -1) - b * l ** 2 * d).is_zero

    def test_level_two_slots(self, midpoint):
        a = midpoint.ansatz()
        assert (a.slot(-1, 2, 1) - 3 * l).is_zero
        assert (a.slot(-1, 2, 0) - 3 * c * l ** 2).is_zero
        assert (a.slot(0, 2, 1) - 3 * c * l ** 2).is_zero
        assert (a.slot(0, 2, 0) - (c ** 2 - Fraction(7, 5) * b) * l ** 3).is_zero
        assert (a.slot(0, 2, -1)
                - Fraction(3, 2) * b * c * l ** 2 * (l + d) * d).is_zero
        assert (a.slot(-1, 2, -1)
                - (Fraction(-6, 5) * b * l * d ** 2
                   + Fraction(3, 5) * b * l ** 2 * d
                   + (c ** 2 - Fraction(1, 5) * b) * l ** 3)).is_zero

    def test_diagonal_slots(self, midpoint):
        a = midpoint.ansatz()
        assert (a.slot(1, 1, 2) - 2 * (2 * l + d)).is_zero
        assert (a.slot(1, 1, 1) + c * (2 * l * d + d ** 2)).is_zero
        assert (a.slot(1, 1, 0)
                - Fraction(2, 5) * b * (2 * l * d ** 2 + d ** 3)).is_zero
        assert (a.slot(1, 1, -1)
                + b * c * (d ** 4 + 3 * l * d ** 3
                           + 3 * l ** 2 * d ** 2 + 2 * l ** 3 * d)).is_zero

    def test_midpoint_satisfies_all_window_axioms(self, midpoint):
        rep = midpoint.algebra().verify(skip_overflow=True)
        assert rep["failures"] == []
        assert rep["jacobi_checked"] > 0

    def test_flip_orientation_is_stored(self, midpoint):
        a = midpoint.ansatz()
        assert (a.slot(1, 0, 1) - (3 * l + 2 * d)).is_zero
        assert (a.slot(1, 0, -1)
                + (d ** 3 * b + 2 * d ** 2 * l * b + d * l ** 2 * b)).is_zero


# -- the symbolic five-generator window ------------------------------------

class TestCascade:
    def test_no_stage_forces_a_scalar_relation(self, cascade):
        assert [r["stage"] for r in cascade.reports] == [
            "extension: top slots", "extension: middle slots",
            "extension: weight-zero slots", "extension: bottom slots"]
        for rep in cascade.reports:
            assert rep["relations"] == []
            assert rep["kernel_dimension"] == rep["gauge_dimension"]
        assert [r["gauge_dimension"] for r in cascade.reports] == [2, 3, 4, 5]

    def test_solved_slots_of_the_mixed_pair(self, cascade):
        s = cascade.solved
        assert (s[(1, 2, 2)]
                - (Fraction(1, 2) * d * l * c + 2 * l ** 2 * c)).is_zero
        assert (s[(1, 2, 1)]
                - (l ** 3 * c ** 2 - Fraction(9, 10) * d ** 2 * l * b
                   - Fraction(18, 5) * d * l ** 2 * b
                   - Fraction(13, 5) * l ** 3 * b)).is_zero
        assert (s[(1, 2, 0)]
                - (Fraction(9, 10) * d ** 3 * l + Fraction(18, 5) * d ** 2 * l ** 2
                   + Fraction(9, 5) * d * l ** 3
                   + Fraction(6, 5) * l ** 4) * b * c).is_zero
        assert (s[(1, 2, -1)]
                - (-(Fraction(3, 2) * d ** 4 * l + 6 * d ** 3 * l ** 2
                     + Fraction(11, 2) * d ** 2 * l ** 3
                     + Fraction(5, 2) * d * l ** 4) * b * c ** 2
                   + (Fraction(3, 10) * d ** 4 * l
                      + Fraction(6, 5) * d ** 3 * l ** 2
                      + Fraction(4, 5) * d ** 2 * l ** 3
                      + Fraction(1, 5) * d * l ** 4) * b ** 2)).is_zero

    def test_solved_slots_of_the_lowest_action(self, cascade):
        s = cascade.solved
        assert (s[(-1, 3, 1)]
                - (Fraction(-3, 2) * d * l * c + Fraction(9, 2) * l ** 2 * c)).is_zero
        assert (s[(-1, 3, 0)]
                - (Fraction(-3, 2) * d * l ** 2 * c ** 2
                   + Fraction(5, 2) * l ** 3 * c ** 2
                   - Fraction(3, 5) * d ** 2 * l * b
                   + Fraction(6, 5) * d * l ** 2 * b
                   - Fraction(7, 5) * l ** 3 * b)).is_zero
        assert (s[(-1, 3, -1)]
                - (Fraction(-1, 2) * d * l ** 3 * c ** 3
                   + Fraction(1, 2) * l ** 4 * c ** 3
                   - Fraction(9, 10) * d ** 3 * l * b * c
                   - Fraction(9, 10) * d ** 2 * l ** 2 * b * c
                   + Fraction(19, 10) * d * l ** 3 * b * c
                   - Fraction(1, 10) * l ** 4 * b * c)).is_zero

    def test_solved_slots_of_the_weight_one_action(self, cascade):
        s = cascade.solved
        assert (s[(0, 3, 2)] - 4 * l ** 2 * c).is_zero
        assert (s[(0, 3, 1)]
                - (Fraction(-3, 2) * d * l ** 2 * c ** 2
                   + Fraction(5, 2) * l ** 3 * c ** 2
                   - Fraction(9, 10) * d * l ** 2 * b
                   - Fraction(41, 10) * l ** 3 * b)).is_zero
        assert (s[(0, 3, 0)]
                - (Fraction(-1, 2) * d * l ** 3 * c ** 3
                   + Fraction(1, 2) * l ** 4 * c ** 3
                   + 3 * d ** 2 * l ** 2 * b * c
                   + Fraction(14, 5) * d * l ** 3 * b * c
                   - l ** 4 * b * c)).is_zero
        assert (s[(0, 3, -1)]
                - (-(Fraction(15, 4) * d ** 3 * l ** 2
                     + Fraction(7, 2) * d ** 2 * l ** 3
                     + Fraction(5, 4) * d * l ** 4
                     + Fraction(1, 2) * l ** 5) * b * c ** 2
                   + (Fraction(3, 10) * d ** 3 * l ** 2
                      + Fraction(8, 5) * d ** 2 * l ** 3
                      - Fraction(1, 5) * d * l ** 4
                      + Fraction(1, 10) * l ** 5) * b ** 2)).is_zero

    def test_graded_reduction_at_c_zero(self, cascade):
        s = {k: p.substitute({"c": Fraction(0)})
             for k, p in cascade.solved.items()}
        assert s[(1, 2, 2)].is_zero and s[(1, 2, 0)].is_zero
        assert (s[(1, 2, 1)]
                + (Fraction(9, 10) * d ** 2 * l + Fraction(18, 5) * d * l ** 2
                   + Fraction(13, 5) * l ** 3) * b).is_zero

    def test_bound_window_passes_every_axiom(self, cascade):
        rep = cascade.ansatz.algebra().verify(skip_overflow=True)
        assert rep["failures"] == []

    def test_cascade_is_degree_bound_robust(self, midpoint):
        wide = _Classifier._fork(midpoint.ansatz(), 1)
        wide._run_cascade()
        narrow = _Classifier._fork(midpoint.ansatz(), 0)
        narrow._run_cascade()
        for key, val in narrow.solved.items():
            assert (wide.solved[key] - val).is_zero


# -- the full solve: machine finding next to the recorded conclusion -------

class TestFullSolve:
    def test_final_table_is_the_one_parameter_family(self, full):
        assert full.stage == "full"
        assert full.parameters == ("c",)
        expected = BracketAnsatz.from_upper((-1, 0, 1, 2),
                                            _one_parameter_upper())
        got = full.ansatz()
        assert set(got.table) == set(expected.table)
        for pair, val in expected.table.items():
            keys = set(val) | set(got.table[pair])
            for k in keys:
                assert (got.slot(*pair, k) - val.get(k, MultiPoly.zero())).is_zero

    def test_machine_finding_reports_no_forcing(self, full):
        mf = full.machine_finding
        assert mf["parameters"] == ["b", "c"]
        assert "every value" in mf["statement"]
        for rep in mf["stages"]:
            assert rep["relations"] == []
        assert mf["axiom_recheck"]["jacobi_checked"] > 0

    def test_window_evidence_cells_are_consistent(self, full):
        ev = full.machine_finding["window_evidence"]
        assert ev["level"] == 4
        assert len(ev["cells"]) == 4
        for cell in ev["cells"]:
            assert cell["consistent"]
            (win,) = cell["windows"]
            assert win["freedom"] == win["gauge_dimension"] == 20

    def test_recorded_conclusion_is_flagged(self, full):
        rc = full.recorded_conclusion
        assert rc["eliminated"] == {"b": "0"}
        assert len(rc["assumptions"]) == 2
        assert "machine" in rc["deviation"]
        assert full.eliminated["b"].startswith("0 [recorded")

    def test_zero_branch_replay(self, full):
        rep = full.branch_reports[0]
        assert rep["branch"] == "c = 0"
        assert rep["pins"]["pinned"]["b0"] == "0"
        assert rep["pins"]["free"] == ["b2 (b3 rides along)", "b4", "b5"]
        assert rep["machine_route"]["residual_relations"] == []
        assert rep["machine_route"]["bottom_pins"]["b4"] == "3/10*b^2"
        assert rep["machine_route"]["bottom_pins"]["b2"] == "4/5*b^2"
        assert rep["recorded_route"]["forcing"] == "b^2 = 0"
        assert rep["recorded_route"]["conclusion"] == "b = 0"
        assert rep["discrepancy"]["machine"] == "3/10*b^2"

    def test_invertible_branch_replay(self, full):
        rep = full.branch_reports[1]
        assert rep["branch"] == "invertible c"
        assert rep["machine_route"]["residual_relations"] == []
        manufactured = "11/2*b*c^2 - 6/5*b^2"
        assert len(rep["recorded_route"]["frozen_relations"]) >= 1
        for r in rep["recorded_route"]["frozen_relations"]:
            assert r == manufactured
        assert manufactured in rep["discrepancy"]["solved_minus_frozen"]

    def test_report_carries_both_books(self, full):
        out = full.report()
        assert "machine_finding" in out and "recorded_conclusion" in out
        assert out["relations"] == {"k": "c^2 - (7/5) b", "t": "(3/2) b c"}
        assert out["stages"][-1]["stage"].startswith("one-parameter conclusion")

    def test_final_table_passes_every_axiom(self, full):
        rep = full.algebra().verify(skip_overflow=True)
        assert rep["failures"] == []

    def test_coefficient_lookup_inside_and_outside_the_window(self, full):
        assert (full.F(0, 1, 1) - (3 * l + d)).is_zero
        assert (full.F(-1, 1, -1, c=Fraction(2)) - 2 * l ** 2).is_zero
        assert (full.F(3, 4, 7, c=0) - (9 * l + 4 * d)).is_zero
        with pytest.raises(ValueError):
            full.F(3, 4, 7)

    def test_invalid_arguments_rejected(self):
        with pytest.raises(ValueError):
            stage_solve(stages="partial")
        with pytest.raises(ValueError):
            stage_solve(bound_bump=-1)


class TestBoundBump:
    def test_wider_degree_bounds_reach_the_same_table(self, full):
        wide = stage_solve(bound_bump=1, evidence_cells=((0, 1),))
        assert set(wide.table) == set(full.table)
        for pair, val in full.table.items():
            keys = set(val) | set(wide.table[pair])
            for k in keys:
                zero = MultiPoly.zero()
                assert (wide.table[pair].get(k, zero)
                        - val.get(k, zero)).is_zero
        assert wide.recorded_conclusion["eliminated"] == {"b": "0"}


# -- window evidence and its corruption control ----------------------------

class TestWindowEvidence:
    def test_corrupted_table_is_detected(self):
        out = window_evidence(cells=((0, 1),), level=4, corrupt=True)
        (cell,) = out["cells"]
        assert not cell["consistent"]
        assert "detected" in cell

    def test_level_must_be_supported(self):
        with pytest.raises(ValueError):
            window_evidence(level=7)


# -- closed form, verification, normalization ------------------------------

class TestClosedForm:
    def test_graded_point_matches_the_graded_bracket(self):
        for m in range(-1, 5):
            for n in range(-1, 5):
                got = closed_form_bracket(m, n, 0)
                if m + n < -1:
                    assert got == {}
                else:
                    assert list(got) == [m + n]
                    assert (got[m + n]
                            - ((m + n + 2) * l + (m + 1) * d)).is_zero

    def test_general_point_has_full_lower_tail(self):
        got = closed_form_bracket(2, 1, -1)
        assert set(got) == {3, 2, 1}
        assert (got[3] - (5 * l + 3 * d)).is_zero

    def test_skew_symmetry_of_the_general_point(self):
        for m in range(-1, 4):
            for n in range(-1, 4):
                ab = closed_form_bracket(m, n, -1)
                ba = closed_form_bracket(n, m, -1)
                for g in set(ab) | set(ba):
                    p = ab.get(g, MultiPoly.zero())
                    q = ba.get(g, MultiPoly.zero())
                    assert (p + q.substitute({"l": -l - d})).is_zero

    def test_unsupported_parameter_rejected(self):
        with pytest.raises(ValueError):
            closed_form_bracket(1, 1, 2)
        with pytest.raises(ValueError):
            closed_form_bracket(-2, 0, 0)

    def test_verify_closed_form_both_points(self):
        for cval in (0, -1):
            rep = verify_closed_form(cval, 5)
            assert rep["failures"] == 0
            assert rep["witness"] is None
            assert rep["matches_reference"] is True
            assert rep["jacobi_checked"] > 0

    def test_perturbation_exhibits_a_witness(self):
        rep = verify_closed_form(0, 4, perturbation=((1, 1), 2, l ** 2))
        assert rep["failures"] > 0
        assert rep["witness"] is not None
        assert rep["matches_reference"] is None


class TestNormalizeParameter:
    def test_invertible_parameter_rescales_to_minus_one(self):
        moves, rep = normalize_parameter(2)
        assert len(moves) == 3
        assert rep["normalized_to"] == "-1"
        start = BracketAnsatz.from_upper(
            (-1, 0, 1, 2), _one_parameter_upper(Fraction(2))).algebra()
        cur = start
        for mv in moves:
            cur = apply_gauge(cur, mv)
        target = BracketAnsatz.from_upper(
            (-1, 0, 1, 2), _one_parameter_upper(Fraction(-1))).algebra()
        assert structurally_equal(cur, target)

    def test_fixed_points_need_no_moves(self):
        for cval in (0, -1):
            moves, rep = normalize_parameter(cval)
            assert moves == []
            assert rep["normalized_to"] == str(cval)

    def test_fractional_parameter(self):
        moves, rep = normalize_parameter(Fraction(1, 2))
        assert len(moves) == 3 and rep["normalized_to"] == "-1"
