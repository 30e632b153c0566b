import json
from fractions import Fraction

import pytest

from viproplab import (
    ExplicitSequence,
    PiecewiseLinearFn,
    PolynomialTest,
    SequenceSpec,
    dyadic_indicators,
    equilibrium_gap,
    holder_boundedness_check,
    ky_fan_violation_certificate,
    l2_unit_limit_certificate,
    monotone_gap_check,
    pairing_sequence,
    pseudomonotone_premise_audit,
    sawtooth,
    scaled_hat,
    weak_convergence_evidence,
)

from conftest import random_pw_linear

F = Fraction
ZERO = PiecewiseLinearFn.zero()
SAW = SequenceSpec("sawtooth")


class TestEquilibriumGap:
    def test_zero_first_argument(self, rng):
        for _ in range(10):
            assert equilibrium_gap(ZERO, random_pw_linear(rng)) == 0

    def test_diagonal_vanishes(self, rng):
        for _ in range(10):
            x = random_pw_linear(rng)
            assert equilibrium_gap(x, x) == 0

    @pytest.mark.parametrize("alpha", [F(31, 2), F(16), F(20), F(100)])
    def test_sawtooth_hat_closed_form(self, alpha):
        for k in (1, 5, 17):
            assert equilibrium_gap(sawtooth(k), scaled_hat(alpha)) == 45 - 3 * alpha


class TestPairingSequence:
    def test_hat_direction_is_constant(self):
        report = pairing_sequence(SAW, scaled_hat(16), 64)
        assert all(v == -3 for v in report.values)
        assert report.detection == "eventually-constant"
        assert report.limit_candidate == -3
        assert report.tail_window == 32

    def test_zero_direction_gives_energy(self):
        report = pairing_sequence(SAW, ZERO, 64)
        assert all(v == 45 for v in report.values)
        assert report.limit_candidate == 45

    def test_none_direction_means_zero_element(self):
        a = pairing_sequence(SAW, None, 16)
        b = pairing_sequence(SAW, ZERO, 16)
        assert [v.value for v in a.values] == [v.value for v in b.values]

    def test_small_kmax_rejected(self):
        with pytest.raises(ValueError):
            pairing_sequence(SAW, ZERO, 4)

    def test_no_detection_reported(self):
        # strictly alternating pairing values: no finite limit detectable
        seq = ExplicitSequence(lambda k: sawtooth(1) if k % 2 else sawtooth(2))
        wobble = ExplicitSequence(
            lambda k: seq.at(k) if k % 2 else scaled_hat(1)
        )
        report = pairing_sequence(wobble, scaled_hat(30), 16)
        assert report.detection == "none"
        assert report.limit_candidate is None


class TestKyFanViolation:
    def test_established_with_exact_margin(self):
        cert = ky_fan_violation_certificate(SAW, ZERO, scaled_hat(16), 64)
        assert cert.verdict == "established"
        assert cert.exactness == "exact"
        assert cert.witness["margin"] == 3
        assert cert.witness["tail_constant"] == -3
        assert cert.witness["gap_at_limit"] == 0

    def test_refuted_along_zero_direction(self):
        cert = ky_fan_violation_certificate(SAW, ZERO, ZERO, 64)
        assert cert.verdict == "refuted"

    def test_threshold_behavior(self):
        below = ky_fan_violation_certificate(SAW, ZERO, scaled_hat(10), 32)
        at = ky_fan_violation_certificate(SAW, ZERO, scaled_hat(15), 32)
        above = ky_fan_violation_certificate(SAW, ZERO, scaled_hat(F(61, 4)), 32)
        assert below.verdict == "refuted"
        assert at.verdict == "refuted"  # margin 0 is not strict
        assert above.verdict == "established"

    def test_inconclusive_names_missing_limit(self):
        wobble = ExplicitSequence(lambda k: sawtooth(1) if k % 2 else scaled_hat(1))
        cert = ky_fan_violation_certificate(wobble, ZERO, scaled_hat(30), 16)
        assert cert.verdict == "inconclusive"
        assert "could not be finitely determined" in cert.witness["note"]

    def test_json_schema(self):
        cert = ky_fan_violation_certificate(SAW, ZERO, scaled_hat(16), 64)
        doc = json.loads(json.dumps(cert.to_json_dict()))
        assert doc["property"] == "ky_fan_violation"
        assert doc["verdict"] == "established"
        assert doc["exactness"] == "exact"
        assert doc["witness"]["margin"] == ["3", "1"]
        assert doc["witness"]["k_window"] == [33, 64]
        assert "breakpoints" in doc["witness"]["y"]


class TestPremiseAudit:
    def test_sawtooth_premise_fails(self):
        cert = pseudomonotone_premise_audit(SAW, ZERO, 64)
        assert cert.verdict == "established"
        assert cert.witness["tail_constant"] == 45

    def test_constant_sequence_premise_holds(self, rng):
        w = random_pw_linear(rng)
        cert = pseudomonotone_premise_audit(ExplicitSequence(lambda k: w), w, 16)
        assert cert.verdict == "refuted"
        assert cert.witness["tail_constant"] == 0

    def test_l2_unit_sequence_premise_fails(self):
        cert = pseudomonotone_premise_audit(SequenceSpec("l2unit"), None, 64)
        assert cert.verdict == "established"
        assert cert.witness["tail_constant"] == 1


class TestL2UnitLimit:
    def test_tail_constant_one(self):
        cert = l2_unit_limit_certificate(64)
        assert cert.verdict == "established"
        assert cert.witness["tail_constant"] == 1
        assert cert.witness["conclusion"] == "limit != 0"


class TestMonotoneGap:
    def test_diagonal_zero(self, rng):
        u = random_pw_linear(rng)
        assert monotone_gap_check(u, u) == 0

    def test_against_zero_reduces_to_energy(self):
        assert monotone_gap_check(sawtooth(2), ZERO) == 45

    def test_scalar_kernel_nonnegative(self):
        # pointwise inequality (|a|a - |b|b)(a - b) >= 0 on a grid sweep
        grid = [F(n, 8) for n in range(-24, 25)]
        for a in grid:
            for b in grid:
                assert (abs(a) * a - abs(b) * b) * (a - b) >= 0

    def test_random_pairs_nonnegative(self, rng):
        for _ in range(200):
            u, w = random_pw_linear(rng), random_pw_linear(rng)
            gap = monotone_gap_check(u, w)
            assert gap.exact and gap >= 0


class TestConsistencyInvariant:
    def test_no_violation_at_limit_when_premise_tail_nonpositive(self, rng):
        # eventually-constant random sequences: the pairing tail at y = limit
        # is exactly 0, so premise holds and no violation can be established
        for _ in range(30):
            w = random_pw_linear(rng)
            pool = [random_pw_linear(rng) for _ in range(3)]
            seq = ExplicitSequence(lambda k, w=w, pool=pool: pool[k % 3] if k < 6 else w)
            premise = pseudomonotone_premise_audit(seq, w, 16)
            kyfan = ky_fan_violation_certificate(seq, w, w, 16)
            if premise.verdict != "established":
                assert kyfan.verdict != "established"


class TestWeakConvergenceEvidence:
    def test_constant_test_function_all_zero(self):
        report = weak_convergence_evidence(SAW, [PolynomialTest.monomial(0)], 32)
        assert report.entries[0].all_zero
        assert report.entries[0].bound_constant == 0

    def test_right_half_support_all_zero(self):
        phi = PolynomialTest.indicator(F(1, 2), F(1))
        report = weak_convergence_evidence(SAW, [phi], 32)
        assert report.entries[0].all_zero

    def test_linear_test_function_decay(self):
        report = weak_convergence_evidence(SAW, [PolynomialTest.monomial(1)], 64)
        entry = report.entries[0]
        # the exact sweep constant for t is 1/4, attained at every k
        assert entry.bound_constant == F(1, 4)
        for k, v in enumerate(entry.integrals, start=1):
            assert abs(v.value) <= entry.bound_constant / k

    def test_report_is_labeled_evidence(self):
        report = weak_convergence_evidence(SAW, [PolynomialTest.monomial(2)], 16)
        assert report.verdict == "consistent with weak null convergence"
        assert "evidence" in report.disclaimer

    def test_empty_family_rejected(self):
        with pytest.raises(ValueError):
            weak_convergence_evidence(SAW, [], 16)

    def test_json_round_trip(self):
        fam = [PolynomialTest.monomial(1)] + dyadic_indicators(2)
        report = weak_convergence_evidence(SAW, fam, 16)
        doc = json.loads(json.dumps(report.to_json_dict()))
        assert doc["k_max"] == 16
        assert len(doc["entries"]) == len(fam)


class TestHolderBoundedness:
    def test_zero_case(self):
        cert = holder_boundedness_check(ZERO, sawtooth(2))
        assert cert.verdict == "established"

    def test_equality_case(self):
        cert = holder_boundedness_check(sawtooth(3), sawtooth(3))
        assert cert.verdict == "established"
        assert cert.witness["lhs"] == pytest.approx(45.0)
        assert cert.witness["rhs"] == pytest.approx(45.0)

    def test_random_pairs(self, rng):
        for _ in range(100):
            cert = holder_boundedness_check(random_pw_linear(rng), random_pw_linear(rng))
            assert cert.verdict == "established"
            assert cert.exactness == "approximate"
