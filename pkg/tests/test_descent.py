"""Descent criteria against the brute-force oracle, the W = Y^2 identity,
and the residue-level Kummer obstruction."""

from __future__ import annotations

import pytest

from vkpatch.descent import (
    DESCENDS,
    FAILS,
    FAILS_WITHIN_BOUNDS,
    INCONCLUSIVE,
    OBSTRUCTED_WITHIN_BOUNDS,
    ASInstance,
    InstanceRejected,
    KummerInstance,
    as_brute_force_oracle,
    as_descends_galois,
    build_counterexample,
    kummer_obstruction,
    verify_example_29,
)
from vkpatch.fields import FiniteField
from vkpatch.series import LaurentSeries


# -- criterion -------------------------------------------------------------------


def test_alpha_in_k1_descends_with_explicit_beta():
    inst = ASInstance.finite(2, 1, 2, 1)
    decision = as_descends_galois(inst)
    assert decision.verdict == DESCENDS
    assert decision.beta.support() == (-1,)
    assert decision.beta.coefficient(-1) == 1


def test_generator_of_f4_fails_galois_descent():
    inst = ASInstance.finite(2, 1, 2, "w")
    decision = as_descends_galois(inst)
    assert decision.verdict == FAILS
    assert decision.scope == "galois-degree-p"
    assert not decision.alpha_in_k1


def test_transcendental_alpha_fails_any_descent():
    inst = ASInstance.rational(3, 1, "s")
    decision = as_descends_galois(inst)
    assert decision.verdict == FAILS
    assert decision.scope == "any-degree-p"


def test_instance_validation():
    with pytest.raises(ValueError):
        ASInstance.finite(2, 1, 2, 0)  # alpha must be nonzero
    with pytest.raises(ValueError):
        ASInstance.finite(2, 3, 4, 1)  # k1 not a subfield


# -- oracle ---------------------------------------------------------------------


def test_oracle_finds_least_witness():
    inst = ASInstance.finite(2, 1, 1, 1)
    decision = as_brute_force_oracle(inst, 4, 50)
    assert decision.verdict == DESCENDS
    assert decision.beta.equals_exact(LaurentSeries(inst.k2, {-1: 1}))
    assert decision.gamma.is_exactly_zero()


def test_oracle_rejects_f4_generator_within_bounds():
    inst = ASInstance.finite(2, 1, 2, "w")
    decision = as_brute_force_oracle(inst, 8, 50)
    assert decision.verdict == FAILS_WITHIN_BOUNDS
    assert decision.candidates_tried == 2**8


def test_oracle_empty_search_space_is_inconclusive():
    inst = ASInstance.finite(2, 1, 2, "w")
    assert as_brute_force_oracle(inst, 0, 50).verdict == INCONCLUSIVE


def test_oracle_witnesses_satisfy_equation_exactly():
    # deep support: beta = t^-4 equivalent paths exercise the triangular solve
    inst = ASInstance.finite(2, 1, 1, 1)
    decision = as_brute_force_oracle(inst, 4, 50)
    gamma, beta = decision.gamma, decision.beta
    lhs = gamma.pow(2).sub(gamma)
    rhs = LaurentSeries(inst.k2, {-1: inst.alpha}).sub(beta)
    assert lhs.equals_exact(rhs)


def test_criterion_and_oracle_agree_on_all_of_f4_and_f9():
    for p in (2, 3):
        inst_field = FiniteField(p, 2)
        for alpha in range(1, inst_field.q):
            inst = ASInstance.finite(p, 1, 2, alpha)
            criterion = as_descends_galois(inst)
            oracle = as_brute_force_oracle(inst, p * p, 50)
            assert oracle.verdict != INCONCLUSIVE
            assert (criterion.verdict == DESCENDS) == (oracle.verdict == DESCENDS), (
                p, alpha,
            )


def test_oracle_over_rational_constants():
    inst = ASInstance.rational(3, 1, "s")
    decision = as_brute_force_oracle(inst, 3, 30)
    assert decision.verdict == FAILS_WITHIN_BOUNDS


def test_agreement_on_larger_coefficient_fields():
    # GF(4) inside GF(16) at the p^2 support bound; GF(9) inside GF(81) at a
    # feasible bound (the triangular solve is exact, so a missing witness at
    # any bound is consistent with the criterion, and found witnesses are
    # verified identities)
    for alpha in range(1, 16):
        inst = ASInstance.finite(2, 2, 4, alpha)
        criterion = as_descends_galois(inst)
        oracle = as_brute_force_oracle(inst, 4, 50)
        assert (criterion.verdict == DESCENDS) == (oracle.verdict == DESCENDS)
    sample = [1, 2, 3, 7, 20, 40, 60, 80]
    for alpha in sample:
        inst = ASInstance.finite(3, 2, 4, alpha)
        criterion = as_descends_galois(inst)
        oracle = as_brute_force_oracle(inst, 2, 50)
        assert (criterion.verdict == DESCENDS) == (oracle.verdict == DESCENDS), alpha


# -- the explicit identity ---------------------------------------------------------


def test_example_29_certificate_is_exact():
    report = verify_example_29()
    assert report.remainder == {}
    assert report.char5_remainder != {}
    assert report.wrong_generator_remainder != {}
    assert report.passed


def test_example_29_char5_remainder_shape():
    # in characteristic 5 the collapse leaves 3Y^2 + 3uTY
    report = verify_example_29()
    assert report.char5_remainder == {(0, 0, 2): 3, (1, 1, 1): 3}


# -- Kummer obstruction --------------------------------------------------------------


def test_transcendental_gbar_is_obstructed():
    inst = KummerInstance.transcendental_model(2, terms=4, truncation=200)
    decision = kummer_obstruction(inst, 4)
    assert decision.verdict == OBSTRUCTED_WITHIN_BOUNDS
    assert decision.candidates_tried == 31  # monic polynomials of degree <= 4


def test_base_ring_gbar_descends():
    inst = KummerInstance.base_ring_model(2, [1, 0, 1], truncation=200)
    decision = kummer_obstruction(inst, 4)
    assert decision.verdict == DESCENDS
    assert decision.witness_e == (1,)  # e = 1 suffices
    # f itself lies in the base ring: relation c0 + c1*f with c1 = 1
    assert decision.witness_relation[1] == (1,)


def test_fbar_of_base_ring_gbar_is_polynomial():
    inst = KummerInstance.base_ring_model(2, [1, 0, 1], truncation=200)
    fbar = inst.fbar()
    # (1 + x^2)^2 + x = 1 + x + x^4 over GF(2)
    assert dict(fbar.terms()) == {0: 1, 1: 1, 4: 1}


def test_kummer_bounds_are_honest():
    inst = KummerInstance.transcendental_model(2, terms=4, truncation=20)
    assert kummer_obstruction(inst, 4).verdict == INCONCLUSIVE
    assert kummer_obstruction(inst, -1).verdict == INCONCLUSIVE


def test_kummer_char3():
    inst = KummerInstance.transcendental_model(3, terms=3, truncation=120)
    decision = kummer_obstruction(inst, 3)
    assert decision.verdict == OBSTRUCTED_WITHIN_BOUNDS


# -- counterexample builder ------------------------------------------------------------


def test_equal_char_counterexample():
    ce = build_counterexample(2, "equal-char", {})
    assert ce.decision.verdict == FAILS
    assert ce.decision.scope == "any-degree-p"


def test_equal_char_rejects_member_alpha():
    with pytest.raises(InstanceRejected):
        build_counterexample(3, "equal-char", {"finite": (1, 1, 1)})


def test_mixed_char_counterexample():
    ce = build_counterexample(2, "mixed-char", {})
    assert ce.decision.verdict == OBSTRUCTED_WITHIN_BOUNDS


def test_mixed_char_rejects_base_ring_gbar():
    with pytest.raises(InstanceRejected):
        build_counterexample(2, "mixed-char", {"gbar_coeffs": [1, 0, 1]})
