"""Ladder identities and the loop-generator chain: regimes, frozen small
cases, coefficient exactness, and the nested commutator relations."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qloop.identity import EXACT_ZERO, NONZERO, VACUOUS_ZERO
from qloop.repchain import ChainContext, build_site_rep, rescaled_rep
from qloop.rings import LAURENT_RING, InternalInconsistency, LaurentPoly, cyclo_ring
from qloop.serre import (
    InvalidRegime,
    _evaluate_specs,
    _ladder_narrow_specs,
    build_loop_generators,
    check_BCN,
    check_CBN,
    check_g_forms,
    check_higher_serre,
    check_id1,
    check_id2,
    check_lemma_chain,
    check_serre_nested,
    check_site_suite,
    dispatch_root_serre,
    lusztig_f,
    make_store,
    nested_commutator_words,
)

E_PAIR = ("E0", "E1")
F_PAIR = ("F0", "F1")


def _ctx(n_param=2, length=4, kind="spin_half"):
    return ChainContext(build_site_rep(kind, n_param), length)


# the heavier chains, shared across tests
CTX_27 = _ctx(2, 7)
CTX_2X = _ctx(2, 10)
STORE_2X = make_store(CTX_2X)


# ---------------------------------------------------------------------------
# the alternating double-power combination


def test_f_at_m0_reduces_to_single_power():
    ctx = _ctx(2, 3)
    store = make_store(ctx)
    f = lusztig_f("E0", "E1", 2, 0, store=store)
    assert f == store.get("E1", 2, "q_fact")


def test_f_no_vanishing_at_m_equal_2n():
    f = lusztig_f("E0", "E1", 1, 2, ctx=_ctx(2, 4))
    assert not f.is_zero()


def test_f_mixed_class_pair_is_exposed_but_not_asserted():
    # nothing is claimed for an E against an F; the operator still builds
    op = lusztig_f("E0", "F0", 1, 3, ctx=_ctx(2, 4))
    assert op is not None
    with pytest.raises(ValueError):
        check_higher_serre(1, 3, ("E0", "F0"), _ctx(2, 4))
    with pytest.raises(ValueError):
        lusztig_f("E1", "E1", 1, 3, ctx=_ctx(2, 4))


def test_higher_serre_generic_frozen():
    check = check_higher_serre(1, 3, E_PAIR, _ctx(2, 4))
    assert check.status == EXACT_ZERO
    assert check.params["ring"] == "laurent"
    assert check.nontrivial == {"terms": 4, "terms_nonzero": 4,
                                "max_term_nnz": 28}


def test_higher_serre_all_proper_pairs_and_root_image():
    ctx = _ctx(2, 3)
    for pair in (E_PAIR, ("E1", "E0"), F_PAIR, ("F1", "F0")):
        assert check_higher_serre(1, 3, pair, ctx).status == EXACT_ZERO
    at_root = check_higher_serre(2, 5, E_PAIR, _ctx(2, 6), cyclo_ring(2))
    assert at_root.status == EXACT_ZERO
    assert at_root.params["ring"] == "cyclotomic"


def test_higher_serre_vacuous_needs_l1():
    # at L=2 the two middle splittings survive individually and cancel
    assert check_higher_serre(1, 3, E_PAIR, _ctx(2, 1)).status == VACUOUS_ZERO
    boundary = check_higher_serre(1, 3, E_PAIR, _ctx(2, 2))
    assert boundary.status == EXACT_ZERO
    assert boundary.nontrivial["terms_nonzero"] == 2


def test_higher_serre_rejects_m_at_most_2n():
    with pytest.raises(InvalidRegime):
        check_higher_serre(1, 2, E_PAIR, _ctx(2, 4))


# ---------------------------------------------------------------------------
# wide ladder


def test_id1_frozen_instance():
    check = check_id1(1, 5, E_PAIR, CTX_27)
    assert check.status == EXACT_ZERO
    assert check.nontrivial == {"terms": 3, "terms_nonzero": 3,
                                "max_term_nnz": 364}


def test_id1_smallest_two_term_instance():
    check = check_id1(0, 2, E_PAIR, _ctx(2, 3))
    assert check.status == EXACT_ZERO
    assert check.nontrivial["terms"] == 2
    assert check.nontrivial["terms_nonzero"] == 2


def test_id1_vacuous_boundary():
    assert check_id1(1, 5, E_PAIR, _ctx(2, 3)).status == VACUOUS_ZERO
    partial = check_id1(1, 5, E_PAIR, _ctx(2, 4))
    assert partial.status == EXACT_ZERO
    assert partial.nontrivial["terms_nonzero"] == 2


def test_id1_rejects_narrow_gap():
    with pytest.raises(InvalidRegime):
        check_id1(1, 3, E_PAIR, _ctx(2, 5))


# ---------------------------------------------------------------------------
# narrow ladder


def test_id2_small_instances_with_support_count():
    check = check_id2(1, 3, E_PAIR, _ctx(2, 5))
    assert check.status == EXACT_ZERO
    assert check.extra["support_products_zero"] == 2
    assert check_id2(3, 7, E_PAIR, CTX_27).status == EXACT_ZERO
    assert check_id2(1, 4, E_PAIR, _ctx(3, 5)).status == EXACT_ZERO


def test_id2_rejects_gap_zero():
    with pytest.raises(InvalidRegime):
        check_id2(1, 2, E_PAIR, _ctx(2, 5))
    with pytest.raises(InvalidRegime):
        check_id2(0, 0, E_PAIR, _ctx(2, 3))


def test_id2_gap_zero_extension_is_genuinely_false():
    # the regime bound is not conservatism: the gap-0 sum has a nonzero
    # residual once the chain is long enough to see it
    ctx = _ctx(2, 5)
    store = make_store(ctx)
    specs = _ladder_narrow_specs("E0", "E1", 1, 2, 2)
    check = _evaluate_specs("serre.ladder-narrow",
                            {"n": 1, "m": 2, "N": 2, "L": 5},
                            specs, store, "q_fact", cyclo_ring(2))
    assert check.status == NONZERO
    assert check.witness["sector"] == -4
    assert check.witness["value"] == "1"


def test_dispatcher_partitions_all_gaps():
    ctx = _ctx(2, 5)
    store = make_store(ctx)
    for n in (0, 1, 2):
        for m in range(2 * n + 1, 2 * n + 5):
            check = dispatch_root_serre(n, m, E_PAIR, ctx, store=store)
            expected = ("serre.ladder-wide" if m - 2 * n >= 2
                        else "serre.ladder-narrow")
            assert check.family == expected
    with pytest.raises(InvalidRegime):
        dispatch_root_serre(1, 2, E_PAIR, ctx)


# ---------------------------------------------------------------------------
# three-term instances


def test_three_term_frozen_instances():
    check = check_BCN(1, CTX_27, "plus")
    assert check.status == EXACT_ZERO
    assert check.nontrivial == {"terms": 3, "terms_nonzero": 3,
                                "max_term_nnz": 364}
    assert check.extra["matches_wide_ladder"] is True
    cbn = check_CBN(2, _ctx(3, 8), "minus")
    assert cbn.status == EXACT_ZERO
    assert cbn.nontrivial["max_term_nnz"] == 118


def test_three_term_vacuous_boundary_and_q0():
    assert check_BCN(1, _ctx(2, 3)).status == VACUOUS_ZERO
    partial = check_BCN(1, _ctx(2, 4))
    assert partial.status == EXACT_ZERO
    assert partial.nontrivial["terms_nonzero"] == 2
    q0 = check_BCN(0, _ctx(2, 5))
    assert q0.status == EXACT_ZERO
    assert q0.nontrivial["terms_nonzero"] == 3


def test_three_term_matches_wide_ladder_statuses():
    # same residual as the (n, m) = (Q, 2N+Q) ladder, computed independently
    for length in (4, 5, 7):
        ctx = _ctx(2, length)
        store = make_store(ctx)
        bcn = check_BCN(1, ctx, store=store)
        id1 = check_id1(1, 5, E_PAIR, ctx, store=store)
        assert bcn.status == id1.status
        assert (bcn.nontrivial or {}).get("terms_nonzero") == \
               (id1.nontrivial or {}).get("terms_nonzero")


def test_three_term_sign_tamper_detected():
    # flipping the middle sign must break the identity, not rescale it
    ctx = _ctx(2, 5)
    store = make_store(ctx)
    specs = [
        (1, (("E0", 5), ("E1", 1))),
        (-1, (("E0", 3), ("E1", 1), ("E0", 2))),   # true sign is +1 here
        (1, (("E0", 1), ("E1", 1), ("E0", 4))),
    ]
    check = _evaluate_specs("serre.three-term", {"N": 2, "L": 5, "Q": 1},
                            specs, store, "q_fact", cyclo_ring(2))
    assert check.status == NONZERO


def test_three_term_rejects_bad_branch_and_sector():
    with pytest.raises(ValueError):
        check_BCN(1, _ctx(2, 5), "up")
    with pytest.raises(ValueError):
        check_BCN(2, _ctx(2, 5))


# ---------------------------------------------------------------------------
# the resummation check


def test_g_forms_frozen():
    for branch in ("full", "truncated"):
        check = check_g_forms(1, 3, 2, branch)
        assert check.status == EXACT_ZERO
        assert check.nontrivial["terms_nonzero"] == 4
    full_n3 = check_g_forms(1, 3, 3, "full")
    assert full_n3.status == EXACT_ZERO
    assert check_g_forms(1, 4, 2, "truncated").status == EXACT_ZERO
    # gap 0 truncates to an empty sum on both routes
    assert check_g_forms(2, 4, 2, "truncated").status == VACUOUS_ZERO


def test_g_forms_degenerate_m0():
    assert check_g_forms(2, 0, 2, "full").status == EXACT_ZERO
    assert check_g_forms(2, 0, 2, "truncated").status == VACUOUS_ZERO
    with pytest.raises(ValueError):
        check_g_forms(1, 3, 2, "half")


# ---------------------------------------------------------------------------
# clock-dressed suite


def test_site_suite_frozen_statuses():
    suite = check_site_suite(1, CTX_27, "one_zero")
    assert [c.family for c in suite] == [
        "site.three-term", "site.three-term", "site.swap", "site.swap",
        "site.four-term", "site.four-term"]
    assert [c.status for c in suite] == [EXACT_ZERO] * 6
    assert [c.nontrivial["max_term_nnz"] for c in suite] == \
        [364, 364, 560, 560, 84, 84]


def test_site_suite_short_chain_mixes_vacuous_and_exact():
    suite = check_site_suite(1, _ctx(3, 5), "L_Lm1")
    assert [c.status for c in suite] == [
        VACUOUS_ZERO, VACUOUS_ZERO, EXACT_ZERO, EXACT_ZERO,
        VACUOUS_ZERO, VACUOUS_ZERO]


def test_site_suite_sides_agree():
    one = check_site_suite(1, CTX_27, "one_zero")
    other = check_site_suite(1, CTX_27, "L_Lm1")
    assert [c.status for c in one] == [c.status for c in other]


def test_site_suite_statuses_match_plus_minus_suite():
    # the q-normalized identities behind the dressed ones, run independently
    store = make_store(CTX_27)
    site = check_site_suite(1, CTX_27, "one_zero", store=store)
    pm = [
        check_BCN(1, CTX_27, "plus", store=store),
        check_CBN(1, CTX_27, "plus", store=store),
        check_id2(1, 3, E_PAIR, CTX_27, store=store),
        check_id2(1, 3, ("E1", "E0"), CTX_27, store=store),
        check_id2(3, 7, E_PAIR, CTX_27, store=store),
        check_id2(3, 7, ("E1", "E0"), CTX_27, store=store),
    ]
    assert [c.status for c in site] == [c.status for c in pm]


def test_site_suite_rejects_bad_side_and_backend():
    with pytest.raises(ValueError):
        check_site_suite(1, CTX_27, "both_ends")
    cyclic = ChainContext(build_site_rep("cyclic", 3, {"c": 0}), 2)
    with pytest.raises(ValueError):
        check_site_suite(1, cyclic, "one_zero")


# ---------------------------------------------------------------------------
# rescale blindness


def test_identities_blind_to_generator_rescale():
    plain = _ctx(2, 5)
    rep = rescaled_rep(build_site_rep("spin_half", 2),
                       LaurentPoly.q_power(3), LaurentPoly({1: -1}))
    scaled = ChainContext(rep, 5)
    for ctx in (plain, scaled):
        assert check_BCN(1, ctx).status == EXACT_ZERO
        assert check_id2(1, 3, E_PAIR, ctx).status == EXACT_ZERO
        suite = check_site_suite(1, ctx, "one_zero")
        assert all(c.status in (EXACT_ZERO, VACUOUS_ZERO) for c in suite)


# ---------------------------------------------------------------------------
# loop generators


def test_loop_generators_nonzero_and_neutral():
    gens = build_loop_generators(1, _ctx(2, 5))
    for name in ("x_minus_1Q", "x_plus_0Q", "xbar_minus_0Q", "xbar_plus_m1Q"):
        assert not getattr(gens, name).is_zero()
        # B-degree exceeds C-degree by exactly N, so the charge is neutral
        assert gens.charges[name] == 0
    assert gens.Q == 1


def test_loop_generators_vacuous_flagged():
    gens = build_loop_generators(1, _ctx(2, 2))
    assert gens.x_minus_1Q.is_zero()
    assert gens.charges["x_minus_1Q"] is None


def test_loop_generators_q0_orders_collapse():
    store = make_store(_ctx(2, 4))
    gens = build_loop_generators(0, store.ctx, store=store, ring=LAURENT_RING)
    assert gens.x_minus_1Q == store.get("B1bar", 2, "omega_fact")
    assert gens.x_plus_0Q == store.get("C0bar", 2, "omega_fact")


def test_store_context_validation():
    store = make_store(_ctx(2, 4))
    with pytest.raises(ValueError):
        check_BCN(1, _ctx(2, 5), store=store)


# ---------------------------------------------------------------------------
# lemma chain


def test_lemma_chain_all_exact_with_integer_coefficients():
    chain = check_lemma_chain(1, CTX_27)
    assert len(chain) == 22
    assert all(c.status == EXACT_ZERO for c in chain)
    merges = [c for c in chain if c.family == "divpow.merge-binomial"]
    assert sorted(c.extra["coefficient"] for c in merges) == [1, 1, 2, 2, 3, 3]
    lemmas = {c.params["lemma"]: c.extra["coefficient"]
              for c in chain if "lemma" in c.params}
    assert lemmas == {
        "xp_xm.a": 1, "xp_xm.b": 1, "xm2.a": 2, "xm2.b": 2, "reorder": 1,
        "xp_xm3.raw": 2, "xp_xm3": 6, "xm_xp_xm2.mid": 2, "xm_xp_xm2": 2,
        "xm2_xp_xm": 2, "xm3_xp": 6, "xm_xp3": 6, "xp_xm_xp2": 2,
        "xp2_xm_xp": 2, "xp3_xm": 6}
    assert sum(1 for c in chain if c.family == "loop.block-commutator") == 1


def test_lemma_coefficient_tamper_detected():
    # 2 means 2: doubling squared lowering against the merged form with any
    # other integer must leave a residual
    ctx = _ctx(2, 5)
    store = make_store(ctx)
    q, n1, n2 = 1, 3, 5
    lhs = (("C0bar", q), ("B1bar", n1), ("C0bar", q), ("B1bar", n1))
    rhs = (("C0bar", q), ("B1bar", q), ("C0bar", q), ("B1bar", n2))
    for coeff, expected in ((2, EXACT_ZERO), (1, NONZERO), (3, NONZERO)):
        check = _evaluate_specs("loop.normal-form", {"c": coeff},
                                [(1, lhs), (-coeff, rhs)],
                                store, "omega_fact", cyclo_ring(2))
        assert check.status == expected


# ---------------------------------------------------------------------------
# nested commutator relations


def test_nested_words_depth_patterns():
    assert nested_commutator_words(1) == {("a", "b"): 1, ("b", "a"): -1}
    assert nested_commutator_words(3) == {
        ("a", "b", "b", "b"): 1, ("b", "a", "b", "b"): -3,
        ("b", "b", "a", "b"): 3, ("b", "b", "b", "a"): -1}


_mat = st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3),
                min_size=3, max_size=3)


@given(_mat, _mat)
@settings(max_examples=60, deadline=None)
def test_nested_words_match_direct_commutator(a_rows, b_rows):
    a = np.array(a_rows, dtype=object)
    b = np.array(b_rows, dtype=object)
    direct = a
    for _ in range(3):
        direct = direct @ b - b @ direct
    total = np.zeros((3, 3), dtype=object)
    for word, coeff in nested_commutator_words(3).items():
        prod = None
        for letter in word:
            m = a if letter == "a" else b
            prod = m if prod is None else prod @ m
        total = total + coeff * prod
    assert (total == direct).all()


def test_nested_serre_frozen_at_top_size():
    for family in ("x", "xbar"):
        pair = check_serre_nested(1, CTX_2X, family, store=STORE_2X)
        assert [c.params["dominant"] for c in pair] == ["minus", "plus"]
        for check in pair:
            assert check.status == EXACT_ZERO
            assert check.nontrivial == {"terms": 4, "terms_nonzero": 4,
                                        "max_term_nnz": 37710}
            assert all(m["nonzero"] for m in check.extra["monomials"])
            assert [m["coefficient"] for m in check.extra["monomials"]] == \
                [1, -3, 3, -1]


def test_nested_serre_monomial_labels():
    pair = check_serre_nested(1, _ctx(2, 5), "x")
    minus, plus = pair
    assert [m["word"] for m in minus.extra["monomials"]] == \
        ["+---", "-+--", "--+-", "---+"]
    assert [m["word"] for m in plus.extra["monomials"]] == \
        ["-+++", "+-++", "++-+", "+++-"]


def test_nested_serre_partial_and_vacuous_boundaries():
    for check in check_serre_nested(1, _ctx(2, 5), "xbar"):
        assert check.status == EXACT_ZERO
        assert [m["nonzero"] for m in check.extra["monomials"]] == \
            [False, True, True, False]
    for check in check_serre_nested(1, _ctx(2, 4), "xbar"):
        assert check.status == VACUOUS_ZERO


def test_nested_serre_q0_regression():
    for check in check_serre_nested(0, _ctx(2, 8), "x"):
        assert check.status == EXACT_ZERO
        assert check.nontrivial["terms_nonzero"] == 4


def test_nested_serre_rejects_unknown_family():
    with pytest.raises(ValueError):
        check_serre_nested(1, _ctx(2, 5), "y")
