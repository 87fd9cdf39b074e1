"""Site gate, chain generators, grading, and the clock-dressed operators.

The independent oracle here is a dense numpy construction at the numeric
root q = exp(i pi / N): site matrices are rebuilt from scratch (no shared
code), chained with explicit Kronecker products, and compared entrywise to
the sector-block operators after float specialization.
"""

from functools import reduce

import numpy as np
import pytest

from qloop.identity import (
    APPROX_ZERO,
    EXACT_ZERO,
    NONZERO,
    VACUOUS_ZERO,
)
from qloop.qcomb import q_int
from qloop.repchain import (
    ChainContext,
    GradedOperator,
    InvalidParams,
    NotGraded,
    UnsupportedKind,
    WrapInconsistency,
    a_half_inverse,
    build_barred_ops,
    build_chain_generators,
    build_site_rep,
    charge_of,
    check_chain_chevalley,
    check_half_clock_commutation,
    operator_from_entries,
    rep_self_check,
    rescaled_rep,
    sector_project,
    specialize_operator,
)
from qloop.rings import (
    LAURENT_RING,
    FloatRing,
    LaurentPoly,
    PhiAdicRing,
    cyclo_ring,
)


# ---------------------------------------------------------------------------
# dense numeric oracle, written independently of the package internals


def _oracle_site(kind, n_param, c=0.0):
    q = np.exp(1j * np.pi / n_param)

    def qi(n):
        return (q**n - q**-n) / (q - 1 / q)

    if kind == "spin_half":
        e = np.array([[0, 1], [0, 0]], dtype=complex)
        f = np.array([[0, 0], [1, 0]], dtype=complex)
        k = np.diag([q, 1 / q])
        z = np.diag([q**-2, 1.0 + 0j])
        labels = (-1, 0)
    elif kind == "highest_weight":
        d = n_param
        e = np.zeros((d, d), dtype=complex)
        f = np.zeros((d, d), dtype=complex)
        for n in range(1, d):
            e[n - 1, n] = qi(n_param - n)
        for n in range(d - 1):
            f[n + 1, n] = qi(n + 1)
        k = np.diag([q ** (n_param - 1 - 2 * n) for n in range(d)])
        z = np.diag([q ** (2 * n) for n in range(d)])
        labels = tuple(range(d))
    elif kind == "cyclic":
        d = n_param
        f = np.zeros((d, d), dtype=complex)
        e = np.zeros((d, d), dtype=complex)
        for n in range(d):
            f[(n + 1) % d, n] = 1
            e[(n - 1) % d, n] = c - qi(n) ** 2
        k = np.diag([q ** (-(2 * n + 1)) for n in range(d)])
        z = np.diag([q ** (2 * n) for n in range(d)])
        labels = tuple(range(d))
    else:
        raise AssertionError(kind)
    return e, f, k, z, labels, q


def _oracle_chain(kind, n_param, length, c=0.0):
    e, f, k, z, labels, q = _oracle_site(kind, n_param, c)
    d = e.shape[0]
    ident = np.eye(d, dtype=complex)
    k_inv = np.linalg.inv(k)

    def chain(site_mat, left, right):
        total = np.zeros((d**length,) * 2, dtype=complex)
        for j in range(length):
            factors = [left] * j + [site_mat] + [right] * (length - j - 1)
            total += reduce(np.kron, factors)
        return total

    out = {
        "E1": chain(e, k, ident),
        "F1": chain(f, ident, k_inv),
        "E0": chain(f, k_inv, ident),
        "F0": chain(e, ident, k),
        "K": reduce(np.kron, [k] * length),
        "K_inv": reduce(np.kron, [k_inv] * length),
        "A_L": reduce(np.kron, [z] * length),
    }
    grades = []
    for state in range(d**length):
        g, s = 0, state
        for _ in range(length):
            g += labels[s % d]
            s //= d
        grades.append(g)
    out["A_L_half"] = np.diag([q**g for g in grades])
    return out, q


def _dense_of(op, ctx):
    mat = np.zeros((ctx.dim_total, ctx.dim_total), dtype=complex)
    for _, row, col, val in op.entries():
        mat[row, col] = val
    return mat


CASES = [
    ("spin_half", 2, 3, None),
    ("spin_half", 3, 2, None),
    ("highest_weight", 3, 2, None),
    ("highest_weight", 2, 3, None),
]


@pytest.mark.parametrize("kind,n_param,length,c", CASES)
def test_generators_match_dense_oracle(kind, n_param, length, c):
    rep = build_site_rep(kind, n_param)
    ctx = ChainContext(rep, length)
    gens = build_chain_generators(ctx)
    oracle, _ = _oracle_chain(kind, n_param, length)
    fl = FloatRing(n_param)
    for name, want in oracle.items():
        got = _dense_of(specialize_operator(gens[name], fl), ctx)
        assert np.allclose(got, want, atol=1e-9), (kind, n_param, length, name)


def test_cyclic_generators_match_dense_oracle():
    rep = build_site_rep("cyclic", 3, {"c": 0})
    ctx = ChainContext(rep, 2)
    gens = build_chain_generators(ctx)
    oracle, _ = _oracle_chain("cyclic", 3, 2, c=0.0)
    fl = FloatRing(3)
    for name in ("E0", "E1", "F0", "F1", "K", "K_inv", "A_L"):
        got = _dense_of(specialize_operator(gens[name], fl), ctx)
        assert np.allclose(got, oracle[name], atol=1e-9), name


def test_length_one_chain_is_the_site_rep():
    rep = build_site_rep("spin_half", 2)
    ctx = ChainContext(rep, 1)
    gens = build_chain_generators(ctx)
    assert [(r, c, v.render()) for _, r, c, v in gens["E1"].entries()] == \
        [(0, 1, "1")]
    assert [(r, c, v.render()) for _, r, c, v in gens["K"].entries()] == \
        [(0, 0, "q"), (1, 1, "q^-1")]


def test_frozen_entries_spin_l3():
    # E1 on the all-down column (state 7): one entry per site term,
    # k' dressing to the left contributes q^-1 per passed-over down spin.
    rep = build_site_rep("spin_half", 2)
    ctx = ChainContext(rep, 3)
    e1 = build_chain_generators(ctx)["E1"]
    assert e1.nnz() == 12
    col7 = {(row, col): v.render() for _, row, col, v in e1.entries() if col == 7}
    assert col7 == {(6, 7): "q^-2", (5, 7): "q^-1", (3, 7): "1"}


# ---------------------------------------------------------------------------
# site gate


@pytest.mark.parametrize("kind,n_param", [
    ("spin_half", 2), ("spin_half", 3),
    ("highest_weight", 2), ("highest_weight", 3), ("highest_weight", 4),
])
def test_site_gate_generic(kind, n_param):
    rep = build_site_rep(kind, n_param)
    by_family = {c.family: c for c in rep_self_check(rep, "generic")}
    for fam in ("rep.k-e-exchange", "rep.k-f-exchange", "rep.ef-commutator"):
        assert by_family[fam].status == EXACT_ZERO, fam
    clock = by_family["rep.clock-order"]
    assert clock.status == NONZERO and clock.extra["holds_at_root"]
    sign = by_family["rep.k-clock-sign"]
    if kind == "spin_half":
        assert (sign.extra["sign"], sign.extra["valid_in"]) == ("+", "generic")
        assert sign.status == EXACT_ZERO
    else:
        assert (sign.extra["sign"], sign.extra["valid_in"]) == ("-", "root_of_unity")
        assert sign.status == NONZERO and sign.extra["holds_at_root"]


@pytest.mark.parametrize("kind,n_param", [
    ("spin_half", 2), ("spin_half", 3), ("highest_weight", 3),
])
def test_site_gate_root(kind, n_param):
    rep = build_site_rep(kind, n_param)
    for check in rep_self_check(rep, "root_of_unity"):
        assert check.status == EXACT_ZERO, check.check_id


def test_site_gate_cyclic():
    rep = build_site_rep("cyclic", 3, {"c": 0})
    generic = {c.family: c for c in rep_self_check(rep, "generic")}
    comm = generic["rep.ef-commutator"]
    assert comm.status == NONZERO and comm.extra["holds_at_root"]
    # with c = 0 the raising operator has no wrap entry, so its exchange law
    # is exact at generic q; the lowering operator always wraps
    assert generic["rep.k-e-exchange"].status == EXACT_ZERO
    kf = generic["rep.k-f-exchange"]
    assert kf.status == NONZERO and kf.extra["holds_at_root"]
    sign = generic["rep.k-clock-sign"]
    assert (sign.extra["sign"], sign.extra["valid_in"]) == ("+", "generic")
    root = {c.family: c for c in rep_self_check(rep, "root_of_unity")}
    for fam in ("rep.k-e-exchange", "rep.k-f-exchange", "rep.ef-commutator",
                "rep.clock-order", "rep.clock-shift-exchange"):
        assert root[fam].status == EXACT_ZERO, fam


def test_site_rep_errors():
    with pytest.raises(UnsupportedKind):
        build_site_rep("parafermion", 3)
    with pytest.raises(InvalidParams):
        build_site_rep("cyclic", 3)          # c missing
    with pytest.raises(InvalidParams):
        build_site_rep("cyclic", 3, {"c": "zero"})
    with pytest.raises(InvalidParams):
        build_site_rep("spin_half", 1)


# ---------------------------------------------------------------------------
# chain-level relations


@pytest.mark.parametrize("kind,n_param,length", [
    ("spin_half", 2, 1), ("spin_half", 2, 2), ("spin_half", 2, 3),
    ("spin_half", 2, 4), ("spin_half", 3, 3), ("highest_weight", 3, 2),
    ("highest_weight", 2, 4),
])
def test_chain_chevalley_generic(kind, n_param, length):
    ctx = ChainContext(build_site_rep(kind, n_param), length)
    for check in check_chain_chevalley(ctx):
        assert check.ok, (check.check_id, check.status, check.witness)
        assert check.status in (EXACT_ZERO, VACUOUS_ZERO)


def test_chain_chevalley_cyclic_root_vs_generic():
    ctx = ChainContext(build_site_rep("cyclic", 3, {"c": 0}), 2)
    root = check_chain_chevalley(ctx, cyclo_ring(3))
    assert all(c.status in (EXACT_ZERO, VACUOUS_ZERO) for c in root)
    generic = check_chain_chevalley(ctx)
    comm = [c for c in generic if c.family == "chain.ef-commutator"]
    assert any(c.status == NONZERO for c in comm)


def test_chain_chevalley_float():
    ctx = ChainContext(build_site_rep("spin_half", 2), 3)
    for check in check_chain_chevalley(ctx, FloatRing(2)):
        assert check.status in (APPROX_ZERO, VACUOUS_ZERO), check.check_id


def test_grading_example_l2():
    # conjugating by the clock product scales E1 by w^-1 = q^-2
    ctx = ChainContext(build_site_rep("spin_half", 2), 2)
    gens = build_chain_generators(ctx)
    a, e1 = gens["A_L"], gens["E1"]
    a_inv = operator_from_entries(
        ctx, LAURENT_RING,
        [(r, c, LaurentPoly.q_power(-2 * ctx.grade_of[r]))
         for r, c in [(s, s) for s in range(ctx.dim_total)]], shift=0)
    conj = a @ e1 @ a_inv
    assert conj == e1.scale(LaurentPoly.q_power(-2))
    assert charge_of(e1) == (-1) % 2
    assert charge_of(gens["F0"]) == (-1) % 2
    assert charge_of(gens["E0"]) == 1
    assert charge_of(gens["F1"]) == 1


def test_a_half_squares_to_a():
    for kind, n_param, length in (("spin_half", 2, 3), ("highest_weight", 3, 2)):
        ctx = ChainContext(build_site_rep(kind, n_param), length)
        gens = build_chain_generators(ctx)
        assert gens["A_L_half"] @ gens["A_L_half"] == gens["A_L"]
        assert gens["A_L_half"] @ a_half_inverse(ctx) == \
            build_chain_generators(ctx)["K"] @ build_chain_generators(ctx)["K_inv"]


# ---------------------------------------------------------------------------
# clock-dressed (barred) operators


@pytest.mark.parametrize("kind,n_param,length", [
    ("spin_half", 2, 2), ("spin_half", 2, 4), ("spin_half", 3, 3),
    ("highest_weight", 3, 2),
])
def test_half_clock_commutation(kind, n_param, length):
    ctx = ChainContext(build_site_rep(kind, n_param), length)
    for check in check_half_clock_commutation(ctx):
        assert check.status == EXACT_ZERO, (check.check_id, check.witness)


def test_barred_length_one_example():
    # at L=1 the first barred lowering operator is q^-1 A^(1/2) f'
    ctx = ChainContext(build_site_rep("spin_half", 2), 1)
    barred = build_barred_ops(ctx)
    entries = [(r, c, v.render()) for _, r, c, v in barred["B1bar"].entries()]
    assert entries == [(1, 0, "q^-1")]
    entries = [(r, c, v.render()) for _, r, c, v in barred["C0bar"].entries()]
    # C0bar = -q^(L-2) E1 A^(1/2): entry (0,1), scalar -q^-1 * q^0
    assert entries == [(0, 1, "-q^-1")]


def test_barred_shifts():
    ctx = ChainContext(build_site_rep("spin_half", 2), 3)
    barred = build_barred_ops(ctx)
    assert barred["B1bar"].shift == 1
    assert barred["BLbar"].shift == 1
    assert barred["C0bar"].shift == -1
    assert barred["CL1bar"].shift == -1


def test_cyclic_backend_refuses_half_clock():
    ctx = ChainContext(build_site_rep("cyclic", 3, {"c": 0}), 2)
    with pytest.raises(WrapInconsistency):
        build_barred_ops(ctx)


# ---------------------------------------------------------------------------
# graded storage mechanics


def test_sector_project_keeps_charge_class():
    ctx = ChainContext(build_site_rep("spin_half", 2), 4)
    e1 = build_chain_generators(ctx)["E1"]
    proj = sector_project(e1, 1)
    assert set(proj.blocks) == {g for g in e1.blocks if g % 2 == 1}
    assert not sector_project(e1, 0).is_zero()
    assert sector_project(e1, 0).blocks.keys() | proj.blocks.keys() == \
        e1.blocks.keys()


def test_not_graded_on_mixed_entries():
    ctx = ChainContext(build_site_rep("spin_half", 2), 1)
    with pytest.raises(NotGraded):
        operator_from_entries(
            ctx, LAURENT_RING,
            [(0, 1, LaurentPoly(1)), (1, 1, LaurentPoly(1))])


def test_charge_of_validates_block_shapes():
    ctx = ChainContext(build_site_rep("spin_half", 2), 2)
    e1 = build_chain_generators(ctx)["E1"]
    assert charge_of(e1) == 1 % 2
    bad = GradedOperator(ctx, LAURENT_RING, 0, dict(e1.blocks))
    with pytest.raises(NotGraded):
        charge_of(bad)


def test_block_algebra_laws():
    ctx = ChainContext(build_site_rep("spin_half", 2), 3)
    gens = build_chain_generators(ctx)
    e1, f1, f0 = gens["E1"], gens["F1"], gens["F0"]
    assert (e1 @ f1) @ e1 == e1 @ (f1 @ e1)
    assert (e1 + f0) @ f1 == e1 @ f1 + f0 @ f1
    assert (e1 - e1).is_zero()
    assert e1.scale(LaurentPoly(3)) == e1 + e1 + e1


def test_specialization_is_a_homomorphism_on_operators():
    ctx = ChainContext(build_site_rep("spin_half", 2), 3)
    gens = build_chain_generators(ctx)
    e1, f1 = gens["E1"], gens["F1"]
    ring = cyclo_ring(2)
    assert specialize_operator(e1 @ f1, ring) == \
        specialize_operator(e1, ring) @ specialize_operator(f1, ring)
    adic = PhiAdicRing(2, 3)
    prod_adic = specialize_operator(e1 @ f1, adic)
    lhs = specialize_operator(e1, adic) @ specialize_operator(f1, adic)
    assert prod_adic == lhs


def test_rescale_leaves_homogeneous_checks_alone():
    alpha = LaurentPoly.q_power(3)
    beta = -LaurentPoly.q_power(1)
    rep = build_site_rep("spin_half", 2)
    ctx = ChainContext(rescaled_rep(rep, alpha, beta), 3)
    for check in check_half_clock_commutation(ctx):
        assert check.status == EXACT_ZERO
    by_family = {}
    for check in check_chain_chevalley(ctx):
        by_family.setdefault(check.family, []).append(check)
    for check in by_family["chain.k-exchange"]:
        assert check.status == EXACT_ZERO
    for check in by_family["chain.grading"]:
        assert check.status == EXACT_ZERO
    for check in by_family["chain.mixed-commutator"]:
        assert check.ok
    # the level-zero commutator is intentionally not rescale-invariant
    assert any(c.status == NONZERO for c in by_family["chain.ef-commutator"])
