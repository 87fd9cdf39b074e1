"""Ring-level correctness: Laurent, cyclotomic, Phi-adic, float."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qloop.rings import (
    CycloRing,
    FloatRing,
    LaurentPoly,
    LaurentRing,
    NotDivisible,
    PhiAdicRing,
    TruncationOverflow,
    cyclo_ring,
    cyclotomic_poly,
    ring_is_zero,
)


# ---------------------------------------------------------------------------
# cyclotomic polynomials


def test_cyclotomic_against_sympy():
    import sympy

    x = sympy.symbols("x")
    for m in range(1, 31):
        ours = list(cyclotomic_poly(m))
        theirs = sympy.Poly(sympy.cyclotomic_poly(m, x), x).all_coeffs()[::-1]
        assert ours == [int(c) for c in theirs], f"Phi_{m} mismatch"


def test_cyclotomic_small_values_frozen():
    assert cyclotomic_poly(4) == (1, 0, 1)
    assert cyclotomic_poly(6) == (1, -1, 1)
    assert cyclotomic_poly(8) == (1, 0, 0, 0, 1)
    assert cyclotomic_poly(10) == (1, -1, 1, -1, 1)
    assert cyclotomic_poly(12) == (1, 0, -1, 0, 1)


# ---------------------------------------------------------------------------
# LaurentPoly


laurent_strategy = st.dictionaries(
    st.integers(min_value=-8, max_value=8),
    st.integers(min_value=-9, max_value=9),
    max_size=6,
).map(LaurentPoly)


@given(laurent_strategy, laurent_strategy, laurent_strategy)
@settings(max_examples=200)
def test_laurent_ring_laws(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == LaurentPoly(0)
    assert a * LaurentPoly(1) == a


@given(laurent_strategy)
@settings(max_examples=100)
def test_laurent_canonical_no_zero_coeffs(a):
    assert all(v != 0 for v in a.c.values())
    assert (a - a).c == {}


def test_laurent_division_exact_and_inexact():
    a = LaurentPoly({3: 2, -1: 5})
    b = LaurentPoly({2: 1, 0: -1})
    assert (a * b).divexact(b) == a
    assert (a * b).divexact(a) == b
    with pytest.raises(NotDivisible):
        LaurentPoly({0: 1, 1: 1}).divexact(LaurentPoly({0: -1, 1: 1}))
    with pytest.raises(NotDivisible):
        LaurentPoly({0: 3}).divexact(LaurentPoly({0: 2}))
    with pytest.raises(ZeroDivisionError):
        a.divexact(LaurentPoly(0))


def test_laurent_render_canonical():
    assert LaurentPoly(0).render() == "0"
    assert LaurentPoly({2: 1, 0: -3, -1: 2}).render() == "2*q^-1 - 3 + q^2"
    assert LaurentPoly({1: -1}).render() == "-q"
    assert LaurentPoly({-2: 1}).render() == "q^-2"


def test_laurent_pow_and_eval():
    p = LaurentPoly({1: 1, -1: 1})
    assert p**2 == LaurentPoly({2: 1, 0: 2, -2: 1})
    z = 0.3 + 0.7j
    assert abs((p**3).evaluate(z) - p.evaluate(z) ** 3) < 1e-12


# ---------------------------------------------------------------------------
# cross-ring homomorphisms on seeded random pairs


def _random_laurent(rng: random.Random) -> LaurentPoly:
    n_terms = rng.randint(0, 5)
    return LaurentPoly(
        {rng.randint(-10, 10): rng.randint(-15, 15) for _ in range(n_terms)}
    )


@pytest.mark.parametrize("n_param", [2, 3, 4, 5])
def test_ring_homomorphisms_random(n_param):
    rng = random.Random(20260818 + n_param)
    cyclo = cyclo_ring(n_param)
    adic = PhiAdicRing(n_param, 3)
    flt = FloatRing(n_param)
    for _ in range(250):
        a = _random_laurent(rng)
        b = _random_laurent(rng)
        ca, cb = cyclo.from_laurent(a), cyclo.from_laurent(b)
        assert cyclo.from_laurent(a * b) == ca * cb
        assert cyclo.from_laurent(a + b) == ca + cb
        pa, pb = adic.embed(a), adic.embed(b)
        assert adic.embed(a * b) == pa * pb
        assert adic.embed(a + b) == pa + pb
        # digit zero of the adic embedding is the cyclotomic residue
        assert adic.specialize(pa) == ca
        # float evaluation agrees with the cyclotomic coordinate evaluation
        za = LaurentPoly(dict(enumerate(ca.coords))).evaluate(flt.q)
        assert abs(za - a.evaluate(flt.q)) < 1e-8 * (1 + a.max_abs_coeff())


@pytest.mark.parametrize("n_param", [2, 3, 5])
def test_cyclo_division_random(n_param):
    rng = random.Random(91 + n_param)
    cyclo = cyclo_ring(n_param)
    for _ in range(120):
        a = cyclo.from_laurent(_random_laurent(rng))
        b = cyclo.from_laurent(_random_laurent(rng))
        if b.is_zero():
            continue
        assert cyclo.divexact(a * b, b) == a


def test_cyclo_division_inexact():
    cyclo = cyclo_ring(2)
    two = cyclo.from_int(2)
    with pytest.raises(NotDivisible):
        cyclo.divexact(cyclo.from_int(3), two)
    with pytest.raises(ZeroDivisionError):
        cyclo.divexact(two, cyclo.zero)


def test_cyclo_root_of_unity_facts():
    for n_param in (2, 3, 4, 6):
        cyclo = cyclo_ring(n_param)
        assert cyclo.q_power(2 * n_param) == cyclo.one
        assert cyclo.q_power(n_param) == -cyclo.one          # q^N = -1
        assert cyclo.q_power(-1) * cyclo.q == cyclo.one
        assert cyclo.omega ** n_param == cyclo.one           # omega = q^2


# ---------------------------------------------------------------------------
# Phi-adic specifics


def test_phi_adic_valuation_and_division():
    adic = PhiAdicRing(2, 4)
    phi = adic.phi_elem
    unit = adic.embed(LaurentPoly({1: 3, 0: 1}))
    elem = phi * phi * unit
    assert elem.valuation() == 2
    assert adic.divexact(elem, phi * phi) == unit
    assert adic.divexact(elem, phi).valuation() == 1
    with pytest.raises(NotDivisible):
        adic.divexact(unit, phi)


def test_phi_adic_truncation_overflow():
    adic = PhiAdicRing(2, 2)
    phi = adic.phi_elem
    x = phi * phi * phi  # valuation beyond the last digit: looks like zero
    assert x.is_zero()
    big = adic.one
    for _ in range(3):
        big = adic.divexact(big * phi, phi)  # fine: valuation bookkeeping
    with pytest.raises((TruncationOverflow, ZeroDivisionError)):
        adic.divexact(adic.one, x)


def test_phi_adic_qinv():
    for n_param in (2, 3, 4):
        adic = PhiAdicRing(n_param, 3)
        assert adic.qinv * adic.q == adic.one
        assert adic.embed(LaurentPoly({-3: 1})) * adic.embed(LaurentPoly({3: 1})) == adic.one


def test_phi_adic_precision_tracks_division():
    adic = PhiAdicRing(3, 3)
    phi = adic.phi_elem
    q = adic.divexact(adic.one * phi, phi)
    assert q.prec == adic.trunc_order  # one digit of information spent
    assert q == adic.one


# ---------------------------------------------------------------------------
# protocol helpers


def test_ring_is_zero_across_rings():
    assert ring_is_zero(LaurentRing(), LaurentPoly(0))
    assert not ring_is_zero(LaurentRing(), LaurentPoly(2))
    cyclo = cyclo_ring(3)
    assert ring_is_zero(cyclo, cyclo.zero)
    flt = FloatRing(3)
    assert ring_is_zero(flt, 1e-12 + 0j)
    assert not ring_is_zero(flt, 1e-3 + 0j)
