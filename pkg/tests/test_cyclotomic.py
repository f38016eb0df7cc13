from __future__ import annotations

from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, strategies as st

from chebminor.cyclotomic import (
    CycElem,
    cyc_add,
    cyc_divides,
    cyc_inverse,
    cyc_mul,
    cyc_neg,
    cyc_norm,
    cyc_root_power,
    cyc_valuation,
    cyclotomic_context,
    cyclotomic_polynomial,
    format_element,
    parse_element,
    reduction_hom,
)
from chebminor.errors import ContextMismatch, PreconditionError


def galois(a: CycElem, k: int) -> CycElem:
    """zeta -> zeta^k applied coefficientwise; independent of the norm code."""
    ctx = a.ctx
    out = ctx.zero
    for i, c in enumerate(a.coeffs):
        out = out + ctx.root_power(i * k) * c
    return out


def norm_by_conjugates(a: CycElem):
    prod = a.ctx.one
    for k in range(1, a.ctx.n):
        if gcd(k, a.ctx.n) == 1:
            prod = prod * galois(a, k)
    assert all(c == 0 for c in prod.coeffs[1:])
    return prod.coeffs[0]


def elements(n, lo=-3, hi=3):
    ctx = cyclotomic_context(n)
    return st.lists(st.integers(lo, hi), min_size=ctx.phi_n, max_size=ctx.phi_n).map(ctx.element)


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(3) == (1, 1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert cyclotomic_polynomial(15) == (1, -1, 0, 1, -1, 1, 0, -1, 1)
    for n in range(2, 40):
        ctx = cyclotomic_context(n)
        assert len(ctx.cyclo_poly) == ctx.phi_n + 1 and ctx.cyclo_poly[-1] == 1


def test_root_power_examples():
    assert cyc_root_power(cyclotomic_context(4), 2).coeffs == (-1, 0)
    assert cyc_root_power(cyclotomic_context(3), 2).coeffs == (-1, -1)
    assert cyc_root_power(cyclotomic_context(15), 15) == cyclotomic_context(15).one


def test_ring_examples():
    c3 = cyclotomic_context(3)
    z = c3.zeta
    assert cyc_mul(1 + z, 1 + z ** 2) == c3.one
    a = c3.parse("2 - 3z")
    assert cyc_add(a, cyc_neg(a)).is_zero()
    c5 = cyclotomic_context(5)
    prod = c5.one
    for k in range(1, 5):
        prod = prod * (c5.one - c5.root_power(k))
    assert prod == c5.from_int(5)


def test_inverse_examples():
    for n in (3, 7, 12):
        ctx = cyclotomic_context(n)
        assert cyc_inverse(ctx.zeta) == ctx.root_power(n - 1)
    c3 = cyclotomic_context(3)
    assert cyc_inverse(c3.one + c3.zeta) == -c3.zeta
    assert cyc_inverse(c3.from_int(2)).coeffs == (Fraction(1, 2), 0)
    with pytest.raises(ZeroDivisionError):
        cyc_inverse(c3.zero)


def test_norm_examples():
    c15 = cyclotomic_context(15)
    assert cyc_norm(c15.one - c15.root_power(3)) == 25  # 1 - zeta_5
    assert cyc_norm(c15.one - c15.root_power(5)) == 81  # 1 - zeta_3
    c5 = cyclotomic_context(5)
    assert cyc_norm(c5.one - c5.zeta) == 5
    assert cyc_norm(c5.from_int(3)) == 81
    assert cyc_norm(c5.from_int(Fraction(1, 2))) == Fraction(1, 16)


def test_divides_examples():
    c5 = cyclotomic_context(5)
    pi = c5.one - c5.zeta
    assert not cyc_divides(pi, c5.from_int(2))
    assert cyc_divides(pi, c5.from_int(5))
    assert cyc_divides(c5.one, c5.parse("3 + z^2"))
    with pytest.raises(ZeroDivisionError):
        cyc_divides(c5.zero, c5.one)


def test_valuation_examples():
    c5 = cyclotomic_context(5)
    assert cyc_valuation(c5.from_int(5), 5) == 4
    assert cyc_valuation(c5.one, 5) == 0
    assert cyc_valuation(c5.from_int(2), 5) == 0
    c15 = cyclotomic_context(15)
    assert cyc_valuation(c15.from_int(5), 5) == 4
    assert cyc_valuation(c15.from_int(3), 3) == 2


def test_valuation_errors():
    c21 = cyclotomic_context(21)
    with pytest.raises(PreconditionError, match="order of 7"):
        cyc_valuation(c21.from_int(7), 7)
    with pytest.raises(PreconditionError):
        cyc_valuation(cyclotomic_context(5).zero, 5)


def test_reduction_hom_examples():
    c15 = cyclotomic_context(15)
    hom = reduction_hom(c15, 5)
    assert hom.target.modulus == (1, 1, 1)
    assert hom(c15.root_power(3)) == hom.target.one
    assert hom(c15.root_power(5)) == hom.target.gen
    assert hom(c15.one - c15.root_power(3)).is_zero()
    hom3 = reduction_hom(c15, 3)
    assert hom3.target.modulus == (1, 1, 1, 1, 1)
    assert hom3(c15.root_power(3)).multiplicative_order() == 5


def test_reduction_hom_rejects_nonprime_ideal():
    with pytest.raises(PreconditionError):
        reduction_hom(cyclotomic_context(21), 7)


def test_mixed_contexts_rejected():
    with pytest.raises(ContextMismatch):
        cyclotomic_context(5).one + cyclotomic_context(7).one


@pytest.mark.parametrize(
    "n,text,expected",
    [
        (5, "1 - z^3", "1 - z^3"),
        (7, "3z^2 + 2*z - 5", "-5 + 2z + 3z^2"),
        (5, "-1/2*z", "-1/2*z"),
        (3, "z^2", "-1 - z"),
        (4, "0", "0"),
    ],
)
def test_grammar(n, text, expected):
    ctx = cyclotomic_context(n)
    a = parse_element(ctx, text)
    assert format_element(a) == expected
    assert parse_element(ctx, format_element(a)) == a


@pytest.mark.parametrize("bad", ["", "1 +", "z^", "2 3", "*z", "x"])
def test_grammar_errors(bad):
    with pytest.raises(PreconditionError):
        parse_element(cyclotomic_context(5), bad)


@given(elements(12, -5, 5))
def test_json_round_trip(a):
    assert CycElem.from_json(a.to_json()) == a


@given(st.sampled_from([3, 5, 8, 12, 15]).flatmap(lambda n: st.tuples(elements(n), elements(n), elements(n))))
def test_ring_axioms(abc):
    a, b, c = abc
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert (a - b) + b == a


@given(st.sampled_from([5, 7, 9, 15]).flatmap(lambda n: st.tuples(elements(n), elements(n))))
def test_norm_multiplicative(ab):
    a, b = ab
    assert cyc_norm(a * b) == cyc_norm(a) * cyc_norm(b)


@given(st.sampled_from([5, 7, 12, 15]).flatmap(elements))
def test_norm_matches_conjugate_product(a):
    assert cyc_norm(a) == norm_by_conjugates(a)


@given(st.sampled_from([5, 7, 9, 15]).flatmap(elements))
def test_inverse(a):
    if not a.is_zero():
        assert a * cyc_inverse(a) == a.ctx.one


@given(st.sampled_from([(5, 5), (15, 5), (15, 3), (10, 5)]).flatmap(
    lambda np_: st.tuples(st.just(np_[1]), elements(np_[0]), elements(np_[0]))))
def test_valuation_additive(pab):
    p, a, b = pab
    if a.is_zero() or b.is_zero():
        return
    assert cyc_valuation(a * b, p) == cyc_valuation(a, p) + cyc_valuation(b, p)


@given(st.sampled_from([(15, 5), (15, 3), (10, 5), (21, 3), (33, 11)]).flatmap(
    lambda np_: st.tuples(st.just(np_), elements(np_[0]), elements(np_[0]))))
def test_reduction_hom_is_ring_hom(case):
    (n, p), a, b = case
    hom = reduction_hom(cyclotomic_context(n), p)
    assert hom(a + b) == hom(a) + hom(b)
    assert hom(a * b) == hom(a) * hom(b)
    pi = cyclotomic_context(n).one - cyclotomic_context(n).root_power(n // p)
    if cyc_divides(pi, a):
        assert hom(a).is_zero()
    assert cyc_divides(pi, a * pi)


@given(st.sampled_from([5, 9, 12]).flatmap(lambda n: st.tuples(elements(n), elements(n))))
def test_conjugation_is_automorphism(ab):
    a, b = ab
    assert (a * b).conj() == a.conj() * b.conj()
    assert a.conj().conj() == a
    assert a.conj() == galois(a, a.ctx.n - 1)
