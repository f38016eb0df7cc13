from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from chebminor.cyclotomic import cyclotomic_context
from chebminor.errors import PreconditionError
from chebminor.uncertainty import (
    GroupFunction,
    GroupLayout,
    dft,
    feasibility_search,
    inverse_dft,
    kernel_function,
    support_profile,
    verify_equivalence,
)


def random_function(r, m, rng, density=0.5):
    n = r * m
    ctx = cyclotomic_context(n)
    vals = []
    for _ in range(n):
        if rng.random() < density:
            vals.append(ctx.element([rng.randint(-2, 2) for _ in range(ctx.phi_n)]))
        else:
            vals.append(ctx.zero)
    return GroupFunction.from_values(r, m, vals)


def test_layout():
    lay = GroupLayout(2, 5)
    assert lay.layers() == [[0, 2, 4, 6, 8], [1, 3, 5, 7, 9]]
    assert GroupLayout(1, 5).layers() == [list(range(5))]
    with pytest.raises(PreconditionError):
        GroupLayout(2, 4)


def test_dft_example_coset_indicator():
    f = GroupFunction.indicator(2, 3, [0, 3])
    assert [str(v) for v in dft(f).values] == ["2", "0", "2", "0", "2", "0"]


def test_support_profile_examples():
    prof = support_profile(GroupFunction.indicator(2, 5, [0]))
    assert (prof.s, prof.s_hat) == ((1, 0), (5, 5))
    assert prof.uncertainty_holds
    with pytest.raises(PreconditionError):
        support_profile(GroupFunction.from_values(2, 3, [0] * 6))


def test_random_sparse_profiles_on_z15():
    rng = random.Random(15)
    for _ in range(20):
        f = random_function(3, 5, rng, density=0.2)
        if f.is_zero():
            continue
        prof = support_profile(f)
        assert all(0 <= x <= 5 for x in prof.s + prof.s_hat)
        assert prof.uncertainty_holds


@pytest.mark.parametrize("r,m,count", [(2, 3, 399), (2, 5, 63503), (1, 5, 251), (2, 7, None)])
def test_feasibility_empty(r, m, count):
    if count is None:
        res = feasibility_search(r, m, samples=3000, seed=1)
        assert res.witness is None and res.report.counts["singular"] == 0
        return
    res = feasibility_search(r, m)
    assert res.certified and res.witness is None
    assert res.report.counts["checked"] == count


def test_feasibility_statement_for_single_layer():
    res = feasibility_search(1, 5)
    assert "Z_5" in res.statement() and ">= 6" in res.statement()


def test_feasibility_finds_witness_outside_square_free():
    res = feasibility_search(1, 4)
    assert res.witness is not None and not res.certified
    assert res.witness["f"] == ["1", "0", "-1", "0"]
    assert res.to_json()["witness"]["profile"]["uncertainty_holds"] is False


def test_kernel_function_and_equivalence():
    lay = GroupLayout(1, 4)
    f = kernel_function(lay, [0, 2], [0, 2])
    assert [str(v) for v in f.values] == ["1", "0", "-1", "0"]
    check = verify_equivalence(1, 4, [0, 2], [0, 2], [1, 0, -1, 0])
    assert check.holds and check.vanishes_on_J and check.matrix_singular
    assert kernel_function(GroupLayout(2, 3), [0, 1], [0, 1]) is None


def test_equivalence_nonsingular_case():
    check = verify_equivalence(2, 3, [0, 1], [2, 3], GroupFunction.indicator(2, 3, [0]))
    assert check.holds and not check.matrix_singular and not check.vanishes_on_J


def test_equivalence_preconditions():
    with pytest.raises(PreconditionError):
        verify_equivalence(2, 3, [0], [0], [0] * 6)
    with pytest.raises(PreconditionError):
        verify_equivalence(2, 3, [0], [0], GroupFunction.indicator(2, 3, [1]))
    with pytest.raises(PreconditionError):
        verify_equivalence(2, 3, [0], [1], GroupFunction.indicator(2, 3, [0]))


@given(st.sampled_from([(2, 3), (1, 5), (3, 2), (2, 5)]), st.integers(0, 10**6))
def test_inverse_dft_round_trip(rm, seed):
    f = random_function(*rm, random.Random(seed))
    assert inverse_dft(dft(f)) == f


@given(st.sampled_from([(2, 3), (1, 5), (2, 5)]), st.integers(0, 10**6), st.integers(0, 29))
def test_translation_preserves_support_sizes(rm, seed, t):
    f = random_function(*rm, random.Random(seed))
    g = f.translate(t)
    assert len(g.support) == len(f.support)
    assert len(dft(g).support) == len(dft(f).support)
