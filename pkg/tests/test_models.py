"""Occupancy models, label laws, order statistics, sufficiency, sampling."""

import math
import random
from fractions import Fraction

import pytest

from eomkit import combinat
from eomkit.errors import EmptySupportError, NonExchangeableError
from eomkit.models import (
    LabelDistribution,
    MixingSpec,
    OccupancyDistribution,
    WeightFunction,
    builtin_weight,
    conditional_from_iid,
    is_exchangeable,
    label_distribution,
    label_marginal,
    normalization_constant,
    occupancy_from_labels,
    order_statistics_distribution,
    sample,
    weight_model,
    weight_model_label_density,
)

F = Fraction


def point_mass(n, r, x):
    return OccupancyDistribution(n, r, {tuple(x): F(1)})


def test_builtin_weight_tables():
    assert builtin_weight("mb", 3).values == (F(1), F(1), F(1, 2), F(1, 6))
    assert builtin_weight("be", 2).values == (F(1), F(1), F(1))
    assert builtin_weight("fd", 3).values == (F(1), F(1), F(0), F(0))
    # binom(s+x-1, x) for s=2 and x = 0, 1, 2
    assert builtin_weight("pc:2", 2).values == (F(1), F(2), F(3))
    with pytest.raises(ValueError):
        builtin_weight("bose", 2)
    with pytest.raises(ValueError):
        builtin_weight("pc:0", 2)


def test_weight_function_validation():
    with pytest.raises(ValueError):
        WeightFunction(())
    with pytest.raises(ValueError):
        WeightFunction((F(1), F(-1)))
    with pytest.raises(ValueError):
        WeightFunction((F(0), F(0)))
    a = WeightFunction((1, 1, 5))
    assert a(2) == 5 and a.x_max == 2
    with pytest.raises(ValueError):
        a(3)
    assert builtin_weight("fd", 3).support() == [0, 1]


def test_normalization_constant_values():
    assert normalization_constant(builtin_weight("be", 2), 3, 2) == 6
    # 1/2 + 1 + 1/2 over the three compositions of 2 into 2 cells
    assert normalization_constant(builtin_weight("mb", 2), 2, 2) == 2
    assert normalization_constant(builtin_weight("fd", 2), 3, 2) == 3


def test_normalization_constant_matches_brute_force():
    rng = random.Random(5)
    for _ in range(10):
        n, r = rng.randint(1, 4), rng.randint(0, 4)
        a = WeightFunction(
            tuple(F(rng.randint(0, 6), rng.randint(1, 5)) for _ in range(r + 1))
        )
        if all(v == 0 for v in a.values):
            continue
        brute = sum(
            math.prod((a(v) for v in x), start=F(1))
            for x in combinat.enumerate_compositions(n, r)
        )
        assert normalization_constant(a, n, r) == brute


def test_weight_model_tables():
    be = weight_model(builtin_weight("be", 2), 2, 2)
    assert be.table == {(0, 2): F(1, 3), (1, 1): F(1, 3), (2, 0): F(1, 3)}
    mb = weight_model(builtin_weight("mb", 2), 2, 2)
    assert mb.table == {(0, 2): F(1, 4), (1, 1): F(1, 2), (2, 0): F(1, 4)}
    fd = weight_model(builtin_weight("fd", 2), 2, 2)
    assert fd.table == {(1, 1): F(1)}
    with pytest.raises(EmptySupportError):
        weight_model(builtin_weight("fd", 3), 2, 3)


def test_distribution_validation():
    with pytest.raises(ValueError):
        OccupancyDistribution(2, 2, {(1, 1): F(1, 2)})
    with pytest.raises(ValueError):
        OccupancyDistribution(2, 2, {(1, 2): F(1)})
    with pytest.raises(ValueError):
        OccupancyDistribution(2, 2, {(1, 1): F(-1), (2, 0): F(2)})
    d = OccupancyDistribution(2, 1, {(1, 0): F(1, 2), (0, 1): F(1, 2)})
    assert d.probability((1, 0)) == F(1, 2)
    with pytest.raises(ValueError):
        d.probability((1, 1))


def test_is_exchangeable():
    for kind in ("mb", "be", "fd", "pc:2"):
        assert is_exchangeable(weight_model(builtin_weight(kind, 2), 3, 2))
    assert not is_exchangeable(point_mass(2, 2, (2, 0)))
    space = combinat.enumerate_compositions(3, 2)
    uniform = OccupancyDistribution(3, 2, {x: F(1, len(space)) for x in space})
    assert is_exchangeable(uniform)
    lopsided = OccupancyDistribution(
        2, 2, {(2, 0): F(1, 2), (0, 2): F(1, 4), (1, 1): F(1, 4)}
    )
    assert not is_exchangeable(lopsided)


def test_label_distribution_tables():
    mb = label_distribution(weight_model(builtin_weight("mb", 2), 2, 2))
    assert mb.table == {y: F(1, 4) for y in combinat.enumerate_labels(2, 2)}
    be = label_distribution(weight_model(builtin_weight("be", 2), 2, 2))
    assert be.table == {
        (1, 1): F(1, 3),
        (1, 2): F(1, 6),
        (2, 1): F(1, 6),
        (2, 2): F(1, 3),
    }


def test_label_distribution_r1_reads_cells():
    d = weight_model(builtin_weight("pc:2", 1), 3, 1)
    ld = label_distribution(d)
    for j in range(1, 4):
        x = tuple(1 if i == j - 1 else 0 for i in range(3))
        assert ld.probability((j,)) == d.probability(x)


def test_label_distribution_requires_exchangeable():
    with pytest.raises(NonExchangeableError):
        label_distribution(point_mass(2, 2, (2, 0)))


def test_occupancy_from_labels():
    for kind in ("mb", "be", "fd"):
        for n in range(2, 4):
            for r in range(1, 4):
                try:
                    d = weight_model(builtin_weight(kind, r), n, r)
                except EmptySupportError:
                    continue
                assert occupancy_from_labels(label_distribution(d)) == d
    # independent uniform labels over two cells give the factorial-decay model
    iid = LabelDistribution(2, 2, {y: F(1, 4) for y in combinat.enumerate_labels(2, 2)})
    assert occupancy_from_labels(iid) == weight_model(builtin_weight("mb", 2), 2, 2)
    stuck = LabelDistribution(3, 2, {(1, 1): F(1)})
    assert occupancy_from_labels(stuck) == point_mass(3, 2, (2, 0, 0))
    with pytest.raises(NonExchangeableError):
        occupancy_from_labels(LabelDistribution(2, 2, {(1, 2): F(1)}))


def test_order_statistics_tables():
    be = order_statistics_distribution(weight_model(builtin_weight("be", 2), 2, 2))
    assert be == {(1, 1): F(1, 3), (1, 2): F(1, 3), (2, 2): F(1, 3)}
    mb = order_statistics_distribution(weight_model(builtin_weight("mb", 2), 2, 2))
    assert mb == {(1, 1): F(1, 4), (1, 2): F(1, 2), (2, 2): F(1, 4)}


def test_order_statistics_single_particle():
    d = weight_model(builtin_weight("pc:3", 1), 3, 1)
    order = order_statistics_distribution(d)
    for j in range(1, 4):
        x = tuple(1 if i == j - 1 else 0 for i in range(3))
        assert order[(j,)] == d.probability(x)


def test_order_statistics_match_sorted_labels():
    for kind in ("mb", "be", "pc:2"):
        for n in range(2, 4):
            for r in range(1, 4):
                d = weight_model(builtin_weight(kind, r), n, r)
                brute = {}
                for y, p in label_distribution(d).table.items():
                    key = tuple(sorted(y))
                    brute[key] = brute.get(key, F(0)) + p
                assert order_statistics_distribution(d) == brute


def test_label_marginal_uniform():
    ld = label_distribution(weight_model(builtin_weight("be", 2), 3, 2))
    marg = label_marginal(ld, {1})
    assert marg.table == {(1,): F(1, 3), (2,): F(1, 3), (3,): F(1, 3)}
    for n in range(2, 5):
        for r in range(1, 4):
            ld = label_distribution(weight_model(builtin_weight("mb", r), n, r))
            for i in range(1, r + 1):
                marg = label_marginal(ld, {i})
                assert all(p == F(1, n) for p in marg.table.values())


def test_label_marginal_full_and_errors():
    ld = label_distribution(weight_model(builtin_weight("be", 2), 2, 2))
    assert label_marginal(ld, range(1, 3)).table == ld.table
    with pytest.raises(ValueError):
        label_marginal(ld, set())
    with pytest.raises(ValueError):
        label_marginal(ld, {3})


def test_weight_model_label_density_values():
    assert weight_model_label_density(builtin_weight("be", 2), 2, 2, (1, 2)) == F(1, 6)
    assert weight_model_label_density(builtin_weight("mb", 2), 3, 2, (1, 3)) == F(1, 9)
    assert weight_model_label_density(builtin_weight("fd", 2), 2, 2, (1, 1)) == F(0)


def test_weight_model_label_density_matches_table():
    for kind in ("mb", "be", "fd", "pc:2"):
        for n in range(2, 4):
            for r in range(1, 4):
                a = builtin_weight(kind, r)
                try:
                    ld = label_distribution(weight_model(a, n, r))
                except EmptySupportError:
                    continue
                for y in combinat.enumerate_labels(r, n):
                    assert weight_model_label_density(a, n, r, y) == ld.probability(y)


MIXES = [
    MixingSpec(((F(1, 2), F(1)),)),
    MixingSpec(((F(1, 3), F(1, 2)), (F(2, 3), F(1, 2)))),
    MixingSpec(((F(1, 5), F(1, 4)), (F(1, 2), F(1, 4)), (F(3, 4), F(1, 2)))),
]


def test_conditional_from_iid_recovers_builtins():
    n, r = 2, 2
    theta = F(1, 2)
    poisson = [theta**x / math.factorial(x) for x in range(r + 1)]
    assert conditional_from_iid(poisson, n, r) == weight_model(builtin_weight("mb", r), n, r)
    geometric = [F(1, 3) * F(2, 3) ** x for x in range(r + 1)]
    assert conditional_from_iid(geometric, n, r) == weight_model(builtin_weight("be", r), n, r)
    bernoulli = [F(3, 4), F(1, 4), F(0)]
    assert conditional_from_iid(bernoulli, n, r) == weight_model(builtin_weight("fd", r), n, r)
    negbin = [F(math.comb(1 + x, x)) * F(1, 3) ** x * F(4, 9) for x in range(r + 1)]
    assert conditional_from_iid(negbin, n, r) == weight_model(builtin_weight("pc:2", r), n, r)


def test_conditional_from_iid_mixture_invariance():
    q = [F(1, 3) * F(2, 3) ** x for x in range(4)]
    plain = conditional_from_iid(q, 2, 3)
    for mix in MIXES:
        assert conditional_from_iid(q, 2, 3, mix) == plain


def test_conditional_from_iid_errors():
    with pytest.raises(ValueError):
        conditional_from_iid([F(1)], 2, 2)  # table stops short of the total
    with pytest.raises(EmptySupportError):
        conditional_from_iid([F(1), F(0), F(0)], 2, 2, MIXES[0])


def test_mixing_spec_validation():
    with pytest.raises(ValueError):
        MixingSpec(())
    with pytest.raises(ValueError):
        MixingSpec(((F(2), F(1)),))
    with pytest.raises(ValueError):
        MixingSpec(((F(1, 2), F(1, 2)),))
    mix = MIXES[1]
    assert mix.factor(0) == 1
    assert mix.factor(1) == F(1, 2) * F(1, 3) + F(1, 2) * F(2, 3)


def test_sample_point_mass_and_determinism():
    d = point_mass(3, 2, (0, 2, 0))
    rng = random.Random(1)
    assert all(sample(d, rng) == (0, 2, 0) for _ in range(5))
    be = weight_model(builtin_weight("be", 2), 2, 2)
    rng_a, rng_b = random.Random(7), random.Random(7)
    first = [sample(be, rng_a) for _ in range(50)]
    second = [sample(be, rng_b) for _ in range(50)]
    assert first == second
    assert set(first) == set(be.table)
