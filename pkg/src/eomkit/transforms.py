"""Maps between occupancy models: particle drop, cell erasure, conditioning.

All three transformations send exchangeable models to exchangeable models;
the product-form (weighted) models are closed under conditioning always and
under particle drop exactly when the weight table passes
``check_drop_closure``.
"""

from fractions import Fraction
from typing import NamedTuple

from . import combinat
from .combinat import Composition
from .errors import ConditioningError, EmptySupportError, NonExchangeableError
from .models import (
    ONE,
    ZERO,
    OccupancyDistribution,
    WeightFunction,
    is_exchangeable,
    normalization_constant,
    weight_model,
)


def drop_particle(d: OccupancyDistribution) -> OccupancyDistribution:
    """Remove one particle uniformly at random; model on one particle fewer.

    A composition ``x`` sends mass p(x) * x_h / r to the composition with
    cell ``h`` decremented, for every occupied cell ``h``.
    """
    if d.r < 1:
        raise ValueError("no particle to drop from an empty model")
    out: dict[Composition, Fraction] = {}
    for x, p in d.table.items():
        for h, c in enumerate(x):
            if c:
                key = x[:h] + (c - 1,) + x[h + 1 :]
                out[key] = out.get(key, ZERO) + p * Fraction(c, d.r)
    return OccupancyDistribution(d.n, d.r - 1, out)


def erase_cell(d: OccupancyDistribution) -> OccupancyDistribution:
    """Erase the last cell, replacing its particles uniformly and independently.

    Each particle from the erased cell lands in one of the remaining ``n-1``
    cells with equal probability, independently of the others.
    """
    if d.n < 2:
        raise ValueError("erasing the only cell would leave no cells")
    target_cells = d.n - 1
    out: dict[Composition, Fraction] = {}
    for x, p in d.table.items():
        moved = x[-1]
        base = x[:-1]
        denom = target_cells**moved
        for extra in combinat.enumerate_compositions(target_cells, moved):
            key = tuple(b + e for b, e in zip(base, extra))
            share = Fraction(combinat.multinomial(moved, extra), denom)
            out[key] = out.get(key, ZERO) + p * share
    return OccupancyDistribution(target_cells, d.r, out)


def condition_on_partial_sum(
    d: OccupancyDistribution, n: int, s: int
) -> OccupancyDistribution:
    """Law of the first ``n`` cells given that they hold ``s`` particles."""
    if not 1 <= n < d.n:
        raise ValueError(f"partial cell count must be in 1..{d.n - 1}, got {n}")
    if not 0 <= s <= d.r:
        raise ValueError(f"partial particle count must be in 0..{d.r}, got {s}")
    acc: dict[Composition, Fraction] = {}
    total = ZERO
    for x, p in d.table.items():
        head = x[:n]
        if sum(head) == s:
            acc[head] = acc.get(head, ZERO) + p
            total += p
    if total == 0:
        raise ConditioningError(
            f"conditioning event (first {n} cells hold {s} particles) has probability zero"
        )
    return OccupancyDistribution(n, s, {x: p / total for x, p in acc.items()})


class DropClosureResult(NamedTuple):
    holds: bool
    witness: Composition | None


def check_drop_closure(a: WeightFunction, n: int, r: int) -> DropClosureResult:
    """Exact test that dropping a particle preserves the product form.

    For every composition x' of r-1 in the support of the smaller model the
    drop-map inflow must equal that model's probability, which reduces to

        (C(n, r-1) / C(n, r)) * sum_h ((x'_h + 1) / r) * a(x'_h + 1) / a(x'_h) == 1

    with C the normalization constants.  On failure the first violating x'
    is returned as witness.  Compositions outside the support are skipped:
    they carry no mass in either model.
    """
    if r < 1:
        raise ValueError("closure under particle drop needs at least one particle")
    c_lo = normalization_constant(a, n, r - 1)
    c_hi = normalization_constant(a, n, r)
    if c_lo == 0 or c_hi == 0:
        raise EmptySupportError(
            f"weight table has zero total mass over {n} cells at {r - 1} or {r} particles"
        )
    ratio = c_lo / c_hi
    for xp in combinat.enumerate_compositions(n, r - 1):
        if any(a(v) == 0 for v in xp):
            continue
        total = ZERO
        for v in xp:
            total += Fraction(v + 1, r) * (a(v + 1) / a(v))
        if ratio * total != 1:
            return DropClosureResult(False, xp)
    return DropClosureResult(True, None)


def _integer_root(m: int, k: int) -> int | None:
    """Exact k-th root of a nonnegative integer, or None if inexact."""
    if m < 0 or k < 1:
        return None
    if m < 2 or k == 1:
        return m
    x = 1 << -(-m.bit_length() // k)
    while True:
        y = ((k - 1) * x + m // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    return x if x**k == m else None


def _fraction_root(q: Fraction, k: int) -> Fraction | None:
    """Exact rational k-th root of a positive rational, or None."""
    if q <= 0:
        return None
    if k < 0:
        q, k = 1 / q, -k
    num = _integer_root(q.numerator, k)
    den = _integer_root(q.denominator, k)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def _solve_multiplicative(rows, ncols: int) -> list[Fraction] | None:
    """Solve prod_j x_j**e_ij == q_i for positive rationals x_j.

    Integer Gaussian elimination on the exponent matrix (gcd combination of
    rows, so targets only ever take integer powers); free variables are set
    to 1 and pivots with exponent |k| > 1 require exact rational k-th roots.
    Returns None when no solution is found along this route.
    """
    mat = [(list(e), Fraction(q)) for e, q in rows]
    pivot_of_col: dict[int, int] = {}
    rowpos = 0
    for col in range(ncols):
        live = [i for i in range(rowpos, len(mat)) if mat[i][0][col] != 0]
        if not live:
            continue
        while len(live) > 1:
            live.sort(key=lambda i: abs(mat[i][0][col]))
            a_i, b_i = live[0], live[1]
            ea, eb = mat[a_i][0][col], mat[b_i][0][col]
            k = eb // ea
            new_e = [x - k * y for x, y in zip(mat[b_i][0], mat[a_i][0])]
            new_q = mat[b_i][1] / mat[a_i][1] ** k
            mat[b_i] = (new_e, new_q)
            if new_e[col] == 0:
                live.remove(b_i)
        pivot = live[0]
        mat[rowpos], mat[pivot] = mat[pivot], mat[rowpos]
        pivot_of_col[col] = rowpos
        rowpos += 1
    for i in range(rowpos, len(mat)):
        if mat[i][1] != 1:
            return None
    x: list[Fraction | None] = [None] * ncols
    for col in sorted(pivot_of_col, reverse=True):
        e, q = mat[pivot_of_col[col]]
        residual = q
        for j in range(ncols):
            if j == col or e[j] == 0:
                continue
            if x[j] is None:
                x[j] = ONE
            residual /= x[j] ** e[j]
        root = _fraction_root(residual, e[col])
        if root is None:
            return None
        x[col] = root
    return [v if v is not None else ONE for v in x]


def product_form_weights(d: OccupancyDistribution) -> WeightFunction | None:
    """Recover weights whose product-form model equals ``d`` exactly, if any.

    Returns None when the (exchangeable) distribution is not of product form.
    The recovered table is one gauge choice; any rescaling a(x) -> c * t**x
    yields the same model.  A candidate is only returned after rebuilding the
    model from it and comparing tables, so a non-None result is always valid.
    """
    if not is_exchangeable(d):
        raise NonExchangeableError("product-form detection requires an exchangeable model")
    support = d.support()
    values = sorted({v for x in support for v in x})
    expected = [
        x
        for x in combinat.enumerate_compositions(d.n, d.r)
        if all(v in set(values) for v in x)
    ]
    if expected != support:
        return None
    col = {v: i for i, v in enumerate(values)}
    multisets = sorted({tuple(sorted(x)) for x in support})
    ref = multisets[0]
    ref_counts = [ref.count(v) for v in values]
    rows = []
    for m in multisets[1:]:
        exps = [m.count(v) - c for v, c in zip(values, ref_counts)]
        rows.append((exps, d.table[m] / d.table[ref]))
    if rows:
        solution = _solve_multiplicative(rows, len(values))
        if solution is None:
            return None
    else:
        solution = [ONE] * len(values)
    vals = [ZERO] * (d.r + 1)
    for v, a_v in zip(values, solution):
        vals[v] = a_v
    candidate = WeightFunction(tuple(vals))
    try:
        rebuilt = weight_model(candidate, d.n, d.r)
    except EmptySupportError:
        return None
    return candidate if rebuilt == d else None
