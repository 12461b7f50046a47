"""Occupancy state spaces and the exact maps between them.

Three finite spaces appear throughout the package, always parameterized by a
cell count ``n`` and a particle count ``r``:

* compositions: length-``n`` tuples of nonnegative ints summing to ``r``
  (the occupancy vectors);
* ordered labels: nondecreasing length-``r`` tuples over ``{1..n}`` (the
  sorted cell labels of the particles);
* label vectors: arbitrary length-``r`` tuples over ``{1..n}``.

Compositions and ordered labels are in bijection (``phi``/``psi``); label
vectors map onto compositions by counting occurrences (``tilde_phi``).
Elements are plain int tuples so they can serve directly as table keys.
"""

import itertools
import math

from .errors import BudgetExceededError, EmptySupportError

Composition = tuple[int, ...]
OrderedLabels = tuple[int, ...]
LabelVector = tuple[int, ...]

#: largest space the enumerators agree to materialize
ENUMERATION_BUDGET = 10**7


def composition_count(n: int, r: int) -> int:
    """Number of length-``n`` compositions of ``r``: binom(n+r-1, n-1)."""
    if n < 1:
        raise ValueError(f"cell count must be >= 1, got {n}")
    if r < 0:
        raise ValueError(f"particle count must be >= 0, got {r}")
    return math.comb(n + r - 1, n - 1)


def _compositions(n: int, r: int):
    if n == 1:
        yield (r,)
        return
    for first in range(r + 1):
        for rest in _compositions(n - 1, r - first):
            yield (first,) + rest


def enumerate_compositions(n: int, r: int) -> list[Composition]:
    """All length-``n`` compositions of ``r`` in lexicographic order."""
    total = composition_count(n, r)
    if total > ENUMERATION_BUDGET:
        raise BudgetExceededError(
            f"composition space for n={n}, r={r} has {total} elements "
            f"(budget {ENUMERATION_BUDGET})"
        )
    return list(_compositions(n, r))


def enumerate_binary_compositions(n: int, r: int) -> list[Composition]:
    """All 0/1 compositions of ``r`` over ``n`` cells, lexicographic order."""
    if n < 1:
        raise ValueError(f"cell count must be >= 1, got {n}")
    if r < 0:
        raise ValueError(f"particle count must be >= 0, got {r}")
    if r > n:
        raise EmptySupportError(
            f"no 0/1 composition places {r} particles in {n} cells"
        )
    out = []
    for ones in itertools.combinations(range(n), r):
        x = [0] * n
        for j in ones:
            x[j] = 1
        out.append(tuple(x))
    return sorted(out)


def tilde_phi(y: LabelVector, n: int) -> Composition:
    """Occupancy counts of an arbitrary label vector over ``n`` cells."""
    if n < 1:
        raise ValueError(f"cell count must be >= 1, got {n}")
    counts = [0] * n
    for label in y:
        if not 1 <= label <= n:
            raise ValueError(f"label {label} outside 1..{n}")
        counts[label - 1] += 1
    return tuple(counts)


def phi(u: OrderedLabels, n: int) -> Composition:
    """Occupancy counts of a nondecreasing label vector over ``n`` cells."""
    if any(a > b for a, b in zip(u, u[1:])):
        raise ValueError(f"labels {u} are not nondecreasing")
    return tilde_phi(u, n)


def psi(x: Composition) -> OrderedLabels:
    """Nondecreasing label vector of a composition: cell j repeated x_j times."""
    labels = []
    for j, count in enumerate(x, start=1):
        if count < 0:
            raise ValueError(f"negative count {count} in composition {x}")
        labels.extend([j] * count)
    return tuple(labels)


def multinomial(r: int, x: Composition) -> int:
    """r! / prod(x_j!) for a composition ``x`` of ``r``."""
    if any(c < 0 for c in x):
        raise ValueError(f"negative count in composition {x}")
    if sum(x) != r:
        raise ValueError(f"composition {x} sums to {sum(x)}, expected {r}")
    out = math.factorial(r)
    for c in x:
        out //= math.factorial(c)
    return out


def enumerate_labels(r: int, n: int) -> list[LabelVector]:
    """All ``n**r`` label vectors in odometer order (last coordinate fastest)."""
    if n < 1:
        raise ValueError(f"cell count must be >= 1, got {n}")
    if r < 0:
        raise ValueError(f"particle count must be >= 0, got {r}")
    total = n**r
    if total > ENUMERATION_BUDGET:
        raise BudgetExceededError(
            f"label space for r={r}, n={n} has {total} elements "
            f"(budget {ENUMERATION_BUDGET})"
        )
    return list(itertools.product(range(1, n + 1), repeat=r))


def distinct_permutation_count(seq) -> int:
    """Number of distinct reorderings of a finite sequence."""
    mults = {}
    for v in seq:
        mults[v] = mults.get(v, 0) + 1
    out = math.factorial(len(seq))
    for m in mults.values():
        out //= math.factorial(m)
    return out


def distinct_permutations(seq) -> list[tuple]:
    """All distinct reorderings of a short sequence, sorted.

    Materializes a set of permutations; intended for the small tuples
    handled by the model layer, not for bulk enumeration.
    """
    return sorted(set(itertools.permutations(seq)))
