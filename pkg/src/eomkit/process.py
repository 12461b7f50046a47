"""Finite-horizon counting processes with product-form jump laws.

A process is stored as the exact joint law of its jump amounts
(J_0, ..., J_M).  Built from a weight table and a terminal count law, the
joint factorizes as R_t(total) * prod_h a(j_h) at every time t, which makes
the conditional law of the jumps given the count a product-form occupancy
model; the checks in this module verify those characterizations and the
equivalent arrival/inter-arrival formulas on arbitrary joints.
"""

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import combinat
from .errors import BudgetExceededError, ConditioningError, EmptySupportError
from .models import (
    ONE,
    ZERO,
    OccupancyDistribution,
    WeightFunction,
    normalization_constant,
    sample_exact,
    weight_model,
)
from .report import CheckOutcome

JumpPath = tuple[int, ...]


@dataclass(frozen=True)
class FiniteProcess:
    """Joint law of the jump amounts (J_0, ..., J_M) of a counting process.

    ``joint`` maps length-(M+1) jump paths to exact probabilities; only
    positive entries are stored.  The weight table must cover occupancies up
    to the largest total any path reaches.
    """

    weight: WeightFunction
    horizon: int
    joint: dict[JumpPath, Fraction]
    _marginals: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.horizon < 0:
            raise ValueError(f"horizon must be >= 0, got {self.horizon}")
        clean = {}
        total = ZERO
        cap = 0
        for path, p in self.joint.items():
            path = tuple(path)
            p = Fraction(p)
            if len(path) != self.horizon + 1 or any(j < 0 for j in path):
                raise ValueError(f"{path} is not a jump path for horizon {self.horizon}")
            if p < 0:
                raise ValueError(f"negative probability {p} at {path}")
            if p:
                clean[path] = p
                total += p
                cap = max(cap, sum(path))
        if total != 1:
            raise ValueError(f"path probabilities sum to {total}, not 1")
        if self.weight.x_max < cap:
            raise ValueError(
                f"weight table covers 0..{self.weight.x_max} but paths reach total {cap}"
            )
        object.__setattr__(self, "joint", clean)

    @property
    def count_cap(self) -> int:
        return max((sum(path) for path in self.joint), default=0)

    def marginal(self, t: int) -> dict[JumpPath, Fraction]:
        """Exact law of the jump prefix (J_0, ..., J_t)."""
        if not 0 <= t <= self.horizon:
            raise ValueError(f"time {t} outside 0..{self.horizon}")
        if t not in self._marginals:
            acc: dict[JumpPath, Fraction] = {}
            for path, p in self.joint.items():
                key = path[: t + 1]
                acc[key] = acc.get(key, ZERO) + p
            self._marginals[t] = acc
        return self._marginals[t]


def build_process(
    a: WeightFunction, horizon: int, terminal_law
) -> FiniteProcess:
    """The unique jump law with terminal count law ``terminal_law`` whose
    conditional given each total is the product-form model for ``a``.

    ``terminal_law`` is a probability table indexed by total count 0..K.
    Every total with positive probability must be reachable, i.e. have a
    positive-weight path.
    """
    if horizon < 0:
        raise ValueError(f"horizon must be >= 0, got {horizon}")
    pi = [Fraction(p) for p in terminal_law]
    if any(p < 0 for p in pi):
        raise ValueError("terminal law has negative entries")
    if sum(pi) != 1:
        raise ValueError(f"terminal law sums to {sum(pi)}, not 1")
    cells = horizon + 1
    budget = sum(
        combinat.composition_count(cells, k) for k, p in enumerate(pi) if p
    )
    if budget > combinat.ENUMERATION_BUDGET:
        raise BudgetExceededError(
            f"jump path space has {budget} elements (budget {combinat.ENUMERATION_BUDGET})"
        )
    joint: dict[JumpPath, Fraction] = {}
    for k, pk in enumerate(pi):
        if not pk:
            continue
        c = normalization_constant(a, cells, k)
        if c == 0:
            raise EmptySupportError(
                f"terminal count {k} has positive probability but no positive-weight path"
            )
        scale = pk / c
        for path in combinat.enumerate_compositions(cells, k):
            w = math.prod((a(j) for j in path), start=ONE)
            if w:
                joint[path] = scale * w
    return FiniteProcess(a, horizon, joint)


def joint_jump_density(p: FiniteProcess, t: int, jumps) -> Fraction:
    """P{J_0 = jumps[0], ..., J_t = jumps[t]}."""
    jumps = tuple(jumps)
    if len(jumps) != t + 1:
        raise ValueError(f"expected {t + 1} jump amounts, got {len(jumps)}")
    if t > p.horizon:
        raise ValueError(f"time {t} beyond horizon {p.horizon}")
    return p.marginal(t).get(jumps, ZERO)


def count_distribution(p: FiniteProcess, t: int) -> dict[int, Fraction]:
    """Exact law of the count N_t, tabulated for every total 0..cap."""
    acc: dict[int, Fraction] = {}
    for prefix, pr in p.marginal(t).items():
        k = sum(prefix)
        acc[k] = acc.get(k, ZERO) + pr
    return {k: acc.get(k, ZERO) for k in range(p.count_cap + 1)}


def terminal_law(p: FiniteProcess) -> dict[int, Fraction]:
    """Law of the total count at the horizon."""
    return count_distribution(p, p.horizon)


def structure_function(p: FiniteProcess, t: int, k: int) -> Fraction:
    """P{N_t = k} divided by the normalization constant over t+1 cells.

    Undefined (raises) when the normalization constant vanishes, i.e. when no
    positive-weight prefix reaches total ``k``.
    """
    if k < 0:
        raise ValueError(f"count must be >= 0, got {k}")
    c = normalization_constant(p.weight, t + 1, k)
    if c == 0:
        raise EmptySupportError(
            f"structure function undefined at t={t}, k={k}: no positive-weight path"
        )
    return count_distribution(p, t).get(k, ZERO) / c


def conditional_jumps_given_count(
    p: FiniteProcess, t: int, k: int
) -> OccupancyDistribution:
    """Law of (J_0, ..., J_t) given N_t = k, as an occupancy model."""
    total = ZERO
    table: dict[JumpPath, Fraction] = {}
    for prefix, pr in p.marginal(t).items():
        if sum(prefix) == k:
            table[prefix] = pr
            total += pr
    if total == 0:
        raise ConditioningError(f"count {k} at time {t} has probability zero")
    return OccupancyDistribution(
        t + 1, k, {prefix: pr / total for prefix, pr in table.items()}
    )


def check_weight_model_conditionals(p: FiniteProcess):
    """Verify that every reachable count conditional is the product-form model.

    Returns (True, None) or (False, (t, k)) at the first failing pair.
    """
    for t in range(p.horizon + 1):
        counts = count_distribution(p, t)
        for k, mass in counts.items():
            if not mass:
                continue
            if conditional_jumps_given_count(p, t, k) != weight_model(
                p.weight, t + 1, k
            ):
                return False, (t, k)
    return True, None


def check_mixed_geometric_form(p: FiniteProcess):
    """Verify the factorization density(prefix) = R(total) * prod a(jump).

    Recovers the R table from the prefix densities and checks it is
    consistent across every prefix, including zero-weight prefixes (which
    must carry zero probability).  Returns (ok, r_table, witness) where
    r_table maps (t, k) to the recovered value and witness names the first
    failing prefix.
    """
    r_table: dict[tuple[int, int], Fraction] = {}
    for t in range(p.horizon + 1):
        marg = p.marginal(t)
        for k in range(p.count_cap + 1):
            for prefix in combinat.enumerate_compositions(t + 1, k):
                prob = marg.get(prefix, ZERO)
                w = math.prod((p.weight(j) for j in prefix), start=ONE)
                if w == 0:
                    if prob != 0:
                        return False, r_table, (t, prefix)
                    continue
                value = prob / w
                if (t, k) not in r_table:
                    r_table[(t, k)] = value
                elif r_table[(t, k)] != value:
                    return False, r_table, (t, prefix)
    return True, r_table, None


def _arrival_profile(arrival_times, horizon: int) -> JumpPath:
    """Jump prefix (j_0..j_t) pinned down by arrival times; t is the last one."""
    times = tuple(arrival_times)
    if not times:
        raise ValueError("at least one arrival time is required")
    if any(t < 0 for t in times):
        raise ValueError(f"arrival times must be >= 0, got {times}")
    if any(a > b for a, b in zip(times, times[1:])):
        raise ValueError(f"arrival times {times} are not nondecreasing")
    last = times[-1]
    if last > horizon:
        raise ValueError(f"arrival time {last} beyond horizon {horizon}")
    jumps = [0] * (last + 1)
    for t in times:
        jumps[t] += 1
    return tuple(jumps)


def interarrival_event_probability(p: FiniteProcess, gaps) -> Fraction:
    """P{Z_1 = gaps[0], ..., Z_k = gaps[-1], Z_{k+1} > 0}.

    The event pins the jump amounts up to the k-th arrival time, so it is
    evaluated as a prefix density; a zero gap is a tie (two arrivals at the
    same time).
    """
    gaps = tuple(gaps)
    if not gaps:
        raise ValueError("at least one inter-arrival gap is required")
    if any(z < 0 for z in gaps):
        raise ValueError(f"gaps must be >= 0, got {gaps}")
    times = []
    acc = 0
    for z in gaps:
        acc += z
        times.append(acc)
    profile = _arrival_profile(times, p.horizon)
    return joint_jump_density(p, len(profile) - 1, profile)


def arrival_event_probability(p: FiniteProcess, arrival_times) -> Fraction:
    """P{T_1 = times[0], ..., T_x = times[-1], T_{x+1} > times[-1]}."""
    profile = _arrival_profile(arrival_times, p.horizon)
    return joint_jump_density(p, len(profile) - 1, profile)


def check_characterizations(p: FiniteProcess) -> list[CheckOutcome]:
    """Cross-verify the four equivalent descriptions of the jump law.

    The conditional jump laws must be the product-form models, the joint must
    factorize through the total, and the closed-form inter-arrival and
    arrival-time probabilities must reproduce that factorization (with the
    arrival route also agreeing with the gap route event by event).  One
    outcome per description, carrying the first discrepancy found.
    """
    out = []
    ok, pair = check_weight_model_conditionals(p)
    out.append(
        CheckOutcome(
            "jump-conditionals-product-form", ok, None if ok else f"(t,k)={pair}"
        )
    )
    ok_form, r_table, bad_prefix = check_mixed_geometric_form(p)
    out.append(
        CheckOutcome(
            "joint-factorization", ok_form, None if ok_form else f"prefix {bad_prefix}"
        )
    )
    if not ok_form:
        return out

    def factored(profile: JumpPath, k: int) -> Fraction:
        w = math.prod((p.weight(j) for j in profile), start=ONE)
        if w == 0:
            return ZERO
        return r_table[(len(profile) - 1, k)] * w

    witness = None
    for k in range(1, p.count_cap + 1):
        for gaps in itertools.product(range(p.horizon + 1), repeat=k):
            if sum(gaps) > p.horizon:
                continue
            profile = _arrival_profile(itertools.accumulate(gaps), p.horizon)
            if interarrival_event_probability(p, gaps) != factored(profile, k):
                witness = f"gaps {gaps}"
                break
        if witness:
            break
    out.append(CheckOutcome("interarrival-product-formula", witness is None, witness))

    witness = None
    for chi in range(1, p.count_cap + 1):
        for times in itertools.combinations_with_replacement(
            range(p.horizon + 1), chi
        ):
            profile = _arrival_profile(times, p.horizon)
            left = arrival_event_probability(p, times)
            if left != factored(profile, chi):
                witness = f"times {times}"
                break
            gaps = [times[0]] + [b - a for a, b in zip(times, times[1:])]
            if interarrival_event_probability(p, gaps) != left:
                witness = f"times {times} vs gaps {gaps}"
                break
        if witness:
            break
    out.append(CheckOutcome("arrival-product-formula", witness is None, witness))
    return out


def transition_probability(p: FiniteProcess, t: int, k: int, i: int) -> Fraction:
    """P{N_{t+1} = k + i | N_t = k} via the structure-function form.

    Equals a(i) * R_{t+1}(k+i) / R_t(k); returns 0 outright when the target
    count is unreachable.
    """
    if not 0 <= t < p.horizon:
        raise ValueError(f"transition time {t} outside 0..{p.horizon - 1}")
    if i < 0:
        raise ValueError(f"jump amount must be >= 0, got {i}")
    here = count_distribution(p, t).get(k, ZERO)
    if here == 0:
        raise ConditioningError(f"count {k} at time {t} has probability zero")
    if i > p.weight.x_max:
        return ZERO
    if count_distribution(p, t + 1).get(k + i, ZERO) == 0:
        return ZERO
    return (
        p.weight(i)
        * structure_function(p, t + 1, k + i)
        / structure_function(p, t, k)
    )


def check_structure_recursion(p: FiniteProcess) -> bool:
    """Exact check that each R_{t-1}(k) equals sum_l a(l) * R_t(k+l).

    The sum is truncated at the count cap; omitted terms are exactly zero
    because no path reaches past the cap.
    """
    for t in range(1, p.horizon + 1):
        for k in range(p.count_cap + 1):
            if normalization_constant(p.weight, t, k) == 0:
                continue
            lhs = structure_function(p, t - 1, k)
            rhs = ZERO
            for l in p.weight.support():
                if k + l > p.count_cap:
                    break
                rhs += p.weight(l) * structure_function(p, t, k + l)
            if lhs != rhs:
                return False
    return True


def classic_uosp_value(kind: str, t: int, k: int, times) -> Fraction:
    """Closed-form conditional arrival-time probabilities of the classical
    uniform order statistics properties for unit- and multiple-jump processes.

    ``strict``: strictly increasing times in {1..t}; probability 1/binom(t, k).
    ``leq1``:   nondecreasing times in {0..t}; multinomial over ties times (t+1)**-k.
    ``leq2``:   nondecreasing times in {0..t}; probability 1/binom(t+k, k).
    """
    times = tuple(times)
    if len(times) != k:
        raise ValueError(f"expected {k} arrival times, got {len(times)}")
    if kind == "strict":
        if any(a >= b for a, b in zip(times, times[1:])):
            raise ValueError(f"times {times} are not strictly increasing")
        if times and not (1 <= times[0] and times[-1] <= t):
            raise ValueError(f"times {times} outside 1..{t}")
        return Fraction(1, math.comb(t, k))
    if any(a > b for a, b in zip(times, times[1:])):
        raise ValueError(f"times {times} are not nondecreasing")
    if times and not (0 <= times[0] and times[-1] <= t):
        raise ValueError(f"times {times} outside 0..{t}")
    if kind == "leq1":
        ties = [times.count(h) for h in range(t + 1)]
        coeff = math.factorial(k)
        for j in ties:
            coeff //= math.factorial(j)
        return Fraction(coeff, (t + 1) ** k)
    if kind == "leq2":
        return Fraction(1, math.comb(t + k, k))
    raise ValueError(f"unknown kind {kind!r}")


def sample_path(p: FiniteProcess, rng: random.Random) -> JumpPath:
    """Draw one jump path exactly from the stored joint law."""
    return sample_exact(p.joint, rng)
