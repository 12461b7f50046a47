"""Exact verification suites over the model, transform, and process layers.

Every check is a tolerance-zero comparison of rational tables.  The suites
are pure functions of their seed and bounds, so reports are reproducible;
they are reused verbatim by the command-line ``verify`` command and the
acceptance tests.
"""

import math
import random
from fractions import Fraction

from . import combinat
from .errors import ConditioningError, EmptySupportError
from .models import (
    ONE,
    ZERO,
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
    weight_model,
    weight_model_label_density,
)
from .process import (
    FiniteProcess,
    build_process,
    check_characterizations,
    check_mixed_geometric_form,
    check_structure_recursion,
    check_weight_model_conditionals,
    classic_uosp_value,
    conditional_jumps_given_count,
    count_distribution,
    structure_function,
    transition_probability,
)
from .report import SuiteReport
from .transforms import (
    check_drop_closure,
    condition_on_partial_sum,
    drop_particle,
    erase_cell,
    product_form_weights,
)

BUILTIN_KINDS = ("mb", "be", "fd", "pc:2", "pc:3")


def random_weight_function(rng: random.Random, x_max: int) -> WeightFunction:
    """Strictly positive random weight table with small rational entries."""
    values = tuple(
        Fraction(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(x_max + 1)
    )
    return WeightFunction(values)


def random_eom(rng: random.Random, n: int, r: int) -> OccupancyDistribution:
    """Random exchangeable model: positive mass per orbit, spread evenly."""
    reps = sorted({tuple(sorted(x)) for x in combinat.enumerate_compositions(n, r)})
    masses = {rep: Fraction(rng.randint(1, 20)) for rep in reps}
    total = sum(masses.values())
    table = {}
    for rep, mass in masses.items():
        share = mass / (total * combinat.distinct_permutation_count(rep))
        for x in combinat.distinct_permutations(rep):
            table[x] = share
    return OccupancyDistribution(n, r, table)


def builtin_models(n: int, r: int) -> list[tuple[str, OccupancyDistribution]]:
    """The built-in models that have support at (n, r)."""
    out = []
    for kind in BUILTIN_KINDS:
        a = builtin_weight(kind, r)
        try:
            out.append((kind, weight_model(a, n, r)))
        except EmptySupportError:
            continue
    return out


def _grid(max_n: int, max_r: int, min_n: int = 1, min_r: int = 0):
    return [
        (n, r) for n in range(min_n, max_n + 1) for r in range(min_r, max_r + 1)
    ]


def _seeded_random_eoms(seed: int, count: int, max_n: int, max_r: int):
    """Deterministic batch of random exchangeable models within the bounds."""
    rng = random.Random(seed)
    pairs = _grid(max_n, max_r, min_n=2, min_r=1)
    out = []
    for i in range(count):
        n, r = pairs[i % len(pairs)]
        out.append(random_eom(rng, n, r))
    return out


def _check(report: SuiteReport, name: str, fn) -> None:
    witness = fn()
    report.add(name, witness is None, witness)


def _ascending_factorial(n: int, r: int) -> int:
    out = 1
    for i in range(r):
        out *= n + i
    return out


def _falling_factorial(n: int, r: int) -> int:
    out = 1
    for i in range(r):
        out *= n - i
    return out


def eom_suite(seed: int = 0, max_n: int = 4, max_r: int = 4) -> SuiteReport:
    """Model-layer checks: marginals, label laws, order statistics, sufficiency."""
    report = SuiteReport("eom")
    random_eoms = _seeded_random_eoms(seed, 20, max_n, max_r)
    rng = random.Random(seed + 1)
    random_weights = [random_weight_function(rng, max_r) for _ in range(20)]

    def all_models():
        for n, r in _grid(max_n, max_r, min_n=2, min_r=1):
            for kind, d in builtin_models(n, r):
                yield f"{kind}({n},{r})", d
        for i, d in enumerate(random_eoms):
            yield f"random-eom-{i}({d.n},{d.r})", d

    def model_normalization():
        for name, d in all_models():
            if sum(d.table.values()) != 1:
                return name
        return None

    _check(report, "model-normalization", model_normalization)

    def weight_model_exchangeable():
        for n, r in _grid(max_n, max_r, min_n=2, min_r=1):
            for kind in BUILTIN_KINDS:
                try:
                    d = weight_model(builtin_weight(kind, r), n, r)
                except EmptySupportError:
                    continue
                if not is_exchangeable(d):
                    return f"{kind}({n},{r})"
            for i, a in enumerate(random_weights):
                if not is_exchangeable(weight_model(a, n, r)):
                    return f"random-weight-{i}({n},{r})"
        return None

    _check(report, "weight-model-exchangeable", weight_model_exchangeable)

    def uniform_single_marginals():
        for name, d in all_models():
            ld = label_distribution(d)
            for i in range(1, d.r + 1):
                marg = label_marginal(ld, {i})
                for label in range(1, d.n + 1):
                    if marg.probability((label,)) != Fraction(1, d.n):
                        return f"{name} coordinate {i} label {label}"
        return None

    _check(report, "uniform-single-marginals", uniform_single_marginals)

    def label_law_closed_forms():
        for n, r in _grid(max_n, max_r, min_n=2, min_r=1):
            mb = label_distribution(weight_model(builtin_weight("mb", r), n, r))
            be = label_distribution(weight_model(builtin_weight("be", r), n, r))
            fd = None
            if r <= n:
                fd = label_distribution(weight_model(builtin_weight("fd", r), n, r))
            for y in combinat.enumerate_labels(r, n):
                counts = combinat.tilde_phi(y, n)
                tie_prod = math.prod(math.factorial(c) for c in counts)
                if mb.probability(y) != Fraction(1, n**r):
                    return f"mb({n},{r}) at {y}"
                if be.probability(y) != Fraction(tie_prod, _ascending_factorial(n, r)):
                    return f"be({n},{r}) at {y}"
                if fd is not None:
                    expect = (
                        Fraction(tie_prod, _falling_factorial(n, r))
                        if len(set(y)) == r
                        else ZERO
                    )
                    if fd.probability(y) != expect:
                        return f"fd({n},{r}) at {y}"
        return None

    _check(report, "label-law-closed-forms", label_law_closed_forms)

    def order_statistics_match():
        for name, d in all_models():
            direct = order_statistics_distribution(d)
            brute: dict[tuple, Fraction] = {}
            for y, p in label_distribution(d).table.items():
                key = tuple(sorted(y))
                brute[key] = brute.get(key, ZERO) + p
            if direct != brute:
                return name
        return None

    _check(report, "order-statistics-match", order_statistics_match)

    def uniform_transfer():
        for n, r in _grid(max_n, max_r, min_n=2, min_r=1):
            space = combinat.enumerate_compositions(n, r)
            flat = Fraction(1, len(space))
            candidates = [
                d for name, d in all_models() if (d.n, d.r) == (n, r)
            ]
            for d in candidates:
                uniform_a = all(d.probability(x) == flat for x in space)
                order = order_statistics_distribution(d)
                uniform_b = len(order) == len(space) and len(set(order.values())) == 1
                if uniform_a != uniform_b:
                    return f"({n},{r})"
            if not any(
                all(d.probability(x) == flat for x in space) for d in candidates
            ):
                return f"no uniform instance at ({n},{r})"
        return None

    _check(report, "uniform-transfer", uniform_transfer)

    def label_occupancy_roundtrip():
        for name, d in all_models():
            ld = label_distribution(d)
            if occupancy_from_labels(ld) != d:
                return name
            if label_distribution(occupancy_from_labels(ld)) != ld:
                return name
        return None

    _check(report, "label-occupancy-roundtrip", label_occupancy_roundtrip)

    def weight_label_density():
        for n, r in _grid(min(max_n, 3), max_r, min_n=2, min_r=1):
            for kind in BUILTIN_KINDS:
                a = builtin_weight(kind, r)
                try:
                    ld = label_distribution(weight_model(a, n, r))
                except EmptySupportError:
                    continue
                for y in combinat.enumerate_labels(r, n):
                    if weight_model_label_density(a, n, r, y) != ld.probability(y):
                        return f"{kind}({n},{r}) at {y}"
        return None

    _check(report, "weight-label-density", weight_label_density)

    def iid_conditional_sufficiency():
        mixes = [
            None,
            MixingSpec(((Fraction(1, 2), ONE),)),
            MixingSpec(((Fraction(1, 3), Fraction(1, 2)), (Fraction(2, 3), Fraction(1, 2)))),
            MixingSpec(
                (
                    (Fraction(1, 5), Fraction(1, 4)),
                    (Fraction(1, 2), Fraction(1, 4)),
                    (Fraction(3, 4), Fraction(1, 2)),
                )
            ),
        ]
        for n, r in [(2, 2), (3, 2), (2, 3), (3, 3)]:
            theta = Fraction(1, 2)
            poisson = [theta**x / math.factorial(x) for x in range(r + 1)]
            geom_p = Fraction(1, 3)
            geometric = [geom_p * (1 - geom_p) ** x for x in range(r + 1)]
            bern_p = Fraction(1, 4)
            bernoulli = [1 - bern_p, bern_p] + [ZERO] * (r - 1)
            nb_s, nb_p = 2, Fraction(1, 3)
            negbin = [
                Fraction(math.comb(nb_s + x - 1, x)) * nb_p**x * (1 - nb_p) ** nb_s
                for x in range(r + 1)
            ]
            targets = [
                ("mb", poisson),
                ("be", geometric),
                ("fd", bernoulli),
                ("pc:2", negbin),
            ]
            for kind, q in targets:
                try:
                    expected = weight_model(builtin_weight(kind, r), n, r)
                except EmptySupportError:
                    continue
                results = [conditional_from_iid(q, n, r, mix) for mix in mixes]
                if any(res != expected for res in results):
                    return f"{kind}({n},{r})"
        return None

    _check(report, "iid-conditional-sufficiency", iid_conditional_sufficiency)
    return report


ADHOC_WEIGHT = WeightFunction((1, 1, 5, 1), kind="adhoc")


def transforms_suite(seed: int = 0, max_n: int = 4, max_r: int = 4) -> SuiteReport:
    """Transform-layer checks: closure properties and the product-form boundary."""
    report = SuiteReport("transforms")
    random_eoms = _seeded_random_eoms(seed, 20, max_n, max_r)

    def all_models():
        for n, r in _grid(max_n, max_r, min_n=2, min_r=1):
            for kind, d in builtin_models(n, r):
                yield f"{kind}({n},{r})", d
        for i, d in enumerate(random_eoms):
            yield f"random-eom-{i}({d.n},{d.r})", d

    def drop_keeps_exchangeable():
        for name, d in all_models():
            if d.r >= 1 and not is_exchangeable(drop_particle(d)):
                return name
        return None

    _check(report, "drop-keeps-exchangeable", drop_keeps_exchangeable)

    def erase_keeps_exchangeable():
        for name, d in all_models():
            if d.n >= 2 and not is_exchangeable(erase_cell(d)):
                return name
        return None

    _check(report, "erase-keeps-exchangeable", erase_keeps_exchangeable)

    def conditioning_keeps_exchangeable():
        for name, d in all_models():
            for sub_n in range(1, d.n):
                for s in range(d.r + 1):
                    try:
                        cond = condition_on_partial_sum(d, sub_n, s)
                    except ConditioningError:
                        continue
                    if not is_exchangeable(cond):
                        return f"{name} cond({sub_n},{s})"
        return None

    _check(report, "conditioning-keeps-exchangeable", conditioning_keeps_exchangeable)

    def conditioning_preserves_weight_model():
        for big_n, r in _grid(max_n, max_r, min_n=2, min_r=1):
            for kind in BUILTIN_KINDS:
                a = builtin_weight(kind, r)
                try:
                    d = weight_model(a, big_n, r)
                except EmptySupportError:
                    continue
                for sub_n in range(1, big_n):
                    for s in range(r + 1):
                        try:
                            cond = condition_on_partial_sum(d, sub_n, s)
                        except ConditioningError:
                            if normalization_constant(a, sub_n, s) != 0 and (
                                normalization_constant(a, big_n - sub_n, r - s) != 0
                            ):
                                return f"{kind}({big_n},{r}) cond({sub_n},{s}) empty"
                            continue
                        if cond != weight_model(a, sub_n, s):
                            return f"{kind}({big_n},{r}) cond({sub_n},{s})"
        return None

    _check(
        report, "conditioning-preserves-weight-model", conditioning_preserves_weight_model
    )

    def drop_closure_builtins():
        for n, r in _grid(max_n, max_r, min_n=2, min_r=1):
            for kind in BUILTIN_KINDS:
                a = builtin_weight(kind, r)
                try:
                    result = check_drop_closure(a, n, r)
                except EmptySupportError:
                    continue
                if not result.holds:
                    return f"{kind}({n},{r}) witness {result.witness}"
        return None

    _check(report, "drop-closure-builtins", drop_closure_builtins)

    def drop_closure_counterexample():
        result = check_drop_closure(ADHOC_WEIGHT, 2, 3)
        if result.holds or result.witness is None:
            return "ad-hoc weight (1,1,5,1) unexpectedly passes at n=2, r=3"
        return None

    _check(report, "drop-closure-counterexample", drop_closure_counterexample)

    def drop_matches_weight_model():
        for n, r in _grid(max_n, max_r, min_n=2, min_r=1):
            for kind in BUILTIN_KINDS:
                a = builtin_weight(kind, r)
                try:
                    if not check_drop_closure(a, n, r).holds:
                        continue
                    d = weight_model(a, n, r)
                except EmptySupportError:
                    continue
                if drop_particle(d) != weight_model(a, n, r - 1):
                    return f"{kind}({n},{r})"
        return None

    _check(report, "drop-matches-weight-model", drop_matches_weight_model)

    def drop_breaks_weight_model():
        # the ad-hoc failure of the closure condition must show up in the model
        d = weight_model(ADHOC_WEIGHT, 2, 3)
        if drop_particle(d) == weight_model(ADHOC_WEIGHT, 2, 2):
            return "ad-hoc weight (1,1,5,1) preserved by drop at n=2, r=3"
        return None

    _check(report, "drop-breaks-weight-model", drop_breaks_weight_model)

    def dropped_label_marginal():
        for name, d in all_models():
            if d.n > 3 or d.r < 2 or d.r > 4:
                continue
            left = label_distribution(drop_particle(d))
            right = label_marginal(label_distribution(d), range(1, d.r))
            if left != right:
                return name
        return None

    _check(report, "dropped-label-marginal", dropped_label_marginal)

    def mass_conservation():
        for name, d in all_models():
            outputs = []
            if d.r >= 1:
                outputs.append(drop_particle(d))
            if d.n >= 2:
                outputs.append(erase_cell(d))
            for out in outputs:
                if sum(out.table.values()) != 1:
                    return name
        return None

    _check(report, "mass-conservation", mass_conservation)

    def product_form_detector_positive():
        recovered = product_form_weights(weight_model(builtin_weight("be", 2), 3, 2))
        if recovered is None:
            return "detector missed the uniform model at (3,2)"
        if weight_model(recovered, 3, 2) != weight_model(builtin_weight("be", 2), 3, 2):
            return "detector returned an inconsistent weight table"
        return None

    _check(report, "product-form-detector-positive", product_form_detector_positive)

    def strict_containment():
        found = []
        for n, r in _grid(5, 5, min_n=3, min_r=3):
            bases = [
                ("be", builtin_weight("be", r)),
                ("pc:2", builtin_weight("pc:2", r)),
                ("adhoc", WeightFunction(tuple([ONE] * 2 + [Fraction(5)] + [ONE] * (r - 2)))),
            ]
            for name, a in bases:
                try:
                    d = weight_model(a, n, r)
                except EmptySupportError:
                    continue
                for op_name, image in (
                    ("drop", drop_particle(d)),
                    ("erase", erase_cell(d)),
                ):
                    if product_form_weights(image) is None:
                        found.append(f"{op_name}({name}({n},{r}))")
        if not found:
            return "every searched transform image stayed product-form"
        return None

    _check(report, "strict-containment", strict_containment)
    return report


def _terminal_laws(rng: random.Random, cap: int):
    """Uniform, truncated-geometric, and random terminal count laws on 0..cap."""
    size = cap + 1
    uniform = [Fraction(1, size)] * size
    weights = [Fraction(1, 2**k) for k in range(size)]
    total = sum(weights)
    geometric = [w / total for w in weights]
    raw = [Fraction(rng.randint(1, 9)) for _ in range(size)]
    total = sum(raw)
    randomized = [w / total for w in raw]
    return [("uniform", uniform), ("geometric", geometric), ("random", randomized)]


def _normalized_at_zero(a: WeightFunction) -> WeightFunction:
    """Gauge with a(0) = 1; induces the same models and processes."""
    return WeightFunction(tuple(v / a(0) for v in a.values), kind=a.kind)


def _suite_processes(seed: int, max_horizon: int):
    """Deterministic matrix of (label, process) pairs for the process checks.

    Random weights are normalized to a(0) = 1, the gauge under which the
    structure function at count zero equals the zero-count probability.
    """
    rng = random.Random(seed)
    weights = [(kind, None) for kind in ("mb", "be", "fd", "pc:2")]
    weights += [
        (f"random-{i}", _normalized_at_zero(random_weight_function(rng, 6)))
        for i in range(5)
    ]
    horizons = sorted({2, max_horizon})
    out = []
    for wname, wf in weights:
        for horizon in horizons:
            cap = min(5, horizon + 1) if wname == "fd" else 5
            if wf is None:
                a = builtin_weight(wname, cap)
            else:
                a = wf
            for lname, pi in _terminal_laws(rng, cap):
                label = f"{wname}/M={horizon}/{lname}"
                out.append((label, build_process(a, horizon, pi)))
    return out


def perturbed_process(p: FiniteProcess) -> FiniteProcess | None:
    """Move half the mass of one path onto another path with the same total."""
    by_total: dict[int, list] = {}
    for path in sorted(p.joint):
        by_total.setdefault(sum(path), []).append(path)
    for total in sorted(by_total):
        paths = by_total[total]
        if len(paths) >= 2:
            donor, receiver = paths[0], paths[1]
            eps = p.joint[donor] / 2
            joint = dict(p.joint)
            joint[donor] -= eps
            joint[receiver] += eps
            return FiniteProcess(p.weight, p.horizon, joint)
    return None


CHARACTERIZATION_NAMES = (
    "jump-conditionals-product-form",
    "joint-factorization",
    "interarrival-product-formula",
    "arrival-product-formula",
)


def theorem_suite(seed: int = 0, max_horizon: int = 3) -> SuiteReport:
    """Process-layer checks: the four equivalent characterizations and the
    supporting structure-function identities, plus a verifier sanity test."""
    report = SuiteReport("theorem")
    processes = _suite_processes(seed, max_horizon)
    per_process = [(label, check_characterizations(p)) for label, p in processes]
    for name in CHARACTERIZATION_NAMES:
        witness = None
        for label, checks in per_process:
            for c in checks:
                if c.name == name and not c.passed:
                    witness = f"{label}: {c.witness}"
                    break
            if witness:
                break
        report.add(name, witness is None, witness)

    def markov_transitions():
        for label, p in processes:
            for t in range(p.horizon):
                here = count_distribution(p, t)
                for k, mass in here.items():
                    if not mass:
                        continue
                    for i in range(p.count_cap - k + 1):
                        direct = ZERO
                        for prefix, pr in p.marginal(t + 1).items():
                            if sum(prefix[: t + 1]) == k and prefix[t + 1] == i:
                                direct += pr
                        direct /= mass
                        if transition_probability(p, t, k, i) != direct:
                            return f"{label} (t,k,i)=({t},{k},{i})"
                    row = sum(
                        transition_probability(p, t, k, i)
                        for i in range(p.count_cap - k + 1)
                    )
                    if row != 1:
                        return f"{label} row (t,k)=({t},{k}) sums to {row}"
        return None

    _check(report, "markov-transitions", markov_transitions)

    def structure_recursion():
        for label, p in processes:
            if not check_structure_recursion(p):
                return label
        return None

    _check(report, "structure-recursion", structure_recursion)

    def zero_count_identity():
        for label, p in processes:
            if p.weight(0) == 0:
                continue
            for t in range(p.horizon + 1):
                if count_distribution(p, t).get(0, ZERO) != structure_function(p, t, 0):
                    return f"{label} t={t}"
        return None

    _check(report, "zero-count-identity", zero_count_identity)

    def marginal_consistency():
        for label, p in processes:
            for t in range(1, p.horizon + 1):
                coarse = p.marginal(t - 1)
                fine = p.marginal(t)
                acc: dict[tuple, Fraction] = {}
                for prefix, pr in fine.items():
                    key = prefix[:-1]
                    acc[key] = acc.get(key, ZERO) + pr
                if acc != coarse:
                    return f"{label} t={t}"
        return None

    _check(report, "marginal-consistency", marginal_consistency)

    def mutation_detected():
        mutated = 0
        for label, p in processes:
            bad = perturbed_process(p)
            if bad is None:
                continue
            mutated += 1
            ok_cond, _ = check_weight_model_conditionals(bad)
            ok_form, _, _ = check_mixed_geometric_form(bad)
            if ok_cond and ok_form:
                return f"{label} perturbation went undetected"
        if mutated == 0:
            return "no process admitted a perturbation"
        return None

    _check(report, "mutation-detected", mutation_detected)
    return report


def classic_suite(max_horizon: int = 4) -> SuiteReport:
    """Recovery of the classical uniform order statistics properties.

    Unit-jump models come from the capacity-one weight (over t+1 cells, the
    conditional is uniform over binom(t+1, k) strictly increasing time sets);
    the two multiple-jump variants come from the factorial-decay and constant
    weights.
    """
    report = SuiteReport("classic")

    def _processes(kind):
        out = []
        for horizon in range(1, max_horizon + 1):
            cap = horizon + 1 if kind == "fd" else 4
            pi = [Fraction(1, cap + 1)] * (cap + 1)
            out.append(build_process(builtin_weight(kind, cap), horizon, pi))
        return out

    def strict_recovery():
        for p in _processes("fd"):
            for t in range(p.horizon + 1):
                counts = count_distribution(p, t)
                for k, mass in counts.items():
                    if not mass:
                        continue
                    cond = conditional_jumps_given_count(p, t, k)
                    for prefix, pr in cond.table.items():
                        times = [h + 1 for h, j in enumerate(prefix) for _ in range(j)]
                        if pr != classic_uosp_value("strict", t + 1, k, times):
                            return f"M={p.horizon} (t,k)=({t},{k}) at {prefix}"
        return None

    _check(report, "strict-unit-jump-recovery", strict_recovery)

    def multinomial_recovery():
        for p in _processes("mb"):
            for t in range(p.horizon + 1):
                counts = count_distribution(p, t)
                for k, mass in counts.items():
                    if not mass:
                        continue
                    cond = conditional_jumps_given_count(p, t, k)
                    for prefix in combinat.enumerate_compositions(t + 1, k):
                        times = [h for h, j in enumerate(prefix) for _ in range(j)]
                        if cond.probability(prefix) != classic_uosp_value(
                            "leq1", t, k, times
                        ):
                            return f"M={p.horizon} (t,k)=({t},{k}) at {prefix}"
        return None

    _check(report, "multinomial-recovery", multinomial_recovery)

    def flat_count_recovery():
        for p in _processes("be"):
            for t in range(p.horizon + 1):
                counts = count_distribution(p, t)
                for k, mass in counts.items():
                    if not mass:
                        continue
                    cond = conditional_jumps_given_count(p, t, k)
                    for prefix in combinat.enumerate_compositions(t + 1, k):
                        times = [h for h, j in enumerate(prefix) for _ in range(j)]
                        if cond.probability(prefix) != classic_uosp_value(
                            "leq2", t, k, times
                        ):
                            return f"M={p.horizon} (t,k)=({t},{k}) at {prefix}"
        return None

    _check(report, "flat-count-recovery", flat_count_recovery)
    return report


def run_suite(
    suite: str,
    seed: int = 0,
    max_n: int = 4,
    max_r: int = 4,
    horizon: int = 3,
) -> SuiteReport:
    """Dispatch a verification suite by name."""
    if suite == "eom":
        return eom_suite(seed, max_n, max_r)
    if suite == "transforms":
        return transforms_suite(seed, max_n, max_r)
    if suite == "theorem":
        return theorem_suite(seed, horizon)
    if suite == "classic":
        return classic_suite(horizon)
    raise ValueError(f"unknown suite {suite!r}")
