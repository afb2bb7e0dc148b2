"""The invariant suite run by verify mode."""

from __future__ import annotations

import itertools
import logging
import math
from fractions import Fraction
from typing import TYPE_CHECKING

import numpy as np

from modules.cascade.branch_state import squared_distance, squared_norm
from modules.cascade.dense_reference import (
    dense_amplitude_count,
    dense_reference_distribution,
)
from modules.cascade.outcomes import (
    first_register_distribution,
    sample_outcomes,
)
from modules.cascade.test_operator import apply_test, prepare_initial
from modules.definitions.constants import (
    ACCUMULATION_COUPLETS,
    AMPLIFICATION_CHECK_POINTS,
    AMPLIFICATION_TOLERANCE,
    BRUTE_FORCE_ENUMERATION_CAP,
    DENSE_CHECK_MAX_COUPLETS,
    HIGH_TARGET,
    LOW_TARGET,
    NEUMANN_POWER_CHECKS,
    ONE_SIDED_CHECK_SEEDS,
    PREPARATIONS_PER_ROUND,
    SUCCESS_BOUND_COUPLETS,
    TEST_DISTANCE_COUPLETS,
)
from modules.exact.conditional_matrix import (
    build_conditional_matrix,
    conditional_row,
)
from modules.exact.identification import (
    decide_trivial,
    identify_subgroup,
    one_sided_error_rate,
    one_sided_trivial,
    search_partitions,
)
from modules.exact.linear_algebra import (
    identity_matrix,
    is_identity,
    matrix_power,
    neumann_partial_sum,
    rational_matrix,
)
from modules.exact.parameters import (
    bounded_error_bound,
    ceil_log2,
    choose_s_exact,
)
from modules.exact.plan import (
    amplify_once,
    build_plan,
    exact_test_probability,
    partition_targets,
)
from modules.groups.subgroups import (
    brute_force_subgroups,
    check_size_descending,
    closure,
    coset_overlap,
    cyclic_subgroups,
    generating_set,
    is_transversal,
    random_left_transversal,
)
from modules.harness.report import CheckResult
from modules.oracle.hidden_oracle import (
    is_strictly_periodic,
    make_hidden_oracle,
)
from modules.utils.output_formatting import format_rational
from modules.utils.statistics import compare_samples

if TYPE_CHECKING:
    from collections.abc import Iterator

    from modules.cascade.branch_state import BranchState
    from modules.exact.conditional_matrix import ConditionalMatrix
    from modules.groups.finite_group import FiniteGroup
    from modules.groups.subgroups import Subgroup, SubgroupCatalog
    from modules.harness.run_config import RunConfig

_RANDOM_PAIR_CHECKS = 20
_UNITARITY_COUPLETS = 2


class GroupVerification:
    """Check outcomes and reported quantities for one group."""

    group: FiniteGroup
    checks: list[CheckResult]
    identify_totals: list[int]
    one_sided_rates: list[dict]

    def __init__(  # noqa: D107
        self,
        group: FiniteGroup,
        checks: list[CheckResult],
        identify_totals: list[int],
        one_sided_rates: list[dict],
    ) -> None:
        self.group = group
        self.checks = checks
        self.identify_totals = identify_totals
        self.one_sided_rates = one_sided_rates

    @property
    def query_constant(self) -> float | None:
        """Get max identify total / (log2 N)^4, None for N = 1."""
        if self.group.order < 2 or not self.identify_totals:  # noqa: PLR2004
            return None
        return max(self.identify_totals) / math.log2(self.group.order) ** 4


def _prefixed(group: FiniteGroup, name: str) -> str:
    return f"{group.name}: {name}"


def _result(
    group: FiniteGroup,
    name: str,
    failures: list[str],
    detail: str = "",
) -> CheckResult:
    if failures:
        detail = "; ".join(failures[:5])
    return CheckResult(
        name=_prefixed(group, name),
        passed=not failures,
        detail=detail,
    )


def _initial(
    group: FiniteGroup,
    hidden: Subgroup,
    couplets: int,
    catalog: SubgroupCatalog,
) -> BranchState:
    oracle = make_hidden_oracle(group, hidden)
    return prepare_initial(group, oracle, couplets, catalog.subgroups)


def _indexed(catalog: SubgroupCatalog) -> Iterator[tuple[int, Subgroup]]:
    return enumerate(catalog.subgroups, start=1)


def check_group_core(
    group: FiniteGroup,
    catalog: SubgroupCatalog,
    seed: int,
) -> list[CheckResult]:
    """Check axioms, catalog order, transversals and generating sets."""
    failures = [
        f"inverse of {element}"
        for element in group.elements
        if group.multiply(element, group.inverse(element)) != group.identity
    ]
    axioms = _result(group, "group axioms", failures)
    failures = []
    if not check_size_descending(catalog.subgroups):
        failures.append("not size-descending")
    if catalog.subgroups[0].members != tuple(group.elements):
        failures.append("K_1 is not G")
    if not catalog.subgroups[-1].is_trivial:
        failures.append("K_r is not trivial")
    failures.extend(
        f"Lagrange fails for {list(subgroup.members)}"
        for subgroup in catalog
        if group.order % subgroup.order != 0
    )
    failures.extend(
        f"bad transversal of {list(subgroup.members)}"
        for subgroup in catalog
        if not is_transversal(group, subgroup, subgroup.transversal)
    )
    ordering = _result(group, "catalog order and transversals", failures)
    failures = []
    member_sets = {subgroup.member_set for subgroup in catalog}
    generator = np.random.default_rng(seed)
    for _ in range(_RANDOM_PAIR_CHECKS):
        pair = generator.integers(0, group.order, size=2)
        if closure(group, (int(pair[0]), int(pair[1]))) not in member_sets:
            failures.append(f"closure of {list(pair)} missing")
    if group.order <= BRUTE_FORCE_ENUMERATION_CAP:
        brute_force = brute_force_subgroups(group)
        if brute_force.subgroups != catalog.subgroups:
            failures.append("differs from brute-force enumeration")
    completeness = _result(
        group,
        "catalog completeness",
        failures,
        f"r = {catalog.r}",
    )
    failures = []
    for subgroup in catalog:
        generators = generating_set(subgroup)
        if closure(group, generators) != subgroup.member_set:
            failures.append(f"closure differs for {list(subgroup.members)}")
        if len(generators) > ceil_log2(subgroup.order):
            failures.append(f"too many generators {list(generators)}")
    generating = _result(group, "generating sets", failures)
    return [axioms, ordering, completeness, generating]


def check_coset_overlaps(
    group: FiniteGroup,
    catalog: SubgroupCatalog,
) -> list[CheckResult]:
    """Check the dense coset-state sum and the 1/2 overlap bound."""
    failures = []
    for subgroup, hidden in itertools.product(catalog, repeat=2):
        overlap = coset_overlap(subgroup, hidden)
        dense = sum(
            (
                Fraction(
                    len(
                        hidden.member_set.intersection(
                            subgroup.left_coset(representative),
                        ),
                    )
                    ** 2,
                    subgroup.order * hidden.order,
                )
                for representative in subgroup.transversal
            ),
            Fraction(0),
        )
        if dense != overlap:
            failures.append(f"dense {dense} != {overlap}")
        if not subgroup.is_subgroup_of(hidden) and overlap > Fraction(1, 2):
            failures.append(f"overlap {overlap} above 1/2")
    return [_result(group, "coset overlaps", failures)]


def check_oracles(
    group: FiniteGroup,
    catalog: SubgroupCatalog,
) -> list[CheckResult]:
    """Check strict periodicity and query counting of every oracle."""
    failures = []
    for hidden in catalog:
        oracle = make_hidden_oracle(group, hidden)
        if not is_strictly_periodic(oracle):
            failures.append(f"{list(hidden.members)} not strictly periodic")
        label = oracle.query(group.identity)
        if any(oracle.query(member) != label for member in hidden):
            failures.append(f"f(1_G) differs on {list(hidden.members)}")
        if oracle.query_count != hidden.order + 1:
            failures.append(f"query count {oracle.query_count}")
    return [_result(group, "oracle strictness", failures)]


def check_single_tests(
    group: FiniteGroup,
    catalog: SubgroupCatalog,
) -> list[CheckResult]:
    """Check exact firing of a matching test, the periodicity law and norms."""
    matching, periodicity, unitarity = [], [], []
    for hidden_index, hidden in _indexed(catalog):
        state = _initial(group, hidden, _UNITARITY_COUPLETS, catalog)
        fired = first_register_distribution(apply_test(state, hidden_index))
        if fired.as_dict() != {hidden_index: 1}:
            matching.append(f"H = K_{hidden_index} gives {fired.as_dict()}")
        for test_index, subgroup in _indexed(catalog):
            single = apply_test(state, test_index)
            certain = (
                first_register_distribution(single).probability(test_index)
                == 1
            )
            if certain != subgroup.is_subgroup_of(hidden):
                periodicity.append(f"Test_{test_index} for K_{hidden_index}")
        cascade_state = state
        for test_index in range(1, catalog.r + 1):
            cascade_state = apply_test(cascade_state, test_index)
            if squared_norm(cascade_state) != 1:
                unitarity.append(
                    f"after Test_{test_index} for K_{hidden_index}",
                )
    return [
        _result(group, "matching test fires exactly", matching),
        _result(group, "periodicity law", periodicity),
        _result(group, "unitarity", unitarity),
    ]


def check_test_distances(
    group: FiniteGroup,
    catalog: SubgroupCatalog,
) -> list[CheckResult]:
    """Check the single-test distance law and the linear accumulation bound."""
    single, accumulated = [], []
    for couplets in TEST_DISTANCE_COUPLETS:
        for hidden in catalog:
            initial = _initial(group, hidden, couplets, catalog)
            for test_index, subgroup in _indexed(catalog):
                if subgroup.is_subgroup_of(hidden):
                    continue
                distance = squared_distance(
                    apply_test(initial, test_index),
                    initial,
                )
                expected = 2 * coset_overlap(subgroup, hidden) ** couplets
                if distance != expected or distance > Fraction(4, 2**couplets):
                    single.append(
                        f"s={couplets} K_{test_index} vs "
                        f"{list(hidden.members)}: {distance}",
                    )
    for couplets in ACCUMULATION_COUPLETS:
        for hidden_index, hidden in _indexed(catalog):
            initial = _initial(group, hidden, couplets, catalog)
            state = initial
            for test_index in range(1, hidden_index):
                state = apply_test(state, test_index)
                bound = Fraction(4 * test_index**2, 2**couplets)
                if squared_distance(state, initial) > bound:
                    accumulated.append(
                        f"s={couplets} j={test_index} for K_{hidden_index}",
                    )
    return [
        _result(group, "single test distance", single),
        _result(group, "distance accumulation before H's test", accumulated),
    ]


def check_success_probability(
    group: FiniteGroup,
    catalog: SubgroupCatalog,
) -> list[CheckResult]:
    """Check Prob[H|H] >= 1 - 4r/2^(s/2) and the order-2 matrix."""
    failures = []
    for couplets in SUCCESS_BOUND_COUPLETS:
        bound = bounded_error_bound(catalog.r, couplets)
        for hidden_index, hidden in enumerate(catalog.subgroups):
            row = conditional_row(group, hidden, catalog.subgroups, couplets)
            if row[hidden_index] < bound:
                failures.append(
                    f"s={couplets} {list(hidden.members)}: "
                    f"{format_rational(row[hidden_index])}",
                )
    results = [_result(group, "success probability bound", failures)]
    if group.order == 2:  # noqa: PLR2004
        matrix = build_conditional_matrix(group, catalog.subgroups, 2)
        expected = rational_matrix([[1, 0], ["1/4", "3/4"]])
        results.append(
            _result(
                group,
                "order-2 conditional matrix at s=2",
                []
                if bool(np.all(matrix.entries == expected))
                else [str(matrix.serialize())],
            ),
        )
    return results


def check_dense_reference(
    group: FiniteGroup,
    catalog: SubgroupCatalog,
    dense_cap: int,
    seed: int,
) -> list[CheckResult]:
    """Compare branch and dense distributions within the amplitude cap."""
    failures = []
    compared, capped = 0, 0
    for hidden in catalog:
        for couplets in range(1, DENSE_CHECK_MAX_COUPLETS + 1):
            size = dense_amplitude_count(group, hidden, couplets, catalog.r)
            if size > dense_cap:
                capped += 1
                break
            branch = first_register_distribution(
                _run_full_cascade(group, hidden, couplets, catalog),
            ).as_dict()
            variants = [{}]
            if couplets == 1:
                variants.append(
                    {
                        "transversals": [
                            random_left_transversal(group, subgroup, seed)
                            for subgroup in catalog
                        ],
                    },
                )
                range_size = group.order // hidden.order
                variants.append(
                    {"coset_labels": list(reversed(range(range_size)))},
                )
            for variant in variants:
                dense = dense_reference_distribution(
                    group,
                    hidden,
                    couplets,
                    catalog.subgroups,
                    amplitude_cap=dense_cap,
                    **variant,
                )
                compared += 1
                if dense.as_dict() != branch:
                    failures.append(
                        f"s={couplets} {list(hidden.members)} "
                        f"{sorted(variant)}",
                    )
    return [
        _result(
            group,
            "dense reference agreement",
            failures,
            f"{compared} compared, {capped} stopped at the cap",
        ),
    ]


def _run_full_cascade(
    group: FiniteGroup,
    hidden: Subgroup,
    couplets: int,
    catalog: SubgroupCatalog,
) -> BranchState:
    state = _initial(group, hidden, couplets, catalog)
    for test_index in range(1, catalog.r + 1):
        state = apply_test(state, test_index)
    return state


def _neumann_failures(matrix: ConditionalMatrix, r: int) -> list[str]:
    failures = []
    delta = matrix.delta
    for power in range(1, NEUMANN_POWER_CHECKS + 1):
        bound = Fraction(1, r ** (power + 1))
        if any(abs(entry) > bound for entry in matrix_power(delta, power).flat):
            failures.append(f"entry of Delta^{power} above {bound}")
    gamma = matrix.inverse - identity_matrix(r)
    if any(abs(entry) > Fraction(1, r * (r - 1)) for entry in gamma.flat):
        failures.append("entry of M^-1 - I above 1/(r(r-1))")
    remainder = matrix.inverse - neumann_partial_sum(
        matrix.entries,
        NEUMANN_POWER_CHECKS,
    )
    tail = Fraction(1, r ** (NEUMANN_POWER_CHECKS + 1) * (r - 1))
    if any(abs(entry) > tail for entry in remainder.flat):
        failures.append(f"Neumann remainder above {tail}")
    return failures


def check_exact_plans(
    group: FiniteGroup,
    catalog: SubgroupCatalog,
    s_cap: int,
    workers: int,
) -> list[CheckResult]:
    """Check M^-1, x, Mx = y, the targets and amplification per split."""
    r = catalog.r
    if r < 2:  # noqa: PLR2004
        return []
    couplets = choose_s_exact(r)
    matrix = build_conditional_matrix(
        group,
        catalog.subgroups,
        couplets,
        workers,
    )
    neumann = _neumann_failures(matrix, r)
    failures = []
    for high_indices in search_partitions(r):
        targets = partition_targets(r, high_indices)
        plan_matrix, plan = build_plan(
            group,
            catalog.subgroups,
            targets,
            couplets,
            s_cap=s_cap,
            workers=workers,
        )
        label = f"Y_3/4={list(high_indices)}"
        if not is_identity(plan_matrix.entries.dot(plan_matrix.inverse)):
            failures.append(f"{label}: M M^-1 != I")
        if any(not 0 <= value <= 1 for value in plan.bias):
            failures.append(f"{label}: x outside [0, 1]")
        if any(
            abs(value - target) > Fraction(3, 4 * (r - 1))
            for value, target in zip(plan.bias, targets, strict=True)
        ):
            neumann.append(f"{label}: |x - y| above 3/(4(r-1))")
        for row_index in range(r):
            probability = exact_test_probability(
                plan_matrix,
                plan.bias,
                row_index,
            )
            if probability != targets[row_index]:
                failures.append(f"{label}: row {row_index} gives {probability}")
                continue
            amplified = amplify_once(probability)
            expected = 0 if row_index in plan.high_indices else 1
            if amplified != expected:
                failures.append(
                    f"{label}: row {row_index} amplifies to {amplified}",
                )
    return [
        _result(group, "exact plans", failures, f"s={couplets}"),
        _result(group, "Neumann bounds", neumann),
    ]


def check_amplification() -> CheckResult:
    """Check p(3-4p)^2 against sin^2(3 arcsin sqrt p)."""
    failures = []
    if amplify_once(LOW_TARGET) != 1 or amplify_once(HIGH_TARGET) != 0:
        failures.append("1/4 -> 1 and 3/4 -> 0 fail")
    for probability in AMPLIFICATION_CHECK_POINTS:
        rotated = math.sin(3 * math.asin(math.sqrt(probability))) ** 2
        if abs(float(amplify_once(probability)) - rotated) > (
            AMPLIFICATION_TOLERANCE
        ):
            failures.append(f"p={probability}")
    return CheckResult(
        name="amplification",
        passed=not failures,
        detail="; ".join(failures),
    )


def check_identification(
    group: FiniteGroup,
    catalog: SubgroupCatalog,
    config: RunConfig,
) -> tuple[list[CheckResult], list[int]]:
    """Run identification and the exact decision for every H."""
    identify, decide, totals = [], [], []
    rounds = ceil_log2(catalog.r)
    for hidden in catalog:
        oracle = make_hidden_oracle(group, hidden)
        result = identify_subgroup(
            group,
            oracle,
            catalog,
            s_cap=config.s_cap,
            workers=config.workers,
        )
        total = result.ledger["total"]
        totals.append(total)
        expected = sum(
            PREPARATIONS_PER_ROUND * entry.couplets for entry in result.rounds
        )
        if rounds:
            expected += len(result.generators) + 1
        if result.members != hidden.members:
            identify.append(
                f"{list(hidden.members)} gave {list(result.members)}",
            )
        if len(result.rounds) != rounds or total != expected:
            identify.append(
                f"{list(hidden.members)}: {len(result.rounds)} rounds, "
                f"ledger {total} != {expected}",
            )
        decision = decide_trivial(
            group,
            make_hidden_oracle(group, hidden),
            catalog,
            s_cap=config.s_cap,
            workers=config.workers,
        )
        if decision.nontrivial == hidden.is_trivial:
            decide.append(f"{list(hidden.members)} decided {decision.answer}")
        decision_total = decision.ledger["total"]
        if decision_total != PREPARATIONS_PER_ROUND * decision.couplets:
            decide.append(f"ledger {decision_total}")
    return [
        _result(group, "identification", identify, f"{rounds} rounds"),
        _result(group, "exact triviality decision", decide),
    ], totals


def check_one_sided(
    group: FiniteGroup,
    catalog: SubgroupCatalog,
    config: RunConfig,
) -> tuple[list[CheckResult], list[dict]]:
    """Check the one-sided guarantees and report non-cyclic error rates."""
    failures, rates = [], []
    cyclic = set(cyclic_subgroups(catalog))
    for hidden in catalog:
        if hidden not in cyclic:
            rate = one_sided_error_rate(
                group,
                make_hidden_oracle(group, hidden),
                config.trials,
                config.seed,
                catalog,
                s_cap=config.s_cap,
            )
            rates.append(
                {"group": group.name, "hidden": list(hidden.members)}
                | rate.serialize(),
            )
            continue
        for seed in ONE_SIDED_CHECK_SEEDS:
            decision = one_sided_trivial(
                group,
                make_hidden_oracle(group, hidden),
                seed,
                catalog,
                s_cap=config.s_cap,
                workers=config.workers,
            )
            if decision.nontrivial == hidden.is_trivial:
                failures.append(
                    f"{list(hidden.members)} seed {seed}: {decision.answer}",
                )
    return [
        _result(
            group,
            "one-sided decision",
            failures,
            f"{len(rates)} non-cyclic subgroups reported",
        ),
    ], rates


def check_sampling(
    group: FiniteGroup,
    catalog: SubgroupCatalog,
    config: RunConfig,
) -> list[CheckResult]:
    """Check seeded samples against the exact distribution."""
    trivial = catalog.subgroups[catalog.trivial_index]
    distribution = first_register_distribution(
        _run_full_cascade(group, trivial, _UNITARITY_COUPLETS, catalog),
    )
    samples = sample_outcomes(distribution, config.seed, config.trials)
    failures = [
        f"outcome {comparison.outcome}: {comparison.count}"
        for comparison in compare_samples(samples, distribution.as_dict())
        if not comparison.within()
    ]
    return [_result(group, "sampling within 3 sigma", failures)]


def verify_group(
    group: FiniteGroup,
    catalog: SubgroupCatalog,
    config: RunConfig,
) -> GroupVerification:
    """Run every check on one group."""
    logger = logging.getLogger(__name__)
    checks = [
        *check_group_core(group, catalog, config.seed),
        *check_coset_overlaps(group, catalog),
        *check_oracles(group, catalog),
        *check_single_tests(group, catalog),
        *check_test_distances(group, catalog),
        *check_success_probability(group, catalog),
        *check_dense_reference(group, catalog, config.dense_cap, config.seed),
        *check_exact_plans(group, catalog, config.s_cap, config.workers),
    ]
    identification, totals = check_identification(group, catalog, config)
    one_sided, rates = check_one_sided(group, catalog, config)
    checks.extend([*identification, *one_sided])
    checks.extend(check_sampling(group, catalog, config))
    for check in checks:
        if not check.passed:
            logger.error(
                "Check failed: %(name)s (%(detail)s)",
                {"name": check.name, "detail": check.detail},
            )
    logger.info(
        "Verified %(group)s: %(passed)d of %(total)d checks passed",
        {
            "group": group.name,
            "passed": sum(check.passed for check in checks),
            "total": len(checks),
        },
    )
    return GroupVerification(
        group=group,
        checks=checks,
        identify_totals=totals,
        one_sided_rates=rates,
    )
