"""Identification of H and the two triviality decision variants."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING

import numpy as np

from modules.cascade.outcomes import first_register_distribution, sample_outcome
from modules.cascade.test_operator import prepare_initial, run_cascade
from modules.definitions.constants import (
    DEFAULT_EPSILON,
    PREPARATIONS_PER_ROUND,
)
from modules.definitions.types import LedgerPhase, ThisShouldNeverHappenError
from modules.exact.conditional_matrix import conditional_row
from modules.exact.parameters import (
    bounded_error_bound,
    ceil_log2,
    choose_s_bounded,
    choose_s_exact,
)
from modules.exact.plan import (
    amplify_once,
    build_plan,
    partition_targets,
    row_probability,
)
from modules.groups.subgroups import (
    closure,
    cyclic_subgroups,
    enumerate_subgroups,
    generating_set,
)
from modules.oracle.hidden_oracle import sanitize_output
from modules.utils.output_formatting import format_members, format_rational

if TYPE_CHECKING:
    from modules.exact.plan import ExactPlan
    from modules.groups.finite_group import FiniteGroup
    from modules.groups.subgroups import Subgroup, SubgroupCatalog
    from modules.oracle.hidden_oracle import HiddenOracle


@dataclass(frozen=True)
class RoundTranscript:
    """One binary-search round as seen by the classical driver."""

    round_index: int
    live: tuple[int, int]
    high_indices: tuple[int, ...]
    couplets: int
    probability: Fraction
    amplified: Fraction
    bit: int
    ledger_delta: int

    def serialize(self) -> dict:
        """Get the JSON form."""
        return {
            "round": self.round_index,
            "live": list(self.live),
            "y_high": list(self.high_indices),
            "s": self.couplets,
            "p": format_rational(self.probability),
            "amplified": format_rational(self.amplified),
            "bit": self.bit,
            "ledger_delta": self.ledger_delta,
        }


@dataclass(frozen=True)
class IdentificationResult:
    """Sanitized generating set of the identified subgroup."""

    generators: tuple[int, ...]
    members: tuple[int, ...]
    catalog_index: int
    couplets: int
    rounds: tuple[RoundTranscript, ...] = ()
    ledger: dict = field(default_factory=dict)

    def serialize(self) -> dict:
        """Get the JSON form."""
        return {
            "subgroup": format_members(self.generators),
            "members": format_members(self.members),
            "catalog_index": self.catalog_index,
            "s": self.couplets,
            "rounds": len(self.rounds),
            "transcript": [entry.serialize() for entry in self.rounds],
            "ledger": self.ledger,
        }


@dataclass(frozen=True)
class DecisionResult:
    """Answer of a triviality decision, with its exact amplified value."""

    nontrivial: bool
    deterministic: bool
    couplets: int
    probability: Fraction
    amplified: Fraction
    ledger: dict = field(default_factory=dict)

    @property
    def answer(self) -> str:
        """Get "trivial" or "non-trivial"."""
        return "non-trivial" if self.nontrivial else "trivial"

    def serialize(self) -> dict:
        """Get the JSON form."""
        return {
            "answer": self.answer,
            "deterministic": self.deterministic,
            "s": self.couplets,
            "p": format_rational(self.probability),
            "amplified": format_rational(self.amplified),
            "ledger": self.ledger,
        }


@dataclass(frozen=True)
class BoundedResult:
    """Outcome of the single-measurement bounded-error identification."""

    generators: tuple[int, ...]
    members: tuple[int, ...]
    outcome: int
    couplets: int
    success_probability: Fraction
    success_bound: Fraction
    correct: bool
    ledger: dict = field(default_factory=dict)

    def serialize(self) -> dict:
        """Get the JSON form."""
        return {
            "subgroup": format_members(self.generators),
            "members": format_members(self.members),
            "outcome": self.outcome,
            "s": self.couplets,
            "success_probability": format_rational(self.success_probability),
            "success_bound": format_rational(self.success_bound),
            "correct": self.correct,
            "ledger": self.ledger,
        }


@dataclass(frozen=True)
class OneSidedErrorRate:
    """Empirical error rate of the cyclic-only decision for one H."""

    trials: int
    errors: int
    amplified: Fraction

    @property
    def rate(self) -> Fraction:
        """Get errors / trials."""
        return Fraction(self.errors, self.trials)

    def serialize(self) -> dict:
        """Get the JSON form."""
        return {
            "trials": self.trials,
            "errors": self.errors,
            "empirical_rate": format_rational(self.rate),
            "amplified": format_rational(self.amplified),
        }


def _catalog(
    group: FiniteGroup,
    catalog: SubgroupCatalog | None,
) -> SubgroupCatalog:
    return enumerate_subgroups(group) if catalog is None else catalog


def _check_bit(amplified: Fraction) -> int:
    if amplified not in (0, 1):
        error_message = f"Amplified probability {amplified} is not 0 or 1"
        raise ThisShouldNeverHappenError(error_message)
    return int(amplified)


def _charge_round(oracle: HiddenOracle, couplets: int) -> None:
    oracle.charge(LedgerPhase.PREPARE, couplets)
    oracle.charge(LedgerPhase.UNPREPARE, couplets)
    oracle.charge(
        LedgerPhase.PREPARE,
        (PREPARATIONS_PER_ROUND - 2) * couplets,
    )


def lower_half(low: int, width: int, r: int) -> tuple[int, ...]:
    """Get the catalog positions of the lower half of [low, low + width)."""
    return tuple(range(low, min(low + width // 2, r)))


def search_partitions(r: int) -> list[tuple[int, ...]]:
    """Get every Y_3/4 the padded binary search can use over r candidates."""
    partitions = []
    width = 2 ** ceil_log2(r)
    while width > 1:
        partitions.extend(
            lower_half(low, width, r) for low in range(0, r, width)
        )
        width //= 2
    return partitions


def _run_round(  # noqa: PLR0913
    group: FiniteGroup,
    oracle: HiddenOracle,
    candidates: tuple[Subgroup, ...],
    high_indices: tuple[int, ...],
    couplets: int,
    s_cap: int | None,
    workers: int,
) -> tuple[ExactPlan, Fraction]:
    _, plan = build_plan(
        group,
        candidates,
        partition_targets(len(candidates), high_indices),
        couplets,
        s_cap=s_cap,
        workers=workers,
    )
    _charge_round(oracle, plan.couplets)
    row = conditional_row(group, oracle.hidden, candidates, plan.couplets)
    return plan, row_probability(row, plan.bias)


def identify_subgroup(  # noqa: PLR0913
    group: FiniteGroup,
    oracle: HiddenOracle,
    catalog: SubgroupCatalog | None = None,
    *,
    couplets: int | None = None,
    s_cap: int | None = None,
    workers: int = 1,
) -> IdentificationResult:
    """Identify H by binary search over the catalog with certainty.

    The catalog index range is padded to 2^ceil(log2 r); each round puts
    the lower half of the live interval in Y_3/4 and reads one
    deterministic amplified bit.
    """
    logger = logging.getLogger(__name__)
    catalog = _catalog(group, catalog)
    if group.order == 1 or catalog.r == 1:
        trivial = catalog.subgroups[catalog.trivial_index]
        return IdentificationResult(
            generators=(),
            members=trivial.members,
            catalog_index=catalog.trivial_index,
            couplets=0,
            ledger=oracle.ledger.as_dict(),
        )
    couplets = choose_s_exact(catalog.r) if couplets is None else couplets
    rounds = ceil_log2(catalog.r)
    low, width = 0, 2**rounds
    transcripts = []
    for round_index in range(1, rounds + 1):
        middle = low + width // 2
        high_indices = lower_half(low, width, catalog.r)
        queries_before = oracle.query_count
        plan, probability = _run_round(
            group,
            oracle,
            catalog.subgroups,
            high_indices,
            couplets,
            s_cap,
            workers,
        )
        couplets = plan.couplets
        amplified = amplify_once(probability)
        bit = _check_bit(amplified)
        transcripts.append(
            RoundTranscript(
                round_index=round_index,
                live=(low, low + width),
                high_indices=high_indices,
                couplets=couplets,
                probability=probability,
                amplified=amplified,
                bit=bit,
                ledger_delta=oracle.query_count - queries_before,
            ),
        )
        logger.debug(
            "Round %(round)d on [%(low)d, %(high)d): bit %(bit)d",
            {
                "round": round_index,
                "low": low,
                "high": low + width,
                "bit": bit,
            },
        )
        if bit == 1:
            low = middle
        width //= 2
    found = catalog.subgroups[low]
    generators = sanitize_output(oracle, generating_set(found))
    members = tuple(sorted(closure(group, generators)))
    logger.info(
        "Identified subgroup %(members)s of %(group)s in %(rounds)d rounds",
        {"members": list(members), "group": group.name, "rounds": rounds},
    )
    return IdentificationResult(
        generators=generators,
        members=members,
        catalog_index=low,
        couplets=couplets,
        rounds=tuple(transcripts),
        ledger=oracle.ledger.as_dict(),
    )


def decide_trivial(  # noqa: PLR0913
    group: FiniteGroup,
    oracle: HiddenOracle,
    catalog: SubgroupCatalog | None = None,
    *,
    couplets: int | None = None,
    s_cap: int | None = None,
    workers: int = 1,
) -> DecisionResult:
    """Decide with certainty whether H is non-trivial, in one round."""
    catalog = _catalog(group, catalog)
    if group.order == 1 or catalog.r == 1:
        return DecisionResult(
            nontrivial=False,
            deterministic=True,
            couplets=0,
            probability=Fraction(0),
            amplified=Fraction(1),
            ledger=oracle.ledger.as_dict(),
        )
    couplets = choose_s_exact(catalog.r) if couplets is None else couplets
    plan, probability = _run_round(
        group,
        oracle,
        catalog.subgroups,
        (catalog.trivial_index,),
        couplets,
        s_cap,
        workers,
    )
    amplified = amplify_once(probability)
    return DecisionResult(
        nontrivial=_check_bit(amplified) == 1,
        deterministic=True,
        couplets=plan.couplets,
        probability=probability,
        amplified=amplified,
        ledger=oracle.ledger.as_dict(),
    )


def one_sided_answer(amplified: Fraction, seed: int) -> bool:
    """Draw the measured bit; True means the answer "trivial"."""
    return Fraction(np.random.default_rng(seed).random()) < amplified


def _one_sided_amplified(  # noqa: PLR0913
    group: FiniteGroup,
    oracle: HiddenOracle,
    candidates: tuple[Subgroup, ...],
    couplets: int | None,
    s_cap: int | None,
    workers: int,
) -> tuple[int, Fraction, Fraction]:
    couplets = choose_s_exact(len(candidates)) if couplets is None else couplets
    plan, probability = _run_round(
        group,
        oracle,
        candidates,
        tuple(range(len(candidates) - 1)),
        couplets,
        s_cap,
        workers,
    )
    return plan.couplets, probability, amplify_once(probability)


def one_sided_trivial(  # noqa: PLR0913
    group: FiniteGroup,
    oracle: HiddenOracle,
    seed: int,
    catalog: SubgroupCatalog | None = None,
    *,
    couplets: int | None = None,
    s_cap: int | None = None,
    workers: int = 1,
) -> DecisionResult:
    """Decide triviality testing only the cyclic subgroups.

    "trivial" is certain for H = {1_G} and "non-trivial" for cyclic
    H != {1_G}; for non-cyclic H the answer is drawn with the seed.
    """
    logger = logging.getLogger(__name__)
    candidates = cyclic_subgroups(_catalog(group, catalog))
    if group.order == 1 or len(candidates) == 1:
        return DecisionResult(
            nontrivial=False,
            deterministic=True,
            couplets=0,
            probability=Fraction(0),
            amplified=Fraction(1),
            ledger=oracle.ledger.as_dict(),
        )
    couplets, probability, amplified = _one_sided_amplified(
        group,
        oracle,
        candidates,
        couplets,
        s_cap,
        workers,
    )
    deterministic = amplified in (0, 1)
    if not deterministic:
        logger.warning(
            "Non-cyclic hidden subgroup: answer is random with p=%(p)s",
            {"p": amplified},
        )
    return DecisionResult(
        nontrivial=not one_sided_answer(amplified, seed),
        deterministic=deterministic,
        couplets=couplets,
        probability=probability,
        amplified=amplified,
        ledger=oracle.ledger.as_dict(),
    )


def one_sided_error_rate(  # noqa: PLR0913
    group: FiniteGroup,
    oracle: HiddenOracle,
    trials: int,
    seed: int,
    catalog: SubgroupCatalog | None = None,
    *,
    couplets: int | None = None,
    s_cap: int | None = None,
) -> OneSidedErrorRate:
    """Count wrong "trivial" answers over seeds seed .. seed + trials - 1."""
    candidates = cyclic_subgroups(_catalog(group, catalog))
    if oracle.hidden.is_trivial or len(candidates) == 1:
        return OneSidedErrorRate(trials=trials, errors=0, amplified=Fraction(1))
    _, _, amplified = _one_sided_amplified(
        group,
        oracle,
        candidates,
        couplets,
        s_cap,
        1,
    )
    errors = sum(
        one_sided_answer(amplified, trial_seed)
        for trial_seed in range(seed, seed + trials)
    )
    return OneSidedErrorRate(
        trials=trials,
        errors=errors,
        amplified=amplified,
    )


def identify_bounded(  # noqa: PLR0913
    group: FiniteGroup,
    oracle: HiddenOracle,
    seed: int,
    catalog: SubgroupCatalog | None = None,
    *,
    couplets: int | None = None,
    epsilon: Fraction = DEFAULT_EPSILON,
) -> BoundedResult:
    """Run the cascade once, measure, and output K_nu's generators."""
    catalog = _catalog(group, catalog)
    if couplets is None:
        couplets = choose_s_bounded(catalog.r, epsilon)
    state = run_cascade(
        prepare_initial(group, oracle, couplets, catalog.subgroups),
    )
    distribution = first_register_distribution(state)
    outcome = sample_outcome(distribution, seed)
    measured = (
        generating_set(catalog.subgroups[outcome - 1]) if outcome > 0 else ()
    )
    generators = sanitize_output(oracle, measured)
    members = tuple(sorted(closure(group, generators)))
    hidden_outcome = catalog.index_of(oracle.hidden) + 1
    return BoundedResult(
        generators=generators,
        members=members,
        outcome=outcome,
        couplets=couplets,
        success_probability=distribution.probability(hidden_outcome),
        success_bound=bounded_error_bound(catalog.r, couplets),
        correct=members == oracle.hidden.members,
        ledger=oracle.ledger.as_dict(),
    )
