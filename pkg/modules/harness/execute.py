"""Mode dispatch from a RunConfig to a Report."""

from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from typing import TYPE_CHECKING

from modules.cascade.branch_state import dump_branches
from modules.cascade.outcomes import first_register_distribution
from modules.cascade.test_operator import prepare_initial, run_cascade
from modules.definitions.constants import BUILTIN_CATALOG
from modules.definitions.types import Mode
from modules.exact.conditional_matrix import build_conditional_matrix
from modules.exact.identification import (
    decide_trivial,
    identify_bounded,
    identify_subgroup,
    one_sided_error_rate,
    one_sided_trivial,
)
from modules.exact.parameters import (
    bounded_error_bound,
    choose_s_bounded,
    choose_s_exact,
)
from modules.groups.finite_group import build_group
from modules.groups.subgroups import (
    enumerate_subgroups,
    generating_set,
    subgroup_from_members,
)
from modules.harness.checks import check_amplification, verify_group
from modules.harness.report import Report
from modules.oracle.hidden_oracle import make_hidden_oracle
from modules.oracle.query_ledger import QueryLedger
from modules.session_info import get_run_info, get_wall_time_info
from modules.utils.output_formatting import (
    format_float,
    format_members,
    format_rational,
)

if TYPE_CHECKING:
    from collections.abc import Callable

    from modules.groups.finite_group import FiniteGroup
    from modules.groups.subgroups import Subgroup, SubgroupCatalog
    from modules.harness.run_config import RunConfig
    from modules.oracle.hidden_oracle import HiddenOracle


def _hidden_subgroups(
    config: RunConfig,
    group: FiniteGroup,
    catalog: SubgroupCatalog,
) -> tuple[Subgroup, ...]:
    if config.hidden_all:
        return catalog.subgroups
    return (subgroup_from_members(group, config.hidden),)


def _fan_out(
    config: RunConfig,
    hidden_subgroups: tuple[Subgroup, ...],
    run_one: Callable[[Subgroup, HiddenOracle], dict],
) -> tuple[list[dict], QueryLedger]:
    group = hidden_subgroups[0].group
    oracles = [make_hidden_oracle(group, hidden) for hidden in hidden_subgroups]
    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as executor:
            results = list(executor.map(run_one, hidden_subgroups, oracles))
    else:
        results = [
            run_one(hidden, oracle)
            for hidden, oracle in zip(hidden_subgroups, oracles, strict=True)
        ]
    ledger = QueryLedger()
    for oracle in oracles:
        ledger.absorb(oracle.ledger)
    return [
        {"hidden": format_members(hidden.members)} | result
        for hidden, result in zip(hidden_subgroups, results, strict=True)
    ], ledger


def _subgroups_payload(catalog: SubgroupCatalog) -> dict:
    return {
        "subgroups": [
            {
                "index": index,
                "members": format_members(subgroup.members),
                "order": subgroup.order,
                "cyclic": subgroup.is_cyclic,
                "generators": format_members(generating_set(subgroup)),
                "transversal": format_members(subgroup.transversal),
            }
            for index, subgroup in enumerate(catalog.subgroups, start=1)
        ],
    }


def _simulate(
    config: RunConfig,
    group: FiniteGroup,
    catalog: SubgroupCatalog,
) -> tuple[dict, QueryLedger]:
    couplets = config.couplets or choose_s_bounded(catalog.r, config.epsilon)

    def run_one(hidden: Subgroup, oracle: HiddenOracle) -> dict:
        state = run_cascade(
            prepare_initial(group, oracle, couplets, catalog.subgroups),
        )
        distribution = first_register_distribution(state)
        result = {
            "distribution": distribution.serialize(),
            "success_probability": format_rational(
                distribution.probability(catalog.index_of(hidden) + 1),
            ),
            "success_bound": format_rational(
                bounded_error_bound(catalog.r, couplets),
            ),
            "branches": len(state.branches),
        }
        if config.debug_branches:
            result["branch_dump"] = dump_branches(state)
        return result

    results, ledger = _fan_out(
        config,
        _hidden_subgroups(config, group, catalog),
        run_one,
    )
    return {"s": couplets, "results": results}, ledger


def _matrix(
    config: RunConfig,
    group: FiniteGroup,
    catalog: SubgroupCatalog,
) -> dict:
    couplets = config.couplets or choose_s_exact(catalog.r)
    matrix = build_conditional_matrix(
        group,
        catalog.subgroups,
        couplets,
        config.workers,
    )
    return {
        "s": couplets,
        "candidates": [
            format_members(subgroup.members) for subgroup in catalog
        ],
        "matrix": matrix.serialize(),
    }


def _exact_mode(
    config: RunConfig,
    group: FiniteGroup,
    catalog: SubgroupCatalog,
) -> tuple[dict, QueryLedger]:
    def run_one(hidden: Subgroup, oracle: HiddenOracle) -> dict:
        if config.mode == Mode.IDENTIFY:
            result = identify_subgroup(
                group,
                oracle,
                catalog,
                couplets=config.couplets,
                s_cap=config.s_cap,
                workers=config.workers,
            )
        elif config.mode == Mode.IDENTIFY_BOUNDED:
            result = identify_bounded(
                group,
                oracle,
                config.seed,
                catalog,
                couplets=config.couplets,
                epsilon=config.epsilon,
            )
        elif config.mode == Mode.DECIDE_TRIVIAL:
            result = decide_trivial(
                group,
                oracle,
                catalog,
                couplets=config.couplets,
                s_cap=config.s_cap,
                workers=config.workers,
            )
        else:
            result = one_sided_trivial(
                group,
                oracle,
                config.seed,
                catalog,
                couplets=config.couplets,
                s_cap=config.s_cap,
                workers=config.workers,
            )
            payload = result.serialize()
            if not hidden.is_cyclic:
                payload["error_rate"] = one_sided_error_rate(
                    group,
                    make_hidden_oracle(group, hidden),
                    config.trials,
                    config.seed,
                    catalog,
                    couplets=config.couplets,
                    s_cap=config.s_cap,
                ).serialize()
            return payload
        return result.serialize()

    results, ledger = _fan_out(
        config,
        _hidden_subgroups(config, group, catalog),
        run_one,
    )
    return {"results": results}, ledger


def _verify(config: RunConfig) -> tuple[dict, list]:
    specs = (
        BUILTIN_CATALOG if config.group_spec is None else [config.group_spec]
    )
    checks = [check_amplification()]
    groups, rates, constants = [], [], []
    for spec in specs:
        group = build_group(spec)
        verification = verify_group(group, enumerate_subgroups(group), config)
        checks.extend(verification.checks)
        rates.extend(verification.one_sided_rates)
        constant = verification.query_constant
        if constant is not None:
            constants.append(constant)
        groups.append(
            {
                "group": spec,
                "order": group.order,
                "max_identify_queries": max(
                    verification.identify_totals,
                    default=0,
                ),
                "query_constant": None
                if constant is None
                else format_float(constant, ndigits=4),
            },
        )
    payload = {
        "groups": groups,
        "one_sided_error_rates": rates,
        "query_constant": format_float(max(constants), ndigits=4)
        if constants
        else None,
        "passed": sum(check.passed for check in checks),
        "failed": sum(not check.passed for check in checks),
    }
    return payload, checks


def execute(config: RunConfig) -> Report:
    """Run one mode and collect its report."""
    logger = logging.getLogger(__name__)
    logger.info(get_run_info(config.mode.value, config.group_label))
    started = time.perf_counter()
    ledger = QueryLedger()
    checks = []
    if config.mode == Mode.VERIFY:
        payload, checks = _verify(config)
    else:
        group = build_group(config.group_spec)
        catalog = enumerate_subgroups(group)
        payload = {"group": group.name, "order": group.order, "r": catalog.r}
        if config.mode == Mode.SUBGROUPS:
            payload |= _subgroups_payload(catalog)
        elif config.mode == Mode.SIMULATE:
            result, ledger = _simulate(config, group, catalog)
            payload |= result
        elif config.mode == Mode.MATRIX:
            payload |= _matrix(config, group, catalog)
        else:
            result, ledger = _exact_mode(config, group, catalog)
            payload |= result
    wall_time = time.perf_counter() - started
    logger.info(get_wall_time_info(wall_time))
    return Report(
        config=config.serialize(),
        payload=payload,
        ledger=ledger.as_dict(),
        wall_time=wall_time,
        checks=tuple(checks),
    )
