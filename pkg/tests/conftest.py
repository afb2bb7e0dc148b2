"""Shared groups and catalogs for the tests."""

from __future__ import annotations

from functools import cache
from typing import TYPE_CHECKING

import pytest
from hypothesis import HealthCheck, settings

from modules.groups.finite_group import build_group
from modules.groups.subgroups import enumerate_subgroups, subgroup_from_members
from modules.oracle.hidden_oracle import make_hidden_oracle

if TYPE_CHECKING:
    from modules.groups.finite_group import FiniteGroup
    from modules.groups.subgroups import Subgroup, SubgroupCatalog
    from modules.oracle.hidden_oracle import HiddenOracle

settings.register_profile(
    "hspsim",
    deadline=None,
    suppress_health_check=[HealthCheck.function_scoped_fixture],
)
settings.load_profile("hspsim")

SMALL_GROUPS = ["Z:2", "Z:3", "Z:4", "Z:6", "Z2^2", "S:3"]


@cache
def get_group(spec: str) -> FiniteGroup:
    """Build a group once per test session."""
    return build_group(spec)


@cache
def get_catalog(spec: str) -> SubgroupCatalog:
    """Enumerate the subgroups of a group once per test session."""
    return enumerate_subgroups(get_group(spec))


def get_subgroup(spec: str, members: tuple[int, ...]) -> Subgroup:
    """Get a validated subgroup by its members."""
    return subgroup_from_members(get_group(spec), members)


def get_oracle(spec: str, members: tuple[int, ...]) -> HiddenOracle:
    """Get a fresh oracle hiding the given subgroup."""
    return make_hidden_oracle(get_group(spec), get_subgroup(spec, members))


@pytest.fixture(autouse=True)
def _isolated_environment(
    monkeypatch: pytest.MonkeyPatch,
    tmp_path_factory: pytest.TempPathFactory,
) -> None:
    for key in (
        "HSPSIM_DENSE_CAP",
        "HSPSIM_S_CAP",
        "HSPSIM_GROUP_ORDER_CAP",
        "HSPSIM_LOG_LEVEL",
    ):
        monkeypatch.delenv(key, raising=False)
    monkeypatch.chdir(tmp_path_factory.mktemp("run"))
