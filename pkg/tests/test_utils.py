"""Tests of formatting, statistics, data and configuration helpers."""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import pytest
from pandas import DataFrame

from modules.definitions.constants import get_int_from_env, get_log_level
from modules.definitions.types import ConfigError, Mode, OutputFormat
from modules.session_info import get_run_info, get_wall_time_info
from modules.utils.data import get_report_path, write_data_frame, write_report
from modules.utils.output_formatting import (
    format_float,
    format_members,
    format_rational,
    format_rational_matrix,
    parse_members,
    parse_rational,
)
from modules.utils.statistics import (
    SamplingComparison,
    compare_samples,
    count_outcomes,
)


def test_rational_formatting():
    assert format_rational(Fraction(3, 4)) == "3/4"
    assert format_rational(0) == "0/1"
    assert format_rational(Fraction(-2, 6)) == "-1/3"
    assert parse_rational(" 1/100 ") == Fraction(1, 100)
    assert parse_rational("0.25") == Fraction(1, 4)


def test_matrix_formatting():
    assert format_rational_matrix([[Fraction(1), Fraction(1, 2)]]) == [
        ["1/1", "1/2"],
    ]


def test_member_lists():
    assert parse_members("3, 0,3") == (0, 3)
    assert format_members((0, 3)) == [0, 3]
    with pytest.raises(ValueError, match="invalid literal"):
        parse_members("0,a")


def test_format_float_keeps_small_values():
    assert format_float(0.0004) == 0.0004
    assert format_float(1.23456) == 1.23


def test_sampling_comparison():
    comparison = SamplingComparison(1, 260, 1000, Fraction(1, 4))
    assert comparison.deviation == 10
    assert comparison.within()
    assert not SamplingComparison(1, 400, 1000, Fraction(1, 4)).within()


def test_sampling_comparison_of_certain_outcomes():
    assert SamplingComparison(2, 50, 50, Fraction(1)).within()
    assert not SamplingComparison(3, 1, 50, Fraction(0)).within()


def test_count_and_compare_samples():
    samples = [1, 2, 2, 2]
    assert count_outcomes(samples) == {2: 3, 1: 1}
    comparisons = compare_samples(samples, {2: Fraction(1)})
    assert [(c.outcome, c.count) for c in comparisons] == [(1, 1), (2, 3)]


def test_report_path():
    path = get_report_path("out", Mode.DECIDE_TRIVIAL, "Z2^3", OutputFormat.CSV)
    assert path == Path("out") / "decide-trivial-z2-3.csv"


def test_write_report_creates_directories(tmp_path):
    path = tmp_path / "nested" / "report.json"
    write_report(b"{}\n", path)
    assert path.read_bytes() == b"{}\n"


def test_write_data_frame_returns_text():
    text = write_data_frame(DataFrame({"row": [0], "value": ["1/2"]}))
    assert text == "row,value\n0,1/2\n"


def test_environment_settings(monkeypatch):
    assert get_int_from_env("HSPSIM_S_CAP", 256) == 256
    monkeypatch.setenv("HSPSIM_S_CAP", "0")
    with pytest.raises(ConfigError):
        get_int_from_env("HSPSIM_S_CAP", 256)
    monkeypatch.setenv("HSPSIM_LOG_LEVEL", "warning")
    assert get_log_level() == "WARNING"


def test_dotenv_file_is_read(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    (tmp_path / ".env").write_text("HSPSIM_S_CAP=48\n")
    assert get_int_from_env("HSPSIM_S_CAP", 256) == 48


def test_session_info():
    assert get_run_info("verify", "catalog").startswith(
        "Simulation run (verify on catalog) started",
    )
    assert get_wall_time_info(1.23456) == "Finished in 1.235 s"
