"""Run the harness with python -m modules."""

from modules.harness.cli import run

run()
