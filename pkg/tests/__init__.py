"""Tests of the hidden subgroup simulator."""
