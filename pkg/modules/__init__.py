"""Exact simulator of the polynomial-query hidden subgroup algorithm."""
