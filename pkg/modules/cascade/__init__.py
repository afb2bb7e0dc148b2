"""Exact simulation of the Test cascade."""
