"""Finite group arithmetic and subgroup enumeration."""
