"""Exact identification by matrix inversion and amplification."""
