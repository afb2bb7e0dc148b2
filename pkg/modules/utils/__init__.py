"""Formatting, statistics and file output shared by the modules."""
