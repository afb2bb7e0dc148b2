"""Command line harness and invariant checks."""
