"""Keep definitions for the whole project in one place."""
