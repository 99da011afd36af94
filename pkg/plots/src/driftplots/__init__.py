"""Standalone figure scripts for the rate-estimate CSV outputs.

These are read-only consumers of the CSV files the estimation CLI
writes; they never alter numerical content.
"""

__all__ = ["histogram", "tvd_curves"]
