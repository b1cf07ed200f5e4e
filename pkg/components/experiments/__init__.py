"""Experiments reproducing the qualitative billiard claims as quantitative reports."""
