"""Linear algebra of SO(n) and SE(n)."""
