"""Billiard tables, boundary conditions and the billiard map of a ball."""
