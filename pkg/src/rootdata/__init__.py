"""Exact algebra of root data: reflection groups, torus normalizer
extensions, group cohomology, and automorphisms, with a verification CLI."""

__version__ = "0.1.0"
