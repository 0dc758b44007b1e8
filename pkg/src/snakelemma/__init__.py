"""Exact snake lemma, ring lemma, exact ring and 4-lemma for finitely generated abelian groups."""

__version__ = "0.1.0"
