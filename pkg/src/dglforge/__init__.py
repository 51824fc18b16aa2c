"""dglforge: exact computer algebra for free differential graded Lie
algebras over the rationals."""

__version__ = "0.1.0"
