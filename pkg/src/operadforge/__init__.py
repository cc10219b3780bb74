"""Finite-level comparison of the poset functor F with the operad of operators O_X."""

__version__ = "0.1.0"
