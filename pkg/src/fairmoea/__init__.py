"""Fairness-aware many-objective evolutionary learning.

Trains populations of small binary classifiers against cross-entropy plus
25 fairness objectives, with the actively optimized objective subset
re-chosen every generation from a signed nonlinear-correlation analysis
of the current population.
"""

__version__ = "0.1.0"
