"""Exact verification toolkit for Pfaffian Fano 3-folds in weighted projective 6-space."""

from .wpoly import FractionalWeight, GradedPoly, WeightSystem, parse_and_grade

__version__ = "0.1.0"

__all__ = ["FractionalWeight", "GradedPoly", "WeightSystem", "parse_and_grade"]
