"""Finite metric geometry lab: Ptolemy checks, metrization, hyperbolicity, boundary metrics."""

__version__ = "1.0.0"
