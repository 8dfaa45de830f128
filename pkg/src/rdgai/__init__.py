"""Classify transitions between variant readings in a TEI critical apparatus."""

__version__ = "0.1.0"
