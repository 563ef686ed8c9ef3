"""Regions of variability for integrals of functions with positive real part."""

__version__ = "0.1.0"
