"""Nonlocal ratio diffusion filters for 1D signals and 2D images."""

__version__ = "0.1.0"
