"""Exact verification workbench for nonsingularity of DFT-matrix minors."""

__version__ = "0.1.0"
