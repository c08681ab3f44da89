"""Simulation and parameter extraction for organic transistors."""

__version__ = "0.1.0"
