"""Quadratic quantum Hamiltonians mapped onto the classical nonstationary oscillator."""

__version__ = "0.1.0"
