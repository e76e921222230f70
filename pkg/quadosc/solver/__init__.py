"""Numerical integration of the oscillator family of equations."""
