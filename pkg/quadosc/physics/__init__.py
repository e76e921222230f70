"""Frequency, invariants, fluctuations, waveguide scenario and substitutions."""
