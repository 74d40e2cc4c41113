"""Unruh-DeWitt detector amplitudes and their SPDC waveguide analogue."""

__version__ = "0.1.0"
