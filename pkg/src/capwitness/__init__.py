"""Detectable lower bounds on the quantum capacity of two-qubit correlated
channels, from few local measurement settings."""

__version__ = "0.1.0"
