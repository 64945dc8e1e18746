"""Coefficient generation and congruence certificates for the mock theta
function omega and the Cesaro function C."""

__version__ = "0.1.0"
