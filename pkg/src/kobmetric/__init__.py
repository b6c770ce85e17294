"""Certified bounds for the Kobayashi and Caratheodory metrics on model domains in C^n."""

__version__ = "0.1.0"
