"""Exact certificates for finite rings, their subrings, modules and truncation towers."""

__version__ = "0.1.0"
