"""Collaboration-encouraging quantum secret sharing with a seal: simulator and harness."""

__version__ = "0.1.0"
