"""Balise telegram codec, authentication layer, and stop-control simulator."""

__version__ = "0.1.0"
