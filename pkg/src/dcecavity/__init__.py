"""Photon generation in a tunable double cavity: spectrum, couplings, dynamics."""
__version__ = "0.1.0"
