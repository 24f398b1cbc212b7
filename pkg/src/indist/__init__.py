"""Four-photon indistinguishability toolkit."""
__version__ = "0.1.0"
