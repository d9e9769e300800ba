"""One-way quantum computing on decoherence-free encoded cluster states."""

__version__ = "0.1.0"
