"""Exact toolkit for holonomic sequences and the non-holonomicity of log n."""

__version__ = "0.1.0"
