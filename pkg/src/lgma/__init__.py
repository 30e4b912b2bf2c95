"""Language-guided modular arm: world, tensor engine, codecs, cortex, executive, service."""

__version__ = "0.1.0"
