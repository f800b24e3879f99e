"""finpot - distill financial program-of-thought reasoning into small student models."""

__version__ = "0.1.0"
