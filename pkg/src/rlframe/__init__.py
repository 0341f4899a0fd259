"""A small modular reinforcement-learning framework on numpy."""

__version__ = '0.1.0'
