"""Symbolic engine for multiparameter quantum enveloping algebras and
Lie bialgebras over exact truncated power series, with toral twist and
2-cocycle deformations and machine checks of the structure identities."""

__version__ = "0.1.0"
