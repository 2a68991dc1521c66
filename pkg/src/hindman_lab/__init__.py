"""Executable experiments on Hindman's theorem for finite unions.

Bitmask finite sets, union families and matching, staged enumerations, the four
computable colorings built by priority constructions, finite-scale matching
lemmas, and a verification harness.
"""

__version__ = "0.1.0"
