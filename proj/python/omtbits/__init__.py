"""Bit-level optimization over floating-point and bit-vector objectives."""

from fractions import Fraction

from . import _omtbits
from ._omtbits import (
    OmtError,
    ParseError,
    brute_force,
    bench,
    dynamic_attractor,
    fp_class,
    fp_value,
    generate,
    verify_optimum,
)

__all__ = [
    "OmtError",
    "ParseError",
    "bench",
    "brute_force",
    "dynamic_attractor",
    "fp_class",
    "fp_value",
    "generate",
    "optimize",
    "run_script",
    "verify_optimum",
]


def _ratio(rho):
    f = Fraction(rho).limit_denominator(1 << 20)
    return (f.numerator, f.denominator)


def optimize(script, engine=None, bp=False, pi=False, so=False, rho=Fraction(1, 2), timeout=None):
    """Optimize the objective of an SMT-LIB script; returns a dict."""
    return _omtbits.optimize(script, engine, bp, pi, so, _ratio(rho), timeout)


def run_script(script, engine=None, bp=False, pi=False, so=False, rho=Fraction(1, 2),
               timeout=None, stats=False):
    """Execute all commands of a script and return the printed output."""
    return _omtbits.run_script(script, engine, bp, pi, so, _ratio(rho), timeout, stats)
