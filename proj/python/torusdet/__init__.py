"""Certified determinants and traces on the lattice Z^n, toroidal symbols and Hill problems."""

from ._torusdet import (
    DeterminantResult,
    Error,
    HillProblem,
    Matrix,
    NonConvergence,
    NotSummable,
    ParseError,
    Symbol,
    TailModel,
    TraceResult,
    ValidationError,
    bracket_power,
    det_gamma,
    determinant,
    existence_test,
    extract_null_solution,
    fractional_laplacian,
    hill_determinant,
    invertibility,
    l1_membership,
    multiplier,
    parse_symbol,
    run_cli,
    separable,
    spectral_shift_scan,
    trace,
)

__all__ = [name for name in dir() if not name.startswith("_")]
