"""Dyadic shell model of the Navier-Stokes cascade."""

from ._dyadic import (
    DyadicError,
    __version__,
    certify,
    char_poly_A0,
    eig_A0,
    nonlinear_energy_flux,
    solve,
    spectrum,
    uniqueness,
)

__all__ = [
    "DyadicError",
    "__version__",
    "certify",
    "char_poly_A0",
    "eig_A0",
    "error_kind",
    "nonlinear_energy_flux",
    "solve",
    "spectrum",
    "uniqueness",
]


def error_kind(err):
    """Category of a DyadicError, e.g. 'domain' or 'numeric'."""
    return err.args[1] if len(err.args) > 1 else None
