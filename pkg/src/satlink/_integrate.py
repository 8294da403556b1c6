"""Thin wrapper around adaptive Gauss-Kronrod quadrature with error checking."""

from __future__ import annotations

from typing import Callable

import scipy.integrate

from .errors import NumericalError


def quad_checked(
    fn: Callable[[float], float],
    a: float,
    b: float,
    *,
    rel_tol: float = 1e-10,
    abs_tol: float = 0.0,
    limit: int = 200,
) -> float:
    """Integrate fn over [a, b], raising NumericalError if quadrature fails."""
    if a == b:
        return 0.0
    result, abserr, info, *rest = scipy.integrate.quad(
        fn, a, b, epsrel=rel_tol, epsabs=abs_tol, limit=limit, full_output=True
    )
    if rest:
        # a message element is appended only on failure
        raise NumericalError(f"quadrature did not converge on [{a}, {b}]: {rest[0]}")
    return result
