"""Dense local solves guarded by a reciprocal-condition gate.

Every interpolation system in this package goes through
:func:`solve_gated`: pivoted LU factorization plus a LAPACK condition
estimate, never an explicit inverse. Systems whose estimate falls below
the gate raise :class:`ConditioningError` instead of returning garbage.
"""

from __future__ import annotations

import warnings

import numpy as np
from scipy.linalg import LinAlgError, LinAlgWarning, get_lapack_funcs, lu_factor, lu_solve

from .errors import ConditioningError

RCOND_MIN_DEFAULT = 1e-12

__all__ = ["RCOND_MIN_DEFAULT", "solve_gated"]


def solve_gated(matrix, rhs, rcond_min: float = RCOND_MIN_DEFAULT):
    """Solve ``matrix @ x = rhs`` with a conditioning gate.

    Returns ``(x, rcond)`` where ``rcond`` is the LAPACK 1-norm
    reciprocal condition estimate of the factored matrix.

    Raises
    ------
    ConditioningError
        If the matrix is singular or the estimate is below ``rcond_min``.
    """
    a = np.ascontiguousarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    b = np.asarray(rhs, dtype=float)
    anorm = np.linalg.norm(a, 1)
    try:
        with warnings.catch_warnings():
            # exact singularity only warns in scipy; the gate below turns
            # the rcond=0 estimate into a ConditioningError anyway
            warnings.simplefilter("ignore", LinAlgWarning)
            lu, piv = lu_factor(a)
    except LinAlgError:
        raise ConditioningError(rcond=0.0, size=a.shape[0]) from None
    gecon = get_lapack_funcs(("gecon",), (lu,))[0]
    rcond, info = gecon(lu, anorm, norm="1")
    if info != 0:
        raise ConditioningError(rcond=0.0, size=a.shape[0])
    rcond = float(rcond)
    if not np.isfinite(rcond) or rcond < rcond_min:
        raise ConditioningError(rcond=rcond, size=a.shape[0])
    return lu_solve((lu, piv), b), rcond
