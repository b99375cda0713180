"""Interior point LP/QP solver with dynamic non-diagonal regularization.

The heavy lifting lives in the compiled extension; this package re-exports
the main operations:

- solve_file(path, mode="nondiag", tol=0.0, maxit=200, certify=False)
- run_batch(dir, modes=["nondiag", "uniform"], tol=0.0, maxit=200)
- profile_fraction(records, solver, metric, tau)
"""

from regipm._core import (  # noqa: F401
    __version__,
    profile_fraction,
    run_batch,
    solve_file,
)

MODES = ("nondiag", "uniform", "none")

__all__ = ["solve_file", "run_batch", "profile_fraction", "MODES", "__version__"]
