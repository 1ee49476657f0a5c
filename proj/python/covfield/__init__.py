"""Covariance fields on the sphere, bound from the C++ core."""

from ._core import (
    CovfieldError,
    __version__,
    exp_map,
    fractional_anisotropy,
    geodesic_distance,
    h_lik,
    h_lnpr,
    h_trdif,
    h_trln2,
    interpolate,
    linear_interp,
    log_map,
    project_simplex,
    rank_sum,
    relative_eigenvalues,
    ring_sample,
    signed_rank,
    test_procedure_1,
    test_procedure_2,
)

__all__ = [
    "CovfieldError",
    "__version__",
    "exp_map",
    "fractional_anisotropy",
    "geodesic_distance",
    "h_lik",
    "h_lnpr",
    "h_trdif",
    "h_trln2",
    "interpolate",
    "linear_interp",
    "log_map",
    "project_simplex",
    "rank_sum",
    "relative_eigenvalues",
    "ring_sample",
    "signed_rank",
    "test_procedure_1",
    "test_procedure_2",
]
