"""Single record of numeric tolerances shared across the package.

Every threshold that appears in more than one place lives here; operations
take an optional ``settings`` argument defaulting to ``DEFAULT_SETTINGS``.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class NumericSettings:
    # polynomial / rational arithmetic
    cleanup_eps: float = 1e-12          # explicit coefficient cleanup only
    root_tol: float = 1e-10             # backward-error acceptance in find_roots
    root_max_iter: int = 500
    pole_separation: float = 1e-8       # distinct poles closer than this -> error
    root_validation_tol: float = 1e-6   # listed root must satisfy denom to this
    residue_drop: float = 1e-13         # relative threshold below which a pole term is dropped

    # arrangement / pole proximity
    arrangement_separation: float = 1e-10
    pole_hit: float = 1e-10

    # residual certification
    zero_poly_rtol: float = 1e-9        # scaled "zero polynomial" test
    van_vleck_rtol: float = 1e-8        # exact-division remainder bound

    # solver
    newton_tol: float = 1e-11
    newton_max_iter: int = 200
    newton_min_step: float = 1e-12
    dedupe_tol: float = 1e-6

    # classification
    classify_residual_tol: float = 1e-8
    eig_threshold: float = 1e-8
    real_data_tol: float = 1e-9


DEFAULT_SETTINGS = NumericSettings()
