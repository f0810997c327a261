"""Central table of defaults and tolerance profiles.

Every tolerance can be overridden per run (``--tol name=value`` on the command
line or a ``tolerances`` section in the instance file).  The environment
variable ``MPNORMAL_TOL_PROFILE`` selects a base profile: ``default``,
``strict`` (all tolerances divided by 10) or ``loose`` (multiplied by 100).

==================  ========  ==================================================
name                default   meaning
==================  ========  ==================================================
validate            1e-10     block hypothesis defects, relative to max(1, ||A||)
cluster             1e-8      eigenvalue gap merging A-eigenspaces, rel. ||A||
residual            1e-9      joint eigenpair residuals ||Av - av||, ||Wv - wv||
set_distance        1e-10     Hausdorff distance, formula vs characteristic set
char_residual       1e-8      scaled characteristic determinant at eigenvalues
fd                  5e-3      finite-difference eigenvalue error at default grid
gram                1e-8      off-diagonal eigenfunction Gram entries
quadrature          1e-6      norm identity discrepancy
boundary            1e-10     boundary-term cancellation, rel. ||A|| ||u0||^2
==================  ========  ==================================================
"""

import os

TOLERANCES = {
    "validate": 1e-10,
    "cluster": 1e-8,
    "residual": 1e-9,
    "set_distance": 1e-10,
    "char_residual": 1e-8,
    "fd": 5e-3,
    "gram": 1e-8,
    "quadrature": 1e-6,
    "boundary": 1e-10,
}

PROFILES = {"default": 1.0, "strict": 0.1, "loose": 100.0}

PROFILE_ENV = "MPNORMAL_TOL_PROFILE"

K_MAX = 16
GRID = 2000
GRAM_NODES = 4096
FD_SCHEME = "trapezoid"
FORMAT_VERSION = "1"


def tolerances(overrides=None, profile=None):
    """Resolved tolerance table: profile scaling, then explicit overrides."""
    profile = profile or os.environ.get(PROFILE_ENV, "default")
    if profile not in PROFILES:
        raise ValueError(f"unknown tolerance profile {profile!r}; choose from {sorted(PROFILES)}")
    scale = PROFILES[profile]
    tol = {name: value * scale for name, value in TOLERANCES.items()}
    for name, value in (overrides or {}).items():
        if name not in tol:
            raise KeyError(f"unknown tolerance {name!r}")
        tol[name] = float(value)
    return tol
