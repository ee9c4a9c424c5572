"""jumpmg: seeded simulation and convergence-event verification for jump
(super)martingale families.

Builds the explicit compensated-walk and single-hazard-jump families,
computes their predictable characteristics and exponential transforms in
closed form, classifies path convergence through finite-horizon proxies,
and runs reproducible Monte Carlo batteries over all of it.
"""

__version__ = "0.1.0"

from .generators import (  # noqa: F401
    CoxSpec,
    OneShotSpec,
    RandomWalkSpec,
    gen_brownian,
    gen_cox,
    gen_det_alternating,
    gen_oneshot,
    gen_random_walk,
)
from .grids import TimeGrid  # noqa: F401
from .paths import SamplePath, add_paths, oscillation, quadratic_variation, running_extrema  # noqa: F401
