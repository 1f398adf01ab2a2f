"""Principal-value functionals of fractional Brownian motion.

Exact path samplers, local-time estimators, a discrete Hilbert transform,
and the singular time-integral functional computed by independent routes,
together with a configuration-driven verification harness.
"""

from .errors import (ConfigError, ConsistencyError, DegeneratePair,
                     EmbeddingFailure, EmptyGrid, FbmpvError, GridTooLarge,
                     LadderBelowResolution, LadderTooFine, LagNotOnGrid,
                     NotPositiveDefinite, OrderViolation,
                     QuadratureNonConvergence, SingularDiagonal,
                     SingularityOffGrid, WrongRegime)
from .functional import (FunctionalSample, bouleau_yor_check, bouleau_yor_sides,
                         continuity_modulus, from_local_time, one_sided,
                         pv_time_integral, qcov, scaling_pairs, yamada_residual)
from .hilbert import (SampledFunction, hilbert_inverse, hilbert_transform,
                      pv_log_integral, pv_quadrature, pv_singular_integral)
from .ladders import PVEstimate, make_ladder
from .model import (HurstIndex, PairStats, Regime, covariance, marginal_density,
                    pair_density, pair_stats, phi_kernel, psi_correction)
from .occupation import (LocalTimeField, box_local_time, local_time,
                         lt_modulus_scaling, occupation_check)
from .sampling import (SamplePath, TimeGrid, increments, path_rng,
                       sample_cholesky, sample_circulant, sample_ensemble)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
