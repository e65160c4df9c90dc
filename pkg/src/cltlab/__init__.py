"""cltlab: a strictly stationary, (L-1)-tuplewise independent sign-flip
process that defeats the central limit theorem at order L, with the
statistical harness that verifies it.

The sequence has uniform marginals on [-sqrt(3), sqrt(3)] (mean 0,
variance 1), any L-1 of its coordinates are mutually independent, and
its magnitudes are fully independent - yet normalized partial sums keep
a strict L-th moment deficit against the matching iid process, so no
subsequence of S_n/sqrt(n) can converge to a normal law.

Layout:

* :mod:`cltlab.rng` - counter-based random streams (Philox4x64-10).
* :mod:`cltlab.vecops` - the deterministic sign transforms.
* :mod:`cltlab.signs` - the parity-constrained sign space and its law.
* :mod:`cltlab.measures` - the recursive block-measure samplers.
* :mod:`cltlab.stationary` - the lazy stationary window sampler.
* :mod:`cltlab.stats` - moment estimation, exact oracles, tests.
* :mod:`cltlab.verify` - named verification suites.
* :mod:`cltlab.cli` - the `cltlab` command.
"""

from .config import (
    DEFAULT_CONFIG,
    SQRT3,
    ConfigError,
    ProcessConfig,
    StabilizationCapError,
    block_factor_for_order,
)
from .rng import RandomSource
from .measures import sample_base, sample_block_sequence, sample_mu, sample_mu_via_flip
from .signs import char_moment, enumerate_sign_space, sample_sign_vector
from .stationary import (
    OffsetProcess,
    WindowSample,
    build_block,
    sample_window,
    sample_window_batch,
    stabilization_level,
)
from .stats import (
    GapReport,
    MomentAccumulator,
    MomentEstimate,
    clt_gap_check,
    estimate_moment,
    gaussian_moment,
    iid_uniform_sum_moment,
    ks_statistic,
    mu1_sum_moment,
    sign_pattern_chisq,
    two_block_sum_moment,
)
from .verify import run_suite

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_CONFIG",
    "SQRT3",
    "ConfigError",
    "ProcessConfig",
    "StabilizationCapError",
    "RandomSource",
    "OffsetProcess",
    "WindowSample",
    "block_factor_for_order",
    "build_block",
    "char_moment",
    "clt_gap_check",
    "enumerate_sign_space",
    "estimate_moment",
    "gaussian_moment",
    "GapReport",
    "iid_uniform_sum_moment",
    "ks_statistic",
    "MomentAccumulator",
    "MomentEstimate",
    "mu1_sum_moment",
    "run_suite",
    "sample_base",
    "sample_block_sequence",
    "sample_mu",
    "sample_sign_vector",
    "sample_window",
    "sample_window_batch",
    "sign_pattern_chisq",
    "stabilization_level",
    "sample_mu_via_flip",
    "two_block_sum_moment",
    "__version__",
]
