"""Mode-collapse metrics: collapse regions, packed total variation, Blackwell
comparison of experiments, finite VEEGAN bounds and KL evaluation."""

from .blackwell import (
    PayoffSpec, Verdict, factorize, is_more_informative, max_expected_payoff,
)
from .bounds import (
    BoundQuery, SweepRow, binomial_dtv, dtv_lower_bound, dtv_upper_bound, packing_sweep,
)
from .distributions import (
    DiscreteDist, PackedDist, PiecewiseUniformDist, common_refinement, discretize, entropy,
    kl_divergence, pack, total_variation,
)
from .estimators import KLDivergenceScorer, ModeCollapseRegion
from .evaluation import (
    KlReport, LabelCounts, emit_plot_data, kl_report, load_counts, sample_synthetic,
)
from .exceptions import DomainError, EnumerationLimitError, ValidationError
from .region import (
    RegionBoundary, dtv_from_boundary, has_mode_collapse, region_area, region_boundary,
)
from .veegan import (
    FiniteVeeganConfig, autoencoder_loss, cross_entropy_term, kl_joint,
    matched_optimum_check, objective_upper_bound, reconstructor_marginal, verify_bound,
)

__version__ = "0.1.0"
