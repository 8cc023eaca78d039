"""Within-subject interval estimates for single-factor repeated-measures designs.

The package computes classical and Bayesian intervals for condition means
when every subject is measured under every condition: the between-subject CI,
the Loftus-Masson within-subject CI, within-subject Bayesian HDIs under
homoscedastic and heteroscedastic error models, a large-sample variant, and
Cousineau/Morey style normalization intervals.  Supporting machinery covers
the Student-t kernel, conditional and fully Bayesian posteriors, design
diagnostics, data ingestion, simulation, and SVG error-bar plots.
"""

from .diagnostics import (
    Advisory,
    AnovaRow,
    AnovaSource,
    AnovaTable,
    CircularityReport,
    anova_table,
    anova_table_from_ss,
    circularity_report,
)
from .errors import (
    ConvergenceError,
    DataFormatError,
    DataParseError,
    DegeneratePosteriorError,
    DuplicateCellError,
    InvalidTableError,
    LayoutError,
    MissingCellError,
    SimSpecError,
    WsintError,
)
from .estimate import IntervalEstimate, IntervalMethod
from .intervals import (
    DfChoice,
    between_subject_ci,
    cousineau_morey_interval,
    heteroscedastic_hdi,
    length_ratio,
    loftus_masson_ci,
    nathoo_masson_hdi,
    pairwise_difference_ci,
    within_subject_hdi,
)
from .io import (
    DatasetSpec,
    Layout,
    SimSpec,
    bundled_path,
    load_dataset,
    load_simspec,
    read_table,
    render_long,
    render_wide,
    simulate,
)
from .plotting import emit_plot
from .posterior import (
    ConditionalPosteriorSet,
    GibbsConfig,
    GibbsResult,
    Model,
    Prior,
    UnconditionalProbability,
    conditional_posterior,
    mc_verify_modified_probability,
    modified_posterior_probability,
    run_gibbs,
    unconditional_posterior_probability,
)
from .summary import (
    RepeatedMeasuresTable,
    StandardizedTable,
    SummaryStats,
    random_effect_mles,
    standardize,
    summarize,
)
from .tdist import (
    ScaledTPosterior,
    hdi,
    normal_quantile,
    t_cdf,
    t_pdf,
    t_quantile,
    t_sample,
)

__version__ = "0.1.0"

__all__ = [
    "Advisory",
    "AnovaRow",
    "AnovaSource",
    "AnovaTable",
    "CircularityReport",
    "ConditionalPosteriorSet",
    "ConvergenceError",
    "DataFormatError",
    "DataParseError",
    "DatasetSpec",
    "DegeneratePosteriorError",
    "DfChoice",
    "DuplicateCellError",
    "GibbsConfig",
    "GibbsResult",
    "IntervalEstimate",
    "IntervalMethod",
    "InvalidTableError",
    "Layout",
    "LayoutError",
    "MissingCellError",
    "Model",
    "Prior",
    "RepeatedMeasuresTable",
    "ScaledTPosterior",
    "SimSpec",
    "SimSpecError",
    "StandardizedTable",
    "SummaryStats",
    "UnconditionalProbability",
    "WsintError",
    "anova_table",
    "anova_table_from_ss",
    "between_subject_ci",
    "bundled_path",
    "circularity_report",
    "conditional_posterior",
    "cousineau_morey_interval",
    "emit_plot",
    "hdi",
    "heteroscedastic_hdi",
    "length_ratio",
    "load_dataset",
    "load_simspec",
    "loftus_masson_ci",
    "mc_verify_modified_probability",
    "modified_posterior_probability",
    "nathoo_masson_hdi",
    "normal_quantile",
    "pairwise_difference_ci",
    "random_effect_mles",
    "read_table",
    "render_long",
    "render_wide",
    "run_gibbs",
    "simulate",
    "standardize",
    "summarize",
    "t_cdf",
    "t_pdf",
    "t_quantile",
    "t_sample",
    "unconditional_posterior_probability",
    "within_subject_hdi",
]
