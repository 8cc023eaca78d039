"""Conditional posteriors for condition means, and a fully Bayesian alternative.

Conditioning on the data and on plug-in estimates of the subject effects
(b_i = M_i. - M) yields scaled Student-t marginal posteriors for each
condition mean.  Three prior choices are supported:

- Jeffreys prior on the error variance, pi propto 1/sigma^2, under the
  homoscedastic model: all marginals are t_{C(N-1)}(M_.j, SS_SxC/(N(N-1)C)).
- The improper prior pi propto (1/sigma^2)^((3-N)/2): the 95% HDI is then
  exactly the Loftus-Masson CI, giving t_{(C-1)(N-1)} marginals with
  scale_sq = SS_SxC/(N(N-1)(C-1)).
- Per-condition Jeffreys priors under the heteroscedastic model:
  t_{N-1}(M_.j, omega_j^2) with omega_j^2 from the standardized scores.

The probability that mu_j falls in an interval, under these posteriors, is
the "modified" posterior probability: it ignores random-effect uncertainty.
For contrast, ``unconditional_posterior_probability`` integrates over the
subject effects with a conjugate Gibbs sampler under an explicit model

    Y_ij = mu_j + b_i + eps_ij,  eps_ij ~ N(0, sigma_eps^2),
    b_i ~ N(0, sigma_b^2),  pi(mu_j) propto 1,
    sigma_eps^2 ~ InvGamma(0.001, 0.001),
    sigma_b^2 ~ InvGamma(0.001, 0.001 * hyper^2).

The random-effects distribution is a modeling choice here, not something the
conditional method requires.  The sampler adds a translation move (shift mu
up, subject effects down by a common draw) to break the ridge between the
condition means and the average subject effect, and it runs two chains from
dispersed starts with a pooled-versus-within variance convergence check.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, DegeneratePosteriorError
from .estimate import IntervalEstimate
from .summary import RepeatedMeasuresTable, standardize, summarize
from .tdist import ScaledTPosterior, t_sample

__all__ = [
    "Model",
    "Prior",
    "Bounds",
    "ConditionalPosteriorSet",
    "conditional_posterior",
    "modified_posterior_probability",
    "mc_verify_modified_probability",
    "GibbsConfig",
    "GibbsResult",
    "run_gibbs",
    "UnconditionalProbability",
    "unconditional_posterior_probability",
]


class Model(enum.Enum):
    HOMOSCEDASTIC = "homoscedastic"
    HETEROSCEDASTIC = "heteroscedastic"


class Prior(enum.Enum):
    JEFFREYS = "jeffreys"
    LOFTUS_MASSON_IMPROPER = "lm-improper"
    PER_CONDITION_JEFFREYS = "per-condition"


@dataclass(frozen=True)
class ConditionalPosteriorSet:
    """Marginal posteriors of all C condition means for one model/prior pairing."""

    marginals: tuple[ScaledTPosterior, ...]
    model: Model
    prior: Prior

    @property
    def n_conditions(self) -> int:
        return len(self.marginals)


_SUPPORTED = {
    (Model.HOMOSCEDASTIC, Prior.JEFFREYS),
    (Model.HOMOSCEDASTIC, Prior.LOFTUS_MASSON_IMPROPER),
    (Model.HETEROSCEDASTIC, Prior.PER_CONDITION_JEFFREYS),
}


def conditional_posterior(
    table: RepeatedMeasuresTable, model: Model, prior: Prior
) -> ConditionalPosteriorSet:
    """Construct the marginal t posteriors for a supported model/prior pairing.

    Raises DegeneratePosteriorError when the relevant sum of squares is zero:
    a zero-scale t is not a distribution, and data triggering it indicate a
    degenerate design rather than a meaningful posterior.
    """
    if (model, prior) not in _SUPPORTED:
        supported = ", ".join(f"({m.value}, {p.value})" for m, p in sorted(
            _SUPPORTED, key=lambda mp: (mp[0].value, mp[1].value)
        ))
        raise ValueError(
            f"unsupported pairing ({model.value}, {prior.value}); supported: {supported}"
        )
    stats = summarize(table)
    n, c = stats.n_subjects, stats.n_conditions
    if model is Model.HOMOSCEDASTIC:
        if stats.ss_interaction <= 0.0:
            raise DegeneratePosteriorError(
                "interaction sum of squares is zero; the conditional posterior "
                "for the condition means collapses to a point mass"
            )
        if prior is Prior.JEFFREYS:
            scale_sq = stats.ss_interaction / (n * (n - 1) * c)
            df = c * (n - 1)
        else:
            scale_sq = stats.ss_interaction / (n * (n - 1) * (c - 1))
            df = (c - 1) * (n - 1)
        marginals = tuple(
            ScaledTPosterior(location=m, scale_sq=scale_sq, df=df)
            for m in stats.condition_means
        )
    else:
        std = standardize(table)
        marginals_list = []
        for j in range(c):
            col = std.values[:, j]
            omega_sq = float(((col - stats.condition_means[j]) ** 2).sum()) / (n * (n - 1))
            if omega_sq <= 0.0:
                raise DegeneratePosteriorError(
                    f"standardized scores for condition {table.condition_labels[j]!r} "
                    "have zero spread; the per-condition posterior is degenerate"
                )
            marginals_list.append(
                ScaledTPosterior(location=stats.condition_means[j], scale_sq=omega_sq, df=n - 1)
            )
        marginals = tuple(marginals_list)
    return ConditionalPosteriorSet(marginals=marginals, model=model, prior=prior)


Bounds = IntervalEstimate | tuple[float, float]


def _bounds(interval: Bounds) -> tuple[float, float]:
    if isinstance(interval, IntervalEstimate):
        return interval.lower, interval.upper
    lo, hi = interval
    if hi < lo:
        raise ValueError(f"interval upper bound {hi} is below lower bound {lo}")
    return float(lo), float(hi)


def modified_posterior_probability(
    post: ConditionalPosteriorSet, j: int, interval: Bounds
) -> float:
    """Posterior mass of an interval under the conditional posterior of mu_j."""
    lo, hi = _bounds(interval)
    marginal = post.marginals[j]
    return marginal.cdf(hi) - marginal.cdf(lo)


def mc_verify_modified_probability(
    post: ConditionalPosteriorSet,
    j: int,
    interval: Bounds,
    n: int,
    seed: int,
) -> float:
    """Monte Carlo check of modified_posterior_probability.

    Returns the fraction of n posterior draws falling inside the interval;
    it should agree with the analytic value within about 3 sqrt(L(1-L)/n).
    """
    if n < 10_000:
        raise ValueError(f"need at least 10^4 draws for a meaningful check, got {n}")
    lo, hi = _bounds(interval)
    draws = t_sample(post.marginals[j], n, seed)
    return float(np.mean((draws >= lo) & (draws <= hi)))


@dataclass(frozen=True)
class GibbsConfig:
    """Settings for the fully Bayesian sampler."""

    iterations: int = 5000
    burn_in: int = 1000
    seed: int = 0
    random_effect_prior_sd_hyper: float = 1.0

    def __post_init__(self):
        if self.iterations < 1000:
            raise ValueError(f"iterations must be at least 1000, got {self.iterations}")
        if not 0 <= self.burn_in < self.iterations:
            raise ValueError(
                f"burn_in must be in [0, iterations), got {self.burn_in} of {self.iterations}"
            )
        if not self.random_effect_prior_sd_hyper > 0.0:
            raise ValueError(
                f"random_effect_prior_sd_hyper must be positive, "
                f"got {self.random_effect_prior_sd_hyper}"
            )


@dataclass(frozen=True)
class GibbsResult:
    """Retained draws of the condition means, with convergence diagnostics.

    ``mu_draws`` has shape (chains, kept_iterations, C).  ``variance_ratios``
    are pooled-over-within chain variance ratios per condition; values near 1
    indicate the chains agree.
    """

    mu_draws: np.ndarray = field(repr=False)
    posterior_means: tuple[float, ...]
    posterior_sds: tuple[float, ...]
    variance_ratios: tuple[float, ...]
    n_draws: int


_IG_SHAPE = 0.001  # shared inverse-gamma shape for both variance priors
_IG_RATE_EPS = 0.001


def _split_chain_ratios(mu_draws: np.ndarray) -> tuple[float, ...]:
    """Pooled-over-within chain variance ratio per condition.

    Near 1 when chains agree; above 1 when they sample different regions.
    Fewer than 2 retained draws per chain carry no evidence either way, so
    the ratios default to 1.
    """
    chains, kept, c = mu_draws.shape
    if kept < 2:
        return tuple(1.0 for _ in range(c))
    within = mu_draws.var(axis=1, ddof=1).mean(axis=0)
    pooled = mu_draws.reshape(chains * kept, c).var(axis=0, ddof=1)
    ratios = np.where(within > 0.0, pooled / np.maximum(within, 1e-300), 1.0)
    return tuple(float(r) for r in ratios)


def _check_convergence(mu_draws: np.ndarray, threshold: float = 1.1) -> tuple[float, ...]:
    ratios = _split_chain_ratios(mu_draws)
    if any(r > threshold for r in ratios):
        raise ConvergenceError(
            f"split-chain variance ratios {tuple(round(r, 4) for r in ratios)} "
            f"exceed {threshold}; increase iterations or burn_in",
            variance_ratios=ratios,
        )
    return ratios


def run_gibbs(table: RepeatedMeasuresTable, cfg: GibbsConfig) -> GibbsResult:
    """Sample the fully Bayesian mixed model posterior; two chains, fixed seed.

    Raises ConvergenceError when any condition mean's pooled-over-within
    variance ratio exceeds 1.1.
    """
    y = table.values
    n, c = y.shape
    chains = 2
    rng = np.random.Generator(np.random.Philox(cfg.seed))

    stats = summarize(table)
    cond_means = np.asarray(stats.condition_means)
    b_hat = np.asarray(stats.subject_means) - stats.grand_mean
    y_sd = float(y.std()) or 1.0
    ms_interaction = stats.ss_interaction / ((n - 1) * (c - 1))

    # Dispersed deterministic starts.
    mu = np.stack([cond_means - 2.0 * y_sd, cond_means + 2.0 * y_sd])
    b = np.stack([b_hat, b_hat])
    var_floor = max(1e-8, 1e-10 * y_sd * y_sd)
    sig_e2 = np.array([max(ms_interaction, var_floor), 10.0 * max(ms_interaction, var_floor)])
    b_var = float(np.var(b_hat)) if n > 1 else 0.0
    sig_b2 = np.array([max(b_var, var_floor), 10.0 * max(b_var, var_floor)])

    a_e = _IG_SHAPE + 0.5 * n * c
    a_b = _IG_SHAPE + 0.5 * n
    rate_b_prior = _IG_RATE_EPS * cfg.random_effect_prior_sd_hyper ** 2

    kept = cfg.iterations - cfg.burn_in
    mu_draws = np.empty((chains, kept, c))

    for t in range(cfg.iterations):
        # mu_j | rest ~ N(mean_i(Y_ij - b_i), sigma_eps^2 / N)
        mu_mean = (y[None, :, :] - b[:, :, None]).mean(axis=1)
        mu = mu_mean + np.sqrt(sig_e2 / n)[:, None] * rng.standard_normal((chains, c))

        # b_i | rest: conjugate normal
        row_resid = (y[None, :, :] - mu[:, None, :]).sum(axis=2)
        denom = c * sig_b2 + sig_e2
        b_mean = (sig_b2[:, None] * row_resid) / denom[:, None]
        b_sd = np.sqrt(sig_b2 * sig_e2 / denom)
        b = b_mean + b_sd[:, None] * rng.standard_normal((chains, n))

        # Translation move along the mu/b ridge: the likelihood is invariant
        # under (mu + d, b - d); d is drawn from the b prior term.
        delta = b.mean(axis=1) + np.sqrt(sig_b2 / n) * rng.standard_normal(chains)
        mu = mu + delta[:, None]
        b = b - delta[:, None]

        # Variances: conjugate inverse-gamma draws
        resid = y[None, :, :] - mu[:, None, :] - b[:, :, None]
        rss = (resid * resid).sum(axis=(1, 2))
        sig_e2 = (_IG_RATE_EPS + 0.5 * rss) / rng.gamma(a_e, 1.0, size=chains)
        sig_b2 = (rate_b_prior + 0.5 * (b * b).sum(axis=1)) / rng.gamma(a_b, 1.0, size=chains)

        if t >= cfg.burn_in:
            mu_draws[:, t - cfg.burn_in, :] = mu

    ratios = _check_convergence(mu_draws)
    flat = mu_draws.reshape(-1, c)
    return GibbsResult(
        mu_draws=mu_draws,
        posterior_means=tuple(float(m) for m in flat.mean(axis=0)),
        posterior_sds=tuple(float(s) for s in flat.std(axis=0, ddof=1)),
        variance_ratios=ratios,
        n_draws=chains * kept,
    )


@dataclass(frozen=True)
class UnconditionalProbability:
    """Gibbs estimate of Pr(L <= mu_j <= U | Y) and its Monte Carlo error."""

    estimate: float
    standard_error: float
    n_draws: int


def _batch_means_se(indicator: np.ndarray) -> float:
    """Standard error of the mean of a (chains, T) autocorrelated 0/1 series."""
    chains, t = indicator.shape
    n_batches = max(2, int(math.sqrt(t)))
    batch = t // n_batches
    usable = n_batches * batch
    se_sq = 0.0
    for k in range(chains):
        means = indicator[k, :usable].reshape(n_batches, batch).mean(axis=1)
        se_sq += float(np.var(means, ddof=1)) / n_batches
    return math.sqrt(se_sq) / chains


def unconditional_posterior_probability(
    table: RepeatedMeasuresTable,
    j: int,
    interval: Bounds,
    cfg: GibbsConfig,
) -> UnconditionalProbability:
    """Posterior mass of an interval for mu_j under the fully Bayesian model.

    Unlike the conditional (modified) probability, this integrates over the
    subject effects and both variances, so HDIs from the conditional method
    typically contain less than their nominal mass here.
    """
    if not 0 <= j < table.n_conditions:
        raise IndexError(f"condition index {j} out of range for {table.n_conditions} conditions")
    lo, hi = _bounds(interval)
    result = run_gibbs(table, cfg)
    draws = result.mu_draws[:, :, j]
    indicator = ((draws >= lo) & (draws <= hi)).astype(float)
    return UnconditionalProbability(
        estimate=float(indicator.mean()),
        standard_error=_batch_means_se(indicator),
        n_draws=result.n_draws,
    )
