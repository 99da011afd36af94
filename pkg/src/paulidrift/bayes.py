"""Dirichlet-prior Bayesian adaptation of Pauli error rates.

Implements the exact conjugate rule for error-singling outcome patterns,
the exact Dirichlet-mixture posterior for coarser patterns, the large-
confidence (zeroth and first order in 1/alpha0) approximations, and the
measurement-error-corrected updates.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import gammaln

from .channel import CompatibleSet

MEAN_FLOOR_FACTOR = 1e-9
WEIGHT_PRUNE_TOL = 1e-15


class MixtureBlowupError(RuntimeError):
    """Exact mixture grew past the configured component cap."""


class StrongCouplingError(ValueError):
    """First-order expansion requested outside its n < alpha0 validity range."""


class ZeroProbabilityOutcomeError(ValueError):
    """Update conditioned on an outcome the current state assigns probability 0."""


def _as_indices(g) -> np.ndarray:
    if isinstance(g, CompatibleSet):
        return np.asarray(g.indices, dtype=int)
    return np.asarray(sorted(set(int(i) for i in g)), dtype=int)


@dataclass(frozen=True)
class DirichletState:
    """Dirichlet distribution over a probability vector, by hyperparameters."""

    alphas: np.ndarray

    def __post_init__(self):
        alphas = np.asarray(self.alphas, dtype=float)
        if alphas.ndim != 1 or alphas.size < 2:
            raise ValueError("need a 1-d vector of at least two hyperparameters")
        if np.any(alphas <= 0):
            raise ValueError("hyperparameters must be positive")
        alphas.setflags(write=False)
        object.__setattr__(self, "alphas", alphas)

    @property
    def k(self) -> int:
        return self.alphas.size

    @property
    def alpha0(self) -> float:
        return float(self.alphas.sum())

    @property
    def means(self) -> np.ndarray:
        return self.alphas / self.alpha0

    @property
    def variances(self) -> np.ndarray:
        m = self.means
        return m * (1.0 - m) / (self.alpha0 + 1.0)

    @property
    def covariance(self) -> np.ndarray:
        m = self.means
        return (np.diag(m) - np.outer(m, m)) / (self.alpha0 + 1.0)

    @classmethod
    def flat(cls, k: int) -> DirichletState:
        return cls(np.ones(k))

    @classmethod
    def from_means(cls, means: Sequence[float], alpha0: float) -> DirichletState:
        """State with the given means and total confidence alpha0.

        Zero mean components would give zero hyperparameters; they are
        floored at 1e-9 * alpha0 (with renormalization) and reported.
        """
        m = np.asarray(means, dtype=float)
        if np.any(m < 0) or abs(m.sum() - 1.0) > 1e-9:
            raise ValueError("means must form a probability vector")
        if alpha0 <= 0:
            raise ValueError("alpha0 must be positive")
        alphas = alpha0 * m
        floor = MEAN_FLOOR_FACTOR * alpha0
        if np.any(alphas < floor):
            warnings.warn(
                "floored zero-mean hyperparameters at 1e-9 * alpha0", stacklevel=2
            )
            alphas = np.maximum(alphas, floor)
            alphas = alphas * (alpha0 / alphas.sum())
        return cls(alphas)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.dirichlet(self.alphas, size=size)


def moments(state: DirichletState) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(means, variances, covariance matrix) in closed form."""
    return state.means, state.variances, state.covariance


def higher_moment(state: DirichletState, indices: Sequence[int]) -> float:
    """Expectation of the product lambda_{i1} * ... * lambda_{ik}.

    Evaluated as a ratio of generalized Beta functions in log space.
    """
    idx = np.asarray(list(indices), dtype=int)
    if idx.size < 1:
        raise ValueError("need at least one index")
    counts = np.bincount(idx, minlength=state.k).astype(float)
    log_ratio = (
        gammaln(state.alphas + counts).sum()
        - gammaln(state.alphas).sum()
        - gammaln(state.alpha0 + idx.size)
        + gammaln(state.alpha0)
    )
    return float(np.exp(log_ratio))


def update_maximal(state: DirichletState, singled: int) -> DirichletState:
    """Conjugate update for an outcome that singles out one error index."""
    alphas = state.alphas.copy()
    alphas[singled] += 1.0
    return DirichletState(alphas)


def closed_form_maximal(
    prior: DirichletState, singled_indices: Sequence[int]
) -> tuple[np.ndarray, np.ndarray]:
    """Means and variances after n error-singling shots, in one step."""
    n = len(singled_indices)
    counts = np.bincount(np.asarray(singled_indices, dtype=int), minlength=prior.k)
    a0 = prior.alpha0
    means = (a0 * prior.means + counts) / (a0 + n)
    variances = means * (1.0 - means) / (a0 + n + 1.0)
    return means, variances


def single_step_general(prior: DirichletState, g) -> np.ndarray:
    """Exact posterior means after one shot with compatible set `g`."""
    idx = _as_indices(g)
    m = prior.means
    prob = m[idx].sum()
    if prob <= 0.0:
        raise ZeroProbabilityOutcomeError("outcome has zero prior probability")
    a0 = prior.alpha0
    out = a0 * m / (a0 + 1.0)
    out[idx] += m[idx] / ((a0 + 1.0) * prob)
    return out


def covariance_form_step(means: np.ndarray, covariance: np.ndarray, g) -> np.ndarray:
    """One update written through the covariance with the observed set.

    Generic-prior form: means gain the covariance row-sums over `g`
    divided by the outcome probability. Cross-checks `single_step_general`
    when the covariance is the Dirichlet closed form.
    """
    idx = _as_indices(g)
    prob = means[idx].sum()
    if prob <= 0.0:
        raise ZeroProbabilityOutcomeError("outcome has zero prior probability")
    return means + covariance[:, idx].sum(axis=1) / prob


# -- exact mixture posterior ------------------------------------------


@dataclass(frozen=True)
class PosteriorMixture:
    """Convex combination of Dirichlet components D(alpha + m_c).

    Offsets are nonnegative integer count vectors over the K indices;
    components with identical offsets are always merged.
    """

    base: DirichletState
    offsets: np.ndarray  # (n_components, K) integer counts
    weights: np.ndarray  # (n_components,) positive, sums to 1

    def __post_init__(self):
        offsets = np.asarray(self.offsets, dtype=np.int64)
        weights = np.asarray(self.weights, dtype=float)
        if offsets.ndim != 2 or offsets.shape[1] != self.base.k:
            raise ValueError("offsets must be (n_components, K)")
        if weights.shape != (offsets.shape[0],):
            raise ValueError("one weight per component")
        offsets.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "offsets", offsets)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_prior(cls, prior: DirichletState) -> PosteriorMixture:
        return cls(prior, np.zeros((1, prior.k), dtype=np.int64), np.ones(1))

    @property
    def n_components(self) -> int:
        return self.offsets.shape[0]

    @property
    def n_updates(self) -> int:
        return int(self.offsets[0].sum()) if self.n_components else 0

    def components(self) -> list[tuple[float, np.ndarray]]:
        return [(float(w), m.copy()) for w, m in zip(self.weights, self.offsets)]


def mixture_update(
    mix: PosteriorMixture, g, cap: int = 10**6
) -> PosteriorMixture:
    """Split every component over the observed set and merge duplicates."""
    idx = _as_indices(g)
    if mix.n_components * idx.size > cap:
        raise MixtureBlowupError(
            f"{mix.n_components} components x |g|={idx.size} exceeds cap {cap}"
        )
    alphas = mix.base.alphas
    # child weight before normalization: w_c * <lambda_i>_{D(alpha+m_c)};
    # normalization is global (the outcome's marginal probability), which
    # reweights components by how well they predicted the outcome
    denom = mix.base.alpha0 + mix.offsets.sum(axis=1)
    parent_scores = (alphas[idx][None, :] + mix.offsets[:, idx]) / denom[:, None]
    child_w = (mix.weights[:, None] * parent_scores).ravel()
    total = child_w.sum()
    if total <= 0:
        raise ZeroProbabilityOutcomeError("outcome has zero probability")
    child_w /= total

    k = mix.base.k
    if k <= 16 and int(mix.offsets.sum(axis=1).max(initial=0)) < 15:
        # pack counts at 4 bits per index so merging is a 1-d unique
        shifts = (np.uint64(1) << (np.uint64(4) * np.arange(k, dtype=np.uint64)))
        packed = (mix.offsets.astype(np.uint64) * shifts[None, :]).sum(axis=1)
        children = (packed[:, None] + shifts[idx][None, :]).ravel()
        uniq_packed, inverse = np.unique(children, return_inverse=True)
        uniq = (
            (uniq_packed[:, None] >> (np.uint64(4) * np.arange(k, dtype=np.uint64)))
            & np.uint64(15)
        ).astype(np.int64)
    else:
        child_offsets = np.repeat(mix.offsets, idx.size, axis=0)
        rows = np.arange(child_offsets.shape[0])
        child_offsets[rows, np.tile(idx, mix.n_components)] += 1
        uniq, inverse = np.unique(child_offsets, axis=0, return_inverse=True)
    weights = np.bincount(inverse.ravel(), weights=child_w, minlength=uniq.shape[0])
    keep = weights > WEIGHT_PRUNE_TOL
    weights = weights[keep]
    return PosteriorMixture(mix.base, uniq[keep], weights / weights.sum())


def exact_means(mix: PosteriorMixture) -> np.ndarray:
    """Posterior means of the mixture: weighted component means."""
    denom = mix.base.alpha0 + mix.offsets.sum(axis=1)
    comp_means = (mix.base.alphas[None, :] + mix.offsets) / denom[:, None]
    return mix.weights @ comp_means


def exact_means_by_enumeration(prior: DirichletState, sets: Sequence) -> np.ndarray:
    """Brute-force posterior means by summing over every index tuple.

    Independent oracle for the mixture machinery; cost is prod |g_t|.
    """
    from itertools import product as iproduct

    index_lists = [_as_indices(g).tolist() for g in sets]
    numer = np.zeros(prior.k)
    denom = 0.0
    for tup in iproduct(*index_lists):
        base = higher_moment(prior, tup)
        denom += base
        for j in range(prior.k):
            numer[j] += higher_moment(prior, list(tup) + [j])
    return numer / denom


# -- large-alpha0 approximations ---------------------------------------


def approx_zeroth_order_step(
    running_means: np.ndarray,
    prior_means: np.ndarray,
    alpha0: float,
    step_index: int,
    g,
) -> np.ndarray:
    """Recursive zeroth-order update at step t (1-based)."""
    if step_index < 1:
        raise ValueError("step index is 1-based")
    idx = _as_indices(g)
    prob = prior_means[idx].sum()
    if prob <= 0.0:
        raise ZeroProbabilityOutcomeError("outcome has zero prior probability")
    t = step_index
    out = (alpha0 + t - 1.0) / (alpha0 + t) * running_means
    out[idx] += prior_means[idx] / ((alpha0 + t) * prob)
    return out


def approx_zeroth_order(prior: DirichletState, sets: Sequence) -> np.ndarray:
    """Batch zeroth-order means after all shots in `sets`."""
    n = len(sets)
    m0 = prior.means
    a0 = prior.alpha0
    out = a0 / (a0 + n) * m0
    for g in sets:
        idx = _as_indices(g)
        prob = m0[idx].sum()
        if prob <= 0.0:
            raise ZeroProbabilityOutcomeError("outcome has zero prior probability")
        out[idx] += m0[idx] / ((a0 + n) * prob)
    return out


def approx_first_order(prior: DirichletState, sets: Sequence) -> np.ndarray:
    """Means after n shots to first order in 1/alpha0.

    Valid only while n < alpha0; the correction couples pairs of shots
    through the overlap of their compatible sets.
    """
    n = len(sets)
    a0 = prior.alpha0
    if n >= a0:
        raise StrongCouplingError(f"expansion needs n < alpha0 (n={n}, alpha0={a0})")
    m0 = prior.means
    k = prior.k

    member = np.zeros((n, k), dtype=bool)
    for t, g in enumerate(sets):
        member[t, _as_indices(g)] = True
    set_prob = member @ m0
    if np.any(set_prob <= 0.0):
        raise ZeroProbabilityOutcomeError("some outcome has zero prior probability")

    # pairwise overlap masses M[t,q] = sum of prior means over g_t & g_q
    overlap = (member * m0[None, :]) @ member.T
    pair = np.tril(overlap / np.outer(set_prob, set_prob), k=-1)
    y2 = pair.sum()
    # total pair mass touching step t (as either partner)
    pair_with_t = pair.sum(axis=0) + pair.sum(axis=1)

    a = member.T / set_prob[None, :]  # a[j, t] = delta(j, g_t) / S_t
    x1_sum = m0 * a.sum(axis=1)
    same_j_pairs = a.sum(axis=1) ** 2 - (a**2).sum(axis=1)
    cross_pairs = a @ (y2 - pair_with_t)
    x2_sum = m0 * (same_j_pairs + cross_pairs)

    update = (x1_sum + x2_sum / a0) / (1.0 + y2 / a0)
    return (a0 * m0 + update) / (a0 + n)


# -- measurement-noise corrections --------------------------------------


def noisy_likelihood_maximal(n_q: int, singled: int, p: float) -> np.ndarray:
    """Per-index likelihood coefficients when each of the 2*n_q ancilla
    measurements independently misreads with probability p.

    The observed singled index i weights lambda_j by
    p^wt(i,j) * (1-p)^(2*n_q - wt(i,j)) with wt the binary Hamming distance.
    """
    from .pauli import PauliOperator, hamming_distance

    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    target = PauliOperator.from_index(singled, n_q)
    coeffs = np.empty(4**n_q)
    for j in range(4**n_q):
        wt = hamming_distance(target, PauliOperator.from_index(j, n_q))
        coeffs[j] = p**wt * (1.0 - p) ** (2 * n_q - wt)
    return coeffs


def noisy_likelihood_single(p: float) -> tuple[float, float]:
    """(a, b) with single-layer likelihood a + b * sum_{i in g} lambda_i."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    return p, 1.0 - 2.0 * p


def noisy_single_layer_step(prior: DirichletState, g, p: float) -> np.ndarray:
    """Single-layer update with measurement error probability p.

    Convex mix of the prior (weight grows with p, slowing the update)
    and the noiseless exact single-step posterior.
    """
    idx = _as_indices(g)
    a, b = noisy_likelihood_single(p)
    prob = prior.means[idx].sum()
    denom = a + b * prob
    if denom <= 0.0:
        raise ZeroProbabilityOutcomeError("noisy outcome has zero probability")
    w = a / denom
    return w * prior.means + (1.0 - w) * single_step_general(prior, g)


# -- sequential estimation over a shot stream --------------------------


@dataclass
class UpdateTrace:
    """Posterior-mean history of one sequential estimation run."""

    rule: str
    alpha0: float
    steps: list[int] = field(default_factory=list)
    means_at: list[np.ndarray] = field(default_factory=list)
    sets: list[tuple[int, ...]] = field(default_factory=list)

    @property
    def final_means(self) -> np.ndarray:
        return self.means_at[-1]

    @property
    def alpha0_eff(self) -> float:
        return self.alpha0 + self.steps[-1]

    @property
    def final_variances(self) -> np.ndarray:
        m = self.final_means
        return m * (1.0 - m) / (self.alpha0_eff + 1.0)


RULES = ("exact_maximal", "zeroth", "first_order", "mixture", "noisy_single")


def run_updates(
    prior: DirichletState,
    sets: Sequence,
    rule: str,
    noise_p: float = 0.0,
    record_every: int = 1,
    mixture_cap: int = 10**6,
) -> UpdateTrace:
    """Apply one update rule over a shot sequence, recording sampled means.

    `sets` holds one compatible set per shot. The trace always records
    step 0 (the prior) and the final step.
    """
    if rule not in RULES:
        raise ValueError(f"unknown rule {rule!r}; expected one of {RULES}")
    n = len(sets)
    trace = UpdateTrace(rule=rule, alpha0=prior.alpha0)
    trace.sets = [tuple(_as_indices(g).tolist()) for g in sets]
    trace.steps.append(0)
    trace.means_at.append(prior.means)

    record_points = {t for t in range(record_every, n + 1, record_every)}
    if n > 0:
        record_points.add(n)

    if rule == "exact_maximal":
        singled = []
        for g in sets:
            idx = _as_indices(g)
            if idx.size != 1:
                raise ValueError("exact_maximal needs error-singling outcomes")
            singled.append(int(idx[0]))
        counts = np.zeros(prior.k)
        a0 = prior.alpha0
        for t, j in enumerate(singled, start=1):
            counts[j] += 1.0
            if t in record_points:
                trace.steps.append(t)
                trace.means_at.append((a0 * prior.means + counts) / (a0 + t))
    elif rule == "zeroth":
        means = prior.means.copy()
        for t, g in enumerate(sets, start=1):
            means = approx_zeroth_order_step(means, prior.means, prior.alpha0, t, g)
            if t in record_points:
                trace.steps.append(t)
                trace.means_at.append(means.copy())
    elif rule == "first_order":
        for t in sorted(record_points):
            trace.steps.append(t)
            trace.means_at.append(approx_first_order(prior, sets[:t]))
    elif rule == "mixture":
        mix = PosteriorMixture.from_prior(prior)
        for t, g in enumerate(sets, start=1):
            mix = mixture_update(mix, g, cap=mixture_cap)
            if t in record_points:
                trace.steps.append(t)
                trace.means_at.append(exact_means(mix))
    elif rule == "noisy_single":
        state = prior
        for t, g in enumerate(sets, start=1):
            idx = _as_indices(g)
            a, b = noisy_likelihood_single(noise_p)
            w = a / (a + b * state.means[idx].sum())
            means = noisy_single_layer_step(state, g, noise_p)
            # confidence grows by the trusted fraction of the shot
            state = DirichletState.from_means(means, state.alpha0 + (1.0 - w))
            if t in record_points:
                trace.steps.append(t)
                trace.means_at.append(means.copy())
    return trace
