"""Pauli channels, compatible sets, post-selection and outcome probabilities."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .pauli import DimensionError, PauliOperator, commutes

NORMALIZATION_TOL = 1e-12
LOADER_REPORT_TOL = 1e-9


class ContradictionError(ValueError):
    """Outcome pattern inconsistent with the layer set: empty compatible set."""


class ImpossibleOutcomeError(ValueError):
    """Post-selection on an outcome the channel assigns zero probability."""


def pauli_labels(n_q: int) -> list[str]:
    """All 4^n_q Pauli strings in index order (II, IX, ..., ZZ)."""
    return [PauliOperator.from_index(i, n_q).to_string() for i in range(4**n_q)]


@dataclass(frozen=True)
class PauliChannel:
    """Stochastic Pauli channel: probability `rates[i]` of error index i."""

    n_q: int
    rates: np.ndarray

    def __post_init__(self):
        rates = np.asarray(self.rates, dtype=float)
        object.__setattr__(self, "rates", rates)
        if rates.shape != (4**self.n_q,):
            raise DimensionError(
                f"expected {4**self.n_q} rates for {self.n_q} qubits, got {rates.shape}"
            )
        if np.any(rates < 0):
            raise ValueError("error rates must be nonnegative")
        if abs(rates.sum() - 1.0) > NORMALIZATION_TOL:
            raise ValueError(
                f"rates sum to {rates.sum():.17g}; construct via normalized() to rescale"
            )
        rates.setflags(write=False)

    @classmethod
    def normalized(cls, n_q: int, rates: Sequence[float]) -> PauliChannel:
        """Construct after rescaling `rates` to sum exactly to 1."""
        arr = np.asarray(rates, dtype=float)
        total = arr.sum()
        if total <= 0:
            raise ValueError("rates must have positive total weight")
        return cls(n_q, arr / total)

    @classmethod
    def identity(cls, n_q: int) -> PauliChannel:
        rates = np.zeros(4**n_q)
        rates[0] = 1.0
        return cls(n_q, rates)

    @classmethod
    def from_json_dict(cls, data: dict) -> PauliChannel:
        """Load `{"n_q": 2, "rates": {"II": 0.98, ...}}`; absent keys are 0."""
        n_q = int(data["n_q"])
        labels = pauli_labels(n_q)
        positions = {lab: i for i, lab in enumerate(labels)}
        rates = np.zeros(4**n_q)
        for key, value in data["rates"].items():
            if key not in positions:
                raise ValueError(f"unknown Pauli label {key!r} for {n_q} qubits")
            rates[positions[key]] = float(value)
        if np.any(rates < 0):
            raise ValueError("error rates must be nonnegative")
        total = rates.sum()
        if total <= 0:
            raise ValueError("rates must have positive total weight")
        if abs(total - 1.0) > LOADER_REPORT_TOL:
            warnings.warn(
                f"channel rates summed to {total:.12g}; renormalized", stacklevel=2
            )
        return cls(n_q, rates / total)

    def to_json_dict(self) -> dict:
        labels = pauli_labels(self.n_q)
        return {
            "n_q": self.n_q,
            "rates": {lab: float(r) for lab, r in zip(labels, self.rates) if r != 0.0},
        }


@dataclass(frozen=True)
class CompatibleSet:
    """Pauli indices consistent with a gadget stack's measurement outcomes."""

    n_q: int
    indices: tuple[int, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(sorted(set(self.indices))))
        if not self.indices:
            raise ContradictionError("compatible set is empty")
        if self.indices[0] < 0 or self.indices[-1] >= 4**self.n_q:
            raise ValueError("index out of range")

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices)

    def __len__(self) -> int:
        return len(self.indices)

    def __contains__(self, index: int) -> bool:
        return index in set(self.indices)

    @classmethod
    def full(cls, n_q: int) -> CompatibleSet:
        return cls(n_q, tuple(range(4**n_q)))


def compatible_set(
    layers: Sequence[PauliOperator], outcomes: Sequence[int]
) -> CompatibleSet:
    """Indices whose Pauli commutes (+1) or anticommutes (-1) with each
    layer's right unitary exactly as that layer's outcome dictates."""
    if len(layers) != len(outcomes) or not layers:
        raise ValueError("need equally many layers and outcomes, at least one")
    n_q = layers[0].n_q
    for r in layers:
        if r.n_q != n_q:
            raise DimensionError("layers act on different qubit counts")
        if r.is_identity:
            raise ValueError("layer right unitaries must be non-identity")
    for b in outcomes:
        if b not in (1, -1):
            raise ValueError(f"outcomes must be +-1, got {b}")
    hits = []
    for i in range(4**n_q):
        p = PauliOperator.from_index(i, n_q)
        if all(commutes(p, r) == b for r, b in zip(layers, outcomes)):
            hits.append(i)
    if not hits:
        raise ContradictionError(
            "no Pauli is consistent with the outcomes; layers are dependent"
        )
    return CompatibleSet(n_q, tuple(hits))


def outcome_probability(channel: PauliChannel, g: CompatibleSet) -> float:
    """Probability of the outcome pattern behind `g`: sum of rates over the set."""
    if channel.n_q != g.n_q:
        raise DimensionError("channel and set act on different qubit counts")
    return float(channel.rates[list(g.indices)].sum())


def post_selected_channel(
    channel: PauliChannel, g: CompatibleSet
) -> tuple[PauliChannel, float]:
    """Effective channel after post-selecting on `g`, with its normalization."""
    norm = outcome_probability(channel, g)
    if norm <= 0.0:
        raise ImpossibleOutcomeError("outcome has zero probability under this channel")
    rates = np.zeros_like(channel.rates)
    idx = list(g.indices)
    rates[idx] = channel.rates[idx] / norm
    return PauliChannel(channel.n_q, rates), norm


def sample_error(channel: PauliChannel, rng: np.random.Generator) -> int:
    """Draw one Pauli error index from the channel."""
    cumulative = np.cumsum(channel.rates)
    i = int(np.searchsorted(cumulative, rng.random(), side="right"))
    return min(i, len(channel.rates) - 1)


def layer_rank_gf2(layers: Sequence[PauliOperator]) -> int:
    """Rank over GF(2) of the layers' symplectic rows (x||z)."""
    rows = [list(r.x + r.z) for r in layers]
    rank = 0
    n_cols = len(rows[0])
    for col in range(n_cols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                rows[i] = [a ^ b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank
