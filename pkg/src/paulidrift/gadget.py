"""Flag-gadget stacks for a Clifford gate and their outcome tables.

A gadget layer couples one ancilla (prepared in |+>) to the data qubits
through controlled-L before the gate and controlled-R after it, with
R U L = U, so the ancilla's X-measurement reads out whether the gate's
Pauli error commutes with R.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .channel import CompatibleSet, compatible_set
from .pauli import CliffordGate, PauliOperator, derive_left


@dataclass(frozen=True)
class GadgetLayer:
    """One flag layer: right unitary R and the derived left unitary L."""

    r: PauliOperator
    l: PauliOperator

    @classmethod
    def for_gate(cls, gate: CliffordGate, r: PauliOperator) -> GadgetLayer:
        if r.is_identity:
            raise ValueError("right unitary must be non-identity")
        return cls(r, derive_left(gate, r))


@dataclass(frozen=True)
class GadgetStack:
    """Ordered flag-gadget layers attached to one Clifford gate."""

    gate: CliffordGate
    layers: tuple[GadgetLayer, ...]

    def __post_init__(self):
        if not 1 <= len(self.layers) <= 2 * self.gate.n_q:
            raise ValueError("stack needs between 1 and 2*n_q layers")

    @property
    def n_q(self) -> int:
        return self.gate.n_q

    @property
    def n_layers(self) -> int:
        return len(self.layers)

    def rights(self) -> list[PauliOperator]:
        return [layer.r for layer in self.layers]


def maximal_stack(gate: CliffordGate) -> GadgetStack:
    """Stack of 2*n_q layers with rights [X_0, Z_0, X_1, Z_1, ...].

    Every outcome pattern then isolates a single Pauli error index.
    """
    layers = []
    for s in range(gate.n_q):
        for letter in ("X", "Z"):
            layers.append(GadgetLayer.for_gate(gate, PauliOperator.single(gate.n_q, s, letter)))
    return GadgetStack(gate, tuple(layers))


def single_layer_stack(gate: CliffordGate, r: PauliOperator) -> GadgetStack:
    return GadgetStack(gate, (GadgetLayer.for_gate(gate, r),))


def random_single_layer(
    gate: CliffordGate, rng: np.random.Generator
) -> GadgetLayer:
    """Layer with R uniform over the 4^n_q - 1 non-identity Paulis."""
    index = int(rng.integers(1, 4**gate.n_q))
    return GadgetLayer.for_gate(gate, PauliOperator.from_index(index, gate.n_q))


def outcome_table(stack: GadgetStack) -> dict[tuple[int, ...], CompatibleSet]:
    """Map every +-1 outcome pattern to its compatible set of error indices."""
    rights = stack.rights()
    table = {}
    for pattern in product((1, -1), repeat=stack.n_layers):
        table[pattern] = compatible_set(rights, pattern)
    return table


def singled_index_table(stack: GadgetStack) -> dict[tuple[int, ...], int]:
    """Outcome pattern -> the unique compatible index; maximal stacks only."""
    table = outcome_table(stack)
    if any(len(g) != 1 for g in table.values()):
        raise ValueError("stack does not single out errors; use the full table")
    return {pattern: g.indices[0] for pattern, g in table.items()}
