"""What a flag gadget measures.

A flag gadget couples an ancilla in |+> to the data qubits through a
controlled-L before a gate and a controlled-R after it, chosen so that
R U L = U. The ancilla's X-basis outcome then reports whether the
gate's Pauli error commutes (+1) or anticommutes (-1) with R, and a
stack of layers narrows the error down to a "compatible set".

Run:  python3 demos/01_gadget_tables.py
"""

from paulidrift.channel import pauli_labels
from paulidrift.gadget import maximal_stack, outcome_table, single_layer_stack
from paulidrift.pauli import CliffordGate, PauliOperator, derive_left

cnot = CliffordGate.cnot(2, 0, 1)
labels = pauli_labels(2)

# ---------------------------------------------------------------
# A single layer: R is any non-identity Pauli, L follows from the gate.
# Note the sign on some left unitaries: for R = XZ on a CNOT the exact
# companion is -YY, and dropping that sign would flip the flag outcome.
print("single-layer gadgets on CNOT (R -> L):")
for r_str in ("XI", "IX", "XZ", "YY", "ZY"):
    r = PauliOperator.from_string(r_str)
    print(f"  R = {r_str:>2}  ->  L = {derive_left(cnot, r).to_string()}")

# One layer splits the 16 two-qubit Paulis into two halves.
stack = single_layer_stack(cnot, PauliOperator.from_string("XZ"))
table = outcome_table(stack)
print("\ncompatible sets for R = XZ:")
for pattern, g in table.items():
    members = " ".join(labels[i] for i in g.indices)
    print(f"  m = {pattern[0]:+d}: {members}")

# ---------------------------------------------------------------
# The maximal stack uses all single-qubit X and Z right unitaries.
# Every outcome pattern then pins down exactly one error: 4 bits of
# measurement isolate one of the 16 Pauli error rates per repetition.
print("\nmaximal stack on CNOT (layers " +
      ", ".join(layer.r.to_string() for layer in maximal_stack(cnot).layers) + "):")
table = outcome_table(maximal_stack(cnot))
for pattern, g in sorted(table.items(), key=lambda kv: kv[1].indices[0]):
    bits = " ".join(f"{m:+d}" for m in pattern)
    print(f"  ({bits})  ->  {labels[g.indices[0]]}")
