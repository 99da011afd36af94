"""How much gadget noise can the adaptation tolerate?

The gadgets themselves are circuits: ancilla preparation can phase-flip,
each controlled gate drags a two-qubit depolarizing channel behind it,
and measurements misread. All of that corrupts the flag bits. Sweeping
the noise strength p shows a threshold around p ~ 0.02: below it the
estimate still converges toward the physical rates; above it the
updates converge to the wrong channel and the distance saturates above
the prior's.

Run:  python3 demos/04_noisy_gadgets.py
(then optionally render the CSVs from the CLI run with drift-plot-tvd)
"""

import numpy as np

from paulidrift.bayes import DirichletState, run_updates
from paulidrift.gadget import maximal_stack, singled_index_table
from paulidrift.metrics import tvd
from paulidrift.pauli import CliffordGate
from paulidrift.sim import NoiseModel, perturb_channel, run_experiment, sample_prior_means

rng = np.random.default_rng(3)
cnot = CliffordGate.cnot(2, 0, 1)
stack = maximal_stack(cnot)
pattern_to_index = singled_index_table(stack)

alpha0 = 2000.0
prior_means = sample_prior_means(16, rng)
phys = perturb_channel(prior_means, 0.02, rng)
prior = DirichletState.from_means(prior_means, alpha0)
prior_tvd = tvd(prior_means, phys.rates)

n = 20_000
checkpoints = [100, 1000, 5000, 20000]
print(f"TVD(prior, physical) = {prior_tvd:.4f}\n")
print(f"{'p':>5} " + " ".join(f"{f'n={c}':>10}" for c in checkpoints))
for p in (0.0, 0.01, 0.02, 0.05):
    records = run_experiment(phys, stack, NoiseModel.uniform(p), n, seed=17)
    sets = [[pattern_to_index[rec.outcomes]] for rec in records]
    trace = run_updates(prior, sets, "exact_maximal", record_every=100)
    by_step = dict(zip(trace.steps, trace.means_at))
    row = " ".join(f"{tvd(by_step[c], phys.rates):10.4f}" for c in checkpoints)
    print(f"{p:5.2f} {row}")

print("\nAt p = 0 the distance decays toward the alpha0/(alpha0+n) floor;")
print("at p = 0.05 it saturates above the prior distance: the flags are")
print("reporting a different channel than the gate actually has.")
print("\nThe same sweep via the CLI:  paulidrift simulate --preset fig9 --out out/")
