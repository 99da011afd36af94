"""Acceptance suite: one test per criterion, each printing a status line.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines live.
"""

import json
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from paulidrift.bayes import (
    DirichletState,
    PosteriorMixture,
    approx_first_order,
    approx_zeroth_order,
    closed_form_maximal,
    exact_means,
    higher_moment,
    mixture_update,
    noisy_likelihood_maximal,
    noisy_likelihood_single,
    noisy_single_layer_step,
    run_updates,
    single_step_general,
    update_maximal,
)
from paulidrift.channel import PauliChannel
from paulidrift.gadget import (
    GadgetLayer,
    GadgetStack,
    maximal_stack,
    single_layer_stack,
    singled_index_table,
)
from paulidrift.metrics import tvd
from paulidrift.pauli import CliffordGate, PauliOperator
from paulidrift.sim import (
    FrameState,
    NoiseModel,
    dense_outcome_distribution,
    frame_outcome_distribution,
    perturb_channel,
    run_experiment,
    sample_prior_means,
)

FIXTURES = Path(__file__).parent / "fixtures"
CNOT = CliffordGate.cnot(2, 0, 1)


def _cli(*argv):
    return subprocess.run(
        [sys.executable, "-m", "paulidrift", *argv],
        capture_output=True, text=True,
    )


class _Budget:
    def __init__(self, seconds):
        self.limit = seconds
        self.start = time.monotonic()

    def check(self):
        elapsed = time.monotonic() - self.start
        assert elapsed < self.limit, f"runtime {elapsed:.1f}s exceeds {self.limit}s"
        return elapsed


def _passed(number, message, budget=None):
    suffix = f" [{budget.check():.1f}s]" if budget else ""
    print(f"[acceptance] criterion {number}: PASS - {message}{suffix}")


def test_criterion_1_table_fidelity(tmp_path):
    budget = _Budget(1.0)
    cases = [
        ("h", "maximal", "table_single_qubit_maximal.csv", 4),
        ("cnot", "maximal", "table_cnot_maximal.csv", 16),
        ("cnot", "single", "table_cnot_single_layers.csv", 15),
    ]
    from paulidrift.cli import tables_text

    for gate, mode, fixture, rows in cases:
        text = tables_text(gate, mode)
        assert text.encode() == (FIXTURES / fixture).read_bytes()
        assert len(text.strip().splitlines()) == rows + 1
    _passed(1, "outcome tables byte-equal to transcribed fixtures", budget)


def test_criterion_2_dirichlet_algebra():
    budget = _Budget(30.0)
    n = 10**6
    rng = np.random.default_rng(2024)
    for k in (4, 16):
        for alpha0 in (500.0, 2000.0):
            state = DirichletState.from_means(rng.dirichlet(np.ones(k)), alpha0)
            # closed forms
            np.testing.assert_allclose(state.means, state.alphas / alpha0, atol=1e-15)
            np.testing.assert_allclose(
                state.variances,
                state.means * (1 - state.means) / (alpha0 + 1), atol=1e-18,
            )
            m = state.means
            np.testing.assert_allclose(
                state.covariance, (np.diag(m) - np.outer(m, m)) / (alpha0 + 1),
                atol=1e-18,
            )
            # Monte Carlo oracle at 5 sigma
            samples = state.sample(rng, n)
            se_mean = samples.std(axis=0, ddof=1) / np.sqrt(n)
            assert np.all(np.abs(samples.mean(axis=0) - m) < 5 * se_mean)
            sq = samples**2
            se_sq = sq.std(axis=0, ddof=1) / np.sqrt(n)
            second = np.array([higher_moment(state, [j, j]) for j in range(k)])
            assert np.all(np.abs(sq.mean(axis=0) - second) < 5 * se_sq)
            pairs = [(i, j) for i in range(k) for j in range(i + 1, k)][:12]
            for i, j in pairs:
                prod = samples[:, i] * samples[:, j]
                se = prod.std(ddof=1) / np.sqrt(n)
                assert abs(prod.mean() - higher_moment(state, [i, j])) < 5 * se
            del samples, sq
    _passed(2, "moments and higher moments match closed forms and 1e6-draw MC", budget)


def test_criterion_3_conjugate_update_identity():
    budget = _Budget(5.0)
    rng = np.random.default_rng(33)
    prior_means = sample_prior_means(16, rng)
    prior = DirichletState.from_means(prior_means, 2000.0)
    phys = perturb_channel(prior_means, 0.02, rng)
    records = run_experiment(phys, maximal_stack(CNOT), NoiseModel(), 10**4, seed=12)
    table = singled_index_table(maximal_stack(CNOT))
    singled = [table[rec.outcomes] for rec in records]
    state = prior
    for j in singled:
        state = update_maximal(state, j)
    means, variances = closed_form_maximal(prior, singled)
    assert np.max(np.abs(state.means - means)) <= 1e-14
    np.testing.assert_allclose(
        variances, means * (1 - means) / (2000.0 + len(singled) + 1.0), atol=1e-18
    )
    np.testing.assert_allclose(state.variances, variances, atol=1e-16)
    _passed(3, "sequential conjugate updates equal the n-step closed form", budget)


def test_criterion_4_maximal_noiseless_adaptation(tmp_path):
    budget = _Budget(60.0)
    n = 10**4
    alpha0 = 2000.0
    stack = maximal_stack(CNOT)
    table = singled_index_table(stack)
    improved = 0
    for seed in range(20):
        rng = np.random.default_rng(4000 + seed)
        prior_means = sample_prior_means(16, rng)
        phys = perturb_channel(prior_means, 0.02, rng)
        records = run_experiment(phys, stack, NoiseModel(), n, seed=5000 + seed)
        singled = [table[rec.outcomes] for rec in records]
        prior = DirichletState.from_means(prior_means, alpha0)
        means, _ = closed_form_maximal(prior, singled)
        expected = (alpha0 * prior_means + n * phys.rates) / (alpha0 + n)
        bound = 5.0 * np.sqrt(n * phys.rates * (1 - phys.rates)) / (alpha0 + n)
        assert np.all(np.abs(means - expected) <= bound)
        if tvd(means, phys.rates) < tvd(prior_means, phys.rates):
            improved += 1
    assert improved >= 19
    # the same protocol through the CLI leaves the histogram for the plots
    result = _cli("simulate", "--preset", "fig4", "--seed", "0",
                  "--out", str(tmp_path / "fig4"))
    assert result.returncode == 0
    header = (tmp_path / "fig4" / "histogram.csv").read_text().splitlines()[0]
    assert header == "label,prior,updated,physical,stddev"
    _passed(4, f"all means within 5 sigma of drift target; TVD improved {improved}/20", budget)


def test_criterion_5_simulator_correctness():
    budget = _Budget(60.0)
    rng = np.random.default_rng(55)
    stacks = {
        1: single_layer_stack(CNOT, PauliOperator.from_string("XZ")),
        2: GadgetStack(CNOT, (
            GadgetLayer.for_gate(CNOT, PauliOperator.from_string("YY")),
            GadgetLayer.for_gate(CNOT, PauliOperator.from_string("ZI")),
        )),
        4: maximal_stack(CNOT),
    }
    for trial in range(3):
        phys = PauliChannel(2, rng.dirichlet(np.ones(16)))
        for stack in stacks.values():
            for p in (0.0, 0.01, 0.05):
                noise = NoiseModel.uniform(p)
                frame = frame_outcome_distribution(phys, stack, noise)
                dense = dense_outcome_distribution(phys, stack, noise)
                for pattern, prob in frame.items():
                    assert abs(prob - dense[pattern]) <= 1e-10
    # transparent gadget: sampled outcome distribution is unaffected by a
    # pre-existing data frame at p=0
    phys = PauliChannel(2, rng.dirichlet(np.ones(16)))
    stack = stacks[4]
    exact = frame_outcome_distribution(phys, stack, NoiseModel())
    n = 10**5
    records = run_experiment(
        phys, stack, NoiseModel(), n, seed=77,
        initial_frame=FrameState(PauliOperator.from_string("YX")),
    )
    counts = {}
    for rec in records:
        counts[rec.outcomes] = counts.get(rec.outcomes, 0) + 1
    for pattern, prob in exact.items():
        sigma = max(np.sqrt(n * prob * (1 - prob)), 1.0)
        assert abs(counts.get(pattern, 0) - n * prob) <= 5 * sigma
    _passed(5, "frame simulator equals dense oracle to 1e-10; gadget transparent", budget)


def test_criterion_6_approximate_rule_fidelity():
    budget = _Budget(30.0)
    for seed in range(20):
        rng = np.random.default_rng(6000 + seed)
        prior_means = rng.dirichlet(np.ones(16))
        sets = [sorted(rng.choice(16, size=8, replace=False).tolist()) for _ in range(8)]
        errors = []
        for alpha0 in (500.0, 1000.0, 2000.0):
            prior = DirichletState.from_means(prior_means, alpha0)
            mix = PosteriorMixture.from_prior(prior)
            for g in sets:
                mix = mixture_update(mix, g, cap=10**7)
            approx = approx_first_order(prior, sets)
            assert abs(approx.sum() - 1.0) <= 1e-12
            zeroth = approx_zeroth_order(prior, sets)
            assert abs(zeroth.sum() - 1.0) <= 1e-12
            errors.append(np.max(np.abs(approx - exact_means(mix))))
        assert errors[0] / errors[1] >= 3.0, f"seed {seed}: {errors}"
        assert errors[1] / errors[2] >= 3.0, f"seed {seed}: {errors}"
        # singleton sets collapse the zeroth-order rule onto the exact one
        singled = rng.integers(0, 16, size=8).tolist()
        prior = DirichletState.from_means(prior_means, 500.0)
        exact, _ = closed_form_maximal(prior, singled)
        got = approx_zeroth_order(prior, [[j] for j in singled])
        assert np.max(np.abs(got - exact)) <= 1e-14
    _passed(6, "first-order error shrinks >=3x per alpha0 doubling on 20 seeds", budget)


def test_criterion_7_noisy_gadget_threshold():
    budget = _Budget(300.0)
    n = 2 * 10**4
    alpha0 = 2000.0
    stack = maximal_stack(CNOT)
    table = singled_index_table(stack)
    outcomes = {0.0: 0, 0.05: 0}
    for seed in range(20):
        rng = np.random.default_rng(7000 + seed)
        prior_means = sample_prior_means(16, rng)
        phys = perturb_channel(prior_means, 0.02, rng)
        prior_tvd = tvd(prior_means, phys.rates)
        prior = DirichletState.from_means(prior_means, alpha0)
        for p in (0.0, 0.05):
            records = run_experiment(
                phys, stack, NoiseModel.uniform(p), n, seed=8000 + seed
            )
            singled = [table[rec.outcomes] for rec in records]
            means, _ = closed_form_maximal(prior, singled)
            final_tvd = tvd(means, phys.rates)
            if p == 0.0 and final_tvd < prior_tvd:
                outcomes[p] += 1
            if p == 0.05 and final_tvd >= prior_tvd:
                outcomes[p] += 1
    assert outcomes[0.0] >= 19, f"p=0 improved only {outcomes[0.0]}/20"
    assert outcomes[0.05] >= 15, f"p=0.05 degraded only {outcomes[0.05]}/20"
    _passed(
        7,
        f"TVD improved {outcomes[0.0]}/20 at p=0; "
        f"did not improve {outcomes[0.05]}/20 at p=0.05",
        budget,
    )


def test_criterion_8_noisy_measurement_updates():
    budget = _Budget(1.0)
    from math import comb

    rng = np.random.default_rng(88)
    prior = DirichletState.from_means(rng.dirichlet(np.ones(16)), 300.0)
    g = sorted(rng.choice(16, size=8, replace=False).tolist())
    assert np.max(np.abs(
        noisy_single_layer_step(prior, g, 0.0) - single_step_general(prior, g)
    )) <= 1e-14
    assert np.max(np.abs(
        noisy_single_layer_step(prior, g, 0.5) - prior.means
    )) <= 1e-14
    p = 0.04
    for singled in (0, 7, 13):
        coeffs = noisy_likelihood_maximal(2, singled, p)
        by_shell = {}
        from paulidrift.pauli import hamming_distance

        target = PauliOperator.from_index(singled, 2)
        for j in range(16):
            wt = hamming_distance(target, PauliOperator.from_index(j, 2))
            by_shell.setdefault(wt, []).append(coeffs[j])
        for wt, values in by_shell.items():
            assert len(values) == comb(4, wt)
            np.testing.assert_allclose(
                values, p**wt * (1 - p) ** (4 - wt), atol=1e-15
            )
    assert noisy_likelihood_single(0.0) == (0.0, 1.0)
    _passed(8, "noise-corrected likelihood limits and Hamming shells verified", budget)


def test_criterion_9_determinism_and_ingestion(tmp_path):
    budget = _Budget(10.0)
    sim_dir = tmp_path / "sim"
    result = _cli("simulate", "--preset", "fig4", "--seed", "21", "--out", str(sim_dir))
    assert result.returncode == 0, result.stderr
    replay_dir = tmp_path / "replay"
    result = _cli(
        "update", "--prior", str(sim_dir / "prior.json"),
        "--shots", str(sim_dir / "shots.jsonl"),
        "--gate", "cnot", "--stack", "maximal", "--rule", "exact_maximal",
        "--out", str(replay_dir),
    )
    assert result.returncode == 0, result.stderr
    assert (replay_dir / "estimates.json").read_bytes() == \
        (sim_dir / "estimates.json").read_bytes()
    # shot-order invariance of the exact mixture means
    rng = np.random.default_rng(99)
    prior = DirichletState.from_means(rng.dirichlet(np.ones(16)), 400.0)
    sets = [sorted(rng.choice(16, size=8, replace=False).tolist()) for _ in range(6)]
    reference = None
    for order in (sets, sets[::-1], [sets[i] for i in rng.permutation(6)]):
        mix = PosteriorMixture.from_prior(prior)
        for g in order:
            mix = mixture_update(mix, g, cap=10**7)
        means = exact_means(mix)
        if reference is None:
            reference = means
        else:
            assert np.max(np.abs(means - reference)) <= 1e-12
    _passed(9, "CLI replay bit-for-bit; exact means invariant to shot order", budget)
