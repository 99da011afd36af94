"""Monte Carlo of the repeated flag-gadget protocol with noisy gadgets.

Three views of the same circuit are provided and cross-checked:

* `run_shot` / `run_experiment` - Pauli-frame sampling. Every circuit
  element is Clifford and every error is Pauli, so one Pauli frame over
  the data qubits plus two flip bits per ancilla simulate the circuit
  exactly. Sign-stripped Pauli products reduce to integer XOR of the
  base-4 index form, which keeps the shot loop cheap.
* `frame_outcome_distribution` - exact outcome probabilities obtained by
  propagating the full distribution over (frame, ancilla-bit) states.
* `dense_outcome_distribution` - brute-force density-matrix evolution of
  the same circuit, the independent oracle for both of the above.

The per-shot circuit is fixed: ancilla preparation flips, controlled-L
gates from the outermost layer inward (each controlled multi-qubit Pauli
decomposed into controlled single-qubit Paulis in ascending data-qubit
order, each followed by its own two-qubit depolarizing channel), the
ideal gate, the gate's Pauli error, controlled-R gates from layer 1
outward (same decomposition and noise), measurement flips, readout.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .channel import PauliChannel
from .gadget import GadgetStack, single_layer_stack
from .pauli import CliffordGate, PauliOperator


class DegeneratePerturbationError(ValueError):
    """Perturbation clamped every rate to zero; no channel remains."""


@dataclass(frozen=True)
class NoiseModel:
    """Gadget noise strengths: ancilla-preparation Z flip, pre-measurement
    Z flip, and two-qubit depolarizing noise after each controlled gate."""

    p_prep: float = 0.0
    p_meas: float = 0.0
    p_cx: float = 0.0

    def __post_init__(self):
        for name in ("p_prep", "p_meas", "p_cx"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")

    @classmethod
    def uniform(cls, p: float) -> NoiseModel:
        return cls(p_prep=p, p_meas=p, p_cx=p)

    @property
    def is_noiseless(self) -> bool:
        return self.p_prep == 0.0 and self.p_meas == 0.0 and self.p_cx == 0.0


@dataclass(frozen=True)
class ShotRecord:
    """One repetition: per-layer outcomes, plus simulation-only ground truth."""

    step: int
    outcomes: tuple[int, ...]
    truth: int | None = None
    layers: tuple[str, ...] | None = None


@dataclass(frozen=True)
class FrameState:
    """Accumulated Pauli frame on the data qubits between repetitions."""

    pauli: PauliOperator

    @classmethod
    def identity(cls, n_q: int) -> FrameState:
        return cls(PauliOperator.identity(n_q))


@dataclass(frozen=True)
class RandomSingleLayers:
    """Shot source drawing a fresh uniform random single layer per step."""

    gate: CliffordGate


# single-qubit anticommutation of index digits (I,X,Y,Z = 0..3)
_ANTI = tuple(
    tuple(1 if a != 0 and b != 0 and a != b else 0 for b in range(4)) for a in range(4)
)
# X / Z components of an index digit
_XC = (0, 1, 1, 0)
_ZC = (0, 0, 1, 1)


def _decompose(layers_pauli: PauliOperator, n_q: int) -> list[tuple[int, int]]:
    """(shift, digit) per non-identity letter, ascending data qubit."""
    gates = []
    idx = layers_pauli.to_index()
    for s in range(n_q):
        shift = 2 * (n_q - 1 - s)
        digit = (idx >> shift) & 3
        if digit:
            gates.append((shift, digit))
    return gates


class _ShotEngine:
    """Precomputed integer tables for sampling one stack's shots."""

    def __init__(self, stack: GadgetStack, phys: PauliChannel, noise: NoiseModel):
        if stack.n_q != phys.n_q:
            raise ValueError("stack and channel act on different qubit counts")
        self.n_q = stack.n_q
        self.n_layers = stack.n_layers
        self.noise = noise
        self.cum_rates = np.cumsum(phys.rates)
        self.k = len(phys.rates)
        # execution order: L pass outermost layer first, R pass layer 1 first
        self.l_gates = [
            (q, shift, digit)
            for q in reversed(range(stack.n_layers))
            for shift, digit in _decompose(stack.layers[q].l, self.n_q)
        ]
        self.r_gates = [
            (q, shift, digit)
            for q in range(stack.n_layers)
            for shift, digit in _decompose(stack.layers[q].r, self.n_q)
        ]
        gate = stack.gate
        self.u_map = [
            gate.conjugate(PauliOperator.from_index(i, self.n_q)).to_index()
            for i in range(4**self.n_q)
        ]
        self.u_inv_map = [
            gate.conjugate(PauliOperator.from_index(i, self.n_q), inverse=True).to_index()
            for i in range(4**self.n_q)
        ]

    def _controlled_pass(self, gates, frame, x_bits, z_bits, rng) -> int:
        p_cx = self.noise.p_cx
        anti = _ANTI
        for a, shift, digit in gates:
            # data error anticommuting with the controlled Pauli flags Z on
            # the ancilla; an ancilla X error spreads the Pauli onto the data
            z_bits[a] ^= anti[(frame >> shift) & 3][digit]
            if x_bits[a]:
                frame ^= digit << shift
            if p_cx > 0.0 and rng.random() < p_cx:
                pair = int(rng.integers(1, 16))
                anc = pair >> 2
                x_bits[a] ^= _XC[anc]
                z_bits[a] ^= _ZC[anc]
                frame ^= (pair & 3) << shift
        return frame

    def run(self, frame: int, rng: np.random.Generator) -> tuple[tuple[int, ...], int, int]:
        """One shot; returns (outcomes, sampled error index, new frame)."""
        noise = self.noise
        x_bits = [0] * self.n_layers
        z_bits = [0] * self.n_layers
        if noise.p_prep > 0.0:
            for a in range(self.n_layers):
                if rng.random() < noise.p_prep:
                    z_bits[a] ^= 1
        frame = self._controlled_pass(self.l_gates, frame, x_bits, z_bits, rng)
        frame = self.u_map[frame]
        truth = int(np.searchsorted(self.cum_rates, rng.random(), side="right"))
        truth = min(truth, self.k - 1)
        frame ^= truth
        frame = self._controlled_pass(self.r_gates, frame, x_bits, z_bits, rng)
        if noise.p_meas > 0.0:
            for a in range(self.n_layers):
                if rng.random() < noise.p_meas:
                    z_bits[a] ^= 1
        outcomes = tuple(1 - 2 * z for z in z_bits)
        return outcomes, truth, frame


def run_shot(
    phys: PauliChannel,
    stack: GadgetStack,
    noise: NoiseModel,
    frame: FrameState,
    rng: np.random.Generator,
    step: int = 0,
) -> tuple[ShotRecord, FrameState]:
    """Sample one repetition; the returned frame feeds the next shot."""
    engine = _ShotEngine(stack, phys, noise)
    outcomes, truth, new_frame = engine.run(frame.pauli.to_index(), rng)
    record = ShotRecord(step=step, outcomes=outcomes, truth=truth)
    return record, FrameState(PauliOperator.from_index(new_frame, stack.n_q))


def run_experiment(
    phys: PauliChannel,
    stack_source: GadgetStack | RandomSingleLayers,
    noise: NoiseModel,
    n: int,
    seed: int,
    initial_frame: FrameState | None = None,
) -> list[ShotRecord]:
    """Sample n consecutive repetitions with a fresh seeded stream.

    Shots run sequentially: the data frame carries over between steps,
    ancillas are re-prepared each step. With a `RandomSingleLayers`
    source, the layer draw precedes the shot's other draws and the drawn
    right unitary is recorded on the ShotRecord.
    """
    if n < 0:
        raise ValueError("shot count must be nonnegative")
    rng = np.random.default_rng(seed)
    frame = (initial_frame or FrameState.identity(phys.n_q)).pauli.to_index()
    records: list[ShotRecord] = []
    if isinstance(stack_source, RandomSingleLayers):
        gate = stack_source.gate
        engines: dict[int, _ShotEngine] = {}
        for step in range(n):
            r_index = int(rng.integers(1, 4**gate.n_q))
            engine = engines.get(r_index)
            if engine is None:
                r = PauliOperator.from_index(r_index, gate.n_q)
                engine = _ShotEngine(single_layer_stack(gate, r), phys, noise)
                engines[r_index] = engine
            outcomes, truth, frame = engine.run(frame, rng)
            records.append(
                ShotRecord(step, outcomes, truth, (PauliOperator.from_index(r_index, gate.n_q).to_string(),))
            )
    else:
        engine = _ShotEngine(stack_source, phys, noise)
        for step in range(n):
            outcomes, truth, frame = engine.run(frame, rng)
            records.append(ShotRecord(step, outcomes, truth))
    return records


# -- exact outcome distribution of the frame simulation ----------------


def frame_outcome_distribution(
    phys: PauliChannel,
    stack: GadgetStack,
    noise: NoiseModel,
    initial_frame: FrameState | None = None,
) -> dict[tuple[int, ...], float]:
    """Exact per-pattern probabilities of the Pauli-frame circuit model.

    Propagates the full probability distribution over (frame, ancilla
    flip bits) states through the same element order the sampler uses.
    """
    engine = _ShotEngine(stack, phys, noise)
    n_q, l = stack.n_q, stack.n_layers
    n_frames = 4**n_q
    n_anc = 4**l
    n_states = n_frames * n_anc
    states = np.arange(n_states)
    frames = states // n_anc
    ancs = states % n_anc

    def xor_perm(frame_mask: int, anc_mask: int) -> np.ndarray:
        return (frames ^ frame_mask) * n_anc + (ancs ^ anc_mask)

    dist = np.zeros(n_states)
    start = (initial_frame or FrameState.identity(n_q)).pauli.to_index()
    dist[start * n_anc] = 1.0

    def apply_mixture(terms):
        nonlocal dist
        new = np.zeros_like(dist)
        for prob, perm in terms:
            if prob:
                new += prob * dist[perm]
        dist = new

    def z_flip_terms(a: int, p: float):
        return [(1.0 - p, states), (p, xor_perm(0, 1 << (2 * a + 1)))]

    def depolarizing_terms(a: int, shift: int, p: float):
        terms = [(1.0 - p, states)]
        for pair in range(1, 16):
            anc_digit = pair >> 2
            anc_mask = (_XC[anc_digit] << (2 * a)) | (_ZC[anc_digit] << (2 * a + 1))
            terms.append((p / 15.0, xor_perm((pair & 3) << shift, anc_mask)))
        return terms

    def controlled_perm(a: int, shift: int, digit: int) -> np.ndarray:
        frame_digits = (frames >> shift) & 3
        anti = np.array([_ANTI[d][digit] for d in range(4)])[frame_digits]
        x_bit = (ancs >> (2 * a)) & 1
        new_frames = frames ^ (x_bit * (digit << shift))
        new_ancs = ancs ^ (anti << (2 * a + 1))
        return new_frames * n_anc + new_ancs

    if noise.p_prep > 0.0:
        for a in range(l):
            apply_mixture(z_flip_terms(a, noise.p_prep))
    for a, shift, digit in engine.l_gates:
        dist = dist[controlled_perm(a, shift, digit)]
        if noise.p_cx > 0.0:
            apply_mixture(depolarizing_terms(a, shift, noise.p_cx))
    # ideal gate: gather through the inverse conjugation map
    u_inv = np.asarray(engine.u_inv_map)
    dist = dist.reshape(n_frames, n_anc)[u_inv, :].reshape(-1)
    apply_mixture([(float(p), xor_perm(i, 0)) for i, p in enumerate(phys.rates)])
    for a, shift, digit in engine.r_gates:
        dist = dist[controlled_perm(a, shift, digit)]
        if noise.p_cx > 0.0:
            apply_mixture(depolarizing_terms(a, shift, noise.p_cx))
    if noise.p_meas > 0.0:
        for a in range(l):
            apply_mixture(z_flip_terms(a, noise.p_meas))

    result: dict[tuple[int, ...], float] = {}
    probs_by_anc = dist.reshape(n_frames, n_anc).sum(axis=0)
    for anc in range(n_anc):
        pattern = tuple(1 - 2 * ((anc >> (2 * a + 1)) & 1) for a in range(l))
        result[pattern] = result.get(pattern, 0.0) + float(probs_by_anc[anc])
    return result


# -- dense density-matrix oracle ----------------------------------------

_I2 = np.eye(2, dtype=complex)
_PAULI_MATS = (
    _I2,
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
_KETS = {
    "0": np.array([1, 0], dtype=complex),
    "1": np.array([0, 1], dtype=complex),
    "+": np.array([1, 1], dtype=complex) / np.sqrt(2),
    "-": np.array([1, -1], dtype=complex) / np.sqrt(2),
}


def _embed(op: np.ndarray, n_total: int, targets: list[int]) -> np.ndarray:
    """Extend `op` (acting on `targets`, most-significant first) to n_total qubits."""
    others = [q for q in range(n_total) if q not in targets]
    full = np.kron(op, np.eye(2 ** len(others), dtype=complex))
    order = list(targets) + others
    axes_rows = [order.index(q) for q in range(n_total)]
    tensor = full.reshape((2,) * (2 * n_total))
    tensor = tensor.transpose(axes_rows + [a + n_total for a in axes_rows])
    return tensor.reshape(2**n_total, 2**n_total)


def _pauli_matrix(index: int, n_q: int) -> np.ndarray:
    mat = np.ones((1, 1), dtype=complex)
    for s in range(n_q):
        digit = (index >> (2 * (n_q - 1 - s))) & 3
        mat = np.kron(mat, _PAULI_MATS[digit])
    return mat


def _apply_channel(rho: np.ndarray, kraus: list[np.ndarray]) -> np.ndarray:
    return sum(k @ rho @ k.conj().T for k in kraus)


def dense_outcome_distribution(
    phys: PauliChannel,
    stack: GadgetStack,
    noise: NoiseModel,
    data_state: str | None = None,
    initial_frame: FrameState | None = None,
) -> dict[tuple[int, ...], float]:
    """Brute-force outcome distribution by density-matrix evolution.

    Data qubits come first, then one ancilla per layer; at most 7 qubits
    total. `data_state` is a string over 0/1/+/- (default all zeros).
    """
    n_q, l = stack.n_q, stack.n_layers
    n_tot = n_q + l
    if n_tot > 7:
        raise ValueError(f"dense oracle supports at most 7 qubits, got {n_tot}")
    if data_state is None:
        data_state = "0" * n_q
    if len(data_state) != n_q or any(c not in _KETS for c in data_state):
        raise ValueError("data_state must be a 0/1/+/- string of length n_q")

    ket = np.ones(1, dtype=complex)
    for c in data_state:
        ket = np.kron(ket, _KETS[c])
    for _ in range(l):
        ket = np.kron(ket, _KETS["+"])
    rho = np.outer(ket, ket.conj())
    if initial_frame is not None:
        frame_mat = _embed(
            _pauli_matrix(initial_frame.pauli.to_index(), n_q), n_tot, list(range(n_q))
        )
        rho = frame_mat @ rho @ frame_mat.conj().T

    def z_flip(qubit: int, p: float):
        nonlocal rho
        z = _embed(_PAULI_MATS[3], n_tot, [qubit])
        rho = (1.0 - p) * rho + p * (z @ rho @ z)

    def depolarize(pair: list[int], p: float):
        nonlocal rho
        kraus = [np.sqrt(1.0 - p) * np.eye(2**n_tot, dtype=complex)]
        for k in range(1, 16):
            two = np.kron(_PAULI_MATS[k >> 2], _PAULI_MATS[k & 3])
            kraus.append(np.sqrt(p / 15.0) * _embed(two, n_tot, pair))
        rho = _apply_channel(rho, kraus)

    def controlled(a: int, s: int, digit: int):
        nonlocal rho
        block = np.zeros((4, 4), dtype=complex)
        block[:2, :2] = _I2
        block[2:, 2:] = _PAULI_MATS[digit]
        u = _embed(block, n_tot, [n_q + a, s])
        rho = u @ rho @ u.conj().T

    engine = _ShotEngine(stack, phys, noise)
    # a negative-sign L (or R) means the physical controlled gate is the
    # letterwise product times Z on the ancilla: C(-P) = C(P) Z_anc
    for a_idx, layer in enumerate(stack.layers):
        if layer.l.sign * layer.r.sign < 0:
            z_mat = _embed(_PAULI_MATS[3], n_tot, [n_q + a_idx])
            rho = z_mat @ rho @ z_mat
    if noise.p_prep > 0.0:
        for a in range(l):
            z_flip(n_q + a, noise.p_prep)
    for a, shift, digit in engine.l_gates:
        s = n_q - 1 - shift // 2
        controlled(a, s, digit)
        if noise.p_cx > 0.0:
            depolarize([n_q + a, s], noise.p_cx)
    u_full = _embed(_gate_unitary(stack.gate), n_tot, list(range(n_q)))
    rho = u_full @ rho @ u_full.conj().T
    kraus = [
        np.sqrt(lam) * _embed(_pauli_matrix(i, n_q), n_tot, list(range(n_q)))
        for i, lam in enumerate(phys.rates)
        if lam > 0.0
    ]
    rho = _apply_channel(rho, kraus)
    for a, shift, digit in engine.r_gates:
        s = n_q - 1 - shift // 2
        controlled(a, s, digit)
        if noise.p_cx > 0.0:
            depolarize([n_q + a, s], noise.p_cx)
    if noise.p_meas > 0.0:
        for a in range(l):
            z_flip(n_q + a, noise.p_meas)

    plus = np.outer(_KETS["+"], _KETS["+"].conj())
    minus = np.outer(_KETS["-"], _KETS["-"].conj())
    result = {}
    for pattern in product((1, -1), repeat=l):
        proj = np.eye(2**n_tot, dtype=complex)
        for a, m in enumerate(pattern):
            proj = proj @ _embed(plus if m == 1 else minus, n_tot, [n_q + a])
        result[pattern] = float(np.real(np.trace(proj @ rho)))
    return result


def _pauli_dense(p: PauliOperator) -> np.ndarray:
    """Dense matrix of a Pauli including its phase."""
    lut = {
        (0, 0): _I2,
        (1, 0): _PAULI_MATS[1],
        (0, 1): _PAULI_MATS[3],
        (1, 1): _PAULI_MATS[1] @ _PAULI_MATS[3],
    }
    mat = np.ones((1, 1), dtype=complex)
    for xs, zs in zip(p.x, p.z):
        mat = np.kron(mat, lut[(xs, zs)])
    return (1j**p.phase) * mat


def _gate_unitary(gate: CliffordGate) -> np.ndarray:
    """Dense unitary of a Clifford gate, reconstructed from its tableau.

    U|0..0> is the state stabilized by the signed images of every Z_s;
    the remaining columns follow from U|j> = (prod of X_s images) U|0>.
    Global phase is arbitrary, which the oracle's conjugations ignore.
    """
    n_q = gate.n_q
    dim = 2**n_q
    proj = np.eye(dim, dtype=complex)
    for s in range(n_q):
        proj = proj @ (np.eye(dim, dtype=complex) + _pauli_dense(gate.z_img[s])) / 2.0
    column0 = None
    for k in range(dim):
        candidate = proj[:, k]
        norm = np.linalg.norm(candidate)
        if norm > 1e-6:
            column0 = candidate / norm
            break
    if column0 is None:
        raise ValueError("tableau does not stabilize any state; invalid gate")
    x_mats = [_pauli_dense(gate.x_img[s]) for s in range(n_q)]
    unitary = np.empty((dim, dim), dtype=complex)
    for j in range(dim):
        col = column0
        for s in range(n_q):
            if (j >> (n_q - 1 - s)) & 1:
                col = x_mats[s] @ col
        unitary[:, j] = col
    return unitary


def perturb_channel(
    prior_means: np.ndarray, delta: float, rng: np.random.Generator
) -> PauliChannel:
    """Drifted channel: each rate shifted by uniform(-delta, delta),
    clamped at zero, renormalized."""
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    means = np.asarray(prior_means, dtype=float)
    n_q = round(np.log(means.size) / np.log(4))
    if 4**n_q != means.size:
        raise ValueError("prior means length must be a power of 4")
    shifted = np.maximum(means + rng.uniform(-delta, delta, size=means.size), 0.0)
    if shifted.sum() <= 0.0:
        raise DegeneratePerturbationError("all rates clamped to zero")
    return PauliChannel.normalized(n_q, shifted)


def sample_prior_means(k: int, rng: np.random.Generator) -> np.ndarray:
    """Draw prior means from the flat Dirichlet (uniform on the simplex)."""
    if k < 2:
        raise ValueError("need at least two components")
    return rng.dirichlet(np.ones(k))
