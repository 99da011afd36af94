"""Binary-symplectic Pauli operators and Clifford conjugation.

An n-qubit Pauli is stored as ``i^phase * prod_s X_s^{x_s} Z_s^{z_s}``
with ``x_s, z_s`` bits and ``phase`` an exponent of ``i`` modulo 4.
A Hermitian Pauli therefore carries a well-defined sign of +1 or -1.
Qubit 0 is the leftmost letter of the string form and the most
significant base-4 digit of the index form (I=0, X=1, Y=2, Z=3).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

_LETTER_TO_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_BITS_TO_LETTER = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}
_BITS_TO_DIGIT = {(0, 0): 0, (1, 0): 1, (1, 1): 2, (0, 1): 3}
_DIGIT_TO_BITS = {0: (0, 0), 1: (1, 0), 2: (1, 1), 3: (0, 1)}


class DimensionError(ValueError):
    """Raised when operands act on different qubit counts."""


@dataclass(frozen=True)
class PauliOperator:
    """Immutable n-qubit Pauli in binary-symplectic form."""

    n_q: int
    x: tuple[int, ...]
    z: tuple[int, ...]
    phase: int = 0  # exponent of i, mod 4

    def __post_init__(self):
        if not 1 <= self.n_q <= 8:
            raise DimensionError(f"qubit count must be in 1..8, got {self.n_q}")
        if len(self.x) != self.n_q or len(self.z) != self.n_q:
            raise DimensionError("bit vectors must have exactly n_q entries")
        object.__setattr__(self, "phase", self.phase % 4)

    # -- constructors ------------------------------------------------

    @classmethod
    def identity(cls, n_q: int) -> PauliOperator:
        return cls(n_q, (0,) * n_q, (0,) * n_q, 0)

    @classmethod
    def single(cls, n_q: int, qubit: int, letter: str) -> PauliOperator:
        """Single-qubit letter ('X', 'Y' or 'Z') embedded at `qubit` (0-based)."""
        return cls.from_string("I" * qubit + letter + "I" * (n_q - qubit - 1))

    @classmethod
    def from_string(cls, text: str) -> PauliOperator:
        """Parse e.g. "XZ" or "-YY"; leftmost letter is qubit 0."""
        s = text.strip()
        negative = s.startswith("-")
        if negative or s.startswith("+"):
            s = s[1:]
        try:
            bits = [_LETTER_TO_BITS[c] for c in s]
        except KeyError as exc:
            raise ValueError(f"invalid Pauli string {text!r}") from exc
        if not bits:
            raise ValueError("empty Pauli string")
        x = tuple(b[0] for b in bits)
        z = tuple(b[1] for b in bits)
        n_y = sum(a * b for a, b in zip(x, z))
        return cls(len(bits), x, z, (n_y + (2 if negative else 0)) % 4)

    @classmethod
    def from_index(cls, index: int, n_q: int) -> PauliOperator:
        """Inverse of `to_index`; always returns the +1-sign representative."""
        if not 0 <= index < 4**n_q:
            raise ValueError(f"index {index} out of range for {n_q} qubits")
        digits = []
        for s in reversed(range(n_q)):
            digits.append((index >> (2 * s)) & 3)
        x = tuple(_DIGIT_TO_BITS[d][0] for d in digits)
        z = tuple(_DIGIT_TO_BITS[d][1] for d in digits)
        n_y = sum(a * b for a, b in zip(x, z))
        return cls(n_q, x, z, n_y % 4)

    # -- conversions -------------------------------------------------

    def to_index(self) -> int:
        """Sign-stripped base-4 index; qubit 0 is the most significant digit."""
        idx = 0
        for xs, zs in zip(self.x, self.z):
            idx = (idx << 2) | _BITS_TO_DIGIT[(xs, zs)]
        return idx

    def to_string(self) -> str:
        letters = "".join(_BITS_TO_LETTER[(xs, zs)] for xs, zs in zip(self.x, self.z))
        return ("-" if self.sign < 0 else "") + letters

    @property
    def sign(self) -> int:
        """+1 or -1; raises if the operator is not Hermitian (phase +-i)."""
        k = (self.phase - sum(a * b for a, b in zip(self.x, self.z))) % 4
        if k == 0:
            return 1
        if k == 2:
            return -1
        raise ValueError("operator has imaginary global phase")

    @property
    def is_identity(self) -> bool:
        return not any(self.x) and not any(self.z)

    def strip_phase(self) -> PauliOperator:
        n_y = sum(a * b for a, b in zip(self.x, self.z))
        return PauliOperator(self.n_q, self.x, self.z, n_y % 4)

    # -- algebra -----------------------------------------------------

    def __mul__(self, other: PauliOperator) -> PauliOperator:
        if self.n_q != other.n_q:
            raise DimensionError("cannot compose Paulis on different qubit counts")
        # reorder Z^z1 past X^x2 per qubit: each swap contributes (-1)
        swaps = sum(a * b for a, b in zip(self.z, other.x))
        return PauliOperator(
            self.n_q,
            tuple(a ^ b for a, b in zip(self.x, other.x)),
            tuple(a ^ b for a, b in zip(self.z, other.z)),
            (self.phase + other.phase + 2 * swaps) % 4,
        )

    def adjoint(self) -> PauliOperator:
        swaps = sum(a * b for a, b in zip(self.x, self.z))
        return PauliOperator(self.n_q, self.x, self.z, (-self.phase + 2 * swaps) % 4)


def commutes(p: PauliOperator, q: PauliOperator) -> int:
    """+1 if p and q commute, -1 if they anticommute."""
    if p.n_q != q.n_q:
        raise DimensionError("commutation requires equal qubit counts")
    form = sum(a * b for a, b in zip(p.x, q.z)) + sum(a * b for a, b in zip(p.z, q.x))
    return 1 if form % 2 == 0 else -1


def hamming_distance(p: PauliOperator, q: PauliOperator) -> int:
    """Number of differing entries of the two binary representations (x||z)."""
    if p.n_q != q.n_q:
        raise DimensionError("Hamming distance requires equal qubit counts")
    return sum(a != b for a, b in zip(p.x + p.z, q.x + q.z))


def _conjugate_by_images(
    p: PauliOperator, x_img: tuple[PauliOperator, ...], z_img: tuple[PauliOperator, ...]
) -> PauliOperator:
    # U (i^k prod X^x Z^z) U† = i^k prod (UXU†)^x (UZU†)^z, factors in qubit order
    factors = []
    for s in range(p.n_q):
        if p.x[s]:
            factors.append(x_img[s])
        if p.z[s]:
            factors.append(z_img[s])
    if not factors:
        return PauliOperator.identity(p.n_q) if p.phase == 0 else PauliOperator(
            p.n_q, (0,) * p.n_q, (0,) * p.n_q, p.phase
        )
    out = reduce(lambda a, b: a * b, factors)
    return PauliOperator(out.n_q, out.x, out.z, (out.phase + p.phase) % 4)


@dataclass(frozen=True)
class CliffordGate:
    """Clifford unitary stored as a tableau of generator images.

    `x_img[s]` / `z_img[s]` are U X_s U† / U Z_s U†; the `*_inv` fields
    hold the images under U† . U so both conjugation directions are exact.
    """

    n_q: int
    x_img: tuple[PauliOperator, ...]
    z_img: tuple[PauliOperator, ...]
    x_inv: tuple[PauliOperator, ...]
    z_inv: tuple[PauliOperator, ...]

    # -- constructors ------------------------------------------------

    @classmethod
    def identity(cls, n_q: int) -> CliffordGate:
        xs = tuple(PauliOperator.single(n_q, s, "X") for s in range(n_q))
        zs = tuple(PauliOperator.single(n_q, s, "Z") for s in range(n_q))
        return cls(n_q, xs, zs, xs, zs)

    @classmethod
    def _from_images(cls, n_q, x_img, z_img, x_inv, z_inv) -> CliffordGate:
        gate = cls(n_q, tuple(x_img), tuple(z_img), tuple(x_inv), tuple(z_inv))
        gate.validate()
        return gate

    @classmethod
    def hadamard(cls, n_q: int, q: int) -> CliffordGate:
        g = cls.identity(n_q)
        x_img = list(g.x_img)
        z_img = list(g.z_img)
        x_img[q], z_img[q] = g.z_img[q], g.x_img[q]
        return cls._from_images(n_q, x_img, z_img, x_img, z_img)

    @classmethod
    def s_gate(cls, n_q: int, q: int) -> CliffordGate:
        g = cls.identity(n_q)
        x_img = list(g.x_img)
        x_img[q] = PauliOperator.single(n_q, q, "Y")  # S X S† = Y
        x_inv = list(g.x_img)
        minus_y = PauliOperator.single(n_q, q, "Y")
        x_inv[q] = PauliOperator(n_q, minus_y.x, minus_y.z, (minus_y.phase + 2) % 4)
        return cls._from_images(n_q, x_img, g.z_img, x_inv, g.z_img)

    @classmethod
    def x_gate(cls, n_q: int, q: int) -> CliffordGate:
        g = cls.identity(n_q)
        z_img = list(g.z_img)
        flipped = g.z_img[q]
        z_img[q] = PauliOperator(n_q, flipped.x, flipped.z, (flipped.phase + 2) % 4)
        return cls._from_images(n_q, g.x_img, z_img, g.x_img, z_img)

    @classmethod
    def z_gate(cls, n_q: int, q: int) -> CliffordGate:
        g = cls.identity(n_q)
        x_img = list(g.x_img)
        flipped = g.x_img[q]
        x_img[q] = PauliOperator(n_q, flipped.x, flipped.z, (flipped.phase + 2) % 4)
        return cls._from_images(n_q, x_img, g.z_img, x_img, g.z_img)

    @classmethod
    def cnot(cls, n_q: int, control: int, target: int) -> CliffordGate:
        if control == target:
            raise ValueError("control and target must differ")
        g = cls.identity(n_q)
        x_img = list(g.x_img)
        z_img = list(g.z_img)
        x_img[control] = g.x_img[control] * g.x_img[target]
        z_img[target] = g.z_img[control] * g.z_img[target]
        # CNOT is self-inverse
        return cls._from_images(n_q, x_img, z_img, x_img, z_img)

    @classmethod
    def from_circuit(cls, text: str, n_q: int) -> CliffordGate:
        """Compose a gate from a circuit string, e.g. "h 0; cx 0 1; s 1".

        Gates run left to right. Known names: i/id, h, s, x, z, cx/cnot.
        """
        gate = cls.identity(n_q)
        for raw in text.split(";"):
            token = raw.strip().lower()
            if not token:
                continue
            parts = token.split()
            name, args = parts[0], [int(a) for a in parts[1:]]
            if name in ("i", "id"):
                continue
            if name == "h":
                step = cls.hadamard(n_q, *args)
            elif name == "s":
                step = cls.s_gate(n_q, *args)
            elif name == "x":
                step = cls.x_gate(n_q, *args)
            elif name == "z":
                step = cls.z_gate(n_q, *args)
            elif name in ("cx", "cnot"):
                step = cls.cnot(n_q, *args)
            else:
                raise ValueError(f"unknown gate {name!r} in circuit string")
            gate = gate.then(step)
        return gate

    # -- operations --------------------------------------------------

    def then(self, other: CliffordGate) -> CliffordGate:
        """Gate equal to applying `self` first, then `other`."""
        if self.n_q != other.n_q:
            raise DimensionError("cannot compose gates on different qubit counts")
        x_img = tuple(other.conjugate(p) for p in self.x_img)
        z_img = tuple(other.conjugate(p) for p in self.z_img)
        x_inv = tuple(self.conjugate(p, inverse=True) for p in other.x_inv)
        z_inv = tuple(self.conjugate(p, inverse=True) for p in other.z_inv)
        return CliffordGate(self.n_q, x_img, z_img, x_inv, z_inv)

    def conjugate(self, p: PauliOperator, inverse: bool = False) -> PauliOperator:
        """U p U† (or U† p U when `inverse`), with exact sign."""
        if p.n_q != self.n_q:
            raise DimensionError("operand acts on a different qubit count")
        if inverse:
            return _conjugate_by_images(p, self.x_inv, self.z_inv)
        return _conjugate_by_images(p, self.x_img, self.z_img)

    def validate(self) -> None:
        """Check the symplectic condition and that inverse images invert."""
        for s in range(self.n_q):
            if commutes(self.x_img[s], self.z_img[s]) != -1:
                raise ValueError("tableau breaks X/Z anticommutation")
            for t in range(self.n_q):
                if t != s and commutes(self.x_img[s], self.z_img[t]) != 1:
                    raise ValueError("tableau breaks cross-qubit commutation")
                if t != s and commutes(self.x_img[s], self.x_img[t]) != 1:
                    raise ValueError("tableau breaks X/X commutation")
                if t != s and commutes(self.z_img[s], self.z_img[t]) != 1:
                    raise ValueError("tableau breaks Z/Z commutation")
        for s in range(self.n_q):
            x_rt = self.conjugate(self.x_inv[s])
            z_rt = self.conjugate(self.z_inv[s])
            if x_rt != PauliOperator.single(self.n_q, s, "X"):
                raise ValueError("inverse images do not invert X generator")
            if z_rt != PauliOperator.single(self.n_q, s, "Z"):
                raise ValueError("inverse images do not invert Z generator")


def derive_left(gate: CliffordGate, r: PauliOperator) -> PauliOperator:
    """The left unitary L = U† R† U that makes R U L act as U."""
    return gate.conjugate(r.adjoint(), inverse=True)
