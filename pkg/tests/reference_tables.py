"""Hand-transcribed reference tables for flag gadgets on known gates.

These encode, independently of the library, which Pauli error each
outcome pattern of a maximal stack singles out and which left unitary
and compatible sets belong to every single-layer gadget on a CNOT.
Indices are 1-based in LABELS_1BASED order; helper functions convert
them into the CSV layout the `tables` subcommand emits.
"""

LABELS_1BASED = [
    "II", "IX", "IY", "IZ", "XI", "XX", "XY", "XZ",
    "YI", "YX", "YY", "YZ", "ZI", "ZX", "ZY", "ZZ",
]

# single-qubit maximal stack, layer order (X, Z)
SINGLE_QUBIT_MAXIMAL = [
    ((+1, +1), "I"),
    ((+1, -1), "X"),
    ((-1, -1), "Y"),
    ((-1, +1), "Z"),
]

# CNOT maximal stack in layer order (X1, X2, Z1, Z2)
CNOT_MAXIMAL_X1_X2_Z1_Z2 = [
    ((+1, +1, +1, +1), "II"),
    ((+1, +1, +1, -1), "IX"),
    ((+1, +1, -1, +1), "XI"),
    ((+1, -1, +1, +1), "IZ"),
    ((-1, +1, +1, +1), "ZI"),
    ((+1, +1, -1, -1), "XX"),
    ((+1, -1, +1, -1), "IY"),
    ((-1, +1, +1, -1), "ZX"),
    ((+1, -1, -1, +1), "XZ"),
    ((-1, +1, -1, +1), "YI"),
    ((-1, -1, +1, +1), "ZZ"),
    ((+1, -1, -1, -1), "XY"),
    ((-1, +1, -1, -1), "YX"),
    ((-1, -1, +1, -1), "ZY"),
    ((-1, -1, -1, +1), "YZ"),
    ((-1, -1, -1, -1), "YY"),
]

# every single-layer gadget on CNOT(control 1 -> target 2):
# (R, L, compatible 1-based indices for m=+1, for m=-1)
CNOT_SINGLE_LAYERS = [
    ("IX", "IX", [1, 2, 5, 6, 9, 10, 13, 14], [3, 4, 7, 8, 11, 12, 15, 16]),
    ("IY", "ZY", [1, 3, 5, 7, 9, 11, 13, 15], [2, 4, 6, 8, 10, 12, 14, 16]),
    ("IZ", "ZZ", [1, 4, 5, 8, 9, 12, 13, 16], [2, 3, 6, 7, 10, 11, 14, 15]),
    ("XI", "XX", [1, 2, 3, 4, 5, 6, 7, 8], [9, 10, 11, 12, 13, 14, 15, 16]),
    ("YI", "YX", [1, 2, 3, 4, 9, 10, 11, 12], [5, 6, 7, 8, 13, 14, 15, 16]),
    ("ZI", "ZI", [1, 2, 3, 4, 13, 14, 15, 16], [5, 6, 7, 8, 9, 10, 11, 12]),
    ("XX", "XI", [1, 2, 5, 6, 11, 12, 15, 16], [3, 4, 7, 8, 9, 10, 13, 14]),
    ("XY", "YZ", [1, 3, 5, 7, 10, 12, 14, 16], [2, 4, 6, 8, 9, 11, 13, 15]),
    ("XZ", "-YY", [1, 4, 5, 8, 10, 11, 14, 15], [2, 3, 6, 7, 9, 12, 13, 16]),
    ("YX", "YI", [1, 2, 7, 8, 9, 10, 15, 16], [3, 4, 5, 6, 11, 12, 13, 14]),
    ("YY", "-XZ", [1, 3, 6, 8, 9, 11, 14, 16], [2, 4, 5, 7, 10, 12, 13, 15]),
    ("YZ", "XY", [1, 4, 6, 7, 9, 12, 14, 15], [2, 3, 5, 8, 10, 11, 13, 16]),
    ("ZX", "ZX", [1, 2, 7, 8, 11, 12, 13, 14], [3, 4, 5, 6, 9, 10, 15, 16]),
    ("ZY", "IY", [1, 3, 6, 8, 10, 12, 13, 15], [2, 4, 5, 7, 9, 11, 14, 16]),
    ("ZZ", "IZ", [1, 4, 6, 7, 10, 11, 13, 16], [2, 3, 5, 8, 9, 12, 14, 15]),
]


def _bits(pattern):
    return ",".join("+1" if m == 1 else "-1" for m in pattern)


def single_qubit_maximal_csv() -> str:
    """Expected `tables --gate h --stack maximal` output."""
    rows = sorted(
        SINGLE_QUBIT_MAXIMAL,
        key=lambda row: tuple(0 if m == 1 else 1 for m in row[0]),
    )
    lines = ["m[X1],m[Z1],errors"]
    lines += [f"{_bits(pat)},{label}" for pat, label in rows]
    return "\n".join(lines) + "\n"


def cnot_maximal_csv() -> str:
    """Expected `tables --gate cnot --stack maximal` output.

    The reference rows carry outcome bits in layer order (X1, X2, Z1, Z2);
    the emitted stack orders layers (X1, Z1, X2, Z2), so bits 2 and 3 swap.
    """
    rows = []
    for (m_x1, m_x2, m_z1, m_z2), label in CNOT_MAXIMAL_X1_X2_Z1_Z2:
        rows.append(((m_x1, m_z1, m_x2, m_z2), label))
    rows.sort(key=lambda row: tuple(0 if m == 1 else 1 for m in row[0]))
    lines = ["m[X1],m[Z1],m[X2],m[Z2],errors"]
    lines += [f"{_bits(pat)},{label}" for pat, label in rows]
    return "\n".join(lines) + "\n"


def cnot_single_layers_csv() -> str:
    """Expected `tables --gate cnot --stack single` output.

    Rows are sorted by the index of R; member indices become labels.
    """
    def labelset(indices):
        return " ".join(LABELS_1BASED[i - 1] for i in sorted(indices))

    rows = sorted(CNOT_SINGLE_LAYERS, key=lambda row: LABELS_1BASED.index(row[0]))
    lines = ["r,l,set[+1],set[-1]"]
    for r, l, plus, minus in rows:
        lines.append(f"{r},{l},{labelset(plus)},{labelset(minus)}")
    return "\n".join(lines) + "\n"
