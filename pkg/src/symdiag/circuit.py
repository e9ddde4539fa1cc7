"""Gate-level IR for {CNOT, Rz} circuits.

Qubit 0 is the most significant bit of a basis index, so on ``width`` qubits
qubit ``i`` lives at bit position ``width - 1 - i``.  ``Rz(phi)`` is
``diag(exp(-i phi/2), exp(+i phi/2))``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

CNOT = "CNOT"
RZ = "RZ"


class NotDiagonal(ValueError):
    """Raised when a circuit does not map some basis state back to itself."""

    def __init__(self, index: int, image: int):
        super().__init__(f"basis state {index} is mapped to {image}")
        self.index = index
        self.image = image


class LengthMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Gate:
    kind: str
    target: int
    control: int | None = None
    angle: float = 0.0

    def __post_init__(self):
        if self.kind == CNOT:
            if self.control is None or self.control == self.target:
                raise ValueError(f"bad CNOT control {self.control} for target {self.target}")
        elif self.kind == RZ:
            if self.control is not None:
                raise ValueError("RZ takes no control")
        else:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if self.target < 0 or (self.control is not None and self.control < 0):
            raise ValueError("negative qubit index")

    @property
    def qubits(self) -> tuple[int, ...]:
        if self.kind == CNOT:
            return (self.target, self.control)
        return (self.target,)

    def __str__(self) -> str:
        if self.kind == CNOT:
            return f"CNOT({self.target},{self.control})"
        return f"RZ({self.target},{self.angle:.6g})"


def cnot(target: int, control: int) -> Gate:
    return Gate(CNOT, target, control)


def rz(target: int, angle: float) -> Gate:
    return Gate(RZ, target, None, float(angle))


@dataclass(frozen=True)
class FBlock:
    """One Rz on ``target`` followed by ``CNOT(target, control)``."""

    target: int
    control: int
    angle: float

    def expand(self) -> list[Gate]:
        return [rz(self.target, self.angle), cnot(self.target, self.control)]


def expand_fblock(block: FBlock) -> list[Gate]:
    return block.expand()


@dataclass(frozen=True)
class Circuit:
    width: int
    ops: tuple[Gate, ...] = ()
    global_phase: float = 0.0

    def __post_init__(self):
        if self.width < 1:
            raise ValueError("circuit width must be at least 1")
        object.__setattr__(self, "ops", tuple(self.ops))
        for op in self.ops:
            if max(op.qubits) >= self.width:
                raise ValueError(f"{op} does not fit on {self.width} qubits")

    def __len__(self) -> int:
        return len(self.ops)

    def with_ops(self, ops: Iterable[Gate]) -> "Circuit":
        return Circuit(self.width, tuple(ops), self.global_phase)


def apply_to_basis(circuit: Circuit, q: int) -> tuple[int, float]:
    """Push basis state ``q`` through the circuit.

    Returns the image index and the accumulated phase, excluding the
    circuit's global phase.
    """
    m = circuit.width
    if not 0 <= q < 2**m:
        raise ValueError(f"basis index {q} out of range for width {m}")
    phase = 0.0
    for op in circuit.ops:
        tbit = m - 1 - op.target
        if op.kind == CNOT:
            if (q >> (m - 1 - op.control)) & 1:
                q ^= 1 << tbit
        else:
            phase += op.angle / 2 if (q >> tbit) & 1 else -op.angle / 2
    return q, phase


def basis_action(circuit: Circuit) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized ``apply_to_basis`` over every basis index at once."""
    m = circuit.width
    idx = np.arange(2**m, dtype=np.int64)
    phase = np.zeros(2**m)
    for op in circuit.ops:
        tbit = m - 1 - op.target
        if op.kind == CNOT:
            cbit = m - 1 - op.control
            idx ^= ((idx >> cbit) & 1) << tbit
        else:
            phase += (((idx >> tbit) & 1) - 0.5) * op.angle
    return idx, phase


def extract_diagonal(circuit: Circuit) -> np.ndarray:
    """Diagonal of the unitary implemented by ``circuit``, global phase included."""
    idx, phase = basis_action(circuit)
    bad = np.flatnonzero(idx != np.arange(idx.size))
    if bad.size:
        raise NotDiagonal(int(bad[0]), int(idx[bad[0]]))
    return np.exp(1j * (phase + circuit.global_phase))


def equivalent_up_to_global_phase(d1, d2, tol: float = 1e-9) -> bool:
    d1 = np.asarray(d1, dtype=complex)
    d2 = np.asarray(d2, dtype=complex)
    if d1.shape != d2.shape:
        raise LengthMismatch(f"lengths {d1.shape} and {d2.shape} differ")
    return max_phase_error(d1, d2) < tol


def max_phase_error(d1, d2) -> float:
    """max_q |d1[q] conj(d2[q]) - c| with c fixed by the first entry."""
    d1 = np.asarray(d1, dtype=complex)
    d2 = np.asarray(d2, dtype=complex)
    if d1.shape != d2.shape:
        raise LengthMismatch(f"lengths {d1.shape} and {d2.shape} differ")
    ratio = d1 * np.conj(d2)
    return float(np.max(np.abs(ratio - ratio[0])))


def schedule_layers(circuit: Circuit) -> list[list[Gate]]:
    """ASAP layering: a gate lands one layer after the latest gate on any of its qubits."""
    last = [0] * circuit.width
    layers: list[list[Gate]] = []
    for op in circuit.ops:
        layer = 1 + max(last[q] for q in op.qubits)
        for q in op.qubits:
            last[q] = layer
        if layer > len(layers):
            layers.append([])
        layers[layer - 1].append(op)
    return layers


def schedule_depth(circuit: Circuit) -> int:
    last = [0] * circuit.width
    for op in circuit.ops:
        layer = 1 + max(last[q] for q in op.qubits)
        for q in op.qubits:
            last[q] = layer
    return max(last, default=0)


def gate_counts(circuit: Circuit) -> tuple[int, int]:
    n_cnot = sum(1 for op in circuit.ops if op.kind == CNOT)
    return n_cnot, len(circuit.ops) - n_cnot


def dense_unitary(circuit: Circuit) -> np.ndarray:
    """Full 2^m x 2^m matrix, for small-width cross checks only."""
    m = circuit.width
    dim = 2**m
    u = np.eye(dim, dtype=complex) * np.exp(1j * circuit.global_phase)
    for op in circuit.ops:
        u = _dense_gate(op, m) @ u
    return u


def _dense_gate(op: Gate, m: int) -> np.ndarray:
    dim = 2**m
    idx = np.arange(dim)
    tbit = m - 1 - op.target
    if op.kind == CNOT:
        cbit = m - 1 - op.control
        image = idx ^ (((idx >> cbit) & 1) << tbit)
        g = np.zeros((dim, dim), dtype=complex)
        g[image, idx] = 1.0
        return g
    bit = (idx >> tbit) & 1
    return np.diag(np.exp(1j * (bit - 0.5) * op.angle))


# -- text formats -----------------------------------------------------------

def dumps(circuit: Circuit) -> str:
    lines = [f"width={circuit.width} global_phase={circuit.global_phase!r}"]
    for op in circuit.ops:
        if op.kind == CNOT:
            lines.append(f"CNOT {op.target} {op.control}")
        else:
            lines.append(f"RZ {op.target} {op.angle!r}")
    return "\n".join(lines) + "\n"


def loads(text: str) -> Circuit:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ValueError("empty circuit file")
    header = dict(tok.split("=", 1) for tok in lines[0].split())
    try:
        width = int(header["width"])
        global_phase = float(header.get("global_phase", 0.0))
    except (KeyError, ValueError) as exc:
        raise ValueError(f"bad circuit header: {lines[0]!r}") from exc
    ops = []
    for lineno, ln in enumerate(lines[1:], start=2):
        parts = ln.split()
        if parts[0] == CNOT and len(parts) == 3:
            ops.append(cnot(int(parts[1]), int(parts[2])))
        elif parts[0] == RZ and len(parts) == 3:
            ops.append(rz(int(parts[1]), float(parts[2])))
        else:
            raise ValueError(f"line {lineno}: cannot parse {ln!r}")
    return Circuit(width, tuple(ops), global_phase)


def to_qasm(circuit: Circuit) -> str:
    lines = [
        "OPENQASM 2.0;",
        'include "qelib1.inc";',
        f"// global_phase {circuit.global_phase!r}",
        f"qreg q[{circuit.width}];",
    ]
    for op in circuit.ops:
        if op.kind == CNOT:
            lines.append(f"cx q[{op.control}],q[{op.target}];")
        else:
            lines.append(f"rz({op.angle!r}) q[{op.target}];")
    return "\n".join(lines) + "\n"


def from_gates(width: int, gates: Sequence[Gate | FBlock], global_phase: float = 0.0) -> Circuit:
    """Build a circuit from a mix of gates and F-blocks."""
    ops: list[Gate] = []
    for g in gates:
        ops.extend(g.expand() if isinstance(g, FBlock) else [g])
    return Circuit(width, tuple(ops), global_phase)
