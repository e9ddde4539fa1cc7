"""Synthesizers for diagonal unitaries over {CNOT, Rz}.

* ``synthesize_symmetric``: the F-block construction for mirror-symmetric
  phase vectors, ``2**(m-1) + m - 2`` CNOTs.
* ``synthesize_general``: Gray-code walk for arbitrary phases, ``2**m - 2`` CNOTs.
* ``synthesize_mirror``: CNOT ladder around a general circuit for the top
  half of the phases, ``2**(m-1) + 2m - 4`` CNOTs.
* ``depth_reduction_pass``: deterministic regrouping of the symmetric circuit
  that hides the initial CNOT fan-out and the first Rz of each later block.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .angles import (
    AngleVector,
    SymmetryViolation,
    ThetaVector,
    check_reflection_symmetry,
    rotation_angles,
)
from .circuit import Circuit, FBlock, Gate, cnot, rz, schedule_depth
from .resources import ResourceReport, report_for
from .sequences import control_codes, rai, to_index

ALG1 = "alg1"
BASELINE = "baseline"
MIRROR = "mirror"


@dataclass(frozen=True, eq=False)
class SynthesisResult:
    circuit: Circuit
    method: str
    theta_width: int
    report: ResourceReport
    angles: AngleVector | None = None
    # Step-by-step F-block layout of the symmetric construction; index 0 is
    # the opening CNOT fan-out, the last entry the closing staircase.
    layout: tuple = field(default=(), repr=False)
    depth_reduced: bool = False


def alg1_layout(width: int) -> list[list[tuple[int, int, int]]]:
    """F-block skeleton ``(target, control, angle_index)`` per step.

    Step 0 holds the fan-out CNOTs as ``(target, 0, -1)``.  Steps
    ``1 .. width-2`` are the blocks of decreasing order and the final step is
    the closing staircase.
    """
    m = width
    steps: list[list[tuple[int, int, int]]] = [[(m - s, 0, -1) for s in range(1, m)]]
    for s in range(1, m):
        blocks = []
        if s < m - 1:
            for i in range(1, 2 ** (m - 2 - s) + 1):
                for j in range(1, s + 1):
                    row = m - 1 - s + j
                    index = 2 ** (m - 2 - s + j) - 2 ** (m - 1 - s) + i
                    blocks.append(
                        (row, control_codes(row)[index - 1], to_index(rai(row, m)[index - 1]))
                    )
        else:
            for j in range(1, m):
                index = 2 ** (j - 1)
                blocks.append((j, control_codes(j)[index - 1], to_index(rai(j, m)[index - 1])))
        steps.append(blocks)
    return steps


def _require_symmetric(theta: ThetaVector) -> None:
    if not check_reflection_symmetry(theta):
        raise SymmetryViolation("phase vector is not mirror-symmetric")


def synthesize_symmetric(theta: ThetaVector) -> SynthesisResult:
    _require_symmetric(theta)
    m = theta.width
    phi = rotation_angles(theta, symmetric=True)
    if m == 1:
        circuit = Circuit(1, (rz(0, phi.values[1]),), -phi.phi0 / 2)
        return SynthesisResult(circuit, ALG1, m, report_for(circuit, ALG1), phi)
    layout = alg1_layout(m)
    ops: list[Gate] = [cnot(t, c) for t, c, _ in layout[0]]
    for step in layout[1:]:
        for t, c, k in step:
            ops.extend(FBlock(t, c, float(phi.values[k])).expand())
    circuit = Circuit(m, tuple(ops), -phi.phi0 / 2)
    return SynthesisResult(circuit, ALG1, m, report_for(circuit, ALG1), phi, tuple(map(tuple, layout)))


def gray_walk(target: int, controls: list[int]) -> list[tuple[int, int]]:
    """Cyclic walk over all parities ``{target} | S`` for ``S`` subsets of ``controls``.

    Returns ``(parity_mask_qubits, next_control)`` pairs: apply the Rz for the
    current parity, then ``CNOT(target, next_control)``.  The final CNOT
    returns the target to its own value.  Masks are bitsets over qubit numbers.
    """
    k = len(controls)
    if k == 0:
        return [(1 << target, -1)]
    # reflected Gray code on k bits, first control toggling most often
    codes = [0]
    for b in range(k):
        codes = codes + [c | (1 << b) for c in reversed(codes)]
    walk = []
    for i, code in enumerate(codes):
        nxt = codes[(i + 1) % len(codes)]
        flip = (code ^ nxt).bit_length() - 1
        mask = 1 << target
        for b in range(k):
            if code >> b & 1:
                mask |= 1 << controls[b]
        walk.append((mask, controls[flip]))
    return walk


def _mask_to_index(mask: int, width: int) -> int:
    # qubit i is bit width-1-i of the angle index
    return sum(1 << (width - 1 - q) for q in range(width) if mask >> q & 1)


def walk_controls(target: int) -> list[int]:
    """Control order for the Gray walk on ``target``, fastest-toggling first.

    Even targets toggle their nearest control most often, odd targets qubit 0.
    Alternating keeps the CNOTs at block seams chained, so peephole rewriting
    can fold them.
    """
    controls = list(range(target))
    return controls[::-1] if target % 2 == 0 else controls


def general_ops(phi: np.ndarray, width: int, keep_zero_rz: bool, offset: int = 0) -> list[Gate]:
    """Gray-code circuit for angle vector ``phi`` on qubits ``offset .. offset+width-1``."""
    ops: list[Gate] = []
    for t in range(width):
        for mask, nxt in gray_walk(t, walk_controls(t)):
            angle = float(phi[_mask_to_index(mask, width)])
            if keep_zero_rz or angle != 0.0:
                ops.append(rz(t + offset, angle))
            if nxt >= 0:
                ops.append(cnot(t + offset, nxt + offset))
    return ops


def synthesize_general(theta: ThetaVector, keep_zero_rz: bool = True) -> SynthesisResult:
    """Gray-code construction for an arbitrary diagonal.

    With ``keep_zero_rz=False`` only angles that are exactly zero are dropped;
    for mirror-symmetric input this removes the odd-parity rotations.
    """
    m = theta.width
    phi = rotation_angles(theta)
    ops = general_ops(phi.values, m, keep_zero_rz)
    circuit = Circuit(m, tuple(ops), -phi.phi0 / 2)
    return SynthesisResult(circuit, BASELINE, m, report_for(circuit, BASELINE), phi)


def synthesize_mirror(theta: ThetaVector) -> SynthesisResult:
    """CNOT ladder from qubit 0, general circuit on the rest, ladder again."""
    _require_symmetric(theta)
    m = theta.width
    if m < 2:
        raise ValueError("mirror construction needs at least 2 qubits")
    top = ThetaVector(m - 1, theta.values[: 2 ** (m - 1)])
    phi = rotation_angles(top, symmetric=False)
    ladder = [cnot(t, 0) for t in range(1, m)]
    ops = ladder + general_ops(phi.values, m - 1, keep_zero_rz=True, offset=1) + ladder
    circuit = Circuit(m, tuple(ops), -phi.phi0 / 2)
    return SynthesisResult(circuit, MIRROR, m, report_for(circuit, MIRROR), phi)


def depth_reduction_pass(result: SynthesisResult) -> SynthesisResult:
    """Regroup a symmetric-construction circuit for lower scheduled depth.

    Two relocations, both through gates they commute with:

    * the fan-out ``CNOT(k, 0)`` for ``k = 2 .. m-2`` moves behind the first
      Rz of the leading block, right before that block's first CNOT;
    * the Rz of the first F-block of every later block moves next to the Rz
      of the second F-block of the leading block.

    Anything other than an unreduced symmetric result with ``m >= 4`` is
    returned unchanged.
    """
    m = result.theta_width
    if result.method != ALG1 or m < 4 or result.depth_reduced or not result.layout:
        return result
    ops = list(result.circuit.ops)
    n_fanout = m - 1
    fanout, rest = ops[:n_fanout], ops[n_fanout:]
    moved_cnots = sorted((g for g in fanout if 2 <= g.target <= m - 2), key=lambda g: g.target)
    kept = [g for g in fanout if not 2 <= g.target <= m - 2]

    # F-block boundaries (2 gates each) of every step after the fan-out
    sizes = [len(step) for step in result.layout[1:]]
    starts = np.concatenate([[0], np.cumsum(sizes)[:-1]]) * 2
    first_rz_positions = [int(s) for s in starts[1:]]
    moved_rz = [rest[p] for p in first_rz_positions]
    rest_wo = [g for p, g in enumerate(rest) if p not in set(first_rz_positions)]

    # leading block: F1 = rest_wo[0:2], F2 = rest_wo[2:4]
    new_ops = (
        kept
        + [rest_wo[0]]
        + moved_cnots
        + [rest_wo[1], rest_wo[2]]
        + moved_rz
        + rest_wo[3:]
    )
    circuit = result.circuit.with_ops(new_ops)
    return SynthesisResult(
        circuit,
        result.method,
        m,
        report_for(circuit, result.method, reduced=True),
        result.angles,
        result.layout,
        depth_reduced=True,
    )


SYNTHESIZERS = {
    ALG1: synthesize_symmetric,
    BASELINE: synthesize_general,
    MIRROR: synthesize_mirror,
}


def synthesize(theta: ThetaVector, method: str = ALG1, depth_pass: bool = False) -> SynthesisResult:
    try:
        fn = SYNTHESIZERS[method]
    except KeyError:
        raise ValueError(f"unknown method {method!r}") from None
    result = fn(theta)
    if depth_pass:
        result = depth_reduction_pass(result)
    return result


def measured_depth(result: SynthesisResult) -> int:
    return schedule_depth(result.circuit)
