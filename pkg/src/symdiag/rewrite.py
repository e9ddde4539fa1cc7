"""Peephole rewriting for {CNOT, Rz} circuits.

Every rule is checked at registration by comparing dense matrices on its
minimal support.  The engine is greedy and deterministic: for each gate, in
order, it slides rightwards through gates it commutes with and fires the
first reducing rule whose pattern it completes.  When no such rule fires, a
relocation step moves one CNOT past its neighbours (spawning a partner CNOT
where the two are chained) and keeps the move only if the circuit then
reduces to fewer gates than before.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .circuit import CNOT, RZ, Circuit, Gate, cnot, dense_unitary, rz

# Test angles used when certifying parametrized rules.
_PROBE_ANGLES = (0.37, -1.21)


class RuleCertificationError(RuntimeError):
    pass


@dataclass(frozen=True)
class RewriteRule:
    """``pattern`` and ``replacement`` are sample instances on a small support.

    ``kind`` is ``"commute"`` for a two-gate swap, ``"reduce"`` for a rule
    that lowers the gate count and ``"propagate"`` for moving a CNOT past a
    chained one at the cost of a spawned partner.
    """

    name: str
    kind: str
    pattern: tuple[Gate, ...]
    replacement: tuple[Gate, ...]
    support: int

    @property
    def window(self) -> int:
        return len(self.pattern)


def _same_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float = 1e-12) -> bool:
    k = np.unravel_index(np.argmax(np.abs(a)), a.shape)
    if abs(b[k]) < tol:
        return False
    return np.allclose(a * (b[k] / a[k]), b, atol=tol)


def certify(rule: RewriteRule) -> RewriteRule:
    lhs = dense_unitary(Circuit(rule.support, rule.pattern))
    rhs = dense_unitary(Circuit(rule.support, rule.replacement))
    if not _same_up_to_phase(lhs, rhs):
        raise RuleCertificationError(f"rule {rule.name!r} does not preserve the unitary")
    return rule


def register_rule_set() -> list[RewriteRule]:
    """The built-in rule family, each instance certified by dense equality."""
    a, b = _PROBE_ANGLES
    rules = [
        RewriteRule("cnot_cancel", "reduce", (cnot(1, 0), cnot(1, 0)), (), 2),
        RewriteRule("rz_merge", "reduce", (rz(0, a), rz(0, b)), (rz(0, a + b),), 1),
        RewriteRule("rz_zero", "reduce", (rz(0, 0.0),), (), 1),
        RewriteRule("rz_on_control", "commute", (rz(0, a), cnot(1, 0)), (cnot(1, 0), rz(0, a)), 2),
        RewriteRule("same_target", "commute", (cnot(2, 0), cnot(2, 1)), (cnot(2, 1), cnot(2, 0)), 3),
        RewriteRule("same_control", "commute", (cnot(1, 0), cnot(2, 0)), (cnot(2, 0), cnot(1, 0)), 3),
        RewriteRule("disjoint_cnot", "commute", (cnot(1, 0), cnot(3, 2)), (cnot(3, 2), cnot(1, 0)), 4),
        RewriteRule("disjoint_rz", "commute", (rz(0, a), rz(1, b)), (rz(1, b), rz(0, a)), 2),
        RewriteRule("disjoint_rz_cnot", "commute", (rz(2, a), cnot(1, 0)), (cnot(1, 0), rz(2, a)), 3),
        # CNOT(b,a) CNOT(c,b) CNOT(b,a) == CNOT(c,b) CNOT(c,a)
        RewriteRule(
            "cnot_chain_fold",
            "reduce",
            (cnot(1, 0), cnot(2, 1), cnot(1, 0)),
            (cnot(2, 1), cnot(2, 0)),
            3,
        ),
        # CNOT(c,b) CNOT(b,a) CNOT(c,b) == CNOT(b,a) CNOT(c,a)
        RewriteRule(
            "cnot_fan_fold",
            "reduce",
            (cnot(2, 1), cnot(1, 0), cnot(2, 1)),
            (cnot(1, 0), cnot(2, 0)),
            3,
        ),
        # CNOT(b,a) CNOT(c,b) == CNOT(c,b) CNOT(c,a) CNOT(b,a)
        RewriteRule(
            "cnot_propagate_target",
            "propagate",
            (cnot(1, 0), cnot(2, 1)),
            (cnot(2, 1), cnot(2, 0), cnot(1, 0)),
            3,
        ),
        # CNOT(b,a) CNOT(a,x) == CNOT(a,x) CNOT(b,x) CNOT(b,a)
        RewriteRule(
            "cnot_propagate_control",
            "propagate",
            (cnot(2, 1), cnot(1, 0)),
            (cnot(1, 0), cnot(2, 0), cnot(2, 1)),
            3,
        ),
    ]
    return [certify(r) for r in rules]


def commutes(g: Gate, h: Gate) -> bool:
    """Syntactic commutation test covering every ``commute`` rule.

    Two gates fail to commute only when an Rz sits on a CNOT target, or one
    CNOT's target is the other's control.
    """
    if g.kind == RZ:
        return h.kind == RZ or g.target != h.target
    if h.kind == RZ:
        return h.target != g.target
    return g.target != h.control and g.control != h.target


def _reduce_pair(g: Gate, h: Gate) -> list[Gate] | None:
    """Two gates that became adjacent: cancel or merge."""
    if g.kind == CNOT and g == h:
        return []
    if g.kind == RZ and h.kind == RZ and g.target == h.target:
        angle = g.angle + h.angle
        return [rz(g.target, angle)] if angle != 0 else []
    return None


def _fold_triple(g: Gate, h: Gate, k: Gate) -> list[Gate] | None:
    """``g h k`` with ``g == k`` and ``h`` a CNOT chained onto ``g``."""
    if g.kind != CNOT or h.kind != CNOT or g != k:
        return None
    if h.control == g.target and h.target != g.control:
        # CNOT(b,a) CNOT(c,b) CNOT(b,a) -> CNOT(c,b) CNOT(c,a)
        return [h, cnot(h.target, g.control)]
    if g.control == h.target and h.control != g.target:
        # CNOT(c,b) CNOT(b,a) CNOT(c,b) -> CNOT(b,a) CNOT(c,a)
        return [h, cnot(g.target, h.control)]
    return None


def _try_at(ops: list[Gate], i: int, use_folds: bool) -> list[Gate] | None:
    g = ops[i]
    j = i + 1
    while j < len(ops):
        h = ops[j]
        pair = _reduce_pair(g, h)
        if pair is not None:
            return ops[:i] + ops[i + 1 : j] + pair + ops[j + 1 :]
        if commutes(g, h):
            j += 1
            continue
        if not use_folds:
            return None
        # g is blocked by h; look for a copy of g past h, reachable through
        # gates that commute with both.
        k = j + 1
        while k < len(ops):
            x = ops[k]
            if x == g:
                fold = _fold_triple(g, h, x)
                if fold is None:
                    return None
                middle = ops[i + 1 : j] + ops[j + 1 : k]
                return ops[:i] + middle + fold + ops[k + 1 :]
            if commutes(x, g) and commutes(x, h):
                k += 1
                continue
            return None
        return None
    return None


def _pass(g: Gate, h: Gate) -> list[Gate] | None:
    """Gates left behind when ``g`` moves across ``h``, or None if it cannot.

    The spawned CNOT of a propagation is symmetric in direction, so the same
    helper serves moves to the left.
    """
    if commutes(g, h):
        return [h]
    if g.kind != CNOT or h.kind != CNOT:
        return None
    b, a = g.target, g.control
    if h.control == b and h.target != a:
        return [h, cnot(h.target, a)]
    if h.target == a and h.control != b:
        return [h, cnot(b, h.control)]
    return None


def _relocations(ops: list[Gate], i: int, window: int):
    """``(lo, hi, segment)`` replacing ``ops[lo:hi]`` with ``ops[i]`` moved
    1..window positions right, then left."""
    g = ops[i]
    moved: list[Gate] = []
    for j in range(i + 1, min(len(ops), i + 1 + window)):
        spill = _pass(g, ops[j])
        if spill is None:
            break
        moved = moved + spill
        yield i, j + 1, moved + [g]
    moved = []
    for j in range(i - 1, max(-1, i - 1 - window), -1):
        spill = _pass(g, ops[j])
        if spill is None:
            break
        moved = spill + moved
        yield j, i + 1, [g] + moved


def _reduce(ops: list[Gate], max_passes: int, use_folds: bool) -> list[Gate]:
    for _ in range(max_passes):
        changed = False
        i = 0
        while i < len(ops):
            new = _try_at(ops, i, use_folds)
            if new is not None:
                ops = new
                changed = True
            else:
                i += 1
        if not changed:
            break
    return ops


def _relocate_once(ops: list[Gate], max_passes: int, window: int) -> list[Gate] | None:
    # Candidates are judged on a slice around the move; a reduction inside a
    # contiguous slice is a valid reduction of the whole circuit.
    for i, g in enumerate(ops):
        if g.kind != CNOT:
            continue
        for lo, hi, segment in _relocations(ops, i, window):
            a, b = max(0, lo - window), min(len(ops), hi + window)
            reduced = _reduce(ops[a:lo] + segment + ops[hi:b], max_passes, True)
            if len(reduced) < b - a:
                return _reduce(ops[:a] + reduced + ops[b:], max_passes, True)
    return None


def apply_rules(
    circuit: Circuit,
    max_passes: int = 100,
    use_folds: bool = True,
    relocate: bool = True,
    window: int = 12,
) -> Circuit:
    """Greedy left-to-right rewriting until a fixpoint or ``max_passes``.

    Every accepted step strictly lowers the gate count, so the loop
    terminates.  ``relocate`` enables the CNOT relocation step with moves of
    at most ``window`` positions.
    """
    ops = [g for g in circuit.ops if not (g.kind == RZ and g.angle == 0)]
    ops = _reduce(ops, max_passes, use_folds)
    if relocate and use_folds:
        for _ in range(max_passes):
            new = _relocate_once(ops, max_passes, window)
            if new is None:
                break
            ops = new
    return circuit.with_ops(ops)
