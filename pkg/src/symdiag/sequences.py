"""Code sequences that fix the parameters and order of the F-blocks.

Bit strings are plain ``str`` of ``'0'``/``'1'``; the first character is the
most significant bit (qubit 0).
"""
from __future__ import annotations

from functools import lru_cache


def _check_order(m: int) -> None:
    if m < 1:
        raise ValueError(f"sequence order must be >= 1, got {m}")


@lru_cache(maxsize=None)
def gray_code(m: int) -> tuple[str, ...]:
    """Reflected binary code, growing by appending the new digit at the end.

    >>> gray_code(2)
    ('00', '10', '11', '01')
    """
    _check_order(m)
    if m == 1:
        return ("0", "1")
    prev = gray_code(m - 1)
    return tuple(c + "0" for c in prev) + tuple(c + "1" for c in reversed(prev))


@lru_cache(maxsize=None)
def half_gray_code(m: int) -> tuple[str, ...]:
    """Entries of ``gray_code(m)`` at even 1-based positions."""
    return gray_code(m)[1::2]


@lru_cache(maxsize=None)
def control_codes(m: int) -> tuple[int, ...]:
    _check_order(m)
    if m == 1:
        return (0,)
    temp = list(control_codes(m - 1))
    temp[-1] = m - 1
    return tuple(temp + temp)


@lru_cache(maxsize=None)
def rai(m: int, width: int) -> tuple[str, ...]:
    """Rotation-angle indices for row ``m`` on ``width`` qubits.

    Each half-Gray entry gets a ``1`` and then ``width - 1 - m`` zeros appended.
    ``width`` plays the role of the total qubit count (``2n`` for two
    registers of ``n`` qubits).
    """
    if not 1 <= m <= width - 1:
        raise ValueError(f"rai order {m} outside 1..{width - 1}")
    tail = "1" + "0" * (width - 1 - m)
    return tuple(c + tail for c in half_gray_code(m))


def to_index(bits: str) -> int:
    return int(bits, 2)
