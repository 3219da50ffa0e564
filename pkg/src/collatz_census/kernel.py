"""Step maps, trajectory iteration, and stopping times.

Four maps over the positive integers:

* ``cr``    — 3n+1 if n is odd, n/2 if n is even.
* ``pdcr``  — (3n+1)/2 if n is odd (3n+1 is always even then), n/2 if even.
* ``cr3``   — three applications of ``cr``; fixed points 1, 2, 4.
* ``pdcr2`` — two applications of ``pdcr``; fixed points 1, 2.

All arithmetic is range-checked against a 128-bit magnitude limit: a step
whose result would exceed it raises :class:`NatOverflowError` rather than
wrapping. Because termination of these maps is an open question, every
iteration is budget-guarded and reports budget exhaustion explicitly.

Everything here is pure and stateless; safe to call from any number of
threads.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

NAT_MAX = 2**128 - 1
DEFAULT_STEP_BUDGET = 10**6

# largest n for which 3n+1 still fits in 128 bits
_ODD_STEP_MAX = (NAT_MAX - 1) // 3


class NatRangeError(ValueError):
    """A value lies outside the supported positive-integer domain."""


class NatOverflowError(OverflowError):
    """A step result would exceed the 128-bit magnitude limit.

    ``n`` is the relevant input: the value whose step overflowed, or, when
    raised from a higher-level routine, the starting number whose trajectory
    overflowed.
    """

    def __init__(self, n: int, message: str | None = None):
        super().__init__(message or f"3*{n}+1 exceeds the 128-bit limit")
        self.n = n


class StepBudgetExceeded(RuntimeError):
    """An iteration did not terminate within its step budget."""

    def __init__(self, n: int, max_steps: int):
        super().__init__(f"n={n} did not terminate within {max_steps} steps")
        self.n = n
        self.max_steps = max_steps


class MapKind(enum.Enum):
    """Which recursion is iterated."""

    CR = "cr"
    CR3 = "cr3"
    PDCR = "pdcr"
    PDCR2 = "pdcr2"


class Termination(enum.Enum):
    """Why an iteration stopped."""

    REACHED_FIXED_POINT = "reached_fixed_point"
    REACHED_ONE = "reached_one"
    BUDGET_EXHAUSTED = "budget_exhausted"
    OVERFLOW = "overflow"


def validate_nat(n: int) -> int:
    """Check that ``n`` is a positive integer within the 128-bit range."""
    if not isinstance(n, int) or isinstance(n, bool):
        raise NatRangeError(f"expected a positive integer, got {n!r}")
    if n < 1:
        raise NatRangeError(f"value must be >= 1, got {n}")
    if n > NAT_MAX:
        raise NatRangeError("value exceeds the 128-bit limit")
    return n


def _validate_budget(max_steps: int) -> int:
    if not isinstance(max_steps, int) or isinstance(max_steps, bool) or max_steps < 0:
        raise ValueError(f"step budget must be a nonnegative integer, got {max_steps!r}")
    return max_steps


def cr_step(n: int) -> int:
    """One application of the base map: 3n+1 for odd n, n/2 for even n."""
    if n < 1:
        raise NatRangeError(f"value must be >= 1, got {n}")
    if n & 1:
        if n > _ODD_STEP_MAX:
            raise NatOverflowError(n)
        return 3 * n + 1
    return n >> 1


def pdcr_step(n: int) -> int:
    """One application of the accelerated map: (3n+1)/2 for odd n, n/2 for even."""
    if n < 1:
        raise NatRangeError(f"value must be >= 1, got {n}")
    if n & 1:
        if n > _ODD_STEP_MAX:
            raise NatOverflowError(n)
        return (3 * n + 1) >> 1
    return n >> 1


def cr3_step(n: int) -> int:
    """Three applications of :func:`cr_step`."""
    return cr_step(cr_step(cr_step(n)))


def pdcr2_step(n: int) -> int:
    """Two applications of :func:`pdcr_step`."""
    return pdcr_step(pdcr_step(n))


_STEP_FUNCTIONS = {
    MapKind.CR: cr_step,
    MapKind.CR3: cr3_step,
    MapKind.PDCR: pdcr_step,
    MapKind.PDCR2: pdcr2_step,
}


def step_function(map_kind: MapKind):
    """The single-step function for a map kind."""
    return _STEP_FUNCTIONS[map_kind]


@dataclass(frozen=True)
class Trajectory:
    """A recorded iteration of one of the four maps.

    ``values`` starts with the initial value and contains one entry per
    applied step; it is ``None`` when the iteration ran in count-only mode.
    ``steps`` counts applications of the chosen map, ``final`` is the last
    value reached.
    """

    map_kind: MapKind
    start: int
    values: tuple[int, ...] | None
    terminated: Termination
    steps: int
    final: int


def iterate(
    map_kind: MapKind,
    start: int,
    max_steps: int = DEFAULT_STEP_BUDGET,
    record: bool = True,
) -> Trajectory:
    """Apply ``map_kind`` repeatedly and report how the iteration ended.

    Stops when the value repeats under one application (a fixed point, which
    only the composite maps have), when the value 1 is reached (for the base
    maps, which cycle through 1 rather than fixing it), when the budget is
    exhausted, or when a step would overflow. The last two are reported
    outcomes, not exceptions. With ``record=False`` no value sequence is
    kept, only the step count and final value.
    """
    validate_nat(start)
    _validate_budget(max_steps)
    step = step_function(map_kind)
    cyclic = map_kind in (MapKind.CR, MapKind.PDCR)
    values: list[int] | None = [start] if record else None

    def done(terminated: Termination, steps: int, final: int) -> Trajectory:
        seq = tuple(values) if values is not None else None
        return Trajectory(map_kind, start, seq, terminated, steps, final)

    cur = start
    if cyclic and cur == 1:
        return done(Termination.REACHED_ONE, 0, cur)
    steps = 0
    while steps < max_steps:
        try:
            nxt = step(cur)
        except NatOverflowError:
            return done(Termination.OVERFLOW, steps, cur)
        steps += 1
        if values is not None:
            values.append(nxt)
        if nxt == cur:
            return done(Termination.REACHED_FIXED_POINT, steps, nxt)
        cur = nxt
        if cyclic and cur == 1:
            return done(Termination.REACHED_ONE, steps, cur)
    return done(Termination.BUDGET_EXHAUSTED, steps, cur)


@dataclass(frozen=True)
class StoppingTime:
    """First-hit count of the value 1 under a base map, plus its residue.

    ``residue`` is ``steps`` modulo the terminal cycle length: 3 for the
    ``cr`` basis (cycle 1, 4, 2), 2 for the ``pdcr`` basis (cycle 1, 2).
    """

    basis: MapKind
    steps: int
    residue: int


def basis_modulus(basis: MapKind) -> int:
    """Terminal cycle length of a base map: 3 for ``cr``, 2 for ``pdcr``."""
    if basis is MapKind.CR:
        return 3
    if basis is MapKind.PDCR:
        return 2
    raise ValueError(f"stopping times are defined for cr or pdcr, not {basis.value}")


def stopping_time(
    basis: MapKind, n: int, max_steps: int = DEFAULT_STEP_BUDGET
) -> StoppingTime:
    """Count base-map steps from ``n`` to the first occurrence of 1.

    Zero if ``n`` is already 1. Raises :class:`StepBudgetExceeded` or
    :class:`NatOverflowError` (naming ``n``) if 1 is not reached.
    """
    modulus = basis_modulus(basis)
    validate_nat(n)
    _validate_budget(max_steps)
    step = step_function(basis)
    x = n
    k = 0
    while x != 1:
        if k >= max_steps:
            raise StepBudgetExceeded(n, max_steps)
        try:
            x = step(x)
        except NatOverflowError as e:
            raise NatOverflowError(
                n, f"trajectory of {n} exceeded the 128-bit limit at value {e.n}"
            ) from None
        k += 1
    return StoppingTime(basis, k, k % modulus)
