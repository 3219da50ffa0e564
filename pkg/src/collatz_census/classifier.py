"""Fixed-point classification for the composite maps.

Every positive integer, iterated under ``cr3`` (or ``pdcr2``), eventually
becomes constant at one of the map's fixed points; that fixed point is the
number's class. Two routes compute it:

* ``classify_direct`` iterates the composite map until the value repeats.
  Slow, but a self-contained oracle.
* ``classify_fast`` exploits the cycle structure of the base map: once a
  base trajectory reaches 1, the values cycle with period 3 (1, 4, 2) under
  ``cr`` or period 2 (1, 2) under ``pdcr``, so the eventually-constant
  composite value is a fixed function of the stopping time modulo the cycle
  length. The residues for all n below a bound are precomputed into a packed
  :class:`ResidueCache`; numbers above the bound only iterate until they
  descend into it.

The residue rule is derived engineering, so ``verify_range`` cross-checks
the two routes; the test suite runs it over substantial ranges.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .kernel import (
    DEFAULT_STEP_BUDGET,
    MapKind,
    NatOverflowError,
    StepBudgetExceeded,
    basis_modulus,
    cr3_step,
    pdcr2_step,
    step_function,
    validate_nat,
)

# largest value for which 3x+1 fits in uint64; rarer, larger transients are
# promoted to exact big-int arithmetic
_U64_ODD_MAX = (2**64 - 2) // 3

_SCALAR_WARMUP = 4096      # table prefix built scalar before vector blocks
_MAX_BLOCK = 1 << 22       # cap on vector block length


class ClassLabel(enum.IntEnum):
    """The fixed point a composite-map iteration settles on."""

    ONE = 1
    TWO = 2
    FOUR = 4

    def __str__(self) -> str:  # renders as its numeric value
        return str(self.value)


# residue of the stopping time -> class, in residue order 0, 1, ...
_LABELS_BY_RESIDUE = {
    MapKind.CR3: (ClassLabel.ONE, ClassLabel.TWO, ClassLabel.FOUR),
    MapKind.PDCR2: (ClassLabel.ONE, ClassLabel.TWO),
}

_BASIS_FOR = {MapKind.CR3: MapKind.CR, MapKind.PDCR2: MapKind.PDCR}
_COMPOSITE_STEP = {MapKind.CR3: cr3_step, MapKind.PDCR2: pdcr2_step}


def labels_for(map_kind: MapKind) -> tuple[ClassLabel, ...]:
    """The possible class labels of a composite map, in residue order."""
    try:
        return _LABELS_BY_RESIDUE[map_kind]
    except KeyError:
        raise ValueError(
            f"classes are defined for cr3 or pdcr2, not {map_kind.value}"
        ) from None


def basis_for(map_kind: MapKind) -> MapKind:
    """The base map underlying a composite map (cr3 -> cr, pdcr2 -> pdcr)."""
    try:
        return _BASIS_FOR[map_kind]
    except KeyError:
        raise ValueError(
            f"classes are defined for cr3 or pdcr2, not {map_kind.value}"
        ) from None


def residue_to_label(map_kind: MapKind, residue: int) -> ClassLabel:
    """Map a stopping-time residue to its class.

    cr3: 0 -> 1, 1 -> 2, 2 -> 4. pdcr2: 0 -> 1, 1 -> 2.
    """
    table = labels_for(map_kind)
    if not isinstance(residue, int) or isinstance(residue, bool) or not 0 <= residue < len(table):
        raise ValueError(f"residue {residue!r} out of range for {map_kind.value}")
    return table[residue]


@dataclass(frozen=True)
class ClassificationOutcome:
    """Result of classifying one number.

    ``composite_steps`` counts applications of the composite map up to and
    including the one that first reproduced its input; it is ``None`` on the
    fast path, which derives the label from a residue and never walks the
    composite map.
    """

    label: ClassLabel
    composite_steps: int | None
    path: str  # "direct" or "fast"


def classify_direct(
    map_kind: MapKind, n: int, max_steps: int = DEFAULT_STEP_BUDGET
) -> ClassificationOutcome:
    """Iterate the composite map until its value repeats; that value is the class.

    Detection is literal repetition (next value equals current value), not
    membership in a known fixed-point set.
    """
    try:
        composite = _COMPOSITE_STEP[map_kind]
    except KeyError:
        raise ValueError(
            f"classes are defined for cr3 or pdcr2, not {map_kind.value}"
        ) from None
    validate_nat(n)
    cur = n
    steps = 0
    while steps < max_steps:
        try:
            nxt = composite(cur)
        except NatOverflowError as e:
            raise NatOverflowError(
                n, f"trajectory of {n} exceeded the 128-bit limit at value {e.n}"
            ) from None
        steps += 1
        if nxt == cur:
            return ClassificationOutcome(ClassLabel(nxt), steps, "direct")
        cur = nxt
    raise StepBudgetExceeded(n, max_steps)


class ResidueCache:
    """Packed 2-bit stopping-time residues for every n below ``bound``.

    A ``cr``-basis cache stores the stopping time mod 3, a ``pdcr``-basis
    cache the stopping time mod 2. Immutable once built; share it freely
    across threads. Build with :func:`build_residue_cache`.
    """

    __slots__ = ("basis", "bound", "modulus", "_packed")

    def __init__(self, basis: MapKind, bound: int, packed: np.ndarray):
        self.basis = basis
        self.bound = bound
        self.modulus = basis_modulus(basis)
        packed.setflags(write=False)
        self._packed = packed

    @property
    def nbytes(self) -> int:
        return self._packed.nbytes

    def entry(self, n: int) -> int:
        """Stopping-time residue of a single cached n."""
        if not 1 <= n < self.bound:
            raise ValueError(f"n={n} outside cache range [1, {self.bound})")
        return int((self._packed[n >> 2] >> ((n & 3) << 1)) & 3)

    def entries(self, ns: np.ndarray) -> np.ndarray:
        """Vectorized :meth:`entry` for an array of cached n."""
        if ns.size and not (1 <= int(ns.min()) and int(ns.max()) < self.bound):
            raise ValueError(f"values outside cache range [1, {self.bound})")
        idx = ns.astype(np.int64, copy=False)
        shift = ((idx & 3) << 1).astype(np.uint8)
        return (self._packed[idx >> 2] >> shift) & np.uint8(3)

    def __repr__(self) -> str:
        return f"ResidueCache(basis={self.basis.value}, bound={self.bound})"


def _pack_residues(res: np.ndarray) -> np.ndarray:
    pad = (-len(res)) % 4
    if pad:
        res = np.concatenate([res, np.zeros(pad, dtype=np.uint8)])
    quads = res.reshape(-1, 4)
    return (
        quads[:, 0]
        | (quads[:, 1] << 2)
        | (quads[:, 2] << 4)
        | (quads[:, 3] << 6)
    ).astype(np.uint8)


def _descend_scalar(basis, start, x, steps, floor, scalar_entry, modulus, max_steps):
    """Exact big-int descent used for the rare values that outgrow uint64."""
    step = step_function(basis)
    while x >= floor:
        if steps >= max_steps:
            raise StepBudgetExceeded(start, max_steps)
        try:
            x = step(x)
        except NatOverflowError as e:
            raise NatOverflowError(
                start, f"trajectory of {start} exceeded the 128-bit limit at value {e.n}"
            ) from None
        steps += 1
    return (steps + scalar_entry(x)) % modulus


def _descend_residues(basis, starts, floor, vec_lookup, scalar_entry, max_steps):
    """Stopping-time residues for an array of starts, all >= floor.

    Walks every start under the base map in lockstep until its value drops
    below ``floor``, where ``vec_lookup`` supplies the residue of the landing
    value; the steps taken are added modulo the basis cycle length. Lanes
    whose 3x+1 would no longer fit in uint64 are finished in exact scalar
    arithmetic.
    """
    modulus = basis_modulus(basis)
    out = np.empty(len(starts), dtype=np.uint8)
    x = starts.astype(np.uint64, copy=True)
    pos = np.arange(len(starts), dtype=np.int64)
    is_cr = basis is MapKind.CR
    one = np.uint64(1)
    three = np.uint64(3)
    steps = 0
    while x.size:
        if steps >= max_steps:
            raise StepBudgetExceeded(int(starts[pos].min()), max_steps)
        odd = (x & one).astype(bool)
        big = odd & (x > _U64_ODD_MAX)
        if big.any():
            for p in np.flatnonzero(big):
                out[pos[p]] = _descend_scalar(
                    basis, int(starts[pos[p]]), int(x[p]), steps, floor,
                    scalar_entry, modulus, max_steps,
                )
            keep = ~big
            x = x[keep]
            pos = pos[keep]
            odd = odd[keep]
        if is_cr:
            x = np.where(odd, x * three + one, x >> one)
        else:
            x = np.where(odd, (x * three + one) >> one, x >> one)
        steps += 1
        below = x < floor
        if below.any():
            carry = steps % modulus
            out[pos[below]] = (vec_lookup(x[below]) + carry) % modulus
            keep = ~below
            x = x[keep]
            pos = pos[keep]
    return out


def build_residue_cache(
    basis: MapKind, bound: int, max_steps: int = DEFAULT_STEP_BUDGET
) -> ResidueCache:
    """Precompute stopping-time residues for every n in [1, bound).

    Built in ascending blocks: each entry walks the base map only until its
    value drops below already-computed territory, then extends that entry by
    the steps taken (the stopping time is additive along a trajectory).
    Trajectories are free to climb far above ``bound`` in the process.
    """
    basis_modulus(basis)  # validates the basis
    if not isinstance(bound, int) or isinstance(bound, bool) or bound < 2:
        raise ValueError(f"cache bound must be an integer >= 2, got {bound!r}")
    modulus = basis_modulus(basis)
    step = step_function(basis)
    res = np.zeros(bound, dtype=np.uint8)

    # scalar prefix: evens extend n/2 directly, odds descend below n
    for n in range(2, min(bound, _SCALAR_WARMUP)):
        if n & 1 == 0:
            res[n] = (1 + res[n >> 1]) % modulus
            continue
        x = n
        k = 0
        while x >= n:
            if k >= max_steps:
                raise StepBudgetExceeded(n, max_steps)
            x = step(x)
            k += 1
        res[n] = (k + res[x]) % modulus

    # vector blocks; b <= 2a keeps every even retiring after a single halving
    a = _SCALAR_WARMUP
    while a < bound:
        b = min(bound, 2 * a, a + _MAX_BLOCK)
        starts = np.arange(a, b, dtype=np.uint64)
        res[a:b] = _descend_residues(
            basis,
            starts,
            floor=a,
            vec_lookup=lambda v: res[v.astype(np.int64)],
            scalar_entry=lambda v: int(res[v]),
            max_steps=max_steps,
        )
        a = b
    return ResidueCache(basis, bound, _pack_residues(res))


def classify_fast(
    map_kind: MapKind,
    n: int,
    cache: ResidueCache,
    max_steps: int = DEFAULT_STEP_BUDGET,
) -> ClassificationOutcome:
    """Classify via the stopping-time residue, using the cache.

    Numbers below the cache bound answer in O(1); larger ones iterate the
    base map only until they descend into the cache, each step advancing the
    residue by one in the basis modulus.
    """
    basis = basis_for(map_kind)
    if cache.basis is not basis:
        raise ValueError(
            f"cache basis {cache.basis.value} does not match map {map_kind.value}"
        )
    validate_nat(n)
    if n < cache.bound:
        residue = cache.entry(n)
    else:
        step = step_function(basis)
        x = n
        k = 0
        while x >= cache.bound:
            if k >= max_steps:
                raise StepBudgetExceeded(n, max_steps)
            try:
                x = step(x)
            except NatOverflowError as e:
                raise NatOverflowError(
                    n, f"trajectory of {n} exceeded the 128-bit limit at value {e.n}"
                ) from None
            k += 1
        residue = (k + cache.entry(x)) % cache.modulus
    return ClassificationOutcome(residue_to_label(map_kind, residue), None, "fast")


def verify_range(
    map_kind: MapKind,
    lo: int,
    hi: int,
    cache: ResidueCache,
    max_steps: int = DEFAULT_STEP_BUDGET,
) -> list[int]:
    """Every n in [lo, hi] whose fast and direct labels disagree.

    Expected empty. An n where either route fails (budget, overflow) is
    reported as a mismatch rather than skipped.
    """
    validate_nat(lo)
    validate_nat(hi)
    if lo > hi:
        raise ValueError(f"empty range [{lo}, {hi}]")
    mismatches = []
    for n in range(lo, hi + 1):
        try:
            fast = classify_fast(map_kind, n, cache, max_steps)
            direct = classify_direct(map_kind, n, max_steps)
        except (NatOverflowError, StepBudgetExceeded):
            mismatches.append(n)
            continue
        if fast.label is not direct.label:
            mismatches.append(n)
    return mismatches
