#!/usr/bin/env python3
"""The four step maps and what their trajectories look like.

The base map cr sends odd n to 3n+1 and even n to n/2. Because 3n+1 is
always even for odd n, the accelerated map pdcr folds that forced halving
into the odd branch: odd n goes straight to (3n+1)/2. Composing cr three
times (cr3) or pdcr twice (pdcr2) produces maps with honest fixed points,
which is what the classifier and census modules are built on.
"""

from collatz_census import MapKind, Termination, cr3_step, cr_step, iterate, pdcr_step

print("single steps")
for n in (1, 2, 3, 6, 7, 27):
    print(f"  cr({n}) = {cr_step(n):>3}    pdcr({n}) = {pdcr_step(n):>3}")

print("\nbase-map trajectories end at 1 (then they would cycle 1 -> 4 -> 2)")
for n in (3, 6, 7):
    trajectory = iterate(MapKind.CR, n, max_steps=1000)
    print(f"  cr from {n}: {' '.join(map(str, trajectory.values))}")

print("\nthe accelerated map walks the same ground in fewer steps")
for n in (3, 7):
    trajectory = iterate(MapKind.PDCR, n, max_steps=1000)
    print(f"  pdcr from {n}: {' '.join(map(str, trajectory.values))}")

print("\ncomposite maps stop by genuinely repeating a value")
for n in (4, 8, 3, 27):
    trajectory = iterate(MapKind.CR3, n, max_steps=1000)
    print(
        f"  cr3 from {n}: {' '.join(map(str, trajectory.values))}"
        f"   ({trajectory.terminated.value})"
    )

print("\ncr3 has exactly three fixed points, pdcr2 exactly two (scan to 10^5)")
fixed_cr3 = [n for n in range(1, 10**5 + 1) if cr3_step(n) == n]
print(f"  cr3 fixed points: {fixed_cr3}")

print("\neverything is budget-guarded; exhausting the budget is an outcome")
trajectory = iterate(MapKind.CR, 27, max_steps=10)
assert trajectory.terminated is Termination.BUDGET_EXHAUSTED
print(f"  cr from 27 with budget 10: stopped after {trajectory.steps} steps")
