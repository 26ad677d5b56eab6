#!/usr/bin/env python3
"""Representation counts on degree-k spheres: exact tables, shells, growth.

Walks through the counting layer:
  1) exact count tables r_{d,k}(lam) via truncated convolution powers,
     cross-checked against the convolution identity and brute force;
  2) explicit shell enumeration (the lattice points themselves);
  3) the dyadic-block growth fit recovering the exponent l*d/k - 1
     for the joint count in composed dimension 10.

Everything below prints a PASS/FAIL gate so the demo is falsifiable.
Runs in a few seconds.
"""

import itertools
import time

from spherelab import SphereSpec, enumerate_shell, growth_exponent_fit, joint_count, rep_counts
from spherelab._convolve import convolve_trunc


def gate(name, ok, detail=""):
    print(f"{'PASS' if ok else 'FAIL'}  {name}{'  ' + detail if detail else ''}")
    return ok


def main():
    print("=" * 72)
    print("Exact lattice-point counts on spheres  sum |u_i|^k = lam")
    print("=" * 72)

    # --- 1. tables -------------------------------------------------------
    spec = SphereSpec(dim=2, degree=2)
    table = rep_counts(spec, 30)
    print("\nr_{2,2}(lam) for lam = 0..30 (two squares):")
    print(" ", list(table.counts))
    print("  e.g. 25 = 25+0 = 16+9 in", table.count(25), "signed/ordered ways")

    brute = [0] * 31
    for u in itertools.product(range(-6, 7), repeat=2):
        s = u[0] ** 2 + u[1] ** 2
        if s <= 30:
            brute[s] += 1
    ok = gate("table equals brute-force histogram", list(table.counts) == brute)

    # convolution identity: dimensions add under convolution of tables
    t1 = rep_counts(SphereSpec(1, 2), 1000)
    t3 = rep_counts(SphereSpec(3, 2), 1000)
    t4 = rep_counts(SphereSpec(4, 2), 1000)
    conv = convolve_trunc(list(t1.counts), list(t3.counts), 1001)
    ok &= gate("r_{1,2} * r_{3,2} = r_{4,2} exactly on 0..1000", conv == list(t4.counts))

    # --- 2. shells -------------------------------------------------------
    shell = enumerate_shell(SphereSpec(2, 2), 25)
    print("\nShell lam=25 in Z^2 (lexicographic):")
    print(" ", " ".join(str(p) for p in shell.points))
    ok &= gate("shell size equals table count", len(shell.points) == table.count(25))

    cubes = enumerate_shell(SphereSpec(2, 3), 9)
    print("\nShell lam=9, degree 3 (|x|^3 + |y|^3 = 9):")
    print(" ", " ".join(str(p) for p in cubes.points))
    ok &= gate("degree-3 shell is the 8 points (+-1,+-2),(+-2,+-1)", len(cubes.points) == 8)

    # --- 3. joint counts and growth --------------------------------------
    print("\nJoint count N(lam) = r_{l*d,k}(lam), here l=2, d=5, k=2:")
    for lam in (1, 2, 10, 100):
        print(f"  N({lam}) = {joint_count(SphereSpec(5, 2), 2, lam)}")

    t0 = time.time()
    lam_max = 2**16
    big = rep_counts(SphereSpec(10, 2), lam_max)
    report = growth_exponent_fit(big, (2**9, lam_max))
    print(f"\nDimension-10 table to lam = 2^16 built in {time.time() - t0:.1f}s;")
    print(f"  dyadic-block log-log slope = {report.fitted_slope:.4f}"
          f" (clean growth exponent: {report.expected_slope:g})")
    print(f"  residual = {report.residual:.2e}, {report.sample_range}")
    ok &= gate("slope within 0.05 of 4", abs(report.fitted_slope - 4.0) <= 0.05)

    print()
    gate("DEMO VERDICT", ok)
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
