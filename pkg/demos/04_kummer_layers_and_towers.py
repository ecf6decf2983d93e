# -*- coding: utf-8 -*-
"""
Degree-p layers and p-adic Lie towers
=====================================

Two ways past a bad Tamagawa number: ramify it away in a Kummer layer
K(m^(1/p)), or climb a tower whose decomposition groups are big enough.
"""

from shavis import (
    load_bundled_scenario,
    load_dataset,
    splitting_data,
    kummer_layer,
    verify_scenario,
)
from shavis.fields import TowerDescriptor, decomposition_dimension

dataset = load_dataset()

###############################################################################
# The 176/1232 pair at p = 3: the second curve has split multiplicative
# reduction at 7 with Tamagawa number 3, so the base theorem cannot apply.
# But 7 ramifies fully in M = Q(mu_3)(7^(1/3)):

M = kummer_layer(3, 7)
s7 = splitting_data(M, 7)
print(f"splitting of 7 in {M.describe()}: e = {s7.e}, f = {s7.f}, g = {s7.g}")

cert = verify_scenario(load_bundled_scenario("ex_176_kummer7"), dataset)
print("176/1232:", cert.overall, "->", cert.conclusion["statement"])

###############################################################################
# The 3536 pair in the cyclotomic Z_3-tower: every Tamagawa number is already
# a 3-adic unit, and the tower is unramified away from 3, so the stability
# rule certifies every bad prime.

cert5 = verify_scenario(load_bundled_scenario("ex5_cyclotomic_tower"), dataset)
print("\n3536 pair over the Z_3 tower:", cert5.overall)
for v in cert5.verdicts:
    if v.id.startswith("L.v"):
        print(f"  {v.id}: {v.evidence['branch']}")

###############################################################################
# False-Tate towers trade ramification for Lie dimension: at primes dividing
# m*p the decomposition group is two-dimensional and the local obstruction
# vanishes for cohomological reasons rather than Tamagawa ones.

ft = TowerDescriptor("false_tate", p=3, m=7)
for q in (7, 3, 11):
    print(f"dim G_w over {ft.describe()} at {q}: {decomposition_dimension(ft, q)}")
