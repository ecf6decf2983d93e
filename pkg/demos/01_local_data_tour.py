# -*- coding: utf-8 -*-
"""
Local reduction data from Tate's algorithm
==========================================

Walks a few curves through the local machinery: invariants, global minimal
models, Kodaira types, conductor exponents and Tamagawa numbers.
"""

from shavis import WeierstrassModel, conductor, invariants, minimal_model, tate_algorithm

###############################################################################
# The two curves of the quadratic worked example. E1 has conductor 52 and E2
# has conductor 364; they share their mod-5 torsion.

E1 = WeierstrassModel.from_list([0, 0, 0, 1, -10])
E2 = WeierstrassModel.from_list([0, 0, 0, -584, 5444])

for name, curve in (("E1", E1), ("E2", E2)):
    inv = invariants(curve)
    n, locals_ = conductor(curve)
    print(f"{name}: disc = {inv.disc}, j = {inv.j}, conductor = {n}")
    for l in locals_:
        print(f"    q = {l.q:>2}: {l.kodaira:>4}  f = {l.f}  c = {l.c}  ({l.reduction_class})")

###############################################################################
# The Tamagawa number of E2 at 7 is 5, which is what obstructs the naive
# visibility argument at p = 5 and forces the detour through a twist.

c7 = tate_algorithm(E2, 7)
print(f"\nE2 at 7: type {c7.kodaira}, Tamagawa number {c7.c}")

###############################################################################
# Minimal models: blow a model up by u = 1/6 and recover the original.

from fractions import Fraction
from shavis.curves import Isomorphism, transform

blown = transform(E1, Isomorphism(Fraction(1, 6)))
recovered, iso = minimal_model(blown)
print(f"\nnon-minimal model  {blown}")
print(f"minimal again      {recovered} via u = {iso.u}")
