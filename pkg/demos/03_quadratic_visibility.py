# -*- coding: utf-8 -*-
"""
Visible elements of Sha over a quadratic field
==============================================

The full quadratic-twist pipeline on the conductor 52/364 pair: twist by 59,
check every hypothesis, and conclude a visible subgroup of order 25 in
Sha(E1/Q(sqrt 59)).
"""

import json

from shavis import load_bundled_scenario, load_dataset, verify_scenario

dataset = load_dataset()
cert = verify_scenario(load_bundled_scenario("ex1_quadratic_59"), dataset)

###############################################################################
# Every labeled hypothesis gets a verdict; nothing is silently skipped.

for v in cert.verdicts:
    print(f"{v.id:<6} {v.status}")
print("\noverall:", cert.overall)
print("conclusion:", cert.conclusion["statement"])
print("kernel bound:", cert.conclusion["kernel_bound"])

###############################################################################
# The certificate records which rank records it consumed and their provenance
# tier; ranks are ingested facts, not things this package proves.

for rec in cert.rank_provenance:
    print("rank record:", rec["curve"], "rank", rec["rank"], f"({rec['provenance']})")

###############################################################################
# Serialized certificates are deterministic, so re-runs are byte-identical.

blob = json.dumps(cert.to_json(), sort_keys=True)
rerun = json.dumps(
    verify_scenario(load_bundled_scenario("ex1_quadratic_59"), dataset).to_json(),
    sort_keys=True,
)
print("\nbyte-identical re-run:", blob == rerun)
