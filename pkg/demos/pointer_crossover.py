"""
From weak values to ABL probabilities
=====================================

Sweep the pointer coupling g for the box-A spin observable.  Small g gives a
single shifted bump at g times the weak value; large g separates the eigenvalue
branches and their weights approach the ABL probabilities.  Set CSV to a path
to keep the sweep.
"""

import numpy as np

from postsel import catalog, pointer, qcore, tsvf
from postsel.pointer import PointerConfig

CSV = None

e = catalog.single_particle_pair()
op = qcore.proj_a(0) * qcore.sx(1)
spectral = qcore.eigendecompose(op, 2)
wv = tsvf.weak_value(e.tsv, op).value.real
abl = tsvf.abl_probabilities(e.tsv, spectral.projectors, spectral.eigenvalues, validate=False)
print(f"weak value {wv:+.3f}; ABL {dict((float(k), round(v, 3)) for k, v in abl.outcomes)}")

print(f"{'g/delta':>8s} {'mean_x/g':>10s} {'TV to ABL':>10s}")
rows = []
for g in np.geomspace(1e-3, 1e2, 11):
    res = pointer.simulate_measurement(e.tsv, spectral, PointerConfig.covering(g, spectral.eigenvalues))
    tv = 0.5 * np.abs(res.captured_weights() - abl.probabilities).sum()
    rows.append((g, res.mean_x / g, tv))
    print(f"{g:8.3g} {round(res.mean_x / g, 5) + 0.0:+10.5f} {tv:10.2e}")

if CSV:
    np.savetxt(CSV, rows, delimiter=",", header="g_over_delta,mean_x_over_g,tv_to_abl", comments="")
