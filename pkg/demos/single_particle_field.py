"""
A particle that is not there, yet acts there
============================================

A spin-1/2 particle is split between boxes A and B, post-selected so that a
strong search of box A never finds it.  Weakly, the spin in box A still has
x-component -1, and a pointer coupled to it drifts to -g.
"""

from postsel import catalog, qcore, tsvf
from postsel.pointer import PointerConfig, simulate_measurement

e = catalog.single_particle_pair()
pa = qcore.proj_a(0)
pa_sx = pa * qcore.sx(1)

print(f"(PA)_w     = {tsvf.weak_value(e.tsv, pa).value.real + 0.0:+.3f}")
print(f"(PA sx)_w  = {tsvf.weak_value(e.tsv, pa_sx).value.real:+.3f}")
abl = tsvf.abl_probabilities(e.tsv, [pa, qcore.proj_b(0)], ["A", "B"])
print(f"strong search of A: P(A) = {abl.probability('A'):.3f}")

spectral = qcore.eigendecompose(pa_sx, 2)
res = simulate_measurement(e.tsv, spectral, PointerConfig(g=0.01))
print(f"pointer with g = 0.01: mean_x / g = {res.mean_x / 0.01:+.5f}")
