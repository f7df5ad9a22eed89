"""
Each particle in A, never both
==============================

Two particles prepared without the |AA> component and post-selected on
(A - B)(A - B).  Looking for either particle alone finds it in A with
certainty, looking for both finds them there together with probability 0.
Weak measurements are consistent with this: the pair occupation of A is 0 and
the pair occupation of B is -1.
"""

from postsel import catalog, qcore, tsvf

e = catalog.hardy_pair()
print("pre :", e.pre.amplitudes.real.round(4))
print("post:", e.post.amplitudes.real.round(4))
print(f"post-selection probability: {e.tsv.postselection_probability:.6f} (1/12 = {1 / 12:.6f})")

for k in (0, 1):
    abl = tsvf.abl_probabilities(e.tsv, [qcore.proj_a(k), qcore.proj_b(k)], ["A", "B"])
    print(f"particle {k} alone:  P(A) = {abl.probability('A'):.3f}")

projs, labels = tsvf.pair_box_projectors(0, 1)
both = tsvf.abl_probabilities(e.tsv, projs, labels)
print("both at once:", {lab: round(p, 3) for lab, p in both.outcomes})

for text, op in [("PA PA", qcore.proj_a(0) * qcore.proj_a(1)),
                 ("PB PB", qcore.proj_b(0) * qcore.proj_b(1)),
                 ("PA PB", qcore.proj_a(0) * qcore.proj_b(1))]:
    print(f"({text})_w = {tsvf.weak_value(e.tsv, op).value.real + 0.0:+.3f}")
