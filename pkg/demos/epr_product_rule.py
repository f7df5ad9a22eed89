"""
Product rule failure
====================

A singlet post-selected with particle 1 up along z and particle 2 up along x.
Both factors are certain to read -1, their product is certain to read -1 too,
so (-1)(-1) is not the certain value of the product.
"""

from postsel import catalog, qcore, tsvf

e = catalog.epr_pair()
print(f"<post|pre> = {tsvf.TwoStateVector(e.pre, e.post).overlap.real:+.3f}")

observables = {
    "sz(1)": qcore.sz(0),
    "sx(2)": qcore.sx(1),
    "sz(1) sx(2)": qcore.sz(0) * qcore.sx(1),
}
certain = {}
for name, op in observables.items():
    certain[name] = tsvf.check_certainty(e.tsv, op)
    wv = tsvf.weak_value(e.tsv, op).value.real
    print(f"{name:12s} certain value {certain[name]:+.0f}   weak value {wv:+.3f}")

print("product of certain values:", certain["sz(1)"] * certain["sx(2)"])
print("certain value of product: ", certain["sz(1) sx(2)"])
