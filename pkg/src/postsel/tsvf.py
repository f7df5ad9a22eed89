"""Weak values and ABL probabilities for pre- and post-selected systems."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Literal, Sequence

import numpy as np

from . import qcore
from .errors import (
    BadN,
    DimensionMismatch,
    IncompleteSet,
    NotHermitian,
    NotProjector,
    OrthogonalSelection,
    ZeroDenominator,
)
from .qcore import OperatorSum, StateVector, inner

ORTHOGONAL_TOL = 1e-12
PROJECTOR_TOL = 1e-10
ABL_ZERO_TOL = 1e-14
CERTAINTY_TOL = 1e-10


@dataclass(frozen=True)
class TwoStateVector:
    pre: StateVector
    post: StateVector

    def __post_init__(self):
        if self.pre.n_sites != self.post.n_sites:
            raise DimensionMismatch("pre- and post-selected states must share n_sites")

    @property
    def n_sites(self) -> int:
        return self.pre.n_sites

    @property
    def overlap(self) -> complex:
        """``<post|pre>``."""
        return inner(self.post, self.pre)

    @property
    def postselection_probability(self) -> float:
        return abs(self.overlap) ** 2


@dataclass(frozen=True)
class GeneralizedTwoStateVector:
    """``sum_i alpha_i <post_i| |pre_i>``; kept unnormalized as constructed."""

    terms: tuple[tuple[complex, StateVector, StateVector], ...]

    def __post_init__(self):
        if not self.terms:
            raise ValueError("need at least one term")
        n = self.terms[0][1].n_sites
        for alpha, post, pre in self.terms:
            if post.n_sites != n or pre.n_sites != n:
                raise DimensionMismatch("all terms must share n_sites")
        object.__setattr__(
            self, "terms", tuple((complex(a), post, pre) for a, post, pre in self.terms)
        )

    @property
    def n_sites(self) -> int:
        return self.terms[0][1].n_sites

    @classmethod
    def from_tsv(cls, tsv: TwoStateVector, alpha: complex = 1.0) -> "GeneralizedTwoStateVector":
        return cls(((alpha, tsv.post, tsv.pre),))


@dataclass(frozen=True)
class WeakValueResult:
    value: complex
    numerator: complex
    denominator: complex

    @property
    def real(self) -> float:
        return self.value.real


@dataclass(frozen=True)
class ABLResult:
    outcomes: tuple[tuple[object, float], ...]
    denominator_weight: float

    @property
    def probabilities(self) -> np.ndarray:
        return np.array([p for _, p in self.outcomes])

    def probability(self, label) -> float:
        for lab, p in self.outcomes:
            if lab == label:
                return p
        raise KeyError(label)


def _ratio(num: complex, den: complex) -> WeakValueResult:
    if abs(den) <= ORTHOGONAL_TOL:
        raise OrthogonalSelection(f"|<post|pre>| = {abs(den):.3g} <= {ORTHOGONAL_TOL}")
    return WeakValueResult(num / den, num, den)


def weak_value(tsv: TwoStateVector, observable: OperatorSum) -> WeakValueResult:
    """``<post|O|pre> / <post|pre>``."""
    den = tsv.overlap
    if abs(den) <= ORTHOGONAL_TOL:
        raise OrthogonalSelection(f"|<post|pre>| = {abs(den):.3g} <= {ORTHOGONAL_TOL}")
    num = qcore.expectation_between(tsv.post, observable, tsv.pre)
    return _ratio(num, den)


def weak_value_generalized(
    gtsv: GeneralizedTwoStateVector, observable: OperatorSum
) -> WeakValueResult:
    den = sum((a * inner(post, pre) for a, post, pre in gtsv.terms), 0j)
    if abs(den) <= ORTHOGONAL_TOL:
        raise OrthogonalSelection(f"|sum alpha <post|pre>| = {abs(den):.3g}")
    num = sum(
        (a * qcore.expectation_between(post, observable, pre) for a, post, pre in gtsv.terms), 0j
    )
    return _ratio(num, den)


def _sandwich(post: StateVector, projector, pre: StateVector) -> complex:
    if isinstance(projector, OperatorSum):
        return qcore.expectation_between(post, projector, pre)
    return complex(np.vdot(post.amplitudes, np.asarray(projector) @ pre.amplitudes))


def validate_projectors(projectors: Sequence, n_sites: int) -> None:
    """Raise unless the operators form a complete set of orthogonal projectors."""
    if not projectors:
        raise IncompleteSet("empty projector list")
    dim = 2**n_sites
    total = np.zeros((dim, dim), dtype=complex)
    for j, p in enumerate(projectors):
        m = qcore._as_dense(p, n_sites)
        if np.max(np.abs(m - m.conj().T)) > PROJECTOR_TOL:
            raise NotProjector(f"projector {j} is not Hermitian")
        if np.max(np.abs(m @ m - m)) > PROJECTOR_TOL:
            raise NotProjector(f"projector {j} is not idempotent")
        total += m
    if np.max(np.abs(total - np.eye(dim))) > PROJECTOR_TOL:
        raise IncompleteSet("projectors do not sum to the identity")


def abl_probabilities(
    tsv: TwoStateVector,
    projectors: Sequence,
    labels: Sequence | None = None,
    *,
    validate: bool = True,
) -> ABLResult:
    """Outcome probabilities of one intermediate strong measurement.

    ``P(j) = |<post|P_j|pre>|^2 / sum_k |<post|P_k|pre>|^2``. Projectors may be
    OperatorSums or dense matrices.
    """
    if labels is None:
        labels = list(range(len(projectors)))
    if len(labels) != len(projectors):
        raise ValueError("labels and projectors differ in length")
    if validate:
        validate_projectors(projectors, tsv.n_sites)
    amps = np.array([_sandwich(tsv.post, p, tsv.pre) for p in projectors])
    if np.all(np.abs(amps) <= ABL_ZERO_TOL):
        raise ZeroDenominator("post-selection is impossible given this intermediate measurement")
    weights = np.abs(amps) ** 2
    total = float(weights.sum())
    return ABLResult(tuple(zip(labels, (weights / total).tolist())), total)


def check_certainty(tsv: TwoStateVector, observable) -> float | None:
    """Eigenvalue that a strong measurement of ``observable`` yields with certainty, if any."""
    spectral = qcore.eigendecompose(observable, tsv.n_sites)
    result = abl_probabilities(
        tsv, spectral.projectors, spectral.eigenvalues, validate=False
    )
    for value, p in result.outcomes:
        if p >= 1 - CERTAINTY_TOL:
            return value
    return None


def is_dichotomic(observable, n_sites: int) -> bool:
    return len(qcore.eigendecompose(observable, n_sites)) == 2


Variant = Literal["same-box", "literal-cross-box"]


def interaction_energy_operator(n_sites: int, v: float, variant: Variant) -> OperatorSum:
    """Pair potential between box particles.

    ``same-box``: ``sum_{n<m} V (PA_n PA_m + PB_n PB_m)``.
    ``literal-cross-box``: ``sum_{n!=m} V PA_n PB_m``.
    """
    if n_sites < 2:
        raise BadN("interaction energy needs at least two particles")
    terms = []
    if variant == "same-box":
        for n, m in combinations(range(n_sites), 2):
            terms.append(qcore.proj_a(n) * qcore.proj_a(m) * v)
            terms.append(qcore.proj_b(n) * qcore.proj_b(m) * v)
    elif variant in ("literal-cross-box", "literal"):
        for n in range(n_sites):
            for m in range(n_sites):
                if n != m:
                    terms.append(qcore.proj_a(n) * qcore.proj_b(m) * v)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return OperatorSum(tuple(t for op in terms for t in op.terms))


def interaction_energy_weak_value(
    tsv: TwoStateVector, v: float, variant: Variant = "same-box"
) -> WeakValueResult:
    return weak_value(tsv, interaction_energy_operator(tsv.n_sites, v, variant))


def projector_sum_and_product(tsv: TwoStateVector, box: str = "A") -> tuple[complex, complex]:
    """Weak values of ``sum_n P_box^(n)`` and ``prod_n P_box^(n)``."""
    n = tsv.n_sites
    projs = [qcore.box_projector(k, box) for k in range(n)]
    total = OperatorSum(tuple(t for p in projs for t in p.terms))
    return weak_value(tsv, total).value, weak_value(tsv, qcore.product(projs)).value


def occupation_projectors(n_sites: int, box: str = "A") -> list[OperatorSum]:
    """Projectors onto "exactly k particles in ``box``" for k = 0..n_sites."""
    other = "B" if box == "A" else "A"
    out = []
    for k in range(n_sites + 1):
        terms = []
        for inside in combinations(range(n_sites), k):
            chosen = set(inside)
            op = qcore.product(
                qcore.box_projector(s, box if s in chosen else other) for s in range(n_sites)
            )
            terms.extend(op.terms)
        out.append(OperatorSum(tuple(terms)))
    return out


def pair_box_projectors(k: int, l: int, to_box=None) -> tuple[list[OperatorSum], list[str]]:
    """The four joint box projectors of sites ``k`` and ``l`` with labels AA, AB, BA, BB."""
    projs, labels = [], []
    for a in "AB":
        for b in "AB":
            tk = None if to_box is None else to_box[k]
            tl = None if to_box is None else to_box[l]
            projs.append(qcore.box_projector(k, a, tk) * qcore.box_projector(l, b, tl))
            labels.append(a + b)
    return projs, labels


def require_hermitian(observable, n_sites: int) -> None:
    if not qcore.is_hermitian(observable, n_sites):
        raise NotHermitian("observable is not Hermitian within 1e-10")
