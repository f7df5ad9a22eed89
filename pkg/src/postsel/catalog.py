"""Named pre-/post-selected states: GHZ boxes, Hardy, N boxes, EPR, single particle.

States written in box language are stored directly in the computational basis
with ``A`` on bit 0 and ``B`` on bit 1. States written in spin language are
stored in the ``z`` basis; each entry carries per-site :class:`BasisLabel`
metadata saying which local basis plays the role of boxes ``A``/``B``.

Phase convention: every catalog state is rotated so that its first nonzero
amplitude is real and positive, where "first" means lexicographic order of the
bitstring written site 0 first (``|s0 s1 ... s_{N-1}>``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import qcore
from .errors import BadN, UnknownScenario
from .qcore import DOWN_Z, UP_X, UP_Z, StateVector, product_state
from .tsvf import GeneralizedTwoStateVector, TwoStateVector

BOX_A = UP_Z
BOX_B = DOWN_Z


@dataclass(frozen=True, eq=False)
class BasisLabel:
    """How one stored site relates to box language.

    ``to_box`` maps storage amplitudes of the site into (A, B) amplitudes, or is
    ``None`` when the site has no box meaning (e.g. a spin degree of freedom).
    """

    storage: str
    to_box: np.ndarray | None
    note: str = ""


BOX_SITE = BasisLabel("box", qcore.ID2, "stored in box basis")
SPIN_SITE = BasisLabel("spin-z", None, "spin, no box meaning")


@dataclass(frozen=True, eq=False)
class CatalogEntry:
    name: str
    n_sites: int
    pre: StateVector
    post: StateVector
    basis_labels: tuple[BasisLabel, ...]

    def __post_init__(self):
        if self.pre.n_sites != self.n_sites or self.post.n_sites != self.n_sites:
            raise ValueError("pre and post must have n_sites sites")
        if len(self.basis_labels) != self.n_sites:
            raise ValueError("need one basis label per site")

    @property
    def tsv(self) -> TwoStateVector:
        return TwoStateVector(self.pre, self.post)

    @property
    def to_box(self) -> tuple[np.ndarray | None, ...]:
        return tuple(b.to_box for b in self.basis_labels)


def lexicographic_order(n_sites: int) -> np.ndarray:
    """Basis indices sorted by their bitstring written site 0 first."""
    idx = np.arange(2**n_sites)
    rev = np.zeros_like(idx)
    for k in range(n_sites):
        rev |= ((idx >> k) & 1) << (n_sites - 1 - k)
    return idx[np.argsort(rev)]


def canonical_phase(s: StateVector) -> StateVector:
    amps = s.amplitudes
    scale = np.max(np.abs(amps))
    for i in lexicographic_order(s.n_sites):
        a = amps[i]
        if abs(a) > 1e-12 * scale:
            return StateVector(s.n_sites, amps * (abs(a) / a))
    return s


def _finish(s: StateVector) -> StateVector:
    return canonical_phase(qcore.normalize(s))


def _check_n(n: int, minimum: int) -> None:
    if int(n) != n or n < minimum:
        raise BadN(f"N must be an integer >= {minimum}, got {n}")
    if n > qcore.STRUCTURED_MAX_SITES:
        raise BadN(f"N must be <= {qcore.STRUCTURED_MAX_SITES}, got {n}")


def ghz_pre(n: int) -> StateVector:
    """``(prod |up_z> + prod |down_z>) / sqrt 2`` on ``n`` spins."""
    _check_n(n, 2)
    return _finish(qcore.make_state(n, [(0, 1), (2**n - 1, 1)]))


def all_up_x_post(n: int) -> StateVector:
    """``prod |up_x>``."""
    _check_n(n, 1)
    return _finish(product_state(*[UP_X] * n))


def ghz_spin_pair(n: int = 3) -> CatalogEntry:
    """GHZ pre-selection and all-``up_x`` post-selection in spin language."""
    labels = tuple(
        BasisLabel("spin-z", qcore.Y_TO_BOX, "|up_y> = |A>, |down_y> = |B>") for _ in range(n)
    )
    return CatalogEntry("ghz", n, ghz_pre(n), all_up_x_post(n), labels)


def ghz_boxes_pair(n: int = 3) -> CatalogEntry:
    """GHZ two-state vector rewritten for ``n`` particles in boxes A/B.

    Uses ``|up_y> = |A>``, ``|down_y> = |B>``; up to normalization the pre-state
    is ``prod(|A> - i|B>) + prod(|B> - i|A>)`` and the post-state ``prod(<A| + <B|)``.
    """
    _check_n(n, 2)
    pre = qcore.StateVector(
        n,
        product_state(*[BOX_A - 1j * BOX_B] * n).amplitudes
        + product_state(*[BOX_B - 1j * BOX_A] * n).amplitudes,
    )
    post = product_state(*[BOX_A + BOX_B] * n)
    labels = tuple(BasisLabel("box", qcore.ID2, "|up_y> = |A>, |down_y> = |B>") for _ in range(n))
    return CatalogEntry("ghz-boxes", n, _finish(pre), _finish(post), labels)


def hardy_projection_prep() -> StateVector:
    """Unentangled ``(|A>+|B>)(|A>+|B>)/2`` that precedes projecting out ``|AA>``."""
    return _finish(product_state(BOX_A + BOX_B, BOX_A + BOX_B))


def project_out(s: StateVector, index: int) -> StateVector:
    """Remove one basis component and renormalize."""
    amps = s.amplitudes.copy()
    amps[index] = 0
    return _finish(StateVector(s.n_sites, amps))


def hardy_pair() -> CatalogEntry:
    # |AB> is index 2 (site 1 in B), |BA> is index 1
    pre = qcore.make_state(2, [(2, 1), (1, 1), (3, 1)])
    post = product_state(BOX_A - BOX_B, BOX_A - BOX_B)
    return CatalogEntry("hardy", 2, _finish(pre), _finish(post), (BOX_SITE, BOX_SITE))


def n_box_pair(n: int = 3) -> CatalogEntry:
    """N-particle version of the Hardy pair.

    Pre: ``[(N-1) prod|B> + sum_n |A>_n prod_{j!=n}|B>_j] / sqrt(N^2-N+1)``;
    post: ``prod (|A> - |B>) / sqrt(2^N)``.
    """
    _check_n(n, 2)
    all_b = 2**n - 1
    entries = [(all_b, n - 1)] + [(all_b ^ (1 << k), 1) for k in range(n)]
    pre = qcore.make_state(n, entries)
    post = product_state(*[BOX_A - BOX_B] * n)
    return CatalogEntry("n-boxes", n, _finish(pre), _finish(post), (BOX_SITE,) * n)


def epr_pair() -> CatalogEntry:
    """Singlet pre-selection, ``|up_x>_1 |up_z>_2`` post-selection.

    Box dictionary: particle 1 ``up_z = A``; particle 2 ``up_x = A``.
    """
    pre = qcore.StateVector(
        2, product_state(UP_Z, DOWN_Z).amplitudes - product_state(DOWN_Z, UP_Z).amplitudes
    )
    post = product_state(UP_X, UP_Z)
    labels = (
        BasisLabel("spin-z", qcore.Z_TO_BOX, "|up_z> = |A>, |down_z> = |B>"),
        BasisLabel("spin-z", qcore.X_TO_BOX, "|up_x> = |A>, |down_x> = |B>"),
    )
    return CatalogEntry("epr", 2, _finish(pre), _finish(post), labels)


def single_particle_pair() -> CatalogEntry:
    """One particle: site 0 is the box (A/B), site 1 its spin.

    Pre ``(|A>|down_z> - |B>|up_z>)/sqrt2``, post ``(|A>+|B>)|up_z>/sqrt2``.
    """
    pre = qcore.StateVector(
        2, product_state(BOX_A, DOWN_Z).amplitudes - product_state(BOX_B, UP_Z).amplitudes
    )
    post = product_state(BOX_A + BOX_B, UP_Z)
    return CatalogEntry("single-particle", 2, _finish(pre), _finish(post), (BOX_SITE, SPIN_SITE))


def generalized_tsv_catalog() -> GeneralizedTwoStateVector:
    """Two-term generalized two-state vector for the field-only-in-A effect.

    Site 0 is the box, site 1 the spin. Terms are stored unnormalized: ``(<A|+<B|)<up_z| (|A>|down_z> + |B>|up_z>)`` plus
    ``(<A|+<B|)<down_z| (|A>|up_z> + |B>|down_z>)``, both with weight 1.
    """
    a, b = BOX_A, BOX_B
    post1 = product_state(a + b, UP_Z)
    pre1 = StateVector(
        2, product_state(a, DOWN_Z).amplitudes + product_state(b, UP_Z).amplitudes
    )
    post2 = product_state(a + b, DOWN_Z)
    pre2 = StateVector(
        2, product_state(a, UP_Z).amplitudes + product_state(b, DOWN_Z).amplitudes
    )
    return GeneralizedTwoStateVector(((1.0, post1, pre1), (1.0, post2, pre2)))


_BUILDERS = {
    "ghz-boxes": ghz_boxes_pair,
    "ghz": ghz_spin_pair,
    "hardy": hardy_pair,
    "n-boxes": n_box_pair,
    "epr": epr_pair,
    "single-particle": single_particle_pair,
    "generalized-tsv": generalized_tsv_catalog,
}
_TAKES_N = {"ghz-boxes", "ghz", "n-boxes"}

CATALOG_NAMES = tuple(_BUILDERS)


def lookup(name: str, n: int | None = None):
    """Catalog entry (or generalized two-state vector) by name."""
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise UnknownScenario(f"unknown catalog entry {name!r}; known: {', '.join(CATALOG_NAMES)}")
    if name in _TAKES_N:
        return builder(3 if n is None else n)
    return builder()


def box_maps(name: str, n: int | None = None) -> tuple[np.ndarray | None, ...]:
    """Per-site storage->box maps for a catalog name (box sites for the generalized entry)."""
    entry = lookup(name, n)
    if isinstance(entry, GeneralizedTwoStateVector):
        return (qcore.ID2, None)
    return entry.to_box
