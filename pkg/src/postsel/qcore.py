"""Complex linear algebra over N two-level sites.

Bit convention: basis index ``i`` encodes site ``k`` in bit ``k`` (site 0 is the
least significant bit). Bit value 0 is ``|up_z>`` / box ``A``, bit value 1 is
``|down_z>`` / box ``B``.

Operators are kept in structured form (:class:`OperatorSum`, a weighted sum of
tensor products of single-site 2x2 matrices) and applied site by site in
``O(terms * 2**N)``. :func:`dense_matrix` builds the full Kronecker matrix and
serves only as an independent check, capped at 12 sites.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from numbers import Number
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    IndexOutOfRange,
    NotHermitian,
    NotUnitary,
    TooLarge,
    ZeroVector,
)

HERMITIAN_TOL = 1e-10
UNITARY_TOL = 1e-12
DENSE_MAX_SITES = 12
STRUCTURED_MAX_SITES = 20

ID2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PROJ0 = np.array([[1, 0], [0, 0]], dtype=complex)
PROJ1 = np.array([[0, 0], [0, 1]], dtype=complex)

_S2 = 1 / np.sqrt(2)
UP_Z = np.array([1, 0], dtype=complex)
DOWN_Z = np.array([0, 1], dtype=complex)
UP_X = np.array([_S2, _S2], dtype=complex)
DOWN_X = np.array([_S2, -_S2], dtype=complex)
UP_Y = np.array([_S2, 1j * _S2], dtype=complex)
DOWN_Y = np.array([_S2, -1j * _S2], dtype=complex)

# Storage-basis -> box-label unitaries. ``U @ |up_axis>`` is box A (bit 0).
# The y map carries the relative phase that makes up_z -> (A - iB)/sqrt2 and
# down_z -> (B - iA)/sqrt2.
Y_TO_BOX = np.array([[1, -1j], [-1j, 1]], dtype=complex) * _S2
X_TO_BOX = np.array([[1, 1], [1, -1]], dtype=complex) * _S2
Z_TO_BOX = ID2

Matrix2 = tuple[tuple[complex, complex], tuple[complex, complex]]


def _as_matrix2(m) -> Matrix2:
    a = np.asarray(m, dtype=complex)
    if a.shape != (2, 2):
        raise DimensionMismatch(f"expected a 2x2 matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return ((complex(a[0, 0]), complex(a[0, 1])), (complex(a[1, 0]), complex(a[1, 1])))


# ---------------------------------------------------------------------------
# states
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class StateVector:
    """Amplitudes over the ``2**n_sites`` computational basis.

    The constructor does not normalize; use :func:`make_state` or
    :func:`normalize` for that. Outputs of :func:`apply` are deliberately left
    unnormalized.
    """

    n_sites: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.n_sites < 1:
            raise ValueError("n_sites must be >= 1")
        amps = np.array(self.amplitudes, dtype=complex).ravel()
        if amps.shape[0] != 2**self.n_sites:
            raise DimensionMismatch(
                f"{amps.shape[0]} amplitudes for {self.n_sites} sites (need {2**self.n_sites})"
            )
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return 2**self.n_sites

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def __len__(self) -> int:
        return self.dim

    def __getitem__(self, index: int) -> complex:
        return complex(self.amplitudes[index])

    def allclose(self, other: "StateVector", atol: float = 1e-12) -> bool:
        return self.n_sites == other.n_sites and bool(
            np.max(np.abs(self.amplitudes - other.amplitudes)) <= atol
        )

    def __repr__(self) -> str:
        nz = np.flatnonzero(np.abs(self.amplitudes) > 1e-15)
        shown = ", ".join(f"{i}: {self.amplitudes[i]:.6g}" for i in nz[:8])
        more = ", ..." if len(nz) > 8 else ""
        return f"StateVector(n_sites={self.n_sites}, {{{shown}{more}}})"


def normalize(s: StateVector) -> StateVector:
    n = s.norm
    if n <= 1e-300:
        raise ZeroVector("cannot normalize the zero vector")
    return StateVector(s.n_sites, s.amplitudes / n)


def make_state(n_sites: int, entries: Iterable[tuple[int, complex]]) -> StateVector:
    """Normalized superposition of basis states.

    ``entries`` is an iterable of ``(basis_index, amplitude)``; duplicate indices
    are summed before normalization.

    >>> make_state(2, [(0, 1), (3, 1)]).amplitudes.round(4)
    array([0.7071+0.j, 0.    +0.j, 0.    +0.j, 0.7071+0.j])
    """
    if n_sites < 1:
        raise ValueError("n_sites must be >= 1")
    if n_sites > STRUCTURED_MAX_SITES:
        raise TooLarge(f"n_sites={n_sites} exceeds {STRUCTURED_MAX_SITES}")
    dim = 2**n_sites
    amps = np.zeros(dim, dtype=complex)
    for index, amp in entries:
        if not 0 <= index < dim:
            raise IndexOutOfRange(f"basis index {index} not in [0, {dim})")
        amps[index] += complex(amp)
    if np.max(np.abs(amps), initial=0.0) == 0.0:
        raise ZeroVector("all entries cancel")
    return normalize(StateVector(n_sites, amps))


def product_state(*kets: Sequence[complex]) -> StateVector:
    """Tensor product of single-site kets; the first argument is site 0. Not normalized."""
    if not kets:
        raise ValueError("need at least one site")
    out = np.array([1.0 + 0j])
    for k in kets:
        k = np.asarray(k, dtype=complex)
        if k.shape != (2,):
            raise DimensionMismatch("single-site kets must have length 2")
        # later sites are more significant
        out = np.kron(k, out)
    return StateVector(len(kets), out)


def basis_index(bits: Sequence[int]) -> int:
    """Index of the basis state with ``bits[k]`` on site ``k``."""
    return sum(int(b) << k for k, b in enumerate(bits))


def inner(bra: StateVector, ket: StateVector) -> complex:
    """``<bra|ket>``, conjugate-linear in ``bra``."""
    if bra.n_sites != ket.n_sites:
        raise DimensionMismatch(f"{bra.n_sites} vs {ket.n_sites} sites")
    return complex(np.vdot(bra.amplitudes, ket.amplitudes))


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LocalOperator:
    """A 2x2 matrix acting on one site. ``label`` is only used for printing."""

    matrix: Matrix2
    site: int
    label: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "matrix", _as_matrix2(self.matrix))
        if self.site < 0:
            raise IndexOutOfRange(f"negative site {self.site}")

    @property
    def array(self) -> np.ndarray:
        return np.array(self.matrix, dtype=complex)


Term = tuple[complex, tuple[LocalOperator, ...]]


@dataclass(frozen=True)
class OperatorSum:
    """Weighted sum of tensor products of :class:`LocalOperator` factors.

    An empty factor tuple is the identity. Factors inside a term are sorted by
    site and must not share a site.
    """

    terms: tuple[Term, ...] = field(default=())

    def __post_init__(self):
        if len(self.terms) == 0:
            raise ValueError("OperatorSum needs at least one term")
        clean = []
        for coeff, factors in self.terms:
            factors = tuple(sorted(factors, key=lambda f: f.site))
            sites = [f.site for f in factors]
            if len(set(sites)) != len(sites):
                raise ValueError(f"factors share a site within one term: {sites}")
            c = complex(coeff)
            if not np.isfinite(c):
                raise ValueError("coefficients must be finite")
            clean.append((c, factors))
        object.__setattr__(self, "terms", tuple(clean))

    @classmethod
    def identity(cls, coeff: complex = 1.0) -> "OperatorSum":
        return cls(((coeff, ()),))

    @classmethod
    def local(cls, matrix, site: int, label: str | None = None) -> "OperatorSum":
        return cls(((1.0, (LocalOperator(matrix, site, label),)),))

    @property
    def max_site(self) -> int:
        return max((f.site for _, fs in self.terms for f in fs), default=-1)

    def __add__(self, other):
        if isinstance(other, Number):
            other = OperatorSum.identity(other)
        if not isinstance(other, OperatorSum):
            return NotImplemented
        return OperatorSum(self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self):
        return OperatorSum(tuple((-c, fs) for c, fs in self.terms))

    def __sub__(self, other):
        if isinstance(other, Number):
            other = OperatorSum.identity(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Number):
            return OperatorSum(tuple((c * other, fs) for c, fs in self.terms))
        if not isinstance(other, OperatorSum):
            return NotImplemented
        terms = []
        for c1, f1 in self.terms:
            for c2, f2 in other.terms:
                terms.append((c1 * c2, _merge_factors(f1, f2)))
        return OperatorSum(tuple(terms))

    def __rmul__(self, other):
        if isinstance(other, Number):
            return self * other
        return NotImplemented


def _merge_factors(left, right) -> tuple[LocalOperator, ...]:
    by_site = {f.site: f for f in left}
    for f in right:
        if f.site in by_site:
            g = by_site[f.site]
            by_site[f.site] = LocalOperator(g.array @ f.array, f.site)
        else:
            by_site[f.site] = f
    return tuple(by_site[s] for s in sorted(by_site))


def sx(site: int) -> OperatorSum:
    return OperatorSum.local(SX, site, "sx")


def sy(site: int) -> OperatorSum:
    return OperatorSum.local(SY, site, "sy")


def sz(site: int) -> OperatorSum:
    return OperatorSum.local(SZ, site, "sz")


def ident(site: int) -> OperatorSum:
    return OperatorSum.local(ID2, site, "I")


def box_projector(site: int, box: str, to_box=None) -> OperatorSum:
    """Projector onto box ``A`` or ``B`` at ``site``.

    ``to_box`` maps the storage basis of that site into box labels (identity
    when the state is already stored in box language).
    """
    if box not in ("A", "B"):
        raise ValueError(f"box must be 'A' or 'B', got {box!r}")
    p = PROJ0 if box == "A" else PROJ1
    if to_box is not None:
        u = np.asarray(to_box, dtype=complex)
        p = u.conj().T @ p @ u
    return OperatorSum.local(p, site, "P" + box)


def proj_a(site: int, to_box=None) -> OperatorSum:
    return box_projector(site, "A", to_box)


def proj_b(site: int, to_box=None) -> OperatorSum:
    return box_projector(site, "B", to_box)


def product(ops: Iterable[OperatorSum]) -> OperatorSum:
    out = OperatorSum.identity()
    for op in ops:
        out = out * op
    return out


def _check_sites(op: OperatorSum, n_sites: int) -> None:
    if op.max_site >= n_sites:
        raise DimensionMismatch(f"operator touches site {op.max_site} but state has {n_sites} sites")


def _apply_local(psi: np.ndarray, matrix: np.ndarray, site: int, n_sites: int) -> np.ndarray:
    axis = n_sites - 1 - site
    out = np.tensordot(matrix, psi, axes=([1], [axis]))
    return np.moveaxis(out, 0, axis)


def apply(op: OperatorSum, s: StateVector) -> StateVector:
    """``op |s>`` on the structured path. The result is not normalized."""
    _check_sites(op, s.n_sites)
    n = s.n_sites
    shape = (2,) * n
    base = s.amplitudes.reshape(shape)
    acc = np.zeros(shape, dtype=complex)
    for coeff, factors in op.terms:
        psi = base
        for f in factors:
            psi = _apply_local(psi, f.array, f.site, n)
        acc += coeff * psi
    return StateVector(n, acc.ravel())


def expectation_between(bra: StateVector, op: OperatorSum, ket: StateVector) -> complex:
    """``<bra|op|ket>`` via the structured path."""
    return inner(bra, apply(op, ket))


def site_basis_change(s: StateVector, site: int, unitary) -> StateVector:
    u = np.asarray(unitary, dtype=complex)
    if u.shape != (2, 2):
        raise DimensionMismatch("unitary must be 2x2")
    if np.max(np.abs(u.conj().T @ u - ID2)) > UNITARY_TOL:
        raise NotUnitary("matrix is not unitary within 1e-12")
    if not 0 <= site < s.n_sites:
        raise IndexOutOfRange(f"site {site} not in [0, {s.n_sites})")
    psi = _apply_local(s.amplitudes.reshape((2,) * s.n_sites), u, site, s.n_sites)
    return StateVector(s.n_sites, psi.ravel())


def all_sites_basis_change(s: StateVector, unitaries: Sequence) -> StateVector:
    if len(unitaries) != s.n_sites:
        raise DimensionMismatch("need one unitary per site")
    for k, u in enumerate(unitaries):
        s = site_basis_change(s, k, u)
    return s


# ---------------------------------------------------------------------------
# dense oracle path
# ---------------------------------------------------------------------------


def dense_matrix(op: OperatorSum, n_sites: int) -> np.ndarray:
    """Full ``2**n x 2**n`` matrix of ``op`` by Kronecker products."""
    if n_sites > DENSE_MAX_SITES:
        raise TooLarge(f"dense path capped at {DENSE_MAX_SITES} sites, got {n_sites}")
    _check_sites(op, n_sites)
    dim = 2**n_sites
    out = np.zeros((dim, dim), dtype=complex)
    for coeff, factors in op.terms:
        per_site = [ID2] * n_sites
        for f in factors:
            per_site[f.site] = f.array
        m = np.ones((1, 1), dtype=complex)
        for k in range(n_sites - 1, -1, -1):
            m = np.kron(m, per_site[k])
        out += coeff * m
    return out


def _as_dense(op, n_sites: int) -> np.ndarray:
    if isinstance(op, OperatorSum):
        return dense_matrix(op, n_sites)
    m = np.asarray(op, dtype=complex)
    if m.shape != (2**n_sites, 2**n_sites):
        raise DimensionMismatch(f"matrix shape {m.shape} does not match {n_sites} sites")
    return m


def is_hermitian(op, n_sites: int, tol: float = HERMITIAN_TOL) -> bool:
    m = _as_dense(op, n_sites)
    return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= tol)


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Distinct real eigenvalues (ascending) with their dense eigenprojectors."""

    n_sites: int
    eigenvalues: tuple[float, ...]
    projectors: tuple[np.ndarray, ...]

    def __iter__(self) -> Iterator[tuple[float, np.ndarray]]:
        return iter(zip(self.eigenvalues, self.projectors))

    def __len__(self) -> int:
        return len(self.eigenvalues)

    def reconstruct(self) -> np.ndarray:
        return sum(o * p for o, p in self)

    @property
    def ranks(self) -> tuple[int, ...]:
        return tuple(int(round(np.trace(p).real)) for p in self.projectors)


def eigendecompose(op, n_sites: int, degeneracy_tol: float = 1e-8) -> SpectralDecomposition:
    """Spectral decomposition of a Hermitian operator (OperatorSum or dense matrix).

    Eigenvalues closer than ``degeneracy_tol`` are merged into one eigenspace.
    """
    if n_sites > DENSE_MAX_SITES:
        raise TooLarge(f"eigendecomposition capped at {DENSE_MAX_SITES} sites")
    m = _as_dense(op, n_sites)
    if np.max(np.abs(m - m.conj().T), initial=0.0) > HERMITIAN_TOL:
        raise NotHermitian("operator is not Hermitian within 1e-10")
    m = (m + m.conj().T) / 2
    w, v = np.linalg.eigh(m)
    groups: list[list[int]] = []
    for i in range(len(w)):
        if groups and w[i] - w[groups[-1][-1]] <= degeneracy_tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    values, projs = [], []
    for g in groups:
        vecs = v[:, g]
        values.append(float(np.mean(w[g])))
        projs.append(vecs @ vecs.conj().T)
    for p in projs:
        p.setflags(write=False)
    return SpectralDecomposition(n_sites, tuple(values), tuple(projs))
