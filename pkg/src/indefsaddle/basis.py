"""Dirichlet eigenbasis on boxes and sine-spectral transforms.

Eigenfunctions of the Dirichlet Laplacian on (0,L_1) x ... x (0,L_d) are
products of normalized sines,

    phi_m(x) = prod_i sqrt(2/L_i) * sin(m_i pi x_i / L_i),

with eigenvalues lambda_m = sum_i (m_i pi / L_i)^2.  A field is stored as a
coefficient vector against an enumerated, eigenvalue-sorted slice of this
family.  Grid transforms use the type-I discrete sine transform on the
interior tensor grid x_j = j L/(G+1); synthesis and analysis are exact mutual
inverses there, and the uniform-weight quadrature

    integral f  ~=  prod_i (L_i/(G_i+1)) * sum_j f(x_j)

is exact for products of two resolved modes (such a product extends to an
even trigonometric polynomial sampled over a full period, and all of the
integrands used in this package vanish on the boundary).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np
from scipy.fft import dstn


@dataclass(frozen=True)
class BoxDomain:
    """Axis-aligned box (0,L_1) x ... x (0,L_d) with homogeneous Dirichlet data."""

    lengths: tuple[float, ...]

    def __post_init__(self) -> None:
        lengths = tuple(float(L) for L in self.lengths)
        object.__setattr__(self, "lengths", lengths)
        if not 1 <= len(lengths) <= 3:
            raise ValueError(f"dim must be 1, 2 or 3, got {len(lengths)}")
        if any((not math.isfinite(L)) or L <= 0.0 for L in lengths):
            raise ValueError(f"side lengths must be positive and finite, got {lengths}")

    @property
    def dim(self) -> int:
        return len(self.lengths)


@dataclass(frozen=True)
class EigenPair:
    """One Laplacian eigenpair: multi-index, eigenvalue, and 1-based rank."""

    index: tuple[int, ...]
    value: float
    rank: int


class SineBasis:
    """The first n Dirichlet eigenpairs of a box, sorted by eigenvalue.

    Ties are broken lexicographically in the multi-index, so enumeration is
    deterministic.  Instances are immutable; equality and hashing go through
    the (lengths, multi-index) content so equal bases share cached grid data.
    """

    def __init__(self, domain: BoxDomain, pairs: tuple[EigenPair, ...]):
        self.domain = domain
        self.pairs = pairs
        self.eigenvalues = np.array([p.value for p in pairs], dtype=float)
        self.eigenvalues.setflags(write=False)
        self.indices = np.array([p.index for p in pairs], dtype=int)
        self.indices.setflags(write=False)
        # largest mode index used along each axis; sets the minimal grid
        self.max_index = tuple(int(m) for m in self.indices.max(axis=0))
        self._key = (domain.lengths, tuple(p.index for p in pairs))

    @property
    def size(self) -> int:
        return len(self.pairs)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SineBasis) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"SineBasis(dim={self.domain.dim}, n={self.size})"


def enumerate_basis(domain: BoxDomain, n: int) -> SineBasis:
    """Enumerate the n smallest Dirichlet eigenpairs of the box.

    The candidate cap on per-axis indices is doubled until the n-th smallest
    candidate eigenvalue is certified below every eigenvalue outside the
    candidate block, so the enumeration is exact.
    """
    if n < 1:
        raise ValueError(f"basis size must be at least 1, got {n}")
    lengths = domain.lengths
    dim = domain.dim
    cap = max(4, math.ceil(n ** (1.0 / dim)) + 2)
    while True:
        waves = [math.pi / L for L in lengths]
        candidates = []
        for index in product(range(1, cap + 1), repeat=dim):
            value = sum((m * w) ** 2 for m, w in zip(index, waves))
            candidates.append((value, index))
        candidates.sort()
        if len(candidates) >= n:
            nth = candidates[n - 1][0]
            base = sum((math.pi / L) ** 2 for L in lengths)
            outside = min(
                base - (math.pi / L) ** 2 + ((cap + 1) * math.pi / L) ** 2
                for L in lengths
            )
            if nth < outside:
                pairs = tuple(
                    EigenPair(index=idx, value=val, rank=k + 1)
                    for k, (val, idx) in enumerate(candidates[:n])
                )
                return SineBasis(domain, pairs)
        cap *= 2


def eigenvalue_growth_constant(basis: SineBasis) -> float:
    """Largest C with lambda_k >= C * k^(2/dim) over the enumerated range.

    The growth rate k^(2/dim) is exact for boxes; the constant depends on the
    side lengths and is reported rather than assumed (C = 1 on (0,pi)).
    """
    ranks = np.arange(1, basis.size + 1, dtype=float)
    return float(np.min(basis.eigenvalues / ranks ** (2.0 / basis.domain.dim)))


@dataclass(frozen=True, eq=False)
class SpectralField:
    """A function on the box, stored as coefficients against a SineBasis."""

    basis: SineBasis
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        coeffs = np.array(self.coeffs, dtype=float)
        if coeffs.shape != (self.basis.size,):
            raise ValueError(
                f"coefficient vector has shape {coeffs.shape}, "
                f"expected ({self.basis.size},)"
            )
        if not np.all(np.isfinite(coeffs)):
            raise ValueError("coefficients must be finite")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    @staticmethod
    def zero(basis: SineBasis) -> "SpectralField":
        return SpectralField(basis, np.zeros(basis.size))

    @staticmethod
    def unit(basis: SineBasis, rank: int) -> "SpectralField":
        """The rank-th eigenfunction (1-based) as a field."""
        if not 1 <= rank <= basis.size:
            raise ValueError(f"rank {rank} outside 1..{basis.size}")
        coeffs = np.zeros(basis.size)
        coeffs[rank - 1] = 1.0
        return SpectralField(basis, coeffs)

    def _check_same_basis(self, other: "SpectralField") -> None:
        if self.basis != other.basis:
            raise ValueError("fields live on different bases")

    def __add__(self, other: "SpectralField") -> "SpectralField":
        self._check_same_basis(other)
        return SpectralField(self.basis, self.coeffs + other.coeffs)

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        self._check_same_basis(other)
        return SpectralField(self.basis, self.coeffs - other.coeffs)

    def __mul__(self, scalar: float) -> "SpectralField":
        return SpectralField(self.basis, self.coeffs * float(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "SpectralField":
        return SpectralField(self.basis, -self.coeffs)


def frac_laplacian(f: SpectralField, order: float) -> SpectralField:
    """Apply the spectral fractional Laplacian of the given order.

    Coefficientwise this is xi_k -> lambda_k^(order/2) * xi_k, i.e. the
    operator (-Laplacian)^(order/2).  Total on finite coefficient vectors for
    any real order, and additive in the order (a semigroup).
    """
    scale = f.basis.eigenvalues ** (order / 2.0)
    return SpectralField(f.basis, scale * f.coeffs)


def sobolev_norm(f: SpectralField, order: float) -> float:
    """Fractional Sobolev norm sqrt(sum_k lambda_k^order * xi_k^2).

    Equals the plain L2 norm of frac_laplacian(f, order); order 0 gives the
    Parseval L2 norm.
    """
    w = f.basis.eigenvalues ** order
    return float(np.sqrt(np.dot(w * f.coeffs, f.coeffs)))


def l2_inner(f: SpectralField, g: SpectralField) -> float:
    """L2 inner product via Parseval: sum_k xi_k eta_k."""
    f._check_same_basis(g)
    return float(np.dot(f.coeffs, g.coeffs))


def grid_shape(basis: SineBasis, oversample: int) -> tuple[int, ...]:
    """Tensor collocation grid sizes: oversample times the max mode per axis."""
    if oversample < 1:
        raise ValueError(f"oversample must be at least 1, got {oversample}")
    return tuple(oversample * m for m in basis.max_index)


def grid_points(domain: BoxDomain, shape: tuple[int, ...]) -> tuple[np.ndarray, ...]:
    """Interior collocation nodes x_j = j L/(G+1), j = 1..G, per axis."""
    return tuple(
        L * np.arange(1, G + 1) / (G + 1) for L, G in zip(domain.lengths, shape)
    )


def to_grid(f: SpectralField, oversample: int = 4) -> np.ndarray:
    """Evaluate the field on the collocation grid (DST-I synthesis)."""
    return synthesize(f, grid_shape(f.basis, oversample))


def synthesize(f: SpectralField, shape: tuple[int, ...]) -> np.ndarray:
    """Evaluate the field on an explicit grid shape (must resolve all modes)."""
    basis = f.basis
    _check_resolves(basis, shape)
    norm = math.prod(math.sqrt(2.0 / L) for L in basis.domain.lengths)
    packed = np.zeros(shape)
    packed[tuple(basis.indices.T - 1)] = f.coeffs * (norm / 2 ** basis.domain.dim)
    return dstn(packed, type=1)


def from_grid(values: np.ndarray, basis: SineBasis) -> SpectralField:
    """Project grid values onto the basis (DST-I analysis).

    Exact inverse of synthesis on resolved modes.  For a general integrand g
    this returns the quadrature pairings  prod_i(L_i/(G_i+1)) * sum_j g_j
    phi_k(x_j), which is what the energy gradients need.
    """
    values = np.asarray(values, dtype=float)
    _check_resolves(basis, values.shape)
    scale = math.prod(
        math.sqrt(L / 2.0) / (G + 1)
        for L, G in zip(basis.domain.lengths, values.shape)
    )
    analysed = dstn(values, type=1)
    return SpectralField(basis, scale * analysed[tuple(basis.indices.T - 1)])


def grid_quadrature(values: np.ndarray, domain: BoxDomain) -> float:
    """Integrate grid values: uniform weights, boundary values are zero."""
    values = np.asarray(values, dtype=float)
    h = math.prod(L / (G + 1) for L, G in zip(domain.lengths, values.shape))
    return float(h * values.sum())


def _check_resolves(basis: SineBasis, shape: tuple[int, ...]) -> None:
    if len(shape) != basis.domain.dim:
        raise ValueError(f"grid rank {len(shape)} does not match dim {basis.domain.dim}")
    for G, m in zip(shape, basis.max_index):
        if G < m:
            raise ValueError(
                f"grid size {shape} is below the basis resolution {basis.max_index}"
            )


@lru_cache(maxsize=32)
def grid_matrix(basis: SineBasis, shape: tuple[int, ...]) -> np.ndarray:
    """Dense evaluation matrix S with S[j, k] = phi_k(x_j), grid flattened.

    Used by the solver for Jacobian assembly; an independent (non-DST) path
    to the same pairings.  Cached per basis and grid shape.
    """
    _check_resolves(basis, shape)
    domain = basis.domain
    tables = []
    for axis, (L, G) in enumerate(zip(domain.lengths, shape)):
        j = np.arange(1, G + 1)[:, None]
        m = basis.indices[:, axis][None, :]
        tables.append(math.sqrt(2.0 / L) * np.sin(math.pi * j * m / (G + 1)))
    if domain.dim == 1:
        S = tables[0]
    elif domain.dim == 2:
        S = (tables[0][:, None, :] * tables[1][None, :, :]).reshape(-1, basis.size)
    else:
        S = np.einsum("ak,bk,ck->abck", *tables).reshape(-1, basis.size)
    S.setflags(write=False)
    return S
