"""Energy functionals for the coupled system, with the symmetry-repair cutoff.

The unmodified energy of a pair z = (u, v) is

    E(z) = form(z) - 1/(q+1) int |u|^(q+1) - 1/(p+1) int |v|^(p+1)
           - int k u - int h v,

where form is the gradient-coupling quadratic form and h, k are the forcing
fields (h enters the u-equation of the system and therefore pairs with v in
the energy; k pairs with u).  Critical points of E solve the system.

Since the forcing breaks evenness, a modified energy switches the forcing
term off, via a smooth bump applied to a scale-normalized size of the
nonlinear part, wherever an a-priori bound (valid at critical points) fails.
Large critical values of the modified energy are then critical values of E.
All integrals are uniform-grid quadratures on the oversampled collocation
grid, and the gradients returned are the exact derivatives of those discrete
values, so finite differences close to machine precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import region
from .basis import (
    BoxDomain,
    SineBasis,
    SpectralField,
    enumerate_basis,
    from_grid,
    grid_quadrature,
    sobolev_norm,
    to_grid,
)
from .space import FieldPair, coupling_form


@dataclass(frozen=True)
class ProblemSpec:
    """Data of one boundary-value problem: domain, truncation, exponents, forcing."""

    domain: BoxDomain
    basis: SineBasis
    r: float
    p: float
    q: float
    h: SpectralField
    k: SpectralField
    oversample: int = 4

    def __post_init__(self) -> None:
        if self.p <= 1.0:
            raise ValueError(f"p must exceed 1 (got {self.p})")
        if self.q <= 1.0:
            raise ValueError(f"q must exceed 1 (got {self.q})")
        if not 0.0 < self.r < 2.0:
            raise ValueError(f"r must lie in (0, 2), got {self.r}")
        if self.oversample < 1:
            raise ValueError(f"oversample must be at least 1, got {self.oversample}")
        dim = self.domain.dim
        if dim >= 3:
            pt = region.PQPoint(p=self.p, q=self.q, N=dim)
            window = region.admissible_r_interval(pt)
            if window is None:
                raise ValueError(
                    f"no admissible r exists for p={self.p}, q={self.q}, N={dim} "
                    "(point on or above the dividing hyperbola)"
                )
            if not window[0] < self.r < window[1]:
                raise ValueError(
                    f"r={self.r} outside the admissible interval "
                    f"({window[0]}, {window[1]}) for p={self.p}, q={self.q}, N={dim}"
                )
        if self.h.basis != self.basis or self.k.basis != self.basis:
            raise ValueError("forcing fields must live on the problem basis")

    @property
    def n(self) -> int:
        return self.basis.size

    @staticmethod
    def create(
        domain: BoxDomain,
        n: int,
        r: float,
        p: float,
        q: float,
        h=None,
        k=None,
        oversample: int = 4,
    ) -> "ProblemSpec":
        """Build a spec; h and k may be coefficient sequences (zero-padded) or None."""
        basis = enumerate_basis(domain, n)
        return ProblemSpec(
            domain=domain,
            basis=basis,
            r=float(r),
            p=float(p),
            q=float(q),
            h=_as_field(h, basis),
            k=_as_field(k, basis),
            oversample=oversample,
        )

    def with_forcing(self, h, k) -> "ProblemSpec":
        return replace(self, h=_as_field(h, self.basis), k=_as_field(k, self.basis))

    def scaled_forcing(self, t: float) -> "ProblemSpec":
        return replace(self, h=self.h * t, k=self.k * t)

    def is_symmetric(self) -> bool:
        return not (np.any(self.h.coeffs) or np.any(self.k.coeffs))

    def zero_pair(self) -> FieldPair:
        return FieldPair.zero(self.basis, self.r)


def _as_field(data, basis: SineBasis) -> SpectralField:
    if data is None:
        return SpectralField.zero(basis)
    if isinstance(data, SpectralField):
        if data.basis != basis:
            raise ValueError("forcing field lives on a different basis")
        return data
    coeffs = np.zeros(basis.size)
    data = np.asarray(data, dtype=float)
    if data.ndim != 1 or data.size > basis.size:
        raise ValueError(
            f"forcing coefficients must be a vector of length <= {basis.size}"
        )
    coeffs[: data.size] = data
    return SpectralField(basis, coeffs)


@dataclass(frozen=True)
class CutoffConfig:
    """Scale constant for the a-priori bound behind the symmetry-repair cutoff.

    The bump argument is normalized by 2 * bound_constant * sqrt(E^2 + 1); at
    critical points the nonlinear part is at most bound_constant * sqrt(E^2+1),
    which parks the argument in [0, 1/2] where the bump equals one.
    """

    bound_constant: float

    def __post_init__(self) -> None:
        if self.bound_constant <= 0.0:
            raise ValueError(f"bound constant must be positive, got {self.bound_constant}")

    @staticmethod
    def default_for(spec: ProblemSpec) -> "CutoffConfig":
        """Default constant max(1, 4(|h|_2 + |k|_2)); override as needed."""
        size = sobolev_norm(spec.h, 0.0) + sobolev_norm(spec.k, 0.0)
        return CutoffConfig(bound_constant=max(1.0, 4.0 * size))


def bump(t: float) -> float:
    """C^2 plateau bump: 1 on t <= 1, 0 on t >= 2, quintic-smoothstep between."""
    if t <= 1.0:
        return 1.0
    if t >= 2.0:
        return 0.0
    x = t - 1.0
    return 1.0 - x * x * x * (10.0 - 15.0 * x + 6.0 * x * x)


def bump_derivative(t: float) -> float:
    """Derivative of the bump; lies in (-15/8, 0) on (1, 2) and is 0 outside."""
    if t <= 1.0 or t >= 2.0:
        return 0.0
    x = t - 1.0
    return -30.0 * x * x * (1.0 - x) * (1.0 - x)


@dataclass
class DualGradient:
    """Partial derivatives of a functional in coefficient coordinates.

    du holds the partials against the u-coefficients, dv against the
    v-coefficients; this is the dual-pairing convention, not the Riesz
    representative of the product space (see riesz_representative).
    """

    du: np.ndarray
    dv: np.ndarray

    def norm(self) -> float:
        return float(np.sqrt(np.dot(self.du, self.du) + np.dot(self.dv, self.dv)))

    def pairing(self, w: FieldPair) -> float:
        """Directional derivative against a test pair."""
        return float(np.dot(self.du, w.u.coeffs) + np.dot(self.dv, w.v.coeffs))


def nonlinear_integral(f: SpectralField, s: float, oversample: int = 4) -> float:
    """Quadrature of int |f|^(s+1) on the oversampled grid; s > 1 required."""
    if s <= 1.0:
        raise ValueError(f"exponent must exceed 1, got {s}")
    values = to_grid(f, oversample)
    return grid_quadrature(np.abs(values) ** (s + 1.0), f.basis.domain)


def _check_point(z: FieldPair, spec: ProblemSpec) -> None:
    if z.basis != spec.basis:
        raise ValueError("point lives on a different basis than the problem")
    if z.r != spec.r:
        raise ValueError(f"point split parameter {z.r} differs from problem r {spec.r}")


def forcing_pairing(z: FieldPair, spec: ProblemSpec) -> float:
    """The forcing term int k u + int h v, exact by Parseval."""
    return float(
        np.dot(spec.k.coeffs, z.u.coeffs) + np.dot(spec.h.coeffs, z.v.coeffs)
    )


def _nonlinear_parts(z: FieldPair, spec: ProblemSpec) -> tuple[float, float]:
    iq = nonlinear_integral(z.u, spec.q, spec.oversample)
    ip = nonlinear_integral(z.v, spec.p, spec.oversample)
    return iq, ip


def energy(z: FieldPair, spec: ProblemSpec) -> float:
    """The unmodified energy; even in z whenever the forcing vanishes."""
    _check_point(z, spec)
    iq, ip = _nonlinear_parts(z, spec)
    return (
        coupling_form(z)
        - iq / (spec.q + 1.0)
        - ip / (spec.p + 1.0)
        - forcing_pairing(z, spec)
    )


def _power_pairings(z: FieldPair, spec: ProblemSpec) -> tuple[np.ndarray, np.ndarray]:
    """Quadrature pairings of |u|^(q-1)u and |v|^(p-1)v against every mode."""
    u_vals = to_grid(z.u, spec.oversample)
    v_vals = to_grid(z.v, spec.oversample)
    gu = from_grid(np.abs(u_vals) ** (spec.q - 1.0) * u_vals, spec.basis)
    gv = from_grid(np.abs(v_vals) ** (spec.p - 1.0) * v_vals, spec.basis)
    return gu.coeffs, gv.coeffs


def energy_gradient(z: FieldPair, spec: ProblemSpec) -> DualGradient:
    """Exact coefficient-space gradient of the discrete energy.

    du_k = lambda_k eta_k - <|u|^(q-1)u + k, phi_k>,
    dv_k = lambda_k xi_k  - <|v|^(p-1)v + h, phi_k>.
    """
    _check_point(z, spec)
    lam = spec.basis.eigenvalues
    pu, pv = _power_pairings(z, spec)
    du = lam * z.v.coeffs - pu - spec.k.coeffs
    dv = lam * z.u.coeffs - pv - spec.h.coeffs
    return DualGradient(du=du, dv=dv)


def riesz_representative(g: DualGradient, basis: SineBasis, r: float) -> FieldPair:
    """Product-space gradient: dual coefficients rescaled by the metric."""
    lam = basis.eigenvalues
    u = SpectralField(basis, g.du * lam ** (-r))
    v = SpectralField(basis, g.dv * lam ** (r - 2.0))
    return FieldPair(u, v, r)


def cutoff_scale(z: FieldPair, spec: ProblemSpec, cutoff: CutoffConfig) -> float:
    """Normalization 2A sqrt(E^2 + 1); always at least 2A."""
    e = energy(z, spec)
    return 2.0 * cutoff.bound_constant * math.sqrt(e * e + 1.0)


def cutoff_argument(z: FieldPair, spec: ProblemSpec, cutoff: CutoffConfig) -> float:
    """Scale-normalized size of the nonlinear part (the bump argument)."""
    _check_point(z, spec)
    iq, ip = _nonlinear_parts(z, spec)
    return (iq / (spec.q + 1.0) + ip / (spec.p + 1.0)) / cutoff_scale(z, spec, cutoff)


def cutoff_weight(z: FieldPair, spec: ProblemSpec, cutoff: CutoffConfig) -> float:
    """The forcing weight: bump of the cutoff argument, in [0, 1]."""
    return bump(cutoff_argument(z, spec, cutoff))


def modified_energy(z: FieldPair, spec: ProblemSpec, cutoff: CutoffConfig) -> float:
    """Energy with the forcing term weighted by the cutoff.

    Coincides with the unmodified energy wherever the weight is 1, and with
    the symmetric (forcing-free) energy wherever the weight is 0.
    """
    _check_point(z, spec)
    iq, ip = _nonlinear_parts(z, spec)
    e_sym = coupling_form(z) - iq / (spec.q + 1.0) - ip / (spec.p + 1.0)
    g = forcing_pairing(z, spec)
    e = e_sym - g
    q_scale = 2.0 * cutoff.bound_constant * math.sqrt(e * e + 1.0)
    theta = (iq / (spec.q + 1.0) + ip / (spec.p + 1.0)) / q_scale
    return e_sym - bump(theta) * g


@dataclass
class ModifiedGradient:
    """Gradient of the modified energy in the regrouped form.

    The derivative along w reads
        (1 + quad_correction) (Lz, w) - (1 + nonlin_correction) <powers, w>
        - (weight + quad_correction) <forcing, w>,
    with both corrections vanishing wherever the bump is flat, in particular
    for vanishing forcing and on the weight-1 plateau.
    """

    grad: DualGradient
    quad_correction: float
    nonlin_correction: float
    weight: float


def modified_energy_gradient(
    z: FieldPair, spec: ProblemSpec, cutoff: CutoffConfig
) -> ModifiedGradient:
    """Exact gradient of the discrete modified energy."""
    _check_point(z, spec)
    lam = spec.basis.eigenvalues
    iq, ip = _nonlinear_parts(z, spec)
    g = forcing_pairing(z, spec)
    e = (
        coupling_form(z)
        - iq / (spec.q + 1.0)
        - ip / (spec.p + 1.0)
        - g
    )
    q_scale = 2.0 * cutoff.bound_constant * math.sqrt(e * e + 1.0)
    theta = (iq / (spec.q + 1.0) + ip / (spec.p + 1.0)) / q_scale
    psi = bump(theta)
    dchi = bump_derivative(theta)
    two_a_sq = (2.0 * cutoff.bound_constant) ** 2
    t1 = dchi * two_a_sq * theta * e * g / (q_scale * q_scale)
    t2 = t1 + dchi * g / q_scale
    pu, pv = _power_pairings(z, spec)
    du = (1.0 + t1) * lam * z.v.coeffs - (1.0 + t2) * pu - (psi + t1) * spec.k.coeffs
    dv = (1.0 + t1) * lam * z.u.coeffs - (1.0 + t2) * pv - (psi + t1) * spec.h.coeffs
    return ModifiedGradient(
        grad=DualGradient(du=du, dv=dv),
        quad_correction=t1,
        nonlin_correction=t2,
        weight=psi,
    )


@dataclass
class DeviationResult:
    """Both sides of the symmetry-deviation inequality at one point."""

    holds: bool
    asymmetry: float  # |J(z) - J(-z)|
    bound: float      # beta (|J(z)|^(1/(q+1)) + |J(z)|^(1/(p+1)) + 1)


def deviation_check(
    z: FieldPair, spec: ProblemSpec, cutoff: CutoffConfig, beta: float
) -> DeviationResult:
    """Evaluate |J(z) - J(-z)| against beta (|J|^(1/(q+1)) + |J|^(1/(p+1)) + 1)."""
    if beta <= 0.0:
        raise ValueError(f"beta must be positive, got {beta}")
    j_plus = modified_energy(z, spec, cutoff)
    j_minus = modified_energy(-z, spec, cutoff)
    asymmetry = abs(j_plus - j_minus)
    size = abs(j_plus)
    bound = beta * (
        size ** (1.0 / (spec.q + 1.0)) + size ** (1.0 / (spec.p + 1.0)) + 1.0
    )
    return DeviationResult(holds=asymmetry <= bound, asymmetry=asymmetry, bound=bound)


def estimate_deviation_constant(
    spec: ProblemSpec,
    cutoff: CutoffConfig,
    draws: int = 10_000,
    seed: int = 0,
) -> float:
    """Empirical deviation constant: the largest observed asymmetry ratio.

    Samples pairs across mixed scales (smooth random directions, log-spaced
    amplitudes) and returns max |J(z)-J(-z)| / (|J|^(1/(q+1)) + |J|^(1/(p+1)) + 1).
    """
    rng = np.random.default_rng(seed)
    lam = spec.basis.eigenvalues
    smooth = lam ** (-spec.r / 2.0)
    best = 0.0
    for _ in range(draws):
        scale = 10.0 ** rng.uniform(-1.0, 1.5)
        u = SpectralField(spec.basis, scale * smooth * rng.standard_normal(spec.n))
        v = SpectralField(spec.basis, scale * smooth * rng.standard_normal(spec.n))
        z = FieldPair(u, v, spec.r)
        result = deviation_check(z, spec, cutoff, beta=1.0)
        best = max(best, result.asymmetry / result.bound)
    return best
