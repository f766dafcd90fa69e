"""Critical-point computation: Newton, deflation, continuation, level brackets.

The residual is the coefficient-space gradient of the energy (its zeros are
the Galerkin solutions of the system), assembled here through the dense
grid-evaluation matrix; agreement with the transform-based energy gradient
is a cross-check between two independent code paths.  Deflation multiplies
the residual by prod_i (dist_i^-2 + 1) over known solutions so Newton runs
land on new ones.  Level brackets combine a sampled upper bound over nested
saddle-geometry balls with a closed-form lower growth curve whose constant
is assembled from computed embedding data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import region
from .basis import (
    SpectralField,
    eigenvalue_growth_constant,
    from_grid,
    grid_matrix,
    grid_shape,
    grid_quadrature,
    sobolev_norm,
    to_grid,
)
from .energy import (
    CutoffConfig,
    DualGradient,
    ProblemSpec,
    cutoff_argument,
    cutoff_weight,
    energy,
    energy_gradient,
    modified_energy,
)
from .space import (
    FieldPair,
    coupling_eigenvector,
    from_eigenvector_coordinates,
    pair_norm,
)


@dataclass
class NewtonConfig:
    """Newton iteration controls (plus the branch separation threshold)."""

    tol: float = 1e-10
    max_iter: int = 50
    damping: float = 0.5
    min_step: float = 1e-12
    separation: float = 1e-4

    def __post_init__(self) -> None:
        if self.tol <= 0.0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if not 0.0 < self.damping < 1.0:
            raise ValueError(f"damping must lie in (0, 1), got {self.damping}")


def _pack(z: FieldPair) -> np.ndarray:
    return np.concatenate([z.u.coeffs, z.v.coeffs])


def _unpack(vec: np.ndarray, spec: ProblemSpec) -> FieldPair:
    n = spec.n
    u = SpectralField(spec.basis, vec[:n])
    v = SpectralField(spec.basis, vec[n:])
    return FieldPair(u, v, spec.r)


def _grid_data(spec: ProblemSpec):
    shape = grid_shape(spec.basis, spec.oversample)
    S = grid_matrix(spec.basis, shape)
    weight = math.prod(
        L / (G + 1) for L, G in zip(spec.domain.lengths, shape)
    )
    return S, weight


def residual(z: FieldPair, spec: ProblemSpec) -> DualGradient:
    """System residual in coefficient coordinates.

    Row k of du is the v-equation, lambda_k eta_k - <|u|^(q-1)u + k, phi_k>;
    row k of dv the u-equation with p and h.  Identical in value to
    energy_gradient but assembled through the dense evaluation matrix.
    """
    if z.basis != spec.basis or z.r != spec.r:
        raise ValueError("point incompatible with the problem spec")
    S, w = _grid_data(spec)
    lam = spec.basis.eigenvalues
    u_vals = S @ z.u.coeffs
    v_vals = S @ z.v.coeffs
    pu = w * (S.T @ (np.abs(u_vals) ** (spec.q - 1.0) * u_vals))
    pv = w * (S.T @ (np.abs(v_vals) ** (spec.p - 1.0) * v_vals))
    du = lam * z.v.coeffs - pu - spec.k.coeffs
    dv = lam * z.u.coeffs - pv - spec.h.coeffs
    return DualGradient(du=du, dv=dv)


def jacobian(z: FieldPair, spec: ProblemSpec) -> np.ndarray:
    """Dense Jacobian of the residual: diagonal coupling plus projected powers."""
    S, w = _grid_data(spec)
    lam = spec.basis.eigenvalues
    n = spec.n
    u_vals = S @ z.u.coeffs
    v_vals = S @ z.v.coeffs
    du_weights = spec.q * np.abs(u_vals) ** (spec.q - 1.0)
    dv_weights = spec.p * np.abs(v_vals) ** (spec.p - 1.0)
    J = np.zeros((2 * n, 2 * n))
    J[:n, :n] = -w * (S.T * du_weights) @ S
    J[n:, n:] = -w * (S.T * dv_weights) @ S
    diag = np.arange(n)
    J[diag, n + diag] = lam
    J[n + diag, diag] = lam
    return J


@dataclass
class SolveResult:
    """Outcome of one Newton run; on failure z is the best iterate seen."""

    z: FieldPair
    residual_norm: float
    iterations: int
    converged: bool
    message: str = ""


def newton_solve(z0: FieldPair, spec: ProblemSpec, config: NewtonConfig | None = None) -> SolveResult:
    """Damped Newton on the system residual.

    Backtracking halves the step until the residual norm decreases, so every
    accepted step is monotone; stalling below min_step or exhausting max_iter
    returns the best iterate with a diagnostic (a bad seed, not an error).
    """
    config = config or NewtonConfig()
    z = z0
    rn = residual(z, spec).norm()
    if rn <= config.tol:
        return SolveResult(z=z, residual_norm=rn, iterations=0, converged=True)
    for it in range(1, config.max_iter + 1):
        res = residual(z, spec)
        vec = np.concatenate([res.du, res.dv])
        try:
            delta = np.linalg.solve(jacobian(z, spec), -vec)
        except np.linalg.LinAlgError:
            return SolveResult(
                z=z, residual_norm=rn, iterations=it - 1, converged=False,
                message="singular Jacobian",
            )
        step = 1.0
        accepted = False
        while step >= config.min_step:
            candidate = _unpack(_pack(z) + step * delta, spec)
            rn_new = residual(candidate, spec).norm()
            if rn_new < rn:
                z, rn = candidate, rn_new
                accepted = True
                break
            step *= config.damping
        if not accepted:
            return SolveResult(
                z=z, residual_norm=rn, iterations=it, converged=False,
                message="line search stalled below min_step",
            )
        if rn <= config.tol:
            return SolveResult(z=z, residual_norm=rn, iterations=it, converged=True)
    return SolveResult(
        z=z, residual_norm=rn, iterations=config.max_iter, converged=False,
        message="max_iter reached",
    )


def _deflation(z_vec: np.ndarray, known: list[FieldPair], spec: ProblemSpec):
    """Deflation factor prod_i (d_i^-2 + 1) and its coefficient-space gradient."""
    lam = spec.basis.eigenvalues
    n = spec.n
    metric = np.concatenate([lam**spec.r, lam ** (2.0 - spec.r)])
    m = 1.0
    grad = np.zeros(2 * n)
    for zi in known:
        diff = z_vec - _pack(zi)
        d2 = float(np.dot(metric * diff, diff))
        if d2 <= 1e-28:
            return math.inf, grad
        factor = 1.0 / d2 + 1.0
        m *= factor
        # d/dz of (d^-2 + 1), with d^2 the metric distance squared
        grad += (-1.0 / (d2 * d2) / factor) * (2.0 * metric * diff)
    return m, m * grad


def _newton_deflated(
    z0: FieldPair,
    spec: ProblemSpec,
    config: NewtonConfig,
    known: list[FieldPair],
) -> SolveResult:
    """Newton on the deflated residual; accepts on the *undeflated* tolerance."""
    z = z0
    vec = _pack(z)

    def deflated_norm(v: np.ndarray) -> tuple[float, float]:
        res = residual(_unpack(v, spec), spec)
        raw = math.sqrt(np.dot(res.du, res.du) + np.dot(res.dv, res.dv))
        m, _ = _deflation(v, known, spec)
        return m * raw, raw

    fn, rn = deflated_norm(vec)
    if rn <= config.tol and _min_distance(z, known, spec) > config.separation:
        return SolveResult(z=z, residual_norm=rn, iterations=0, converged=True)
    for it in range(1, config.max_iter + 1):
        zp = _unpack(vec, spec)
        res = residual(zp, spec)
        rvec = np.concatenate([res.du, res.dv])
        m, mgrad = _deflation(vec, known, spec)
        if not math.isfinite(m):
            return SolveResult(
                z=zp, residual_norm=float(np.linalg.norm(rvec)), iterations=it - 1,
                converged=False, message="seed coincides with a known solution",
            )
        J = m * jacobian(zp, spec) + np.outer(rvec, mgrad)
        try:
            delta = np.linalg.solve(J, -m * rvec)
        except np.linalg.LinAlgError:
            return SolveResult(
                z=zp, residual_norm=float(np.linalg.norm(rvec)), iterations=it - 1,
                converged=False, message="singular deflated Jacobian",
            )
        step = 1.0
        accepted = False
        while step >= config.min_step:
            cand = vec + step * delta
            fn_new, rn_new = deflated_norm(cand)
            if fn_new < fn:
                vec, fn, rn = cand, fn_new, rn_new
                accepted = True
                break
            step *= config.damping
        if not accepted:
            return SolveResult(
                z=_unpack(vec, spec), residual_norm=rn, iterations=it,
                converged=False, message="deflated line search stalled",
            )
        if rn <= config.tol:
            z_new = _unpack(vec, spec)
            if _min_distance(z_new, known, spec) > config.separation:
                return SolveResult(z=z_new, residual_norm=rn, iterations=it, converged=True)
    return SolveResult(
        z=_unpack(vec, spec), residual_norm=rn, iterations=config.max_iter,
        converged=False, message="max_iter reached",
    )


def _min_distance(z: FieldPair, others: list[FieldPair], spec: ProblemSpec) -> float:
    if not others:
        return math.inf
    return min(pair_norm(z - zi) for zi in others)


def default_seeds(spec: ProblemSpec, k_max: int | None = None, scales=(1.0, 2.0, 4.0)) -> list[FieldPair]:
    """Seed schedule t (phi_j, +-phi_j): scaled eigenmode pairs, both signs."""
    k_max = k_max or min(spec.n, 6)
    seeds = []
    for j in range(1, k_max + 1):
        mode = SpectralField.unit(spec.basis, j)
        for t in scales:
            for sign in (+1.0, -1.0):
                seeds.append(FieldPair(mode * (sign * t), mode * (sign * t), spec.r))
    return seeds


def deflated_solve(
    spec: ProblemSpec,
    config: NewtonConfig | None = None,
    known: list[FieldPair] | None = None,
    seeds: list[FieldPair] | None = None,
) -> SolveResult:
    """Find one solution distinct from every known one, or report exhaustion."""
    config = config or NewtonConfig()
    known = list(known or [])
    seeds = seeds if seeds is not None else default_seeds(spec)
    best: SolveResult | None = None
    for seed in seeds:
        result = _newton_deflated(seed, spec, config, known)
        if result.converged:
            return result
        if best is None or result.residual_norm < best.residual_norm:
            best = result
    if best is None:
        best = SolveResult(
            z=spec.zero_pair(), residual_norm=math.inf, iterations=0,
            converged=False, message="empty seed schedule",
        )
    best.message = f"seed schedule exhausted ({best.message})"
    return best


@dataclass
class SolutionRecord:
    """One computed critical point; mirror holds -z when it also solves."""

    z: FieldPair
    energy: float
    residual: float
    mirror: FieldPair | None = None


@dataclass
class Branch:
    """Computed critical points sorted by increasing energy."""

    records: list[SolutionRecord] = field(default_factory=list)
    exhausted: bool = False
    note: str = ""


def _candidate_key(z: FieldPair, e: float) -> tuple:
    return (e, tuple(z.u.coeffs), tuple(z.v.coeffs))


def find_branch(
    spec: ProblemSpec,
    seeds: list[FieldPair] | None = None,
    count: int = 3,
    config: NewtonConfig | None = None,
    workers: int = 1,
) -> Branch:
    """Collect `count` distinct critical points (one record per mirror pair).

    A plain Newton sweep over the seed schedule runs first (order-independent
    merge, so it can be fanned out); deflation fills in afterwards.  For a
    symmetric problem each record's mirror is verified to solve as well and
    both are deflated against.
    """
    if count < 1:
        raise ValueError(f"count must be at least 1, got {count}")
    config = config or NewtonConfig()
    seeds = seeds if seeds is not None else default_seeds(spec)
    symmetric = spec.is_symmetric()

    def sweep(seed: FieldPair) -> SolveResult:
        return newton_solve(seed, spec, config)

    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(sweep, seeds))
    else:
        results = [sweep(s) for s in seeds]

    candidates = [
        (res.z, energy(res.z, spec), res.residual_norm)
        for res in results
        if res.converged
    ]
    candidates.sort(key=lambda item: _candidate_key(item[0], item[1]))

    records: list[SolutionRecord] = []
    deflate_against: list[FieldPair] = []
    if symmetric:
        # the trivial solution is known a priori; keep Newton away from it
        deflate_against.append(spec.zero_pair())

    def try_accept(z: FieldPair, e: float, rn: float) -> None:
        if len(records) >= count:
            return
        if _min_distance(z, deflate_against, spec) <= config.separation:
            return
        mirror = None
        if symmetric:
            mz = -z
            mirror_res = residual(mz, spec).norm()
            if mirror_res <= config.tol and pair_norm(z - mz) > config.separation:
                mirror = mz
        records.append(SolutionRecord(z=z, energy=e, residual=rn, mirror=mirror))
        deflate_against.append(z)
        if mirror is not None:
            deflate_against.append(mirror)

    for z, e, rn in candidates:
        try_accept(z, e, rn)

    exhausted = False
    note = ""
    attempts = 0
    while len(records) < count and attempts < count + len(seeds):
        attempts += 1
        result = deflated_solve(spec, config, deflate_against, seeds)
        if not result.converged:
            exhausted = True
            note = result.message
            break
        before = len(records)
        try_accept(result.z, energy(result.z, spec), result.residual_norm)
        if len(records) == before:
            deflate_against.append(result.z)  # rejected; do not revisit
    if len(records) < count and not exhausted:
        exhausted = True
        note = note or "deflation attempts exhausted"

    records.sort(key=lambda rec: _candidate_key(rec.z, rec.energy))
    return Branch(records=records, exhausted=exhausted, note=note)


@dataclass
class ContinuationResult:
    z: FieldPair
    reached: float
    converged: bool
    message: str = ""


def continuation(
    sym_solution: FieldPair,
    spec_target: ProblemSpec,
    steps: int = 5,
    config: NewtonConfig | None = None,
) -> ContinuationResult:
    """Homotopy in the forcing: solve at t/steps * (h, k) for t = 1..steps.

    The input must solve the forcing-free problem; each stage reuses the
    previous solution as the Newton seed.  On failure the largest t reached
    is reported.
    """
    if steps < 1:
        raise ValueError(f"steps must be at least 1, got {steps}")
    config = config or NewtonConfig()
    z = sym_solution
    reached = 0.0
    for i in range(1, steps + 1):
        t = i / steps
        stage = spec_target.scaled_forcing(t)
        result = newton_solve(z, stage, config)
        if not result.converged:
            return ContinuationResult(
                z=z, reached=reached, converged=False,
                message=f"Newton failed at t={t}: {result.message}",
            )
        z = result.z
        reached = t
    return ContinuationResult(z=z, reached=1.0, converged=True)


# ---------------------------------------------------------------------------
# Level brackets
# ---------------------------------------------------------------------------


def _sphere_extremal(
    spec: ProblemSpec,
    active: int,
    exponent: float,
    order: float,
    maximize: bool,
    seed: int,
    restarts: int = 10,
    iters: int = 300,
    warm_start: np.ndarray | None = None,
) -> tuple[float, np.ndarray]:
    """Extremize int |w|^(exponent+1) over the unit order-norm sphere of the
    first `active` modes, by projected gradient with retraction."""
    lam = spec.basis.eigenvalues[:active]
    weights = lam**order
    sign = -1.0 if maximize else 1.0
    rng = np.random.default_rng(seed)

    def normalize(c: np.ndarray) -> np.ndarray:
        return c / math.sqrt(float(np.dot(weights * c, c)))

    def value_grad(c: np.ndarray) -> tuple[float, np.ndarray]:
        coeffs = np.zeros(spec.n)
        coeffs[:active] = c
        f = SpectralField(spec.basis, coeffs)
        vals = to_grid(f, spec.oversample)
        val = grid_quadrature(np.abs(vals) ** (exponent + 1.0), spec.domain)
        pair = from_grid(
            (exponent + 1.0) * np.abs(vals) ** (exponent - 1.0) * vals, spec.basis
        )
        return val, pair.coeffs[:active]

    best_val = math.inf
    best_c = None
    starts = []
    if warm_start is not None:
        starts.append(np.array(warm_start, dtype=float))
    while len(starts) < restarts:
        starts.append(rng.standard_normal(active))
    for c0 in starts:
        c = normalize(c0)
        val, grad = value_grad(c)
        step = 0.5
        for _ in range(iters):
            cand = normalize(c - step * sign * grad)
            cand_val, cand_grad = value_grad(cand)
            if sign * cand_val < sign * val - 1e-16:
                c, val, grad = cand, cand_val, cand_grad
                step = min(step * 1.3, 10.0)
            else:
                step *= 0.5
                if step < 1e-12:
                    break
        if sign * val < best_val:
            best_val = sign * val
            best_c = c
    return sign * best_val, np.asarray(best_c)


def _gn_constant(spec: ProblemSpec, exponent: float, order: float, theta: float, seed: int) -> float:
    """Best constant of |w|_{exponent+1} <= S |w|_2^theta |w|_order^(1-theta)
    over the truncated span, by gradient ascent of the scale-invariant ratio."""
    lam = spec.basis.eigenvalues
    weights = lam**order
    rng = np.random.default_rng(seed)

    def ratio(c: np.ndarray) -> float:
        f = SpectralField(spec.basis, c)
        vals = to_grid(f, spec.oversample)
        num = grid_quadrature(np.abs(vals) ** (exponent + 1.0), spec.domain) ** (
            1.0 / (exponent + 1.0)
        )
        l2 = math.sqrt(float(np.dot(c, c)))
        sob = math.sqrt(float(np.dot(weights * c, c)))
        return num / (l2**theta * sob ** (1.0 - theta))

    def ratio_grad(c: np.ndarray) -> np.ndarray:
        f = SpectralField(spec.basis, c)
        vals = to_grid(f, spec.oversample)
        num_int = grid_quadrature(np.abs(vals) ** (exponent + 1.0), spec.domain)
        pair = from_grid(
            (exponent + 1.0) * np.abs(vals) ** (exponent - 1.0) * vals, spec.basis
        ).coeffs
        l2sq = float(np.dot(c, c))
        sobsq = float(np.dot(weights * c, c))
        # gradient of log ratio
        return (
            pair / ((exponent + 1.0) * num_int)
            - theta * c / l2sq
            - (1.0 - theta) * weights * c / sobsq
        )

    best = 0.0
    for _ in range(10):
        c = rng.standard_normal(spec.n)
        c /= math.sqrt(float(np.dot(weights * c, c)))
        val = ratio(c)
        step = 0.5
        for _ in range(200):
            cand = c + step * ratio_grad(c)
            cand /= math.sqrt(float(np.dot(weights * cand, cand)))
            cand_val = ratio(cand)
            if cand_val > val + 1e-16:
                c, val = cand, cand_val
                step = min(step * 1.3, 10.0)
            else:
                step *= 0.5
                if step < 1e-12:
                    break
        best = max(best, val)
    return best


def lower_growth_constant(spec: ProblemSpec, seed: int = 0) -> float:
    """Constant gamma of the lower level curve gamma k^(2 alpha).

    Assembled from computed truncation data: interpolation constants on the
    truncated span, the eigenvalue growth constant of the box, and the
    forcing size.  Conservative by construction; the exponent is exact.
    """
    pt = region.PQPoint(p=spec.p, q=spec.q, N=spec.domain.dim)
    theta, zeta = region.interpolation_exponents(pt, spec.r)
    lam1 = float(spec.basis.eigenvalues[0])
    c_lam = eigenvalue_growth_constant(spec.basis)
    s_q = _gn_constant(spec, spec.q, spec.r, theta, seed=seed)
    s_p = _gn_constant(spec, spec.p, 2.0 - spec.r, zeta, seed=seed + 1)
    d_q = s_q ** (spec.q + 1.0) * c_lam ** (-spec.r * theta * (spec.q + 1.0) / 2.0) / (
        spec.q + 1.0
    )
    d_p = s_p ** (spec.p + 1.0) * c_lam ** (
        -(2.0 - spec.r) * zeta * (spec.p + 1.0) / 2.0
    ) / (spec.p + 1.0)
    c1 = (
        sobolev_norm(spec.k, 0.0) * lam1 ** (-spec.r / 2.0)
        + sobolev_norm(spec.h, 0.0) * lam1 ** (-(2.0 - spec.r) / 2.0)
    )

    def g(x: float) -> float:
        return (
            x
            - d_q * x ** ((spec.q + 1.0) / 2.0)
            - d_p * x ** ((spec.p + 1.0) / 2.0)
            - c1 * math.sqrt(x)
        )

    grid = np.logspace(-12.0, 6.0, 2000)
    values = [g(x) for x in grid]
    best = max(values)
    if best <= 0.0:
        return 0.0
    x0 = float(grid[int(np.argmax(values))])
    lo, hi = x0 / 10.0, x0 * 10.0
    for _ in range(200):  # golden-section refine
        m1 = lo + 0.381966 * (hi - lo)
        m2 = hi - 0.381966 * (hi - lo)
        if g(m1) < g(m2):
            lo = m1
        else:
            hi = m2
    return max(best, g(0.5 * (lo + hi)))


@dataclass
class LevelBracket:
    """Bracket for the k-th minimax level over the truncation."""

    k: int
    lower: float
    upper: float
    radius: float
    ceiling: float
    max_pointwise_excess: float


def estimate_levels(
    spec: ProblemSpec,
    k_max: int,
    samples: int = 200,
    cutoff: CutoffConfig | None = None,
    seed: int = 0,
) -> list[LevelBracket]:
    """Bracket the first k_max minimax levels.

    upper: sampled supremum of the modified energy over the radius-R_k ball
    of the span of the full minus-eigenspace and the first k plus-modes; the
    sample set of level k contains the maximizer of level k-1, so the
    reported sequence is monotone.  Every sample is checked against the
    closed-form ceiling |z|^2/2 + C0 |z| <= ceiling = (1/2 + C0/R_k) R_k^2.
    R_k solves R^2/2 = c_k R^m (m = min(p,q)+1) with a safety factor 2,
    where c_k is the computed minimum of the normalized nonlinear integrals
    over the unit sphere of the first k modes.
    lower: gamma k^(2 alpha) with computed gamma and exact exponent.
    """
    if k_max < 1:
        raise ValueError(f"k_max must be at least 1, got {k_max}")
    cutoff = cutoff or CutoffConfig.default_for(spec)
    if k_max > spec.n:
        raise ValueError(f"k_max={k_max} exceeds the truncation {spec.n}")
    pt = region.PQPoint(p=spec.p, q=spec.q, N=spec.domain.dim)
    _, _, alpha = region.growth_exponents(pt, spec.r)
    gamma = lower_growth_constant(spec, seed=seed)
    lam1 = float(spec.basis.eigenvalues[0])
    c0 = (
        sobolev_norm(spec.k, 0.0) * lam1 ** (-spec.r / 2.0)
        + sobolev_norm(spec.h, 0.0) * lam1 ** (-(2.0 - spec.r) / 2.0)
    )
    m_exp = min(spec.p, spec.q) + 1.0
    brackets: list[LevelBracket] = []
    warm_q = warm_p = None
    prev_best_point: FieldPair | None = None
    prev_upper = -math.inf
    for k in range(1, k_max + 1):
        cq, warm_q = _sphere_extremal(
            spec, k, spec.q, spec.r, maximize=False, seed=seed + 17 * k,
            warm_start=_padded(warm_q, k),
        )
        cp, warm_p = _sphere_extremal(
            spec, k, spec.p, 2.0 - spec.r, maximize=False, seed=seed + 17 * k + 1,
            warm_start=_padded(warm_p, k),
        )
        c_k = min(cq / (spec.q + 1.0), cp / (spec.p + 1.0))
        radius = 2.0 * (1.0 / (2.0 * c_k)) ** (1.0 / (m_exp - 2.0))
        rng = np.random.default_rng(seed + 1000 + k)
        points: list[FieldPair] = []
        if prev_best_point is not None:
            points.append(prev_best_point)
        for j in range(1, k + 1):
            e_plus = coupling_eigenvector(spec.basis, j, +1, spec.r)
            for frac in (0.25, 0.5, 0.75, 1.0):
                points.append(e_plus * (frac * radius))
        dim_total = spec.n + k
        for _ in range(samples):
            a_plus = np.zeros(spec.n)
            a_plus[:k] = rng.standard_normal(k)
            a_minus = rng.standard_normal(spec.n)
            norm = math.sqrt(np.dot(a_plus, a_plus) + np.dot(a_minus, a_minus))
            rad = radius * rng.uniform() ** (1.0 / dim_total)
            points.append(
                from_eigenvector_coordinates(
                    spec.basis, spec.r, a_plus * (rad / norm), a_minus * (rad / norm)
                )
            )
        upper = prev_upper
        best_point = prev_best_point
        excess = -math.inf
        for z in points:
            jval = modified_energy(z, spec, cutoff)
            zn = pair_norm(z)
            excess = max(excess, jval - (0.5 * zn * zn + c0 * zn))
            if jval > upper:
                upper = jval
                best_point = z
        ceiling = (0.5 + (c0 / radius if radius > 0 else 0.0)) * radius * radius
        brackets.append(
            LevelBracket(
                k=k,
                lower=gamma * float(k) ** (2.0 * alpha),
                upper=upper,
                radius=radius,
                ceiling=ceiling,
                max_pointwise_excess=excess,
            )
        )
        prev_best_point = best_point
        prev_upper = upper
    return brackets


def _padded(vec: np.ndarray | None, size: int) -> np.ndarray | None:
    if vec is None:
        return None
    out = np.zeros(size)
    out[: vec.size] = vec
    return out


@dataclass
class CriticalReport:
    """Diagnostics of a candidate critical point."""

    residual_norm: float
    energy: float
    modified_energy: float
    cutoff_argument: float
    cutoff_weight: float
    bound_ok: bool
    min_bound_constant: float
    energy_gap: float  # modified minus unmodified energy


def verify_critical(
    z: FieldPair, spec: ProblemSpec, cutoff: CutoffConfig | None = None
) -> CriticalReport:
    """Evaluate every critical-point diagnostic at z (no exceptions on bad z).

    bound_ok records whether the nonlinear part is at most
    bound_constant * sqrt(energy^2 + 1), the a-priori inequality that parks
    the cutoff weight at one; min_bound_constant is the smallest constant
    that would satisfy it at this point.
    """
    cutoff = cutoff or CutoffConfig.default_for(spec)
    rn = residual(z, spec).norm()
    e = energy(z, spec)
    j = modified_energy(z, spec, cutoff)
    theta = cutoff_argument(z, spec, cutoff)
    psi = cutoff_weight(z, spec, cutoff)
    nonlinear = theta * 2.0 * cutoff.bound_constant * math.sqrt(e * e + 1.0)
    min_a = nonlinear / math.sqrt(e * e + 1.0)
    return CriticalReport(
        residual_norm=rn,
        energy=e,
        modified_energy=j,
        cutoff_argument=theta,
        cutoff_weight=psi,
        bound_ok=min_a <= cutoff.bound_constant * (1.0 + 1e-12),
        min_bound_constant=min_a,
        energy_gap=j - e,
    )
