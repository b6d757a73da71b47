"""Time integration of the Hall-MHD system and its background/perturbation split.

Three systems share one integrating-factor RK4 stepper:

* ``full``          -- velocity/magnetic pair (u, b) of the Hall-MHD system
                       with fractional viscous dissipation mu*(-Lap)^alpha.
* ``perturbation``  -- the remainder pair (v, c) = (u - U, b - B) around the
                       exponentially decaying backgrounds U = exp(-mu t) U0,
                       B = exp(-nu t) U0, driven by the residual forcings of
                       the split.
* ``background``    -- the backgrounds themselves; diagonal and stepped
                       exactly.

The stiff linear dissipation is propagated exactly through exponential
multipliers; quadratic and Hall nonlinearities are treated explicitly with a
whistler-aware CFL bound (dt ~ dx^2 for the Hall term).  States are kept
divergence-free and inside the 2/3 dealias band after every step, which makes
the split between the full and perturbation systems an identity of the
discrete dynamics, not merely an approximation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import fftops
from .fields import SpectralScalarField, SpectralVectorField
from .grid import GridSpec
from .operators import (
    advect,
    advect_hat,
    curl,
    curl_hat,
    cross_phys,
    fractional_power,
    leray_hat,
    linf,
    norm_l2,
    pointwise_cross,
    sobolev_norm,
)

__all__ = [
    "PhysicalParams",
    "SchemeParams",
    "TermToggles",
    "State",
    "Trajectory",
    "BlowUpError",
    "background",
    "background_residual",
    "background_forcing",
    "beltrami_forcing",
    "coupling_terms",
    "hall_term",
    "rhs_full",
    "rhs_perturbation",
    "cfl_dt",
    "step",
    "integrate",
    "recover_pressure",
]


@dataclass(frozen=True)
class PhysicalParams:
    """Viscosity, magnetic diffusivity and the velocity dissipation exponent."""

    mu: float
    nu: float
    alpha: float = 1.0

    def __post_init__(self):
        if not (self.mu > 0 and self.nu > 0):
            raise ValueError("mu and nu must be positive")
        if not (0.0 <= self.alpha <= 1.0):
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha!r}")


@dataclass(frozen=True)
class SchemeParams:
    """Time-stepping controls; dt = None selects the CFL-based automatic step."""

    dt: Optional[float] = None
    cfl_advect: float = 0.4
    cfl_hall: float = 0.25
    dt_cap: float = 0.1
    blowup_factor: float = 1e6

    def __post_init__(self):
        if self.dt is not None and not self.dt > 0:
            raise ValueError("dt must be positive")
        for name in ("cfl_advect", "cfl_hall"):
            v = getattr(self, name)
            if not (0.0 < v <= 1.0):
                raise ValueError(f"{name} must lie in (0, 1]")
        if not self.dt_cap > 0:
            raise ValueError("dt_cap must be positive")


@dataclass(frozen=True)
class TermToggles:
    """Switches for right-hand-side groups; all on for production runs."""

    advection: bool = True   # quadratic self-advection of the state pair
    hall: bool = True        # state-state Hall term
    coupling: bool = True    # state/background mixed terms
    forcing: bool = True     # residual forcings of the background split


ALL_TERMS = TermToggles()


@dataclass(frozen=True)
class State:
    """A solver state: time plus the field pair of the tagged system.

    For kind "full" the pair (a, b) is (velocity, magnetic field); for
    "perturbation" it is the remainder pair; for "background" the decaying
    background pair.
    """

    t: float
    a: SpectralVectorField
    b: SpectralVectorField
    kind: str = "full"

    def __post_init__(self):
        if self.kind not in ("full", "perturbation", "background"):
            raise ValueError(f"unknown system kind {self.kind!r}")
        if self.a.grid != self.b.grid:
            raise ValueError("state fields live on different grids")
        if self.t < 0:
            raise ValueError("time must be nonnegative")

    @property
    def grid(self) -> GridSpec:
        return self.a.grid


@dataclass
class Trajectory:
    """Sampled states of one integration (always includes initial and final)."""

    kind: str
    states: list
    n_steps: int

    @property
    def times(self):
        return [s.t for s in self.states]

    @property
    def final(self) -> State:
        return self.states[-1]


class BlowUpError(RuntimeError):
    """Raised when the integrator detects non-finite values or runaway norms."""

    def __init__(self, time: float, norms: dict, message: str):
        super().__init__(message)
        self.time = time
        self.norms = norms


# -- backgrounds and their forcings ---------------------------------------------


def background(U0: SpectralVectorField, t: float, params: PhysicalParams):
    """Exact decaying background pair (exp(-mu t) U0, exp(-nu t) U0)."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    return (float(np.exp(-params.mu * t)) * U0, float(np.exp(-params.nu * t)) * U0)


def background_residual(U0: SpectralVectorField, t: float, params: PhysicalParams):
    """Relative residuals of the background pair in its own linear system.

    Evaluates d/dt U + mu (-Lap)^alpha U - F (and the magnetic analogue) with
    the time derivative taken analytically; both vanish identically.
    """
    U, B = background(U0, t, params)
    F, G = background_forcing(U, B, params)
    grid = U0.grid
    lam2a = grid.fractional_multiplier(2.0 * params.alpha)
    res_u = -params.mu * U.coeffs + params.mu * lam2a * U.coeffs - F.coeffs
    res_b = -params.nu * B.coeffs + params.nu * grid.k2 * B.coeffs - G.coeffs
    denom = max(norm_l2(U), norm_l2(B), 1e-300)
    nrm = lambda r: float(np.sqrt(grid.volume * np.sum(np.abs(r) ** 2)))
    return (nrm(res_u) / denom, nrm(res_b) / denom)


def background_forcing(U: SpectralVectorField, B: SpectralVectorField,
                       params: PhysicalParams):
    """Residual linear forcings that keep the plain exponentials exact.

    F = mu ((-Lap)^alpha - I) U and G = nu (-Lap - I) B, i.e. per-mode
    multipliers mu (|k|^(2 alpha) - 1) and nu (|k|^2 - 1).
    """
    grid = U.grid
    lam2a = grid.fractional_multiplier(2.0 * params.alpha)
    F = SpectralVectorField(grid, params.mu * (lam2a - 1.0) * U.coeffs)
    G = SpectralVectorField(grid, params.nu * (grid.k2 - 1.0) * B.coeffs)
    return (F, G)


def beltrami_forcing(U: SpectralVectorField, B: SpectralVectorField):
    """Quadratic residual forcings of a curl-eigenfield background pair.

    f = (|k|B - B) x B - (|k|U - U) x U   (dealiased cross products)
    g = -curl((|k|B - B) x B)

    For backgrounds with curl W = |k| W these equal the advective forms
    B.grad B - U.grad U minus their gradient part, and its curl.
    """
    XB = pointwise_cross(fractional_power(B, 1.0) - B, B)
    XU = pointwise_cross(fractional_power(U, 1.0) - U, U)
    return (XB - XU, -curl(XB))


def coupling_terms(v: SpectralVectorField, c: SpectralVectorField,
                   U: SpectralVectorField, B: SpectralVectorField):
    """State/background coupling terms of the perturbation system.

    f1 = B.grad c + c.grad B - U.grad v - v.grad U
    g1 = B.grad v + c.grad U - U.grad c - v.grad B
    g2 = -curl((curl c) x B) - curl((curl B) x c)    (solenoidal)
    """
    f1 = advect(B, c) + advect(c, B) - advect(U, v) - advect(v, U)
    g1 = advect(B, v) + advect(c, U) - advect(U, c) - advect(v, B)
    g2 = -curl(pointwise_cross(curl(c), B)) - curl(pointwise_cross(curl(B), c))
    return (f1, g1, g2)


def hall_term(b: SpectralVectorField) -> SpectralVectorField:
    """curl((curl b) x b) with a dealiased cross product; solenoidal, and
    energy-neutral: its L2 pairing with b vanishes."""
    return curl(pointwise_cross(curl(b), b))


# -- fast assembly shared by the stepper ------------------------------------------


class _BackgroundCache:
    """Precomputed background arrays reused across right-hand-side calls."""

    def __init__(self, U0: Optional[SpectralVectorField], grid: GridSpec):
        n3 = grid.n**3
        if U0 is None:
            zc = np.zeros((3,) + grid.shape, dtype=np.complex128)
            zr = np.zeros((3,) + grid.shape)
            self.u0_hat = zc
            self.u0_phys = zr
            self.lam_u0_phys = zr
            self.w0_hat = zc
            self.curl_w0_hat = zc
            self.zero = True
            return
        if U0.grid != grid:
            raise ValueError("background datum lives on a different grid")
        self.zero = False
        self.u0_hat = U0.coeffs
        lam_u0_hat = grid.kmag * U0.coeffs
        phys = fftops.ifftn(np.concatenate([U0.coeffs, lam_u0_hat])).real * n3
        self.u0_phys = phys[0:3]
        self.lam_u0_phys = phys[3:6]
        # (|k|U0 - U0) x U0, the shared quadratic of both residual forcings
        w0_phys = cross_phys(self.lam_u0_phys - self.u0_phys, self.u0_phys)
        self.w0_hat = fftops.fftn(w0_phys) / n3 * grid.dealias_mask
        self.curl_w0_hat = curl_hat(grid, self.w0_hat)
        # U0_j U0_i tensor, reused by the fused momentum assembly
        self.u0_tensor = np.stack([
            self.u0_phys[j] * self.u0_phys[i] for j in range(3) for i in range(3)
        ])


class _Context:
    """Per-run precomputation: multipliers, masks and the background cache."""

    def __init__(self, grid: GridSpec, params: PhysicalParams,
                 terms: TermToggles, U0: Optional[SpectralVectorField]):
        self.grid = grid
        self.params = params
        self.terms = terms
        self.lam2alpha = grid.fractional_multiplier(2.0 * params.alpha)
        self.mask = grid.dealias_mask
        self.bg = _BackgroundCache(U0, grid)


def _div_tensor(grid: GridSpec, T_hat: np.ndarray) -> np.ndarray:
    """(div T)_i = sum_j i k_j T_hat[j*3 + i] for a row-major 9-stack."""
    kx, ky, kz = grid.deriv_axes
    out = np.empty((3,) + grid.shape, dtype=np.complex128)
    for i in range(3):
        out[i] = 1j * (kx * T_hat[0 + i] + ky * T_hat[3 + i] + kz * T_hat[6 + i])
    return out


def _rhs_full_raw(u: np.ndarray, b: np.ndarray, t: float, ctx: _Context,
                  include_dissipation: bool) -> tuple[np.ndarray, np.ndarray]:
    grid, terms = ctx.grid, ctx.terms
    n3 = grid.n**3
    curlb = curl_hat(grid, b)
    phys = fftops.ifftn(np.concatenate([u, b, curlb])).real * n3
    up, bp, jp = phys[0:3], phys[3:6], phys[6:9]

    work = np.zeros((12,) + grid.shape)
    if terms.advection:
        for j in range(3):
            for i in range(3):
                work[j * 3 + i] = -up[j] * up[i] + bp[j] * bp[i]
        work[9:12] = cross_phys(up, bp)
    if terms.hall:
        work[9:12] -= cross_phys(jp, bp)
    work_hat = fftops.fftn(work) / n3 * ctx.mask

    du = leray_hat(grid, _div_tensor(grid, work_hat[0:9]))
    db = curl_hat(grid, work_hat[9:12])
    if include_dissipation:
        du = du - ctx.params.mu * ctx.lam2alpha * u
        db = db - ctx.params.nu * grid.k2 * b
    return du, db


def _rhs_pert_raw(v: np.ndarray, c: np.ndarray, t: float, ctx: _Context,
                  include_dissipation: bool) -> tuple[np.ndarray, np.ndarray]:
    grid, terms, bg, params = ctx.grid, ctx.terms, ctx.bg, ctx.params
    n3 = grid.n**3
    us = float(np.exp(-params.mu * t))
    bs = float(np.exp(-params.nu * t))
    curlc = curl_hat(grid, c)
    phys = fftops.ifftn(np.concatenate([v, c, curlc])).real * n3
    vp, cp, jc = phys[0:3], phys[3:6], phys[6:9]

    fused = (terms.advection and terms.hall and terms.coupling and not bg.zero)
    work = np.empty((12,) + grid.shape)
    if fused:
        # With u = v + U and b = c + B the advection and coupling tensors
        # combine into  -u x u + b x b + (us^2 - bs^2) U0 x U0, and the curl
        # bracket into  u x b - (curl c) x b - (curl B) x c.
        up = vp + us * bg.u0_phys
        bp = cp + bs * bg.u0_phys
        scale = us * us - bs * bs
        for j in range(3):
            for i in range(3):
                work[j * 3 + i] = bp[j] * bp[i] - up[j] * up[i] + scale * bg.u0_tensor[j * 3 + i]
        work[9:12] = cross_phys(up, bp) - cross_phys(jc, bp) - cross_phys(bs * bg.lam_u0_phys, cp)
    else:
        work[:] = 0.0
        if terms.advection:
            for j in range(3):
                for i in range(3):
                    work[j * 3 + i] = -vp[j] * vp[i] + cp[j] * cp[i]
            work[9:12] = cross_phys(vp, cp)
        if terms.hall:
            work[9:12] -= cross_phys(jc, cp)
        if terms.coupling and not bg.zero:
            Up = us * bg.u0_phys
            Bp = bs * bg.u0_phys
            lamBp = bs * bg.lam_u0_phys
            for j in range(3):
                for i in range(3):
                    work[j * 3 + i] += Bp[j] * cp[i] + cp[j] * Bp[i] - Up[j] * vp[i] - vp[j] * Up[i]
            work[9:12] += cross_phys(vp, Bp) + cross_phys(Up, cp)
            work[9:12] -= cross_phys(jc, Bp) + cross_phys(lamBp, cp)
    work_hat = fftops.fftn(work) / n3 * ctx.mask

    dv = _div_tensor(grid, work_hat[0:9])
    dc = curl_hat(grid, work_hat[9:12])
    if terms.forcing and not bg.zero:
        dv = dv + (bs**2 - us**2) * bg.w0_hat                      # f
        dv = dv - params.mu * us * (ctx.lam2alpha - 1.0) * bg.u0_hat   # -F
        dc = dc - bs**2 * bg.curl_w0_hat                           # g
        dc = dc - params.nu * bs * (grid.k2 - 1.0) * bg.u0_hat     # -G
    dv = leray_hat(grid, dv)
    if include_dissipation:
        dv = dv - params.mu * ctx.lam2alpha * v
        dc = dc - params.nu * grid.k2 * c
    return dv, dc


# -- public right-hand sides --------------------------------------------------------


def rhs_full(u: SpectralVectorField, b: SpectralVectorField, params: PhysicalParams,
             terms: TermToggles = ALL_TERMS, include_dissipation: bool = True):
    """Right-hand side of the full system with the pressure eliminated.

    du = P[-u.grad u + b.grad b] - mu (-Lap)^alpha u
    db = -u.grad b + b.grad u - curl((curl b) x b) + nu Lap b

    with P the divergence-free projection.  Products are dealiased; for
    solenoidal in-band inputs the assembly is exact on the retained modes.
    """
    ctx = _Context(u.grid, params, terms, None)
    du, db = _rhs_full_raw(u.coeffs, b.coeffs, 0.0, ctx, include_dissipation)
    return (SpectralVectorField(u.grid, du), SpectralVectorField(u.grid, db))


def rhs_perturbation(v: SpectralVectorField, c: SpectralVectorField, t: float,
                     U0: Optional[SpectralVectorField], params: PhysicalParams,
                     terms: TermToggles = ALL_TERMS, include_dissipation: bool = True):
    """Right-hand side of the remainder system around the decaying backgrounds.

    dv = P[-v.grad v + c.grad c + f + f1 - F] - mu (-Lap)^alpha v
    dc = -v.grad c + c.grad v - curl((curl c) x c) + g2 + g + g1 - G + nu Lap c

    with the backgrounds evaluated analytically at time t.  With U0 = None
    the system reduces to the full system acting on (v, c).
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    ctx = _Context(v.grid, params, terms, U0)
    dv, dc = _rhs_pert_raw(v.coeffs, c.coeffs, t, ctx, include_dissipation)
    return (SpectralVectorField(v.grid, dv), SpectralVectorField(v.grid, dc))


# -- stepping -------------------------------------------------------------------------


def cfl_dt(state: State, params: PhysicalParams, scheme: SchemeParams,
           U0: Optional[SpectralVectorField] = None) -> float:
    """Stable explicit step: min of advective dx/|u|, whistler dx^2/|b| and the cap.

    For perturbation states the background contributions are included in the
    effective advecting and magnetic fields.
    """
    if not (np.all(np.isfinite(state.a.coeffs)) and np.all(np.isfinite(state.b.coeffs))):
        raise ValueError("state is not finite")
    a, b = state.a, state.b
    if state.kind == "perturbation" and U0 is not None:
        U, B = background(U0, state.t, params)
        a, b = a + U, b + B
    dx = state.grid.dx
    dt = scheme.dt_cap
    umax = linf(a)
    bmax = linf(b)
    if umax > 0:
        dt = min(dt, scheme.cfl_advect * dx / umax)
    if bmax > 0:
        dt = min(dt, scheme.cfl_hall * dx * dx / bmax)
    return float(dt)


class _Stepper:
    """Integrating-factor RK4 with cached exponentials for a fixed dt."""

    def __init__(self, ctx: _Context, kind: str):
        self.ctx = ctx
        self.kind = kind
        self._dt = None
        self._factors_cache = None
        if kind == "full":
            self._rhs = _rhs_full_raw
        elif kind == "perturbation":
            self._rhs = _rhs_pert_raw
        else:
            self._rhs = None

    def _factors(self, dt: float):
        if self._dt != dt:
            p, g = self.ctx.params, self.ctx.grid
            ea = np.exp(-p.mu * self.ctx.lam2alpha * (0.5 * dt))
            eb = np.exp(-p.nu * g.k2 * (0.5 * dt))
            self._factors_cache = (ea, eb, ea * ea, eb * eb)
            self._dt = dt
        return self._factors_cache

    def enforce(self, a: np.ndarray, b: np.ndarray):
        """Project onto divergence-free and the dealias band (state invariant)."""
        grid = self.ctx.grid
        mask = self.ctx.mask
        return leray_hat(grid, a * mask), leray_hat(grid, b * mask)

    def advance(self, a: np.ndarray, b: np.ndarray, t: float, dt: float):
        if self.kind == "background":
            p = self.ctx.params
            return a * np.exp(-p.mu * dt), b * np.exp(-p.nu * dt)
        ea, eb, ea2, eb2 = self._factors(dt)
        rhs = self._rhs
        ctx = self.ctx
        k1a, k1b = rhs(a, b, t, ctx, False)
        sa, sb = ea * (a + (0.5 * dt) * k1a), eb * (b + (0.5 * dt) * k1b)
        k2a, k2b = rhs(sa, sb, t + 0.5 * dt, ctx, False)
        sa, sb = ea * a + (0.5 * dt) * k2a, eb * b + (0.5 * dt) * k2b
        k3a, k3b = rhs(sa, sb, t + 0.5 * dt, ctx, False)
        sa, sb = ea2 * a + dt * (ea * k3a), eb2 * b + dt * (eb * k3b)
        k4a, k4b = rhs(sa, sb, t + dt, ctx, False)
        na = ea2 * a + (dt / 6.0) * (ea2 * k1a + 2.0 * ea * (k2a + k3a) + k4a)
        nb = eb2 * b + (dt / 6.0) * (eb2 * k1b + 2.0 * eb * (k2b + k3b) + k4b)
        return self.enforce(na, nb)


def step(state: State, dt: float, params: PhysicalParams,
         U0: Optional[SpectralVectorField] = None,
         terms: TermToggles = ALL_TERMS) -> State:
    """Advance one step; the linear dissipation is propagated exactly."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    ctx = _Context(state.grid, params, terms, U0 if state.kind == "perturbation" else None)
    stepper = _Stepper(ctx, state.kind)
    na, nb = stepper.advance(state.a.coeffs, state.b.coeffs, state.t, dt)
    grid = state.grid
    return State(state.t + dt, SpectralVectorField(grid, na),
                 SpectralVectorField(grid, nb), state.kind)


def _h3_pair(grid: GridSpec, a: np.ndarray, b: np.ndarray) -> float:
    w = grid.h3_weight
    s = np.sum(w * np.sum(np.abs(a) ** 2, axis=0)) + np.sum(w * np.sum(np.abs(b) ** 2, axis=0))
    return float(np.sqrt(grid.volume * s))


def integrate(state0: State, T: float, params: PhysicalParams, scheme: SchemeParams,
              U0: Optional[SpectralVectorField] = None,
              observer: Optional[Callable[[State], None]] = None,
              store_stride: Optional[int] = None,
              terms: TermToggles = ALL_TERMS,
              enforce_initial: bool = True) -> Trajectory:
    """Integrate to final time T, sampling states and running diagnostics.

    The observer is called on every accepted state including the initial one.
    The returned trajectory stores the initial state, every ``store_stride``-th
    step when requested, and the final state.  Non-finite values or a pair
    H^3 norm beyond ``scheme.blowup_factor`` times its initial scale raise
    :class:`BlowUpError` carrying time and norms.
    """
    if T < state0.t:
        raise ValueError("final time precedes the state time")
    grid = state0.grid
    ctx = _Context(grid, params, terms, U0 if state0.kind == "perturbation" else None)
    stepper = _Stepper(ctx, state0.kind)

    a, b = state0.a.coeffs.copy(), state0.b.coeffs.copy()
    if enforce_initial and state0.kind != "background":
        a, b = stepper.enforce(a, b)
    t0 = state0.t
    cur = State(t0, SpectralVectorField(grid, a), SpectralVectorField(grid, b), state0.kind)

    init_h3 = _h3_pair(grid, a, b)
    if init_h3 == 0.0 and U0 is not None:
        init_h3 = sobolev_norm(U0, 3.0)
    ceiling = scheme.blowup_factor * max(init_h3, 1e-30)

    states = [cur]
    if observer is not None:
        observer(cur)

    n_steps = 0
    eps_t = 1e-12 * max(1.0, abs(T))
    while cur.t < T - eps_t:
        if scheme.dt is not None:
            dt = scheme.dt
            t_next = t0 + (n_steps + 1) * dt
            if t_next > T + eps_t:
                dt = T - cur.t
                t_next = T
        else:
            dt = min(cfl_dt(cur, params, scheme, U0), T - cur.t)
            t_next = cur.t + dt
        a, b = stepper.advance(a, b, cur.t, dt)
        n_steps += 1
        cur = State(t_next, SpectralVectorField(grid, a), SpectralVectorField(grid, b),
                    state0.kind)

        amax = float(max(np.max(np.abs(a)), np.max(np.abs(b))))
        if not np.isfinite(amax):
            raise BlowUpError(cur.t, {"max_coeff": amax},
                              f"non-finite state at t = {cur.t:.6g}")
        h3 = _h3_pair(grid, a, b)
        if h3 > ceiling:
            raise BlowUpError(cur.t, {"h3_pair": h3, "ceiling": ceiling},
                              f"H^3 norm {h3:.3e} exceeded ceiling {ceiling:.3e} "
                              f"at t = {cur.t:.6g}")

        if observer is not None:
            observer(cur)
        if store_stride is not None and n_steps % store_stride == 0:
            states.append(cur)

    if states[-1] is not cur:
        states.append(cur)
    return Trajectory(kind=state0.kind, states=states, n_steps=n_steps)


def recover_pressure(u: SpectralVectorField, b: SpectralVectorField) -> SpectralScalarField:
    """Pressure from the solved fields: p = Lap^-1 div(b.grad b - u.grad u).

    The mean pressure mode is fixed to zero.  grad p reconstructs exactly the
    non-solenoidal part of the dealiased quadratic momentum flux.
    """
    grid = u.grid
    n3 = grid.n**3
    phys = fftops.ifftn(np.concatenate([u.coeffs, b.coeffs])).real * n3
    x_hat = advect_hat(grid, phys[3:6], b.coeffs) - advect_hat(grid, phys[0:3], u.coeffs)
    kx, ky, kz = grid.deriv_axes
    div_x = 1j * (kx * x_hat[0] + ky * x_hat[1] + kz * x_hat[2])
    p = -div_x * grid.inv_k2
    p[0, 0, 0] = 0.0
    return SpectralScalarField(grid, p)
