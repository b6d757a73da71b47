"""Runtime verification of the identities and estimates behind the solver.

Everything here is a pure function of states or series.  The central object
is the H^3 energy-rate decomposition: contracting the assembled right-hand
side of the perturbation system against D^beta v, D^beta c over |beta| <= 3
must reproduce, to quadrature accuracy, the sum of ten integral terms built
from the individual physical mechanisms (self-advection commutators, the
Hall cancellation, background couplings and residual forcings).  A nonzero
residual flags an assembly error, not a modelling error.

Norm conventions match :mod:`hallmhd.operators`; the multi-index energy
sum_{|beta|<=3} ||D^beta f||_L2^2 used by the decomposition is implemented
through precomputed lattice weights.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import fftops
from .evolution import (
    PhysicalParams,
    State,
    Trajectory,
    background,
    background_forcing,
    beltrami_forcing,
    hall_term,
    rhs_perturbation,
)
from .fields import SpectralScalarField, SpectralVectorField
from .grid import MULTI_INDICES, GridSpec
from .initial_data import DataRecipe
from .operators import (
    advect_hat,
    cross_phys,
    curl_hat,
    inner_l2,
    norm_l2,
    sobolev_norm,
    spectral_l1,
)

__all__ = [
    "TimeSeriesRecord",
    "BootstrapReport",
    "ForcingBoundReport",
    "CommutatorReport",
    "CancellationReport",
    "EnergyRateReport",
    "CSV_COLUMNS",
    "SeriesCollector",
    "write_series_csv",
    "hall_energy_residual",
    "forcing_bound_table",
    "commutator_check",
    "cancellation_residuals",
    "energy_rate_decomposition",
    "hall_commutator_term",
    "bootstrap_monitor",
    "reformulation_check",
]

_TINY = 1e-300


# -- records and CSV ------------------------------------------------------------

CSV_COLUMNS = (
    ["t", "v_h3", "c_h3", "v_diss", "c_diss", "energy_residual", "hall_cancel"]
    + [f"I_{i}" for i in range(1, 11)]
)


@dataclass(frozen=True)
class TimeSeriesRecord:
    """Per-sample diagnostics of a run; u_h3/b_h3 are set for full-system runs."""

    t: float
    v_h3: float
    c_h3: float
    v_diss: float
    c_diss: float
    energy_residual: float
    hall_cancel: float
    terms: tuple  # the ten energy-rate integrals
    u_h3: Optional[float] = None
    b_h3: Optional[float] = None

    @property
    def energy(self) -> float:
        return self.v_h3**2 + self.c_h3**2

    def csv_row(self) -> list:
        return [self.t, self.v_h3, self.c_h3, self.v_diss, self.c_diss,
                self.energy_residual, self.hall_cancel, *self.terms]


def write_series_csv(records: Sequence[TimeSeriesRecord], path) -> None:
    """Write the diagnostics series with stable shortest-roundtrip formatting."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for rec in records:
            writer.writerow([f"{x:.17g}" for x in rec.csv_row()])


# -- weighted spectral contractions ------------------------------------------------


def _ip_weighted(grid: GridSpec, a_hat: np.ndarray, b_hat: np.ndarray,
                 weight: np.ndarray) -> float:
    """sum over |beta| in the weight's range of the L2 pairing <D^beta a, D^beta b>."""
    dot = np.sum(np.real(a_hat * np.conj(b_hat)), axis=0)
    return float(grid.volume * np.sum(weight * dot))


def hall_energy_residual(b: SpectralVectorField) -> float:
    """Normalised L2 pairing of the Hall term with its own field (exactly 0
    analytically)."""
    h = hall_term(b)
    denom = norm_l2(h) * norm_l2(b)
    if denom == 0.0:
        return 0.0
    return abs(inner_l2(h, b)) / denom


# -- estimate table for the residual forcings ----------------------------------------


@dataclass(frozen=True)
class ForcingBoundRow:
    t: float
    F_h3: float
    G_h3: float
    f_h3: float
    g_h3: float
    F_ratio: float
    G_ratio: float
    f_ratio: float
    g_ratio: float


@dataclass(frozen=True)
class ForcingBoundReport:
    """Measured forcing norms against their exact-rate decay shapes.

    Shapes: F against mu exp(-mu t) eps ||U0||_L2, G against the nu analogue;
    the quadratic forcings f, g against exp(-2 min(mu,nu) t) and
    exp(-2 nu t) times eps ||U0||_L2 ||U0_hat||_L1.  Each sharp shape is
    dominated by the coarser max(mu,nu) exp(-min(mu,nu) t) shape, so bounded
    ratios here certify the coarser bound as well.  ``ratio_span`` is the
    max-min spread of each ratio over the samples (0 for exact factorisation).
    """

    rows: tuple
    epsilon: float
    l1_hat: float
    l2: float
    max_ratios: dict
    ratio_span: dict
    F_alpha_bound: float      # 2 mu eps (1+eps) ||U0||_H3
    F_alpha_bound_ok: bool


def _annular_support_fraction(U0: SpectralVectorField, epsilon: float) -> float:
    grid = U0.grid
    outside = (grid.kmag < 1.0 - epsilon - 1e-12) | (grid.kmag > 1.0 + epsilon + 1e-12)
    total = np.sum(np.abs(U0.coeffs) ** 2)
    if total == 0.0:
        return 0.0
    return float(np.sum(np.abs(U0.coeffs[:, outside]) ** 2) / total)


def forcing_bound_table(U0: SpectralVectorField, recipe: DataRecipe,
                        params: PhysicalParams,
                        t_samples: Sequence[float]) -> ForcingBoundReport:
    """Tabulate the four residual-forcing norms against their decay shapes.

    Refuses data whose transform is not supported on the recipe's shell:
    the shapes are meaningless off the shell.
    """
    if _annular_support_fraction(U0, recipe.epsilon) > 1e-12:
        raise ValueError("datum is not supported on the recipe's spectral shell")
    eps = recipe.epsilon
    l1 = spectral_l1(U0)
    l2 = norm_l2(U0)
    mu, nu = params.mu, params.nu
    rows = []
    for t in t_samples:
        U, B = background(U0, t, params)
        F, G = background_forcing(U, B, params)
        f, g = beltrami_forcing(U, B)
        shapes = {
            "F": mu * math.exp(-mu * t) * eps * l2,
            "G": nu * math.exp(-nu * t) * eps * l2,
            "f": math.exp(-2.0 * min(mu, nu) * t) * eps * l2 * l1,
            "g": math.exp(-2.0 * nu * t) * eps * l2 * l1,
        }
        norms = {
            "F": sobolev_norm(F, 3.0),
            "G": sobolev_norm(G, 3.0),
            "f": sobolev_norm(f, 3.0),
            "g": sobolev_norm(g, 3.0),
        }
        rows.append(ForcingBoundRow(
            t=t,
            F_h3=norms["F"], G_h3=norms["G"], f_h3=norms["f"], g_h3=norms["g"],
            F_ratio=norms["F"] / max(shapes["F"], _TINY),
            G_ratio=norms["G"] / max(shapes["G"], _TINY),
            f_ratio=norms["f"] / max(shapes["f"], _TINY),
            g_ratio=norms["g"] / max(shapes["g"], _TINY),
        ))
    ratios = {name: [getattr(r, f"{name}_ratio") for r in rows] for name in "FGfg"}
    u0_h3 = sobolev_norm(U0, 3.0)
    bound = 2.0 * mu * eps * (1.0 + eps) * u0_h3
    f_max = max(r.F_h3 for r in rows)
    return ForcingBoundReport(
        rows=tuple(rows),
        epsilon=eps,
        l1_hat=l1,
        l2=l2,
        max_ratios={k: max(v) for k, v in ratios.items()},
        ratio_span={k: max(v) - min(v) for k, v in ratios.items()},
        F_alpha_bound=bound,
        F_alpha_bound_ok=bool(f_max <= bound),
    )


# -- commutator estimate --------------------------------------------------------------


@dataclass(frozen=True)
class CommutatorReport:
    lhs: float
    rhs_core: float
    ratio: float


def commutator_check(g_field: SpectralScalarField, f_field: SpectralScalarField,
                     m: int) -> CommutatorReport:
    """Measured constant of the product-commutator estimate at order m.

    lhs  = sum over |alpha| <= m of ||D^alpha(g f) - g D^alpha f||_L2
    core = ||f||_H^(m-1) ||grad g||_Linf + ||f||_Linf ||g||_H^m

    The reported ratio lhs/core is the sampled constant; it is 1-homogeneous
    in f and 0-homogeneous in g.  Inputs should be band-limited so products
    are alias-free.
    """
    if m not in (1, 2, 3):
        raise ValueError("m must be 1, 2 or 3")
    grid = g_field.grid
    n3 = grid.n**3
    g_phys = g_field.to_physical()
    f_phys = f_field.to_physical()
    gf_hat = fftops.fftn(g_phys * f_phys) / n3 * grid.dealias_mask
    lhs = 0.0
    for beta in MULTI_INDICES:
        if sum(beta) > m:
            continue
        mult = grid.deriv_multiplier(beta)
        df_phys = np.real(fftops.ifftn(mult * f_field.coeffs)) * n3
        gdf_hat = fftops.fftn(g_phys * df_phys) / n3 * grid.dealias_mask
        diff = mult * gf_hat - gdf_hat
        lhs += float(np.sqrt(grid.volume * np.sum(np.abs(diff) ** 2)))

    kx, ky, kz = grid.deriv_axes
    grads = fftops.ifftn(np.stack([
        1j * kx * g_field.coeffs, 1j * ky * g_field.coeffs, 1j * kz * g_field.coeffs,
    ])).real * n3
    grad_g_inf = float(np.max(np.sqrt(np.sum(grads**2, axis=0))))
    core = (sobolev_norm(f_field, m - 1.0) * grad_g_inf
            + float(np.max(np.abs(f_phys))) * sobolev_norm(g_field, float(m)))
    if core == 0.0:
        ratio = 0.0 if lhs == 0.0 else math.inf
    else:
        ratio = lhs / core
    return CommutatorReport(lhs=lhs, rhs_core=core, ratio=ratio)


# -- cancellation identities -----------------------------------------------------------


@dataclass(frozen=True)
class CancellationReport:
    """Normalised residuals of the three exact cancellations.

    triple_product:      |int ((curl c) x c) . (curl c)| (pointwise identity)
    dbeta:               the same with D^beta applied to the curls, per beta
    parallel_advection:  ||b.grad a - a.grad b||_L2 for a parallel pair (a, b)
    """

    triple_product: float
    dbeta: dict
    parallel_advection: float

    @property
    def max_dbeta(self) -> float:
        return max(self.dbeta.values())


def cancellation_residuals(c_field: SpectralVectorField,
                           b_field: SpectralVectorField) -> CancellationReport:
    grid = c_field.grid
    n3 = grid.n**3
    c_phys = c_field.to_physical()
    curlc = curl_hat(grid, c_field.coeffs)
    dbeta = {}
    triple = 0.0
    for beta in MULTI_INDICES:
        if sum(beta) > 3:
            continue
        mult = grid.deriv_multiplier(beta)
        x_phys = fftops.ifftn(mult * curlc).real * n3
        integrand = np.sum(cross_phys(x_phys, c_phys) * x_phys, axis=0)
        value = abs(float(np.sum(integrand) * grid.cell_volume))
        x_l2 = math.sqrt(float(np.sum(x_phys**2)) * grid.cell_volume)
        xc_l2 = math.sqrt(float(np.sum(cross_phys(x_phys, c_phys) ** 2)) * grid.cell_volume)
        scale = max(x_l2 * xc_l2, _TINY)
        res = value / scale if scale > _TINY else 0.0
        if sum(beta) == 0:
            triple = res
        dbeta[beta] = res

    a_phys = c_field.to_physical()
    b_phys = b_field.to_physical()
    adv_ab = advect_hat(grid, b_phys, c_field.coeffs)   # b.grad a
    adv_ba = advect_hat(grid, a_phys, b_field.coeffs)   # a.grad b
    diff = adv_ab - adv_ba
    nrm = lambda h: math.sqrt(float(grid.volume * np.sum(np.abs(h) ** 2)))
    denom = max(nrm(adv_ab) + nrm(adv_ba), _TINY)
    parallel = nrm(diff) / denom if denom > _TINY else 0.0
    return CancellationReport(triple_product=triple, dbeta=dbeta,
                              parallel_advection=parallel)


# -- H^3 energy-rate decomposition ------------------------------------------------------


@dataclass(frozen=True)
class EnergyRateReport:
    terms: tuple          # the ten integral terms, in order
    lhs_rate: float       # contraction of the assembled right-hand side
    dissipation: float    # mu sum ||D^beta Lambda^alpha v||^2 + nu sum ||grad D^beta c||^2
    residual: float       # |lhs_rate + dissipation - sum(terms)|
    residual_rel: float

    @property
    def term_dict(self) -> dict:
        return {f"I_{i+1}": self.terms[i] for i in range(10)}


def _commutator_advection_sum(grid: GridSpec, g_phys: np.ndarray,
                              adv_gw_hat: np.ndarray, w_hat: np.ndarray,
                              target_hat: np.ndarray) -> float:
    """sum over 0 < |beta| <= 3 of <D^beta(g.grad w) - g.grad(D^beta w), D^beta target>."""
    total = 0.0
    for beta in MULTI_INDICES[1:]:
        mult = grid.deriv_multiplier(beta)
        comm = adv_gw_hat * mult - advect_hat(grid, g_phys, w_hat * mult)
        total += _ip_weighted(grid, comm, target_hat * mult, np.ones(()))
    return total


def energy_rate_decomposition(v: SpectralVectorField, c: SpectralVectorField,
                              t: float, U0: Optional[SpectralVectorField],
                              params: PhysicalParams) -> EnergyRateReport:
    """Split the H^3 energy rate of the perturbation pair into ten mechanisms.

    The identity  1/2 dE/dt + dissipation = sum of terms  holds to roundoff
    for solenoidal band-limited inputs because every discarded piece is an
    exact discrete cancellation (skew-symmetric advection, the Hall triple
    product, and the divergence-free projection acting on solenoidal
    contractions).
    """
    grid = v.grid
    n3 = grid.n**3
    w_all = grid.multiindex_weight_all
    w_pos = grid.multiindex_weight_pos

    v_hat, c_hat = v.coeffs, c.coeffs
    curlc = curl_hat(grid, c_hat)
    phys = fftops.ifftn(np.concatenate([v_hat, c_hat, curlc])).real * n3
    vp, cp, jc = phys[0:3], phys[3:6], phys[6:9]

    if U0 is not None:
        U, B = background(U0, t, params)
        bgp = fftops.ifftn(np.concatenate([U.coeffs, B.coeffs,
                                           grid.kmag * B.coeffs])).real * n3
        Up, Bp, lamBp = bgp[0:3], bgp[3:6], bgp[6:9]
        f_forc, g_forc = beltrami_forcing(U, B)
        F_forc, G_forc = background_forcing(U, B, params)
    else:
        Up = Bp = lamBp = np.zeros((3,) + grid.shape)

    mask = grid.dealias_mask
    dealias_fft = lambda p: fftops.fftn(p) / n3 * mask

    # self-advection commutators (literal evaluation, term by term)
    adv_vv = advect_hat(grid, vp, v_hat)
    adv_vc = advect_hat(grid, vp, c_hat)
    adv_cc = advect_hat(grid, cp, c_hat)
    adv_cv = advect_hat(grid, cp, v_hat)
    i1 = -(_commutator_advection_sum(grid, vp, adv_vv, v_hat, v_hat)
           + _commutator_advection_sum(grid, vp, adv_vc, c_hat, c_hat))
    i2 = (_commutator_advection_sum(grid, cp, adv_cc, c_hat, v_hat)
          + _commutator_advection_sum(grid, cp, adv_cv, v_hat, c_hat))

    # Hall self-term after the pointwise triple-product cancellation
    x_cc = dealias_fft(cross_phys(jc, cp))
    i3 = -_ip_weighted(grid, x_cc, curlc, w_pos)

    if U0 is not None:
        i4 = -(_ip_weighted(grid, advect_hat(grid, Up, v_hat), v_hat, w_pos)
               + _ip_weighted(grid, advect_hat(grid, Up, c_hat), c_hat, w_pos))
        i5 = (_ip_weighted(grid, advect_hat(grid, Bp, c_hat), v_hat, w_pos)
              + _ip_weighted(grid, advect_hat(grid, Bp, v_hat), c_hat, w_pos))
        b_hat_field = fftops.fftn(Bp) / n3
        u_hat_field = fftops.fftn(Up) / n3
        i6 = (_ip_weighted(grid, advect_hat(grid, cp, b_hat_field), v_hat, w_all)
              - _ip_weighted(grid, advect_hat(grid, vp, b_hat_field), c_hat, w_all))
        i7 = (_ip_weighted(grid, advect_hat(grid, cp, u_hat_field), c_hat, w_all)
              - _ip_weighted(grid, advect_hat(grid, vp, u_hat_field), v_hat, w_all))
        i8 = -_ip_weighted(grid, dealias_fft(cross_phys(jc, Bp)), curlc, w_pos)
        i9 = -_ip_weighted(grid, dealias_fft(cross_phys(lamBp, cp)), curlc, w_all)
        i10 = (_ip_weighted(grid, f_forc.coeffs - F_forc.coeffs, v_hat, w_all)
               + _ip_weighted(grid, g_forc.coeffs - G_forc.coeffs, c_hat, w_all))
    else:
        i4 = i5 = i6 = i7 = i8 = i9 = i10 = 0.0

    terms = (i1, i2, i3, i4, i5, i6, i7, i8, i9, i10)

    dv, dc = rhs_perturbation(v, c, t, U0, params)
    lhs_rate = (_ip_weighted(grid, dv.coeffs, v_hat, w_all)
                + _ip_weighted(grid, dc.coeffs, c_hat, w_all))
    lam2a = grid.fractional_multiplier(2.0 * params.alpha)
    diss = (params.mu * _ip_weighted(grid, v_hat, v_hat, w_all * lam2a)
            + params.nu * _ip_weighted(grid, c_hat, c_hat, w_all * grid.k2))

    residual = abs(lhs_rate + diss - sum(terms))
    scale = max(abs(lhs_rate), diss, max((abs(x) for x in terms), default=0.0), _TINY)
    return EnergyRateReport(terms=terms, lhs_rate=lhs_rate, dissipation=diss,
                            residual=residual, residual_rel=residual / scale)


def hall_commutator_term(c: SpectralVectorField) -> float:
    """The Hall energy term evaluated through its commutator route.

    sum over 0 < |beta| <= 3 of <D^beta(c x curl c) - c x D^beta(curl c),
    D^beta(curl c)>; equals the direct route in
    :func:`energy_rate_decomposition` up to roundoff, the difference being a
    pointwise-vanishing triple product.
    """
    grid = c.grid
    n3 = grid.n**3
    c_phys = c.to_physical()
    curlc = curl_hat(grid, c.coeffs)
    curlc_phys = fftops.ifftn(curlc).real * n3
    cxw_hat = fftops.fftn(cross_phys(c_phys, curlc_phys)) / n3 * grid.dealias_mask
    total = 0.0
    for beta in MULTI_INDICES[1:]:
        mult = grid.deriv_multiplier(beta)
        dcurl_phys = fftops.ifftn(mult * curlc).real * n3
        comm_phys = (fftops.ifftn(mult * cxw_hat).real * n3
                     - cross_phys(c_phys, dcurl_phys))
        total += float(np.sum(comm_phys * dcurl_phys) * grid.cell_volume)
    return total


# -- bootstrap monitor --------------------------------------------------------------


@dataclass(frozen=True)
class BootstrapReport:
    eta: float
    gamma_estimate: float   # first time the energy exceeds eta; inf if never
    held: bool
    max_energy: float


def _series_energy(item) -> tuple[float, float]:
    if isinstance(item, TimeSeriesRecord):
        return item.t, item.energy
    t, e = item
    return float(t), float(e)


def bootstrap_monitor(series: Sequence, eta: float) -> BootstrapReport:
    """First-exceedance monitor of the perturbation energy against a threshold.

    Accepts a sequence of :class:`TimeSeriesRecord` (energy = v_h3^2 + c_h3^2)
    or of (t, energy) pairs with strictly increasing times.  Enlarging eta
    can never decrease the estimate.
    """
    if not len(series):
        raise ValueError("series is empty")
    if eta <= 0:
        raise ValueError("eta must be positive")
    pairs = [_series_energy(item) for item in series]
    times = [t for t, _ in pairs]
    if any(t1 >= t2 for t1, t2 in zip(times, times[1:])):
        raise ValueError("series times must be strictly increasing")
    gamma = math.inf
    for t, e in pairs:
        if e > eta:
            gamma = t
            break
    max_energy = max(e for _, e in pairs)
    return BootstrapReport(eta=eta, gamma_estimate=gamma,
                           held=math.isinf(gamma), max_energy=max_energy)


# -- cross-run consistency -------------------------------------------------------------


def reformulation_check(full_traj: Trajectory, pert_traj: Trajectory,
                        U0: Optional[SpectralVectorField],
                        params: PhysicalParams) -> float:
    """Max over sampled times of ||u - (v + U)||_H3 + ||b - (c + B)||_H3.

    The trajectories must be sampled at matching times (same stride and dt).
    """
    if len(full_traj.states) != len(pert_traj.states):
        raise ValueError("trajectories have different sampling")
    worst = 0.0
    for sf, sp in zip(full_traj.states, pert_traj.states):
        if abs(sf.t - sp.t) > 1e-12 * max(1.0, abs(sf.t)):
            raise ValueError(f"sample times differ: {sf.t} vs {sp.t}")
        if U0 is not None:
            U, B = background(U0, sf.t, params)
            dev = (sobolev_norm(sf.a - (sp.a + U), 3.0)
                   + sobolev_norm(sf.b - (sp.b + B), 3.0))
        else:
            dev = (sobolev_norm(sf.a - sp.a, 3.0)
                   + sobolev_norm(sf.b - sp.b, 3.0))
        worst = max(worst, dev)
    return worst


# -- observer ---------------------------------------------------------------------------


class SeriesCollector:
    """Observer building :class:`TimeSeriesRecord` entries at a fixed stride.

    For full-system states the perturbation pair is derived by subtracting
    the analytic backgrounds.  A dense (t, multi-index energy) trace is kept
    at every step for finite-difference sanity checks of the energy rate.
    """

    def __init__(self, params: PhysicalParams,
                 U0: Optional[SpectralVectorField] = None, stride: int = 1):
        if stride < 1:
            raise ValueError("stride must be >= 1")
        self.params = params
        self.U0 = U0
        self.stride = stride
        self.records: list[TimeSeriesRecord] = []
        self.dense_times: list[float] = []
        self.dense_energy: list[float] = []
        self._rates: dict[float, float] = {}
        self._count = 0

    def __call__(self, state: State) -> None:
        grid = state.grid
        if state.kind == "full":
            if self.U0 is not None:
                U, B = background(self.U0, state.t, self.params)
                v, c = state.a - U, state.b - B
            else:
                v, c = state.a, state.b
            u_h3 = sobolev_norm(state.a, 3.0)
            b_h3 = sobolev_norm(state.b, 3.0)
            hall_field = state.b
        elif state.kind == "perturbation":
            v, c = state.a, state.b
            u_h3 = b_h3 = None
            hall_field = state.b
        else:
            raise ValueError("collector expects full or perturbation states")

        e_dense = float(grid.volume * np.sum(grid.multiindex_weight_all * (
            np.sum(np.abs(v.coeffs) ** 2, axis=0) + np.sum(np.abs(c.coeffs) ** 2, axis=0))))
        self.dense_times.append(state.t)
        self.dense_energy.append(e_dense)

        take = self._count % self.stride == 0
        self._count += 1
        if not take:
            return

        rate = energy_rate_decomposition(v, c, state.t, self.U0, self.params)
        self._rates[state.t] = rate.lhs_rate
        lam_a = grid.fractional_multiplier(2.0 * self.params.alpha)
        h3w = grid.h3_weight
        v_diss = float(np.sqrt(grid.volume * np.sum(
            h3w * lam_a * np.sum(np.abs(v.coeffs) ** 2, axis=0))))
        c_diss = float(np.sqrt(grid.volume * np.sum(
            h3w * grid.k2 * np.sum(np.abs(c.coeffs) ** 2, axis=0))))
        self.records.append(TimeSeriesRecord(
            t=state.t,
            v_h3=sobolev_norm(v, 3.0),
            c_h3=sobolev_norm(c, 3.0),
            v_diss=v_diss,
            c_diss=c_diss,
            energy_residual=rate.residual_rel,
            hall_cancel=hall_energy_residual(hall_field),
            terms=rate.terms,
            u_h3=u_h3,
            b_h3=b_h3,
        ))

    def fd_rate_deviation(self) -> float:
        """Max relative gap between the finite-differenced dense energy slope
        and the contracted rate 2 * lhs_rate, over interior record times.

        The gap is O(dt^2) from the difference quotient; it cross-checks the
        identity machinery against the realised trajectory.
        """
        if len(self._rates) < 1 or len(self.dense_times) < 3:
            return 0.0
        ts = np.asarray(self.dense_times)
        es = np.asarray(self.dense_energy)
        worst = 0.0
        scale = max(float(np.max(np.abs(es))), _TINY)
        for i in range(1, len(ts) - 1):
            rate = self._rates.get(ts[i])
            if rate is None:
                continue
            h1 = ts[i] - ts[i - 1]
            h2 = ts[i + 1] - ts[i]
            fd = (h1**2 * es[i + 1] - h2**2 * es[i - 1]
                  + (h2**2 - h1**2) * es[i]) / (h1 * h2 * (h1 + h2))
            worst = max(worst, abs(fd - 2.0 * rate) / scale)
        return worst
