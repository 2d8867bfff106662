"""Machine-checkable invariants grouped into suites.

Each check returns a record ``{check_name, status, measured, tolerance}`` with
``status`` equal to ``"pass"`` when ``measured <= tolerance``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import analysis, kernel, strip, szego
from .domain import HALF_PI, BoundaryPoint, Component, DomainParams, InteriorPoint
from .grid import GridSpec

MONOTONE_SLACK = 1e-10

SUITES = ("strip", "kernel", "projector", "paley_wiener", "factorization", "norms",
          "sobolev", "convergence")


@dataclass(frozen=True)
class Context:
    params: DomainParams
    grid: GridSpec
    seed: int
    tol: float = 1e-10

    def rng(self, salt: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, salt])

    def random_data(self, trial: int = 0, components=(0, 1, 2, 3)) -> szego.BoundaryData:
        return analysis.random_band_limited(self.grid, self.seed, trial, components=components)


def _record(name: str, measured: float, tolerance: float) -> dict:
    measured = float(measured)
    ok = math.isfinite(measured) and measured <= tolerance
    return {"check_name": name, "status": "pass" if ok else "fail",
            "measured": measured, "tolerance": float(tolerance)}


def _rise(d: np.ndarray) -> float:
    """Largest step up in a sequence that should not increase (0 if none)."""
    return max(float(np.max(np.diff(d), initial=0.0)), 0.0)


def _rel(a: np.ndarray, b: np.ndarray) -> float:
    scale = float(np.max(np.abs(b)))
    return float(np.max(np.abs(a - b))) / scale if scale > 0 else float(np.max(np.abs(a)))


# --- strip --------------------------------------------------------------------------

def check_strip(ctx: Context) -> list[dict]:
    b = ctx.params.beta
    st = strip.StripParams(b)
    g = GridSpec(ctx.grid.L, ctx.grid.Nx, 0)
    rng = ctx.rng(1)
    worst = 0.0
    for _ in range(3):
        mu, w = rng.uniform(-1, 1), rng.uniform(0.5, 1.5)
        f0 = np.exp(-w * (g.xi - mu) ** 2)
        pair = strip.strip_boundary_values(f0, st, g)
        z = rng.uniform(-3, 3, 10) + 1j * rng.uniform(-0.9 * b, 0.9 * b, 10)
        worst = max(worst, _rel(strip.strip_project(pair, z, st), strip.pw_extend(f0, z, st, g)))
    out = [_record("strip.reproducing_property", worst, 1e-9)]
    pts = rng.uniform(-2, 2, (10, 2)) + 1j * rng.uniform(-0.45 * b, 0.45 * b, (10, 2))
    diff = max(abs(strip.strip_kernel(st, w_, z_) - strip.strip_kernel(st, w_, z_, "closed_form"))
               for w_, z_ in pts)
    out.append(_record("strip.kernel_closed_form", diff, 1e-11))
    mass = max(abs(strip.singular_kernel_mass(e, st) - 2.0) for e in (1e-1, 1e-2, 1e-3))
    out.append(_record("strip.summability_mass", mass, 1e-8))
    xi = np.linspace(-5, 5, 101)
    m = strip.strip_symbol_matrix(st, xi)
    out.append(_record("strip.symbol_idempotent", np.max(np.abs(m @ m - m)), 1e-14))
    return out


# --- kernel -------------------------------------------------------------------------

def check_kernel(ctx: Context) -> list[dict]:
    p = ctx.params
    rng = ctx.rng(2)
    out = []
    sym = 0.0
    for j in range(-3, 4):
        d = complex(rng.uniform(-2, 2), rng.uniform(-p.beta, p.beta))
        sym = max(sym, abs(kernel.kj_eval(p, j, d) - np.conj(kernel.kj_eval(p, j, -np.conj(d)))))
    out.append(_record("kernel.conjugate_symmetry", sym, 1e-12))
    worst = 0.0
    for _ in range(3):
        s = rng.uniform(-0.5, 0.5) * p.half_strip
        y = s + rng.uniform(-0.5, 0.5) * HALF_PI
        w = InteriorPoint(complex(rng.uniform(-1, 1), y), s, rng.uniform())
        zeta = BoundaryPoint(Component(int(rng.integers(4))), rng.uniform(-1, 1), rng.uniform())
        res = kernel.szego_kernel(p, w, zeta, tol=ctx.tol)
        # re-sum with twenty more modes on each side
        extra = 0j
        delta = complex(w.z1) - zeta.z1(p).conjugate()
        sigma = s + zeta.s(p)
        for j in list(range(res.j_max + 1, res.j_max + 21)) + list(range(res.j_min - 20, res.j_min)):
            extra += (math.exp(0.5 * j * sigma) * np.exp(2j * np.pi * j * (w.gamma - zeta.gamma))
                      * kernel.kj_eval(p, j, delta))
        worst = max(worst, abs(extra) / res.tail_bound)
    out.append(_record("kernel.certified_truncation", worst, 1.0))
    return out


# --- projector ----------------------------------------------------------------------

def check_projector(ctx: Context) -> list[dict]:
    p = ctx.params
    rng = ctx.rng(3)
    xi = rng.uniform(-20, 20, 1000)
    j = rng.integers(-64, 65, 1000)
    M = szego.boundary_symbol_matrix(p, xi, j)
    out = [
        _record("projector.symbol_idempotent", np.max(np.abs(M @ M - M)), 1e-13),
        _record("projector.symbol_hermitian", np.max(np.abs(M - np.conj(np.swapaxes(M, -1, -2)))), 1e-13),
    ]
    phi = ctx.random_data(0)
    psi = ctx.random_data(1)
    sphi = szego.boundary_szego(p, phi)
    ssphi = szego.boundary_szego(p, sphi)
    out.append(_record("projector.idempotent", _rel(ssphi.stacked(), sphi.stacked()), 1e-10))
    lhs = analysis.h2_inner(sphi, psi)
    rhs = analysis.h2_inner(phi, szego.boundary_szego(p, psi))
    scale = analysis.lp_boundary_norm(phi, 2) * analysis.lp_boundary_norm(psi, 2)
    out.append(_record("projector.self_adjoint", abs(lhs - rhs) / scale, 1e-10))
    out.append(_record("projector.contraction",
                       analysis.lp_boundary_norm(sphi, 2) / analysis.lp_boundary_norm(phi, 2) - 1.0, 1e-10))
    return out


# --- Paley-Wiener -------------------------------------------------------------------------

def gaussian_modes(ctx: Context, j_max: int = 8, salt: int = 4) -> szego.ModeCoefficients:
    """Gaussian profiles ``c_j exp(-w_j (xi - mu_j)^2)`` on ``|j| <= j_max``."""
    rng = ctx.rng(salt)
    g = {}
    for j in range(-min(j_max, ctx.grid.Nj), min(j_max, ctx.grid.Nj) + 1):
        c = complex(rng.normal(), rng.normal())
        mu = rng.uniform(-1, 1)
        w = rng.uniform(0.5, 2.0)
        g[j] = (lambda xi, c=c, mu=mu, w=w: c * np.exp(-w * (xi - mu) ** 2))
    return szego.ModeCoefficients(g)


def check_paley_wiener(ctx: Context) -> list[dict]:
    p = ctx.params
    mc = gaussian_modes(ctx)
    phi = szego.pw_worm_synthesize(p, mc, ctx.grid)
    fixed = szego.boundary_szego(p, phi)
    out = [_record("paley_wiener.fixed_point", _rel(fixed.stacked(), phi.stacked()), 1e-9)]
    rng = ctx.rng(5)
    worst = 0.0
    for _ in range(3):
        s = rng.uniform(-0.9, 0.9) * p.half_strip
        y = s + rng.uniform(-0.9, 0.9) * HALF_PI
        a = szego.project_interior(p, phi, y, s).values
        b = szego.pw_interior_field(p, mc, ctx.grid, y, s).values
        worst = max(worst, _rel(a, b))
    out.append(_record("paley_wiener.interior_mode_sum", worst, 1e-9))
    lhs = analysis.lp_boundary_norm(phi, 2) ** 2
    rhs = szego.pw_weighted_norm_sq(p, mc, ctx.grid)
    out.append(_record("paley_wiener.weighted_isometry", abs(lhs - rhs) / rhs, 1e-10))
    return out


# --- factorizations -----------------------------------------------------------------------

def check_factorization(ctx: Context) -> list[dict]:
    p = ctx.params
    rng = ctx.rng(6)
    t = rng.uniform(0, HALF_PI)
    s = rng.uniform(0, p.half_strip)
    phi = ctx.random_data(0, components=(0,))
    Op, Tag = szego.Operator, szego.OperatorTag
    out = []
    for name, outer, inner, whole in (
        ("factorization.T_I", Tag(Op.LAMBDA_I_S, s=s), Tag(Op.XI_I_T, t=t), Tag(Op.T_I_TS, t=t, s=s)),
        ("factorization.T_II", Tag(Op.LAMBDA_II_S, s=s), Tag(Op.XI_II_T, t=t), Tag(Op.T_II_TS, t=t, s=s)),
        ("factorization.S_ys", Tag(Op.LAMBDA_PRIME_YS, y=s + t, s=s), Tag(Op.LAMBDA_S, s=s), None),
    ):
        composed = szego.factor_apply(p, outer, szego.factor_apply(p, inner, phi)).values
        if whole is None:
            direct = szego.project_interior(p, phi, s + t, s).values
        else:
            direct = szego.factor_apply(p, whole, phi).values
        out.append(_record(name, _rel(composed, direct), 1e-13))
    tsum = (szego.factor_apply(p, Tag(Op.T_I_TS, t=t, s=s), phi).values
            + szego.factor_apply(p, Tag(Op.T_II_TS, t=t, s=s), phi).values)
    diff = szego.boundary_szego(p, phi).phi1.values - szego.project_interior(p, phi, s + t, s).values
    out.append(_record("factorization.difference_split", _rel(tsum, diff), 1e-11))
    return out


# --- norms ----------------------------------------------------------------------------------

def check_norms(ctx: Context) -> list[dict]:
    phi = ctx.random_data(0)
    n2 = analysis.lp_boundary_norm(phi, 2) ** 2
    out = [
        _record("norms.plancherel", abs(n2 - analysis.plancherel_sum(phi)) / n2, 1e-10),
        _record("norms.inner_product", abs(analysis.h2_inner(phi, phi) - n2) / n2, 1e-12),
    ]
    est = analysis.empirical_opnorm(lambda f: szego.boundary_szego(ctx.params, f), 2.0, 3,
                                    ctx.seed, ctx.grid)
    out.append(_record("norms.boundary_opnorm_p2", est - 1.0, 1e-10))
    return out


def check_sobolev(ctx: Context) -> list[dict]:
    p = ctx.params
    # compared on coefficients: a physical round trip between the two factors
    # lifts FFT rounding by the size of the Bessel symbol at the band edge
    F = szego.boundary_to_frequency(ctx.random_data(0))
    worst = 0.0
    for k in (0.5, 1.0, 2.0):
        sym = analysis.bessel_symbol(ctx.grid, k)[None]
        a = szego.boundary_szego_coeffs(p, ctx.grid, sym * F)
        b = sym * szego.boundary_szego_coeffs(p, ctx.grid, F)
        worst = max(worst, _rel(a, b))
    return [_record("sobolev.commutation", worst, 1e-12)]


def check_convergence(ctx: Context) -> list[dict]:
    p = ctx.params
    phi = ctx.random_data(0, components=(0,))
    phi = phi * (1.0 / analysis.lp_boundary_norm(phi, 2))
    deltas = [2.0**-k for k in range(4, 34, 3)]
    prof = analysis.convergence_profile(p, phi, "product_path", 2.0, deltas)
    d = np.array([v for _, v in prof])
    out = [_record("convergence.product_monotone", _rise(d), MONOTONE_SLACK),
           _record("convergence.product_final", d[-1], 1e-8)]
    ts = [p.beta - 2.0**-k for k in range(2, 21, 2)]
    prof = analysis.convergence_profile(p, phi, "coupled_path", 2.0, ts)
    d = np.array([v for _, v in prof])
    out.append(_record("convergence.coupled_monotone", _rise(d), MONOTONE_SLACK))
    out.append(_record("convergence.coupled_final_sup", d[-1], 1e-5))
    return out


CHECKS: dict[str, Callable[[Context], list[dict]]] = {
    "strip": check_strip,
    "kernel": check_kernel,
    "projector": check_projector,
    "paley_wiener": check_paley_wiener,
    "factorization": check_factorization,
    "norms": check_norms,
    "sobolev": check_sobolev,
    "convergence": check_convergence,
}


def run_suite(suite: str, ctx: Context) -> list[dict]:
    """Run one suite, or every suite for ``"all"``."""
    names = SUITES if suite == "all" else (suite,)
    records = []
    for name in names:
        if name not in CHECKS:
            raise KeyError(name)
        records.extend(CHECKS[name](ctx))
    return records


def all_passed(records: list[dict]) -> bool:
    return all(r["status"] == "pass" for r in records)


__all__ = ["CHECKS", "Context", "SUITES", "all_passed", "gaussian_modes", "run_suite"]
