"""Verification suites shared by the acceptance tests and the CLI.

Each suite computes a defect table against pinned tolerances and returns an
:class:`InvariantReport`; a suite passes when every defect entry passes.

The lattice fixtures are low-frequency trigonometric perturbations of flat
tori.  Their amplitudes (module constants below) were chosen at desk scale so
the identity defects sit well inside the tolerances while the metrics stay
far from degeneracy; the identities hold for any amplitude, the residuals are
pure discretization error.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import curvature as cv
from . import discrete as ds
from . import models
from .double_forms import (
    DoubleForm,
    contract,
    contract_iter,
    hodge,
    inner,
    metric_form,
    multi_indices,
    power,
    wedge,
    zero_form,
)
from .report import InvariantReport
from .rng import SplitMix64

__all__ = [
    "algebra_suite",
    "variational_suite",
    "laplacian_suite",
    "lovelock_div_suite",
    "SUITES",
]

# Lattice fixture amplitudes (see module docstring).
VAR_AMPLITUDE = 0.05
DIV_AMPLITUDE = 0.05
LAP_AMPLITUDE = 0.002

VAR_EPS = (1e-2, 5e-3, 2.5e-3)
VAR_CONFIGS = ((4, 12, 1), (5, 8, 2))       # (n, grid size, k)
DIV_LADDERS = ((4, (6, 12, 24), 1), (5, (6, 12), 2))
LAP_GRID = (4, 12)
ORDER_MIN = 3.5


def _rel(a, b):
    return abs(a - b) / max(1.0, abs(a), abs(b))


def _random_exact_form(n, p, q, rng):
    data = np.empty((len(multi_indices(n, p)), len(multi_indices(n, q))), dtype=object)
    for i in range(data.shape[0]):
        for j in range(data.shape[1]):
            data[i, j] = Fraction(rng.randint(-3, 3))
    return DoubleForm(n, p, q, data)


# ---------------------------------------------------------------------------
# Algebra suite (exact mode plus float identity battery)
# ---------------------------------------------------------------------------

def algebra_suite(seed=1, n_random=100, berger_seeds=1000):
    report = InvariantReport(environment={"scalar_mode": "exact+float"})
    rng = SplitMix64(seed)

    # Brute-force symmetrization oracle vs exterior powers, exhaustive at n=4.
    worst = Fraction(0)
    for s in range(3):
        R = models.random_bianchi(4, seed=seed + s, terms=2, exact=True)
        for p in (1, 2):
            Rp = power(R.form, p)
            for u in multi_indices(4, 2 * p):
                for v in multi_indices(4, 2 * p):
                    d = abs(cv.thorpe_oracle(R, p, u, v) - Rp.evaluate(u, v))
                    worst = max(worst, d)
    report.add_defect("thorpe_oracle_equivalence", float(worst), 0.0)

    # Graded commutativity and associativity on random exact forms.
    worst_c = worst_a = Fraction(0)
    for n in (3, 4, 5):
        for pa, qa, pb, qb in ((1, 1, 1, 1), (1, 2, 2, 1), (2, 2, 1, 1), (0, 1, 1, 0)):
            a = _random_exact_form(n, pa, qa, rng)
            b = _random_exact_form(n, pb, qb, rng)
            c = _random_exact_form(n, 1, 1, rng)
            sign = (-1) ** (pa * pb + qa * qb)
            diff = wedge(a, b) - sign * wedge(b, a)
            if diff.data.size:
                worst_c = max(worst_c, max(abs(v) for v in diff.data.flat))
            diff = wedge(wedge(a, b), c) - wedge(a, wedge(b, c))
            if diff.data.size:
                worst_a = max(worst_a, max(abs(v) for v in diff.data.flat))
    report.add_defect("graded_commutativity", float(worst_c), 0.0)
    report.add_defect("associativity", float(worst_a), 0.0)

    # Adjointness of metric multiplication and contraction, exhaustive basis
    # forms at n = 4 on (1,1) -> (2,2).
    n = 4
    g = metric_form(n, exact=True)
    worst = Fraction(0)
    m2 = len(multi_indices(n, 2))
    for i in range(n):
        for j in range(n):
            a_data = np.full((n, n), Fraction(0), dtype=object)
            a_data[i, j] = Fraction(1)
            a = DoubleForm(n, 1, 1, a_data)
            for ri in range(m2):
                for ci in range(m2):
                    b_data = np.full((m2, m2), Fraction(0), dtype=object)
                    b_data[ri, ci] = Fraction(1)
                    b = DoubleForm(n, 2, 2, b_data)
                    worst = max(worst, abs(inner(wedge(g, a), b) - inner(a, contract(b))))
    report.add_defect("metric_contraction_adjointness", float(worst), 0.0)

    # Hodge involution on (p,p) forms and the g-power identity.
    worst = Fraction(0)
    for n in (3, 4, 5):
        for p in range(n + 1):
            a = _random_exact_form(n, p, p, rng)
            diff = hodge(hodge(a)) - a
            if diff.data.size:
                worst = max(worst, max(abs(v) for v in diff.data.flat))
    report.add_defect("hodge_involution", float(worst), 0.0)
    worst = Fraction(0)
    for n in (3, 4, 5, 6):
        g = metric_form(n, exact=True)
        for k in range(n + 1):
            lhs = hodge(power(g, k) / Fraction(math.factorial(k)))
            rhs = power(g, n - k) / Fraction(math.factorial(n - k))
            diff = lhs - rhs
            worst = max(worst, max(abs(v) for v in diff.data.flat))
    report.add_defect("hodge_metric_powers", float(worst), 0.0)

    # Constant-curvature closed forms, exact, all n <= 8.
    worst = Fraction(0)
    for n in range(2, 9):
        for lam in (-2, -1, 0, 1, 2):
            R = models.constant_curvature(n, Fraction(lam), exact=True)
            for k in range(1, n // 2 + 1):
                expected = (Fraction(lam, 2) ** k
                            * Fraction(math.factorial(n), math.factorial(n - 2 * k)))
                worst = max(worst, abs(cv.gauss_bonnet_even(R, k) - expected))
    report.add_defect("constant_curvature_h2k_exact", float(worst), 0.0)

    # Einstein tensor reduction T_2 = scal/2 g - Ric, float.
    worst = 0.0
    for n in (4, 5, 6):
        for s in range(n_random // 3 + 1):
            R = models.random_bianchi(n, seed=1000 * n + s)
            ric = contract(R.form)
            scal = float(contract(ric).data[0, 0])
            expected = 0.5 * scal * metric_form(n) - ric
            T = cv.einstein_lovelock(R, 1)
            worst = max(worst, (T - expected).norm() / max(1.0, expected.norm()))
    report.add_defect("einstein_tensor_reduction", worst, 1e-12)

    # Hypersurface mean curvatures and the even intrinsic identity, float.
    worst_s = worst_i = 0.0
    for s in range(n_random):
        n = 3 + s % 6  # 3..8
        rng_k = SplitMix64(7000 + s)
        kappa = [rng_k.uniform(-1.5, 1.5) for _ in range(n)]
        B = cv.ShapeOperatorData.diagonal(kappa)
        e = cv.elementary_symmetric(kappa)
        for k in range(n + 1):
            worst_s = max(worst_s, _rel(cv.mean_curvature_s(B, k, n), e[k]))
        for p in range(1, min(2, n // 2) + 1):
            lhs, rhs = cv.even_intrinsic_identity(B, p, n)
            worst_i = max(worst_i, _rel(lhs, rhs))
    report.add_defect("mean_curvature_elementary_symmetric", worst_s, 1e-12)
    report.add_defect("even_intrinsic_identity", worst_i, 1e-12)

    # Odd pairing h_(2k+1) = <T_2k, B>, float.
    worst = 0.0
    for (n, k) in ((5, 1), (6, 2)):
        for s in range(n_random):
            R = models.random_bianchi(n, seed=500 + s)
            B = models.random_shape_operator(n, seed=900 + s)
            lhs = cv.gauss_bonnet_odd(R, B, k, n)
            rhs = inner(cv.einstein_lovelock(R, k), B.form)
            worst = max(worst, _rel(lhs, rhs))
    report.add_defect("odd_curvature_pairing", worst, 1e-12)

    # Exterior square vanishing for curvature supported on 3 axes inside n=5.
    worst = 0.0
    for s in range(n_random):
        R3 = models.random_bianchi(3, seed=300 + s)
        R = models.product(R3, models.constant_curvature(2, 0.0))
        worst = max(worst, power(R.form, 2).norm())
    report.add_defect("three_dim_support_square_vanishes", worst, 0.0)

    # Nonnegativity of h_4 across Ricci-proportional tensors at n = 4.
    min_h4 = math.inf
    for s in range(berger_seeds):
        R = models.random_einstein(4, seed=s)
        _, h4 = cv.h4k_positivity_check(R, 1)
        min_h4 = min(min_h4, float(h4))
    report.results["berger_min_h4"] = min_h4
    report.add_defect("berger_h4_nonnegative", max(0.0, -min_h4), 1e-10)

    return report


# ---------------------------------------------------------------------------
# Lattice suites
# ---------------------------------------------------------------------------

def _fit_order(sizes, defects):
    """Least-squares slope of log(defect) against log(size)."""
    xs = np.log(np.asarray(sizes, dtype=float))
    ys = np.log(np.asarray(defects, dtype=float))
    slope = np.polyfit(xs, ys, 1)[0]
    return float(-slope)


def variational_suite(configs=VAR_CONFIGS, eps=VAR_EPS, directions=3,
                      amplitude=VAR_AMPLITUDE, seed=11, tol=1e-4, workers=1):
    """Directional-derivative test of the total Gauss-Bonnet functionals
    against the Einstein-Lovelock pairing."""
    report = InvariantReport(environment={
        "scalar_mode": "float", "eps": list(eps), "amplitude": amplitude,
        "grids": [list(c) for c in configs],
    })
    for (n, size, k) in configs:
        gf = ds.random_trig_metric(n, size, amplitude, seed=seed + n)
        for d in range(directions):
            hdir = ds.random_trig_symmetric_field(gf, seed=100 * n + d, amplitude=0.1)
            res = ds.variational_check(gf, hdir, k, eps, workers=workers)
            name = f"variational_n{n}_k{k}_dir{d}"
            report.results[name] = {
                "G": res["G"], "D": res["D"], "extrapolated": res["extrapolated"],
            }
            report.add_defect(name, res["extrapolated_defect"], tol)
    return report


def laplacian_suite(grid=LAP_GRID, amplitude=LAP_AMPLITUDE, seed=23,
                    tol_scale=1e-8, order_min=ORDER_MIN):
    """Divergence-integral, self-adjointness and classical-limit checks of the
    generalized Laplacians at k = 0, 1."""
    n, size = grid
    report = InvariantReport(environment={
        "scalar_mode": "float", "grid": [n, size], "amplitude": amplitude,
    })
    gf = ds.random_trig_metric(n, size, amplitude, seed=seed)
    f1 = ds.random_trig_scalar_field(gf, seed=seed + 1)
    f2 = ds.random_trig_scalar_field(gf, seed=seed + 2)
    norm1 = ds.integrate(gf, np.abs(f1))
    for k in (0, 1):
        total = abs(ds.integrate(gf, ds.ell_2k_field(gf, f1, k)))
        report.add_defect(f"ell{2 * k}_integral_zero", total / norm1, tol_scale)
        sa = ds.selfadjointness_check(gf, f1, f2, k)
        scale = 0.5 * (_l2(gf, f1) * _l2(gf, ds.ell_2k_field(gf, f2, k))
                       + _l2(gf, f2) * _l2(gf, ds.ell_2k_field(gf, f1, k)))
        report.add_defect(f"ell{2 * k}_self_adjointness", sa / scale, tol_scale)
        # definiteness scan of T_2k on this fixture (maximum-principle context)
        eigs = np.linalg.eigvalsh(ds.einstein_lovelock_frame_field(gf, k))
        report.results[f"T{2 * k}_eig_range"] = [float(eigs.min()), float(eigs.max())]

    # ell_0 against an independent divergence-form discretization: 4th order.
    sizes, defects = [], []
    for s in (size // 2, size):
        gfs = ds.random_trig_metric(n, s, amplitude, seed=seed)
        fs = ds.random_trig_scalar_field(gfs, seed=seed + 1)
        diff = ds.ell_2k_field(gfs, fs, 0) - ds.laplace_beltrami_divform(gfs, fs)
        sizes.append(s)
        defects.append(float(np.max(np.abs(diff))))
    order = _fit_order(sizes, defects)
    report.results["ell0_vs_divform"] = {"sizes": sizes, "defects": defects, "order": order}
    report.add_defect("ell0_classical_order_deficit", max(0.0, order_min - order), 0.0)
    return report


def lovelock_div_suite(ladders=DIV_LADDERS, amplitude=DIV_AMPLITUDE, seed=5,
                       order_min=ORDER_MIN, final_tol=1e-5):
    """Grid-refinement study of the covariant divergence of the
    Einstein-Lovelock tensors on perturbed flat tori."""
    report = InvariantReport(environment={
        "scalar_mode": "float", "amplitude": amplitude,
        "ladders": [[n, list(sizes), k] for (n, sizes, k) in ladders],
    })
    for (n, sizes, k) in ladders:
        defects = []
        for size in sizes:
            gf = ds.random_trig_metric(n, size, amplitude, seed=seed + n)
            T = ds.einstein_lovelock_coord_field(gf, k)
            div = ds.divergence_field(gf, T)
            defects.append(float(np.max(np.abs(div))))
        order = _fit_order(sizes, defects)
        name = f"divT{2 * k}_n{n}"
        report.results[name] = {"sizes": list(sizes), "defects": defects, "order": order}
        report.add_defect(f"{name}_order_deficit", max(0.0, order_min - order), 0.0)
        report.add_defect(f"{name}_final", defects[-1], final_tol)
    return report


def _l2(gf, f):
    return math.sqrt(ds.integrate(gf, np.asarray(f) ** 2))


SUITES = {
    "algebra": algebra_suite,
    "variational": variational_suite,
    "laplacian": laplacian_suite,
    "lovelock-div": lovelock_div_suite,
}
