"""Finite-difference Riemannian geometry on periodic lattices.

A :class:`MetricField` is a periodic grid of symmetric positive-definite
matrices.  All derivatives use 4th-order central differences with periodic
wrap.  Curvature is computed per point, lowered with the metric, and expressed
in the orthonormal frame obtained from the lower-triangular Cholesky factor of
g(x) (equivalently, Gram-Schmidt of the coordinate basis in axis order), so
double-form components are directly comparable across points.

Sign conventions: the curvature components satisfy
``sectional_2p(riemann_at(...), 1, plane) = lambda`` on a constant-curvature
metric, and ``ell_2k(..., k=0, ...)`` is the positive-spectrum Laplacian
(-trace_g Hess).

Per-point operations are thin wrappers over whole-grid fields, which are
cached on the metric; the ``*_field`` functions are the bulk interface.
"""

from __future__ import annotations

import json
import math
from functools import lru_cache
from itertools import combinations

import numpy as np

from .double_forms import CurvatureTensor, DoubleForm, multi_indices, _merge_sign, _rank
from .rng import SplitMix64

__all__ = [
    "MetricField",
    "christoffel",
    "christoffel_field",
    "riemann_at",
    "riemann_frame_field",
    "integrate",
    "total_gauss_bonnet",
    "gauss_bonnet_field",
    "einstein_lovelock_frame_field",
    "einstein_lovelock_coord_field",
    "divergence",
    "divergence_field",
    "hessian",
    "hessian_field",
    "ell_2k",
    "ell_2k_field",
    "variational_check",
    "selfadjointness_check",
    "scalar_curvature_classical",
    "laplace_beltrami_divform",
    "volume_form_field",
    "random_trig_metric",
    "random_trig_scalar_field",
    "random_trig_symmetric_field",
    "metric_field_to_dict",
    "metric_field_from_dict",
]

_SPD_FLOOR = 1e-8


# ---------------------------------------------------------------------------
# Stencils (4th-order central, periodic)
# ---------------------------------------------------------------------------

def _d1(F, axis, h):
    """4th-order centered first derivative along a periodic grid axis."""
    return (8.0 * (np.roll(F, -1, axis) - np.roll(F, 1, axis))
            - (np.roll(F, -2, axis) - np.roll(F, 2, axis))) / (12.0 * h)


def _d2(F, axis, h):
    """4th-order centered second derivative along a periodic grid axis."""
    return (-np.roll(F, -2, axis) + 16.0 * np.roll(F, -1, axis) - 30.0 * F
            + 16.0 * np.roll(F, 1, axis) - np.roll(F, 2, axis)) / (12.0 * h * h)


# ---------------------------------------------------------------------------
# MetricField
# ---------------------------------------------------------------------------

class MetricField:
    """Periodic lattice of SPD matrices g_ij(x) with per-axis spacing.

    The value array is frozen after validation; derived geometric fields are
    computed lazily and cached, so the object behaves as an immutable value.
    """

    def __init__(self, values, spacing):
        values = np.asarray(values, dtype=np.float64)
        n = values.shape[-1]
        if values.ndim != n + 2 or values.shape[-2] != n:
            raise ValueError("values must have shape (*grid, n, n) with one grid axis per dimension")
        shape = values.shape[:-2]
        if min(shape) < 5:
            raise ValueError("need at least 5 points per axis for the 4th-order stencils")
        if np.max(np.abs(values - np.swapaxes(values, -1, -2))) > 1e-12:
            raise ValueError("metric values must be symmetric")
        values = 0.5 * (values + np.swapaxes(values, -1, -2))
        eig_min = float(np.min(np.linalg.eigvalsh(values)))
        if not eig_min > _SPD_FLOOR:
            raise ValueError(f"metric not positive definite (min eigenvalue {eig_min:.3e})")
        spacing = np.asarray(spacing, dtype=np.float64)
        if spacing.ndim == 0:
            spacing = np.full(n, float(spacing))
        if spacing.shape != (n,) or np.any(spacing <= 0):
            raise ValueError("spacing must be a positive scalar or one positive value per axis")
        values.flags.writeable = False
        self.values = values
        self.n = n
        self.shape = shape
        self.spacing = tuple(float(s) for s in spacing)
        self._cache = {}

    @property
    def periods(self):
        return tuple(s * h for s, h in zip(self.shape, self.spacing))

    @property
    def cell_volume(self):
        return float(np.prod(self.spacing))

    @classmethod
    def flat(cls, n, size, spacing=None):
        """Flat torus with ``size`` points per axis (period 2*pi by default)."""
        if spacing is None:
            spacing = 2.0 * math.pi / size
        shape = (size,) * n
        vals = np.broadcast_to(np.eye(n), shape + (n, n)).copy()
        return cls(vals, spacing)

    @classmethod
    def from_trig(cls, n, size, terms, spacing=None):
        """Flat metric plus symmetric trigonometric perturbation modes.

        Each term is a dict {"i", "j", "amp", "wave", "phase"}: it adds
        amp * cos(2*pi * wave . idx / size + phase) to g_ij (and g_ji).
        """
        if spacing is None:
            spacing = 2.0 * math.pi / size
        shape = (size,) * n
        vals = np.broadcast_to(np.eye(n), shape + (n, n)).copy()
        for t in terms:
            i, j = int(t["i"]), int(t["j"])
            mode = _trig_mode(shape, t["wave"], float(t.get("phase", 0.0)))
            vals[..., i, j] += float(t["amp"]) * mode
            if i != j:
                vals[..., j, i] += float(t["amp"]) * mode
        return cls(vals, spacing)

    def point(self, x):
        x = tuple(int(a) % s for a, s in zip(x, self.shape))
        if len(x) != len(self.shape):
            raise ValueError("grid point has wrong number of coordinates")
        return x


def _trig_mode(shape, wave, phase):
    angle = np.zeros(shape)
    for ax, (w, npts) in enumerate(zip(wave, shape)):
        if w == 0:
            continue
        line = 2.0 * math.pi * float(w) * np.arange(npts) / npts
        angle = angle + line.reshape((1,) * ax + (npts,) + (1,) * (len(shape) - ax - 1))
    return np.cos(angle + phase)


def _check_scalar_field(gf, f):
    f = np.asarray(f, dtype=np.float64)
    if f.shape != gf.shape:
        raise ValueError(f"scalar field shape {f.shape} does not match grid {gf.shape}")
    return f


def _check_tensor_field(gf, T):
    T = np.asarray(T, dtype=np.float64)
    if T.shape != gf.shape + (gf.n, gf.n):
        raise ValueError("tensor field shape does not match the grid")
    return T


def _field(gf, key, builder):
    if key not in gf._cache:
        gf._cache[key] = builder(gf)
    return gf._cache[key]


# ---------------------------------------------------------------------------
# Derived geometric fields
# ---------------------------------------------------------------------------

def _inv_field(gf):
    return np.linalg.inv(gf.values)


def _sqrtdet_field(gf):
    return np.sqrt(np.linalg.det(gf.values))


def _chol_field(gf):
    return np.linalg.cholesky(gf.values)


def _frame_field(gf):
    # e_a = F[:, a] with F = L^{-T}: orthonormal, upper triangular (axis-ordered
    # Gram-Schmidt), smooth in g.
    L = _field(gf, "chol", _chol_field)
    return np.swapaxes(np.linalg.inv(L), -1, -2)


def _christoffel_field(gf):
    g = gf.values
    n, h = gf.n, gf.spacing
    DG = np.stack([_d1(g, ax, h[ax]) for ax in range(n)], axis=-3)  # [a,i,j] = d_a g_ij
    low = 0.5 * (np.einsum("...ijl->...lij", DG) + np.einsum("...jil->...lij", DG) - DG)
    ginv = _field(gf, "ginv", _inv_field)
    return np.einsum("...kl,...lij->...kij", ginv, low)  # Gamma^k_ij


def christoffel_field(gf):
    """Christoffel symbols Gamma^k_ij at every point, shape (*grid, n, n, n)."""
    return _field(gf, "gamma", _christoffel_field)


def christoffel(gf, x):
    """Christoffel symbols Gamma^k_ij at one grid point."""
    return christoffel_field(gf)[gf.point(x)]


def _riemann_pair_coord_field(gf):
    """Coordinate curvature as a pair-indexed table R[(ij),(kl)], lowered and
    antisymmetrized within each block."""
    g = gf.values
    n, h = gf.n, gf.spacing
    G = christoffel_field(gf)
    pairs = multi_indices(n, 2)
    m2 = len(pairs)
    Rup = np.empty(gf.shape + (m2, n, n))  # [(i,j), l, k] = R^l_ijk
    for l in range(n):
        Gl = G[..., l, :, :]
        dGl = [_d1(Gl, ax, h[ax]) for ax in range(n)]
        for pr, (i, j) in enumerate(pairs):
            quad = (np.einsum("...m,...mk->...k", G[..., l, i, :], G[..., :, j, :])
                    - np.einsum("...m,...mk->...k", G[..., l, j, :], G[..., :, i, :]))
            Rup[..., pr, l, :] = dGl[i][..., j, :] - dGl[j][..., i, :] + quad
    # R(e_i,e_j; e_k,e_l) = g(R(d_i,d_j) d_l, d_k) = g_km R^m_ijl
    Rlow = np.einsum("...km,...pml->...pkl", g, Rup)
    Rc = np.empty(gf.shape + (m2, m2))
    for qr, (k, l) in enumerate(pairs):
        Rc[..., :, qr] = 0.5 * (Rlow[..., :, k, l] - Rlow[..., :, l, k])
    return Rc


def _pair_frame_matrix(gf, frame):
    """W[(ab),(ij)] = minor of the frame matrix: transforms coordinate pair
    components to frame pair components."""
    n = gf.n
    pairs = multi_indices(n, 2)
    m2 = len(pairs)
    W = np.empty(gf.shape + (m2, m2))
    for pr, (a, b) in enumerate(pairs):
        for qr, (i, j) in enumerate(pairs):
            W[..., pr, qr] = (frame[..., i, a] * frame[..., j, b]
                              - frame[..., i, b] * frame[..., j, a])
    return W


def _riemann_frame_field(gf):
    Rc = _field(gf, "r_pair_coord", _riemann_pair_coord_field)
    F = _field(gf, "frame", _frame_field)
    W = _pair_frame_matrix(gf, F)
    return np.einsum("...pi,...ij,...qj->...pq", W, Rc, W)


def riemann_frame_field(gf, rotation=None):
    """Curvature in the orthonormal frame as a pair-indexed table of shape
    (*grid, C(n,2), C(n,2)).

    ``rotation`` (an orthogonal n x n matrix) re-frames by e_a -> e Q, which
    must leave every curvature invariant; it exists for invariance tests and
    bypasses the cache.
    """
    if rotation is None:
        return _field(gf, "r_pair_frame", _riemann_frame_field)
    Rc = _field(gf, "r_pair_coord", _riemann_pair_coord_field)
    F = _field(gf, "frame", _frame_field) @ np.asarray(rotation, dtype=np.float64)
    W = _pair_frame_matrix(gf, F)
    return np.einsum("...pi,...ij,...qj->...pq", W, Rc, W)


def riemann_at(gf, x):
    """Curvature tensor at a grid point, in the orthonormal frame of g(x).

    Block symmetry and the Bianchi identity hold to the stencil order, not
    exactly; see :meth:`CurvatureTensor.validate`.
    """
    Rf = riemann_frame_field(gf)[gf.point(x)]
    return CurvatureTensor(DoubleForm(gf.n, 2, 2, Rf.copy()))


# ---------------------------------------------------------------------------
# Gauss-Bonnet and Einstein-Lovelock fields via pair-table contractions
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _partitions_with_sign(A):
    """All (2k)!/2^k ordered sorted-pair partitions of A with merge signs."""
    if not A:
        return (((), 1),)
    out = []
    for pair in combinations(A, 2):
        rest = tuple(x for x in A if x not in pair)
        s0 = _merge_sign(pair, rest)
        for tail, s1 in _partitions_with_sign(rest):
            out.append(((pair,) + tail, s0 * s1))
    return tuple(out)


@lru_cache(maxsize=None)
def _h_table(n, k):
    """Flat term table for h_2k = sum over 2k-subsets A of R^k(A, A)."""
    pr = _rank(n, 2)
    signs, P, Q = [], [[] for _ in range(k)], [[] for _ in range(k)]
    for A in multi_indices(n, 2 * k):
        parts = _partitions_with_sign(A)
        for pseq, sp in parts:
            for qseq, sq in parts:
                signs.append(float(sp * sq))
                for i in range(k):
                    P[i].append(pr[pseq[i]])
                    Q[i].append(pr[qseq[i]])
    return (np.array(signs), np.array(P, dtype=np.intp), np.array(Q, dtype=np.intp))


@lru_cache(maxsize=None)
def _ric_table(n, k):
    """Per-component term tables for the generalized Ricci tensor
    c^(2k-1) R^k / (2k-1)! expressed through frame pair components."""
    pr = _rank(n, 2)
    entries = []
    for x in range(n):
        for y in range(n):
            signs, P, Q = [], [[] for _ in range(k)], [[] for _ in range(k)]
            avail = [u for u in range(n) if u != x and u != y]
            for U in combinations(avail, 2 * k - 1):
                sx = (-1) ** sum(1 for u in U if u > x)
                sy = (-1) ** sum(1 for u in U if u > y)
                A = tuple(sorted(U + (x,)))
                B = tuple(sorted(U + (y,)))
                for pseq, sp in _partitions_with_sign(A):
                    for qseq, sq in _partitions_with_sign(B):
                        signs.append(float(sx * sy * sp * sq))
                        for i in range(k):
                            P[i].append(pr[pseq[i]])
                            Q[i].append(pr[qseq[i]])
            entries.append((x, y, np.array(signs),
                            np.array(P, dtype=np.intp), np.array(Q, dtype=np.intp)))
    return tuple(entries)


def _eval_pair_terms(Rf, signs, P, Q):
    prod = Rf[..., P[0], Q[0]]
    for i in range(1, P.shape[0]):
        prod = prod * Rf[..., P[i], Q[i]]
    return prod @ signs


def gauss_bonnet_field(gf, k):
    """Pointwise 2k-th Gauss-Bonnet curvature over the whole grid."""
    if k == 0:
        return np.ones(gf.shape)
    if 2 * k > gf.n:
        raise ValueError("need 2k <= n")
    key = ("h", k)
    if key not in gf._cache:
        Rf = riemann_frame_field(gf)
        gf._cache[key] = _eval_pair_terms(Rf, *_h_table(gf.n, k))
    return gf._cache[key]


def _ric_frame_field(gf, k):
    key = ("ric", k)
    if key not in gf._cache:
        Rf = riemann_frame_field(gf)
        n = gf.n
        out = np.empty(gf.shape + (n, n))
        for x, y, signs, P, Q in _ric_table(n, k):
            out[..., x, y] = _eval_pair_terms(Rf, signs, P, Q)
        gf._cache[key] = out
    return gf._cache[key]


def einstein_lovelock_frame_field(gf, k):
    """Einstein-Lovelock tensor of order 2k in the orthonormal frame."""
    if k < 0 or 2 * k > gf.n:
        raise ValueError("need 0 <= k with 2k <= n")
    if k == 0:
        return np.broadcast_to(np.eye(gf.n), gf.shape + (gf.n, gf.n))
    key = ("T_frame", k)
    if key not in gf._cache:
        h = gauss_bonnet_field(gf, k)
        gf._cache[key] = h[..., None, None] * np.eye(gf.n) - _ric_frame_field(gf, k)
    return gf._cache[key]


def einstein_lovelock_coord_field(gf, k):
    """Einstein-Lovelock tensor as a coordinate (0,2) tensor field T_ij."""
    key = ("T_coord", k)
    if key not in gf._cache:
        Tf = einstein_lovelock_frame_field(gf, k)
        L = _field(gf, "chol", _chol_field)
        gf._cache[key] = np.einsum("...ia,...ab,...jb->...ij", L, Tf, L)
    return gf._cache[key]


# ---------------------------------------------------------------------------
# Integration, divergence, Hessians, Laplacians
# ---------------------------------------------------------------------------

def volume_form_field(gf):
    """sqrt(det g) at every point."""
    return _field(gf, "sqrtdet", _sqrtdet_field)


def integrate(gf, f):
    """Integral of a scalar field against the metric volume element, summed in
    a fixed order with exactly-rounded compensated summation."""
    f = _check_scalar_field(gf, f)
    total = math.fsum((f * volume_form_field(gf)).ravel(order="C"))
    return total * gf.cell_volume


def total_gauss_bonnet(gf, k):
    """Total 2k-th Gauss-Bonnet curvature; the volume functional at k = 0."""
    return integrate(gf, gauss_bonnet_field(gf, k))


def divergence_field(gf, T):
    """(div T)_j = g^ik (d_i T_kj - Gamma^l_ik T_lj - Gamma^l_ij T_kl)."""
    T = _check_tensor_field(gf, T)
    n, h = gf.n, gf.spacing
    G = christoffel_field(gf)
    ginv = _field(gf, "ginv", _inv_field)
    DT = np.stack([_d1(T, ax, h[ax]) for ax in range(n)], axis=-3)  # [i,k,j]
    return (np.einsum("...ik,...ikj->...j", ginv, DT)
            - np.einsum("...ik,...lik,...lj->...j", ginv, G, T)
            - np.einsum("...ik,...lij,...kl->...j", ginv, G, T))


def divergence(gf, T, x):
    """Covariant divergence covector of a symmetric 2-tensor field at a point."""
    return divergence_field(gf, T)[gf.point(x)]


def hessian_field(gf, f, frame=False):
    """Covariant Hessian d_i d_j f - Gamma^k_ij d_k f at every point;
    orthonormal-frame components when ``frame`` is true."""
    f = _check_scalar_field(gf, f)
    n, h = gf.n, gf.spacing
    Df = np.stack([_d1(f, ax, h[ax]) for ax in range(n)], axis=-1)
    H = np.empty(gf.shape + (n, n))
    for i in range(n):
        H[..., i, i] = _d2(f, i, h[i])
        for j in range(i + 1, n):
            mixed = _d1(Df[..., j], i, h[i])
            H[..., i, j] = mixed
            H[..., j, i] = mixed
    H = H - np.einsum("...kij,...k->...ij", christoffel_field(gf), Df)
    H = 0.5 * (H + np.swapaxes(H, -1, -2))
    if frame:
        F = _field(gf, "frame", _frame_field)
        H = np.einsum("...ia,...ij,...jb->...ab", F, H, F)
    return H


def hessian(gf, f, x, frame=False):
    """Covariant Hessian of f at one grid point."""
    return hessian_field(gf, f, frame=frame)[gf.point(x)]


def ell_2k_field(gf, f, k):
    """The generalized Laplacian -<T_2k, Hess f> over the whole grid; the
    positive-spectrum Laplace-Beltrami operator at k = 0."""
    if k < 0 or 2 * k >= gf.n:
        raise ValueError("need 0 <= 2k < n")
    Hf = hessian_field(gf, f, frame=True)
    Tf = einstein_lovelock_frame_field(gf, k)
    return -np.einsum("...ab,...ab->...", Tf, Hf)


def ell_2k(gf, f, k, x):
    """The generalized Laplacian of f at one grid point."""
    return float(ell_2k_field(gf, f, k)[gf.point(x)])


def scalar_curvature_classical(gf):
    """Scalar curvature by the index-notation Ricci contraction (independent
    of the double-form pipeline except for the shared Christoffel field)."""
    n, h = gf.n, gf.spacing
    G = christoffel_field(gf)
    ginv = _field(gf, "ginv", _inv_field)
    tr1 = np.einsum("...llk->...k", G)  # Gamma^l_lk
    term1 = np.zeros(gf.shape + (n, n))
    for l in range(n):
        term1 += _d1(G[..., l, :, :], l, h[l])
    term2 = np.stack([_d1(tr1, ax, h[ax]) for ax in range(n)], axis=-2)  # [j,k]
    term3 = np.einsum("...m,...mjk->...jk", tr1, G)
    term4 = np.einsum("...ljm,...mlk->...jk", G, G)
    ric = term1 - term2 + term3 - term4
    return np.einsum("...jk,...jk->...", ginv, ric)


def laplace_beltrami_divform(gf, f):
    """Positive-spectrum Laplace-Beltrami operator in divergence form,
    -(1/sqrt g) d_i (sqrt g g^ij d_j f): an independent discretization used to
    cross-check ``ell_2k`` at k = 0."""
    f = _check_scalar_field(gf, f)
    n, h = gf.n, gf.spacing
    A = volume_form_field(gf)[..., None, None] * _field(gf, "ginv", _inv_field)
    Df = np.stack([_d1(f, ax, h[ax]) for ax in range(n)], axis=-1)
    flux = np.einsum("...ij,...j->...i", A, Df)
    div = np.zeros(gf.shape)
    for i in range(n):
        div += _d1(flux[..., i], i, h[i])
    return -div / volume_form_field(gf)


# ---------------------------------------------------------------------------
# Variational and self-adjointness checks
# ---------------------------------------------------------------------------

def _pair_inner_field(gf, T_frame, S_coord):
    """Pointwise inner product of a frame-components symmetric 2-tensor with a
    coordinate-components one."""
    F = _field(gf, "frame", _frame_field)
    Sf = np.einsum("...ia,...ij,...jb->...ab", F, S_coord, F)
    return np.einsum("...ab,...ab->...", T_frame, Sf)


def _richardson_limit(eps, vals):
    """Neville extrapolation to 0 in eps^2 (central differences have even
    error expansions)."""
    x = [e * e for e in eps]
    tab = [list(vals)]
    m = len(vals)
    for level in range(1, m):
        prev = tab[-1]
        cur = []
        for i in range(m - level):
            xi, xj = x[i], x[i + level]
            cur.append((xj * prev[i] - xi * prev[i + 1]) / (xj - xi))
        tab.append(cur)
    return tab[-1][0]


def variational_check(gf, hdir, k, eps_list, workers=1):
    """Central-difference directional derivative of the total 2k-th
    Gauss-Bonnet curvature against the Einstein-Lovelock pairing.

    For each eps computes D(eps) = (H(g + eps h) - H(g - eps h)) / (2 eps) and
    compares with G = (1/2) integral of <T_2k(g), h>; returns a report with
    the per-eps relative defects and the Richardson-extrapolated limit.
    """
    hdir = _check_tensor_field(gf, hdir)
    eps_list = [float(e) for e in eps_list]
    if any(e <= 0 for e in eps_list):
        raise ValueError("eps values must be positive")
    Tf = einstein_lovelock_frame_field(gf, k)
    G = 0.5 * integrate(gf, _pair_inner_field(gf, Tf, hdir))

    perturbed = []
    for eps in eps_list:
        for sgn in (+1.0, -1.0):
            perturbed.append(MetricField(gf.values + sgn * eps * hdir, gf.spacing))

    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=workers) as pool:
            totals = list(pool.map(lambda m: total_gauss_bonnet(m, k), perturbed))
    else:
        totals = [total_gauss_bonnet(m, k) for m in perturbed]

    D = [(totals[2 * i] - totals[2 * i + 1]) / (2.0 * eps_list[i])
         for i in range(len(eps_list))]
    extrapolated = _richardson_limit(eps_list, D) if len(D) > 1 else D[0]
    delta = 1e-30
    defects = [abs(d - G) / (abs(G) + delta) for d in D]
    return {
        "k": k,
        "eps": eps_list,
        "G": G,
        "D": D,
        "defects": defects,
        "extrapolated": extrapolated,
        "extrapolated_defect": abs(extrapolated - G) / (abs(G) + delta),
    }


def selfadjointness_check(gf, f1, f2, k):
    """|integral(f1 ell_2k(f2)) - integral(f2 ell_2k(f1))| over the torus."""
    f1 = _check_scalar_field(gf, f1)
    f2 = _check_scalar_field(gf, f2)
    a = integrate(gf, f1 * ell_2k_field(gf, f2, k))
    b = integrate(gf, f2 * ell_2k_field(gf, f1, k))
    return abs(a - b)


# ---------------------------------------------------------------------------
# Fixture generation and serialization
# ---------------------------------------------------------------------------

def random_trig_terms(n, amplitude, seed, modes):
    """Low-frequency symmetric trig perturbation terms, seed-deterministic."""
    rng = SplitMix64(seed)
    terms = []
    for _ in range(modes):
        i = rng.randint(0, n - 1)
        j = rng.randint(0, n - 1)
        if i > j:
            i, j = j, i
        wave = [0] * n
        while not any(wave):
            wave = [rng.randint(-1, 1) for _ in range(n)]
        terms.append({
            "i": i, "j": j,
            "amp": amplitude * rng.uniform(0.5, 1.0) / modes,
            "wave": wave,
            "phase": rng.uniform(0.0, 2.0 * math.pi),
        })
    return terms


def random_trig_metric(n, size, amplitude, seed, modes=None, spacing=None):
    """Perturbed flat torus metric: identity plus ``modes`` random frequency-one
    trig modes of total amplitude about ``amplitude``."""
    if modes is None:
        modes = 2 * n
    terms = random_trig_terms(n, amplitude, seed, modes)
    return MetricField.from_trig(n, size, terms, spacing=spacing)


def random_trig_scalar_field(gf, seed, amplitude=1.0, modes=4):
    """Random low-frequency scalar field on the grid of ``gf``."""
    rng = SplitMix64(seed)
    n = gf.n
    out = np.zeros(gf.shape)
    for _ in range(modes):
        wave = [0] * n
        while not any(wave):
            wave = [rng.randint(-1, 1) for _ in range(n)]
        out += (amplitude * rng.uniform(0.5, 1.0) / modes
                * _trig_mode(gf.shape, wave, rng.uniform(0.0, 2.0 * math.pi)))
    return out


def random_trig_symmetric_field(gf, seed, amplitude=1.0, modes=None):
    """Random low-frequency symmetric 2-tensor field (a variation direction)."""
    n = gf.n
    if modes is None:
        modes = 2 * n
    out = np.zeros(gf.shape + (n, n))
    for t in random_trig_terms(n, amplitude, seed, modes):
        mode = _trig_mode(gf.shape, t["wave"], t["phase"])
        out[..., t["i"], t["j"]] += t["amp"] * mode
        if t["i"] != t["j"]:
            out[..., t["j"], t["i"]] += t["amp"] * mode
    return out


def metric_field_to_dict(gf):
    return {
        "kind": "explicit",
        "n": gf.n,
        "shape": list(gf.shape),
        "h": list(gf.spacing),
        "values": gf.values.tolist(),
    }


def metric_field_from_dict(d):
    kind = d.get("kind", "explicit")
    if kind == "explicit":
        return MetricField(np.asarray(d["values"], dtype=np.float64), d["h"])
    if kind == "trig":
        size = d["shape"][0] if isinstance(d["shape"], (list, tuple)) else int(d["shape"])
        if isinstance(d["shape"], (list, tuple)) and len(set(d["shape"])) != 1:
            raise ValueError("trig metrics use a uniform grid size")
        spacing = d.get("h")
        if isinstance(spacing, (list, tuple)):
            spacing = spacing[0] if len(set(spacing)) == 1 else None
            if spacing is None:
                raise ValueError("trig metrics use a uniform spacing")
        return MetricField.from_trig(int(d["n"]), int(size), d["terms"], spacing=spacing)
    raise ValueError(f"unknown metric field kind {kind!r}")


def metric_field_dumps(gf):
    return json.dumps(metric_field_to_dict(gf), sort_keys=True, separators=(",", ":"))


def metric_field_loads(s):
    return metric_field_from_dict(json.loads(s))
