"""Pointwise curvature invariants built from the double-form algebra.

Normalization, fixed here once: constant sectional curvature lambda means
R = (lambda/2) g^2, consistent with the Gauss equation R = (1/2) B^2 on the
unit sphere (B = g).  Consequences used throughout:

* ``gauss_bonnet_even(R, 1)`` equals half the classical scalar curvature,
* ``einstein_lovelock(R, 1)`` is exactly the classical Einstein tensor
  (1/2) scal g - Ric,
* ``sectional_2p(R, 1, (e_i, e_j))`` is the ordinary sectional curvature.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import permutations

import numpy as np

from .double_forms import (
    CurvatureTensor,
    DoubleForm,
    contract,
    contract_iter,
    hodge,
    inner,
    metric_form,
    multi_indices,
    power,
    wedge,
    _alloc,
    _coerce_scalar,
    _zero_scalar,
)

__all__ = [
    "ShapeOperatorData",
    "LovelockCoefficients",
    "thorpe_oracle",
    "gauss_bonnet_even",
    "generalized_ricci",
    "einstein_lovelock",
    "sectional_2p",
    "weitzenbock_form",
    "as_operator",
    "gauss_equation",
    "mean_curvature_s",
    "even_intrinsic_identity",
    "gauss_bonnet_odd",
    "minimality_defect",
    "einstein_pq_defect",
    "lovelock_lagrangian",
    "h4k_positivity_check",
    "elementary_symmetric",
]


def _as_form(R):
    return R.form if isinstance(R, CurvatureTensor) else R


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

class ShapeOperatorData:
    """Scalar second fundamental form B of a hypersurface, as a symmetric
    (1,1) double form; carries the principal curvatures when diagonal."""

    __slots__ = ("form", "kappa")

    def __init__(self, form, kappa=None):
        if not isinstance(form, DoubleForm) or (form.p, form.q) != (1, 1):
            raise ValueError("shape operator wraps a (1,1) DoubleForm")
        if form != form.transpose():
            raise ValueError("shape operator must be symmetric")
        if kappa is not None:
            kappa = tuple(kappa)
            if len(kappa) != form.n:
                raise ValueError("principal curvature list has wrong length")
            diag = _alloc((form.n, form.n), form.exact)
            for i, k in enumerate(kappa):
                diag[i, i] = _coerce_scalar(k, form.exact)
            if not (form - DoubleForm(form.n, 1, 1, diag)).is_zero():
                raise ValueError("kappa does not match the coefficient table")
        object.__setattr__(self, "form", form)
        object.__setattr__(self, "kappa", kappa)

    def __setattr__(self, name, value):
        raise AttributeError("ShapeOperatorData is immutable")

    @property
    def n(self):
        return self.form.n

    @classmethod
    def diagonal(cls, kappa, exact=False):
        n = len(kappa)
        data = _alloc((n, n), exact)
        for i, k in enumerate(kappa):
            data[i, i] = _coerce_scalar(k, exact)
        return cls(DoubleForm(n, 1, 1, data), kappa=tuple(kappa))

    @classmethod
    def from_matrix(cls, mat, exact=False):
        mat = np.asarray(mat)
        n = mat.shape[0]
        data = _alloc((n, n), exact)
        for i in range(n):
            for j in range(n):
                data[i, j] = _coerce_scalar(mat[i, j], exact)
        return cls(DoubleForm(n, 1, 1, data))


class LovelockCoefficients:
    """Coefficients (c_0, c_2, ..., c_2m) of a Lovelock-type Lagrangian."""

    __slots__ = ("c",)

    def __init__(self, c):
        c = tuple(c)
        if not c:
            raise ValueError("at least the constant coefficient is required")
        object.__setattr__(self, "c", c)

    def __setattr__(self, name, value):
        raise AttributeError("LovelockCoefficients is immutable")

    @property
    def order(self):
        return len(self.c) - 1


# ---------------------------------------------------------------------------
# Brute-force oracle
# ---------------------------------------------------------------------------

def thorpe_oracle(R, p, u, v):
    """Brute-force symmetrization evaluation of the p-th exterior power of R.

    Sums eps(alpha) eps(beta) prod_i R(u_a(2i), u_a(2i+1); v_b(2i), v_b(2i+1))
    over alpha, beta in S_2p and divides by 4^p: the antisymmetry of R in each
    block makes the 2^p x 2^p internal pair orderings contribute identically,
    so the normalized sum equals ``power(R, p)`` evaluated at (u; v).  Cost is
    ((2p)!)^2 products, hence the p <= 2 guard.
    """
    if p < 1:
        raise ValueError("p must be positive")
    if p > 2:
        raise ValueError("oracle restricted to p <= 2 (cost grows like ((2p)!)^2)")
    form = _as_form(R)
    if 2 * p > form.n:
        raise ValueError("2p exceeds the ambient dimension")
    u = tuple(int(x) for x in u)
    v = tuple(int(x) for x in v)
    if len(u) != 2 * p or len(v) != 2 * p:
        raise ValueError("u and v must list 2p basis indices each")
    total = _zero_scalar(form.exact)
    perms = list(permutations(range(2 * p)))
    sgn = {pi: _perm_sign(pi) for pi in perms}
    for alpha in perms:
        ua = [u[i] for i in alpha]
        sa = sgn[alpha]
        for beta in perms:
            vb = [v[i] for i in beta]
            term = sa * sgn[beta]
            prod = None
            for i in range(p):
                f = form.evaluate((ua[2 * i], ua[2 * i + 1]), (vb[2 * i], vb[2 * i + 1]))
                prod = f if prod is None else prod * f
                if prod == 0:
                    break
            total += term * prod
    if form.exact:
        return total / Fraction(4 ** p)
    return total / float(4 ** p)


def _perm_sign(perm):
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


# ---------------------------------------------------------------------------
# Gauss-Bonnet curvatures and Einstein-Lovelock tensors
# ---------------------------------------------------------------------------

def gauss_bonnet_even(R, k):
    """The 2k-th Gauss-Bonnet curvature *(g^(n-2k) R^k) / (n-2k)!.

    Equals half the scalar curvature at k = 1, and (lambda/2)^k n!/(n-2k)!
    in constant curvature lambda.
    """
    form = _as_form(R)
    n = form.n
    if k < 1 or 2 * k > n:
        raise ValueError("need 1 <= k with 2k <= n")
    g = metric_form(n, form.exact)
    top = wedge(power(g, n - 2 * k), power(form, k))
    val = hodge(top).data[0, 0]
    return val / _coerce_scalar(math.factorial(n - 2 * k), form.exact)


def generalized_ricci(R, k):
    """(2k-1)-fold Ricci contraction of R^k divided by (2k-1)!: the (1,1)
    curvature whose k = 1 case is the ordinary Ricci tensor."""
    form = _as_form(R)
    if k < 1 or 2 * k > form.n:
        raise ValueError("need 1 <= k with 2k <= n")
    c = contract_iter(power(form, k), 2 * k - 1)
    return c / _coerce_scalar(math.factorial(2 * k - 1), form.exact)


def einstein_lovelock(R, k):
    """Einstein-Lovelock tensor of order 2k: h_2k g minus the generalized
    Ricci tensor; the metric itself at k = 0, the Einstein tensor at k = 1."""
    form = _as_form(R)
    n = form.n
    if k < 0 or 2 * k > n:
        raise ValueError("need 0 <= k with 2k <= n")
    g = metric_form(n, form.exact)
    if k == 0:
        return g
    return gauss_bonnet_even(R, k) * g - generalized_ricci(R, k)


def sectional_2p(R, p, plane, tol=1e-10):
    """Sectional curvature of the 2p-plane spanned by the given orthonormal
    vectors: (2^p / (2p)!) R^p evaluated on the plane twice."""
    form = _as_form(R)
    n = form.n
    if p < 1 or 2 * p > n:
        raise ValueError("need 1 <= p with 2p <= n")
    vecs = list(plane)
    if len(vecs) != 2 * p:
        raise ValueError("a 2p-plane needs 2p spanning vectors")
    if all(isinstance(x, (int, np.integer)) for x in vecs):
        idx = [int(x) for x in vecs]
        if len(set(idx)) != len(idx):
            raise ValueError("degenerate plane: repeated basis vector")
        val = power(form, p).evaluate(idx, idx)
        scale = _coerce_scalar(2 ** p, form.exact) / _coerce_scalar(
            math.factorial(2 * p), form.exact)
        return val * scale
    U = np.asarray(vecs, dtype=float)
    gram = U @ U.T
    if np.max(np.abs(gram - np.eye(2 * p))) > tol:
        raise ValueError("plane vectors are not orthonormal")
    val = power(form, p).evaluate_vectors(U, U)
    return val * (2 ** p) / math.factorial(2 * p)


def weitzenbock_form(R, p):
    """Double form of the curvature term acting on p-forms:
    {g Ric / (p-1) - 2 R} g^(p-2) / (p-2)!."""
    form = _as_form(R)
    n = form.n
    if p < 2 or p > n:
        raise ValueError("need 2 <= p <= n")
    g = metric_form(n, form.exact)
    ric = contract(form)
    core = wedge(g, ric) / (p - 1) - 2 * form
    tail = power(g, p - 2) / _coerce_scalar(math.factorial(p - 2), form.exact)
    return wedge(core, tail)


def as_operator(a):
    """Matrix of a (p,p) form on the canonical p-index basis; normalized so
    that g^p / p! maps to the identity."""
    form = _as_form(a)
    if form.p != form.q:
        raise ValueError("operator view requires p = q")
    if form.exact:
        return form.data.astype(np.float64)
    return form.data.copy()


# ---------------------------------------------------------------------------
# Hypersurface quantities
# ---------------------------------------------------------------------------

def gauss_equation(B, lam=0):
    """Curvature of a hypersurface with second fundamental form B inside a
    space form of curvature lambda: (1/2) B^2 + (lambda/2) g^2."""
    if not isinstance(B, ShapeOperatorData):
        B = ShapeOperatorData(_as_form(B))
    n = B.n
    exact = B.form.exact
    half = Fraction(1, 2) if exact else 0.5
    g = metric_form(n, exact)
    lam = _coerce_scalar(lam, exact)
    form = half * wedge(B.form, B.form) + (lam * half) * wedge(g, g)
    return CurvatureTensor(form)


def mean_curvature_s(B, k, n=None):
    """k-th mean curvature *(g^(n-k) B^k) / (k! (n-k)!); equals the k-th
    elementary symmetric function of the principal curvatures."""
    if not isinstance(B, ShapeOperatorData):
        B = ShapeOperatorData(_as_form(B))
    if n is None:
        n = B.n
    if n != B.n:
        raise ValueError("dimension does not match the shape operator")
    if k < 0 or k > n:
        raise ValueError("need 0 <= k <= n")
    exact = B.form.exact
    if k == 0:
        return _coerce_scalar(1, exact)
    g = metric_form(n, exact)
    top = wedge(power(g, n - k), power(B.form, k))
    val = hodge(top).data[0, 0]
    denom = _coerce_scalar(math.factorial(k) * math.factorial(n - k), exact)
    return val / denom


def even_intrinsic_identity(B, p, n=None):
    """Both sides of s_2p = (2^p / (2p)!) h_2p for the induced curvature
    (1/2) B^2; returns the pair (s_2p, scaled h_2p)."""
    if not isinstance(B, ShapeOperatorData):
        B = ShapeOperatorData(_as_form(B))
    if n is None:
        n = B.n
    if p < 1 or 2 * p > n:
        raise ValueError("need 1 <= p with 2p <= n")
    s = mean_curvature_s(B, 2 * p, n)
    h = gauss_bonnet_even(gauss_equation(B, 0), p)
    exact = B.form.exact
    scale = _coerce_scalar(2 ** p, exact) / _coerce_scalar(math.factorial(2 * p), exact)
    return s, scale * h


def gauss_bonnet_odd(R, B, p, n=None):
    """Odd Gauss-Bonnet curvature *(g^(n-2p-1) R^p B / (n-2p-1)!) in the
    normal direction carried by B; the trace of B at p = 0."""
    form = _as_form(R)
    if not isinstance(B, ShapeOperatorData):
        B = ShapeOperatorData(_as_form(B))
    if n is None:
        n = form.n
    if n != form.n or n != B.n:
        raise ValueError("dimension mismatch")
    if p < 0 or 2 * p + 1 > n:
        raise ValueError("need 0 <= p with 2p+1 <= n")
    exact = form.exact
    g = metric_form(n, exact)
    top = wedge(wedge(power(g, n - 2 * p - 1), power(form, p)), B.form)
    val = hodge(top).data[0, 0]
    return val / _coerce_scalar(math.factorial(n - 2 * p - 1), exact)


def elementary_symmetric(values):
    """All elementary symmetric functions e_0, ..., e_n of the given values."""
    e = [1]
    for v in values:
        e = [e[0]] + [e[i] + v * e[i - 1] for i in range(1, len(e))] + [v * e[-1]]
    return e


def minimality_defect(kappa, lam, k):
    """Criticality defect of a hypersurface of a lambda-space form for the
    total 2k-th Gauss-Bonnet curvature:

        sum_i (2k-2i+1)! (n-2k-1+2i)! lam^i / (i! (k-i)!) s_(2k-2i+1)

    Zero exactly when the hypersurface is (2k)-minimal.  Proportional to
    ``gauss_bonnet_odd`` of the induced curvature with constant
    2^k (n-2k-1)!/k!.
    """
    kappa = list(kappa)
    n = len(kappa)
    if k < 0 or 2 * k + 1 > n:
        raise ValueError("need 0 <= k with 2k+1 <= n")
    e = elementary_symmetric(kappa)
    total = 0
    for i in range(k + 1):
        m = 2 * k - 2 * i + 1
        coef = (math.factorial(m) * math.factorial(n - 2 * k - 1 + 2 * i)
                / (math.factorial(i) * math.factorial(k - i)))
        total += coef * (lam ** i) * e[m]
    return total


# ---------------------------------------------------------------------------
# Generalized Einstein conditions
# ---------------------------------------------------------------------------

def einstein_pq_defect(R, p, q):
    """Least-squares proportionality test of c^p R^q against g^(2q-p).

    Returns (lambda_fit, residual); the metric is (p,q)-Einstein exactly when
    the residual vanishes.
    """
    form = _as_form(R)
    n = form.n
    if not 0 < p < 2 * q:
        raise ValueError("need 0 < p < 2q")
    if 2 * q > n:
        raise ValueError("need 2q <= n")
    c = contract_iter(power(form, q), p)
    gpow = power(metric_form(n, form.exact), 2 * q - p)
    lam = inner(c, gpow) / inner(gpow, gpow)
    residual = (c - lam * gpow).norm()
    return lam, residual


def lovelock_lagrangian(R, coeffs):
    """Lagrangian sum c_0 + sum_k c_2k h_2k for the supplied coefficients."""
    form = _as_form(R)
    if not isinstance(coeffs, LovelockCoefficients):
        coeffs = LovelockCoefficients(coeffs)
    if 2 * coeffs.order > form.n:
        raise ValueError("too many coefficients for this dimension")
    total = _coerce_scalar(coeffs.c[0], form.exact)
    for k in range(1, coeffs.order + 1):
        ck = _coerce_scalar(coeffs.c[k], form.exact)
        if ck != 0:
            total = total + ck * gauss_bonnet_even(R, k)
    return total


def h4k_positivity_check(R, k, tol=1e-10):
    """Check the (1,k)-Einstein condition c R^k = lambda g^(2k-1) and, when it
    holds, that h_4k is nonnegative.  Returns (is_1k_einstein, h_4k)."""
    form = _as_form(R)
    n = form.n
    if k < 1 or 4 * k > n:
        raise ValueError("need 1 <= k with 4k <= n")
    _, residual = einstein_pq_defect(R, 1, k)
    is_einstein = residual <= tol
    h4k = gauss_bonnet_even(R, 2 * k)
    if is_einstein and float(h4k) < -tol:
        raise ArithmeticError(
            f"h_{4 * k} = {h4k} negative for a (1,{k})-Einstein tensor")
    return is_einstein, h4k
