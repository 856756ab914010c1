"""Dense (p,q)-double-form algebra over R^n in a fixed orthonormal oriented basis.

A (p,q)-double form is a multilinear map that is alternating within its first
p arguments and within its last q arguments.  Coefficients are stored densely
at canonical (strictly increasing) index pairs, ranked colexicographically;
evaluation at any other argument ordering applies permutation signs.

Two scalar modes are supported: float64, and exact rationals
(``fractions.Fraction`` held in object arrays).  The algebra is identical in
both modes; the exact mode exists so algebraic identities can be checked with
zero tolerance.

Sign conventions (fixed once, used everywhere):

* product:  ``wedge(a, b)`` at (K, L) sums over splittings K = I + I',
  L = J + J' with the sign of the permutation sorting the concatenation
  (I, I') into K (and likewise for columns),
* Hodge star: ``*(e_I (x) e_J) = sign(I, Ic) sign(J, Jc) e_Ic (x) e_Jc``
  where sign(I, Ic) sorts (I, Ic) into (0, ..., n-1),
* inner product: the canonical basis ``{e_I (x) e_J}`` is orthonormal.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product as iproduct

import numpy as np

__all__ = [
    "MAX_DIM",
    "DoubleForm",
    "CurvatureTensor",
    "multi_indices",
    "validate_multi_index",
    "metric_form",
    "zero_form",
    "one_form",
    "wedge",
    "power",
    "contract",
    "contract_iter",
    "hodge",
    "inner",
    "transpose",
    "norm",
    "bianchi_defect",
]

#: Hard cap on the ambient dimension.  The dense tables scale like C(n,p)^2
#: and the permutation caches like 2^n; beyond 12 axes they stop being cheap.
MAX_DIM = 12


# ---------------------------------------------------------------------------
# Multi-indices (canonical basis labels for exterior powers)
# ---------------------------------------------------------------------------

def validate_multi_index(axes, n):
    """Check that ``axes`` is a strictly increasing tuple of ints in [0, n)."""
    axes = tuple(int(a) for a in axes)
    if any(a < 0 or a >= n for a in axes):
        raise ValueError(f"multi-index {axes} has entries outside [0, {n})")
    if any(a >= b for a, b in zip(axes, axes[1:])):
        raise ValueError(f"multi-index {axes} is not strictly increasing")
    return axes


@lru_cache(maxsize=None)
def multi_indices(n, k):
    """All strictly increasing k-tuples from range(n), in colexicographic order."""
    if k < 0 or k > n:
        return ()
    return tuple(sorted(combinations(range(n), k), key=lambda t: t[::-1]))


@lru_cache(maxsize=None)
def _rank(n, k):
    return {I: r for r, I in enumerate(multi_indices(n, k))}


def _merge_sign(I, J):
    """Sign of the permutation sorting the concatenation of the disjoint sorted
    tuples (I, J); 0 if they intersect."""
    sign = 1
    for a in I:
        for b in J:
            if a == b:
                return 0
            if a > b:
                sign = -sign
    return sign


@lru_cache(maxsize=None)
def _sort_sign(args):
    """(sign, sorted tuple) for an argument tuple; sign 0 on repeats."""
    lst = list(args)
    sign = 1
    for i in range(1, len(lst)):
        j = i
        while j > 0 and lst[j - 1] > lst[j]:
            lst[j - 1], lst[j] = lst[j], lst[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(lst, lst[1:]):
        if a == b:
            return 0, ()
    return sign, tuple(lst)


@lru_cache(maxsize=None)
def _split_table(n, total, left):
    """For each canonical `total`-index K: all (rank_I, rank_I', sign) with
    K = I + I', |I| = left, signed by sorting the concatenation into K."""
    rl, rr = _rank(n, left), _rank(n, total - left)
    table = []
    for K in multi_indices(n, total):
        kset = set(K)
        rows = []
        for I in combinations(K, left):
            J = tuple(x for x in K if x not in set(I))
            rows.append((rl[I], rr[J], _merge_sign(I, J)))
        table.append(tuple(rows))
        del kset
    return tuple(table)


@lru_cache(maxsize=None)
def _insert_table(n, k):
    """tab[i][rank(I)] = (rank(I + {i}), sign of sorting (i, I)), or None if i in I."""
    subs = multi_indices(n, k)
    ranks1 = _rank(n, k + 1)
    tab = []
    for i in range(n):
        row = []
        for I in subs:
            if i in I:
                row.append(None)
            else:
                sign = 1
                for e in I:
                    if e < i:
                        sign = -sign
                row.append((ranks1[tuple(sorted(I + (i,)))], sign))
        tab.append(tuple(row))
    return tuple(tab)


@lru_cache(maxsize=None)
def _hodge_table(n, k):
    """tab[rank(I)] = (rank(complement of I), sign sorting (I, Ic) into 0..n-1)."""
    ranks_c = _rank(n, n - k)
    tab = []
    for I in multi_indices(n, k):
        iset = set(I)
        Ic = tuple(x for x in range(n) if x not in iset)
        tab.append((ranks_c[Ic], _merge_sign(I, Ic)))
    return tuple(tab)


# ---------------------------------------------------------------------------
# DoubleForm
# ---------------------------------------------------------------------------

def _zero_scalar(exact):
    return Fraction(0) if exact else 0.0


def _coerce_scalar(v, exact):
    if exact:
        if isinstance(v, Fraction):
            return v
        if isinstance(v, (int, str)):
            return Fraction(v)
        return Fraction(v)  # exact binary value of a float
    return float(v)


def _alloc(shape, exact):
    if exact:
        buf = np.empty(shape, dtype=object)
        buf[...] = Fraction(0)
        return buf
    return np.zeros(shape, dtype=np.float64)


class DoubleForm:
    """A (p,q)-double form on an n-dimensional oriented inner-product space.

    Values are immutable after construction.  ``data[r, c]`` holds the
    coefficient at the r-th canonical p-index and c-th canonical q-index
    (colexicographic ranks).  Degrees above n are permitted and represent the
    zero form (their coefficient tables are empty), which keeps the graded
    product total.
    """

    __slots__ = ("n", "p", "q", "data")

    def __init__(self, n, p, q, data=None, exact=False):
        n, p, q = int(n), int(p), int(q)
        if not 1 <= n <= MAX_DIM:
            raise ValueError(f"dimension n={n} outside [1, {MAX_DIM}]")
        if p < 0 or q < 0:
            raise ValueError("bidegree must be nonnegative")
        shape = (len(multi_indices(n, p)), len(multi_indices(n, q)))
        if data is None:
            data = _alloc(shape, exact)
        else:
            data = np.asarray(data)
            if data.shape != shape:
                raise ValueError(f"coefficient table has shape {data.shape}, expected {shape}")
            if data.dtype != object:
                data = data.astype(np.float64)
                if data.size and not np.all(np.isfinite(data)):
                    raise ValueError("coefficients must be finite")
        data.flags.writeable = False
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "data", data)

    def __setattr__(self, name, value):
        raise AttributeError("DoubleForm is immutable")

    # -- basic protocol ----------------------------------------------------

    @property
    def exact(self):
        return self.data.dtype == object

    @property
    def bidegree(self):
        return (self.p, self.q)

    def __repr__(self):
        mode = "exact" if self.exact else "float"
        return f"DoubleForm(n={self.n}, p={self.p}, q={self.q}, {mode})"

    def __eq__(self, other):
        if not isinstance(other, DoubleForm):
            return NotImplemented
        return (self.n, self.p, self.q) == (other.n, other.p, other.q) and bool(
            np.array_equal(self.data, other.data)
        )

    __hash__ = None

    def _like(self, data):
        return DoubleForm(self.n, self.p, self.q, data)

    def _check_compatible(self, other, same_bidegree=True):
        if not isinstance(other, DoubleForm):
            raise TypeError("expected a DoubleForm")
        if self.n != other.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")
        if self.exact != other.exact:
            raise ValueError("cannot mix exact and float forms; convert explicitly")
        if same_bidegree and (self.p, self.q) != (other.p, other.q):
            raise ValueError(f"bidegree mismatch: {self.bidegree} vs {other.bidegree}")

    def __add__(self, other):
        self._check_compatible(other)
        return self._like(self.data + other.data)

    def __sub__(self, other):
        self._check_compatible(other)
        return self._like(self.data - other.data)

    def __neg__(self):
        return self._like(-self.data)

    def __mul__(self, scalar):
        s = _coerce_scalar(scalar, self.exact)
        return self._like(self.data * s)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        s = _coerce_scalar(scalar, self.exact)
        return self._like(self.data / s)

    def is_zero(self):
        if self.data.size == 0:
            return True
        return bool(np.all(self.data == _zero_scalar(self.exact)))

    def astype_float(self):
        if not self.exact:
            return self
        return self._like(self.data.astype(np.float64))

    # -- coefficient access and evaluation ----------------------------------

    def coeff(self, I, J):
        """Coefficient at canonical (sorted) multi-indices I, J."""
        I = validate_multi_index(I, self.n)
        J = validate_multi_index(J, self.n)
        return self.data[_rank(self.n, self.p)[I], _rank(self.n, self.q)[J]]

    def evaluate(self, rows, cols):
        """Evaluate at basis-vector arguments given as axis indices, in any
        order; applies permutation signs, returns 0 on repeated arguments."""
        if len(rows) != self.p or len(cols) != self.q:
            raise ValueError("wrong number of arguments for this bidegree")
        sr, I = _sort_sign(tuple(int(r) for r in rows))
        if sr == 0:
            return _zero_scalar(self.exact)
        sc, J = _sort_sign(tuple(int(c) for c in cols))
        if sc == 0:
            return _zero_scalar(self.exact)
        v = self.data[_rank(self.n, self.p)[I], _rank(self.n, self.q)[J]]
        return v if sr * sc == 1 else -v

    def evaluate_vectors(self, rows, cols):
        """Evaluate at arbitrary vector arguments (float mode).

        ``rows`` is a (p, n) array of row arguments, ``cols`` a (q, n) array;
        the value is the sum over canonical index pairs of coefficient times
        the corresponding minors of the argument matrices.
        """
        U = np.asarray(rows, dtype=float).reshape(self.p, self.n)
        V = np.asarray(cols, dtype=float).reshape(self.q, self.n)
        data = self.data.astype(np.float64) if self.exact else self.data
        mu = np.array([np.linalg.det(U[:, I]) if self.p else 1.0
                       for I in multi_indices(self.n, self.p)])
        mv = np.array([np.linalg.det(V[:, J]) if self.q else 1.0
                       for J in multi_indices(self.n, self.q)])
        return float(mu @ data @ mv)

    def transpose(self):
        """The (q,p)-form with the two argument blocks interchanged."""
        return DoubleForm(self.n, self.q, self.p, self.data.T.copy())

    def norm(self):
        return math.sqrt(float(inner(self, self)))

    # -- serialization -------------------------------------------------------

    def to_dict(self):
        coeffs = []
        mi_p = multi_indices(self.n, self.p)
        mi_q = multi_indices(self.n, self.q)
        zero = _zero_scalar(self.exact)
        for r, I in enumerate(mi_p):
            for c, J in enumerate(mi_q):
                v = self.data[r, c]
                if v == zero:
                    continue
                if self.exact:
                    coeffs.append({"i": list(I), "j": list(J), "v": str(v)})
                else:
                    coeffs.append({"i": list(I), "j": list(J), "v": float(v)})
        return {"n": self.n, "p": self.p, "q": self.q, "coeffs": coeffs}

    @classmethod
    def from_dict(cls, d):
        try:
            n, p, q = int(d["n"]), int(d["p"]), int(d["q"])
            raw = d["coeffs"]
        except (KeyError, TypeError) as e:
            raise ValueError(f"malformed double-form document: {e}") from None
        exact = any(isinstance(entry.get("v"), str) for entry in raw)
        out = _alloc((len(multi_indices(n, p)), len(multi_indices(n, q))), exact)
        seen = set()
        for entry in raw:
            I = validate_multi_index(entry["i"], n)
            J = validate_multi_index(entry["j"], n)
            if len(I) != p or len(J) != q:
                raise ValueError(f"index pair ({I}, {J}) has wrong lengths for bidegree ({p}, {q})")
            if (I, J) in seen:
                raise ValueError(f"duplicate coefficient at ({I}, {J})")
            seen.add((I, J))
            v = entry["v"]
            out[_rank(n, p)[I], _rank(n, q)[J]] = Fraction(v) if exact else float(v)
        return cls(n, p, q, out)

    def dumps(self):
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def loads(cls, s):
        return cls.from_dict(json.loads(s))


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------

def zero_form(n, p, q, exact=False):
    return DoubleForm(n, p, q, exact=exact)


def one_form(n, exact=False):
    """The (0,0) form with value 1 (unit of the graded product)."""
    data = _alloc((1, 1), exact)
    data[0, 0] = Fraction(1) if exact else 1.0
    return DoubleForm(n, 0, 0, data)


def metric_form(n, exact=False):
    """The (1,1) form of the inner product: coefficients (i, j) -> delta_ij."""
    if n < 1:
        raise ValueError("dimension must be at least 1")
    data = _alloc((n, n), exact)
    one = Fraction(1) if exact else 1.0
    for i in range(n):
        data[i, i] = one
    return DoubleForm(n, 1, 1, data)


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def wedge(a, b):
    """Exterior product of double forms (factorwise wedge).

    The coefficient at (K, L) is the signed sum over splittings K = I + I',
    L = J + J' of a(I, J) b(I', J').  If either target degree exceeds n the
    result is the zero form of that bidegree.
    """
    a._check_compatible(b, same_bidegree=False)
    n = a.n
    p, q = a.p + b.p, a.q + b.q
    out = _alloc((len(multi_indices(n, p)), len(multi_indices(n, q))), a.exact)
    if out.size:
        rows = _split_table(n, p, a.p)
        cols = _split_table(n, q, a.q)
        A, B = a.data, b.data
        zero = _zero_scalar(a.exact)
        for ki, rsplits in enumerate(rows):
            for li, csplits in enumerate(cols):
                s = zero
                for ia, ib, sr in rsplits:
                    for ja, jb, sc in csplits:
                        t = A[ia, ja] * B[ib, jb]
                        s = s + t if sr * sc > 0 else s - t
                out[ki, li] = s
    return DoubleForm(n, p, q, out)


def power(a, k):
    """k-fold exterior power; power(a, 0) is the scalar 1."""
    if k < 0:
        raise ValueError("exponent must be nonnegative")
    result = one_form(a.n, a.exact)
    for _ in range(int(k)):
        result = wedge(result, a)
    return result


def contract(a):
    """Ricci contraction: trace over the leading argument of each block."""
    if a.p < 1 or a.q < 1:
        raise ValueError("contraction requires p >= 1 and q >= 1")
    n = a.n
    rowt = _insert_table(n, a.p - 1)
    colt = _insert_table(n, a.q - 1)
    out = _alloc((len(multi_indices(n, a.p - 1)), len(multi_indices(n, a.q - 1))), a.exact)
    zero = _zero_scalar(a.exact)
    for ri in range(out.shape[0]):
        for ci in range(out.shape[1]):
            s = zero
            for i in range(n):
                rins = rowt[i][ri]
                if rins is None:
                    continue
                cins = colt[i][ci]
                if cins is None:
                    continue
                t = a.data[rins[0], cins[0]]
                s = s + t if rins[1] * cins[1] > 0 else s - t
            out[ri, ci] = s
    return DoubleForm(n, a.p - 1, a.q - 1, out)


def contract_iter(a, m):
    """m-fold Ricci contraction."""
    if m < 1:
        raise ValueError("contraction order must be positive")
    if m > min(a.p, a.q):
        raise ValueError(f"cannot contract {m} times a ({a.p},{a.q}) form")
    for _ in range(int(m)):
        a = contract(a)
    return a


def hodge(a):
    """Generalized Hodge star: the ordinary star applied to each factor."""
    n = a.n
    rowt = _hodge_table(n, a.p) if a.p <= n else ()
    colt = _hodge_table(n, a.q) if a.q <= n else ()
    out = _alloc((len(multi_indices(n, n - a.p)), len(multi_indices(n, n - a.q))), a.exact)
    for r, (rc, sr) in enumerate(rowt):
        for c, (cc, sc) in enumerate(colt):
            v = a.data[r, c]
            out[rc, cc] = v if sr * sc > 0 else -v
    return DoubleForm(n, n - a.p, n - a.q, out)


def inner(a, b):
    """Inner product making the canonical basis e_I (x) e_J orthonormal."""
    a._check_compatible(b)
    if a.data.size == 0:
        return _zero_scalar(a.exact)
    if a.exact:
        s = Fraction(0)
        for x, y in zip(a.data.flat, b.data.flat):
            s += x * y
        return s
    return float(np.dot(a.data.ravel(), b.data.ravel()))


def transpose(a):
    return a.transpose()


def norm(a):
    return a.norm()


def _bianchi_sumsq(a):
    """Exact sum of squares of the cyclic (first-Bianchi) symmetrization."""
    if (a.p, a.q) != (2, 2):
        raise ValueError("Bianchi defect is defined for (2,2) forms")
    n = a.n
    ss = _zero_scalar(a.exact)
    for x, y, z, w in iproduct(range(n), repeat=4):
        v = (a.evaluate((x, y), (z, w))
             + a.evaluate((y, z), (x, w))
             + a.evaluate((z, x), (y, w)))
        ss += v * v
    return ss


def bianchi_defect(a):
    """Norm of the cyclic symmetrization over the first three arguments;
    zero exactly when the first Bianchi identity holds."""
    return math.sqrt(float(_bianchi_sumsq(a)))


# ---------------------------------------------------------------------------
# Curvature tensors
# ---------------------------------------------------------------------------

class CurvatureTensor:
    """A (2,2) double form intended to be block-symmetric and first-Bianchi.

    Construction does not validate the invariants (finite-difference
    realizations satisfy them only up to truncation error); call
    :meth:`validate` where exactness is required.
    """

    __slots__ = ("form",)

    def __init__(self, form):
        if not isinstance(form, DoubleForm) or (form.p, form.q) != (2, 2):
            raise ValueError("CurvatureTensor wraps a (2,2) DoubleForm")
        object.__setattr__(self, "form", form)

    def __setattr__(self, name, value):
        raise AttributeError("CurvatureTensor is immutable")

    @property
    def n(self):
        return self.form.n

    @property
    def exact(self):
        return self.form.exact

    def __eq__(self, other):
        if not isinstance(other, CurvatureTensor):
            return NotImplemented
        return self.form == other.form

    __hash__ = None

    def __repr__(self):
        return f"CurvatureTensor(n={self.n}, {'exact' if self.exact else 'float'})"

    def symmetry_defect(self):
        return (self.form - self.form.transpose()).norm()

    def bianchi_defect(self):
        return bianchi_defect(self.form)

    def validate(self, tol=0.0):
        """Raise unless block symmetry and the first Bianchi identity hold
        within ``tol`` (exactly, for exact forms with tol=0)."""
        sd = self.symmetry_defect()
        if sd > tol:
            raise ValueError(f"curvature tensor not block-symmetric (defect {sd})")
        bd = self.bianchi_defect()
        if bd > tol:
            raise ValueError(f"first Bianchi identity violated (defect {bd})")
        return self
