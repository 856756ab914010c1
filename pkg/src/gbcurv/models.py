"""Constructors for curvature tensors and shape operators with known
closed-form invariants; the ground-truth inputs of the test suite.

Random tensors are built as signed sums of Gauss-type squares (1/2) S^2 of
symmetric (1,1) forms, which satisfy block symmetry and the first Bianchi
identity by construction, with no projection step.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .curvature import ShapeOperatorData, gauss_equation
from .double_forms import (
    CurvatureTensor,
    DoubleForm,
    contract,
    metric_form,
    multi_indices,
    wedge,
    _alloc,
    _coerce_scalar,
    _rank,
)
from .rng import SplitMix64

__all__ = [
    "ModelSpec",
    "constant_curvature",
    "product",
    "random_bianchi",
    "random_einstein",
    "hypersurface_model",
    "random_shape_operator",
    "build_model",
]


def constant_curvature(n, lam, exact=False):
    """Space-form curvature tensor (lambda/2) g^2: every sectional curvature
    equals lambda."""
    if n < 2:
        raise ValueError("need n >= 2")
    g = metric_form(n, exact)
    half = Fraction(1, 2) if exact else 0.5
    return CurvatureTensor((_coerce_scalar(lam, exact) * half) * wedge(g, g))


def product(R1, R2):
    """Curvature of a Riemannian product: block embedding of the factors with
    vanishing mixed components."""
    f1, f2 = R1.form, R2.form
    if f1.exact != f2.exact:
        raise ValueError("cannot mix exact and float factors")
    n1, n2 = f1.n, f2.n
    n = n1 + n2
    pairs = multi_indices(n, 2)
    out = _alloc((len(pairs), len(pairs)), f1.exact)
    rank = _rank(n, 2)
    for src, offset in ((f1, 0), (f2, n1)):
        sub = multi_indices(src.n, 2)
        srank = _rank(src.n, 2)
        for I in sub:
            for J in sub:
                v = src.data[srank[I], srank[J]]
                gi = (I[0] + offset, I[1] + offset)
                gj = (J[0] + offset, J[1] + offset)
                out[rank[gi], rank[gj]] = v
    return CurvatureTensor(DoubleForm(n, 2, 2, out))


def _random_symmetric_form(n, rng, exact):
    """Symmetric (1,1) form with entries drawn from the generator: uniform in
    [-1, 1] in float mode, integers in [-2, 2] in exact mode."""
    data = _alloc((n, n), exact)
    for i in range(n):
        for j in range(i, n):
            v = Fraction(rng.randint(-2, 2)) if exact else rng.uniform(-1.0, 1.0)
            data[i, j] = v
            data[j, i] = v
    return DoubleForm(n, 1, 1, data)


def random_shape_operator(n, seed, exact=False):
    """Seed-deterministic random symmetric second fundamental form."""
    return ShapeOperatorData(_random_symmetric_form(n, SplitMix64(seed), exact))


def random_bianchi(n, seed, terms=3, exact=False):
    """Random curvature tensor sum_m eps_m (1/2) S_m^2 over ``terms`` random
    symmetric forms with random signs; Bianchi and block symmetry hold by
    construction, deterministically in the seed."""
    if n < 2:
        raise ValueError("need n >= 2")
    if terms < 1:
        raise ValueError("need at least one term")
    rng = SplitMix64(seed)
    half = Fraction(1, 2) if exact else 0.5
    total = None
    for _ in range(terms):
        S = _random_symmetric_form(n, rng, exact)
        eps = rng.sign()
        piece = (eps * half) * wedge(S, S)
        total = piece if total is None else total + piece
    return CurvatureTensor(total)


def random_einstein(n, seed):
    """Random algebraic curvature tensor with Ricci tensor proportional to g:
    subtracts the Gauss-type correction g . S with S the trace-free Ricci part
    over (n-2), which preserves symmetry and Bianchi."""
    if n < 3:
        raise ValueError("need n >= 3 (construction divides by n - 2)")
    R = random_bianchi(n, seed)
    g = metric_form(n)
    ric = contract(R.form)
    scal = 0.0
    for i in range(n):
        scal += float(ric.data[i, i])
    S = (ric - (scal / n) * g) / (n - 2)
    return CurvatureTensor(R.form - wedge(g, S))


def hypersurface_model(kappa, lam=0.0, exact=False):
    """Diagonal shape operator with the given principal curvatures and the
    curvature tensor it induces inside a lambda-space form."""
    B = ShapeOperatorData.diagonal(tuple(kappa), exact=exact)
    return B, gauss_equation(B, lam)


# ---------------------------------------------------------------------------
# Declarative model specifications
# ---------------------------------------------------------------------------

_KINDS = ("constant_curvature", "product", "hypersurface", "random_bianchi",
          "random_einstein")


@dataclass(frozen=True)
class ModelSpec:
    """JSON-serializable description of a model tensor."""

    kind: str
    n: int | None = None
    lam: float | None = None
    kappa: tuple | None = None
    seed: int | None = None
    terms: int | None = None
    factors: tuple = field(default=())

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}")
        if self.kind == "constant_curvature" and (self.n is None or self.lam is None):
            raise ValueError("constant_curvature needs n and lambda")
        if self.kind == "hypersurface" and self.kappa is None:
            raise ValueError("hypersurface needs kappa")
        if self.kind in ("random_bianchi", "random_einstein"):
            if self.n is None or self.seed is None:
                raise ValueError(f"{self.kind} needs n and a seed")
        if self.kind == "product" and len(self.factors) != 2:
            raise ValueError("product needs exactly two factor specs")

    def to_dict(self):
        d = {"kind": self.kind}
        if self.n is not None:
            d["n"] = self.n
        if self.lam is not None:
            d["lambda"] = self.lam
        if self.kappa is not None:
            d["kappa"] = list(self.kappa)
        if self.seed is not None:
            d["seed"] = self.seed
        if self.terms is not None:
            d["terms"] = self.terms
        if self.factors:
            d["factors"] = [f.to_dict() for f in self.factors]
        return d

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict) or "kind" not in d:
            raise ValueError("model spec must be an object with a 'kind' field")
        return cls(
            kind=d["kind"],
            n=d.get("n"),
            lam=d.get("lambda"),
            kappa=tuple(d["kappa"]) if "kappa" in d else None,
            seed=d.get("seed"),
            terms=d.get("terms"),
            factors=tuple(cls.from_dict(f) for f in d.get("factors", ())),
        )

    def dumps(self):
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def loads(cls, s):
        return cls.from_dict(json.loads(s))


def build_model(spec, exact=False):
    """Realize a ModelSpec; returns {"R": CurvatureTensor, "B": ShapeOperatorData?}."""
    if spec.kind == "constant_curvature":
        return {"R": constant_curvature(spec.n, spec.lam, exact=exact)}
    if spec.kind == "hypersurface":
        lam = 0.0 if spec.lam is None else spec.lam
        B, R = hypersurface_model(spec.kappa, lam, exact=exact)
        return {"R": R, "B": B}
    if spec.kind == "random_bianchi":
        terms = 3 if spec.terms is None else spec.terms
        return {"R": random_bianchi(spec.n, spec.seed, terms=terms, exact=exact)}
    if spec.kind == "random_einstein":
        if exact:
            raise ValueError("random_einstein is float-mode only")
        return {"R": random_einstein(spec.n, spec.seed)}
    if spec.kind == "product":
        f1 = build_model(spec.factors[0], exact=exact)["R"]
        f2 = build_model(spec.factors[1], exact=exact)["R"]
        return {"R": product(f1, f2)}
    raise ValueError(f"unknown model kind {spec.kind!r}")
