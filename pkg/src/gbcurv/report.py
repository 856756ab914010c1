"""Structured invariant reports with mandatory convention metadata.

Every artifact output records which sign and normalization conventions were
used, so an independent reimplementation can detect convention drift from the
report alone.  Serialization is deterministic byte-for-byte for equal reports.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .rng import RNG_ID

__all__ = ["CONVENTIONS", "InvariantReport", "emit", "parse"]

#: Identifiers of the conventions fixed by this package.
CONVENTIONS = {
    "curvature_normalization": "R=(lambda/2)g^2; sectional(plane)=lambda",
    "gauss_bonnet": "h2k = *(g^(n-2k) R^k)/(n-2k)!; h2 = scal/2",
    "laplacian_sign": "positive-spectrum: ell_0 f = -trace_g Hess f",
    "frame_convention": "cholesky-lower (axis-ordered Gram-Schmidt)",
    "hodge": "factorwise star, oriented orthonormal basis",
    "product_sign": "splitting sign sorts the concatenation",
    "rng": RNG_ID,
}


@dataclass
class InvariantReport:
    """Results, defect table and provenance of one verification run."""

    conventions: dict = field(default_factory=lambda: dict(CONVENTIONS))
    model: dict | None = None
    results: dict = field(default_factory=dict)
    defects: dict = field(default_factory=dict)
    environment: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.conventions:
            raise ValueError("conventions record must not be empty")
        for name, entry in self.defects.items():
            if set(entry) != {"value", "tolerance", "pass"}:
                raise ValueError(f"defect entry {name!r} must carry value, tolerance, pass")

    def add_defect(self, name, value, tolerance):
        """Record a defect with its tolerance; passes when value <= tolerance."""
        value = float(value)
        tolerance = float(tolerance)
        self.defects[name] = {"value": value, "tolerance": tolerance,
                              "pass": bool(value <= tolerance)}

    def all_pass(self):
        return all(entry["pass"] for entry in self.defects.values())

    def to_dict(self):
        return {
            "conventions": self.conventions,
            "model": self.model,
            "results": self.results,
            "defects": self.defects,
            "environment": self.environment,
        }

    @classmethod
    def from_dict(cls, d):
        try:
            return cls(conventions=d["conventions"], model=d.get("model"),
                       results=d.get("results", {}), defects=d.get("defects", {}),
                       environment=d.get("environment", {}))
        except (KeyError, TypeError) as e:
            raise ValueError(f"malformed report document: {e}") from None


def emit(report, fmt="json"):
    """Serialize a report: canonical JSON, or a CSV defect table."""
    if fmt == "json":
        return (json.dumps(report.to_dict(), sort_keys=True, separators=(",", ":"))
                + "\n").encode()
    if fmt == "csv":
        lines = ["name,value,tolerance,pass"]
        for name in report.defects:
            e = report.defects[name]
            lines.append(f"{name},{e['value']!r},{e['tolerance']!r},{str(e['pass']).lower()}")
        return ("\n".join(lines) + "\n").encode()
    raise ValueError(f"unknown format {fmt!r}")


def parse(data):
    """Inverse of ``emit(report, 'json')``."""
    return InvariantReport.from_dict(json.loads(data))
