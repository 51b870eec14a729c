"""
platform.py - Gradient-addressed qubit sites and their Q-coils.
===============================================================

Sites sit at z = 0, dz, 2 dz, ... along the bar.  The z-gradient gives
each one its own centre frequency, separated by gamma * Gz * dz.  One
Q-coil per site transmits at that site's centre frequency with a
bandwidth; a coil addresses a site when the site falls inside the
coil's top-hat band.  Layouts are valid when every coil reaches its own
site and nothing else.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ConfigurationError, DomainError
from .hamiltonian import PhysicsConfig, in_band, larmor_frequency

TWO_PI = 2 * math.pi

#: separation / bandwidth ratio needed for the "pass with margin" grade
MARGIN_RATIO = 2.0


@dataclass(frozen=True)
class QubitSite:
    id: int
    z: float
    center_frequency: float  # rad/s


@dataclass(frozen=True)
class CoilSpec:
    site_id: int
    carrier: float  # rad/s
    bandwidth: float  # rad/s

    def __post_init__(self):
        if not (self.bandwidth > 0):
            raise DomainError(f"coil bandwidth must be > 0, got {self.bandwidth!r}")


def frequency_separation(cfg: PhysicsConfig, z_spacing: float) -> float:
    """Adjacent-site angular frequency separation gamma * Gz * dz."""
    return cfg.gamma * cfg.gz * z_spacing


def assign_sites(n: int, z_spacing: float, cfg: PhysicsConfig) -> list[QubitSite]:
    if n < 1:
        raise DomainError(f"need at least one site, got n={n}")
    if not (z_spacing > 0):
        raise DomainError(f"z_spacing must be > 0, got {z_spacing!r}")
    if n > 1 and not (cfg.gz > 0):
        raise ConfigurationError(
            f"gradient gz={cfg.gz!r} T/m leaves {n} sites frequency-degenerate; gz must be > 0"
        )
    return [QubitSite(k, k * z_spacing, larmor_frequency(cfg, k * z_spacing)) for k in range(n)]


def default_coils(sites: Sequence[QubitSite], bandwidth: float) -> list[CoilSpec]:
    return [CoilSpec(s.id, s.center_frequency, bandwidth) for s in sites]


def crosstalk_matrix(sites: Sequence[QubitSite], coils: Sequence[CoilSpec]) -> np.ndarray:
    """Boolean (coil x site) matrix, True where the coil's band covers the site."""
    out = np.zeros((len(coils), len(sites)), dtype=bool)
    for i, coil in enumerate(coils):
        for j, site in enumerate(sites):
            out[i, j] = in_band(site.center_frequency, coil.carrier, coil.bandwidth)
    return out


@dataclass
class SelectivityReport:
    passed: bool
    grade: str  # "pass with margin" | "pass" | "fail"
    matrix: np.ndarray
    failures: list[tuple[int, int]] = field(default_factory=list)
    """(coil site_id, site id) pairs that break one-to-one addressing."""

    def to_dict(self) -> dict:
        return {
            "pass": self.passed,
            "grade": self.grade,
            "matrix": self.matrix.astype(int).tolist(),
            "failures": [{"coil_site_id": c, "site_id": s} for c, s in self.failures],
        }


def validate_selectivity(sites: Sequence[QubitSite], coils: Sequence[CoilSpec]) -> SelectivityReport:
    """Check that ``coils[i]`` addresses exactly the site whose id it names.

    Coils are matched to sites by ``site_id``; the crosstalk matrix must
    then be the identity.  Missed own-sites and reached foreign sites are
    both listed as failures.
    """
    matrix = crosstalk_matrix(sites, coils)
    failures = []
    for i, coil in enumerate(coils):
        for j, site in enumerate(sites):
            if bool(matrix[i, j]) != (coil.site_id == site.id):
                failures.append((coil.site_id, site.id))
    passed = not failures
    if not passed:
        grade = "fail"
    else:
        freqs = sorted(s.center_frequency for s in sites)
        spacing = min((b - a for a, b in zip(freqs, freqs[1:])), default=math.inf)
        widest = max((c.bandwidth for c in coils), default=0.0)
        grade = "pass with margin" if spacing >= MARGIN_RATIO * widest else "pass"
    return SelectivityReport(passed, grade, matrix, failures)


def layout_to_dict(sites: Sequence[QubitSite], coils: Sequence[CoilSpec]) -> dict:
    """JSON-ready layout with frequencies converted to Hz."""
    return {
        "sites": [
            {"id": s.id, "z_m": s.z, "frequency_hz": s.center_frequency / TWO_PI} for s in sites
        ],
        "coils": [
            {"site_id": c.site_id, "carrier_hz": c.carrier / TWO_PI, "bandwidth_hz": c.bandwidth / TWO_PI}
            for c in coils
        ],
    }
