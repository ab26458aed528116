"""Parameters, dispersion, and momentum bookkeeping for the rotated XY chain.

The chain couples N spins on a ring through anisotropic XY bonds rotated
about z by a uniform angle, plus a transverse field.  After the fermion
mapping every property of interest reduces to closed-form functions of the
momentum alpha and the three couplings, which is what this module provides.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import BadSize, DegenerateRatio, GaplessMode

__all__ = [
    "Band",
    "ModelParams",
    "Mode",
    "dispersion",
    "bogoliubov_angle",
    "fermi_cutoff",
    "gap",
    "momentum_grid",
]


class Band(str, enum.Enum):
    """Quasiparticle band tag for a paired momentum mode."""

    PARTICLE = "Particle"
    HOLE = "Hole"


@dataclass(frozen=True)
class ModelParams:
    """Couplings of the chain.

    Parameters
    ----------
    phi : float
        Rotation angle of the XY bond about z, in [0, pi).  The bond
        Hamiltonian is pi-periodic in phi, so the representative interval
        is half a turn.
    gamma : float
        XY anisotropy, >= 0.
    lam : float
        Transverse field strength, >= 0.
    n_sites : int, optional
        Ring length.  When given it must be even and >= 4.
    """

    phi: float
    gamma: float
    lam: float
    n_sites: int | None = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.phi < math.pi:
            raise ValueError(f"phi must lie in [0, pi), got {self.phi}")
        if self.gamma < 0.0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")
        if self.lam < 0.0:
            raise ValueError(f"lam must be >= 0, got {self.lam}")
        if self.n_sites is not None:
            _check_size(self.n_sites)

    def with_sites(self, n_sites: int) -> "ModelParams":
        return ModelParams(self.phi, self.gamma, self.lam, n_sites)


@dataclass(frozen=True)
class Mode:
    """One paired momentum mode of the diagonalized chain.

    Attributes
    ----------
    k : int
        Integer momentum index; alpha = 2*pi*k / n_sites.
    alpha : float
        Momentum in (-pi, pi].
    energy : float
        Positive quasiparticle energy of the mode.
    theta : float
        Pairing angle in [0, pi].
    band : Band
        Particle or hole tag of the mode in the ground state.
    """

    k: int
    alpha: float
    energy: float
    theta: float
    band: Band


def _check_size(n_sites: int) -> None:
    if not isinstance(n_sites, (int, np.integer)):
        raise BadSize(f"n_sites must be an integer, got {n_sites!r}")
    if n_sites < 4 or n_sites % 2 != 0:
        raise BadSize(f"n_sites must be even and >= 4, got {n_sites}")


def dispersion(alpha, gamma: float, lam: float):
    """Quasiparticle energy sqrt((lam - cos a)^2 + (gamma sin a)^2).

    Accepts scalars or arrays in ``alpha`` and broadcasts.
    """
    a = lam - np.cos(alpha)
    b = gamma * np.sin(alpha)
    return np.hypot(a, b)


def bogoliubov_angle(alpha, gamma: float, lam: float):
    """Pairing angle theta(alpha) = atan2(gamma sin a, lam - cos a).

    The angle lies in [0, pi] for alpha in [0, pi] and gamma >= 0.  It is
    undefined where both atan2 arguments vanish, i.e. exactly at a band
    touching.

    Parameters
    ----------
    alpha : float or ndarray
        Momentum (broadcasts).
    gamma, lam : float
        Anisotropy and field.

    Returns
    -------
    float or ndarray

    Raises
    ------
    GaplessMode
        If any requested momentum has lam - cos(alpha) == 0 and
        gamma * sin(alpha) == 0 in floating point.
    """
    a = lam - np.cos(alpha)
    b = gamma * np.sin(alpha)
    if np.any((a == 0.0) & (b == 0.0)):
        raise GaplessMode(
            f"pairing angle undefined at a gapless momentum (gamma={gamma}, lam={lam})"
        )
    return np.arctan2(b, a)


def _alpha_fermi(gamma: float, lam: float) -> float:
    """Continuum Fermi edge of the hole region, with the gamma=1 limit built in.

    For gamma != 1 this is arccos(lam / (1 - gamma^2)) when the ratio lies
    in [-1, 1] and 0 otherwise.  At gamma == 1 the ratio degenerates; the
    limit is pi/2 for lam == 0 and 0 for lam > 0.
    """
    if gamma == 1.0:
        return math.pi / 2.0 if lam == 0.0 else 0.0
    r = lam / (1.0 - gamma * gamma)
    if -1.0 <= r <= 1.0:
        return math.acos(r)
    return 0.0


def fermi_cutoff(gamma: float, lam: float, n_sites: int) -> int:
    """Largest hole-mode index floor(N * alpha_F / (2 pi)).

    alpha_F = arccos(lam / (1 - gamma^2)) when that ratio lies in [-1, 1],
    else 0.  A tiny positive snap (1e-9) is added before the floor so that
    ratios landing exactly on a grid momentum keep that momentum in the
    hole set.

    Raises
    ------
    DegenerateRatio
        At gamma == 1, where the defining ratio is 0/0 or infinite.
        Callers needing that point use the documented limit: cutoff 0 for
        lam > 0 and n_sites // 4 for lam == 0.
    BadSize
        If ``n_sites`` is odd or < 4.
    """
    _check_size(n_sites)
    if gamma == 1.0:
        raise DegenerateRatio(
            "fermi_cutoff is 0/0 at gamma = 1; use the limit (0 for lam > 0, N//4 at lam = 0)"
        )
    alpha_f = _alpha_fermi(gamma, lam)
    return int(math.floor(n_sites * alpha_f / (2.0 * math.pi) + 1e-9))


def _fermi_cutoff_any(gamma: float, lam: float, n_sites: int) -> int:
    """fermi_cutoff with the gamma = 1 limit applied instead of raised."""
    if gamma == 1.0:
        return n_sites // 4 if lam == 0.0 else 0
    return fermi_cutoff(gamma, lam, n_sites)


def gap(gamma: float, lam: float) -> float:
    """Minimal quasiparticle energy over all momenta, in closed form.

    The dispersion minimum sits in the band interior when gamma < 1 and
    lam < 1 - gamma^2, and at the band edge alpha = 0 otherwise.  Returns
    exact 0.0 on the gapless set {lam == 1} union {gamma == 0, lam <= 1}.
    """
    if gamma < 1.0 and lam < 1.0 - gamma * gamma:
        omg2 = 1.0 - gamma * gamma
        return gamma * math.sqrt((omg2 - lam * lam) / omg2)
    return abs(1.0 - lam)


def momentum_grid(n_sites: int) -> np.ndarray:
    """Momenta alpha_k = 2 pi k / N for k = -N/2 + 1, ..., N/2.

    Raises
    ------
    BadSize
        If ``n_sites`` is odd or < 4.
    """
    _check_size(n_sites)
    k = np.arange(-(n_sites // 2) + 1, n_sites // 2 + 1)
    return 2.0 * np.pi * k / n_sites
