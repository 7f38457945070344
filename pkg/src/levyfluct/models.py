"""Model catalog for spectrally negative Levy processes.

A model is the triplet (drift, Gaussian coefficient, downward jump measure).
The catalog is deliberately closed: no jumps, or compound Poisson jumps with
exponentially distributed magnitudes.  For both variants the Laplace exponent,
its derivative, the right inverse and the Esscher tilt are available in closed
form, and paths can be simulated without discretising the jump measure.

Conventions
-----------
The process is parameterised in finite-activity form

    X_t = drift * t + sigma * B_t + sum of jumps up to t,

with jumps arriving at Poisson rate ``rate`` and magnitudes ``-E``,
``E ~ Exponential(eta)``.  The Laplace exponent log E[exp(lam * X_1)] is then

    psi(lam) = drift * lam + sigma^2 * lam^2 / 2 + rate * (eta/(eta+lam) - 1),

i.e. the small-jump compensator is folded into ``drift``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass


@dataclass(frozen=True)
class CompoundPoissonExp:
    """Downward compound Poisson jumps: rate per unit time, |J| ~ Exp(eta)."""

    rate: float
    eta: float

    def __post_init__(self):
        if not self.rate >= 0.0:
            raise ValueError(f"jump rate must be >= 0, got {self.rate}")
        if not self.eta > 0.0:
            raise ValueError(f"jump eta must be > 0, got {self.eta}")


@dataclass(frozen=True)
class LevyModel:
    """Spectrally negative Levy process from the closed catalog.

    Parameters
    ----------
    drift : float
        Linear drift of the finite-activity representation.
    sigma : float
        Gaussian coefficient; must be positive (unbounded variation is
        assumed throughout, which in particular gives W(0) = 0).
    jumps : CompoundPoissonExp or None
        Downward jump component; ``None`` means Brownian motion with drift.
    """

    drift: float
    sigma: float
    jumps: CompoundPoissonExp | None = None

    def __post_init__(self):
        if not self.sigma > 0.0:
            raise ValueError(f"sigma must be > 0, got {self.sigma}")
        if self.jumps is not None and not isinstance(self.jumps, CompoundPoissonExp):
            raise TypeError("jumps must be CompoundPoissonExp or None")

    # -- Laplace exponent and friends -------------------------------------

    def psi(self, lam):
        """Laplace exponent psi(lam) = log E[exp(lam * X_1)] for lam >= 0."""
        if lam < 0:
            raise ValueError(f"psi requires lam >= 0, got {lam}")
        return self._psi_any(lam)

    def _psi_any(self, lam):
        # No domain check: also used on the complex Bromwich contour and to
        # the left of 0 by the transform-inversion machinery.
        out = self.drift * lam + 0.5 * self.sigma**2 * lam * lam
        if self.jumps is not None and self.jumps.rate > 0.0:
            out += self.jumps.rate * (self.jumps.eta / (self.jumps.eta + lam) - 1.0)
        return out

    def psi_prime(self, lam):
        """Derivative of the Laplace exponent."""
        if lam < 0:
            raise ValueError(f"psi_prime requires lam >= 0, got {lam}")
        out = self.drift + self.sigma**2 * lam
        if self.jumps is not None and self.jumps.rate > 0.0:
            out -= self.jumps.rate * self.jumps.eta / (self.jumps.eta + lam) ** 2
        return out

    def phi(self, gamma, rtol=1e-12):
        """Right inverse of psi: the largest root of psi(lam) = gamma.

        Bracket the root to the right of psi's minimiser, then Newton with
        bisection fallback.  psi is smooth and strictly convex there, so
        Newton converges quadratically once bracketed.
        """
        if gamma < 0:
            raise ValueError(f"phi requires gamma >= 0, got {gamma}")
        lo = self._psi_argmin()
        if gamma == 0.0 and self.psi_prime(0.0) >= 0.0:
            return 0.0
        # expand an upper bracket: psi grows like sigma^2 lam^2 / 2
        hi = max(lo, 1.0, math.sqrt(2.0 * gamma) / self.sigma)
        while self._psi_any(hi) < gamma:
            hi *= 2.0
        lam = hi
        f = self._psi_any(lam) - gamma
        for _ in range(100):
            step = f / self.psi_prime(lam)
            cand = lam - step
            if not (lo <= cand <= hi):
                cand = 0.5 * (lo + hi)
            fc = self._psi_any(cand) - gamma
            if fc >= 0.0:
                hi = cand
            else:
                lo = cand
            lam, f = cand, fc
            if abs(f) <= rtol * max(1.0, abs(gamma)) and abs(step) <= rtol * max(1.0, lam):
                break
        return lam

    def _psi_argmin(self):
        """Location of the minimum of psi on [0, inf)."""
        if self.psi_prime(0.0) >= 0.0:
            return 0.0
        lo, hi = 0.0, 1.0
        while self.psi_prime(hi) < 0.0:
            hi *= 2.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if self.psi_prime(mid) < 0.0:
                lo = mid
            else:
                hi = mid
            if hi - lo <= 1e-15 * max(1.0, hi):
                break
        return hi

    def esscher_tilt(self, gamma):
        """Exponential change of measure at c = phi(gamma).

        Returns the catalog model with Laplace exponent
        psi(lam + phi(gamma)) - gamma: the Gaussian part keeps sigma and gains
        drift sigma^2 * phi(gamma); exponential jumps tilt to
        rate * eta / (eta + phi(gamma)) arrivals with Exp(eta + phi(gamma))
        magnitudes.
        """
        if not gamma > 0:
            raise ValueError(f"esscher_tilt requires gamma > 0, got {gamma}")
        c = self.phi(gamma)
        drift = self.drift + self.sigma**2 * c
        jumps = None
        if self.jumps is not None and self.jumps.rate > 0.0:
            eta = self.jumps.eta
            jumps = CompoundPoissonExp(rate=self.jumps.rate * eta / (eta + c),
                                       eta=eta + c)
        return LevyModel(drift=drift, sigma=self.sigma, jumps=jumps)

    # -- JSON wire format ---------------------------------------------------

    def to_dict(self):
        if self.jumps is None:
            jumps = {"type": "none"}
        else:
            jumps = {"type": "cp_exp", "rate": self.jumps.rate, "eta": self.jumps.eta}
        return {"drift": self.drift, "sigma": self.sigma, "jumps": jumps}

    @classmethod
    def from_dict(cls, data):
        jumps_data = data.get("jumps", {"type": "none"})
        kind = jumps_data.get("type")
        if kind == "none":
            jumps = None
        elif kind == "cp_exp":
            jumps = CompoundPoissonExp(rate=float(jumps_data["rate"]),
                                       eta=float(jumps_data["eta"]))
        else:
            raise ValueError(f"unknown jump type: {kind!r}")
        return cls(drift=float(data["drift"]), sigma=float(data["sigma"]), jumps=jumps)

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def brownian(drift=0.0, sigma=1.0):
    """Brownian motion with drift, the jump-free catalog member."""
    return LevyModel(drift=drift, sigma=sigma, jumps=None)
