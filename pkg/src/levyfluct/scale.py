"""Scale functions W and Z for a fixed (model, killing rate) pair.

For Brownian motion with drift the functions are combinations of two real
exponentials and are evaluated in closed form.  For the jump catalog the
Laplace transform 1/(psi(lam) - gamma) is inverted numerically.  Direct
inversion is hopeless because W grows like exp(phi(gamma) * x); instead we
invert the damped function

    F(x) = exp(-phi * x) * W(x),   transform  1 / (psi(s + phi) - gamma),

which is bounded, smooth and nondecreasing (it is the 0-scale function of the
Esscher-tilted process), using the Euler-summation Bromwich scheme in the
Abate-Whitt framework.  Values are cached on a uniform grid; queries between
nodes use shape-preserving (monotone) cubic interpolation.

W and Z extend by W(x) = 0 and Z(x) = 1 for x < 0.  Arguments beyond x_max
are a hard error: W grows exponentially and silent extrapolation would
corrupt tail probabilities downstream.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.integrate import cumulative_simpson
from scipy.interpolate import PchipInterpolator

from .models import LevyModel

CLOSED_FORM = "closed_form"
INVERSION = "inversion"

# Euler summation: ~10^(-0.6*n) truncation error, ~10^(n/3)*eps roundoff.
# n = 18 balances both near 1e-10 for a bounded transform.
_EULER_TERMS = 18
_DAMPED_ABS_TOL = 1e-8


class ScaleRangeError(ValueError):
    """Argument beyond the evaluator's supported range."""


class ScaleAccuracyError(ValueError):
    """Numerical inversion failed to meet its accuracy target."""


def euler_inversion_weights(n=_EULER_TERMS):
    """Nodes beta and weights eta of the Euler-summation inversion.

    The inverse transform is approximated by
    f(t) ~= (1/t) * sum_k Re[eta_k * fhat(beta_k / t)].
    """
    eta = np.concatenate(([0.5], np.ones(n), np.zeros(n - 1), [2.0 ** -n]))
    logsum = np.cumsum(np.log(np.arange(1, n + 1)))
    for k in range(1, n):
        eta[2 * n - k] = eta[2 * n - k + 1] + math.exp(
            logsum[n - 1] - n * math.log(2.0) - logsum[k - 1] - logsum[n - k - 1])
    k = np.arange(2 * n + 1)
    beta = n * math.log(10.0) / 3.0 + 1j * math.pi * k
    eta = 10.0 ** (n / 3.0) * (1.0 - 2.0 * (k % 2)) * eta
    return beta, eta


def invert_laplace(fhat, t, n=_EULER_TERMS, chunk=8192):
    """Invert a Laplace transform at strictly positive times ``t``."""
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0.0):
        raise ValueError("inversion times must be > 0")
    beta, eta = euler_inversion_weights(n)
    out = np.empty(t.shape, dtype=float)
    flat = t.reshape(-1)
    res = out.reshape(-1)
    for lo in range(0, flat.size, chunk):
        ts = flat[lo:lo + chunk]
        s = beta[None, :] / ts[:, None]
        res[lo:lo + chunk] = (fhat(s) @ eta).real / ts
    return out


def _five_point_derivative(values, h):
    """First derivative of uniformly sampled values, O(h^4) stencils."""
    f = np.asarray(values, dtype=float)
    if f.size < 5:
        raise ValueError("need at least 5 samples")
    d = np.empty_like(f)
    d[2:-2] = (f[:-4] - 8.0 * f[1:-3] + 8.0 * f[3:-1] - f[4:]) / (12.0 * h)
    d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h)
    d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h)
    d[-2] = (3.0 * f[-1] + 10.0 * f[-2] - 18.0 * f[-3] + 6.0 * f[-4] - f[-5]) / (12.0 * h)
    d[-1] = (25.0 * f[-1] - 48.0 * f[-2] + 36.0 * f[-3] - 16.0 * f[-4] + 3.0 * f[-5]) / (12.0 * h)
    return d


class ScaleEvaluator:
    """Evaluator for W, Z and their first derivatives on [0, x_max].

    Construct through :func:`build_evaluator`.
    """

    def __init__(self, model, gamma, phi, xs, damped_grid, w_grid, w_prime_grid,
                 z_grid, method, prob_slack):
        self.model = model
        self.gamma = gamma
        self.phi = phi
        self.xs = xs
        self.h_grid = float(xs[1] - xs[0])
        self.x_max = float(xs[-1])
        self.damped_grid = damped_grid
        self.w_grid = w_grid
        self.w_prime_grid = w_prime_grid
        self.z_grid = z_grid
        self.method = method
        # slack used when clamping downstream probability combinations;
        # inversion noise is ~1e-8 absolute on the damped function
        self.prob_slack = prob_slack
        self._interp = None

    # -- pickling: interpolators are rebuilt lazily ------------------------

    def __getstate__(self):
        state = dict(self.__dict__)
        state["_interp"] = None
        return state

    def _interpolators(self):
        if self._interp is None:
            self._interp = (
                PchipInterpolator(self.xs, self.damped_grid, extrapolate=False),
                PchipInterpolator(self.xs, np.exp(-self.phi * self.xs) * self.w_prime_grid,
                                  extrapolate=False),
                PchipInterpolator(self.xs, np.exp(-self.phi * self.xs) * self.z_grid,
                                  extrapolate=False),
            )
        return self._interp

    # -- range handling ----------------------------------------------------

    def _check_range(self, x, name="x"):
        tol = 1e-9 * (1.0 + self.x_max)
        if np.any(np.asarray(x) > self.x_max + tol):
            raise ScaleRangeError(
                f"{name} = {np.max(x)} exceeds x_max = {self.x_max}")
        return np.minimum(x, self.x_max)

    # -- the four functions --------------------------------------------------

    def w(self, x):
        """W(x); zero on the negative half line."""
        x_arr = np.asarray(x, dtype=float)
        x_in = self._check_range(x_arr)
        if self.method == CLOSED_FORM:
            out = self._w_closed(np.maximum(x_in, 0.0))
        else:
            damped, _, _ = self._interpolators()
            out = np.exp(self.phi * x_in) * damped(np.maximum(x_in, 0.0))
        out = np.where(x_arr <= 0.0, 0.0, out)
        return float(out) if np.isscalar(x) else out

    def w_prime(self, x):
        """dW/dx on (0, x_max]; the origin is outside the domain."""
        x_arr = np.asarray(x, dtype=float)
        if np.any(x_arr <= 0.0):
            raise ValueError(f"w_prime requires x > 0, got {np.min(x_arr)}")
        x_in = self._check_range(x_arr)
        if self.method == CLOSED_FORM:
            out = self._w_prime_closed(x_in)
        else:
            _, wprime_damped, _ = self._interpolators()
            out = np.exp(self.phi * x_in) * wprime_damped(x_in)
        return float(out) if np.isscalar(x) else out

    def z(self, x):
        """Z(x) = 1 + gamma * integral of W from 0 to x; one for x <= 0."""
        x_arr = np.asarray(x, dtype=float)
        x_in = self._check_range(x_arr)
        if self.method == CLOSED_FORM:
            out = self._z_closed(np.maximum(x_in, 0.0))
        else:
            _, _, z_damped = self._interpolators()
            out = np.exp(self.phi * x_in) * z_damped(np.maximum(x_in, 0.0))
        out = np.where(x_arr <= 0.0, 1.0, out)
        return float(out) if np.isscalar(x) else out

    def z_prime(self, x):
        """dZ/dx = gamma * W(x), exactly, for x >= 0."""
        x_arr = np.asarray(x, dtype=float)
        if np.any(x_arr < 0.0):
            raise ValueError(f"z_prime requires x >= 0, got {np.min(x_arr)}")
        out = self.gamma * np.asarray(self.w(x))
        return float(out) if np.isscalar(x) else out

    # -- closed forms (Brownian motion with drift) ---------------------------

    def _roots(self):
        mu, sig2 = self.model.drift, self.model.sigma**2
        disc = math.sqrt(mu * mu + 2.0 * sig2 * self.gamma)
        return (-mu + disc) / sig2, (-mu - disc) / sig2, disc

    def _w_closed(self, x):
        lp, lm, disc = self._roots()
        return (np.exp(lp * x) - np.exp(lm * x)) / disc

    def _w_prime_closed(self, x):
        lp, lm, disc = self._roots()
        return (lp * np.exp(lp * x) - lm * np.exp(lm * x)) / disc

    def _z_closed(self, x):
        lp, lm, disc = self._roots()
        return 1.0 + self.gamma * (np.expm1(lp * x) / lp - np.expm1(lm * x) / lm) / disc

    # -- exports -------------------------------------------------------------

    def grid_table(self):
        """Grid samples as a (n, 4) array with columns x, W, W', Z."""
        return np.column_stack([self.xs, self.w_grid, self.w_prime_grid, self.z_grid])

    def dump_csv(self, path):
        """Write the grid as CSV with header x,W,Wprime,Z."""
        with open(path, "w") as fh:
            fh.write("x,W,Wprime,Z\n")
            for row in self.grid_table():
                fh.write(",".join(format(v, ".12g") for v in row) + "\n")

    def drift_tables(self):
        """Uniform-grid tables consumed by the conditioned-path kernels.

        Returns (h, W, W', J) where J(x) = integral of W(u) exp(eta u) du,
        used for the closed-form jump term of the conditioned dynamics
        (J is None for jump-free models).
        """
        jumps = self.model.jumps
        j_grid = None
        if jumps is not None and jumps.rate > 0.0:
            integrand = self.w_grid * np.exp(jumps.eta * self.xs)
            j_grid = cumulative_simpson(integrand, dx=self.h_grid, initial=0.0)
        return self.h_grid, self.w_grid, self.w_prime_grid, j_grid


def build_evaluator(model, gamma, x_max=6.0, h_grid=1e-3, method="auto",
                    euler_terms=_EULER_TERMS):
    """Build a :class:`ScaleEvaluator` for (model, gamma).

    Parameters
    ----------
    model : LevyModel
    gamma : float
        Killing rate, > 0.
    x_max : float
        Largest supported argument.
    h_grid : float
        Grid spacing for cached samples.
    method : {"auto", "closed_form", "inversion"}
        "auto" picks the closed form exactly when the model has no jumps.
    """
    if not isinstance(model, LevyModel):
        raise TypeError("model must be a LevyModel")
    if not gamma > 0.0:
        raise ValueError(f"gamma must be > 0, got {gamma}")
    if not (x_max > 0.0 and h_grid > 0.0 and x_max > 4.0 * h_grid):
        raise ValueError("require x_max > 0 and h_grid > 0 with several grid cells")

    has_jumps = model.jumps is not None and model.jumps.rate > 0.0
    if method == "auto":
        method = INVERSION if has_jumps else CLOSED_FORM
    if method == CLOSED_FORM and has_jumps:
        raise ValueError("closed form is only available for jump-free models")
    if method not in (CLOSED_FORM, INVERSION):
        raise ValueError(f"unknown method {method!r}")

    phi = model.phi(gamma)
    n = int(round(x_max / h_grid))
    xs = np.arange(n + 1) * h_grid

    if method == CLOSED_FORM:
        ev = ScaleEvaluator(model, gamma, phi, xs, None, None, None, None,
                            CLOSED_FORM, prob_slack=1e-12)
        ev.damped_grid = np.exp(-phi * xs) * ev._w_closed(xs)
        ev.w_grid = ev._w_closed(xs)
        ev.w_prime_grid = ev._w_prime_closed(xs)
        ev.z_grid = ev._z_closed(xs)
        return ev

    def fhat(s):
        return 1.0 / (model._psi_any(s + phi) - gamma)

    damped = np.empty(n + 1)
    damped[0] = 0.0  # W(0) = 0 under unbounded variation
    damped[1:] = invert_laplace(fhat, xs[1:], n=euler_terms)
    check = np.empty_like(damped)
    check[0] = 0.0
    check[1:] = invert_laplace(fhat, xs[1:], n=euler_terms + 4)
    err = np.abs(damped - check)
    worst = int(np.argmax(err))
    if err[worst] > _DAMPED_ABS_TOL:
        raise ScaleAccuracyError(
            f"inversion self-check failed at x = {xs[worst]:.6g}: "
            f"estimated error {err[worst]:.3e} > {_DAMPED_ABS_TOL:.1e}")

    # the damped function is a scale function of the tilted process, hence
    # nonnegative and nondecreasing; repair sub-tolerance numerical dips
    if np.min(damped) < -_DAMPED_ABS_TOL:
        worst = int(np.argmin(damped))
        raise ScaleAccuracyError(
            f"inversion produced negative value {damped[worst]:.3e} "
            f"at x = {xs[worst]:.6g}")
    monotone = np.maximum.accumulate(np.maximum(damped, 0.0))
    if np.max(monotone - damped) > _DAMPED_ABS_TOL:
        worst = int(np.argmax(monotone - damped))
        raise ScaleAccuracyError(
            f"inversion violated monotonicity by {np.max(monotone - damped):.3e} "
            f"at x = {xs[worst]:.6g}")
    damped = monotone

    growth = np.exp(phi * xs)
    w_grid = growth * damped
    damped_prime = _five_point_derivative(damped, h_grid)
    w_prime_grid = growth * (phi * damped + damped_prime)
    z_grid = 1.0 + gamma * cumulative_simpson(w_grid, dx=h_grid, initial=0.0)
    z_grid = np.maximum.accumulate(z_grid)

    return ScaleEvaluator(model, gamma, phi, xs, damped, w_grid, w_prime_grid,
                          z_grid, INVERSION, prob_slack=1e-7)
