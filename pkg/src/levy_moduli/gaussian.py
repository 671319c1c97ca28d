"""Stationary-increment Gaussian processes on uniform grids.

Paths are simulated exactly: the unit-lag increments form a stationary
sequence whose autocovariance is the second difference of ``sigma^2``; that
sequence is drawn by circulant embedding and cumulatively summed.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from levy_moduli.errors import AlignmentError, DomainError, SimulationError
from levy_moduli.spectral import DEFAULT_TOL, _quad, abs_moment_normal

_JITTER = 1e-12


def increment_autocovariance(sigma2, delta, lag):
    """Covariance of two ``delta``-increments ``lag`` grid steps apart."""
    lag = np.abs(np.asarray(lag, dtype=float))
    out = 0.5 * (sigma2((lag + 1) * delta) + sigma2(np.abs(lag - 1) * delta)
                 - 2.0 * sigma2(lag * delta))
    return out if np.ndim(out) else float(out)


@dataclass(frozen=True)
class RhoKernel:
    """Normalised increment correlation ``s -> rho_h(s)``; ``rho_h(0) == 1``."""

    sigma2: object
    h: float

    def __post_init__(self):
        if not self.h > 0:
            raise DomainError(f"rho kernel needs h > 0, got {self.h}")

    def __call__(self, s):
        return rho_eval(self, s)


def rho_eval(kernel, s):
    s = np.abs(np.asarray(s, dtype=float))
    h, f = kernel.h, kernel.sigma2
    out = (f(np.abs(s + h)) + f(np.abs(s - h)) - 2.0 * f(s)) / (2.0 * f(h))
    return out if np.ndim(out) else float(out)


def rho_double_integral(kernel, a, b, tol=DEFAULT_TOL):
    """``int_a^b int_a^b |rho_h(x - y)| dx dy`` through its one-dimensional form."""
    if not b > a:
        raise DomainError(f"need b > a, got [{a}, {b}]")
    c, h = b - a, kernel.h
    f = lambda s: abs(rho_eval(kernel, s)) * (c - s)
    edges = [0.0] + [e for e in (h, 2 * h) if e < c]
    if edges[-1] < c:
        lo = edges[-1]
        # rho decays algebraically away from the kinks; geometric panels keep quad happy
        extra = np.geomspace(lo, c, max(2, int(math.log2(c / lo)) + 2))[1:] if lo > 0 else [c]
        edges += list(extra)
    edges = np.unique(np.asarray(edges))
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        total += _quad(f, lo, hi, tol * 1e-2, epsabs=tol * 1e-3 * h * c)[0]
    return 2.0 * total


def concave_covariance_bound(a, b, h):
    """Upper bound ``6 (b - a) h`` for concave increasing ``sigma^2``."""
    return 6.0 * (b - a) * h


# --------------------------------------------------------------------------
# paths
# --------------------------------------------------------------------------

@dataclass
class GaussianPath:
    """Values at ``a, a + delta, ..., b + h_max``; the value at ``a`` is 0."""

    a: float
    b: float
    delta: float
    h_max: float
    values: np.ndarray

    @property
    def x(self):
        return self.a + self.delta * np.arange(self.values.size)

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["x", "value"])
            for x, v in zip(self.x, self.values):
                w.writerow([repr(float(x)), repr(float(v))])


def grid_size(a, b, delta, h_max):
    n = (b - a + h_max) / delta
    k = round(n)
    if k < 1 or abs(n - k) > 1e-9 * max(1.0, n):
        raise AlignmentError(f"b - a + h_max = {b - a + h_max} is not a multiple of {delta}")
    return k + 1


class IncrementSampler:
    """Exact sampler for the increment sequence of a stationary-increment process.

    The eigenvalues of the circulant embedding are computed once; each call
    to :meth:`sample` costs one FFT.  When the embedding is not nonnegative
    definite the sampler falls back to a jittered Cholesky factor.
    """

    def __init__(self, sigma2, a, b, delta, h_max=0.0):
        if not delta > 0:
            raise DomainError(f"grid spacing must be positive, got {delta}")
        if not b > a:
            raise DomainError(f"need b > a, got [{a}, {b}]")
        self.sigma2, self.a, self.b, self.delta, self.h_max = sigma2, a, b, delta, h_max
        self.n_points = grid_size(a, b, delta, h_max)
        n = self.n_points - 1
        m = 1 << max(1, math.ceil(math.log2(max(n, 2))))
        acov = np.asarray(increment_autocovariance(sigma2, delta, np.arange(m + 1)), dtype=float)
        row = np.concatenate([acov, acov[-2:0:-1]])
        eig = np.fft.fft(row).real
        self.method = "circulant"
        if eig.min() < -1e-10 * eig.max():
            self.method = "cholesky"
            cov = linalg.toeplitz(acov[:n])
            cov[np.diag_indices(n)] += _JITTER * cov.diagonal().max()
            try:
                self._chol = linalg.cholesky(cov, lower=True)
            except linalg.LinAlgError as exc:
                raise SimulationError(f"increment covariance of {sigma2!r} is not "
                                      "positive definite") from exc
        else:
            self._scale = np.sqrt(np.clip(eig, 0.0, None) / eig.size)
        self._n = n

    def increments(self, rng):
        if self.method == "circulant":
            z = rng.standard_normal(self._scale.size) + 1j * rng.standard_normal(self._scale.size)
            return np.fft.fft(self._scale * z).real[: self._n]
        return self._chol @ rng.standard_normal(self._n)

    def sample(self, seed):
        rng = np.random.default_rng(seed)
        values = np.empty(self.n_points)
        values[0] = 0.0
        np.cumsum(self.increments(rng), out=values[1:])
        return GaussianPath(self.a, self.b, self.delta, self.h_max, values)


def simulate_stationary_increment_path(sigma2, a, b, delta, h_max, seed):
    return IncrementSampler(sigma2, a, b, delta, h_max).sample(seed)


# --------------------------------------------------------------------------
# L^p moduli
# --------------------------------------------------------------------------

def lag_steps(h, delta):
    k = h / delta
    ki = round(k)
    if ki < 1 or abs(k - ki) > 1e-9 * max(1.0, k):
        raise AlignmentError(f"h = {h} is not a positive multiple of the spacing {delta}")
    return ki


def _window(path, h, a, b):
    k = lag_steps(h, path.delta)
    a = path.a if a is None else a
    b = path.b if b is None else b
    i0 = round((a - path.a) / path.delta)
    i1 = round((b - path.a) / path.delta)
    if i0 < 0 or i1 <= i0 or i1 - 1 + k > path.values.size - 1:
        raise DomainError(f"window [{a}, {b}] with h = {h} leaves the path grid")
    return k, i0, i1


def lp_modulus_gaussian(path, h, p, sigma2, a=None, b=None):
    """Left-endpoint Riemann sum of ``|G(x+h) - G(x)|^p / sigma(h)^p`` over ``[a, b)``."""
    if p < 1:
        raise DomainError(f"p must be >= 1, got {p}")
    k, i0, i1 = _window(path, h, a, b)
    v = path.values
    diff = v[i0 + k: i1 + k] - v[i0:i1]
    return path.delta * float(np.sum(np.abs(diff) ** p)) / sigma2(h) ** (p / 2.0)


def lp_modulus_squared_gaussian(path, h, p, sigma2, a=None, b=None):
    """As :func:`lp_modulus_gaussian` for the squared path ``G^2``."""
    if p < 1:
        raise DomainError(f"p must be >= 1, got {p}")
    k, i0, i1 = _window(path, h, a, b)
    sq = path.values ** 2
    diff = sq[i0 + k: i1 + k] - sq[i0:i1]
    return path.delta * float(np.sum(np.abs(diff) ** p)) / sigma2(h) ** (p / 2.0)


def squared_limit_constant(p):
    """``2^p E|eta|^p``: limit of the squared-path modulus per unit ``int |G|^p``."""
    return 2.0 ** p * abs_moment_normal(p)


def abs_power_integral(path, p, a=None, b=None):
    """Left-endpoint Riemann sum of ``|G(x)|^p`` over ``[a, b)``."""
    a = path.a if a is None else a
    b = path.b if b is None else b
    i0 = round((a - path.a) / path.delta)
    i1 = round((b - path.a) / path.delta)
    return path.delta * float(np.sum(np.abs(path.values[i0:i1]) ** p))
