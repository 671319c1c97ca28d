"""Symmetric stable Lévy paths, bin-count local times and their L^p moduli."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from levy_moduli.errors import AlignmentError, DomainError
from levy_moduli.spectral import (
    CharacteristicExponent,
    StructureFunction,
    _quad,
    local_time_factor,
    sigma0_sq_stable_closed,
)

# a lag is called resolvable when bin averaging keeps this share of sigma_0^2(h)
RESOLVABLE_FACTOR = 0.95

# bins narrower than this many one-step scales are flagged as unresolved
MIN_BIN_RATIO = 4.0


@dataclass
class SamplePath:
    """Skeleton ``X(k t_end / n)``, ``k = 0..n``, with ``values[0] == 0``."""

    t_end: float
    n: int
    values: np.ndarray
    exponent: CharacteristicExponent

    @property
    def dt(self):
        return self.t_end / self.n

    @property
    def times(self):
        return self.dt * np.arange(self.n + 1)

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "x"])
            for t, x in zip(self.times, self.values):
                w.writerow([repr(float(t)), repr(float(x))])


def standard_symmetric_stable(beta, size, rng):
    """Draws with characteristic function ``exp(-|lambda|^beta)``.

    Chambers-Mallows-Stuck transform of a uniform angle and a unit
    exponential; ``beta == 2`` returns ``N(0, 2)`` directly.
    """
    if beta == 2.0:
        return math.sqrt(2.0) * rng.standard_normal(size)
    v = rng.uniform(-0.5 * math.pi, 0.5 * math.pi, size)
    w = rng.standard_exponential(size)
    return (np.sin(beta * v) / np.cos(v) ** (1.0 / beta)
            * (np.cos((1.0 - beta) * v) / w) ** ((1.0 - beta) / beta))


def simulate_levy_path(exponent, t, n, seed):
    """Skeleton of the Lévy process with power-law exponent ``c |lambda|^beta``."""
    pl = exponent.power_law
    if pl is None:
        raise DomainError("path simulation needs a stable or Brownian exponent")
    c, beta = pl
    if beta <= 1.0:
        raise DomainError("stable processes with beta <= 1 have no local times")
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}")
    if n < 1:
        raise DomainError(f"need at least one step, got n = {n}")
    rng = np.random.default_rng(seed)
    steps = (c * t / n) ** (1.0 / beta) * standard_symmetric_stable(beta, n, rng)
    values = np.empty(n + 1)
    values[0] = 0.0
    np.cumsum(steps, out=values[1:])
    return SamplePath(float(t), int(n), values, exponent)


def simulate_stable_path(beta, t, n, seed):
    """Canonical ``beta``-stable skeleton; ``beta == 2`` is ``sqrt(2)`` times Brownian motion."""
    return simulate_levy_path(CharacteristicExponent.stable(beta), t, n, seed)


def step_scale(exponent, t, n):
    beta = exponent.power_law[1] if exponent.power_law else exponent.tail[2]
    return (t / n) ** (1.0 / beta)


def default_bin_width(exponent, t, n):
    """Smallest dyadic width at least ``MIN_BIN_RATIO`` one-step scales."""
    target = MIN_BIN_RATIO * step_scale(exponent, t, n)
    return 2.0 ** math.ceil(math.log2(target) - 1e-12)


def sigma0_structure(exponent, tol=1e-9):
    """``sigma_0^2`` of ``exponent``; closed form for power laws, quadrature otherwise."""
    pl = exponent.power_law
    if pl is None:
        return StructureFunction.spectral(exponent, tol=tol)
    c, beta = pl
    return StructureFunction.from_callable(
        lambda h: sigma0_sq_stable_closed(beta, np.abs(h)) / c,
        name=f"sigma0[{exponent.describe()}]", concave=True, vectorized=True)


def binning_factor(sigma2, eps, h):
    """Expected share of ``E(L^{x+h} - L^x)^2`` kept by averaging over bins of width ``eps``.

    Bin averages of a field whose increments have variance ``sigma2`` differ
    at lag ``h`` by a triangle-weighted mix of second differences; the ratio
    to ``sigma2(h)`` is the bias of the bin-count modulus.
    """
    if not h >= eps > 0:
        raise DomainError(f"need h >= eps > 0, got h = {h}, eps = {eps}")

    def f(w):
        return (1.0 - w / eps) * (float(sigma2(w + h)) + float(sigma2(abs(w - h)))
                                  - 2.0 * float(sigma2(w)))

    # integrand is even in w
    points = [h] if h < eps else None
    return _quad(f, 0.0, eps, 1e-10, points=points)[0] / eps / float(sigma2(h))


def smallest_resolvable(sigma2, eps, schedule, threshold=RESOLVABLE_FACTOR):
    """Index of the smallest ``h`` in ``schedule`` whose :func:`binning_factor` reaches ``threshold``."""
    best = None
    for i, h in enumerate(schedule):
        if binning_factor(sigma2, eps, h) >= threshold and (best is None or h < schedule[best]):
            best = i
    return best


# --------------------------------------------------------------------------
# local times
# --------------------------------------------------------------------------

@dataclass
class LocalTimeField:
    """Occupation density on bins centred at ``k * eps`` for ``k = k0, k0+1, ...``.

    Outside the stored bins the field is exactly zero (the path never went
    there), so lookups past either end return 0.
    """

    eps: float
    k0: int
    values: np.ndarray
    t: float
    resolution_warning: bool = False
    notes: list = field(default_factory=list)

    @property
    def centers(self):
        return self.eps * (self.k0 + np.arange(self.values.size))

    @property
    def mass(self):
        return self.eps * float(np.sum(self.values))

    def at(self, k):
        """Values at bin indices ``k`` (absolute, i.e. centre ``k * eps``)."""
        k = np.asarray(k) - self.k0
        inside = (k >= 0) & (k < self.values.size)
        out = np.zeros(k.shape)
        out[inside] = self.values[k[inside]]
        return out

    def value_at(self, x):
        return float(self.at(np.array([round(x / self.eps)]))[0])

    def bin_range(self, a, b):
        """Absolute bin indices with centres in ``[a, b)``."""
        lo = math.ceil(a / self.eps - 1e-9)
        hi = math.ceil(b / self.eps - 1e-9)
        return np.arange(lo, hi)

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["x", "ell"])
            for x, v in zip(self.centers, self.values):
                w.writerow([repr(float(x)), repr(float(v))])


def estimate_local_time(path, eps=None, a=None, b=None, t=None):
    """Bin-count occupation density of the skeleton up to time ``t``.

    Each of the first ``m = t n / t_end`` skeleton points contributes
    ``dt / eps`` to its bin, so ``eps * sum(ell) == t``.  The stored bins
    span the visited range and ``[a, b]``.
    """
    if t is None:
        t = path.t_end
    m = t / path.dt
    mi = round(m)
    if abs(m - mi) > 1e-9 * max(1.0, m) or not 0 <= mi <= path.n:
        raise AlignmentError(f"t = {t} is not on the time grid of the path")
    if eps is None:
        eps = default_bin_width(path.exponent, path.t_end, path.n)
    if not eps > 0:
        raise DomainError(f"bin width must be positive, got {eps}")
    idx = np.floor(path.values[:mi] / eps + 0.5).astype(np.int64)
    lo = int(idx.min()) if mi else 0
    hi = int(idx.max()) if mi else 0
    if a is not None:
        lo = min(lo, math.floor(a / eps))
    if b is not None:
        hi = max(hi, math.ceil(b / eps))
    counts = np.bincount(idx - lo, minlength=hi - lo + 1).astype(float)
    ell = counts * (path.dt / eps)
    warn = eps < MIN_BIN_RATIO * step_scale(path.exponent, path.t_end, path.n) * (1 - 1e-12)
    out = LocalTimeField(eps=float(eps), k0=lo, values=ell, t=float(mi * path.dt),
                         resolution_warning=bool(warn))
    if warn:
        out.notes.append(f"bin width {eps:g} is below {MIN_BIN_RATIO:g} one-step scales")
    return out


def _lag_bins(h, eps):
    k = h / eps
    ki = round(k)
    if ki < 1 or abs(k - ki) > 1e-9 * max(1.0, k):
        raise AlignmentError(f"h = {h} is not a positive multiple of the bin width {eps}")
    return ki


def _support_window(field_, k):
    # full line: every bin whose difference at lag k can be nonzero
    eps = field_.eps
    return (field_.k0 - k) * eps, (field_.k0 + field_.values.size) * eps


def lp_modulus_local_time(field_, h, p, sigma0_sq_h, a=None, b=None):
    """``eps * sum_{x_j in [a,b)} |ell(x_j + h) - ell(x_j)|^p / sigma0(h)^p``.

    ``sigma0_sq_h`` is the number ``sigma_0^2(h)`` or a structure function.
    Omitting the window integrates over the whole line.
    """
    if p < 1:
        raise DomainError(f"p must be >= 1, got {p}")
    k = _lag_bins(h, field_.eps)
    if a is None or b is None:
        a, b = _support_window(field_, k)
    s2 = sigma0_sq_h(h) if callable(sigma0_sq_h) else sigma0_sq_h
    j = field_.bin_range(a, b)
    diff = field_.at(j + k) - field_.at(j)
    return field_.eps * float(np.sum(np.abs(diff) ** p)) / s2 ** (p / 2.0)


def rhs_local_time(field_, p, a=None, b=None):
    """``2^{p/2} E|eta|^p eps * sum_{x_j in [a,b)} ell_j^{p/2}``."""
    if a is None or b is None:
        a, b = _support_window(field_, 0)
    j = field_.bin_range(a, b)
    return local_time_factor(p) * field_.eps * float(np.sum(field_.at(j) ** (p / 2.0)))


def quadratic_variation_sum(field_, spacing):
    """``sum_j (ell(j s) - ell((j-1) s))^2`` over the lattice ``s Z``."""
    k = _lag_bins(spacing, field_.eps)
    first = math.floor(field_.k0 / k) - 1
    last = math.ceil((field_.k0 + field_.values.size) / k) + 1
    lattice = field_.at(k * np.arange(first, last + 1))
    return float(np.sum(np.diff(lattice) ** 2))


def centered_modulus(field_, h, p, sigma0_sq_h, a=None, b=None):
    """Modulus minus its limit, ``H_h(t)`` in the L^m convergence statement."""
    if a is None or b is None:
        a, b = _support_window(field_, _lag_bins(h, field_.eps))
    return (lp_modulus_local_time(field_, h, p, sigma0_sq_h, a, b)
            - rhs_local_time(field_, p, a, b))
