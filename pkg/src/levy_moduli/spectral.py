"""Characteristic exponents, spectral structure functions and limit constants.

Every spectral quantity here is a one-sided Fourier-type integral over
``lambda >= 0`` of a positive weight built from the characteristic exponent
``psi``.  The integrals are split at the zeros of the oscillating factor and
the part beyond the last panel is handled through the pure power-law tail
``psi(lambda) = c * lambda**gamma`` that every supported family has past some
finite ``lambda``.
"""

from __future__ import annotations

import csv
import math
import threading
from dataclasses import dataclass, field

import mpmath
import numpy as np
from scipy import integrate
from scipy.special import gamma as gamma_fn

from levy_moduli.errors import DomainError, QuadratureError

DEFAULT_TOL = 1e-9

# minimum number of sin^2 periods integrated panel by panel before the tail
_MIN_PERIODS = 16
_MAX_PANELS = 64
# exp(-40) ~ 4e-18: cutoff for e^{-t psi}
_EXP_CUTOFF = 40.0


_MIN_EPSREL = 1e-13


def _quad(f, a, b, tol, *, epsabs=0.0, limit=500, **kw):
    tol = max(tol, _MIN_EPSREL)
    out = integrate.quad(f, a, b, epsabs=epsabs, epsrel=tol, limit=limit,
                         full_output=1, **kw)
    val, err = out[0], out[1]
    if len(out) > 3 and err > 100.0 * max(epsabs, tol * abs(val)):
        raise QuadratureError(f"quad on [{a}, {b}] did not converge: {out[3]}", err)
    return val, err


# --------------------------------------------------------------------------
# characteristic exponents
# --------------------------------------------------------------------------

class CharacteristicExponent:
    """The Lévy exponent ``psi`` of a symmetric Lévy process, on ``lambda >= 0``.

    Use the constructors :meth:`stable`, :meth:`brownian_half`,
    :meth:`scaled_stable` and :meth:`tabulated` rather than ``__init__``.
    """

    def __init__(self, family, *, beta=None, scale=1.0, knots=None,
                 values=None, tail_exponent=None):
        self.family = family
        self.beta = beta
        self.scale = float(scale)
        self.knots = knots
        self.values = values
        self.tail_exponent_ = tail_exponent

    # -- constructors ------------------------------------------------------
    @classmethod
    def stable(cls, beta):
        """Canonical symmetric stable exponent ``|lambda|**beta``, 1 < beta <= 2."""
        _check_beta(beta)
        return cls("stable", beta=float(beta))

    @classmethod
    def brownian_half(cls):
        """Standard Brownian motion, ``psi = lambda**2 / 2``."""
        return cls("brownian", beta=2.0, scale=0.5)

    @classmethod
    def scaled_stable(cls, c, beta):
        if not c > 0:
            raise DomainError(f"scale must be positive, got {c}")
        _check_beta(beta)
        return cls("scaled", beta=float(beta), scale=float(c))

    @classmethod
    def tabulated(cls, lam, psi, tail_exponent):
        """Log-log interpolated exponent through ``(lam[i], psi[i])``.

        A leading knot ``(0, 0)`` anchors the table at the origin; below the
        first positive knot the first segment's power law is continued.
        Beyond the last knot ``psi`` is extrapolated as
        ``psi[-1] * (lambda / lam[-1])**tail_exponent``.
        """
        lam = np.asarray(lam, dtype=float)
        psi = np.asarray(psi, dtype=float)
        if lam.ndim != 1 or lam.shape != psi.shape or lam.size < 2:
            raise DomainError("tabulated exponent needs two matching 1-d arrays")
        if np.any(np.diff(lam) <= 0):
            raise DomainError("tabulated lambda grid must be strictly increasing")
        if lam[0] < 0:
            raise DomainError("tabulated lambda grid must lie in lambda >= 0")
        if not tail_exponent > 1:
            raise DomainError(f"tail exponent must exceed 1, got {tail_exponent}")
        anchored = lam[0] == 0.0
        if anchored and psi[0] != 0.0:
            raise DomainError("origin anchor must have psi(0) = 0")
        pos = slice(1, None) if anchored else slice(None)
        if np.any(psi[pos] <= 0):
            raise DomainError("tabulated psi must be positive for lambda > 0")
        if anchored and lam.size < 3:
            raise DomainError("an anchored table needs two positive knots")
        return cls("tabulated", knots=lam, values=psi,
                   tail_exponent=float(tail_exponent))

    @classmethod
    def from_csv(cls, path):
        """Read a ``lambda,psi`` table with a ``#tail_exponent=<g>`` trailer."""
        lam, psi, tail = [], [], None
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        if not rows or [c.strip() for c in rows[0]] != ["lambda", "psi"]:
            raise DomainError(f"{path}: expected header 'lambda,psi'")
        for row in rows[1:]:
            if not row or not "".join(row).strip():
                continue
            if row[0].startswith("#"):
                key, _, val = ",".join(row).lstrip("#").partition("=")
                if key.strip() == "tail_exponent":
                    tail = float(val)
                continue
            lam.append(float(row[0]))
            psi.append(float(row[1]))
        if tail is None:
            raise DomainError(f"{path}: missing '#tail_exponent=' line")
        return cls.tabulated(lam, psi, tail)

    def to_csv(self, path, lam=None):
        if lam is None:
            if self.family != "tabulated":
                raise DomainError("a lambda grid is required for analytic families")
            lam = self.knots
        else:
            lam = np.asarray(lam, dtype=float)
        psi = self.values if lam is self.knots else self(lam)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["lambda", "psi"])
            for x, y in zip(lam, psi):
                w.writerow([repr(float(x)), repr(float(y))])
            fh.write(f"#tail_exponent={self.tail[2]!r}\n")

    # -- evaluation --------------------------------------------------------
    def __call__(self, lam):
        # psi is even; tables are stored on lambda >= 0
        lam = np.abs(np.asarray(lam, dtype=float))
        if self.family != "tabulated":
            out = self.scale * lam ** self.beta
        else:
            out = self._tabulated(lam)
        return out if out.ndim else float(out)

    def _tabulated(self, lam):
        x, y = self.knots, self.values
        anchored = x[0] == 0.0
        lx, ly = (x[1:], y[1:]) if anchored else (x, y)
        first = lx[0]
        if not anchored and np.any(lam < first):
            raise DomainError(
                f"lambda below first knot {first} and the table has no origin anchor")
        out = np.empty_like(lam)
        lo = lam < first
        hi = lam > lx[-1]
        mid = ~(lo | hi)
        out[mid] = np.exp(np.interp(np.log(lam[mid]), np.log(lx), np.log(ly)))
        out[hi] = ly[-1] * (lam[hi] / lx[-1]) ** self.tail_exponent_
        if np.any(lo):
            slope = math.log(ly[1] / ly[0]) / math.log(lx[1] / lx[0])
            with np.errstate(divide="ignore"):
                out[lo] = np.where(lam[lo] > 0, ly[0] * (lam[lo] / first) ** slope, 0.0)
        return out

    @property
    def scalar(self):
        """A float -> float version of ``psi`` for use inside quadrature loops."""
        if self.family == "tabulated":
            return lambda lam: float(self._tabulated(np.array([lam]))[0])
        c, b = self.scale, self.beta
        return lambda lam: c * lam ** b

    # -- metadata ----------------------------------------------------------
    @property
    def tail(self):
        """``(start, c, gamma)`` with ``psi = c * lambda**gamma`` for ``lambda >= start``."""
        if self.family == "tabulated":
            x, y = self.knots[-1], self.values[-1]
            g = self.tail_exponent_
            return float(x), float(y / x ** g), g
        return 0.0, self.scale, self.beta

    @property
    def power_law(self):
        """``(c, beta)`` if ``psi = c * lambda**beta`` everywhere, else None."""
        if self.family == "tabulated":
            return None
        return self.scale, self.beta

    def breakpoints(self, upto):
        if self.family != "tabulated":
            return np.empty(0)
        k = self.knots
        return k[(k > 0) & (k < upto)]

    def tail_inverse_integral(self, lam):
        """Exact ``int_lam^inf dl / psi(l)`` for ``lam`` in the power-law tail."""
        start, c, g = self.tail
        if lam < start or lam <= 0:
            raise DomainError(f"{lam} is not in the power-law tail (starts at {start})")
        return lam ** (1.0 - g) / (c * (g - 1.0))

    def describe(self):
        if self.family == "stable":
            return f"stable(beta={self.beta:g})"
        if self.family == "brownian":
            return "brownian_half"
        if self.family == "scaled":
            return f"scaled_stable(c={self.scale:g}, beta={self.beta:g})"
        return f"tabulated(knots={len(self.knots)}, tail={self.tail_exponent_:g})"

    def __repr__(self):
        return f"CharacteristicExponent.{self.describe()}"


def _check_beta(beta):
    if not (1.0 < beta <= 2.0):
        raise DomainError(f"beta must lie in (1, 2], got {beta}")


def eval_psi(exponent, lam):
    if np.any(np.asarray(lam) < 0):
        raise DomainError("lambda must be nonnegative")
    return exponent(lam)


# --------------------------------------------------------------------------
# oscillatory spectral integrals
# --------------------------------------------------------------------------

def _log_tail(g, lam0, tol):
    """``int_lam0^inf g`` for ``g`` decaying faster than ``1/lambda^2``, via ``lambda = lam0/w``."""
    def f(w):
        if w == 0.0:
            return 0.0
        return g(lam0 / w) * lam0 / (w * w)
    return _quad(f, 0.0, 1.0, tol)[0]


def _sin2_integral(exponent, g, h, tol, tail_integral):
    """``int_0^inf sin^2(lambda h / 2) g(lambda) d lambda`` for decaying ``g >= 0``.

    Panels end at zeros ``2 k pi / h``; past ``Lam`` (a zero inside the
    power-law tail) ``sin^2 = (1 - cos)/2`` splits the rest into
    ``tail_integral(Lam) / 2`` and a Fourier-cosine integral.
    """
    period = 2.0 * math.pi / h
    start = exponent.tail[0]
    n_periods = max(_MIN_PERIODS, math.ceil(start / period))
    lam_cut = n_periods * period
    step = max(1, math.ceil(n_periods / _MAX_PANELS))
    edges = period * np.arange(0, n_periods + 1, step, dtype=float)
    if edges[-1] < lam_cut:
        edges = np.append(edges, lam_cut)
    edges = np.union1d(edges, exponent.breakpoints(lam_cut))

    def f(lam):
        s = math.sin(0.5 * lam * h)
        return s * s * g(lam)

    body = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        body += _quad(f, lo, hi, tol * 1e-2)[0]
    flat = 0.5 * tail_integral(lam_cut)
    scale = abs(body) + abs(flat)
    cos_part, _ = _quad(g, lam_cut, np.inf, tol, epsabs=tol * scale * 1e-2,
                        weight="cos", wvar=h)
    return body + flat - 0.5 * cos_part


def _check_h(h):
    if h < 0:
        raise DomainError(f"h must be nonnegative, got {h}")


def sigma0_sq(exponent, h, tol=DEFAULT_TOL):
    """``(4/pi) int_0^inf sin^2(lambda h/2) / psi(lambda) d lambda``."""
    _check_h(h)
    if h == 0:
        return 0.0
    g = lambda lam: 1.0 / exponent(lam)
    return 4.0 / math.pi * _sin2_integral(exponent, g, h, tol,
                                          exponent.tail_inverse_integral)


def sigma0_sq_stable_closed(beta, h):
    """Closed form of ``sigma0_sq`` for ``psi = |lambda|**beta``."""
    _check_beta(beta)
    _check_h(h)
    return h ** (beta - 1.0) / (gamma_fn(beta) * math.sin(0.5 * math.pi * (beta - 1.0)))


def _check_alpha(alpha):
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")


def _resolvent_tail(exponent, alpha, tol):
    # 1/(a+psi) = 1/psi - a/(psi (a+psi)); the second term decays like lambda^-2g
    def tail(lam0):
        rest = _log_tail(lambda l: alpha / (exponent(l) * (alpha + exponent(l))), lam0, tol)
        return exponent.tail_inverse_integral(lam0) - rest
    return tail


def sigma_alpha_sq(exponent, alpha, h, tol=DEFAULT_TOL):
    """``2 (u^alpha(0) - u^alpha(h))`` as a sin^2 integral against ``1/(alpha+psi)``."""
    _check_alpha(alpha)
    _check_h(h)
    if h == 0:
        return 0.0
    g = lambda lam: 1.0 / (alpha + exponent(lam))
    return 4.0 / math.pi * _sin2_integral(exponent, g, h, tol,
                                          _resolvent_tail(exponent, alpha, tol))


def sigma_tilde_sq(exponent, alpha, h, tol=DEFAULT_TOL):
    """Complement of :func:`sigma_alpha_sq` in :func:`sigma0_sq`."""
    _check_alpha(alpha)
    _check_h(h)
    if h == 0:
        return 0.0

    def g(lam):
        p = exponent(lam)
        return alpha / (p * (alpha + p))

    return 4.0 / math.pi * _sin2_integral(exponent, g, h, tol,
                                          lambda l0: _log_tail(g, l0, tol))


def _cos_transform(exponent, g, x, tol, lam_cut, tail=None, epsabs=0.0):
    """``int_0^inf cos(lambda x) g(lambda) d lambda`` with ``g`` negligible or
    handled by ``tail`` past ``lam_cut``."""
    edges = np.union1d([0.0, lam_cut], exponent.breakpoints(lam_cut))
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        if x == 0:
            total += _quad(g, lo, hi, tol * 1e-2, epsabs=epsabs)[0]
        else:
            total += _quad(g, lo, hi, tol * 1e-2, epsabs=epsabs, weight="cos", wvar=x)[0]
    if tail is not None:
        if x == 0:
            total += tail(lam_cut)
        else:
            total += _quad(g, lam_cut, np.inf, tol, epsabs=tol * abs(total) * 1e-2,
                           weight="cos", wvar=abs(x))[0]
    return total


def u_alpha(exponent, alpha, x, tol=DEFAULT_TOL):
    """The alpha-potential density ``(1/pi) int cos(lambda x) / (alpha + psi)``."""
    _check_alpha(alpha)
    start, c, g_ = exponent.tail
    lam_cut = max(start, (alpha / c) ** (1.0 / g_), 1.0) * 4.0
    g = lambda lam: 1.0 / (alpha + exponent(lam))
    return _cos_transform(exponent, g, abs(x), tol, lam_cut,
                          tail=_resolvent_tail(exponent, alpha, tol)) / math.pi


def _decay_cutoff(exponent, t):
    # smallest lambda past which t * psi >= _EXP_CUTOFF (psi nondecreasing in the tail)
    start, c, g = exponent.tail
    return max(start, (_EXP_CUTOFF / (t * c)) ** (1.0 / g))


def transition_density(exponent, t, x, tol=DEFAULT_TOL):
    """``p_t(x) = (1/pi) int_0^inf cos(lambda x) exp(-t psi(lambda)) d lambda``."""
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}")
    psi = exponent.scalar
    g = lambda lam: math.exp(-t * psi(lam))
    lam_cut = _decay_cutoff(exponent, t)
    # |p_t(x)| <= p_t(0) ~ lam_cut / 40^(1/gamma): absolute floor on that scale
    floor = tol * 1e-2 * lam_cut
    return max(_cos_transform(exponent, g, abs(x), tol, lam_cut, epsabs=floor), 0.0) / math.pi


def density_origin_constant(exponent):
    """``C`` with ``p_s(0) = C s^{-1/beta}`` for power-law exponents."""
    pl = exponent.power_law
    if pl is None:
        raise DomainError("closed form needs a power-law exponent")
    c, beta = pl
    return gamma_fn(1.0 + 1.0 / beta) / (math.pi * c ** (1.0 / beta))


def singularity_power(exponent):
    """Exponent ``k`` of the substitution ``s = u**k`` that flattens ``s**(-1/gamma)``."""
    g = exponent.tail[2]
    if not g > 1:
        raise DomainError("no local time scaling for tail exponent <= 1")
    return g / (g - 1.0)


def v_of_t(exponent, t, tol=DEFAULT_TOL):
    """``V(t) = int_0^t p_s(0) ds``, the expected local time at the start point."""
    if t < 0:
        raise DomainError(f"t must be nonnegative, got {t}")
    if t == 0:
        return 0.0
    if exponent.power_law is not None:
        beta = exponent.power_law[1]
        return density_origin_constant(exponent) * beta / (beta - 1.0) * t ** (1.0 - 1.0 / beta)
    k = singularity_power(exponent)

    def f(u):
        if u == 0.0:
            u = 1e-300
        s = u ** k
        return transition_density(exponent, s, 0.0, tol * 1e-2) * k * u ** (k - 1.0)

    return _quad(f, 0.0, t ** (1.0 / k), tol)[0]


# --------------------------------------------------------------------------
# structure functions
# --------------------------------------------------------------------------

class StructureFunction:
    """Increment variance ``sigma^2(h)`` of a stationary-increment Gaussian process.

    ``concave`` is True/False when known analytically and None otherwise
    (see :func:`check_concavity`).  Spectral sources cache evaluated points;
    the cache is lock-guarded so instances can be shared between threads.
    """

    def __init__(self, func, *, name, concave=None, delta=1.0, tol=DEFAULT_TOL,
                 vectorized=False):
        self._func = func
        self.name = name
        self.concave = concave
        self.delta = delta
        self.tol = tol
        self._vectorized = vectorized
        self._cache = {}
        self._lock = threading.Lock()

    @classmethod
    def power_law(cls, r, scale=1.0):
        """``sigma^2(h) = scale * h**r`` (fractional Brownian motion), 0 < r < 2."""
        if not 0 < r < 2:
            raise DomainError(f"power-law exponent must lie in (0, 2), got {r}")
        name = f"power(r={r:g})" if scale == 1.0 else f"power(r={r:g}, scale={scale:g})"
        return cls(lambda h: scale * np.abs(h) ** r, name=name, concave=r <= 1,
                   vectorized=True)

    @classmethod
    def closed_form_stable(cls, beta):
        _check_beta(beta)
        return cls(lambda h: sigma0_sq_stable_closed(beta, abs(h)),
                   name=f"stable_closed(beta={beta:g})", concave=True)

    @classmethod
    def spectral(cls, exponent, alpha=0.0, tol=DEFAULT_TOL):
        """``sigma_0^2`` for ``alpha == 0``, ``sigma_alpha^2`` for ``alpha > 0``."""
        if alpha < 0:
            raise DomainError(f"alpha must be nonnegative, got {alpha}")
        if alpha == 0:
            f = lambda h: sigma0_sq(exponent, abs(h), tol)
            name = f"sigma0[{exponent.describe()}]"
        else:
            f = lambda h: sigma_alpha_sq(exponent, alpha, abs(h), tol)
            name = f"sigma_alpha[{exponent.describe()}, alpha={alpha:g}]"
        return cls(f, name=name, tol=tol)

    @classmethod
    def from_callable(cls, func, name, concave=None, vectorized=False):
        return cls(func, name=name, concave=concave, vectorized=vectorized)

    def _scalar(self, h):
        key = float(h)
        with self._lock:
            if key in self._cache:
                return self._cache[key]
        val = float(self._func(key))
        with self._lock:
            self._cache[key] = val
        return val

    def __call__(self, h):
        if isinstance(h, mpmath.mpf):
            return self._func(h)
        arr = np.asarray(h, dtype=float)
        if self._vectorized:
            out = np.asarray(self._func(arr), dtype=float)
        elif arr.ndim == 0:
            out = np.asarray(self._scalar(arr))
        else:
            out = np.array([self._scalar(v) for v in arr.ravel()]).reshape(arr.shape)
        return out if out.ndim else float(out)

    def sigma(self, h):
        if isinstance(h, mpmath.mpf):
            return mpmath.sqrt(self(h))
        return np.sqrt(self(h))

    def __repr__(self):
        return f"StructureFunction({self.name})"


# --------------------------------------------------------------------------
# regularity condition checkers (numerical evidence only)
# --------------------------------------------------------------------------

@dataclass
class TrendReport:
    ratios: dict
    verdict: str
    note: str = ""


def _trend_verdict(values, hold_below, fail_above):
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        return "inconclusive"
    diffs = np.diff(v)
    slack = 1e-12 * np.maximum(np.abs(v[:-1]), 1.0)
    decreasing = bool(np.all(diffs <= slack)) and v[-1] < v[0]
    nondecreasing = bool(np.all(diffs >= -slack))
    if decreasing and v[-1] < hold_below:
        return "holds"
    if nondecreasing and np.min(v) >= fail_above:
        return "fails"
    return "inconclusive"


_TINY = mpmath.mpf("1e-300")


def check_condition_cq(sigma2, q, n_max=12, hold_below=0.01, fail_above=0.1):
    """Trend of ``sigma(1/(n log(n)^(q+1))) / sigma(1/log(n)^q)`` over ``n = 10^k``.

    Arguments below the float range are passed to ``sigma2`` as mpmath
    numbers; sources that cannot take them end the sweep early.
    """
    if not q > 1:
        raise DomainError(f"q must exceed 1, got {q}")
    ratios, note = {}, ""
    for k in range(2, int(n_max) + 1):
        n = mpmath.mpf(10) ** k
        ln = mpmath.log(n)
        small = 1 / (n * ln ** (q + 1))
        big = 1 / ln ** q
        try:
            num = sigma2(float(small)) if small > _TINY else sigma2(small)
            den = sigma2(float(big)) if big > _TINY else sigma2(big)
        except (TypeError, ValueError, DomainError):
            note = f"stopped at n=10^{k}: argument out of range for {sigma2!r}"
            break
        ratios[k] = float(mpmath.sqrt(mpmath.mpf(num) / mpmath.mpf(den)))
    return TrendReport(ratios, _trend_verdict(list(ratios.values()), hold_below, fail_above), note)


def check_condition_lambda_gamma(exponent, gamma_, lam_max=1e8, points=40,
                                 hold_below=0.01, fail_above=0.1):
    """Trend of ``lambda**gamma / psi(lambda)`` on a geometric grid up to ``lam_max``."""
    if not gamma_ > 0:
        raise DomainError(f"gamma must be positive, got {gamma_}")
    lo = max(1.0, exponent.knots[1] if exponent.family == "tabulated" else 1.0)
    lam = np.geomspace(lo, lam_max, points)
    r = lam ** gamma_ / exponent(lam)
    return TrendReport(dict(zip(lam.tolist(), r.tolist())),
                       _trend_verdict(r, hold_below, fail_above))


@dataclass
class ConcavityReport:
    concave: bool
    monotone: bool
    worst_second_difference: float
    tolerance: float = field(default=0.0)

    def __bool__(self):
        return self.concave and self.monotone


def check_concavity(sigma2, delta, n=200, tol=None):
    """Discrete second differences of ``sigma2`` on a uniform grid of ``[0, delta]``."""
    if not delta > 0:
        raise DomainError(f"delta must be positive, got {delta}")
    tol = sigma2.tol if tol is None and hasattr(sigma2, "tol") else (tol or DEFAULT_TOL)
    x = np.linspace(0.0, delta, n + 1)
    y = np.asarray(sigma2(x), dtype=float)
    thresh = 4.0 * tol * max(1.0, float(np.max(np.abs(y))))
    second = y[2:] + y[:-2] - 2.0 * y[1:-1]
    worst = float(np.max(second))
    return ConcavityReport(concave=worst <= thresh,
                           monotone=bool(np.all(np.diff(y) >= -thresh)),
                           worst_second_difference=worst, tolerance=thresh)


# --------------------------------------------------------------------------
# limit constants
# --------------------------------------------------------------------------

def abs_moment_normal(p):
    """``E|eta|^p`` for a standard normal ``eta``."""
    if p < 0:
        raise DomainError(f"p must be nonnegative, got {p}")
    return 2.0 ** (p / 2.0) * gamma_fn((p + 1.0) / 2.0) / math.sqrt(math.pi)


def local_time_factor(p):
    """``2^{p/2} E|eta|^p``, the constant multiplying ``int |L|^{p/2}``."""
    return 2.0 ** (p / 2.0) * abs_moment_normal(p)


def c_beta_p(beta, p):
    """Limit constant for the canonical beta-stable process normalised by ``h^{(beta-1)/2}``."""
    _check_beta(beta)
    if p < 1:
        raise DomainError(f"p must be >= 1, got {p}")
    pref = 1.0 / (gamma_fn(beta) * math.sin(0.5 * math.pi * (beta - 1.0)))
    return pref ** (p / 2.0) * 2.0 ** p / math.sqrt(math.pi) * gamma_fn((p + 1.0) / 2.0)


@dataclass(frozen=True)
class LimitConstants:
    p: float

    @property
    def abs_moment(self):
        return abs_moment_normal(self.p)

    @property
    def local_time_factor(self):
        return local_time_factor(self.p)

    def stable_factor(self, beta):
        return c_beta_p(beta, self.p)
