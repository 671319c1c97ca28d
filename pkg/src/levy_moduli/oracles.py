"""Closed-form and quadrature oracles for local-time moments.

These routines never touch simulated paths; the harness uses them as
independent targets for the Monte Carlo estimates.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from scipy.special import gamma as gamma_fn

from levy_moduli.errors import DomainError
from levy_moduli.spectral import (
    DEFAULT_TOL,
    _log_tail,
    _quad,
    _sin2_integral,
    density_origin_constant,
    singularity_power,
    transition_density,
)

MAX_QUADRATURE_ORDER = 3
FIXTURES_VERSION = 1
GOLDEN_PATH = Path(__file__).with_name("data") / "golden.json"


@dataclass(frozen=True)
class MomentQuery:
    exponent: object
    m: int
    t: float
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    def __post_init__(self):
        if not self.t > 0:
            raise DomainError(f"t must be positive, got {self.t}")
        if int(self.m) != self.m or self.m < 1:
            raise DomainError(f"m must be a positive integer, got {self.m}")


def dirichlet_moment(exponent, m, t):
    """``E^x (L_t^x)^m`` for ``psi = c |lambda|^beta`` via the simplex Dirichlet integral."""
    c0 = density_origin_constant(exponent)
    beta = exponent.power_law[1]
    a = 1.0 - 1.0 / beta
    return (math.factorial(m) * c0 ** m * gamma_fn(a) ** m / gamma_fn(m * a + 1.0)
            * t ** (m * a))


def _split_singular(f, t, k, tol):
    """``int_0^t f(s) ds`` for ``f`` with ``s^{-1/gamma}``-type behaviour at 0
    and ``(t-s)^{1-1/gamma}``-type behaviour at ``t``; ``s = u^k`` on each half."""
    if t <= 0:
        return 0.0
    half = 0.5 * t
    tiny = 1e-300

    def left(u):
        s = max(u, tiny) ** k
        return f(s) * k * max(u, tiny) ** (k - 1.0)

    def right(u):
        r = max(u, tiny) ** k
        return f(t - r) * k * max(u, tiny) ** (k - 1.0)

    return (_quad(left, 0.0, half ** (1.0 / k), tol)[0]
            + _quad(right, 0.0, half ** (1.0 / k), tol)[0])


def _density(exponent, s, x, tol):
    return transition_density(exponent, s, x, tol) if s > 0 else 0.0


def simplex_moment_quadrature(exponent, m, t, dx=0.0, tol=DEFAULT_TOL):
    """``m! int_{0<t_1<..<t_m<t} p_{t_1}(dx) prod p_{t_i - t_{i-1}}(0)`` by nested quadrature."""
    if m > MAX_QUADRATURE_ORDER:
        raise DomainError(f"nested quadrature supports m <= {MAX_QUADRATURE_ORDER}, got {m}")
    k = singularity_power(exponent)
    tol_inner = tol * 1e-1

    def chain(j, tau):
        # int over the last j gaps of the simplex truncated at tau
        if j == 0:
            return 1.0
        if tau <= 0:
            return 0.0
        return _split_singular(
            lambda s: _density(exponent, s, 0.0, tol_inner) * chain(j - 1, tau - s),
            tau, k, tol_inner)

    outer = _split_singular(
        lambda s: _density(exponent, s, dx, tol_inner) * chain(m - 1, t - s), t, k, tol)
    return math.factorial(m) * outer


def local_time_moment(query, method="auto", tol=DEFAULT_TOL):
    """``E^z (L_t^x)^m``.

    ``method="auto"`` uses :func:`dirichlet_moment` when ``x == z`` and the
    exponent is a power law, and nested quadrature otherwise.
    """
    e = query.exponent
    if e.tail[2] <= 1.0:
        raise DomainError("no local times for tail exponent <= 1")
    if method not in ("auto", "dirichlet", "quadrature"):
        raise ValueError(f"unknown method {method!r}")
    closed_ok = query.x == query.z and e.power_law is not None
    if method == "dirichlet" and not closed_ok:
        raise DomainError("the Dirichlet reduction needs x == z and a power-law exponent")
    if method == "dirichlet" or (method == "auto" and closed_ok):
        return dirichlet_moment(e, query.m, query.t)
    return simplex_moment_quadrature(e, query.m, query.t, query.x - query.z, tol)


def occupation_gap(exponent, tau, d, tol=DEFAULT_TOL):
    """``int_0^tau (p_s(0) - p_s(d)) ds``, integrated over ``s`` in closed form
    inside the spectral representation:
    ``(2/pi) int sin^2(lambda d/2) (1 - exp(-tau psi)) / psi d lambda``."""
    if tau <= 0 or d == 0:
        return 0.0
    psi = exponent.scalar

    def g(lam):
        p = psi(lam)
        return -math.expm1(-tau * p) / p if p > 0 else tau

    def tail(lam0):
        return (exponent.tail_inverse_integral(lam0)
                - _log_tail(lambda l: math.exp(-tau * psi(l)) / psi(l), lam0, tol))

    return 2.0 / math.pi * _sin2_integral(exponent, g, abs(d), tol, tail)


def local_time_diff_second_moment(exponent, t, x, y, tol=DEFAULT_TOL, method="spectral"):
    """``E^0 (L_t^x - L_t^y)^2``.

    ``2 int_0^t (p_s(x) + p_s(y)) W(t - s) ds`` with ``W`` from
    :func:`occupation_gap` (``method="spectral"``) or from a second time
    quadrature over transition densities (``method="time"``, much slower).
    """
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}")
    if method not in ("spectral", "time"):
        raise ValueError(f"unknown method {method!r}")
    if x == y:
        return 0.0
    d = abs(x - y)
    k = singularity_power(exponent)
    tol_inner = tol * 1e-1

    if method == "spectral":
        def gap(tau):
            return occupation_gap(exponent, tau, d, tol_inner)
    else:
        def gap(tau):
            return _split_singular(
                lambda s: (_density(exponent, s, 0.0, tol_inner)
                           - _density(exponent, s, d, tol_inner)),
                tau, k, tol_inner)

    def outer(s):
        start = _density(exponent, s, x, tol_inner) + _density(exponent, s, y, tol_inner)
        return start * gap(t - s)

    return max(2.0 * _split_singular(outer, t, k, tol), 0.0)


def brownian_theorem_constant(p):
    """``2^{3p/2} Gamma((p+1)/2) / sqrt(pi)``: Brownian local-time limit normalised by ``h^{1/2}``."""
    if p < 1:
        raise DomainError(f"p must be >= 1, got {p}")
    return 2.0 ** (1.5 * p) * gamma_fn((p + 1.0) / 2.0) / math.sqrt(math.pi)


# --------------------------------------------------------------------------
# golden fixtures
# --------------------------------------------------------------------------

def load_fixtures(path=GOLDEN_PATH):
    with open(path) as fh:
        data = json.load(fh)
    if data.get("version") != FIXTURES_VERSION:
        raise ValueError(f"{path}: fixtures version {data.get('version')} != {FIXTURES_VERSION}")
    return data["values"]


def save_fixtures(values, path=GOLDEN_PATH):
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump({"version": FIXTURES_VERSION, "values": values}, fh, indent=2, sort_keys=True)
        fh.write("\n")


def fixture_entry(value, tol, produced_by):
    return {"value": value, "tol": tol, "producedBy": produced_by}
