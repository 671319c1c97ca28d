import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from levy_moduli.errors import AlignmentError, DomainError
from levy_moduli.levy import (
    LocalTimeField,
    binning_factor,
    centered_modulus,
    default_bin_width,
    estimate_local_time,
    lp_modulus_local_time,
    quadratic_variation_sum,
    rhs_local_time,
    sigma0_structure,
    simulate_levy_path,
    simulate_stable_path,
    smallest_resolvable,
    standard_symmetric_stable,
)
from levy_moduli.spectral import CharacteristicExponent as CE, sigma0_sq

BH = CE.brownian_half()


def test_path_shape_and_domain():
    p = simulate_stable_path(1.5, 1.0, 64, seed=0)
    assert p.values.size == 65 and p.values[0] == 0.0
    assert p.times[-1] == pytest.approx(1.0)
    with pytest.raises(DomainError):
        simulate_stable_path(1.0, 1.0, 64, 0)
    with pytest.raises(DomainError):
        simulate_levy_path(CE.tabulated([1.0, 2.0], [1.0, 4.0], 2.0), 1.0, 4, 0)


def test_stable_increment_variance_beta2():
    n = 2 ** 16
    x = np.diff(simulate_stable_path(2.0, 1.0, n, seed=1).values)
    se = (2.0 / n) * math.sqrt(2.0 / n)
    assert abs(np.mean(x ** 2) - 2.0 / n) <= 3 * se


def test_stable_characteristic_function():
    rng = np.random.default_rng(2)
    x = standard_symmetric_stable(1.5, 100_000, rng)
    c = np.cos(x)
    assert abs(c.mean() - math.exp(-1)) <= 3 * c.std() / math.sqrt(c.size)


def test_path_determinism_and_csv(tmp_path):
    a = simulate_stable_path(1.5, 1.0, 128, seed=5)
    b = simulate_stable_path(1.5, 1.0, 128, seed=5)
    assert np.array_equal(a.values, b.values)
    a.to_csv(tmp_path / "p.csv")
    rows = (tmp_path / "p.csv").read_text().splitlines()
    assert rows[0] == "t,x" and len(rows) == 130


@given(seed=st.integers(0, 10 ** 6), n=st.integers(1, 5000), beta=st.floats(1.1, 2.0))
def test_occupation_identity_property(seed, n, beta):
    path = simulate_stable_path(beta, 1.0, n, seed)
    f = estimate_local_time(path)
    assert np.all(f.values >= 0)
    assert abs(f.mass - 1.0) <= 1e-9


def test_prefix_local_time():
    path = simulate_levy_path(BH, 1.0, 1024, 0)
    f = estimate_local_time(path, t=0.25)
    assert f.mass == pytest.approx(0.25, rel=1e-12)
    with pytest.raises(AlignmentError):
        estimate_local_time(path, t=0.3)
    zero = estimate_local_time(path, t=0.0)
    assert zero.mass == 0.0


def test_resolution_warning():
    path = simulate_levy_path(BH, 1.0, 1024, 0)
    f = estimate_local_time(path, eps=1e-4)
    assert f.resolution_warning and f.notes
    assert not estimate_local_time(path).resolution_warning


def test_default_bin_width():
    assert default_bin_width(BH, 1.0, 2 ** 20) == 2.0 ** -8
    assert default_bin_width(CE.stable(1.5), 1.0, 2 ** 20) == 2.0 ** -11


def field(values, eps=1.0, k0=0, t=None):
    v = np.asarray(values, dtype=float)
    return LocalTimeField(eps, k0, v, eps * v.sum() if t is None else t)


def test_modulus_examples():
    assert lp_modulus_local_time(field([0, 1, 0]), 1.0, 2, 1.0, -1.0, 3.0) == pytest.approx(2.0)
    const = field([1, 1, 1, 1, 1])
    assert lp_modulus_local_time(const, 1.0, 2, 1.0, 0.0, 3.0) == 0.0
    with pytest.raises(AlignmentError):
        lp_modulus_local_time(const, 1.5, 2, 1.0)


def test_rhs_examples():
    assert rhs_local_time(field([0, 0, 0]), 2, 0.0, 3.0) == 0.0
    f = field(np.ones(8), eps=1 / 8)
    assert rhs_local_time(f, 2, 0.0, 1.0) == pytest.approx(2.0)


def test_rhs_full_line_p2_is_2t():
    path = simulate_levy_path(BH, 1.0, 4096, 9)
    f = estimate_local_time(path)
    assert rhs_local_time(f, 2) == pytest.approx(2.0 * f.t, rel=1e-12)


def test_quadratic_variation_examples():
    assert quadratic_variation_sum(field([0, 0, 0]), 1.0) == 0.0
    assert quadratic_variation_sum(field([0, 1, 0]), 1.0) == pytest.approx(2.0)
    assert quadratic_variation_sum(field([0, 1, 0], k0=-5), 1.0) == pytest.approx(2.0)


def test_centered_modulus_zero_field():
    assert centered_modulus(field([0, 0, 0], t=0.0), 1.0, 2, 1.0) == 0.0


def test_sigma0_structure_matches_quadrature():
    for e in (BH, CE.stable(1.5), CE.scaled_stable(2.0, 1.3)):
        s = sigma0_structure(e)
        assert s(0.3) == pytest.approx(sigma0_sq(e, 0.3), rel=1e-8)


def test_binning_factor_brownian():
    s = sigma0_structure(BH)
    # piecewise-linear sigma^2: exact factors 1 - 1/(3k) for k bins per lag
    for k in (1, 2, 4, 8):
        assert binning_factor(s, 1.0, float(k)) == pytest.approx(1 - 1 / (3 * k), rel=1e-9)
    assert smallest_resolvable(s, 1.0, [32.0, 16.0, 8.0, 4.0]) == 2
    with pytest.raises(DomainError):
        binning_factor(s, 1.0, 0.5)


def test_scaling_self_similarity():
    # beta = 2: modulus(t=4)/4 has the law of modulus(t=1) under X_t ~ 2 X_1
    e = CE.stable(2.0)
    s = sigma0_structure(e)
    r, n = 60, 2 ** 14
    eps1 = 2.0 ** -4
    m1, m4 = [], []
    for i in range(r):
        f1 = estimate_local_time(simulate_levy_path(e, 1.0, n, i), eps1)
        f4 = estimate_local_time(simulate_levy_path(e, 4.0, n, 10_000 + i), 2 * eps1)
        m1.append(lp_modulus_local_time(f1, 4 * eps1, 2, s) / f1.t)
        m4.append(lp_modulus_local_time(f4, 8 * eps1, 2, s) / f4.t)
    se = math.hypot(np.std(m1, ddof=1), np.std(m4, ddof=1)) / math.sqrt(r)
    assert abs(np.mean(m1) - np.mean(m4)) <= 3 * se
