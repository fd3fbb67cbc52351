import pytest
from mpmath import mp

from logortho.moments import (
    legendre_P,
    modified_moments_closed_form,
    modified_moments_quadrature,
)
from logortho.quadrature import integrate_de
from logortho.weights import legendre_weight, log_weight


class TestClosedForm:
    def test_k1_mass(self):
        m = modified_moments_closed_form(log_weight(1, exploratory=True), 2)
        assert m[0] == 2

    @pytest.mark.parametrize("k", ["1.5", "e", "10"])
    def test_low_moments(self, k):
        with mp.workprec(512):
            m = modified_moments_closed_form(log_weight(k), 2)
            assert m[1] == 1
            assert abs(m[2] - mp.mpf(1) / 3) < mp.mpf(2) ** -500

    def test_length_and_metadata(self):
        m = modified_moments_closed_form(log_weight("e"), 7, 256)
        assert len(m) == 14 and m.N == 7 and m.precision_bits == 256

    def test_mass_positive_and_decay(self):
        m = modified_moments_closed_form(log_weight("1.5"), 50)
        assert m[0] > 0
        assert abs(m[99]) < abs(m[10]) < abs(m[1])

    def test_k_enters_only_the_mass(self):
        ms = [modified_moments_closed_form(log_weight(k), 10) for k in ("1.5", "e", "10")]
        assert ms[0].m[1:] == ms[1].m[1:] == ms[2].m[1:]

    def test_legendre(self):
        m = modified_moments_closed_form(legendre_weight(), 4)
        assert m[0] == 2 and all(x == 0 for x in m.m[1:])

    def test_bad_n(self):
        with pytest.raises(ValueError):
            modified_moments_closed_form(log_weight(2), 0)


class TestQuadratureOracle:
    """Independent integrate_de runs confirm the closed forms."""

    def test_m1_by_parts(self):
        with mp.workprec(256):
            w = log_weight("2")
            r = integrate_de(lambda x: x * mp.log(2 * w.k_value() / (1 - x)), -1, 1, 256)
            assert abs(r.value - 1) < mp.mpf(10) ** -60

    def test_k_e_mass(self):
        m = modified_moments_quadrature(log_weight("e"), 1, 256)
        assert abs(m[0] - 4) < mp.mpf(10) ** -30

    def test_k2_j5(self):
        m = modified_moments_quadrature(log_weight("2"), 3, 256)
        with mp.workprec(256):
            assert abs(m[5] - mp.mpf(1) / 15) < mp.mpf(10) ** -30

    def test_legendre_orthogonality(self):
        m = modified_moments_quadrature(legendre_weight(), 3, 256)
        assert abs(m[0] - 2) < mp.mpf(10) ** -60
        assert all(abs(x) < mp.mpf(10) ** -60 for x in m.m[1:])

    @pytest.mark.parametrize("k", ["1.5", "e", "10"])
    def test_agrees_with_closed_form(self, k):
        bits = 256
        q = modified_moments_quadrature(log_weight(k), 8, bits)
        c = modified_moments_closed_form(log_weight(k), 8, bits)
        with mp.workprec(bits):
            tol = mp.mpf(10) ** -int(0.25 * bits)
            assert max(abs(a - b) for a, b in zip(q.m, c.m)) < tol

    def test_legendre_P(self):
        x = mp.mpf("0.3")
        assert abs(legendre_P(2, x) - (3 * x * x - 1) / 2) < 1e-15
        assert legendre_P(0, x) == 1
