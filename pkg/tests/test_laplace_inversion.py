import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate
from scipy.special import erfcx

from viscowave.errors import InputError, InversionError
from viscowave.laplace_inversion import (
    TransformFunction,
    invert_auto,
    invert_branchcut,
    invert_residues,
    invert_talbot,
)


def sqrt_cut(r):
    # principal sqrt on the lower bank p = r e^{-i pi}
    return -1j * np.sqrt(r)


def newton_plus_sqrt(N=1.0, alpha=0.5):
    """F(p) = 1/(N p + p^alpha) with its lower-bank values."""
    return TransformFunction(
        func=lambda p: 1.0 / (N * p + np.asarray(p, dtype=complex) ** alpha),
        kind="branch_cut",
        cut_value=lambda r: 1.0 / (-N * r + r**alpha * np.exp(-1j * math.pi * alpha)),
    )


def pu_oracle(t, N=1.0, alpha=0.5):
    """Direct quadrature of the real cut integrand for 1/(N p + p^alpha)."""
    s, c = math.sin(alpha * math.pi), math.cos(alpha * math.pi)

    def f(r):
        return math.exp(-r * t) * r**alpha / ((-N * r + r**alpha * c) ** 2 + r ** (2 * alpha) * s**2)

    val = integrate.quad(f, 0, 1, epsabs=0, epsrel=1e-13, limit=200)[0]
    val += integrate.quad(f, 1, np.inf, epsabs=0, epsrel=1e-13, limit=200)[0]
    return s / math.pi * val


class TestTransformFunction:
    def test_rejects_right_half_plane_pole(self):
        with pytest.raises(InputError):
            TransformFunction(lambda p: 1 / (p - 1), "meromorphic", poles=(1.0,))

    def test_rejects_non_real_original(self):
        with pytest.raises(InputError, match="conjugate"):
            TransformFunction(lambda p: 1j / (p + 1), "meromorphic", poles=(-1.0,))

    def test_unknown_kind(self):
        with pytest.raises(InputError):
            TransformFunction(lambda p: 1 / p, "entire")

    def test_from_rational_poles(self):
        F = TransformFunction.from_rational([1.0], [1.0, 3.0, 2.0])
        assert sorted(z.real for z in F.poles) == pytest.approx([-2.0, -1.0])
        assert F.pole_count == 2


class TestTalbot:
    def test_exponential(self):
        F = TransformFunction.from_rational([1.0], [1.0, 1.0])
        assert invert_talbot(F, 1.0) == pytest.approx(math.exp(-1), rel=1e-10)

    def test_ramp(self):
        assert invert_talbot(lambda p: 1 / p**2, 2.5) == pytest.approx(2.5, rel=1e-10)

    def test_vectorised(self):
        t = np.array([0.1, 1.0, 10.0])
        assert np.allclose(invert_talbot(lambda p: 1 / (p + 1), t), np.exp(-t), rtol=1e-10)

    @pytest.mark.parametrize("M", [15, 14, 130])
    def test_node_count_validated(self, M):
        with pytest.raises(InputError):
            invert_talbot(lambda p: 1 / p, 1.0, M)

    def test_non_positive_time(self):
        with pytest.raises(InputError):
            invert_talbot(lambda p: 1 / p, 0.0)

    def test_non_finite_names_node(self):
        with pytest.raises(InversionError, match="node"):
            invert_talbot(lambda p: np.full(np.shape(p), np.nan + 0j), 1.0)

    def test_matches_branchcut(self):
        F = newton_plus_sqrt()
        for t in (0.01, 0.3, 1.0, 5.0, 10.0):
            a = invert_talbot(F, t)
            b = invert_branchcut(F, t)
            assert a == pytest.approx(b, rel=1e-7)


class TestBranchCut:
    def test_inverse_sqrt(self):
        F = TransformFunction(lambda p: np.asarray(p, dtype=complex) ** -0.5, "branch_cut", cut_value=lambda r: 1 / sqrt_cut(r))
        assert invert_branchcut(F, 1.0) == pytest.approx(1 / math.sqrt(math.pi), rel=1e-9)

    @pytest.mark.parametrize("t", [0.01, 0.1, 1.0, 10.0])
    def test_matches_direct_cut_quadrature(self, t):
        assert invert_branchcut(newton_plus_sqrt(), t) == pytest.approx(pu_oracle(t), rel=1e-9)

    def test_frozen_value(self):
        # 30-digit quadrature of the cut integrand, equal to e erfc(1)
        assert invert_branchcut(newton_plus_sqrt(), 1.0) == pytest.approx(0.427583576155807, rel=1e-9)

    def test_small_time_tends_to_inverse_viscosity(self):
        for N in (0.5, 1.0, 2.0):
            assert invert_branchcut(newton_plus_sqrt(N), 1e-8) == pytest.approx(1 / N, rel=1e-3)

    def test_missing_cut_values(self):
        F = TransformFunction(lambda p: 1 / np.sqrt(p), "branch_cut")
        with pytest.raises(InversionError, match="branch cut"):
            invert_branchcut(F, 1.0)

    def test_origin_residue_detected(self):
        # 1/p has a pole at the origin that the cut integral cannot see
        F = TransformFunction(lambda p: 1 / p, "branch_cut", cut_value=lambda r: -1 / r + 0j)
        with pytest.raises(InversionError, match="o\\(1/p\\)"):
            invert_branchcut(F, 1.0)

    def test_pole_on_cut_detected(self):
        F = TransformFunction(
            lambda p: 1 / (np.sqrt(np.asarray(p, dtype=complex)) * (p + 2)),
            "branch_cut",
            cut_value=lambda r: 1 / (sqrt_cut(r) * (2 - r)),
        )
        with pytest.raises(InversionError):
            invert_branchcut(F, 1.0)


class TestResidues:
    def test_double_pole(self):
        F = TransformFunction.from_rational([1.0], [1.0, 2.0, 1.0])
        t = np.array([0.5, 1.0, 4.0])
        assert np.allclose(invert_residues(F, t), t * np.exp(-t), rtol=1e-12)

    def test_complex_pair(self):
        F = TransformFunction.from_rational([1.0, 0.0], [1.0, 0.0, 4.0])
        assert invert_residues(F, 1.3) == pytest.approx(math.cos(2.6), rel=1e-12)

    def test_improper_rejected(self):
        with pytest.raises(InversionError, match="proper"):
            invert_residues(TransformFunction.from_rational([1.0, 0.0], [1.0, 1.0]), 1.0)


class TestAuto:
    def test_two_pole_rational_uses_residues(self):
        N = 1.0
        # 1/Q for Q = N p + p/(p + 1), i.e. (p + 1)/(p (N p + N + 1))
        F = TransformFunction.from_rational([1.0, 1.0], np.polymul([1.0, 0.0], [N, N + 1.0]))
        val, method = invert_auto(F, 1.0)
        P = (N + 1) / N
        assert method == "residue"
        assert val == pytest.approx(1 / (N + 1) + math.exp(-P) / (N * (N + 1)), rel=1e-12)

    def test_simple_pole_path(self):
        F = TransformFunction.from_rational([1.0], [1.0, 1.0])
        val, method = invert_auto(F, 2.0)
        assert method == "residue"
        assert val == pytest.approx(math.exp(-2), rel=1e-12)

    def test_many_poles_fall_back_to_talbot(self):
        den = np.poly([-1.0, -2.0, -3.0, -4.0, -5.0])
        F = TransformFunction.from_rational([1.0], den)
        val, method = invert_auto(F, 1.0)
        ref = sum(math.exp(-a) / np.prod([b - a for b in (1, 2, 3, 4, 5) if b != a]) for a in (1, 2, 3, 4, 5))
        assert method == "talbot"
        assert val == pytest.approx(ref, rel=1e-8)

    def test_branch_cut_path(self):
        F = TransformFunction(
            lambda p: 1 / (np.sqrt(np.asarray(p, dtype=complex)) * (np.sqrt(np.asarray(p, dtype=complex)) + 1)),
            "branch_cut",
            cut_value=lambda r: 1 / (sqrt_cut(r) * (sqrt_cut(r) + 1)),
        )
        for t in (0.01, 1.0, 10.0):
            val, method = invert_auto(F, t)
            assert method == "branchcut"
            assert val == pytest.approx(erfcx(math.sqrt(t)), rel=1e-7)

    def test_branch_cut_without_cut_values_uses_talbot(self):
        F = TransformFunction(lambda p: np.asarray(p, dtype=complex) ** -0.5, "branch_cut")
        val, method = invert_auto(F, 1.0)
        assert method == "talbot"
        assert val == pytest.approx(1 / math.sqrt(math.pi), rel=1e-8)


@settings(max_examples=25, deadline=None)
@given(a=st.floats(-3, 3), b=st.floats(-3, 3), t=st.floats(0.01, 10))
def test_linearity(a, b, t):
    f = lambda p: 1 / (p + 1)
    g = lambda p: 1 / (p + 0.5) ** 2
    lhs = invert_talbot(lambda p: a * f(p) + b * g(p), t)
    rhs = a * invert_talbot(f, t) + b * invert_talbot(g, t)
    assert abs(lhs - rhs) <= 1e-9 * max(abs(a * invert_talbot(f, t)) + abs(b * invert_talbot(g, t)), 1e-300)


@settings(max_examples=20, deadline=None)
@given(N=st.floats(0.2, 5), alpha=st.floats(0.2, 0.8), t=st.floats(0.01, 10))
def test_methods_agree_on_fractional_transforms(N, alpha, t):
    F = newton_plus_sqrt(N, alpha)
    assert invert_talbot(F, t) == pytest.approx(invert_branchcut(F, t), rel=1e-7)
