import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate
from scipy.special import gamma

from viscowave.errors import DomainError, IndeterminateLimitError, InputError, ModelSchemaError
from viscowave.kernels import (
    CompositeKernel,
    MaterialModel,
    PowerLaw,
    PronySeries,
    StretchedExponential,
    ZeroKernel,
    cm_check,
    eval_g,
    g0_closed_form,
    laplace_g,
    load_model,
    model_from_dict,
    model_to_dict,
    q_function,
    tauberian_g0,
)

KERNELS = [
    PronySeries(((1.0, 1.0), (2.0, 3.0))),
    PowerLaw(1.0, 0.5),
    PowerLaw(2.0, 0.2),
    StretchedExponential(0.5, 1.0),
    StretchedExponential(0.3, 2.0),
    CompositeKernel((PronySeries(((1.0, 2.0),)), PowerLaw(0.5, 0.4))),
]


class TestEvalG:
    def test_prony_single_exponential(self):
        assert eval_g(PronySeries(((1, 1),)), 1.0) == pytest.approx(math.exp(-1), rel=1e-14)

    def test_power_law_at_one(self):
        assert eval_g(PowerLaw(1, 0.5), 1.0) == pytest.approx(1 / math.sqrt(math.pi), rel=1e-14)

    def test_stretched_exponential(self):
        assert eval_g(StretchedExponential(0.5, 1), 4.0) == pytest.approx(math.exp(-2), rel=1e-14)

    def test_zero_kernel(self):
        assert np.all(eval_g(ZeroKernel(), np.array([0.1, 1.0])) == 0)

    @pytest.mark.parametrize("kernel", KERNELS)
    def test_non_positive_time_rejected(self, kernel):
        with pytest.raises(DomainError):
            eval_g(kernel, 0.0)

    @pytest.mark.parametrize("kernel", KERNELS)
    def test_monotone_non_increasing(self, kernel):
        t = np.geomspace(1e-4, 1e2, 200)
        g = eval_g(kernel, t)
        assert np.all(g >= 0)
        assert np.all(np.diff(g) <= 0)


class TestLaplace:
    def test_prony(self):
        assert laplace_g(PronySeries(((1, 1),)), 1.0) == pytest.approx(0.5, rel=1e-14)

    def test_power_law(self):
        assert laplace_g(PowerLaw(1, 0.5), 4.0) == pytest.approx(0.5, rel=1e-14)

    def test_stretched_exponential_exact_transform(self):
        # 1/p - sqrt(pi)/(2 p^1.5) e^{1/(4p)} erfc(1/(2 sqrt p)) at p = 10, evaluated in 30 digits
        assert laplace_g(StretchedExponential(0.5, 1), 10.0).real == pytest.approx(0.07634976142937026, rel=1e-8)

    @pytest.mark.parametrize("alpha,tau,p", [(0.3, 2.0, 0.5 + 2j), (0.7, 0.5, 3.0), (0.5, 1.0, 1e-2 + 1j)])
    def test_stretched_exponential_against_direct_quadrature(self, alpha, tau, p):
        def part(f):
            return integrate.quad(lambda t: f(np.exp(-p * t - (t / tau) ** alpha)), 0, np.inf, limit=400, epsabs=1e-14)[0]

        ref = part(np.real) + 1j * part(np.imag)
        assert abs(laplace_g(StretchedExponential(alpha, tau), p) - ref) < 1e-8 * abs(ref)

    @pytest.mark.parametrize("kernel", KERNELS)
    @pytest.mark.parametrize("p", [0.0, -1.0])
    def test_branch_cut_rejected(self, kernel, p):
        with pytest.raises(DomainError):
            laplace_g(kernel, p)

    @pytest.mark.parametrize("kernel", KERNELS)
    def test_conjugate_symmetry(self, kernel):
        rng = np.random.default_rng(1)
        p = rng.uniform(0.01, 10, 20) + 1j * rng.uniform(-10, 10, 20)
        a = laplace_g(kernel, p)
        b = laplace_g(kernel, np.conj(p))
        assert np.all(np.abs(b - np.conj(a)) <= 1e-12 * np.abs(a))

    def test_prony_decay(self):
        assert abs(laplace_g(PronySeries(((1, 1), (2, 3))), 1e8)) < 1e-7


class TestQFunction:
    def test_newtonian(self):
        assert q_function(MaterialModel(1, 1, ZeroKernel()), 3.0) == pytest.approx(3.0)

    def test_maxwell(self):
        assert q_function(MaterialModel(1, 0, PronySeries(((1, 1),))), 1.0) == pytest.approx(0.5)

    def test_power_law_with_viscosity(self):
        assert q_function(MaterialModel(1, 1, PowerLaw(1, 0.5)), 4.0) == pytest.approx(6.0, rel=1e-14)

    @pytest.mark.parametrize("kernel", KERNELS)
    def test_real_non_decreasing_on_positive_axis(self, kernel):
        p = np.geomspace(1e-3, 1e6, 60)
        q = q_function(MaterialModel(1.0, 0.3, kernel), p)
        assert np.all(np.abs(q.imag) <= 1e-12 * np.abs(q.real))
        assert np.all(q.real >= 0)
        assert np.all(np.diff(q.real) >= -1e-12 * q.real[1:])


class TestG0:
    def test_prony_sum(self):
        assert g0_closed_form(PronySeries(((2, 1), (3, 5)))) == 5

    def test_power_law_infinite(self):
        assert math.isinf(g0_closed_form(PowerLaw(3.0, 0.2)))

    def test_stretched_exponential(self):
        assert g0_closed_form(StretchedExponential(0.3, 2)) == 1

    def test_zero(self):
        assert g0_closed_form(ZeroKernel()) == 0

    def test_tauberian_prony(self):
        assert tauberian_g0(PronySeries(((1, 1),)), 1e6) == pytest.approx(1, rel=1e-4)

    def test_tauberian_power_law(self):
        assert math.isinf(tauberian_g0(PowerLaw(1, 0.5)))

    def test_tauberian_stretched_exponential(self):
        assert tauberian_g0(StretchedExponential(0.5, 1)) == pytest.approx(1, rel=1e-3)

    @pytest.mark.parametrize("kernel", KERNELS + [ZeroKernel()])
    def test_tauberian_agrees_with_closed_form(self, kernel):
        closed = g0_closed_form(kernel)
        tb = tauberian_g0(kernel)
        assert math.isinf(closed) == math.isinf(tb)
        if math.isfinite(closed):
            assert tb == pytest.approx(closed, rel=1e-3, abs=1e-12)

    def test_small_p_max_rejected(self):
        with pytest.raises(InputError):
            tauberian_g0(PronySeries(((1, 1),)), 10.0)

    def test_oscillating_sequence_is_indeterminate(self):
        class Wobbly:
            def laplace(self, p):
                return (2 + np.sin(np.log(p) * 3)) / p

        with pytest.raises(IndeterminateLimitError):
            tauberian_g0(Wobbly())


class TestCMCheck:
    def test_prony_passes(self):
        assert cm_check(PronySeries(((1, 1), (2, 3))), 3, np.geomspace(0.01, 10, 40)).passed

    def test_stretched_exponential_passes(self):
        assert cm_check(StretchedExponential(0.5, 1), 3).passed

    @pytest.mark.parametrize("kernel", KERNELS)
    def test_library_kernels_pass(self, kernel):
        assert cm_check(kernel, 4).passed

    def test_oscillating_function_fails(self):
        report = cm_check(lambda t: np.exp(-t) * np.cos(5 * t), 2)
        assert not report.passed
        assert {n for n, _, _ in report.violations} <= {0, 1, 2}

    def test_coarse_grid_rejected(self):
        with pytest.raises(InputError):
            cm_check(PowerLaw(1, 0.5), 2, np.geomspace(0.1, 1, 5))

    def test_order_limit(self):
        with pytest.raises(InputError):
            cm_check(PowerLaw(1, 0.5), 5)


class TestSchema:
    @pytest.mark.parametrize(
        "make",
        [
            lambda: PronySeries(()),
            lambda: PronySeries(((-1, 1),)),
            lambda: PronySeries(((1, -1),)),
            lambda: PowerLaw(1, 1.0),
            lambda: PowerLaw(0, 0.5),
            lambda: StretchedExponential(0.0, 1),
            lambda: StretchedExponential(0.5, 0),
            lambda: MaterialModel(0, 1, ZeroKernel()),
            lambda: MaterialModel(1, -1, ZeroKernel()),
            lambda: MaterialModel(1, 0, ZeroKernel()),
        ],
    )
    def test_invalid_parameters(self, make):
        with pytest.raises(ModelSchemaError):
            make()

    def test_dict_round_trip(self):
        m = MaterialModel(2.0, 0.5, CompositeKernel((PronySeries(((1, 2),)), StretchedExponential(0.4, 3.0))))
        assert model_from_dict(model_to_dict(m)) == m

    def test_dict_terms(self):
        m = model_from_dict({"rho": 1, "newtonian_N": 0, "kernel": {"type": "prony", "terms": [{"modulus": 2, "rate": 1}]}})
        assert m.kernel == PronySeries(((2.0, 1.0),))

    def test_unknown_type_names_alternatives(self):
        with pytest.raises(ModelSchemaError, match="power_law"):
            model_from_dict({"rho": 1, "newtonian_N": 0, "kernel": {"type": "gaussian"}})

    def test_missing_field(self):
        with pytest.raises(ModelSchemaError, match="rho"):
            model_from_dict({"newtonian_N": 0, "kernel": {"type": "zero"}})

    def test_load_yaml_and_json(self, tmp_path):
        y = tmp_path / "m.yaml"
        y.write_text("rho: 1\nnewtonian_N: 0\nkernel:\n  type: power_law\n  alpha: 0.4\n")
        j = tmp_path / "m.json"
        j.write_text('{"rho": 1, "newtonian_N": 0, "kernel": {"type": "power_law", "alpha": 0.4}}')
        assert load_model(y) == load_model(j) == MaterialModel(1, 0, PowerLaw(1.0, 0.4))

    def test_out_of_range_message_names_invariant(self, tmp_path):
        f = tmp_path / "m.json"
        f.write_text('{"rho": 1, "newtonian_N": 0, "kernel": {"type": "power_law", "alpha": 1.5}}')
        with pytest.raises(ModelSchemaError, match="alpha"):
            load_model(f)


@settings(max_examples=40, deadline=None)
@given(
    g=st.lists(st.floats(0.01, 10), min_size=1, max_size=4),
    r=st.lists(st.floats(0.0, 100), min_size=4, max_size=4),
    p1=st.floats(1e-3, 1e3),
    ratio=st.floats(1.0, 1e3),
)
def test_q_monotone_for_random_prony(g, r, p1, ratio):
    k = PronySeries(tuple(zip(g, r)))
    q1, q2 = q_function(MaterialModel(1, 0, k), np.array([p1, p1 * ratio])).real
    assert 0 <= q1 <= q2 * (1 + 1e-12)


@settings(max_examples=40, deadline=None)
@given(alpha=st.floats(0.05, 0.95), amp=st.floats(0.1, 10), t=st.floats(1e-3, 1e3))
def test_power_law_closed_form(alpha, amp, t):
    assert eval_g(PowerLaw(amp, alpha), t) == pytest.approx(amp * t**-alpha / gamma(1 - alpha), rel=1e-12)
