"""Relaxation kernels and material models.

A medium is described by a density ``rho``, a Newtonian viscosity
coefficient ``N`` and a locally integrable completely monotone relaxation
function ``G(t)``; the stress is ``N * de/dt + (G * de/dt)(t)``. Four kernel
families are available (Prony series, power law, stretched exponential and
the degenerate zero kernel) plus a composite whose parts add.

Laplace transforms are evaluated on the plane cut along ``(-inf, 0]``. For
``Re p <= 0`` the value returned is the analytic continuation, which the
Talbot inversion relies on.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Union

import numpy as np
from scipy.integrate import quad_vec
from scipy.special import binom, gamma

from ._limits import limit_at_infinity
from .errors import DomainError, InputError, ModelSchemaError

ExtendedReal = float  # finite non-negative value or math.inf

_KWW_RTOL = 1e-12


def _as_complex(p) -> np.ndarray:
    p = np.asarray(p, dtype=complex)
    on_cut = (p.imag == 0) & (p.real <= 0)
    if np.any(on_cut):
        raise DomainError("Laplace variable on the branch cut (-inf, 0] (p = 0 included)")
    return p


def _as_time(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if np.any(~(t > 0)):
        raise DomainError("relaxation function evaluated at t <= 0; use g0_closed_form for G(0)")
    return t


@dataclass(frozen=True)
class PronySeries:
    """``G(t) = sum_i g_i exp(-r_i t)``; a term with ``r_i = 0`` is an elastic plateau."""

    terms: tuple[tuple[float, float], ...]

    def __post_init__(self):
        terms = tuple((float(g), float(r)) for g, r in self.terms)
        if not terms:
            raise ModelSchemaError("PronySeries needs at least one (modulus, rate) term")
        for g, r in terms:
            if not (g >= 0 and math.isfinite(g)):
                raise ModelSchemaError(f"Prony modulus must be finite and >= 0, got {g}")
            if not (r >= 0 and math.isfinite(r)):
                raise ModelSchemaError(f"Prony decay rate must be finite and >= 0, got {r}")
        if sum(g for g, _ in terms) <= 0:
            raise ModelSchemaError("PronySeries has all moduli zero; use ZeroKernel")
        object.__setattr__(self, "terms", terms)

    @property
    def moduli(self) -> np.ndarray:
        return np.array([g for g, _ in self.terms])

    @property
    def rates(self) -> np.ndarray:
        return np.array([r for _, r in self.terms])

    def relaxation(self, t):
        t = _as_time(t)
        return sum(g * np.exp(-r * t) for g, r in self.terms)

    def laplace(self, p):
        p = _as_complex(p)
        return sum(g / (p + r) for g, r in self.terms)

    def g0(self) -> ExtendedReal:
        return float(sum(self.moduli))

    def rational(self) -> tuple[np.ndarray, np.ndarray]:
        """Numerator and denominator coefficients (highest power first) of G~(p)."""
        den = np.poly(-self.rates)
        num = np.zeros(len(self.terms))
        for i, (g, _) in enumerate(self.terms):
            num = num + g * np.poly(-np.delete(self.rates, i))
        return num, den


@dataclass(frozen=True)
class PowerLaw:
    """``G(t) = A t^(-alpha) / Gamma(1 - alpha)`` with transform ``A p^(alpha - 1)``."""

    amplitude: float
    alpha: float

    def __post_init__(self):
        if not (self.amplitude > 0 and math.isfinite(self.amplitude)):
            raise ModelSchemaError(f"power-law amplitude must be > 0, got {self.amplitude}")
        if not (0 < self.alpha < 1):
            raise ModelSchemaError(f"power-law exponent alpha must lie in (0, 1), got {self.alpha}")

    def relaxation(self, t):
        t = _as_time(t)
        return self.amplitude * t ** (-self.alpha) / gamma(1 - self.alpha)

    def laplace(self, p):
        p = _as_complex(p)
        return self.amplitude * p ** (self.alpha - 1)

    def cut_value(self, r):
        """``G~(r e^{-i pi})``, the boundary value just below the negative axis."""
        r = np.asarray(r, dtype=float)
        return self.amplitude * r ** (self.alpha - 1) * np.exp(-1j * np.pi * (self.alpha - 1))

    def g0(self) -> ExtendedReal:
        return math.inf


def _kww_scaled_transform(p: np.ndarray, alpha: float, tau: float, rtol: float) -> np.ndarray:
    """``p * G~(p)`` for ``G = exp(-(t/tau)^alpha)``.

    Rotating the time integral onto the ray ``arg t = -arg p`` and scaling
    gives ``p G~(p) = int_0^inf exp(-v) exp(-(v / (p tau))^alpha) dv``, which
    stays convergent on the whole cut plane. With ``v = u^(1/alpha)`` the
    integrand is smooth at the origin. Values are computed for
    ``Im p >= 0`` and conjugated, so conjugate symmetry is exact.
    """
    shape = p.shape
    flat = p.ravel()
    lower = flat.imag < 0
    q = np.where(lower, np.conj(flat), flat)
    out = np.empty(q.shape, dtype=complex)
    inv_a = 1.0 / alpha
    # group by magnitude so the vector tolerance is meaningful for every entry
    decade = np.floor(np.log10(np.abs(q)))
    for d in np.unique(decade):
        idx = np.nonzero(decade == d)[0]
        c = (q[idx] * tau) ** (-alpha)
        m = idx.size

        def integrand(u, c=c, m=m):
            val = np.exp(-(u**inv_a) - c * u) * u ** (inv_a - 1) * inv_a
            val = np.where(np.isfinite(val), val, 0.0)
            return np.concatenate([val.real, val.imag])

        res, _ = quad_vec(integrand, 0.0, np.inf, epsrel=rtol, epsabs=1e-300, norm="max", limit=4000)
        out[idx] = res[:m] + 1j * res[m:]
    out = np.where(lower, np.conj(out), out)
    return out.reshape(shape)


@dataclass(frozen=True)
class StretchedExponential:
    """KWW kernel ``G(t) = exp(-(t/tau)^alpha)``, ``0 < alpha < 1``."""

    alpha: float
    tau: float = 1.0

    def __post_init__(self):
        if not (0 < self.alpha < 1):
            raise ModelSchemaError(f"stretched-exponential alpha must lie in (0, 1), got {self.alpha}")
        if not (self.tau > 0 and math.isfinite(self.tau)):
            raise ModelSchemaError(f"stretched-exponential tau must be > 0, got {self.tau}")

    def relaxation(self, t):
        t = _as_time(t)
        return np.exp(-((t / self.tau) ** self.alpha))

    def laplace(self, p, rtol: float = _KWW_RTOL):
        p = _as_complex(p)
        return _kww_scaled_transform(p, self.alpha, self.tau, rtol) / p

    def g0(self) -> ExtendedReal:
        return 1.0


@dataclass(frozen=True)
class ZeroKernel:
    """``G = 0``; only meaningful together with ``N > 0``."""

    def relaxation(self, t):
        return np.zeros_like(_as_time(t))

    def laplace(self, p):
        return np.zeros_like(_as_complex(p))

    def cut_value(self, r):
        return np.zeros_like(np.asarray(r, dtype=float), dtype=complex)

    def g0(self) -> ExtendedReal:
        return 0.0


@dataclass(frozen=True)
class CompositeKernel:
    """Sum of kernels; transforms and initial values add."""

    parts: tuple = field(default_factory=tuple)

    def __post_init__(self):
        parts = tuple(self.parts)
        if not parts:
            raise ModelSchemaError("CompositeKernel needs at least one part")
        object.__setattr__(self, "parts", parts)

    def relaxation(self, t):
        return sum(k.relaxation(t) for k in self.parts)

    def laplace(self, p):
        return sum(k.laplace(p) for k in self.parts)

    def cut_value(self, r):
        return sum(k.cut_value(r) for k in self.parts)

    def g0(self) -> ExtendedReal:
        return float(sum(k.g0() for k in self.parts))


RelaxationKernel = Union[PronySeries, PowerLaw, StretchedExponential, ZeroKernel, CompositeKernel]


def has_cut_values(kernel: RelaxationKernel) -> bool:
    """Whether boundary values of G~ on the negative real axis are available in closed form."""
    if isinstance(kernel, CompositeKernel):
        return all(has_cut_values(k) for k in kernel.parts)
    return isinstance(kernel, (PowerLaw, ZeroKernel))


def is_rational(kernel: RelaxationKernel) -> bool:
    if isinstance(kernel, CompositeKernel):
        return all(is_rational(k) for k in kernel.parts)
    return isinstance(kernel, (PronySeries, ZeroKernel))


def leaves(kernel: RelaxationKernel) -> list:
    if isinstance(kernel, CompositeKernel):
        return [leaf for k in kernel.parts for leaf in leaves(k)]
    return [kernel]


@dataclass(frozen=True)
class MaterialModel:
    """Density ``rho``, Newtonian coefficient ``N`` and relaxation kernel."""

    rho: float
    N: float
    kernel: RelaxationKernel

    def __post_init__(self):
        if not (self.rho > 0 and math.isfinite(self.rho)):
            raise ModelSchemaError(f"rho must be > 0 (MaterialModel invariant), got {self.rho}")
        if not (self.N >= 0 and math.isfinite(self.N)):
            raise ModelSchemaError(f"newtonian_N must be >= 0 (MaterialModel invariant), got {self.N}")
        if self.N == 0 and all(isinstance(k, ZeroKernel) for k in leaves(self.kernel)):
            raise ModelSchemaError("N = 0 together with a zero kernel describes no medium")


# --------------------------------------------------------------------------
# operations


def eval_g(kernel: RelaxationKernel, t):
    """Relaxation function ``G(t)`` for ``t > 0``."""
    return kernel.relaxation(t)


def laplace_g(kernel: RelaxationKernel, p):
    """Laplace transform ``G~(p)`` on the cut plane."""
    return kernel.laplace(p)


def q_function(model: MaterialModel, p):
    """``Q(p) = N p + p G~(p)``, the complete Bernstein function of the medium."""
    p = _as_complex(p)
    return model.N * p + p * model.kernel.laplace(p)


def g0_closed_form(kernel: RelaxationKernel) -> ExtendedReal:
    """``G(0+)``, infinite for kernels that are unbounded at the origin."""
    return kernel.g0()


def tauberian_g0(kernel: RelaxationKernel, p_max: float = 1e6) -> ExtendedReal:
    """``G(0+)`` from the limit of ``p G~(p)`` along the real axis.

    Raises ``IndeterminateLimitError`` when the sampled sequence neither
    settles nor grows clearly.
    """
    if not p_max >= 1e3:
        raise InputError(f"p_max must be >= 1e3, got {p_max}")
    return limit_at_infinity(lambda p: (p * kernel.laplace(p)).real, p_max)


@dataclass(frozen=True)
class CMReport:
    passed: bool
    max_order: int
    violations: tuple[tuple[int, float, float], ...]  # (order, t, signed derivative estimate)


def cm_check(
    kernel: RelaxationKernel | Callable[[np.ndarray], np.ndarray],
    max_order: int = 3,
    grid=None,
) -> CMReport:
    """Sampled complete-monotonicity test of a relaxation function.

    For each order ``n <= max_order`` the centred difference with step
    ``h = t/100`` must satisfy ``(-1)^n D^n G(t) >= -tol`` at every interior
    grid point. The slack combines a relative floor of 1e-6 with the
    round-off level of an n-th difference. ``kernel`` may also be a plain
    callable, which is how non-CM functions are fed in by tests.
    """
    if grid is None:
        grid = np.geomspace(0.01, 10.0, 64)
    grid = np.asarray(grid, dtype=float)
    if not 0 <= max_order <= 4:
        raise InputError(f"max_order must be in 0..4, got {max_order}")
    if grid.ndim != 1 or grid.size < 16:
        raise InputError("cm_check needs a 1-D grid with at least 16 points")
    if np.any(grid <= 0) or np.any(np.diff(grid) <= 0):
        raise InputError("cm_check grid must be strictly positive and strictly increasing")

    g = kernel.relaxation if hasattr(kernel, "relaxation") else kernel
    t = grid[1:-1]
    h = t / 100.0
    g_t = np.abs(np.asarray(g(t), dtype=float))
    eps = np.finfo(float).eps
    violations = []
    for n in range(max_order + 1):
        diff = np.zeros_like(t)
        for j in range(n + 1):
            diff += (-1) ** (n - j) * binom(n, j) * np.asarray(g(t + (j - n / 2) * h), dtype=float)
        deriv = (-1) ** n * diff / h**n
        scale = np.maximum(1.0, g_t)
        tol = scale * (1e-6 + 2**n * 64 * eps / h**n)
        for ti, dv in zip(t[deriv < -tol], deriv[deriv < -tol]):
            violations.append((n, float(ti), float(dv)))
    return CMReport(passed=not violations, max_order=max_order, violations=tuple(violations))


# --------------------------------------------------------------------------
# model definition files


def kernel_from_dict(spec: dict[str, Any]) -> RelaxationKernel:
    """Build a kernel from its configuration mapping (see README for the schema)."""
    if not isinstance(spec, dict) or "type" not in spec:
        raise ModelSchemaError("kernel entry must be a mapping with a 'type' field")
    kind = str(spec["type"]).lower()
    try:
        if kind == "prony":
            terms = []
            for term in spec["terms"]:
                if isinstance(term, dict):
                    terms.append((term["modulus"], term["rate"]))
                else:
                    g, r = term
                    terms.append((g, r))
            return PronySeries(tuple(terms))
        if kind == "power_law":
            return PowerLaw(float(spec.get("amplitude", 1.0)), float(spec["alpha"]))
        if kind == "stretched_exponential":
            return StretchedExponential(float(spec["alpha"]), float(spec.get("tau", 1.0)))
        if kind == "zero":
            return ZeroKernel()
        if kind == "composite":
            return CompositeKernel(tuple(kernel_from_dict(k) for k in spec["parts"]))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ModelSchemaError):
            raise
        raise ModelSchemaError(f"invalid parameters for kernel type '{kind}': {exc!r}") from exc
    raise ModelSchemaError(
        f"unknown kernel type '{kind}' (expected prony, power_law, stretched_exponential, zero or composite)"
    )


def kernel_to_dict(kernel: RelaxationKernel) -> dict[str, Any]:
    if isinstance(kernel, PronySeries):
        return {"type": "prony", "terms": [[g, r] for g, r in kernel.terms]}
    if isinstance(kernel, PowerLaw):
        return {"type": "power_law", "amplitude": kernel.amplitude, "alpha": kernel.alpha}
    if isinstance(kernel, StretchedExponential):
        return {"type": "stretched_exponential", "alpha": kernel.alpha, "tau": kernel.tau}
    if isinstance(kernel, ZeroKernel):
        return {"type": "zero"}
    if isinstance(kernel, CompositeKernel):
        return {"type": "composite", "parts": [kernel_to_dict(k) for k in kernel.parts]}
    raise TypeError(f"not a relaxation kernel: {kernel!r}")


def model_from_dict(spec: dict[str, Any]) -> MaterialModel:
    if not isinstance(spec, dict):
        raise ModelSchemaError("model definition must be a mapping")
    missing = [k for k in ("rho", "newtonian_N", "kernel") if k not in spec]
    if missing:
        raise ModelSchemaError(f"model definition lacks required field(s): {', '.join(missing)}")
    try:
        rho = float(spec["rho"])
        n = float(spec["newtonian_N"])
    except (TypeError, ValueError) as exc:
        raise ModelSchemaError(f"rho and newtonian_N must be numbers: {exc}") from exc
    return MaterialModel(rho=rho, N=n, kernel=kernel_from_dict(spec["kernel"]))


def model_to_dict(model: MaterialModel) -> dict[str, Any]:
    return {"rho": model.rho, "newtonian_N": model.N, "kernel": kernel_to_dict(model.kernel)}


def load_model(path: str | Path) -> MaterialModel:
    """Read a model definition from a JSON or YAML file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read model file {path}: {exc}") from exc
    if path.suffix.lower() in (".yaml", ".yml"):
        import yaml

        try:
            data = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            raise ModelSchemaError(f"{path}: invalid YAML: {exc}") from exc
    else:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ModelSchemaError(f"{path}: invalid JSON: {exc}") from exc
    return model_from_dict(data)
