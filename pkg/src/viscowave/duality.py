"""Creep compliance from a material model, and back.

The creep compliance ``C`` and the pair ``(N, G)`` are linked by

    N C(t) + (G * C)(t) = t,        i.e.  p C~(p) = 1 / Q(p).

Two independent routes compute ``C`` from a model: inversion of the
transform ``1/(p Q(p))`` and direct time stepping of the convolution
equation. Their agreement, together with the residual of the relation
above, is the main internal consistency check of the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.integrate import quad, quad_vec
from scipy.interpolate import PchipInterpolator
from scipy.signal import fftconvolve
from scipy.special import gamma

from ._limits import limit_at_infinity
from .errors import IllConditionedError, InputError, InvariantError, InversionError, NumericalError
from .kernels import (
    CompositeKernel,
    MaterialModel,
    PowerLaw,
    PronySeries,
    StretchedExponential,
    ZeroKernel,
    has_cut_values,
    is_rational,
    leaves,
    q_function,
)
from .laplace_inversion import (
    DEFAULT_TALBOT_NODES,
    TransformFunction,
    invert_branchcut,
    invert_residues,
    invert_talbot,
)

JUMP = "jump compliance"
INFINITE_SLOPE = "infinite initial slope"
NEWTONIAN = "Newtonian present"

_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)


# --------------------------------------------------------------------------
# creep curves


@dataclass(frozen=True, eq=False)
class CreepCurve:
    """Sampled creep compliance and its rate.

    Attributes
    ----------
    t_grid : ndarray
        Strictly increasing positive times.
    C, C_rate : ndarray
        Compliance ``C(t)`` and derivative ``C'(t)`` on ``t_grid``.
    c0 : float
        ``C(0+) >= 0``.
    c_rate0 : float
        ``C'(0+)``, possibly ``math.inf``.
    method : str
        Provenance tag of the solver that produced the values.
    """

    t_grid: np.ndarray
    C: np.ndarray
    C_rate: np.ndarray
    c0: float
    c_rate0: float
    method: str = ""

    def __post_init__(self):
        t = np.asarray(self.t_grid, dtype=float)
        c = np.asarray(self.C, dtype=float)
        cr = np.asarray(self.C_rate, dtype=float)
        if t.ndim != 1 or t.size < 2 or c.shape != t.shape or cr.shape != t.shape:
            raise InputError("t_grid, C and C_rate must be 1-D arrays of equal length >= 2")
        if np.any(t <= 0) or np.any(np.diff(t) <= 0):
            raise InputError("creep curve times must be positive and strictly increasing")
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(cr))):
            raise InputError("creep curve contains non-finite values")
        if not self.c0 >= 0 or not self.c_rate0 >= 0:
            raise InputError(f"C(0) and C'(0) must be >= 0, got {self.c0}, {self.c_rate0}")
        for name, arr in (("t_grid", t), ("C", c), ("C_rate", cr)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "c0", float(self.c0))
        object.__setattr__(self, "c_rate0", float(self.c_rate0))

    def violations(self, rtol: float = 1e-6) -> list[str]:
        """Bernstein-shape checks: C >= 0 increasing and concave, C' >= 0 decreasing."""
        t, c, cr = self.t_grid, self.C, self.C_rate
        out = []
        c_scale = max(np.max(np.abs(c)), self.c0, 1e-300)
        r_scale = max(np.max(np.abs(cr)), 1e-300)
        if np.min(c) < -rtol * c_scale:
            out.append("C is negative")
        if np.min(np.diff(c)) < -rtol * c_scale:
            out.append("C is not non-decreasing")
        if np.min(cr) < -rtol * r_scale:
            out.append("C_rate is negative")
        if np.max(np.diff(cr)) > rtol * r_scale:
            out.append("C_rate is not non-increasing")
        slopes = np.diff(c) / np.diff(t)
        if slopes.size > 1 and np.max(np.diff(slopes)) > rtol * max(np.max(np.abs(slopes)), 1e-300):
            out.append("C is not concave")
        return out

    def validate(self, rtol: float = 1e-6) -> "CreepCurve":
        bad = self.violations(rtol)
        if bad:
            raise InvariantError("creep curve violates " + "; ".join(bad))
        return self

    @classmethod
    def from_samples(cls, t, C, C_rate=None, *, tol_c0: float = 1e-6) -> "CreepCurve":
        """Build a curve from raw samples, estimating ``C(0)`` and ``C'(0)``.

        ``C_rate`` defaults to second-order finite differences of ``C``.
        """
        t = np.asarray(t, dtype=float)
        C = np.asarray(C, dtype=float)
        if C_rate is None:
            C_rate = np.gradient(C, t, edge_order=2)
        c0 = _estimate_c0(t, C, tol_c0)
        slope, _ = _initial_slope(t, C, c0)
        return cls(t, C, np.asarray(C_rate, dtype=float), c0, slope, "samples")

    def to_csv(self, path: str | Path, header_lines: list[str] | None = None) -> None:
        from .io_utils import atomic_write, format_table

        head = list(header_lines or [])
        head.append(f"c0={self.c0!r} c_rate0={self.c_rate0!r} method={self.method}")
        text = format_table(["t", "C", "C_rate"], [self.t_grid, self.C, self.C_rate], head)
        atomic_write(path, text)

    @classmethod
    def from_csv(cls, path: str | Path, *, validate: bool = True, tol_c0: float = 1e-6) -> "CreepCurve":
        """Read a ``t,C,C_rate`` CSV. Limits in a ``# c0=... c_rate0=...`` comment are honoured."""
        path = Path(path)
        try:
            lines = path.read_text().splitlines()
        except OSError as exc:
            raise InputError(f"cannot read creep file {path}: {exc}") from exc
        meta = {}
        body = []
        for line in lines:
            s = line.strip()
            if not s:
                continue
            if s.startswith("#"):
                for tok in s[1:].split():
                    if "=" in tok:
                        k, v = tok.split("=", 1)
                        meta[k] = v
                continue
            body.append(s)
        if not body or [h.strip() for h in body[0].split(",")] != ["t", "C", "C_rate"]:
            raise InputError(f"{path}: expected header 't,C,C_rate'")
        try:
            data = np.array([[float(v) for v in row.split(",")] for row in body[1:]])
        except ValueError as exc:
            raise InputError(f"{path}: non-numeric entry: {exc}") from exc
        if data.ndim != 2 or data.shape[1] != 3 or data.shape[0] < 2:
            raise InputError(f"{path}: need at least two rows of three columns")
        t, c, cr = data.T
        if "c0" in meta and "c_rate0" in meta:
            curve = cls(t, c, cr, float(meta["c0"]), float(meta["c_rate0"]), meta.get("method", "csv"))
        else:
            curve = cls.from_samples(t, c, cr, tol_c0=tol_c0)
        return curve.validate() if validate else curve


# --------------------------------------------------------------------------
# limits


def limits_c0_cprime0(model: MaterialModel, *, rtol: float = 1e-4) -> tuple[float, float]:
    """``C(0) = lim 1/Q(p)`` and ``C'(0) = lim p (1/Q(p) - C(0))`` along real ``p``."""
    inv_q = lambda p: (1.0 / q_function(model, p)).real  # noqa: E731
    c0 = limit_at_infinity(inv_q, 1e12, rtol=rtol)
    if c0 < 0:
        raise NumericalError(f"extrapolated C(0) = {c0:g} is negative")
    # subtracting a non-zero c0 cancels digits, so stop earlier on the axis
    p_max = 1e12 if c0 == 0 else 1e8
    rate0 = limit_at_infinity(lambda p: p * (inv_q(p) - c0), p_max, rtol=rtol)
    return c0, rate0


# --------------------------------------------------------------------------
# transform path


def _prony_pairs(kernel) -> list[tuple[float, float]]:
    merged: dict[float, float] = {}
    for leaf in leaves(kernel):
        if isinstance(leaf, PronySeries):
            for g, r in leaf.terms:
                if g > 0:
                    merged[r] = merged.get(r, 0.0) + g
    return sorted(merged.items(), key=lambda kv: kv[0])


def _rational_q(model: MaterialModel) -> tuple[np.ndarray, np.ndarray]:
    """``Q(p) = a(p) / b(p)`` for rational kernels (Prony and zero parts)."""
    pairs = _prony_pairs(model.kernel)
    rates = np.array([r for r, _ in pairs])
    den = np.poly(-rates) if pairs else np.array([1.0])
    num = np.zeros(1)
    for i, (_, g) in enumerate(pairs):
        num = np.polyadd(num, g * np.poly(-np.delete(rates, i)))
    # Q = N p + p num / den
    a = np.polyadd(model.N * np.polymul([1.0, 0.0], den), np.polymul([1.0, 0.0], num))
    a = np.trim_zeros(a, "f")
    b = den
    # cancel the factor p contributed by an elastic plateau (rate 0)
    while a.size > 1 and b.size > 1 and a[-1] == 0 and b[-1] == 0:
        a, b = a[:-1], b[:-1]
    return a, b


def _rational_transforms(model: MaterialModel):
    """Strictly proper rational transforms of C and C', and the exact C(0)."""
    a, b = _rational_q(model)
    # C~ = 1 / (p Q) = b / (p a)
    c_num, c_den = b, np.polymul([1.0, 0.0], a)
    # p C~ = b / a = c0 + rem / a
    quot, rem = np.polydiv(b, a)
    c0 = float(quot[-1]) if quot.size and len(b) >= len(a) else 0.0
    rate = TransformFunction.from_rational(np.trim_zeros(rem, "f") if np.any(rem) else [0.0], a)
    return TransformFunction.from_rational(c_num, c_den), rate, c0


def _tagged(fn, t, label):
    try:
        return fn(t)
    except InversionError as exc:
        raise InversionError(f"{label}: {exc}") from exc


def creep_from_model(
    model: MaterialModel,
    t_grid,
    *,
    quad_tol: float = 1e-9,
    talbot_nodes: int = DEFAULT_TALBOT_NODES,
    validate: bool = True,
) -> CreepCurve:
    """Creep curve by inverting ``C~ = 1/(p Q)`` and ``(C')~ = 1/Q - C(0)``.

    Rational models with at most four poles use exact residues. Power-law
    models invert the rate along the branch cut and ``C`` itself with Talbot,
    since ``C~`` is not ``o(1/p)`` at the origin. Everything else uses Talbot.
    ``C(0)`` and ``C'(0)`` come from :func:`limits_c0_cprime0`.
    """
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or np.any(t <= 0) or np.any(np.diff(t) <= 0):
        raise InputError("t_grid must be a 1-D strictly increasing array of positive times")
    c0, rate0 = limits_c0_cprime0(model)
    if is_rational(model.kernel):
        c_tf, rate_tf, c0_exact = _rational_transforms(model)
        c0 = c0_exact
        if c_tf.pole_count <= 4:
            C = _tagged(lambda s: invert_residues(c_tf, s), t, "C(t)")
            rate = _tagged(lambda s: invert_residues(rate_tf, s), t, "C'(t)")
            method = "residue"
        else:
            C = _tagged(lambda s: invert_talbot(c_tf, s, talbot_nodes), t, "C(t)")
            rate = _tagged(lambda s: invert_talbot(rate_tf, s, talbot_nodes), t, "C'(t)")
            method = "talbot"
    else:
        q = lambda p: q_function(model, p)  # noqa: E731
        c_tf = TransformFunction(lambda p: 1.0 / (p * q(p)), "branch_cut")
        C = _tagged(lambda s: invert_talbot(c_tf, s, talbot_nodes), t, "C(t)")
        if has_cut_values(model.kernel):
            kern = model.kernel

            def rate_cut(r):
                p = -np.asarray(r, dtype=float)
                return 1.0 / (model.N * p + p * kern.cut_value(r)) - c0

            rate_tf = TransformFunction(lambda p: 1.0 / q(p) - c0, "branch_cut", cut_value=rate_cut)
            rate = _tagged(lambda s: invert_branchcut(rate_tf, s, quad_tol), t, "C'(t)")
            method = "talbot+branchcut"
        else:
            rate_tf = TransformFunction(lambda p: 1.0 / q(p) - c0, "branch_cut", check_symmetry=False)
            rate = _tagged(lambda s: invert_talbot(rate_tf, s, talbot_nodes), t, "C'(t)")
            method = "talbot"
    curve = CreepCurve(t, C, rate, c0, rate0, method)
    return curve.validate() if validate else curve


# --------------------------------------------------------------------------
# time-domain path


def _cell0_moments(leaf, h: float) -> tuple[float, float, float]:
    """``int_0^h G(u) (u/h)^j du`` for j = 0, 1, 2 and one leaf kernel."""
    if isinstance(leaf, ZeroKernel):
        return 0.0, 0.0, 0.0
    if isinstance(leaf, PowerLaw):
        a, A = leaf.alpha, leaf.amplitude
        base = A * h ** (1 - a) / gamma(1 - a)
        return base / (1 - a), base / (2 - a), base / (3 - a)
    if isinstance(leaf, PronySeries):
        m = np.zeros(3)
        for g, r in leaf.terms:
            x = r * h
            if x < 1e-3:
                phi = (1 - x / 2 + x * x / 6 - x**3 / 24, 0.5 - x / 3 + x * x / 8 - x**3 / 30, 1 / 3 - x / 4 + x * x / 10 - x**3 / 36)
            else:
                e = math.exp(-x)
                phi = (-math.expm1(-x) / x, (1 - e * (1 + x)) / x**2, (2 - e * (x * x + 2 * x + 2)) / x**3)
            m += g * h * np.array(phi)
        return tuple(m)
    g = leaf.relaxation
    return tuple(
        quad(lambda s, j=j: g(s) * (s / h) ** j, 0.0, h, epsabs=0.0, epsrel=1e-13, limit=200)[0] for j in range(3)
    )


def cell_moments(kernel, h: float, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Moments ``Mj_m = int G(u) ((u - mh)/h)^j du`` over cells ``[mh, (m+1)h]``, j = 0, 1, 2.

    The first cell holds the kernel singularity and is integrated exactly
    (or by adaptive quadrature); later cells use 16-point Gauss-Legendre.
    """
    M = np.zeros((3, n + 1))
    v = (_GL_X + 1) / 2
    w = _GL_W / 2 * h
    m = np.arange(1, n + 1)[:, None]
    u = (m + v) * h
    for leaf in leaves(kernel):
        if isinstance(leaf, ZeroKernel):
            continue
        gu = leaf.relaxation(u) * w
        for j in range(3):
            M[j, 1:] += (gu * v**j).sum(axis=1)
        M[:, 0] += _cell0_moments(leaf, h)
    return M[0], M[1], M[2]


def _weights(M0, M1):
    W = np.empty_like(M0)
    W[0] = M0[0] - M1[0]
    W[1:] = M1[:-1] + M0[1:] - M1[1:]
    return W


def _cell_curvature(R: np.ndarray, h: float) -> np.ndarray:
    """Second derivative of the nodal values, averaged over each cell."""
    d = np.empty_like(R)
    d[1:-1] = (R[2:] - 2 * R[1:-1] + R[:-2]) / (h * h)
    if R.size > 3:
        d[0] = 2 * d[1] - d[2]
        d[-1] = 2 * d[-2] - d[-3]
    else:
        d[0] = d[-1] = d[1] if R.size == 3 else 0.0
    return (d[:-1] + d[1:]) / 2


def _curvature_correction(M1, M2, R, h):
    """Convolution of G with the quadratic part of R missed by linear interpolation."""
    n = len(R) - 1
    out = np.zeros(n + 1)
    if n >= 2:
        mc = 0.5 * h * h * (M2 - M1)
        out[1:] = fftconvolve(_cell_curvature(R, h), mc[:n])[:n]
    return out


def _convolve(M0, M1, M2, C, h):
    """Product-integration approximation of ``(G * C)(t_k)``.

    Piecewise-linear interpolation of C with exact cell moments of G, plus
    a curvature correction built from second differences.
    """
    n = len(C) - 1
    W = _weights(M0, M1)
    trap = fftconvolve(W, C)[: n + 1] - (M0[: n + 1] - M1[: n + 1]) * C[0]
    return trap + _curvature_correction(M1, M2, C, h)


def _singular_terms(model: MaterialModel) -> list[tuple[float, float]]:
    """Small-t terms ``s t^beta`` (beta < 2) of C that spoil product integration.

    They come from inverting the leading terms of the expansion of
    ``1/(p Q(p))`` as ``p -> oo`` and are subtracted before time stepping.
    """
    k = model.kernel
    if isinstance(k, PowerLaw):
        A, a = k.amplitude, k.alpha
        if model.N == 0:
            return [(1.0 / (A * gamma(1 + a)), a)]
        terms = []
        j = 0
        while 1 + j * (1 - a) < 2:
            beta = 1 + j * (1 - a)
            terms.append(((-A / model.N) ** j / (model.N * gamma(1 + beta)), beta))
            j += 1
        return terms
    if isinstance(k, StretchedExponential) and model.N == 0:
        a, tau = k.alpha, k.tau
        K = int(math.ceil(2 / a)) - 1
        b = [(-1) ** j * gamma(1 + j * a) / math.factorial(j) for j in range(K + 1)]
        c = [1.0 / b[0]]
        for j in range(1, K + 1):
            c.append(-sum(b[i] * c[j - i] for i in range(1, j + 1)) / b[0])
        return [(c[j] / (gamma(1 + j * a) * tau ** (j * a)), j * a) for j in range(1, K + 1) if j * a < 2]
    return []


def _kernel_conv_power(kernel, t: np.ndarray, beta: float) -> np.ndarray:
    """``(G * s^beta)(t)``."""
    if isinstance(kernel, PowerLaw):
        A, a = kernel.amplitude, kernel.alpha
        return A * gamma(beta + 1) / gamma(beta + 2 - a) * t ** (beta + 1 - a)
    g = kernel.relaxation

    def f(u):
        s = t * (1 - u)
        val = np.where(s > 0, g(np.where(s > 0, s, 1.0)), 0.0)
        return t ** (1 + beta) * val * u**beta

    return quad_vec(f, 0.0, 1.0, epsrel=1e-13, epsabs=1e-15, limit=400)[0]


def _uniform_step(t: np.ndarray) -> float:
    if t.ndim != 1 or t.size < 2:
        raise InputError("time-domain solver needs a 1-D grid with at least two points")
    h = t[0]
    if not h > 0 or not np.allclose(np.diff(t), h, rtol=1e-9, atol=0):
        raise InputError("time-domain solver needs a uniform grid t_k = k h starting at t_1 = h")
    return float(h)


def _split(model, t_full):
    terms = _singular_terms(model)
    S = sum((s * t_full**beta for s, beta in terms), np.zeros_like(t_full))
    GS = sum((s * _kernel_conv_power(model.kernel, t_full, beta) for s, beta in terms), np.zeros_like(t_full))
    dS = sum((s * beta * t_full[1:] ** (beta - 1) for s, beta in terms), np.zeros(t_full.size - 1))
    return S, GS, dS


@dataclass(frozen=True)
class VolterraInfo:
    condition: float
    kind: str
    singular_terms: tuple = field(default_factory=tuple)


def _march(W, first, f, r0, diag):
    R = np.zeros(f.size)
    R[0] = r0
    for k in range(1, f.size):
        R[k] = (f[k] - np.dot(W[k:0:-1], R[:k]) + first[k] * r0) / diag
    return R


def volterra_solve_creep(
    model: MaterialModel,
    t_grid,
    *,
    max_condition: float = 1e12,
    corrections: int = 2,
    validate: bool = True,
    return_info: bool = False,
):
    """Solve ``N C + G * C = t`` by product integration on a uniform grid.

    The unknown is split as ``C = R + S`` where ``S`` collects the singular
    small-time terms known in closed form; ``R`` is piecewise linear with
    exact cell moments of ``G``; ``corrections`` rounds of deferred
    correction add the convolution of ``G`` with the curvature of ``R``. With ``N > 0`` the scheme is of the second
    kind; with ``N = 0`` it is of the first kind and its conditioning is
    estimated from the inverse of the lower-triangular Toeplitz matrix.
    The time stepping is sequential in ``t``.
    """
    t = np.asarray(t_grid, dtype=float)
    h = _uniform_step(t)
    n = t.size
    kern = model.kernel
    if model.N == 0 and all(isinstance(k, ZeroKernel) for k in leaves(kern)):
        raise InputError("N = 0 with a zero kernel gives no equation")
    t_full = np.concatenate([[0.0], t])
    c0, rate0 = limits_c0_cprime0(model)
    if model.N == 0 and not c0 >= 0:
        raise NumericalError("first-kind equation without a usable C(0)")
    M0, M1, M2 = cell_moments(kern, h, n)
    W = _weights(M0, M1)
    diag = model.N + W[0]
    if diag <= 0:
        raise IllConditionedError("vanishing diagonal in the product-integration scheme")

    S, GS, dS = _split(model, t_full)
    f = t_full - model.N * S - GS
    R = _march(W, M0 - M1, f, c0, diag)
    # deferred correction: the curvature term is evaluated on the previous iterate
    for _ in range(corrections):
        R = _march(W, M0 - M1, f - _curvature_correction(M1, M2, R, h), c0, diag)

    cond = 1.0
    if model.N == 0:
        z = np.zeros(n)
        z[0] = 1.0 / W[0]
        for k in range(1, n):
            z[k] = -np.dot(W[k:0:-1], z[:k]) / W[0]
        cond = float(np.sum(np.abs(W[:n])) * np.sum(np.abs(z)))
        if not cond < max_condition:
            raise IllConditionedError(
                f"first-kind discretisation has condition estimate {cond:.3g}; use the transform-path result from creep_from_model instead"
            )
    C = R + S
    rate = np.gradient(R, h, edge_order=2)[1:] + dS
    terms = tuple(_singular_terms(model))
    curve = CreepCurve(t, C[1:], rate, c0, rate0, "volterra-" + ("first" if model.N == 0 else "second") + "-kind")
    if validate:
        curve.validate()
    if return_info:
        return curve, VolterraInfo(cond, "first" if model.N == 0 else "second", terms)
    return curve


def duality_residual(model: MaterialModel, curve: CreepCurve) -> float:
    """``max |N C + G * C - t|`` over the curve grid, with the solver's quadrature."""
    t = curve.t_grid
    try:
        h = _uniform_step(t)
    except InputError as exc:
        raise InputError(f"duality_residual: {exc}") from exc
    t_full = np.concatenate([[0.0], t])
    C = np.concatenate([[curve.c0], curve.C])
    S, GS, _ = _split(model, t_full)
    M0, M1, M2 = cell_moments(model.kernel, h, t.size)
    conv = _convolve(M0, M1, M2, C - S, h) + GS
    return float(np.max(np.abs(model.N * C[1:] + conv[1:] - t)))


# --------------------------------------------------------------------------
# creep data -> Newtonian coefficient


def _estimate_c0(t: np.ndarray, C: np.ndarray, tol_c0: float) -> float:
    h = t[0]
    c1, c2, c4 = PchipInterpolator(t, C)([h, 2 * h, 4 * h])
    den = c1 + c4 - 2 * c2
    c0 = (c1 * c4 - c2 * c2) / den if abs(den) > 1e-14 * max(abs(c4), 1e-300) else c1
    if c0 <= tol_c0 * max(abs(C[-1]), 1e-300):
        return 0.0
    return float(min(c0, c1))


@dataclass(frozen=True)
class NewtonianEstimate:
    """Result of :func:`newtonian_from_creep`."""

    N: float
    flag: str
    c0: float
    c_rate0: float
    slopes: tuple = ()


def _wynn_epsilon(seq) -> float:
    """Wynn's epsilon algorithm; returns the deepest even-column entry."""
    prev = np.zeros(len(seq) + 1)
    col = np.asarray(seq, dtype=float)
    best = float(col[-1])
    k = 0
    while col.size > 1:
        diff = np.diff(col)
        if np.any(diff == 0):
            break
        prev, col = col, prev[1 : col.size] + 1.0 / diff
        k += 1
        if k % 2 == 0:
            if not np.all(np.isfinite(col)):
                break
            best = float(col[-1])
    return best


def _initial_slope(t: np.ndarray, C: np.ndarray, c0: float, max_levels: int = 7) -> tuple[float, tuple]:
    """Extrapolate the difference quotients ``D(s) = (C(s) - c0)/s`` to ``s -> 0``.

    ``D`` is sampled at the dyadic steps ``s = t_0 2^i``. If the quotients
    keep growing as the step halves (ratio of successive differences >= 1),
    the slope is infinite. Otherwise the errors ``c_j s^(j k)`` form a sum of
    geometric sequences in ``i`` for any exponent ``k``, which Wynn's epsilon
    algorithm removes without knowing ``k``.
    """
    h = t[0]
    levels = min(max_levels, int(math.floor(math.log2(t[-1] / h) + 1e-9)) + 1)
    levels -= (levels + 1) % 2  # odd count: the last epsilon column is even
    if levels < 3:
        raise InputError("creep curve too short to estimate its initial slope")
    s = h * 2.0 ** np.arange(levels)
    D = (PchipInterpolator(t, C)(s) - c0) / s
    d = D[:-1] - D[1:]
    scale = max(abs(D[0]), 1e-300)
    if np.all(np.abs(d[:2]) <= 1e-10 * scale):
        return float(D[0]), tuple(D)
    if d[0] > 0 and d[1] > 0 and d[0] >= d[1]:
        return math.inf, tuple(D)
    return float(max(_wynn_epsilon(D[::-1]), 0.0)), tuple(D)


def newtonian_from_creep(curve: CreepCurve, *, tol_c0: float = 1e-6) -> NewtonianEstimate:
    """Estimate ``N = 1/C'(0)`` from a sampled creep curve.

    A jump ``C(0) > tol_c0 * C(t_max)`` means ``N = 0`` (finite wavefront
    speed). Otherwise the initial slope is extrapolated from difference
    quotients on up to seven dyadic steps above the smallest time; a
    diverging slope means a strongly singular kernel and again ``N = 0``.
    Accuracy depends on resolving the early creep: for a power-law kernel
    the smallest time should be well below ``(N/A)^(1/(1-alpha))``.
    """
    bad = curve.violations()
    if bad:
        raise InputError("creep curve is not a Bernstein function: " + "; ".join(bad))
    t, C = curve.t_grid, curve.C
    span = t[-1] - t[0]
    if t[0] > 0.01 * span or np.count_nonzero(t <= 8 * t[0]) < 8:
        raise InputError("need at least 8 samples near t = 0 (smallest time <= 1% of the span)")
    c0 = curve.c0
    if c0 > tol_c0 * C[-1]:
        return NewtonianEstimate(0.0, JUMP, c0, curve.c_rate0)
    slope, D = _initial_slope(t, C, 0.0)
    if math.isinf(slope):
        return NewtonianEstimate(0.0, INFINITE_SLOPE, 0.0, math.inf, D)
    if slope <= 0:
        raise InputError("creep curve has no positive initial slope")
    return NewtonianEstimate(1.0 / slope, NEWTONIAN, 0.0, slope, D)
