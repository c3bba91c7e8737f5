"""Green's function of the one-dimensional viscoelastic wave equation.

The field excited by ``u_t(0, x) = delta(x)`` is

    u(t, x) = rho / (4 pi i) int_{sigma - i oo}^{sigma + i oo}
              exp(p t - kappa(p) |x|) / (Q(p) kappa(p)) dp,

and does not depend on ``sigma > 0``. Writing ``p = sigma + i y`` and using
conjugate symmetry,

    u = rho / (2 pi) exp(phi0) int_0^oo Re[exp(i y w) H(y)] dy,

with ``phi0 = sigma t - kappa(sigma) |x|``, ``w = t - |x| / c_inf`` and the
slowly varying factor

    H(y) = exp(-(kappa(p) - kappa(sigma) - i y / c_inf) |x|) / (Q(p) kappa(p)).

``sigma`` is chosen where ``phi(sigma)`` is smallest, so the exponentially
small fields ahead of a front or at negative times come out as
``exp(phi0)`` times an O(1) integral instead of a cancellation of O(1)
numbers. The oscillatory integral uses QUADPACK's Fourier routines.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
from scipy import integrate
from scipy.optimize import minimize_scalar

from .dispersion import c_infinity, wavenumber
from .errors import InputError, IntegrationError
from .io_utils import atomic_write, format_table
from .kernels import MaterialModel, model_to_dict, q_function


@dataclass(frozen=True)
class IntegrationControls:
    """Tunable parameters of the Bromwich-line quadrature.

    Attributes
    ----------
    shift_factor : float
        Scales the base abscissa ``sigma0 = max(1, 1/|t|) * shift_factor``.
    saddle : bool
        Move ``sigma`` to the minimum of ``sigma t - kappa(sigma)|x|`` on
        ``[sigma0, 1e8 sigma0]``. With ``False`` the line sits at ``sigma0``.
    tail_tol : float
        Truncate non-oscillatory tails once ``|H|`` drops below
        ``tail_tol * max |H|``.
    abs_tol : float
        Absolute tolerance on the scaled integral.
    omega_max : float
        Give up if the integrand has not decayed by ``|Im p| = omega_max``.
    front_margin : float
        Relative distance to a finite-speed front below which a value is
        flagged as low confidence.
    """

    shift_factor: float = 1.0
    saddle: bool = True
    tail_tol: float = 1e-10
    abs_tol: float = 1e-11
    omega_max: float = 1e12
    front_margin: float = 0.01
    cycles: int = 400

    def __post_init__(self):
        if not self.shift_factor > 0:
            raise InputError("shift_factor must be > 0")
        if not (0 < self.tail_tol < 1 and self.abs_tol > 0 and self.omega_max > 1):
            raise InputError("integration tolerances out of range")


@dataclass(frozen=True)
class GreenResult:
    """Value with diagnostics: ``u = prefactor * exp(log_scale) * integral``."""

    u: float
    log_scale: float
    integral: float
    abserr: float
    sigma: float
    method: str
    confident: bool

    @property
    def resolved(self) -> bool:
        """The scaled integral is non-zero beyond its own error estimate."""
        return abs(self.integral) > 10 * self.abserr and math.isfinite(self.log_scale)


@dataclass(frozen=True)
class FieldSample:
    t: float
    x: float
    u: float
    confident: bool = True


def _phi(model, t, ax, sigma):
    return sigma * t - float(np.real(wavenumber(model, complex(sigma)))) * ax


def _choose_sigma(model, t, ax, ctl):
    sigma0 = max(1.0, 1.0 / abs(t)) * ctl.shift_factor if t != 0 else ctl.shift_factor
    if not ctl.saddle or ax == 0 and t > 0:
        return sigma0
    lo, hi = math.log(sigma0), math.log(sigma0) + math.log(1e8)
    res = minimize_scalar(lambda s: _phi(model, t, ax, math.exp(s)), bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-6})
    best = math.exp(res.x)
    # the bounded search can stall on monotone objectives; compare with the ends
    cands = [(sigma0, _phi(model, t, ax, sigma0)), (best, res.fun), (math.exp(hi), _phi(model, t, ax, math.exp(hi)))]
    return min(cands, key=lambda c: c[1])[0]


class _Integrand:
    def __init__(self, model, ax, sigma, inv_c):
        self.model, self.ax, self.sigma, self.inv_c = model, ax, sigma, inv_c
        self.k_sigma = float(np.real(wavenumber(model, complex(sigma))))
        self.cache: dict[float, complex] = {}

    def __call__(self, y: float) -> complex:
        v = self.cache.get(y)
        if v is None:
            p = complex(self.sigma, y)
            kap = complex(wavenumber(self.model, p))
            q = complex(q_function(self.model, p))
            expo = -(kap - self.k_sigma - 1j * y * self.inv_c) * self.ax
            v = np.exp(expo) / (q * kap)
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise IntegrationError(f"non-finite integrand at Im p = {y:g}")
            self.cache[y] = v
        return v

    def re(self, y):
        return self(y).real

    def im(self, y):
        return self(y).imag


def _quad(f, a, b, **kw):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", integrate.IntegrationWarning)
        val, err = integrate.quad(f, a, b, **kw)[:2]
    return val, err, bool(caught)


def _fourier_tail(h: _Integrand, w: float, ctl) -> tuple[float, float, bool]:
    """``int_0^oo Re[exp(i y w) H(y)] dy`` for H decaying at least like 1/y."""
    s = 1.0 if w > 0 else -1.0
    aw = abs(w)
    kw = dict(weight="cos", wvar=aw, epsabs=ctl.abs_tol, limlst=ctl.cycles, limit=200)
    c, ec, bad1 = _quad(h.re, 0.0, np.inf, **kw)
    kw["weight"] = "sin"
    sn, es, bad2 = _quad(h.im, 0.0, np.inf, **kw)
    return c - s * sn, ec + es, bad1 or bad2


def _truncated(h: _Integrand, w: float, ctl) -> tuple[float, float, bool]:
    """Finite-range integration for exponentially decaying H."""
    y0 = max(1.0, h.sigma)
    edges = [0.0, y0]
    peak = max(abs(h(0.0)), abs(h(y0)))
    while True:
        y = edges[-1] * 2
        mag = abs(h(y))
        peak = max(peak, mag)
        edges.append(y)
        if mag < ctl.tail_tol * peak and abs(h(edges[-2])) < 1e3 * ctl.tail_tol * peak:
            break
        if y > ctl.omega_max:
            raise IntegrationError(f"integrand has not decayed by |Im p| = {ctl.omega_max:g}")
    total = err = 0.0
    bad = False
    for a, b in zip(edges[:-1], edges[1:]):
        if w != 0:
            c, e1, b1 = _quad(h.re, a, b, weight="cos", wvar=w, epsabs=ctl.abs_tol / len(edges), limit=200)
            sn, e2, b2 = _quad(h.im, a, b, weight="sin", wvar=w, epsabs=ctl.abs_tol / len(edges), limit=200)
            total += c - sn
            err += e1 + e2
            bad = bad or b1 or b2
        else:
            c, e1, b1 = _quad(h.re, a, b, epsabs=ctl.abs_tol / len(edges), epsrel=1e-10, limit=200)
            total += c
            err += e1
            bad = bad or b1
    return total, err, bad


def green_point_info(model: MaterialModel, t: float, x: float, ctl: IntegrationControls | None = None) -> GreenResult:
    """:func:`green_point` with quadrature diagnostics."""
    ctl = ctl or IntegrationControls()
    t, ax = float(t), abs(float(x))
    if t == 0 and ax == 0:
        raise InputError("the Green's function is singular at (t, x) = (0, 0)")
    c_inf = c_infinity(model)
    inv_c = 0.0 if math.isinf(c_inf) else 1.0 / c_inf
    sigma = _choose_sigma(model, t, ax, ctl)
    phi0 = _phi(model, t, ax, sigma)
    w = t - ax * inv_c
    near_front = math.isfinite(c_inf) and abs(w) <= ctl.front_margin * max(abs(t), ax * inv_c)
    pref = model.rho / (2 * math.pi)
    if phi0 < -745.0:
        # exp(phi0) underflows: the field is zero to double precision
        return GreenResult(0.0, phi0, 0.0, 0.0, sigma, "underflow", not near_front)
    h = _Integrand(model, ax, sigma, inv_c)
    check = h(1.0)
    if abs(np.conj(check) - complex(h.__class__(model, ax, sigma, inv_c)(-1.0))) > 1e-8 * abs(check):
        raise IntegrationError("integrand is not conjugate-symmetric; the field would not be real")
    algebraic = ax == 0 or math.isfinite(c_inf)
    if algebraic and w == 0:
        # exactly on the front: mean of the values just behind and just ahead
        dt = 1e-3 * max(abs(t), 1e-12)
        a = green_point_info(model, t - dt, x, ctl)
        b = green_point_info(model, t + dt, x, ctl)
        return GreenResult((a.u + b.u) / 2, 0.0, (a.u + b.u) / 2, a.abserr + b.abserr, sigma, "front-average", False)
    if algebraic:
        val, err, bad = _fourier_tail(h, w, ctl)
        method = "fourier"
    else:
        val, err, bad = _truncated(h, w, ctl)
        method = "truncated"
    if bad and err > max(1e-6 * abs(val), 10 * ctl.abs_tol) and not near_front:
        raise IntegrationError(f"Bromwich quadrature did not converge at t={t:g}, x={x:g} (error {err:.3g})")
    u = pref * math.exp(phi0) * val
    return GreenResult(u, phi0, pref * val, pref * err, sigma, method, not (near_front or bad))


def green_point(model: MaterialModel, t: float, x: float, ctl: IntegrationControls | None = None) -> float:
    """``u(t, x)`` for the unit initial velocity impulse at the origin.

    Negative ``t`` is allowed and returns (numerically) zero.
    """
    return green_point_info(model, t, x, ctl).u


def snapshot(model: MaterialModel, t: float, x_grid, ctl: IntegrationControls | None = None) -> list[FieldSample]:
    """``u(t, x)`` along ``x_grid``; values at ``+x`` and ``-x`` are shared."""
    xs = np.asarray(x_grid, dtype=float)
    cache: dict[float, GreenResult] = {}
    out = []
    for x in xs:
        key = abs(float(x))
        if key not in cache:
            cache[key] = green_point_info(model, t, key, ctl)
        r = cache[key]
        out.append(FieldSample(float(t), float(x), r.u, r.confident))
    return out


def seismogram(model: MaterialModel, x: float, t_grid, ctl: IntegrationControls | None = None) -> list[FieldSample]:
    """``u(t, x)`` along ``t_grid`` at a fixed receiver."""
    out = []
    for t in np.asarray(t_grid, dtype=float):
        r = green_point_info(model, float(t), x, ctl)
        out.append(FieldSample(float(t), float(x), r.u, r.confident))
    return out


@dataclass
class CausalityReport:
    passed: bool
    peak: float
    max_negative_time: float
    max_outside_cone: float | None
    spreading_detected: bool | None
    offending: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def causality_check(
    model: MaterialModel,
    t_grid,
    x_grid,
    tol: float | None = None,
    ctl: IntegrationControls | None = None,
    *,
    cone_tol: float | None = None,
    cone_margin: float = 0.01,
) -> CausalityReport:
    """Check that the field vanishes where causality forbids it.

    The forbidden set is ``t < 0`` and, for a finite wavefront speed,
    ``|x| > (1 + cone_margin) c_inf t``. ``tol`` defaults to 1e-5 of the
    peak over the allowed samples, ``cone_tol`` to 1e-4 of it. With
    ``N > 0`` the sample with the largest ``|x|/t`` that does not underflow
    must carry a resolved, non-zero value (infinite-speed spreading).
    """
    ts = np.asarray(t_grid, dtype=float)
    xs = np.asarray(x_grid, dtype=float)
    c_inf = c_infinity(model)
    results = {}
    for t in ts:
        for x in xs:
            if t == 0 and x == 0:
                continue
            results[(float(t), float(x))] = green_point_info(model, t, x, ctl)
    allowed = [
        abs(r.u)
        for (t, x), r in results.items()
        if t > 0 and (math.isinf(c_inf) or abs(x) < c_inf * t * (1 - cone_margin))
    ]
    peak = max(allowed) if allowed else 0.0
    tol = 1e-5 * peak if tol is None else tol
    cone_tol = 1e-4 * peak if cone_tol is None else cone_tol
    offending = []
    neg = [abs(r.u) for (t, _), r in results.items() if t < 0]
    for (t, x), r in results.items():
        if t < 0 and abs(r.u) >= tol:
            offending.append((t, x, r.u, "negative time"))
    outside = None
    if math.isfinite(c_inf):
        ext = [((t, x), r) for (t, x), r in results.items() if t >= 0 and abs(x) > c_inf * t * (1 + cone_margin)]
        outside = max((abs(r.u) for _, r in ext), default=0.0)
        offending += [(t, x, r.u, "outside cone") for (t, x), r in ext if abs(r.u) >= cone_tol]
    spreading = None
    if model.N > 0:
        # the farthest sample (relative to elapsed time) whose size is representable
        pos = [(abs(x) / t, (t, x)) for (t, x), r in results.items() if t > 0 and x != 0 and r.log_scale > -700]
        if pos:
            _, key = max(pos)
            r = results[key]
            spreading = r.u > 0 and r.resolved
            if not spreading:
                offending.append((key[0], key[1], r.u, "no infinite-speed spreading"))
        else:
            spreading = False
            offending.append((math.nan, math.nan, 0.0, "no representable sample off the source"))
    return CausalityReport(not offending, peak, max(neg, default=0.0), outside, spreading, offending)


def write_field_csv(
    path: str | Path,
    samples: list[FieldSample],
    axis: str,
    model: MaterialModel,
    ctl: IntegrationControls | None = None,
    comments: list[str] | None = None,
) -> Path:
    """Write ``x,u`` or ``t,u`` plus a JSON sidecar ``<path>.meta.json``."""
    if axis not in ("x", "t"):
        raise InputError("axis must be 'x' or 't'")
    path = Path(path)
    col = [getattr(s, axis) for s in samples]
    atomic_write(path, format_table([axis, "u"], [col, [s.u for s in samples]], comments))
    meta = {
        "model": model_to_dict(model),
        "controls": asdict(ctl or IntegrationControls()),
        "fixed": {"t": samples[0].t} if axis == "x" and samples else ({"x": samples[0].x} if samples else {}),
        "low_confidence": [getattr(s, axis) for s in samples if not s.confident],
    }
    sidecar = path.with_name(path.name + ".meta.json")
    atomic_write(sidecar, json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return sidecar
