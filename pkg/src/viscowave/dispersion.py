"""Complex wavenumber, attenuation, dispersion and regime classification.

For a time dependence ``exp(p t)`` the plane-wave solutions behave as
``exp(p t - kappa(p) |x|)`` with

    kappa(p) = p sqrt(rho) / sqrt(Q(p)),    Re kappa >= 0 for Re p > 0.

On the imaginary axis ``p = -i omega`` the attenuation is ``Re kappa`` and
the phase velocity ``omega / |Im kappa|``.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
from scipy import stats

from .duality import INFINITE_SLOPE, JUMP, CreepCurve, newtonian_from_creep
from .errors import InputError, InvariantError, NumericalError, SingularMediumError
from .io_utils import atomic_write, format_table
from .kernels import (
    MaterialModel,
    PowerLaw,
    PronySeries,
    StretchedExponential,
    ZeroKernel,
    g0_closed_form,
    leaves,
    q_function,
)

NEWTONIAN_WINDOW = (1e3, 1e6)
STRONG_WINDOW = (1e3, 1e6)
WEAK_WINDOW = (1e3, 1e6)


class Regime(str, enum.Enum):
    WEAK = "WeaklySingularFiniteSpeed"
    STRONG = "StronglySingular"
    NEWTONIAN = "Newtonian"


def wavenumber(model: MaterialModel, p, *, check_offset: bool = False):
    """``kappa(p) = p sqrt(rho / Q(p))`` on the branch with ``Re kappa >= 0``.

    Points on the imaginary axis are evaluated directly (the kernels extend
    continuously there). With ``check_offset`` each such point is also
    evaluated at ``p + 1e-8 |p|`` and the two values must agree to 1e-6.
    """
    p = np.asarray(p, dtype=complex)
    q = q_function(model, p)
    if np.any(q == 0):
        raise SingularMediumError("Q(p) = 0: the medium has no stiffness at this p")
    kappa = p * np.sqrt(model.rho) / np.sqrt(q)
    kappa = np.where(kappa.real < 0, -kappa, kappa)
    if check_offset:
        on_axis = p.real == 0
        if np.any(on_axis):
            shifted = p[on_axis] + 1e-8 * np.abs(p[on_axis])
            k2 = wavenumber(model, shifted)
            k1 = kappa[on_axis]
            if np.any(np.abs(k2 - k1) > 1e-6 * np.abs(k1)):
                raise NumericalError("imaginary-axis wavenumber disagrees with its right-half-plane limit")
    return kappa[()] if kappa.ndim == 0 else kappa


def _omega(omega) -> np.ndarray:
    omega = np.asarray(omega, dtype=float)
    if np.any(~(omega > 0)):
        raise InputError("angular frequency must be > 0")
    return omega


def attenuation(model: MaterialModel, omega, *, check_offset: bool = False):
    """``a(omega) = Re kappa(-i omega)``."""
    om = _omega(omega)
    a = np.real(wavenumber(model, -1j * om, check_offset=check_offset))
    return float(a) if np.ndim(omega) == 0 else a


def phase_velocity(model: MaterialModel, omega, *, check_offset: bool = False):
    """``omega / |Im kappa(-i omega)|``."""
    om = _omega(omega)
    k = wavenumber(model, -1j * om, check_offset=check_offset)
    v = om / np.abs(np.imag(k))
    return float(v) if np.ndim(omega) == 0 else v


@dataclass(frozen=True)
class DispersionSample:
    """One frequency of a dispersion curve.

    With the ``exp(p t - kappa x)`` convention ``Im kappa(-i omega) < 0`` for
    an outgoing wave, so the phase velocity uses ``|Im kappa|``.
    """

    omega: float
    kappa: complex
    attenuation: float
    phase_velocity: float

    def __post_init__(self):
        if not self.omega > 0:
            raise InvariantError("omega must be > 0")
        if not self.attenuation >= 0:
            raise InvariantError(f"negative attenuation {self.attenuation} at omega={self.omega}")
        if not abs(self.attenuation - self.kappa.real) <= 1e-12 * max(abs(self.kappa), 1e-300):
            raise InvariantError("attenuation differs from Re kappa")
        if not self.phase_velocity > 0:
            raise InvariantError("phase velocity must be > 0")


def dispersion_curve(model: MaterialModel, omega, *, check_offset: bool = False) -> list[DispersionSample]:
    om = np.atleast_1d(_omega(omega))
    k = np.atleast_1d(wavenumber(model, -1j * om, check_offset=check_offset))
    return [
        DispersionSample(float(w), complex(kk), float(kk.real), float(w / abs(kk.imag))) for w, kk in zip(om, k)
    ]


def write_dispersion_csv(path: str | Path, samples: list[DispersionSample], comments: list[str] | None = None):
    cols = [
        [s.omega for s in samples],
        [s.attenuation for s in samples],
        [s.phase_velocity for s in samples],
        [s.kappa.real for s in samples],
        [s.kappa.imag for s in samples],
    ]
    text = format_table(["omega", "attenuation", "phase_velocity", "re_kappa", "im_kappa"], cols, comments)
    atomic_write(path, text)


def c_infinity(model: MaterialModel) -> float:
    """Wavefront speed: ``sqrt(G(0)/rho)`` for ``N = 0`` and bounded G, else infinite."""
    if model.N > 0:
        return math.inf
    g0 = g0_closed_form(model.kernel)
    if math.isinf(g0):
        return math.inf
    return math.sqrt(g0 / model.rho)


@dataclass(frozen=True)
class ExponentFit:
    slope: float
    stderr: float
    intercept: float
    omega_min: float
    omega_max: float
    n_points: int


def high_freq_exponent(model: MaterialModel, omega_min: float, omega_max: float, n_points: int = 32) -> ExponentFit:
    """Least-squares slope of ``log a`` against ``log omega`` on a geometric grid."""
    if not (omega_min > 0 and omega_max / omega_min >= 1e2):
        raise InputError("fit window must satisfy omega_max / omega_min >= 100")
    if n_points < 16:
        raise InputError("exponent fit needs at least 16 frequencies")
    om = np.geomspace(omega_min, omega_max, n_points)
    a = attenuation(model, om)
    if np.any(a <= 0):
        raise NumericalError("attenuation is not positive on the fit window; no power law to fit")
    res = stats.linregress(np.log(om), np.log(a))
    return ExponentFit(float(res.slope), float(res.stderr), float(res.intercept), omega_min, omega_max, n_points)


def local_slopes(model: MaterialModel, omega) -> np.ndarray:
    """Finite-difference log-log slopes of ``a(omega)`` between consecutive frequencies."""
    om = np.asarray(omega, dtype=float)
    a = attenuation(model, om)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.diff(np.log(a)) / np.diff(np.log(om))


# --------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class RegimeReport:
    """Regime of a medium with the supporting numbers.

    ``expected_exponent`` is ``None`` when the attenuation stays bounded
    (smooth kernels) or cannot be inferred; ``evidence`` holds the fit
    window and diagnostics.
    """

    regime: Regime
    c_inf: float
    fitted_exponent: float | None
    expected_exponent: float | None
    evidence: dict = field(default_factory=dict)

    def __post_init__(self):
        e = self.expected_exponent
        if self.regime is Regime.NEWTONIAN:
            if e != 0.5 or not math.isinf(self.c_inf):
                raise InvariantError("Newtonian regime needs exponent 1/2 and infinite wavefront speed")
        elif self.regime is Regime.STRONG:
            if e is not None and not 0.5 < e < 1:
                raise InvariantError(f"strongly singular exponent {e} outside (1/2, 1)")
        elif self.regime is Regime.WEAK:
            if not math.isfinite(self.c_inf):
                raise InvariantError("weakly singular regime needs a finite wavefront speed")
            if e is not None and not 0 < e < 1:
                raise InvariantError(f"weakly singular exponent {e} outside (0, 1)")

    @property
    def row(self) -> int:
        return {Regime.WEAK: 1, Regime.STRONG: 2, Regime.NEWTONIAN: 3}[self.regime]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["regime"] = self.regime.value
        d["row"] = self.row
        return _json_safe(d)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = [f"regime: {self.regime.value} (row {self.row})", f"c_inf: {_fmt(self.c_inf)}"]
        lines.append(f"expected exponent: {_fmt(self.expected_exponent)}")
        lines.append(f"fitted exponent: {_fmt(self.fitted_exponent)}")
        for k in sorted(self.evidence):
            lines.append(f"{k}: {_fmt(self.evidence[k])}")
        return "\n".join(lines) + "\n"


def _fmt(v) -> str:
    if v is None:
        return "n/a"
    if isinstance(v, float):
        return "inf" if math.isinf(v) else f"{v:.12g}"
    return str(v)


def _json_safe(v):
    if isinstance(v, dict):
        return {k: _json_safe(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_safe(x) for x in v]
    if isinstance(v, float) and not math.isfinite(v):
        return "inf" if v > 0 else ("-inf" if v < 0 else "nan")
    return v


def _maxwell_limit(model: MaterialModel) -> float:
    """``lim a(omega) = sqrt(rho) G'(0-) / (2 G(0)^(3/2))`` for Prony kernels."""
    g0 = g1 = 0.0
    for leaf in leaves(model.kernel):
        if isinstance(leaf, PronySeries):
            g0 += float(np.sum(leaf.moduli))
            g1 += float(np.sum(leaf.moduli * leaf.rates))
    return math.sqrt(model.rho) * g1 / (2 * g0**1.5)


def classify_model(model: MaterialModel, *, fit: bool = True, n_points: int = 32) -> RegimeReport:
    """Place a model in the creep/relaxation/attenuation correspondence table.

    * ``N > 0``: Newtonian, ``a ~ omega^(1/2)``.
    * ``N = 0``, unbounded G: strongly singular, ``a ~ omega^(1 - alpha/2)``
      for the most singular power-law part.
    * ``N = 0``, bounded G: finite wavefront speed. A stretched exponential
      part ``exp(-(t/tau)^b)`` gives ``a ~ omega^(1 - b)``; pure Prony
      kernels have bounded attenuation and no exponent is claimed.
    """
    c_inf = c_infinity(model)
    parts = leaves(model.kernel)
    evidence: dict = {}
    if model.N > 0:
        regime, expected, window = Regime.NEWTONIAN, 0.5, NEWTONIAN_WINDOW
        evidence["prefactor_expected"] = math.sqrt(model.rho / (2 * model.N))
    elif math.isinf(g0_closed_form(model.kernel)):
        alpha = max(k.alpha for k in parts if isinstance(k, PowerLaw))
        regime, expected, window = Regime.STRONG, 1 - alpha / 2, STRONG_WINDOW
        evidence["kernel_alpha"] = alpha
    else:
        regime, window = Regime.WEAK, WEAK_WINDOW
        kww = [k.alpha for k in parts if isinstance(k, StretchedExponential)]
        if kww:
            expected = 1 - min(kww)
            evidence["kernel_alpha"] = min(kww)
        else:
            expected = None
            evidence["attenuation_bounded"] = True
            evidence["attenuation_limit"] = _maxwell_limit(model)
            evidence["attenuation_at_1e4"] = attenuation(model, 1e4)
    fitted = None
    if fit and expected is not None:
        res = high_freq_exponent(model, window[0], window[1], n_points)
        fitted = res.slope
        evidence.update(fit_omega_min=window[0], fit_omega_max=window[1], fit_points=n_points, fit_stderr=res.stderr)
    if any(isinstance(k, ZeroKernel) for k in parts) and len(parts) == 1:
        evidence["kernel"] = "zero"
    return RegimeReport(regime, c_inf, fitted, expected, evidence)


def classify_from_creep(curve: CreepCurve, *, rho: float = 1.0, tol_c0: float = 1e-6) -> RegimeReport:
    """Classify from creep data alone.

    A jump ``C(0) > 0`` gives row 1 with ``c_inf = 1 / sqrt(rho C(0))``; a
    diverging initial slope gives row 2, where the small-time exponent
    ``C ~ t^alpha`` yields the expected attenuation exponent ``1 - alpha/2``;
    a finite slope gives row 3 with ``N = 1 / C'(0)``.
    """
    est = newtonian_from_creep(curve, tol_c0=tol_c0)
    evidence: dict = {"c0": est.c0, "c_rate0": est.c_rate0, "flag": est.flag}
    if est.flag == JUMP:
        return RegimeReport(Regime.WEAK, 1.0 / math.sqrt(rho * est.c0), None, None, evidence)
    if est.flag == INFINITE_SLOPE:
        t, c = curve.t_grid, curve.C
        alpha = math.log(np.interp(2 * t[0], t, c) / c[0]) / math.log(2.0)
        evidence["creep_exponent"] = alpha
        expected = 1 - alpha / 2 if 0 < alpha < 1 else None
        return RegimeReport(Regime.STRONG, math.inf, None, expected, evidence)
    evidence["N"] = est.N
    return RegimeReport(Regime.NEWTONIAN, math.inf, None, 0.5, evidence)
