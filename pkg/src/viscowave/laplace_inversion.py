"""Numerical inverse Laplace transforms.

Three routes are provided:

* fixed Talbot contour quadrature, for transforms whose singularities all lie
  on the closed negative real axis;
* branch-cut integration, for transforms analytic off ``(-inf, 0]`` whose
  Bromwich contour can be collapsed onto the two banks of the cut;
* exact residue summation for low-degree rational transforms.

``invert_auto`` chooses between them from the metadata carried by a
:class:`TransformFunction`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np
from scipy import integrate, signal
from scipy.special import factorial

from .errors import InputError, InversionError

Kind = Literal["branch_cut", "meromorphic"]

DEFAULT_TALBOT_NODES = 24


@dataclass(frozen=True)
class TransformFunction:
    """A Laplace transform ``F(p)`` of a real function, with analyticity metadata.

    Parameters
    ----------
    func : callable
        Vectorised map ``p -> F(p)`` on the cut plane.
    kind : {"branch_cut", "meromorphic"}
        ``branch_cut``: analytic off ``(-inf, 0]``. ``meromorphic``: only
        isolated poles, listed in ``poles``.
    poles : tuple of complex
        Poles of a meromorphic transform; all must satisfy ``Re p <= 0``.
    rational : (num, den), optional
        Polynomial coefficients (highest power first) when ``F`` is rational.
    cut_value : callable, optional
        ``r -> F(r e^{-i pi})`` for ``r > 0``, the boundary value from below
        the cut. Needed by :func:`invert_branchcut`.
    """

    func: Callable[[np.ndarray], np.ndarray]
    kind: Kind
    poles: tuple = ()
    rational: tuple | None = None
    cut_value: Callable[[np.ndarray], np.ndarray] | None = None
    check_symmetry: bool = True

    def __post_init__(self):
        if self.kind not in ("branch_cut", "meromorphic"):
            raise InputError(f"unknown analyticity kind {self.kind!r}")
        if any(complex(z).real > 1e-12 * max(1.0, abs(z)) for z in self.poles):
            raise InputError("declared poles must lie in Re p <= 0")
        if self.check_symmetry:
            probe = np.array([0.7 + 1.3j, 2.5 + 0.4j])
            a = np.asarray(self.func(probe), dtype=complex)
            b = np.asarray(self.func(np.conj(probe)), dtype=complex)
            if np.any(np.abs(b - np.conj(a)) > 1e-10 * np.maximum(np.abs(a), 1e-300)):
                raise InputError("transform is not conjugate-symmetric; its original is not real")

    def __call__(self, p):
        return self.func(p)

    @classmethod
    def from_rational(cls, num, den) -> "TransformFunction":
        num = np.trim_zeros(np.atleast_1d(np.asarray(num, dtype=float)), "f")
        den = np.trim_zeros(np.atleast_1d(np.asarray(den, dtype=float)), "f")
        if den.size == 0:
            raise InputError("rational transform with zero denominator")
        poles = tuple(complex(z) for z in np.roots(den))
        return cls(
            func=lambda p: np.polyval(num, p) / np.polyval(den, p),
            kind="meromorphic",
            poles=poles,
            rational=(num, den),
        )

    @property
    def pole_count(self) -> int:
        if self.rational is not None:
            return len(self.rational[1]) - 1
        return len(self.poles)


def _times(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if np.any(~(t > 0)):
        raise InputError("inversion times must be > 0; initial values come from Tauberian limits")
    return t


def _unwrap(out: np.ndarray, t):
    return float(out) if np.ndim(t) == 0 else out


def invert_talbot(F: TransformFunction | Callable, t, M: int = DEFAULT_TALBOT_NODES):
    """Fixed Talbot inversion (Abate-Valko contour).

    The contour ``p(theta) = r theta (cot theta + i)``, ``r = 2M / (5t)``,
    is sampled at ``theta_k = k pi / M``. Round-off grows like
    ``exp(0.4 M)``, so in double precision M between 20 and 30 gives the best
    accuracy; larger M is accepted but loses digits.
    """
    if M % 2 or not 16 <= M <= 128:
        raise InputError(f"Talbot node count must be even and in [16, 128], got {M}")
    tt = _times(t)
    tv = np.atleast_1d(tt)[:, None]
    k = np.arange(1, M)
    theta = k * np.pi / M
    cot = 1.0 / np.tan(theta)
    r = 2.0 * M / (5.0 * tv)
    nodes = r * theta * (cot + 1j)
    sigma = theta + (theta * cot - 1.0) * cot
    f_nodes = np.asarray(F(nodes), dtype=complex)
    f_r = np.asarray(F(r[:, 0] + 0j), dtype=complex)
    bad = ~np.isfinite(f_nodes)
    if np.any(bad) or not np.all(np.isfinite(f_r)):
        where = nodes[bad][0] if np.any(bad) else r[~np.isfinite(f_r), 0][0]
        raise InversionError(f"non-finite transform value at Talbot node p = {complex(where):.6g}")
    terms = np.exp(tv * nodes) * f_nodes * (1.0 + 1j * sigma)
    out = (r[:, 0] / M) * (0.5 * np.exp(r[:, 0] * tv[:, 0]) * f_r.real + terms.real.sum(axis=1))
    return _unwrap(out.reshape(np.shape(tt)), t)


def _branchcut_single(F: TransformFunction, t: float, quad_tol: float) -> float:
    cut = F.cut_value

    def integrand(u: float) -> float:
        r = math.exp(u)
        if r == 0.0:
            return 0.0
        try:
            val = complex(cut(r))
        except ZeroDivisionError:
            val = complex(math.inf)
        if not (math.isfinite(val.real) and math.isfinite(val.imag)):
            raise InversionError(f"pole or non-finite value on the branch cut at r = {r:.6g}")
        return math.exp(-r * t) * val.imag * r

    # the small circle around p = 0 only vanishes when r F(r) -> 0
    r1 = 1e-10 / max(t, 1.0)
    r2 = r1 * 1e-4
    near1 = abs(complex(cut(r1))) * r1
    near2 = abs(complex(cut(r2))) * r2
    if not math.isfinite(near2) or (near2 > 1e-8 and near2 >= 0.9 * near1):
        raise InversionError("transform is not o(1/p) at p = 0; the cut integral misses a residue at the origin")
    u_max = math.log(max(2.0, 60.0 / t))
    tail = abs(integrand(u_max))
    parts = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", integrate.IntegrationWarning)
        for a, b in ((-np.inf, 0.0), (0.0, u_max)):
            val, err = integrate.quad(integrand, a, b, epsrel=quad_tol, epsabs=1e-300, limit=400)
            parts.append((val, err))
    value = sum(v for v, _ in parts)
    err = sum(e for _, e in parts)
    scale = sum(abs(v) for v, _ in parts)
    if caught and err > 10 * quad_tol * max(scale, 1e-300):
        raise InversionError(f"branch-cut quadrature did not converge at t = {t:g} (error estimate {err:.3g})")
    if tail > 1e-8 * max(scale, 1e-300) * u_max and tail > 1e-300:
        raise InversionError(f"branch-cut integrand does not decay at t = {t:g}")
    return value / math.pi


def invert_branchcut(F: TransformFunction, t, quad_tol: float = 1e-9):
    """Invert by integrating the jump of ``F`` across the negative real axis.

    ``f(t) = (1/pi) int_0^inf exp(-r t) Im F(r e^{-i pi}) dr``, evaluated with
    adaptive quadrature in ``u = log r`` separately on ``r < 1`` and ``r > 1``.
    Requires ``F.cut_value`` and ``F(p) = o(1/p)`` as ``p -> 0``.
    """
    if F.cut_value is None:
        raise InversionError("transform provides no boundary values on the branch cut")
    tt = _times(t)
    out = np.array([_branchcut_single(F, float(ti), quad_tol) for ti in np.atleast_1d(tt)])
    return _unwrap(out.reshape(np.shape(tt)), t)


def invert_residues(F: TransformFunction, t):
    """Exact inversion of a strictly proper rational transform by partial fractions."""
    if F.rational is None:
        raise InversionError("residue inversion needs a rational transform")
    num, den = F.rational
    res, poles, direct = signal.residue(num, den)
    if np.any(np.abs(direct) > 0):
        raise InversionError("rational transform is not strictly proper (its original has a delta part)")
    tt = _times(t)
    tv = np.atleast_1d(tt)
    out = np.zeros(tv.shape, dtype=complex)
    power = 0
    for i, (c, z) in enumerate(zip(res, poles)):
        power = power + 1 if i > 0 and abs(z - poles[i - 1]) <= 1e-3 * max(1.0, abs(z)) else 1
        out += c * tv ** (power - 1) / factorial(power - 1) * np.exp(z * tv)
    if np.any(np.abs(out.imag) > 1e-10 * np.maximum(np.abs(out.real), 1e-300)):
        raise InversionError("residue sum has a non-negligible imaginary part")
    return _unwrap(out.real.reshape(np.shape(tt)), t)


def invert_auto(F: TransformFunction, t, *, quad_tol: float = 1e-9, M: int = DEFAULT_TALBOT_NODES):
    """Invert with the method implied by ``F``'s metadata.

    Returns ``(value, method)`` where method is one of ``"residue"``,
    ``"branchcut"`` or ``"talbot"``. Branch-cut transforms without boundary
    values on the cut fall back to Talbot.
    """
    if F.kind == "meromorphic":
        if F.rational is not None and F.pole_count <= 4:
            return invert_residues(F, t), "residue"
        return invert_talbot(F, t, M), "talbot"
    if F.cut_value is not None:
        return invert_branchcut(F, t, quad_tol), "branchcut"
    return invert_talbot(F, t, M), "talbot"
