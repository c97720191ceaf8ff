"""Time-dependent frequency perturbations and their spectral transforms.

A drive profile specifies ``epsilon(t)`` in ``omega^2(t) = omega0^2 +
epsilon(t)``.  Profiles vanish identically outside their window, are
immutable, hashable, and cheap to evaluate.  Transforms use the
``exp(-i nu t)`` sign convention (see :mod:`magnusosc.conventions`) and are
computed from exact closed forms; an adaptive-quadrature reference path is
kept for cross-validation.
"""

from __future__ import annotations

import csv as _csv
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence
import warnings

import numpy as np
from scipy.special import wofz

from .errors import InvalidProfileError
from .quadrature import DEFAULT_REL_TOL, adaptive_quadrature

_SQRT_PI = math.sqrt(math.pi)
ZERO_MEAN_TOL = 1e-9


@dataclass(frozen=True)
class FourierValue:
    """A single spectral sample: ``value = int f(t) exp(-i frequency t) dt``."""

    frequency: float
    value: complex


@dataclass(frozen=True)
class _DriveData:
    """Kernel-facing drive representation.

    ``comps`` rows are ``(amp, omega_c, phase, center, tau)`` meaning
    ``amp * cos(omega_c t + phase) * exp(-((t-center)/tau)^2)`` with
    ``tau <= 0`` switching the envelope off.  Tabulated drives carry knot
    positions and per-segment cubic coefficients (highest power first, in
    the local variable ``t - knot``).  ``t_lo``/``t_hi`` is the support:
    window intersected with the knot range for tabulated drives.
    """

    comps: tuple[tuple[float, float, float, float, float], ...]
    tab_x: tuple[float, ...]
    tab_c: tuple[tuple[float, ...], ...]
    t_lo: float
    t_hi: float

    @cached_property
    def comp_array(self) -> np.ndarray:
        return np.array(self.comps, dtype=float).reshape(-1, 5)

    @cached_property
    def tab_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        x = np.array(self.tab_x, dtype=float)
        c = np.array(self.tab_c, dtype=float).reshape(4, -1) if self.tab_x else np.zeros((4, 0))
        return x, c

    def with_gaussian_bump(self, area: float, center: float, width: float) -> "_DriveData":
        """Add a normalised Gaussian of the given area (std ``width``)."""
        amp = area / (width * math.sqrt(2.0 * math.pi))
        bump = (amp, 0.0, 0.0, center, width * math.sqrt(2.0))
        return _DriveData(self.comps + (bump,), self.tab_x, self.tab_c,
                          min(self.t_lo, center - 8 * width),
                          max(self.t_hi, center + 8 * width))

    # --- evaluation ------------------------------------------------------

    def epsilon(self, t):
        """Vectorised epsilon(t); exactly zero outside the support."""
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape, dtype=float)
        inside = (t >= self.t_lo) & (t <= self.t_hi)
        if not inside.any():
            return out if out.shape else float(out)
        ti = t[inside]
        acc = np.zeros(ti.shape, dtype=float)
        for amp, wc, ph, c, tau in self.comps:
            v = amp * np.cos(wc * ti + ph) if (wc != 0.0 or ph != 0.0) else np.full(ti.shape, amp)
            if tau > 0.0:
                v = v * np.exp(-(((ti - c) / tau) ** 2))
            acc += v
        if self.tab_x:
            x, c = self.tab_arrays
            mask = (ti >= x[0]) & (ti <= x[-1])
            if mask.any():
                tt = ti[mask]
                seg = np.clip(np.searchsorted(x, tt, side="right") - 1, 0, len(x) - 2)
                s = tt - x[seg]
                acc[mask] += ((c[0, seg] * s + c[1, seg]) * s + c[2, seg]) * s + c[3, seg]
        out[inside] = acc
        return out if out.shape else float(out)

    # --- closed-form transform -------------------------------------------

    def transform(self, nu: float, hi: float | None = None) -> complex:
        """Exact ``int_{t_lo}^{min(hi, t_hi)} epsilon(t) exp(-i nu t) dt``.

        For tabulated data only knots at or below ``hi`` are ever touched,
        so the result is bit-identical under modification of later knots.
        """
        lo = self.t_lo
        hi = self.t_hi if hi is None else min(hi, self.t_hi)
        if hi <= lo:
            return 0.0 + 0.0j
        total = 0.0 + 0.0j
        for amp, wc, ph, c, tau in self.comps:
            for sign in (1.0, -1.0):
                coef = 0.5 * amp * np.exp(1j * sign * ph)
                k = sign * wc - nu
                if tau > 0.0:
                    total += coef * _gauss_window_integral(c, tau, k, lo, hi)
                else:
                    total += coef * _phase_integral(k, lo, hi)
        if self.tab_x:
            total += _tabulated_transform(*self.tab_arrays, nu, lo, hi)
        return complex(total)

    def bandwidth(self) -> float:
        """Largest angular frequency present in epsilon(t)."""
        bw = 0.0
        for _, wc, _, _, tau in self.comps:
            bw = max(bw, abs(wc) + (6.0 / tau if tau > 0.0 else 0.0))
        if self.tab_x:
            x, _ = self.tab_arrays
            dx = np.diff(x)
            if len(dx):
                bw = max(bw, math.pi / max(dx.min(), 1e-12))
        return bw

    def fine_regions(self) -> list[tuple[float, float, float]]:
        """(lo, hi, max step) spans where the integrator must not overstep."""
        regions = []
        for _, _, _, c, tau in self.comps:
            if 0.0 < tau < 0.5:
                regions.append((c - 8.0 * tau, c + 8.0 * tau, tau / 2.0))
        return regions


def _phase_integral(k: float, lo: float, hi: float) -> complex:
    """``int_lo^hi exp(i k t) dt`` with a stable small-|k| limit."""
    delta = hi - lo
    x = k * delta
    if abs(x) < 1e-8:
        ratio = 1.0 + 1j * x / 2.0 - x * x / 6.0 - 1j * x ** 3 / 24.0
    else:
        ratio = (np.exp(1j * x) - 1.0) / (1j * x)
    return np.exp(1j * k * lo) * delta * ratio


def _gauss_window_integral(c: float, tau: float, k: float, lo: float, hi: float) -> complex:
    """``int_lo^hi exp(-((t-c)/tau)^2) exp(i k t) dt`` via the Faddeeva function.

    Stable for arbitrarily large ``|k| tau`` (no exp(+x^2) intermediates).
    """
    a = (lo - c) / tau
    b = (hi - c) / tau
    q = -k * tau

    def endpoint(x):
        # exp(-q^2/4) * erfc(x + i q/2), evaluated without overflow
        return np.exp(-x * x - 1j * q * x) * wofz(-q / 2.0 + 1j * x)

    return tau * np.exp(1j * k * c) * 0.5 * _SQRT_PI * (endpoint(a) - endpoint(b))


def _osc_monomial_integrals(delta: np.ndarray, nu: float) -> np.ndarray:
    """``G_m(d) = int_0^d s^m exp(-i nu s) ds`` for m = 0..3, vectorised."""
    delta = np.asarray(delta, dtype=float)
    G = np.zeros((4,) + delta.shape, dtype=complex)
    if nu == 0.0:
        for m in range(4):
            G[m] = delta ** (m + 1) / (m + 1)
        return G
    x = nu * delta
    small = np.abs(x) < 0.5
    if small.any():
        d = delta[small]
        for m in range(4):
            term = (d ** (m + 1) / (m + 1)).astype(complex)
            acc = term.copy()
            for j in range(1, 40):
                term = term * (-1j * nu) * d * (m + j) / (j * (m + j + 1))
                acc += term
                if np.all(np.abs(term) <= 1e-18 * (np.abs(acc) + 1e-300)):
                    break
            G[m][small] = acc
    big = ~small
    if big.any():
        d = delta[big]
        e = np.exp(-1j * nu * d)
        inv = 1.0 / (1j * nu)
        g = (1.0 - e) * inv
        G[0][big] = g
        for m in range(1, 4):
            g = (m * g - d ** m * e) * inv
            G[m][big] = g
    return G


def _tabulated_transform(x: np.ndarray, c: np.ndarray, nu: float,
                         lo: float, hi: float) -> complex:
    """Exact transform of the piecewise-cubic interpolant over [lo, hi].

    Segments are visited in ascending order and the loop stops at ``hi``,
    so knots beyond ``hi`` are never read.
    """
    lo = max(lo, x[0])
    hi = min(hi, x[-1])
    if hi <= lo:
        return 0.0 + 0.0j
    i0 = int(np.clip(np.searchsorted(x, lo, side="right") - 1, 0, len(x) - 2))
    i1 = int(np.clip(np.searchsorted(x, hi, side="left") - 1, 0, len(x) - 2))
    segs = np.arange(i0, i1 + 1)
    s_lo = np.maximum(lo - x[segs], 0.0)
    s_hi = np.minimum(hi, x[segs + 1]) - x[segs]
    G_hi = _osc_monomial_integrals(s_hi, nu)
    G_lo = _osc_monomial_integrals(s_lo, nu)
    total = 0.0 + 0.0j
    phases = np.exp(-1j * nu * x[segs])
    for m in range(4):
        total += np.sum(phases * c[3 - m, segs] * (G_hi[m] - G_lo[m]))
    return complex(total)


# --------------------------------------------------------------------------
# profile classes
# --------------------------------------------------------------------------

@dataclass(frozen=True, kw_only=True)
class DriveProfile:
    """Base profile: reference frequency, support window, zero-mean flag.

    ``zero_mean`` is advisory: flagging a profile whose windowed mean is
    not numerically small produces a warning, never an error.
    """

    omega0: float
    window: tuple[float, float]
    zero_mean: bool = False

    def __post_init__(self):
        t_min, t_max = self.window
        if not (self.omega0 > 0.0 and math.isfinite(self.omega0)):
            raise InvalidProfileError(f"omega0 must be positive and finite, got {self.omega0}")
        if not (math.isfinite(t_min) and math.isfinite(t_max) and t_min < t_max):
            raise InvalidProfileError(f"window must be finite with t_min < t_max, got {self.window}")
        if self.peak_epsilon() >= self.omega0 ** 2:
            raise InvalidProfileError(
                f"sup|epsilon| = {self.peak_epsilon():g} must stay below "
                f"omega0^2 = {self.omega0 ** 2:g} so that omega^2(t) > 0")
        if self.zero_mean:
            mean = abs(self.drive_data.transform(0.0))
            scale = max(1.0, self.peak_epsilon() * (t_max - t_min))
            if mean > ZERO_MEAN_TOL * scale:
                warnings.warn(
                    f"profile flagged zero_mean but int epsilon dt = {mean:.3e}",
                    stacklevel=3)

    # subclasses provide peak_epsilon() and _build_data()

    @cached_property
    def drive_data(self) -> _DriveData:
        return self._build_data()

    def epsilon(self, t):
        """epsilon(t), vectorised, exactly zero outside the window."""
        return self.drive_data.epsilon(t)

    def eta(self, t):
        """eta(t) = epsilon(t) / (2 omega0)."""
        return self.epsilon(t) / (2.0 * self.omega0)

    def peak_epsilon(self) -> float:
        raise NotImplementedError

    def _build_data(self) -> _DriveData:
        raise NotImplementedError

    @property
    def duration(self) -> float:
        return self.window[1] - self.window[0]


@dataclass(frozen=True, kw_only=True)
class HarmonicDrive(DriveProfile):
    """``epsilon(t) = epsilon0 cos(drive_freq t + phase)`` inside the window."""

    epsilon0: float
    drive_freq: float
    phase: float = 0.0

    def peak_epsilon(self) -> float:
        return abs(self.epsilon0)

    def _build_data(self) -> _DriveData:
        comp = (self.epsilon0, self.drive_freq, self.phase, 0.0, 0.0)
        return _DriveData((comp,), (), (), self.window[0], self.window[1])


@dataclass(frozen=True, kw_only=True)
class EnvelopedHarmonicDrive(DriveProfile):
    """Harmonic drive under a Gaussian envelope centred on the window.

    ``epsilon(t) = epsilon0 exp(-((t-tc)/envelope_width)^2) cos(drive_freq (t-tc))``
    with ``tc`` the window midpoint, so the profile is even about the centre.
    """

    epsilon0: float
    drive_freq: float
    envelope_width: float

    def __post_init__(self):
        if not self.envelope_width > 0.0:
            raise InvalidProfileError("envelope_width must be positive")
        super().__post_init__()

    def peak_epsilon(self) -> float:
        return abs(self.epsilon0)

    def _build_data(self) -> _DriveData:
        tc = 0.5 * (self.window[0] + self.window[1])
        comp = (self.epsilon0, self.drive_freq, -self.drive_freq * tc,
                tc, self.envelope_width)
        return _DriveData((comp,), (), (), self.window[0], self.window[1])


@dataclass(frozen=True, kw_only=True)
class GaussianPulseDrive(DriveProfile):
    """``epsilon(t) = epsilon0 exp(-((t - center)/width)^2)`` inside the window."""

    epsilon0: float
    center: float = 0.0
    width: float = 1.0

    def __post_init__(self):
        if not self.width > 0.0:
            raise InvalidProfileError("width must be positive")
        super().__post_init__()

    def peak_epsilon(self) -> float:
        return abs(self.epsilon0)

    def _build_data(self) -> _DriveData:
        comp = (self.epsilon0, 0.0, 0.0, self.center, self.width)
        return _DriveData((comp,), (), (), self.window[0], self.window[1])


@dataclass(frozen=True, kw_only=True)
class TabulatedDrive(DriveProfile):
    """Sampled ``epsilon`` with monotone-cubic (default) or linear interpolation.

    The interpolant is supported on the knot range intersected with the
    window and is exactly zero elsewhere.  Monotone cubic (PCHIP) never
    overshoots the sample range, which keeps ``omega^2(t) > 0`` whenever the
    samples satisfy the amplitude bound.
    """

    samples: tuple[tuple[float, float], ...]
    interpolation: str = "pchip"

    def __post_init__(self):
        if len(self.samples) < 2:
            raise InvalidProfileError("tabulated profile needs at least 2 samples")
        times = [s[0] for s in self.samples]
        if any(b <= a for a, b in zip(times[:-1], times[1:])):
            raise InvalidProfileError("sample times must be strictly increasing")
        if self.interpolation not in ("pchip", "linear"):
            raise InvalidProfileError(
                f"interpolation must be 'pchip' or 'linear', got {self.interpolation!r}")
        super().__post_init__()

    @classmethod
    def from_csv(cls, path, *, omega0: float, window: tuple[float, float],
                 interpolation: str = "pchip", zero_mean: bool = False) -> "TabulatedDrive":
        """Load (time, epsilon) rows from a two-column CSV, header optional."""
        rows = []
        with open(path, newline="", encoding="utf-8") as fh:
            for record in _csv.reader(fh):
                if not record or not record[0].strip():
                    continue
                try:
                    rows.append((float(record[0]), float(record[1])))
                except ValueError:
                    if rows:
                        raise InvalidProfileError(
                            f"non-numeric row {record!r} in {path}")
                    continue  # header line
        return cls(omega0=omega0, window=window, samples=tuple(rows),
                   interpolation=interpolation, zero_mean=zero_mean)

    def peak_epsilon(self) -> float:
        return max(abs(v) for _, v in self.samples)

    def _build_data(self) -> _DriveData:
        x = np.array([s[0] for s in self.samples], dtype=float)
        y = np.array([s[1] for s in self.samples], dtype=float)
        if self.interpolation == "pchip" and len(x) > 2:
            from scipy.interpolate import PchipInterpolator
            coeff = PchipInterpolator(x, y).c
        else:
            slope = np.diff(y) / np.diff(x)
            coeff = np.zeros((4, len(x) - 1))
            coeff[2] = slope
            coeff[3] = y[:-1]
        lo = max(self.window[0], float(x[0]))
        hi = min(self.window[1], float(x[-1]))
        if hi <= lo:
            raise InvalidProfileError("sample range does not intersect the window")
        return _DriveData((), tuple(map(float, x)),
                          tuple(tuple(map(float, row)) for row in coeff), lo, hi)


# --------------------------------------------------------------------------
# operations
# --------------------------------------------------------------------------

def eval_epsilon(profile: DriveProfile, t):
    """epsilon(t) for a profile; exactly zero outside the window."""
    return profile.epsilon(t)


def fourier(profile: DriveProfile, nu: float, *, method: str = "closed",
            rel_tol: float = DEFAULT_REL_TOL) -> FourierValue:
    """``epsilon_tilde(nu) = int epsilon(t) exp(-i nu t) dt`` over the window.

    ``method='closed'`` (default) uses the exact per-kind closed forms;
    ``method='quadrature'`` runs the adaptive oscillation-aware engine and
    exists mainly to cross-validate the closed forms.
    """
    if method == "closed":
        return FourierValue(nu, profile.drive_data.transform(nu))
    if method != "quadrature":
        raise ValueError(f"unknown method {method!r}")
    data = profile.drive_data
    f_max = max(abs(nu), data.bandwidth(), 2.0 * math.pi / data.t_hi_span
                if False else 0.0, 1e-3)
    width = (2.0 * math.pi / f_max) / 8.0
    breakpoints = [c for _, _, _, c, tau in data.comps if tau > 0.0]
    breakpoints += list(data.tab_x)
    value, _ = adaptive_quadrature(
        lambda t: data.epsilon(t) * np.exp(-1j * nu * t),
        data.t_lo, data.t_hi, rel_tol=rel_tol,
        abs_tol=1e-16 * max(1.0, profile.peak_epsilon() * profile.duration),
        max_panel_width=width, breakpoints=breakpoints)
    return FourierValue(nu, value)


def retarded_fourier(profile: DriveProfile, nu: float, t: float, *,
                     method: str = "closed",
                     rel_tol: float = DEFAULT_REL_TOL) -> FourierValue:
    """Retarded transform ``int_{t_min}^{t} eta(tau) exp(-i nu tau) dtau``.

    Note the integrand is eta = epsilon / (2 omega0); for ``t >= t_max``
    this equals ``fourier(profile, nu) / (2 omega0)``.  Only drive history
    at or before ``t`` is read, so the value is invariant - bit for bit -
    under modification of the drive after ``t``.
    """
    scale = 1.0 / (2.0 * profile.omega0)
    if t <= profile.window[0]:
        return FourierValue(nu, 0.0 + 0.0j)
    if method == "closed":
        return FourierValue(nu, scale * profile.drive_data.transform(nu, hi=t))
    if method != "quadrature":
        raise ValueError(f"unknown method {method!r}")
    data = profile.drive_data
    hi = min(t, data.t_hi)
    if hi <= data.t_lo:
        return FourierValue(nu, 0.0 + 0.0j)
    f_max = max(abs(nu), data.bandwidth(), 1e-3)
    width = (2.0 * math.pi / f_max) / 8.0
    breakpoints = [c for _, _, _, c, tau in data.comps if tau > 0.0]
    breakpoints += [x for x in data.tab_x if x < hi]
    value, _ = adaptive_quadrature(
        lambda tt: data.epsilon(tt) * np.exp(-1j * nu * tt),
        data.t_lo, hi, rel_tol=rel_tol,
        abs_tol=1e-16 * max(1.0, profile.peak_epsilon() * profile.duration),
        max_panel_width=width, breakpoints=breakpoints)
    return FourierValue(nu, scale * value)


def eta_fourier(profile: DriveProfile, nu: float) -> complex:
    """``eta_tilde(nu) = epsilon_tilde(nu) / (2 omega0)`` (full window)."""
    return profile.drive_data.transform(nu) / (2.0 * profile.omega0)
