"""Impedance model of a two-electrode ion sensor.

The electrolyte/electrode system is a series resistance, two parallel RC
elements for the polymer electrodes, and a finite-length Warburg diffusion
element.  With x = (i omega / omega_D)^n the Warburg element is

    reflecting boundary:  Z = R_W coth(x) / x
    absorbing boundary:   Z = R_W tanh(x) / x

n = 1/2 is classical diffusion; smaller exponents describe anomalous
diffusion and replace both half-powers of the classical form.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
from scipy.optimize import least_squares
from scipy.special import cosdg, sindg

from .constants import K_B, N_A, Q_E
from .errors import ConfigError, DegenerateInputError, DomainError, FitError

_SERIES_RADIUS = 0.1
_ASYMPTOTE_RE = 20.0
_RW_STAR_OMEGA = (1e-3, 1e-4, 1e-5)  # extrapolation nodes, in units of omega_D


class DegeneracyWarning(UserWarning):
    """The fit Jacobian is numerically rank deficient."""


@dataclass(frozen=True)
class WarburgParams:
    r_w: float
    omega_d: float
    exponent: float = 0.5
    boundary: str = "reflecting"

    def __post_init__(self):
        if not self.r_w > 0:
            raise DomainError(f"r_w must be positive, got {self.r_w!r}")
        if not self.omega_d > 0:
            raise DomainError(f"omega_d must be positive, got {self.omega_d!r}")
        if not 0 < self.exponent <= 0.5:
            raise DomainError(f"exponent must lie in (0, 0.5], got {self.exponent!r}")
        if self.boundary not in ("reflecting", "absorbing"):
            raise DomainError(f"boundary must be 'reflecting' or 'absorbing', got {self.boundary!r}")


@dataclass(frozen=True)
class CircuitModel:
    r_s: float
    r1: float
    c1: float
    r2: float
    c2: float
    warburg: WarburgParams

    def __post_init__(self):
        if min(self.r_s, self.r1, self.r2) < 0:
            raise DomainError("resistances must be non-negative")
        if not (self.c1 > 0 and self.c2 > 0):
            raise DomainError("capacitances must be positive")


@dataclass(frozen=True)
class ImpedanceSpectrum:
    omega: np.ndarray
    z: np.ndarray
    weight: np.ndarray | None = None

    def __post_init__(self):
        omega = np.asarray(self.omega, dtype=float)
        z = np.asarray(self.z, dtype=complex)
        if omega.ndim != 1 or omega.shape != z.shape:
            raise DomainError("omega and z must be 1-D arrays of equal length")
        if omega.size == 0 or np.any(omega <= 0) or np.any(np.diff(omega) <= 0):
            raise DomainError("omegas must be positive and strictly increasing")
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "z", z)
        if self.weight is not None:
            w = np.asarray(self.weight, dtype=float)
            if w.shape != omega.shape or np.any(w < 0):
                raise DomainError("weights must be non-negative, one per sample")
            object.__setattr__(self, "weight", w)

    @classmethod
    def from_model(cls, model: CircuitModel, omega) -> "ImpedanceSpectrum":
        omega = np.asarray(omega, dtype=float)
        return cls(omega, circuit_impedance(model, omega))


def _x_coth_ratio(x, x2):
    """coth(x)/x for complex x with Re(x) > 0; ``x2`` is x^2 evaluated separately."""
    out = np.empty_like(x)
    small = np.abs(x) < _SERIES_RADIUS
    big = (x.real > _ASYMPTOTE_RE) & ~small
    mid = ~(small | big)
    x2 = x2[small]
    # Laurent series of coth(x)/x; truncation error below 1e-15 for |x| < 0.1
    out[small] = 1.0 / x2 + 1.0 / 3.0 - x2 / 45.0 + 2.0 * x2**2 / 945.0 - x2**3 / 4725.0
    out[big] = 1.0 / x[big]
    xm = x[mid]
    e = np.exp(-2.0 * xm)
    out[mid] = (1.0 + e) / (1.0 - e) / xm
    return out


def _x_tanh_ratio(x, x2):
    """tanh(x)/x for complex x with Re(x) > 0."""
    out = np.empty_like(x)
    small = np.abs(x) < _SERIES_RADIUS
    big = (x.real > _ASYMPTOTE_RE) & ~small
    mid = ~(small | big)
    x2 = x2[small]
    out[small] = 1.0 - x2 / 3.0 + 2.0 * x2**2 / 15.0 - 17.0 * x2**3 / 315.0 + 62.0 * x2**4 / 2835.0
    out[big] = 1.0 / x[big]
    xm = x[mid]
    e = np.exp(-2.0 * xm)
    out[mid] = (1.0 - e) / (1.0 + e) / xm
    return out


def _check_omega(omega):
    omega = np.asarray(omega, dtype=float)
    if np.any(~(omega > 0)):
        raise DomainError("angular frequency must be positive")
    return omega


def _warburg(r_w, omega_d, n, boundary, omega):
    # polar form with degree-based trig keeps x^2 purely imaginary at n = 1/2,
    # so the capacitive term adds no rounding noise to Re(Z)
    rho = np.atleast_1d(np.asarray(omega, dtype=float) / omega_d)
    x = rho**n * (cosdg(90.0 * n) + 1j * sindg(90.0 * n))
    x2 = rho ** (2 * n) * (cosdg(180.0 * n) + 1j * sindg(180.0 * n))
    ratio = _x_coth_ratio(x, x2) if boundary == "reflecting" else _x_tanh_ratio(x, x2)
    return r_w * ratio


def warburg_impedance(w: WarburgParams, omega):
    """Complex impedance of the finite-length Warburg element, in ohm."""
    omega = _check_omega(omega)
    out = _warburg(w.r_w, w.omega_d, w.exponent, w.boundary, omega)
    return complex(out[0]) if omega.ndim == 0 else out


def _rc(r, c, omega):
    return r / (1.0 + 1j * omega * r * c)


def circuit_impedance(m: CircuitModel, omega):
    """Series resistance + two RC elements + Warburg element."""
    omega = _check_omega(omega)
    z = m.r_s + _rc(m.r1, m.c1, omega) + _rc(m.r2, m.c2, omega) + warburg_impedance(m.warburg, omega)
    return complex(z) if np.ndim(z) == 0 else z


def extract_rw_star(fitted: CircuitModel | WarburgParams) -> float:
    """Equivalent diffusion resistance: low-frequency real-axis intercept of the Warburg arm.

    The capacitive divergence (i omega/omega_D)^(-2n) has a fixed phase -n pi,
    so Re(Z) + Im(Z) cot(n pi) removes it and the remainder is extrapolated to
    omega -> 0.  For n = 1/2 the correction vanishes and the result is R_W / 3.
    """
    w = fitted.warburg if isinstance(fitted, CircuitModel) else fitted
    if w.boundary == "absorbing":
        return w.r_w
    n = w.exponent
    nodes = np.array(_RW_STAR_OMEGA)
    z = warburg_impedance(w, w.omega_d * nodes)
    g = z.real + z.imag * (math.cos(math.pi * n) / math.sin(math.pi * n))
    # the remainder is a power series in (omega/omega_D)^(2n); fit and take the intercept
    coef = np.polyfit(nodes ** (2 * n), g, len(nodes) - 1)
    return float(coef[-1])


def diffusion_constant(omega_d: float, b: float) -> float:
    """D = omega_D b^2 in m^2/s for electrode separation ``b``."""
    if not b > 0:
        raise DomainError("b must be positive")
    if omega_d < 0:
        raise DomainError("omega_d must be non-negative")
    return omega_d * b * b


def characteristic_frequency(d: float, b: float) -> float:
    """omega_D = D / b^2."""
    if not b > 0:
        raise DomainError("b must be positive")
    return d / (b * b)


def diffusion_resistance(t: float, b: float, area: float, d: float, c: float) -> float:
    """R_W = k_B T b / (e^2 A D n) with n the ion number density of a ``c`` mol/l solution."""
    for name, val in (("t", t), ("b", b), ("area", area), ("d", d), ("c", c)):
        if not val > 0:
            raise DomainError(f"{name} must be positive, got {val!r}")
    n = c * 1e3 * N_A  # mol/l -> m^-3
    return K_B * t * b / (Q_E**2 * area * d * n)


# ----------------------------------------------------------------------------
# fitting

_FIELDS = ("r_s", "r1", "c1", "r2", "c2", "r_w", "omega_d", "exponent")


@dataclass(frozen=True)
class FitOptions:
    weighting: str = "modulus"  # "modulus" (1/|Z|) or "unit"
    fit_exponent: bool = False
    symmetric: bool = False  # tie rc2 to rc1
    max_iterations: int = 500  # cap on residual evaluations
    ftol: float = 1e-12
    xtol: float = 1e-12
    gtol: float = 1e-12
    rank_rcond: float = 1e-10

    def __post_init__(self):
        if self.weighting not in ("modulus", "unit"):
            raise ConfigError(f"unknown weighting {self.weighting!r}")
        if self.max_iterations < 1:
            raise ConfigError("max_iterations must be >= 1")


@dataclass
class FitResult:
    model: CircuitModel
    residual_norm: float
    covariance: np.ndarray
    parameter_names: list[str]
    iterations: int
    degenerate: bool = False
    fitted: np.ndarray = field(repr=False, default=None)

    def report(self) -> str:
        m = self.model
        w = m.warburg
        rows = [
            ("r_s_ohm", m.r_s), ("r1_ohm", m.r1), ("c1_f", m.c1), ("r2_ohm", m.r2), ("c2_f", m.c2),
            ("r_w_ohm", w.r_w), ("omega_d_rad_s", w.omega_d), ("exponent", w.exponent),
            ("r_w_star_ohm", extract_rw_star(m)), ("residual_norm", self.residual_norm),
        ]
        lines = [f"{k} = {v:.9g}" for k, v in rows]
        lines.append(f"iterations = {self.iterations}")
        lines.append(f"degenerate = {str(self.degenerate).lower()}")
        sd = np.sqrt(np.clip(np.diag(self.covariance), 0, None))
        for name, s in zip(self.parameter_names, sd):
            lines.append(f"rel_sd_{name} = {s:.3g}")
        return "\n".join(lines) + "\n"


def _as_vector(m: CircuitModel) -> dict[str, float]:
    w = m.warburg
    return dict(r_s=m.r_s, r1=m.r1, c1=m.c1, r2=m.r2, c2=m.c2, r_w=w.r_w, omega_d=w.omega_d, exponent=w.exponent)


def _free_names(guess: CircuitModel, opts: FitOptions) -> list[str]:
    vals = _as_vector(guess)
    names = []
    for k in _FIELDS:
        if k == "exponent" and not opts.fit_exponent:
            continue
        if opts.symmetric and k in ("r2", "c2"):
            continue
        if vals[k] == 0:
            continue  # a zero element stays zero in log space
        names.append(k)
    return names


def _unpack(u, names, base, opts):
    vals = dict(base)
    vals.update({k: math.exp(x) for k, x in zip(names, u)})
    if opts.symmetric:
        vals["r2"], vals["c2"] = vals["r1"], vals["c1"]
    return vals


def _model_z(vals, boundary, omega):
    z = vals["r_s"] + _rc(vals["r1"], vals["c1"], omega) + _rc(vals["r2"], vals["c2"], omega)
    return z + _warburg(vals["r_w"], vals["omega_d"], vals["exponent"], boundary, omega)


def _to_model(vals, boundary) -> CircuitModel:
    return CircuitModel(
        r_s=vals["r_s"], r1=vals["r1"], c1=vals["c1"], r2=vals["r2"], c2=vals["c2"],
        warburg=WarburgParams(vals["r_w"], vals["omega_d"], vals["exponent"], boundary),
    )


def fit_spectrum(spec: ImpedanceSpectrum, guess: CircuitModel, options: FitOptions | None = None) -> FitResult:
    """Complex nonlinear least-squares fit of the equivalent circuit.

    Positive parameters are optimized in log space with a trust-region
    Levenberg-Marquardt-type solver.  The residual stacks real and imaginary
    parts, weighted by 1/|Z_data| by default.  ``covariance`` is
    s^2 (J^T J)^-1 in log parameters, i.e. relative variances.
    """
    opts = options or FitOptions()
    if opts.symmetric and (guess.r1 == 0) != (guess.r2 == 0):
        raise ConfigError("symmetric fit needs both RC elements present or both absent")
    boundary = guess.warburg.boundary
    base = _as_vector(guess)
    names = _free_names(guess, opts)
    if spec.omega.size * 2 < len(names):
        raise DegenerateInputError(f"{spec.omega.size} samples cannot determine {len(names)} parameters")
    w = np.ones_like(spec.omega)
    if opts.weighting == "modulus":
        w = w / np.abs(spec.z)
    if spec.weight is not None:
        w = w * spec.weight

    def resid(u):
        vals = _unpack(u, names, base, opts)
        if opts.fit_exponent:
            vals["exponent"] = min(vals["exponent"], 0.5)
        d = (_model_z(vals, boundary, spec.omega) - spec.z) * w
        return np.concatenate([d.real, d.imag])

    u0 = np.log([base[k] for k in names])
    res = least_squares(
        resid, u0, method="trf", x_scale=1.0, ftol=opts.ftol, xtol=opts.xtol, gtol=opts.gtol,
        max_nfev=opts.max_iterations,
    )
    vals = _unpack(res.x, names, base, opts)
    if opts.fit_exponent and vals["exponent"] > 0.5:
        vals["exponent"] = 0.5
    model = _to_model(vals, boundary)
    r = resid(res.x)
    norm = float(np.linalg.norm(r))
    if res.status == 0:
        raise FitError(
            f"fit did not converge within {opts.max_iterations} iterations",
            best=model, residual=norm, iterations=int(res.njev or 0),
        )
    jac = res.jac
    sv = np.linalg.svd(jac, compute_uv=False)
    degenerate = bool(sv[-1] <= opts.rank_rcond * sv[0])
    if degenerate:
        warnings.warn("fit Jacobian is rank deficient; parameters are not all identifiable", DegeneracyWarning,
                      stacklevel=2)
    dof = max(r.size - len(names), 1)
    s2 = norm**2 / dof
    cov = s2 * np.linalg.pinv(jac.T @ jac)
    return FitResult(model, norm, cov, names, int(res.njev or 0), degenerate, _model_z(vals, boundary, spec.omega))


# ----------------------------------------------------------------------------
# ion classification


@dataclass(frozen=True)
class CalibrationCurve:
    concentration: np.ndarray  # mol/l, strictly increasing
    v_to: np.ndarray  # V
    r_w_star: np.ndarray  # ohm

    def __post_init__(self):
        c = np.asarray(self.concentration, dtype=float)
        v = np.asarray(self.v_to, dtype=float)
        r = np.asarray(self.r_w_star, dtype=float)
        if not (c.shape == v.shape == r.shape and c.ndim == 1):
            raise ConfigError("calibration columns must be 1-D and of equal length")
        if c.size < 2:
            raise ConfigError("each calibration curve needs at least two concentrations")
        if np.any(c <= 0) or np.any(r <= 0):
            raise ConfigError("concentrations and r_w_star must be positive")
        if np.any(np.diff(c) <= 0):
            raise ConfigError("concentrations must be strictly increasing")
        dv, dr = np.diff(v), np.diff(r)
        if not (np.all(dv > 0) or np.all(dv < 0)) or not (np.all(dr > 0) or np.all(dr < 0)):
            raise ConfigError("calibration curve must be strictly monotone in concentration")
        object.__setattr__(self, "concentration", c)
        object.__setattr__(self, "v_to", v)
        object.__setattr__(self, "r_w_star", r)


@dataclass(frozen=True)
class SensorCalibration:
    curves: Mapping[str, CalibrationCurve]
    v_scale: float = 0.1  # V per unit distance, against one decade of r_w_star

    def __post_init__(self):
        if len(self.curves) < 2:
            raise ConfigError("calibration needs at least two species")
        if not self.v_scale > 0:
            raise ConfigError("v_scale must be positive")


@dataclass(frozen=True)
class Classification:
    species: str
    concentration: float
    confidence: float
    distance: float


def _project(points: np.ndarray, q: np.ndarray) -> tuple[float, int, float]:
    """Distance from q to a polyline, with the segment index and local parameter."""
    a, b = points[:-1], points[1:]
    ab = b - a
    t = np.einsum("ij,ij->i", q - a, ab) / np.einsum("ij,ij->i", ab, ab)
    t = np.clip(t, 0.0, 1.0)
    d = np.linalg.norm(a + t[:, None] * ab - q, axis=1)
    k = int(np.argmin(d))
    return float(d[k]), k, float(t[k])


def classify_ion(v_to: float, r_w_star: float, calib: SensorCalibration | Mapping | None) -> Classification:
    """Nearest calibration curve in (v_to / v_scale, log10 r_w_star) space.

    The concentration is interpolated geometrically along the winning curve.
    Confidence is (d2 - d1) / (d2 + d1) with d1, d2 the distances to the
    nearest and runner-up curves; 1 means unambiguous, 0 a tie.
    """
    if calib is None or (isinstance(calib, Mapping) and not calib):
        raise ConfigError("calibration is empty")
    if not isinstance(calib, SensorCalibration):
        calib = SensorCalibration(dict(calib))
    if not r_w_star > 0:
        raise DomainError("r_w_star must be positive")
    q = np.array([v_to / calib.v_scale, math.log10(r_w_star)])
    hits = []
    for name, cur in calib.curves.items():
        pts = np.column_stack([cur.v_to / calib.v_scale, np.log10(cur.r_w_star)])
        d, k, t = _project(pts, q)
        lc = np.log(cur.concentration)
        hits.append((d, name, math.exp(lc[k] + t * (lc[k + 1] - lc[k]))))
    hits.sort(key=lambda h: h[0])
    (d1, name, conc), (d2, _, _) = hits[0], hits[1]
    conf = 0.0 if d1 + d2 == 0 else (d2 - d1) / (d2 + d1)
    return Classification(name, conc, conf, d1)


def parse_model(values: Mapping[str, float], boundary: str = "reflecting") -> CircuitModel:
    """Build a CircuitModel from a flat mapping (missing RC elements default to absent)."""
    try:
        return CircuitModel(
            r_s=float(values.get("r_s", 0.0)),
            r1=float(values.get("r1", 0.0)),
            c1=float(values.get("c1", 1.0)),
            r2=float(values.get("r2", 0.0)),
            c2=float(values.get("c2", 1.0)),
            warburg=WarburgParams(
                float(values["r_w"]), float(values["omega_d"]), float(values.get("exponent", 0.5)), boundary
            ),
        )
    except KeyError as exc:
        raise ConfigError(f"missing model parameter {exc.args[0]!r}") from None


__all__ = [
    "CalibrationCurve", "CircuitModel", "Classification", "DegeneracyWarning", "FitOptions", "FitResult",
    "ImpedanceSpectrum", "SensorCalibration", "WarburgParams", "characteristic_frequency", "circuit_impedance",
    "classify_ion", "diffusion_constant", "diffusion_resistance", "extract_rw_star", "fit_spectrum",
    "parse_model", "warburg_impedance",
]
