"""Covariant differentiation along curves, Frenet data, and curve classes.

A curve in the quotient is handled through phase-coherent horizontal lifts
sampled on a uniform grid; an exact lift evaluator is attached when the
curve comes from a closed form. Covariant derivatives go through the
ambient derivative, the sphere-tangential split and the horizontal
projection, which realizes the quotient connection on lifts.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import FrameError, LiftError, SamplingError, SpeedError
from .linalg import (
    LIGHT_TOL,
    Signature,
    as_ambient,
    gdot_rows,
    hermitian_product,
    jmul,
    real_metric,
)

#: horizontality / unit-speed defect accepted on sampled curves
CURVE_TOL = 1e-6
#: rows lost to less accurate one-sided stencils per differentiation stage
EDGE_MARGIN = 4


class CurveClass(Enum):
    GEODESIC = "geodesic"
    TOTALLY_REAL_CIRCLE = "totally_real_circle"
    CASE_C_NON_FRENET = "case_c_non_frenet"
    OTHER = "other"


# ---------------------------------------------------------------------------
# finite difference stencils on uniformly sampled rows
# ---------------------------------------------------------------------------


def deriv_rows(y: np.ndarray, h: float) -> np.ndarray:
    """First derivative of uniformly sampled rows.

    Five-point central stencils in the interior, three-point near the edges,
    one-sided second order at the endpoints.
    """
    m = y.shape[0]
    if m < 3:
        raise SamplingError("need at least 3 samples to differentiate")
    d = np.empty_like(y)
    d[0] = (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * h)
    d[-1] = (3.0 * y[-1] - 4.0 * y[-2] + y[-3]) / (2.0 * h)
    if m >= 5:
        d[1] = (y[2] - y[0]) / (2.0 * h)
        d[-2] = (y[-1] - y[-3]) / (2.0 * h)
        d[2:-2] = (-y[4:] + 8.0 * y[3:-1] - 8.0 * y[1:-3] + y[:-4]) / (12.0 * h)
    else:
        d[1:-1] = (y[2:] - y[:-2]) / (2.0 * h)
    return d


def fd_derivative(fn: Callable[[float], np.ndarray], s: float, h: float = 1e-3):
    """Five-point first derivative of a smooth vector-valued callable."""
    return (
        -fn(s + 2 * h) + 8.0 * fn(s + h) - 8.0 * fn(s - h) + fn(s - 2 * h)
    ) / (12.0 * h)


def fd_second_derivative(fn: Callable[[float], np.ndarray], s: float, h: float = 1e-3):
    """Five-point second derivative of a smooth vector-valued callable."""
    return (
        -fn(s + 2 * h)
        + 16.0 * fn(s + h)
        - 30.0 * fn(s)
        + 16.0 * fn(s - h)
        - fn(s - 2 * h)
    ) / (12.0 * h * h)


# ---------------------------------------------------------------------------
# sampled curves
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SampledCurve:
    """Uniformly sampled curve held by phase-coherent horizontal lifts."""

    sig: Signature
    params: np.ndarray
    lifts: np.ndarray
    step: float
    lift_fn: Optional[Callable[[float], np.ndarray]] = None

    def __post_init__(self):
        params = np.asarray(self.params, dtype=float)
        lifts = np.asarray(self.lifts, dtype=complex)
        if lifts.shape != (params.shape[0], self.sig.ambient_dim):
            raise SamplingError("lift array does not match params and signature")
        params.setflags(write=False)
        lifts.setflags(write=False)
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "lifts", lifts)

    def __len__(self) -> int:
        return self.params.shape[0]

    @cached_property
    def velocity(self) -> np.ndarray:
        """Per-sample horizontal velocity vectors (sphere tangential part)."""
        signs = self.sig.signs
        v = deriv_rows(self.lifts, self.step)
        v = v - gdot_rows(signs, v, self.lifts)[:, None] * self.lifts
        fiber = 1j * self.lifts
        return v - gdot_rows(signs, v, fiber)[:, None] * fiber

    @cached_property
    def eps1(self) -> float:
        g = gdot_rows(self.sig.signs, self.velocity, self.velocity)
        return 1.0 if float(np.median(g)) > 0 else -1.0

    def speed_defect(self) -> float:
        g = gdot_rows(self.sig.signs, self.velocity, self.velocity)
        core = _interior(g, 1)
        return float(np.max(np.abs(core - self.eps1)))

    def horizontality_defect(self) -> float:
        fiber = 1j * self.lifts
        d = gdot_rows(self.sig.signs, deriv_rows(self.lifts, self.step), fiber)
        return float(np.max(np.abs(_interior(d, 1))))

    def reversed(self) -> "SampledCurve":
        fn = self.lift_fn
        rev_fn = (lambda s, _f=fn: _f(-s)) if fn is not None else None
        return SampledCurve(
            self.sig, -self.params[::-1], self.lifts[::-1], self.step, rev_fn
        )


def sampled_curve_from_fn(
    sig: Signature,
    fn: Callable[[float], np.ndarray],
    s_min: float,
    s_max: float,
    step: float,
) -> SampledCurve:
    count = int(round((s_max - s_min) / step)) + 1
    params = s_min + step * np.arange(count)
    lifts = np.array([fn(s) for s in params], dtype=complex)
    return SampledCurve(sig, params, lifts, step, fn)


def _interior(rows: np.ndarray, stages: int) -> np.ndarray:
    m = EDGE_MARGIN * stages
    if rows.shape[0] <= 2 * m + 1:
        return rows
    return rows[m:-m]


def covariant_derivative(curve: SampledCurve, field_rows: np.ndarray) -> np.ndarray:
    """Quotient covariant derivative of a horizontal field along the curve.

    Central differences of the lifted field, then the sphere-tangential part,
    then the horizontal projection. Endpoint rows use one-sided stencils and
    are second order only.
    """
    if len(curve) < 3:
        raise SamplingError("need at least 3 samples")
    rows = np.asarray(field_rows, dtype=complex)
    if rows.shape != curve.lifts.shape:
        raise SamplingError("field shape does not match the curve")
    signs = curve.sig.signs
    d = deriv_rows(rows, curve.step)
    d = d - gdot_rows(signs, d, curve.lifts)[:, None] * curve.lifts
    fiber = 1j * curve.lifts
    return d - gdot_rows(signs, d, fiber)[:, None] * fiber


# ---------------------------------------------------------------------------
# Frenet apparatus
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FrenetResult:
    """Frame fields, curvature functions, signs and a classification tag."""

    order: int
    frames: list
    curvatures: list
    signs: list
    classification: CurveClass
    detail: dict


def frenet_apparatus(
    curve: SampledCurve,
    max_order: Optional[int] = None,
    tol: float = 1e-5,
) -> FrenetResult:
    """Iteratively build the orthonormal frame fields along a unit curve.

    Each stage differentiates the last frame field, removes the back term,
    and normalizes the remainder into the next frame vector. Iteration stops
    at a vanishing remainder (the order is reached) or at a lightlike one,
    which is the non-Frenet case when the remainder is parallel.
    """
    if max_order is None:
        max_order = 2 * curve.sig.n
    defect = curve.speed_defect()
    if defect > CURVE_TOL:
        raise SpeedError(f"unit speed defect {defect:.3e} exceeds {CURVE_TOL:.1e}")
    signs_vec = curve.sig.signs
    eps1 = curve.eps1
    g1 = gdot_rows(signs_vec, curve.velocity, curve.velocity)
    e1 = curve.velocity / np.sqrt(np.abs(g1))[:, None]
    frames = [e1]
    curv: list = []
    eps = [eps1]

    stage = 1
    while True:
        d = covariant_derivative(curve, frames[-1])
        if len(curv) >= 1:
            d = d + eps[-2] * curv[-1][:, None] * frames[-2]
        stage += 1
        core = _interior(d, stage)
        rnorm = float(np.max(np.sqrt(np.sum(np.abs(core) ** 2, axis=-1))))
        if rnorm <= tol:
            order = len(frames)
            if order == 1:
                cls = CurveClass.GEODESIC
            elif order == 2:
                cls = _maybe_circle(curve, frames, curv, stage)
            else:
                cls = CurveClass.OTHER
            return FrenetResult(order, frames, curv, eps, cls, {"residual": rnorm})
        g = gdot_rows(signs_vec, d, d)
        gcore = _interior(g, stage)
        ecore = np.sum(np.abs(core) ** 2, axis=-1)
        if np.all(np.abs(gcore) <= LIGHT_TOL * ecore):
            if len(frames) == 1:
                dd = covariant_derivative(curve, d)
                par = float(
                    np.max(np.sqrt(np.sum(np.abs(_interior(dd, stage + 1)) ** 2, axis=-1)))
                )
                cls = (
                    CurveClass.CASE_C_NON_FRENET if par <= 10 * tol else CurveClass.OTHER
                )
                return FrenetResult(
                    1, frames, curv, eps, cls, {"lightlike_parallel_defect": par}
                )
            return FrenetResult(
                len(frames), frames, curv, eps, CurveClass.OTHER, {"lightlike_stage": stage}
            )
        sgn = 1.0 if float(np.median(gcore)) > 0 else -1.0
        if np.any(sgn * gcore <= 0):
            return FrenetResult(
                len(frames), frames, curv, eps, CurveClass.OTHER, {"sign_change": True}
            )
        kappa = np.sqrt(np.abs(g))
        frames.append(sgn * d / kappa[:, None])
        curv.append(kappa)
        eps.append(sgn)
        if len(frames) >= max_order:
            order = len(frames)
            cls = CurveClass.OTHER
            if order == 2:
                cls = _maybe_circle(curve, frames, curv, stage)
            return FrenetResult(order, frames, curv, eps, cls, {"max_order": True})


def _maybe_circle(curve, frames, curv, stage) -> CurveClass:
    k = _interior(curv[0], stage)
    spread = float(np.std(k) / np.mean(k))
    tau = gdot_rows(curve.sig.signs, frames[0], jmul(frames[1]))
    tau_max = float(np.max(np.abs(_interior(tau, stage))))
    if spread <= 1e-4 and tau_max <= CURVE_TOL:
        return CurveClass.TOTALLY_REAL_CIRCLE
    return CurveClass.OTHER


def is_totally_real_circle(fr: FrenetResult, curve: SampledCurve):
    """Order 2, constant curvature, and vanishing holomorphic torsion."""
    report = {"order": fr.order}
    if fr.order != 2:
        return False, report
    k = _interior(fr.curvatures[0], 3)
    mean = float(np.mean(k))
    spread = float(np.std(k) / mean)
    tau = gdot_rows(curve.sig.signs, fr.frames[0], jmul(fr.frames[1]))
    tau_max = float(np.max(np.abs(_interior(tau, 3))))
    report.update({"kappa1": mean, "kappa1_rel_spread": spread, "torsion_max": tau_max})
    ok = spread <= 1e-4 and tau_max <= CURVE_TOL
    return ok, report


def case_c_verify(curve: SampledCurve, tol: float = CURVE_TOL):
    """Check the non-Frenet system: lightlike, parallel, totally real F2."""
    signs = curve.sig.signs
    g1 = gdot_rows(signs, curve.velocity, curve.velocity)
    f1 = curve.velocity / np.sqrt(np.abs(g1))[:, None]
    f2 = covariant_derivative(curve, f1)
    core = _interior(f2, 2)
    e2 = np.sum(np.abs(core) ** 2, axis=-1)
    nonzero = float(np.min(np.sqrt(e2)))
    gf2 = float(np.max(np.abs(_interior(gdot_rows(signs, f2, f2), 2))))
    par_rows = covariant_derivative(curve, f2)
    par = float(np.max(np.sqrt(np.sum(np.abs(_interior(par_rows, 3)) ** 2, axis=-1))))
    g12 = float(np.max(np.abs(_interior(gdot_rows(signs, f1, f2), 2))))
    gj12 = float(np.max(np.abs(_interior(gdot_rows(signs, f1, jmul(f2)), 2))))
    report = {
        "f2_min_norm": nonzero,
        "g(F2,F2)": gf2,
        "parallel_defect": par,
        "g(F1,F2)": g12,
        "g(F1,JF2)": gj12,
    }
    ok = (
        nonzero > 10 * tol
        and gf2 <= tol
        and par <= tol
        and g12 <= tol
        and gj12 <= tol
    )
    return ok, report


# ---------------------------------------------------------------------------
# closed-form generating curves of the non-Frenet cases
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClosedFormCurve:
    """Evaluator for a curve given in closed form in the flat ambient space."""

    sig: Signature
    point: Callable[[float], np.ndarray]
    vel: Callable[[float], np.ndarray]
    acc: Callable[[float], np.ndarray]
    label: str

    def __call__(self, s: float) -> np.ndarray:
        return self.point(s)

    def sample(self, s_min: float, s_max: float, step: float) -> SampledCurve:
        return sampled_curve_from_fn(self.sig, self.point, s_min, s_max, step)


def _check_case_c_frame(sig, p0, v0, f2, v0_sign: float):
    g = lambda a, b: real_metric(sig, a, b)
    if abs(g(p0, p0) - 1.0) > 1e-10:
        raise FrameError("p0 must be unit spacelike")
    if abs(g(v0, v0) - v0_sign) > 1e-10:
        want = "spacelike" if v0_sign > 0 else "timelike"
        raise FrameError(f"v0 must be unit {want}")
    ef2 = float(np.sum(np.abs(f2) ** 2))
    if ef2 < 1e-16 or abs(g(f2, f2)) > LIGHT_TOL * ef2:
        raise FrameError("f2 must be lightlike and nonzero")
    for a, b, name in ((p0, v0, "p0,v0"), (p0, f2, "p0,f2"), (v0, f2, "v0,f2")):
        if abs(g(a, b)) > 1e-10:
            raise FrameError(f"{name} are not orthogonal")


def case_c1_curve(sig: Signature, p0, v0, f2) -> ClosedFormCurve:
    """Spacelike non-Frenet generator in a de Sitter slice.

    Satisfies g(a,a) = 1, unit spacelike speed, and a'' + a equal to the
    constant lightlike vector f2.
    """
    p0 = as_ambient(sig, p0)
    v0 = as_ambient(sig, v0)
    f2 = as_ambient(sig, f2)
    _check_case_c_frame(sig, p0, v0, f2, +1.0)
    return ClosedFormCurve(
        sig,
        point=lambda s: f2 + np.cos(s) * (p0 - f2) + np.sin(s) * v0,
        vel=lambda s: -np.sin(s) * (p0 - f2) + np.cos(s) * v0,
        acc=lambda s: -np.cos(s) * (p0 - f2) - np.sin(s) * v0,
        label="case_c1",
    )


def case_c2_curve(sig: Signature, p0, v0, f2) -> ClosedFormCurve:
    """Timelike non-Frenet generator in the index-two quadric slice.

    Satisfies g(a,a) = 1, unit timelike speed, and a'' - a equal to the
    constant lightlike vector f2.
    """
    p0 = as_ambient(sig, p0)
    v0 = as_ambient(sig, v0)
    f2 = as_ambient(sig, f2)
    _check_case_c_frame(sig, p0, v0, f2, -1.0)
    return ClosedFormCurve(
        sig,
        point=lambda s: np.cosh(s) * (p0 + f2) + np.sinh(s) * v0 - f2,
        vel=lambda s: np.sinh(s) * (p0 + f2) + np.cosh(s) * v0,
        acc=lambda s: np.cosh(s) * (p0 + f2) + np.sinh(s) * v0,
        label="case_c2",
    )


def model_circle_curve(
    sig: Signature,
    model: str,
    kappa1: float,
    timelike: bool = False,
) -> ClosedFormCurve:
    """Constant curvature circle inside a standard totally real surface model.

    ``model`` is one of rp2, s2_1, h2_2. The round model carries any
    curvature; the mixed model carries spacelike circles only below
    curvature one (use ``timelike`` for the complementary family); the
    negative definite model needs curvature above one and p >= 2.
    """
    if kappa1 <= 0:
        raise FrameError("circle curvature must be positive")
    n = sig.n
    if model == "rp2":
        if sig.p > n - 2:
            raise FrameError("round surface model needs p <= n-2")
        slots = (n - 2, n - 1, n)
        a = 1.0 / np.sqrt(1.0 + kappa1**2)
        b = kappa1 * a
        coords = lambda s: (a * np.cos(s / a), a * np.sin(s / a), b)
        dcoords = lambda s: (-np.sin(s / a), np.cos(s / a), 0.0)
    elif model == "s2_1" and not timelike:
        if kappa1 >= 1.0:
            raise FrameError("spacelike mixed-model circles need curvature below one")
        slots = (0, n - 1, n)
        b = kappa1 / np.sqrt(1.0 - kappa1**2)
        c = np.sqrt(1.0 + b * b)
        coords = lambda s: (b, c * np.cos(s / c), c * np.sin(s / c))
        dcoords = lambda s: (0.0, -np.sin(s / c), np.cos(s / c))
    elif model == "s2_1":
        slots = (0, n - 1, n)
        b = kappa1 / np.sqrt(1.0 + kappa1**2)
        c = np.sqrt(1.0 - b * b)
        coords = lambda s: (c * np.sinh(s / c), b, c * np.cosh(s / c))
        dcoords = lambda s: (np.cosh(s / c), 0.0, np.sinh(s / c))
    elif model == "h2_2":
        if sig.p < 2:
            raise FrameError("negative definite surface model needs p >= 2")
        if kappa1 <= 1.0:
            raise FrameError("negative definite model circles need curvature above one")
        slots = (0, 1, n)
        a = 1.0 / np.sqrt(kappa1**2 - 1.0)
        b = np.sqrt(1.0 + a * a)
        coords = lambda s: (a * np.cos(s / a), a * np.sin(s / a), b)
        dcoords = lambda s: (-np.sin(s / a), np.cos(s / a), 0.0)
    else:
        raise FrameError(f"unknown surface model {model!r}")

    def place(values) -> np.ndarray:
        out = np.zeros(sig.ambient_dim, dtype=complex)
        out[list(slots)] = values
        return out

    def acc(s: float, h: float = 1e-4) -> np.ndarray:
        return (point(s + h) - 2.0 * point(s) + point(s - h)) / (h * h)

    point = lambda s: place(coords(s))
    vel = lambda s: place(dcoords(s))
    return ClosedFormCurve(sig, point=point, vel=vel, acc=acc, label=f"circle_{model}")


# ---------------------------------------------------------------------------
# horizontal lift of a projective curve given by representatives
# ---------------------------------------------------------------------------


def horizontal_lift(
    sig: Signature,
    reps,
    z0,
    params=None,
    step: Optional[float] = None,
    anchor: int = 0,
) -> SampledCurve:
    """Phase-integrate representatives into a horizontal lift through z0.

    ``reps`` is either a callable s -> representative or an array of sampled
    representatives matching ``params``. The phase obeys
    theta'(s) = -g(rho', i rho) for the normalized representative rho, which
    makes the lift's velocity orthogonal to the fiber. ``z0`` must project to
    the curve point at the ``anchor`` sample.
    """
    if callable(reps):
        if params is None:
            raise LiftError("params grid required with a callable representative")
        params = np.asarray(params, dtype=float)

        def rho(s: float) -> np.ndarray:
            z = as_ambient(sig, reps(s))
            g = real_metric(sig, z, z)
            if g <= 0:
                raise LiftError("representative is not spacelike")
            return z / np.sqrt(g)

    else:
        rep_rows = np.asarray(reps, dtype=complex)
        params = np.asarray(params, dtype=float)
        if rep_rows.shape[0] != params.shape[0]:
            raise LiftError("representative rows do not match params")
        norms = np.sqrt(gdot_rows(sig.signs, rep_rows, rep_rows))
        spline = CubicSpline(params, rep_rows / norms[:, None], axis=0)

        def rho(s: float) -> np.ndarray:
            return np.asarray(spline(s), dtype=complex)

    if step is None:
        step = float(params[1] - params[0])
    h = 1e-5

    def theta_rate(s: float) -> float:
        r = rho(s)
        dr = (rho(s + h) - rho(s - h)) / (2.0 * h)
        return -real_metric(sig, dr, jmul(r))

    z0v = as_ambient(sig, z0)
    r_anchor = rho(float(params[anchor]))
    a = hermitian_product(sig, z0v, r_anchor)
    if abs(abs(a) - 1.0) > 1e-8 or float(np.max(np.abs(z0v - (a / abs(a)) * r_anchor))) > 1e-8:
        raise LiftError("z0 does not project to the curve point at the anchor")

    theta_rows = np.empty(params.shape[0])
    theta_rows[0] = 0.0
    acc = 0.0
    for i in range(params.shape[0] - 1):
        s = float(params[i])
        k1 = theta_rate(s)
        k2 = theta_rate(s + 0.5 * step)
        k4 = theta_rate(s + step)
        acc += step * (k1 + 4.0 * k2 + k4) / 6.0
        theta_rows[i + 1] = acc
    theta_rows += float(np.angle(a)) - theta_rows[anchor]

    lifts = np.empty((params.shape[0], sig.ambient_dim), dtype=complex)
    for i, s in enumerate(params):
        lifts[i] = np.exp(1j * theta_rows[i]) * rho(float(s))
    curve = SampledCurve(sig, params, lifts, step)
    defect = curve.horizontality_defect()
    if defect > CURVE_TOL:
        raise LiftError(f"horizontality defect {defect:.3e} exceeds {CURVE_TOL:.1e}")
    return curve
