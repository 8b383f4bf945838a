"""Ruled hypersurface parametrizations, shape operators, and the classifier.

A parametrization carries a unit base curve and a basis of the orthogonal
complement of span{velocity, J velocity} transported along it by the ODE
that keeps the covariant derivative inside that span (gluing the hyperplane
leaves along the curve without rotations). Evaluation composes the
transported frame with the exponential map; the shape operator is measured
by first order differentiation of a locally extended unit normal with
Richardson extrapolation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from .curves import (
    CurveClass,
    SampledCurve,
    case_c_verify,
    fd_derivative,
    fd_second_derivative,
    frenet_apparatus,
    horizontal_lift,
    is_totally_real_circle,
)
from .errors import (
    CausalCharacterError,
    ChartError,
    ClassificationError,
    DegenerateHypersurfaceError,
    EmptyGridError,
    FrameError,
    ImmersionError,
)
from .frames import orthonormalize_real_metric
from .isometries import IndefiniteUnitaryMatrix, frame_to_isometry
from .linalg import (
    LIGHT_TOL,
    CausalCharacter,
    Signature,
    causal_character,
    gdot_rows,
    real_metric,
)
from .projective import (
    ProjectivePoint,
    ProjectiveTangent,
    canonicalize,
    random_horizontal_unit,
    sphere_geodesic,
    tangent_from_lift,
)

#: finite difference step for tangent frames of a parametrized patch
TANGENT_FD_STEP = 1e-4
#: base step for the normal-derivative (shape operator) stencil
SHAPE_FD_STEP = 1e-4
#: leaf coordinates must stay inside this chart radius
CHART_RADIUS = np.pi / 2
#: relative lightlike threshold for numerically measured vectors
NUMERIC_LIGHT_TOL = 1e-5


class ShapeForm(Enum):
    RANK_TWO_NON_NULL_U = "rank_two_non_null_u"
    LIGHTLIKE_U = "lightlike_u"
    VANISHING = "vanishing"


class MinimalCase(Enum):
    CASE_A_GEODESIC = "a"
    CASE_B_TOTALLY_REAL_CIRCLE = "b"
    CASE_C_NON_FRENET = "c"


# ---------------------------------------------------------------------------
# transport of the leaf frame along the base curve
# ---------------------------------------------------------------------------


class _CurveSystem:
    """Smooth evaluators for a sampled curve: lift, velocity, acceleration."""

    def __init__(self, curve: SampledCurve):
        self.sig = curve.sig
        self.signs = curve.sig.signs
        self.eps1 = curve.eps1
        self.h = curve.step
        if curve.lift_fn is not None:
            self.lift = curve.lift_fn
        else:
            spline = CubicSpline(curve.params, curve.lifts, axis=0)
            self.lift = lambda s: np.asarray(spline(s), dtype=complex)
        self._cache: dict[float, tuple] = {}

    def state(self, s: float):
        """Lift q, horizontal velocity dq, and horizontal acceleration f at s."""
        key = round(float(s), 12)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        q = self.lift(s)
        dq = fd_derivative(self.lift, s, self.h)
        d2q = fd_second_derivative(self.lift, s, self.h)
        g = lambda a, b: real_metric(self.sig, a, b)
        iq = 1j * q
        dq = dq - g(dq, q) * q
        dq = dq - g(dq, iq) * iq
        f = d2q - g(d2q, q) * q
        f = f - g(f, iq) * iq
        out = (q, dq, f)
        if len(self._cache) > 20000:
            self._cache.clear()
        self._cache[key] = out
        return out


@dataclass(frozen=True)
class RHSParametrization:
    """Transported leaf frame along a unit base curve, with evaluators."""

    base: SampledCurve
    s0: float
    eps1: float
    leaf_index: int
    frame_signs: np.ndarray
    frame_samples: np.ndarray  # (m, k, d)
    frame_derivs: np.ndarray  # (m, k, d)
    system: _CurveSystem = field(repr=False)

    @property
    def sig(self) -> Signature:
        return self.base.sig

    @property
    def leaf_dim(self) -> int:
        return self.frame_samples.shape[1]

    def s_range(self) -> tuple[float, float]:
        return float(self.base.params[0]), float(self.base.params[-1])

    def alpha_lift(self, s: float) -> np.ndarray:
        return self.system.lift(s)

    def frame_at(self, s: float) -> np.ndarray:
        """Cubic Hermite interpolation of the transported frame."""
        grid = self.base.params
        i = int(np.clip(np.searchsorted(grid, s) - 1, 0, grid.shape[0] - 2))
        h = grid[i + 1] - grid[i]
        tau = (s - grid[i]) / h
        h00 = (1.0 + 2.0 * tau) * (1.0 - tau) ** 2
        h10 = tau * (1.0 - tau) ** 2
        h01 = tau * tau * (3.0 - 2.0 * tau)
        h11 = tau * tau * (tau - 1.0)
        return (
            h00 * self.frame_samples[i]
            + h10 * h * self.frame_derivs[i]
            + h01 * self.frame_samples[i + 1]
            + h11 * h * self.frame_derivs[i + 1]
        )

    def gram_drift(self) -> float:
        """Largest deviation of the frame Gram matrix from its start value."""
        signs = self.sig.signs
        z = self.frame_samples
        gram = np.real(np.einsum("mkd,mld,d->mkl", z, np.conj(z), signs))
        i0 = int(np.argmin(np.abs(self.base.params - self.s0)))
        return float(np.max(np.abs(gram - gram[i0])))

    def orthogonality_defect(self) -> tuple[float, float]:
        """Worst defects of the frame against velocity and J velocity."""
        worst_v, worst_jv = 0.0, 0.0
        signs = self.sig.signs
        for i, s in enumerate(self.base.params):
            _, dq, _ = self.system.state(float(s))
            zrows = self.frame_samples[i]
            worst_v = max(worst_v, float(np.max(np.abs(gdot_rows(signs, zrows, dq)))))
            worst_jv = max(
                worst_jv, float(np.max(np.abs(gdot_rows(signs, zrows, 1j * dq))))
            )
        return worst_v, worst_jv


def default_initial_basis(curve: SampledCurve, s0: float = 0.0):
    """g-orthonormal basis of (span{velocity, J velocity})^perp at s0.

    Free columns of the frame completion at (q, velocity) give complex
    vectors w; the pairs (w, iw) then span the complement over the reals.
    """
    system = _CurveSystem(curve)
    q, dq, _ = system.state(s0)
    g = real_metric(curve.sig, dq, dq)
    iso = frame_to_isometry(curve.sig, q, dq / np.sqrt(abs(g)))
    n, p = curve.sig.n, curve.sig.p
    used = {n - 1, n if g > 0 else 0}
    basis, signs = [], []
    for col in range(curve.sig.ambient_dim):
        if col in used:
            continue
        w = iso.entries[:, col]
        sgn = -1.0 if col < p else 1.0
        basis.extend([w, 1j * w])
        signs.extend([sgn, sgn])
    return np.array(basis), np.array(signs)


def transport_basis(
    curve: SampledCurve,
    initial_basis: Optional[np.ndarray] = None,
    s0: float = 0.0,
) -> RHSParametrization:
    """Integrate the frame transport ODE along the base curve with RK4.

    The covariant derivative of each transported vector is forced into
    span{velocity, J velocity}; on lifts this becomes an explicit linear ODE
    whose solution keeps the frame orthogonal to the velocity, its rotation
    by J, the position and the fiber direction.
    """
    sig = curve.sig
    system = _CurveSystem(curve)
    char = causal_character(sig, system.state(s0)[1])
    if char in (CausalCharacter.LIGHTLIKE, CausalCharacter.ZERO):
        raise CausalCharacterError("base curve velocity must not be lightlike")
    eps1 = curve.eps1

    if initial_basis is None:
        basis, signs = default_initial_basis(curve, s0)
    else:
        basis = np.asarray(initial_basis, dtype=complex)
        q, dq, _ = system.state(s0)
        gram = np.real(np.einsum("kd,ld,d->kl", basis, np.conj(basis), sig.signs))
        diag = np.diag(gram)
        if np.max(np.abs(np.abs(diag) - 1.0)) > 1e-8:
            raise FrameError("initial basis is not unit")
        if np.max(np.abs(gram - np.diag(diag))) > 1e-8:
            raise FrameError("initial basis is not orthogonal")
        for row in basis:
            for w in (dq, 1j * dq, q, 1j * q):
                if abs(real_metric(sig, row, w)) > 1e-8:
                    raise FrameError("initial basis does not span the leaf complement")
        signs = diag.copy()

    grid = curve.params
    i0 = int(np.argmin(np.abs(grid - s0)))
    if abs(float(grid[i0]) - s0) > 1e-9:
        raise FrameError("s0 must coincide with a sample of the base curve")

    signs_vec = sig.signs

    def rhs(s: float, z: np.ndarray) -> np.ndarray:
        q, dq, f = system.state(s)
        jf = 1j * f
        jdq = 1j * dq
        w = -eps1 * (
            gdot_rows(signs_vec, z, f)[:, None] * dq
            + gdot_rows(signs_vec, z, jf)[:, None] * jdq
        )
        return (
            w
            - gdot_rows(signs_vec, z, dq)[:, None] * q
            - gdot_rows(signs_vec, z, jdq)[:, None] * (1j * q)
        )

    m, k, d = grid.shape[0], basis.shape[0], sig.ambient_dim
    samples = np.empty((m, k, d), dtype=complex)
    derivs = np.empty((m, k, d), dtype=complex)
    samples[i0] = basis
    derivs[i0] = rhs(float(grid[i0]), basis)

    def rk4_step(s: float, z: np.ndarray, h: float) -> np.ndarray:
        k1 = rhs(s, z)
        k2 = rhs(s + 0.5 * h, z + 0.5 * h * k1)
        k3 = rhs(s + 0.5 * h, z + 0.5 * h * k2)
        k4 = rhs(s + h, z + h * k3)
        return z + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0

    z = basis.copy()
    for i in range(i0, m - 1):
        z = rk4_step(float(grid[i]), z, float(grid[i + 1] - grid[i]))
        samples[i + 1] = z
        derivs[i + 1] = rhs(float(grid[i + 1]), z)
    z = basis.copy()
    for i in range(i0, 0, -1):
        z = rk4_step(float(grid[i]), z, float(grid[i - 1] - grid[i]))
        samples[i - 1] = z
        derivs[i - 1] = rhs(float(grid[i - 1]), z)

    leaf_index = sig.p if eps1 > 0 else sig.p - 1
    return RHSParametrization(
        base=curve,
        s0=s0,
        eps1=eps1,
        leaf_index=leaf_index,
        frame_signs=np.asarray(signs, dtype=float),
        frame_samples=samples,
        frame_derivs=derivs,
        system=system,
    )


# ---------------------------------------------------------------------------
# parametrized hypersurface patches
# ---------------------------------------------------------------------------


def rhs_lift(par: RHSParametrization, s: float, coords) -> np.ndarray:
    """Smooth (non-canonicalized) sphere lift of the parametrization point."""
    coords = np.asarray(coords, dtype=float)
    if coords.shape != (par.leaf_dim,):
        raise ChartError(f"expected {par.leaf_dim} leaf coordinates")
    if float(np.sqrt(np.sum(coords**2))) >= CHART_RADIUS:
        raise ChartError("leaf coordinates outside the chart radius")
    lo, hi = par.s_range()
    if not lo - 1e-12 <= s <= hi + 1e-12:
        raise ChartError("base parameter outside the curve range")
    v = coords @ par.frame_at(s)
    return sphere_geodesic(par.sig, par.alpha_lift(s), v, 1.0)


def rhs_evaluate(par: RHSParametrization, s: float, coords) -> ProjectivePoint:
    """Point of the ruled hypersurface at base parameter s and leaf coordinates."""
    return canonicalize(par.sig, rhs_lift(par, s, coords))


class RHSPatch:
    """Patch interface over a parametrization: u = (s, leaf coordinates)."""

    def __init__(self, par: RHSParametrization):
        self.par = par
        self.sig = par.sig
        self.n_params = 1 + par.leaf_dim

    def lift_at(self, u: np.ndarray) -> np.ndarray:
        return rhs_lift(self.par, float(u[0]), u[1:])


class TransformedPatch:
    """A patch moved by a holomorphic isometry (used for ruling translates)."""

    def __init__(self, iso: IndefiniteUnitaryMatrix, inner):
        self.iso = iso
        self.inner = inner
        self.sig = inner.sig
        self.n_params = inner.n_params

    def lift_at(self, u: np.ndarray) -> np.ndarray:
        return self.iso.apply(self.inner.lift_at(u))


class GeodesicSpherePatch:
    """Distance sphere patch around a point: the non-ruled control surface."""

    def __init__(self, x0: ProjectivePoint, radius: float, seed: int = 0):
        self.sig = x0.sig
        self.n_params = 2 * self.sig.n - 1
        self.q0 = x0.rep
        self.radius = radius
        rng = np.random.default_rng(seed)
        v0 = random_horizontal_unit(self.sig, self.q0, rng)
        iso = frame_to_isometry(self.sig, self.q0, v0)
        used = {self.sig.n - 1, self.sig.n}
        dirs = [1j * v0]
        for col in range(self.sig.ambient_dim):
            if col in used:
                continue
            w = iso.entries[:, col]
            dirs.extend([w, 1j * w])
        self.v0 = v0
        self.dirs = np.array(dirs)

    def lift_at(self, u: np.ndarray) -> np.ndarray:
        w = self.v0 + u @ self.dirs
        g = real_metric(self.sig, w, w)
        w = w / np.sqrt(g)
        return np.cos(self.radius) * self.q0 + np.sin(self.radius) * w


def _phase_factor(signs: np.ndarray, w: np.ndarray, ref: np.ndarray) -> complex:
    """Unit phase making the indefinite product of w with ref real positive.

    Aligning nearby lifts with the indefinite product (not the Euclidean one)
    turns parameter lines into horizontal curves to first order, so finite
    differences of horizontal fields need no vertical correction.
    """
    a = complex(np.sum(signs * w * np.conj(ref)))
    if abs(a) < 1e-12:
        return 1.0 + 0.0j
    return np.conj(a) / abs(a)


def _align_phase(signs: np.ndarray, w: np.ndarray, ref: np.ndarray) -> np.ndarray:
    return w * _phase_factor(signs, w, ref)


def _realify(z: np.ndarray) -> np.ndarray:
    return np.concatenate([np.real(z), np.imag(z)], axis=-1)


def patch_tangent_frame(patch, u: np.ndarray, h: float = TANGENT_FD_STEP):
    """Lift and horizontal tangent vectors of the patch at parameters u."""
    u = np.asarray(u, dtype=float)
    w0 = patch.lift_at(u)
    signs = patch.sig.signs
    rows = []
    for j in range(u.shape[0]):
        du = np.zeros_like(u)
        du[j] = h
        wp = _align_phase(signs, patch.lift_at(u + du), w0)
        wm = _align_phase(signs, patch.lift_at(u - du), w0)
        rows.append((wp - wm) / (2.0 * h))
    t = np.array(rows)
    t = t - gdot_rows(signs, t, w0)[:, None] * w0
    iw0 = 1j * w0
    t = t - gdot_rows(signs, t, iw0)[:, None] * iw0
    return w0, t


@dataclass(frozen=True)
class AlmostContactFrame:
    """Unit normal data at a hypersurface point: N, epsilon, xi and phi."""

    sig: Signature
    lift: np.ndarray
    tangents: np.ndarray
    normal: np.ndarray
    epsilon: float

    @property
    def xi(self) -> np.ndarray:
        return -1j * self.normal

    def eta(self, x: np.ndarray) -> float:
        return real_metric(self.sig, x, self.xi)

    def phi(self, x: np.ndarray) -> np.ndarray:
        return 1j * np.asarray(x, dtype=complex) - self.epsilon * self.eta(x) * self.normal

    def tangent_coords(self, x: np.ndarray) -> np.ndarray:
        a, *_ = np.linalg.lstsq(_realify(self.tangents).T, _realify(x), rcond=None)
        return a

    def random_tangent(self, rng: np.random.Generator) -> np.ndarray:
        coeff = rng.standard_normal(self.tangents.shape[0])
        x = coeff @ self.tangents
        return x / np.sqrt(float(np.sum(np.abs(x) ** 2)))

    def point(self) -> ProjectivePoint:
        return canonicalize(self.sig, self.lift)

    def normal_tangent(self) -> ProjectiveTangent:
        return tangent_from_lift(self.sig, self.lift, self.normal)


def _fix_sign(v: np.ndarray) -> np.ndarray:
    j = int(np.argmax(np.abs(v)))
    piv = v[j]
    if np.real(piv) < 0 or (np.real(piv) == 0 and np.imag(piv) < 0):
        return -v
    return v


def hypersurface_frame(
    patch,
    u: np.ndarray,
    h: float = TANGENT_FD_STEP,
    sign_ref: Optional[np.ndarray] = None,
) -> AlmostContactFrame:
    """Numeric unit normal and almost contact data of the patch at u.

    The normal is the g-orthogonal complement of the tangent space inside
    the horizontal space, found as the null vector of the metric pairing.
    ``sign_ref`` resolves the normal's sign against a nearby reference.
    """
    sig = patch.sig
    w0, t = patch_tangent_frame(patch, u, h)
    treal = _realify(t)
    svals = np.linalg.svd(treal, compute_uv=False)
    if svals[-1] <= 1e-8 * max(1.0, svals[0]):
        raise ImmersionError("parametrization is rank deficient here")
    srep = np.concatenate([sig.signs, sig.signs])
    constraints = np.vstack([_realify(w0)[None, :], _realify(1j * w0)[None, :], treal])
    weighted = constraints * srep
    _, sv, vh = np.linalg.svd(weighted)
    if sv[-1] <= 1e-8 * max(1.0, sv[0]):
        raise DegenerateHypersurfaceError("metric pairing is singular here")
    nu_real = vh[-1]
    nu = nu_real[: sig.ambient_dim] + 1j * nu_real[sig.ambient_dim :]
    gn = real_metric(sig, nu, nu)
    if abs(gn) <= LIGHT_TOL * float(np.sum(np.abs(nu) ** 2)):
        raise DegenerateHypersurfaceError("normal is lightlike: degenerate point")
    nu = nu / np.sqrt(abs(gn))
    eps = 1.0 if gn > 0 else -1.0
    if sign_ref is not None:
        if float(np.real(np.sum(nu * np.conj(sign_ref)))) < 0:
            nu = -nu
    else:
        nu = _fix_sign(nu)
    return AlmostContactFrame(sig=sig, lift=w0, tangents=t, normal=nu, epsilon=eps)


def _aligned_frame(patch, u, ref: AlmostContactFrame) -> AlmostContactFrame:
    """Frame at u with phase and normal sign aligned to a reference frame."""
    fr = hypersurface_frame(patch, u)
    ph = _phase_factor(fr.sig.signs, fr.lift, ref.lift)
    nu = fr.normal * ph
    if float(np.real(np.sum(nu * np.conj(ref.normal)))) < 0:
        nu = -nu
    return AlmostContactFrame(
        sig=fr.sig,
        lift=fr.lift * ph,
        tangents=fr.tangents * ph,
        normal=nu,
        epsilon=fr.epsilon,
    )


def _covariant_from_difference(sig, dvec, w0):
    out = dvec - real_metric(sig, dvec, w0) * w0
    iw0 = 1j * w0
    return out - real_metric(sig, out, iw0) * iw0


def weingarten_apply(
    patch,
    frame0: AlmostContactFrame,
    u: np.ndarray,
    x: np.ndarray,
    h: float = SHAPE_FD_STEP,
) -> np.ndarray:
    """Shape operator applied to a tangent vector, A X = -(derivative of N).

    The unit normal is extended along the coordinate line with parameter
    velocity matching X; two central differences at steps h and h/2 are
    combined by Richardson extrapolation.
    """
    a = frame0.tangent_coords(x)

    def normal_at(delta: float) -> np.ndarray:
        fr = _aligned_frame(patch, u + delta * a, frame0)
        return fr.normal

    def estimate(hh: float) -> np.ndarray:
        return (normal_at(hh) - normal_at(-hh)) / (2.0 * hh)

    d1 = estimate(h)
    d2 = estimate(0.5 * h)
    dn = (4.0 * d2 - d1) / 3.0
    ax = -_covariant_from_difference(patch.sig, dn, frame0.lift)
    ax = ax - frame0.epsilon * real_metric(patch.sig, ax, frame0.normal) * frame0.normal
    return ax


@dataclass(frozen=True)
class ShapeReport:
    """Shape operator snapshot in an adapted basis {xi, e_1, ...}."""

    matrix: np.ndarray
    mu: float
    u_vec: np.ndarray
    u_character: CausalCharacter
    rank: int
    form: ShapeForm
    lam: float
    dd_block_max: float
    basis: np.ndarray
    basis_signs: np.ndarray
    frame: AlmostContactFrame


def adapted_basis(frame: AlmostContactFrame, first: Optional[np.ndarray] = None):
    """Adapted tangent basis: xi first, then an orthonormal basis of its
    g-complement inside the tangent space.

    ``first`` optionally pins a unit leaf vector (the normalized U of a
    rank-two shape operator) to the slot right after xi.
    """
    sig = frame.sig
    xi = frame.xi
    eps = frame.epsilon
    pool = [t - eps * real_metric(sig, t, xi) * xi for t in frame.tangents]
    head = [xi]
    head_signs = [eps]
    want = len(frame.tangents) - 1
    if first is not None:
        gf = real_metric(sig, first, first)
        w = first / np.sqrt(abs(gf))
        sgn = 1.0 if gf > 0 else -1.0
        pool = [v - sgn * real_metric(sig, v, w) * w for v in pool]
        head.append(w)
        head_signs.append(sgn)
        want -= 1
    vecs, signs = orthonormalize_real_metric(sig, pool, max_count=want)
    if len(vecs) != want:
        raise FrameError("could not complete the adapted tangent basis")
    return np.array(head + vecs), np.array(head_signs + signs)


def shape_operator_at(patch, u: np.ndarray, h: float = SHAPE_FD_STEP) -> ShapeReport:
    """Measure the shape operator in an adapted basis at patch parameters u.

    The structure vector comes first; when the leaf part U of A xi is
    non-null, its normalization occupies the second slot, so the rank-two
    pattern is visible directly in the matrix.
    """
    u = np.asarray(u, dtype=float)
    frame = hypersurface_frame(patch, u)
    sig = patch.sig
    axi = weingarten_apply(patch, frame, u, frame.xi, h)
    mu = real_metric(sig, axi, frame.xi)
    uvec = axi - frame.epsilon * mu * frame.xi
    uchar = causal_character(sig, uvec, NUMERIC_LIGHT_TOL)
    pin = uvec if uchar in (CausalCharacter.SPACELIKE, CausalCharacter.TIMELIKE) else None
    basis, bsigns = adapted_basis(frame, first=pin)
    images = [axi]
    for b in basis[1:]:
        images.append(weingarten_apply(patch, frame, u, b, h))
    images = np.array(images)
    k = basis.shape[0]
    bil = np.empty((k, k))
    for i in range(k):
        for j in range(k):
            bil[i, j] = real_metric(sig, images[j], basis[i])
    matrix = bsigns[:, None] * bil
    dd = float(np.max(np.abs(bil[1:, 1:]))) if k > 1 else 0.0
    sv = np.linalg.svd(matrix, compute_uv=False)
    rank = int(np.sum(sv > 1e-3 * max(1.0, sv[0])))
    lam = float(np.sqrt(abs(real_metric(sig, uvec, uvec))))
    if float(np.max(np.abs(bil))) <= 1e-4:
        form = ShapeForm.VANISHING
    elif uchar is CausalCharacter.LIGHTLIKE:
        form = ShapeForm.LIGHTLIKE_U
    else:
        form = ShapeForm.RANK_TWO_NON_NULL_U
    return ShapeReport(
        matrix=matrix,
        mu=float(mu),
        u_vec=uvec,
        u_character=uchar,
        rank=rank,
        form=form,
        lam=lam,
        dd_block_max=dd,
        basis=basis,
        basis_signs=bsigns,
        frame=frame,
    )


def shape_operator(par: RHSParametrization, s: float, coords, h: float = SHAPE_FD_STEP):
    return shape_operator_at(RHSPatch(par), np.concatenate([[s], coords]), h)


def almost_contact_at(par: RHSParametrization, s: float, coords) -> AlmostContactFrame:
    return hypersurface_frame(RHSPatch(par), np.concatenate([[s], coords]))


# ---------------------------------------------------------------------------
# verification: ruled characterization, Codazzi residual, minimality
# ---------------------------------------------------------------------------


def codazzi_residual(patch, u: np.ndarray, rng: np.random.Generator, h: float = 5e-3) -> float:
    """Residual of the Codazzi identity at u for one random tangent pair."""
    sig = patch.sig
    u = np.asarray(u, dtype=float)
    frame = hypersurface_frame(patch, u)
    x = frame.random_tangent(rng)
    y = frame.random_tangent(rng)
    ax_dir = frame.tangent_coords(x)
    ay_dir = frame.tangent_coords(y)

    def tangential(v):
        v = _covariant_from_difference(sig, v, frame.lift)
        return v - frame.epsilon * real_metric(sig, v, frame.normal) * frame.normal

    def a_of_field(uu, coeffs):
        fr = _aligned_frame(patch, uu, frame)
        vec = coeffs @ fr.tangents
        return weingarten_apply(patch, fr, uu, vec), vec

    def nabla_pair(dir_coeffs, field_coeffs):
        ap, vp = a_of_field(u + h * dir_coeffs, field_coeffs)
        am, vm = a_of_field(u - h * dir_coeffs, field_coeffs)
        d_a = tangential((ap - am) / (2.0 * h))
        d_v = tangential((vp - vm) / (2.0 * h))
        return d_a, d_v

    da_y, dy = nabla_pair(ax_dir, ay_dir)
    da_x, dx = nabla_pair(ay_dir, ax_dir)
    cov_x_ay = da_y - weingarten_apply(patch, frame, u, dy)
    cov_y_ax = da_x - weingarten_apply(patch, frame, u, dx)
    rhs = (
        frame.eta(x) * frame.phi(y)
        - frame.eta(y) * frame.phi(x)
        + 2.0 * real_metric(sig, x, frame.phi(y)) * frame.xi
    )
    res = cov_x_ay - cov_y_ax - rhs
    return float(np.sqrt(np.sum(np.abs(res) ** 2)))


def structure_field_identity(
    patch, u: np.ndarray, rng: np.random.Generator, h: float = 1e-3
) -> float:
    """Residual of the derived identity relating the structure field to phi A.

    Differentiates the structure field along a random tangent direction and
    compares the tangential covariant derivative with phi applied to the
    shape image of that direction.
    """
    u = np.asarray(u, dtype=float)
    frame = hypersurface_frame(patch, u)
    x = frame.random_tangent(rng)
    a = frame.tangent_coords(x)
    frp = _aligned_frame(patch, u + h * a, frame)
    frm = _aligned_frame(patch, u - h * a, frame)
    dxi = (frp.xi - frm.xi) / (2.0 * h)
    nxi = _covariant_from_difference(patch.sig, dxi, frame.lift)
    nxi = nxi - frame.epsilon * real_metric(patch.sig, nxi, frame.normal) * frame.normal
    ax = weingarten_apply(patch, frame, u, x)
    return float(np.max(np.abs(nxi - frame.phi(ax))))


@dataclass(frozen=True)
class RuledReport:
    dd_block_max: float
    mu_max: float
    codazzi_max: float
    passed: bool
    points: int


def verify_ruled(
    patch_or_par,
    grid: Sequence,
    tol: float = 1e-4,
    codazzi_points: int = 2,
    seed: int = 7,
) -> RuledReport:
    """Measure the leaf block of the shape operator and the Codazzi residual.

    ``grid`` is a sequence of patch parameter vectors; a parametrization is
    wrapped automatically (entries are then (s, coords) pairs).
    """
    patch, grid = _as_patch_grid(patch_or_par, grid)
    if len(grid) == 0:
        raise EmptyGridError("verification grid is empty")
    dd_max = 0.0
    mu_max = 0.0
    for u in grid:
        rep = shape_operator_at(patch, u)
        dd_max = max(dd_max, rep.dd_block_max)
        mu_max = max(mu_max, abs(rep.mu))
    rng = np.random.default_rng(seed)
    cod = 0.0
    take = grid[:: max(1, len(grid) // max(1, codazzi_points))][:codazzi_points]
    for u in take:
        cod = max(cod, codazzi_residual(patch, u, rng))
    return RuledReport(
        dd_block_max=dd_max,
        mu_max=mu_max,
        codazzi_max=cod,
        passed=(dd_max <= tol and cod <= tol),
        points=len(grid),
    )


def _as_patch_grid(patch_or_par, grid):
    if isinstance(patch_or_par, RHSParametrization):
        patch = RHSPatch(patch_or_par)
        out = [np.concatenate([[s], np.asarray(c, dtype=float)]) for s, c in grid]
        return patch, out
    return patch_or_par, [np.asarray(u, dtype=float) for u in grid]


def structure_shape_values(patch, u: np.ndarray):
    """mu = g(A xi, xi) and the leaf component U of A xi at one point."""
    frame = hypersurface_frame(patch, np.asarray(u, dtype=float))
    axi = weingarten_apply(patch, frame, np.asarray(u, dtype=float), frame.xi)
    mu = real_metric(patch.sig, axi, frame.xi)
    uvec = axi - frame.epsilon * mu * frame.xi
    return mu, uvec, frame


def minimality(patch_or_par, grid: Sequence, tol: float = 1e-4):
    """Minimality through the g-trace: for a ruled patch it reduces to mu."""
    patch, grid = _as_patch_grid(patch_or_par, grid)
    if len(grid) == 0:
        raise EmptyGridError("minimality grid is empty")
    worst = 0.0
    for u in grid:
        mu, _, _ = structure_shape_values(patch, u)
        worst = max(worst, abs(mu))
    return worst <= tol, worst


# ---------------------------------------------------------------------------
# classification of the base curve
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClassificationReport:
    case: MinimalCase
    kappa1: Optional[float]
    eps1: float
    eps2: Optional[float]
    kind: Optional[str]
    xi_defect: float
    detail: dict


def regenerate_integral_curve(
    par: RHSParametrization,
    half_span: float = 0.35,
    step: float = 2e-3,
) -> tuple[SampledCurve, float]:
    """Re-derive the integral curve of the structure field from the patch.

    Solves alpha' = xi in parameter space by RK4, starting at (s0, 0); the
    returned curve is re-lifted horizontally and the worst defect between
    its unit velocity and the measured structure field is reported. Sign and
    phase continuity of xi along the path is kept through a moving reference.
    """
    patch = RHSPatch(par)
    sig = par.sig
    lo, hi = par.s_range()
    half_span = min(half_span, par.s0 - lo - 5 * step, hi - par.s0 - 5 * step)
    if half_span <= 10 * step:
        raise ClassificationError("base curve range too small to regenerate")
    u0 = np.zeros(patch.n_params)
    u0[0] = par.s0
    frame0 = hypersurface_frame(patch, u0)
    xi_ref = frame0.xi
    if real_metric(sig, xi_ref, frame0.tangents[0]) * par.eps1 < 0:
        xi_ref = -xi_ref
    state = {"lift": frame0.lift, "xi": xi_ref}

    def velocity(uu: np.ndarray) -> np.ndarray:
        fr = hypersurface_frame(patch, uu)
        ph = _phase_factor(sig.signs, fr.lift, state["lift"])
        xi = fr.xi * ph
        if float(np.real(np.sum(xi * np.conj(state["xi"])))) < 0:
            xi = -xi
        state["lift"], state["xi"] = fr.lift * ph, xi
        a, *_ = np.linalg.lstsq(_realify(fr.tangents * ph).T, _realify(xi), rcond=None)
        return a

    count = int(round(half_span / step))
    params = step * np.arange(-count, count + 1) + 0.0
    upath = np.empty((params.shape[0], patch.n_params))
    upath[count] = u0

    for direction in (+1, -1):
        u = u0.copy()
        state["lift"], state["xi"] = frame0.lift, xi_ref
        for i in range(count):
            hstep = direction * step
            k1 = velocity(u)
            k2 = velocity(u + 0.5 * hstep * k1)
            k3 = velocity(u + 0.5 * hstep * k2)
            k4 = velocity(u + hstep * k3)
            u = u + hstep * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0
            upath[count + direction * (i + 1)] = u

    reps = np.array([patch.lift_at(u) for u in upath])
    curve = horizontal_lift(sig, reps, reps[count], params=params, anchor=count)

    defect = 0.0
    stride = max(1, params.shape[0] // 30)
    state["lift"], state["xi"] = frame0.lift, xi_ref
    for idx in range(4, params.shape[0] - 4, stride):
        fr = hypersurface_frame(patch, upath[idx])
        ph = _phase_factor(sig.signs, fr.lift, curve.lifts[idx])
        xi = fr.xi * ph
        vel = curve.velocity[idx]
        vel = vel / np.sqrt(abs(real_metric(sig, vel, vel)))
        gap = min(
            float(np.max(np.abs(vel - xi))), float(np.max(np.abs(vel + xi)))
        )
        defect = max(defect, gap)
    return curve, defect


_SURFACE_BY_SIGNS = {
    (1.0, 1.0): "rp2",
    (1.0, -1.0): "s2_1",
    (-1.0, 1.0): "s2_1",
    (-1.0, -1.0): "h2_2",
}


def classify_generating_curve(curve: SampledCurve, xi_defect: float = 0.0) -> ClassificationReport:
    """Sort a unit generating curve into geodesic, totally real circle, or
    the non-Frenet lightlike-acceleration case.

    Order one is the geodesic case; order two with constant curvature and no
    holomorphic torsion is the totally real circle, with the surface kind
    read off the frame signs; a lightlike parallel acceleration is the
    non-Frenet case, with the threefold kind set by the causal type of the
    curve itself.
    """
    fr = frenet_apparatus(curve)
    eps1 = curve.eps1
    if fr.classification is CurveClass.GEODESIC:
        return ClassificationReport(
            MinimalCase.CASE_A_GEODESIC, None, eps1, None, None, xi_defect, fr.detail
        )
    if fr.classification is CurveClass.TOTALLY_REAL_CIRCLE:
        ok, rep = is_totally_real_circle(fr, curve)
        if ok:
            kind = _SURFACE_BY_SIGNS[(fr.signs[0], fr.signs[1])]
            return ClassificationReport(
                MinimalCase.CASE_B_TOTALLY_REAL_CIRCLE,
                rep["kappa1"],
                eps1,
                fr.signs[1],
                kind,
                xi_defect,
                rep,
            )
    if fr.classification is CurveClass.CASE_C_NON_FRENET:
        ok, rep = case_c_verify(curve)
        if ok:
            kind = "b3_1" if eps1 > 0 else "b3_2"
            return ClassificationReport(
                MinimalCase.CASE_C_NON_FRENET, None, eps1, None, kind, xi_defect, rep
            )
    raise ClassificationError(
        f"curve matches no minimal case (frenet: {fr.classification.value})"
    )


def classify_minimal_ruled(
    par: RHSParametrization,
    half_span: float = 0.35,
    xi_tol: float = 1e-6,
) -> ClassificationReport:
    """Decide which of the three minimal cases the base curve realizes.

    The integral curve of the structure field is regenerated from the
    parametrization (closing the loop on the constructor's input), checked
    against the measured structure field, then classified.
    """
    curve, defect = regenerate_integral_curve(par, half_span=half_span)
    if defect > xi_tol:
        raise ClassificationError(
            f"regenerated curve is not an integral curve of xi (defect {defect:.3e})"
        )
    return classify_generating_curve(curve, xi_defect=defect)


def leaf_coordinate_grid(
    par: RHSParametrization,
    s_count: int,
    leaf_count: int,
    radius: float = 0.25,
    seed: int = 3,
    margin: float = 0.05,
):
    """Deterministic (s, coords) grid inside the chart of a parametrization."""
    lo, hi = par.s_range()
    s_values = np.linspace(lo + margin, hi - margin, s_count)
    rng = np.random.default_rng(seed)
    coords = []
    for j in range(leaf_count):
        c = rng.standard_normal(par.leaf_dim)
        c = c / np.sqrt(np.sum(c**2)) * radius * (0.4 + 0.6 * (j + 1) / leaf_count)
        coords.append(c)
    return [(float(s), c) for s in s_values for c in coords]
