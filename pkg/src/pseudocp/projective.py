"""Circle quotient of the pseudo-sphere: points, horizontal lifts, geodesics.

Points of the quotient are stored through a canonical unit-sphere
representative whose largest-modulus entry is real and positive. Tangent
vectors are horizontal lifts at that representative, i.e. orthogonal to both
the representative q and the fiber direction iq.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import (
    BasePointError,
    LogMapError,
    NotProjectablePoint,
)
from .linalg import (
    LIGHT_TOL,
    SPHERE_TOL,
    CausalCharacter,
    Signature,
    as_ambient,
    causal_character,
    check_sphere_point,
    hermitian_product,
    jmul,
    real_metric,
)

#: tolerance used when checking that two tangents share a base point
BASE_POINT_TOL = 1e-8
#: canonical-coordinate residual accepted by the log map round trip
LOG_ROUND_TRIP_TOL = 1e-8


@dataclass(frozen=True)
class ProjectivePoint:
    """Point class of the quotient, held by its canonical sphere representative."""

    sig: Signature
    rep: np.ndarray

    def __post_init__(self):
        rep = as_ambient(self.sig, self.rep)
        rep.setflags(write=False)
        object.__setattr__(self, "rep", rep)

    def gap(self, other: "ProjectivePoint") -> float:
        """Sup-norm distance between canonical representatives."""
        return float(np.max(np.abs(self.rep - other.rep)))

    def close_to(self, other: "ProjectivePoint", tol: float = 1e-9) -> bool:
        return self.gap(other) <= tol


@dataclass(frozen=True)
class ProjectiveTangent:
    """Horizontal lift of a tangent vector at a point of the quotient."""

    at: ProjectivePoint
    vec: np.ndarray

    def __post_init__(self):
        vec = as_ambient(self.at.sig, self.vec)
        vec.setflags(write=False)
        object.__setattr__(self, "vec", vec)

    def scaled(self, factor: float) -> "ProjectiveTangent":
        return ProjectiveTangent(self.at, factor * self.vec)

    def norm2(self) -> float:
        return real_metric(self.at.sig, self.vec, self.vec)

    def character(self, tol: float = LIGHT_TOL) -> CausalCharacter:
        return causal_character(self.at.sig, self.vec, tol)


def canonical_phase(z: np.ndarray):
    """Unit phase factor making the largest-modulus entry real positive.

    Ties break toward the lowest index, so equality testing of canonical
    representatives is componentwise.
    """
    j = int(np.argmax(np.abs(z)))
    zj = z[j]
    if abs(zj) == 0.0:
        return 1.0 + 0.0j
    return np.conj(zj) / abs(zj)


def canonicalize(sig: Signature, z, tol: float = SPHERE_TOL) -> ProjectivePoint:
    """Normalize a spacelike ambient vector to the canonical representative.

    Raises NotProjectablePoint when g(z,z) <= 0: only spacelike position
    vectors define point classes of the quotient.
    """
    zv = as_ambient(sig, z)
    g = real_metric(sig, zv, zv)
    if g <= 0.0:
        raise NotProjectablePoint(f"g(z,z) = {g:.3e} is not positive")
    rep = zv / np.sqrt(g)
    rep = rep * canonical_phase(rep)
    return ProjectivePoint(sig, rep)


def horizontal_project(sig: Signature, q, x) -> np.ndarray:
    """Project a sphere-tangent vector at q onto the horizontal space.

    The fiber direction iq is spacelike unit (g(iq, iq) = g(q, q) = 1), so
    the projection just removes the g(x, iq) component.
    """
    qv = as_ambient(sig, q)
    xv = as_ambient(sig, x)
    iq = jmul(qv)
    return xv - real_metric(sig, xv, iq) * iq


def horizontal_part(sig: Signature, q, x) -> np.ndarray:
    """Remove both the position and fiber components of an ambient vector."""
    qv = as_ambient(sig, q)
    xv = np.asarray(x, dtype=complex)
    xv = xv - linalg.gdot_rows(sig.signs, xv, qv)[..., None] * qv
    iq = jmul(qv)
    return xv - linalg.gdot_rows(sig.signs, xv, iq)[..., None] * iq


def tangent_from_lift(sig: Signature, lift, vec) -> ProjectiveTangent:
    """Attach a horizontal vector given at an arbitrary representative.

    Rotates both the representative and the vector by the canonical phase, so
    the stored tangent lives at the canonical representative.
    """
    lv = check_sphere_point(sig, as_ambient(sig, lift), tol=1e-8)
    phase = canonical_phase(lv)
    point = ProjectivePoint(sig, lv * phase)
    return ProjectiveTangent(point, as_ambient(sig, vec) * phase)


def sphere_geodesic(sig: Signature, q, v, t: float) -> np.ndarray:
    """Closed-form geodesic of the pseudo-sphere from q with velocity v.

    Trigonometric for spacelike v, hyperbolic for timelike v, affine for
    lightlike v; the case split uses the relative lightlike threshold.
    """
    qv = as_ambient(sig, q)
    vv = as_ambient(sig, v)
    g = real_metric(sig, vv, vv)
    eunorm2 = float(np.sum(np.abs(vv) ** 2))
    if eunorm2 == 0.0 or abs(g) <= LIGHT_TOL * eunorm2:
        return qv + t * vv
    if g > 0:
        w = np.sqrt(g)
        return np.cos(w * t) * qv + np.sin(w * t) * vv / w
    w = np.sqrt(-g)
    return np.cosh(w * t) * qv + np.sinh(w * t) * vv / w


def exp_map(x: ProjectivePoint, v: ProjectiveTangent, t: float = 1.0) -> ProjectivePoint:
    """Exponential map of the quotient via the horizontal sphere geodesic."""
    if not v.at.close_to(x, BASE_POINT_TOL):
        raise BasePointError("tangent is not based at the given point")
    return canonicalize(x.sig, sphere_geodesic(x.sig, x.rep, v.vec, t))


def log_in_leaf(x: ProjectivePoint, y: ProjectivePoint) -> ProjectiveTangent:
    """Inverse of the exponential map, valid inside a totally geodesic leaf.

    Gauges the phase of y's representative so its Hermitian product with x's
    is real positive, splits off the component along x, and solves the
    closed-form geodesic for the parameter. Raises LogMapError at the cut
    locus (vanishing Hermitian product) or when the round trip check fails.
    """
    sig = x.sig
    q = x.rep
    a = hermitian_product(sig, y.rep, q)
    if abs(a) < 1e-9:
        raise LogMapError("points are g_C-orthogonal: log is not unique here")
    w = y.rep * (np.conj(a) / abs(a))
    b = float(np.real(hermitian_product(sig, w, q)))
    m = w - b * q
    if float(np.max(np.abs(m))) < 1e-14:
        return ProjectiveTangent(x, np.zeros_like(q))
    gm = 1.0 - b * b
    eunorm2 = float(np.sum(np.abs(m) ** 2))
    if abs(gm) <= LIGHT_TOL * eunorm2:
        vec = m
    elif gm > 0:
        vec = np.arccos(np.clip(b, -1.0, 1.0)) * m / np.sqrt(gm)
    else:
        vec = np.arccosh(b) * m / np.sqrt(-gm)
    out = ProjectiveTangent(x, vec)
    if exp_map(x, out, 1.0).gap(y) > LOG_ROUND_TRIP_TOL:
        raise LogMapError("round trip residual exceeds tolerance")
    return out


def curvature_tensor(
    sig: Signature,
    x_t: ProjectiveTangent,
    y_t: ProjectiveTangent,
    z_t: ProjectiveTangent,
) -> ProjectiveTangent:
    """Curvature tensor of the quotient applied to horizontal lifts.

    Evaluates g(Y,Z)X - g(X,Z)Y + g(JY,Z)JX - g(JX,Z)JY + 2g(X,JY)JZ, the
    constant holomorphic sectional curvature 4 tensor, with J acting as
    multiplication by i inside the horizontal space.
    """
    base = x_t.at
    for other in (y_t, z_t):
        if not other.at.close_to(base, BASE_POINT_TOL):
            raise BasePointError("curvature tensor arguments at different points")
    u, v, w = x_t.vec, y_t.vec, z_t.vec
    ju, jv, jw = jmul(u), jmul(v), jmul(w)
    g = lambda a, b: real_metric(sig, a, b)
    out = (
        g(v, w) * u
        - g(u, w) * v
        + g(jv, w) * ju
        - g(ju, w) * jv
        + 2.0 * g(u, jv) * jw
    )
    return ProjectiveTangent(base, out)


# ---------------------------------------------------------------------------
# random sampling helpers (used by tests, verification suites and leaves)
# ---------------------------------------------------------------------------


def random_sphere_point(sig: Signature, rng: np.random.Generator) -> np.ndarray:
    """Random point of the pseudo-sphere (rejection sampling on g(z,z) > 0)."""
    d = sig.ambient_dim
    while True:
        z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        g = real_metric(sig, z, z)
        if g > 0.2:
            return z / np.sqrt(g)


def random_horizontal(sig: Signature, q, rng: np.random.Generator) -> np.ndarray:
    """Random horizontal vector at a sphere point q."""
    qv = as_ambient(sig, q)
    z = rng.standard_normal(sig.ambient_dim) + 1j * rng.standard_normal(sig.ambient_dim)
    return z - complex(hermitian_product(sig, z, qv)) * qv


def horizontal_unitary_basis(sig: Signature, q) -> tuple[np.ndarray, np.ndarray]:
    """Complex g_C-orthonormal basis of the horizontal space at q, with signs."""
    from .frames import complete_unitary_frame

    qv = check_sphere_point(sig, q, tol=1e-8)
    mat = complete_unitary_frame(sig, {sig.n - 1: qv})
    cols = [c for c in range(sig.ambient_dim) if c != sig.n - 1]
    signs = np.array([-1.0 if c < sig.p else 1.0 for c in cols])
    return mat[:, cols].T, signs


def random_horizontal_unit(
    sig: Signature,
    q,
    rng: np.random.Generator,
    character: CausalCharacter = CausalCharacter.SPACELIKE,
) -> np.ndarray:
    """Random unit horizontal vector of prescribed causal character.

    Draws coefficients over a g-orthonormal horizontal basis, so the
    acceptance probability does not degrade for boosted base points.
    """
    basis, signs = horizontal_unitary_basis(sig, q)
    want = 1.0 if character is CausalCharacter.SPACELIKE else -1.0
    while True:
        coeff = rng.standard_normal(len(signs)) + 1j * rng.standard_normal(len(signs))
        g = float(np.sum(signs * np.abs(coeff) ** 2))
        if want * g > 0.05 * float(np.sum(np.abs(coeff) ** 2)):
            return (coeff @ basis) / np.sqrt(abs(g))
