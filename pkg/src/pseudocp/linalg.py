"""Indefinite complex linear algebra on C^{n+1}_p and pseudo-sphere calculus.

Complex vectors are numpy arrays of dtype complex128, which stores each entry
as an interleaved (re, im) pair. The ambient Hermitian product carries minus
signs on the first p slots; every routine reads the signature instead of
hard-coding p, so one code path serves all (n, p).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property

import numpy as np

from .errors import DimensionError, SpherePointError

#: relative threshold separating lightlike from space/timelike vectors
LIGHT_TOL = 1e-8
#: absolute tolerance on |g(q,q) - 1| for pseudo-sphere membership
SPHERE_TOL = 1e-10


def metric_signs(p: int, dim: int) -> np.ndarray:
    """Sign vector (-1 on the first p slots, +1 after) of length ``dim``."""
    s = np.ones(dim)
    s[:p] = -1.0
    return s


@dataclass(frozen=True)
class Signature:
    """Ambient signature: complex projective dimension n and index parameter p.

    The ambient complex space is C^{n+1} with p timelike slots, so the real
    metric has index 2p. Requires n >= 2 and 1 <= p <= n-1, which keeps the
    projective quotient from being Riemannian or negative definite.
    """

    n: int
    p: int

    def __post_init__(self):
        if int(self.n) != self.n or int(self.p) != self.p:
            raise ValueError("signature entries must be integers")
        if self.n < 2:
            raise ValueError(f"need n >= 2, got n={self.n}")
        if not 1 <= self.p <= self.n - 1:
            raise ValueError(f"need 1 <= p <= n-1, got p={self.p}, n={self.n}")

    @property
    def ambient_dim(self) -> int:
        return self.n + 1

    @property
    def real_index(self) -> int:
        return 2 * self.p

    @cached_property
    def signs(self) -> np.ndarray:
        s = metric_signs(self.p, self.n + 1)
        s.setflags(write=False)
        return s


class CausalCharacter(Enum):
    SPACELIKE = "spacelike"
    TIMELIKE = "timelike"
    LIGHTLIKE = "lightlike"
    ZERO = "zero"


def as_ambient(sig: Signature, z) -> np.ndarray:
    """Coerce ``z`` to a complex ambient vector of length n+1."""
    v = np.asarray(z, dtype=complex)
    if v.shape != (sig.ambient_dim,):
        raise DimensionError(
            f"expected vector of length {sig.ambient_dim}, got shape {v.shape}"
        )
    return v


def hermitian_product(sig: Signature, z, w) -> complex:
    """Indefinite Hermitian product: minus on the first p slots, plus after.

    Conjugate symmetric: ``hermitian_product(z, w) == conj(hermitian_product(w, z))``.
    """
    zv = as_ambient(sig, z)
    wv = as_ambient(sig, w)
    return complex(np.sum(sig.signs * zv * np.conj(wv)))


def real_metric(sig: Signature, z, w) -> float:
    """Real part of the Hermitian product: the ambient semi-Riemannian metric."""
    zv = as_ambient(sig, z)
    wv = as_ambient(sig, w)
    return float(np.real(np.sum(sig.signs * zv * np.conj(wv))))


def gdot_rows(signs: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise real metric for stacked vectors; broadcasts over leading axes."""
    return np.real(np.sum(signs * a * np.conj(b), axis=-1))


def jmul(z) -> np.ndarray:
    """Multiplication by i, the ambient complex structure."""
    return 1j * np.asarray(z, dtype=complex)


def causal_character(sig: Signature, v, tol: float = LIGHT_TOL) -> CausalCharacter:
    """Classify a vector as spacelike, timelike, lightlike or zero.

    Zero means the Euclidean norm is below ``tol``; lightlike means
    |g(v,v)| <= tol * ||v||_E^2, a scale-invariant test.
    """
    vv = as_ambient(sig, v)
    eunorm2 = float(np.sum(np.abs(vv) ** 2))
    if np.sqrt(eunorm2) <= tol:
        return CausalCharacter.ZERO
    g = real_metric(sig, vv, vv)
    if abs(g) <= tol * eunorm2:
        return CausalCharacter.LIGHTLIKE
    return CausalCharacter.SPACELIKE if g > 0 else CausalCharacter.TIMELIKE


def check_sphere_point(sig: Signature, q, tol: float = SPHERE_TOL) -> np.ndarray:
    """Return ``q`` as an ambient vector, raising unless g(q,q) = 1 within tol."""
    qv = as_ambient(sig, q)
    residual = abs(real_metric(sig, qv, qv) - 1.0)
    if residual > tol:
        raise SpherePointError(f"|g(q,q) - 1| = {residual:.3e} exceeds {tol:.1e}")
    return qv


def sphere_tangent_project(sig: Signature, q, x, tol: float = SPHERE_TOL) -> np.ndarray:
    """Project an ambient vector onto the tangent space of the sphere at q.

    The position vector is a unit spacelike normal, so the projection is
    x - g(x,q) q and the result satisfies g(result, q) = 0 up to round-off.
    """
    qv = check_sphere_point(sig, q, tol)
    xv = as_ambient(sig, x)
    return xv - real_metric(sig, xv, qv) * qv


def sphere_gauss_split(sig: Signature, q, dxy, tol: float = SPHERE_TOL):
    """Split an ambient derivative value into sphere-tangential part and
    the coefficient on the position normal.

    For tangent fields X, Y on the sphere the ambient derivative decomposes
    as D_X Y = (tangential part) - g(X,Y) q, so for genuine tangent data the
    returned coefficient equals -g(X,Y).
    """
    qv = check_sphere_point(sig, q, tol)
    d = as_ambient(sig, dxy)
    coeff = real_metric(sig, d, qv)
    return d - coeff * qv, coeff
