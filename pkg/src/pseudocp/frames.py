"""Indefinite orthonormalization and completion of unitary frames.

Columns of a frame are complex vectors, orthonormal for the indefinite
Hermitian product, with timelike columns (square norm -1) occupying the
first p slots and spacelike columns (+1) the rest. Completion uses modified
Gram-Schmidt with pivoting on |g(v,v)| and perturbed restarts, so near-null
pivots cannot destabilize the normalization.
"""

from __future__ import annotations

import numpy as np

from .errors import FrameError
from .linalg import Signature, hermitian_product, real_metric

#: a pivot with |g(u,u)| below this (relative to the Euclidean norm) triggers a restart
PIVOT_TOL = 1e-10
_MAX_RESTARTS = 8


def _validate_fixed(sig: Signature, fixed: dict[int, np.ndarray], tol: float = 1e-8):
    dim = sig.ambient_dim
    items = sorted(fixed.items())
    for slot, vec in items:
        if not 0 <= slot < dim:
            raise FrameError(f"slot {slot} out of range")
        want = -1.0 if slot < sig.p else 1.0
        g = hermitian_product(sig, vec, vec)
        if abs(g - want) > tol:
            raise FrameError(
                f"fixed column for slot {slot} has g(v,v) = {g:.3e}, expected {want:+.0f}"
            )
    for i, (_, a) in enumerate(items):
        for _, b in items[i + 1 :]:
            g = hermitian_product(sig, a, b)
            if abs(g) > tol:
                raise FrameError("fixed columns are not mutually g_C-orthogonal")


def complete_unitary_frame(
    sig: Signature,
    fixed: dict[int, np.ndarray],
    det_slot: int | None = None,
) -> np.ndarray:
    """Complete fixed columns to a full frame with determinant one.

    Free slots are filled deterministically from the standard basis; the
    column of largest free index absorbs a unit phase so the determinant is
    exactly one, which generalizes flipping the sign of one column.
    """
    _validate_fixed(sig, fixed)
    dim = sig.ambient_dim
    signs = sig.signs
    free = [c for c in range(dim) if c not in fixed]
    if det_slot is None:
        det_slot = max(free) if free else None
    rng = np.random.default_rng(0)

    for attempt in range(_MAX_RESTARTS):
        cols: dict[int, np.ndarray] = {
            slot: np.asarray(v, dtype=complex) for slot, v in fixed.items()
        }
        candidates = [np.eye(dim, dtype=complex)[k] for k in range(dim)]
        if attempt > 0:
            noise = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
            candidates = [c + 1e-3 * noise[k] for k, c in enumerate(candidates)]
        for slot, v in cols.items():
            sgn = signs[slot]
            candidates = [
                c - sgn * complex(hermitian_product(sig, c, v)) * v for c in candidates
            ]
        free_minus = [c for c in range(sig.p) if c not in cols]
        free_plus = [c for c in range(sig.p, dim) if c not in cols]

        while free_minus or free_plus:
            best = None
            best_g = 0.0
            for idx, c in enumerate(candidates):
                e2 = float(np.sum(np.abs(c) ** 2))
                if e2 < 1e-20:
                    continue
                g = real_metric(sig, c, c)
                if abs(g) <= PIVOT_TOL * e2:
                    continue
                if g < 0 and not free_minus:
                    continue
                if g > 0 and not free_plus:
                    continue
                if abs(g) > best_g:
                    best_g = abs(g)
                    best = idx
            if best is None:
                break
            u = candidates.pop(best)
            g = real_metric(sig, u, u)
            u = u / np.sqrt(abs(g))
            sgn = 1.0 if g > 0 else -1.0
            slot = free_plus.pop(0) if sgn > 0 else free_minus.pop(0)
            cols[slot] = u
            candidates = [
                c - sgn * complex(hermitian_product(sig, c, u)) * u for c in candidates
            ]
        if free_minus or free_plus:
            continue

        mat = np.column_stack([cols[c] for c in range(dim)])
        det = np.linalg.det(mat)
        if abs(abs(det) - 1.0) > 1e-9:
            continue
        if det_slot is not None:
            mat[:, det_slot] = mat[:, det_slot] / det
        return mat

    raise FrameError("frame completion failed: degenerate complement")


def orthonormalize_real_metric(
    sig: Signature, vectors, tol: float = PIVOT_TOL, max_count: int | None = None
) -> tuple[list[np.ndarray], list[float]]:
    """Gram-Schmidt over the real span of ambient vectors, pivoting on |g(v,v)|.

    Returns unit vectors together with their signs g(v,v) = +-1. Raises
    FrameError when the span is degenerate (a pivot is relatively lightlike)
    or the input is linearly dependent. With ``max_count`` the process stops
    after that many vectors, allowing redundant spanning sets.
    """
    pool = [np.asarray(v, dtype=complex) for v in vectors]
    target = len(pool) if max_count is None else max_count
    out: list[np.ndarray] = []
    signs: list[float] = []
    while len(out) < target:
        pool = [c for c in pool if float(np.sum(np.abs(c) ** 2)) >= 1e-18]
        if not pool:
            raise FrameError("linearly dependent input vectors")
        best, best_g = None, 0.0
        for idx, c in enumerate(pool):
            e2 = float(np.sum(np.abs(c) ** 2))
            g = real_metric(sig, c, c)
            if abs(g) <= tol * e2:
                continue
            if abs(g) > best_g:
                best_g, best = abs(g), idx
        if best is None:
            raise FrameError("degenerate span: lightlike pivot")
        u = pool.pop(best)
        g = real_metric(sig, u, u)
        u = u / np.sqrt(abs(g))
        sgn = 1.0 if g > 0 else -1.0
        out.append(u)
        signs.append(sgn)
        pool = [c - sgn * real_metric(sig, c, u) * u for c in pool]
    return out, signs
