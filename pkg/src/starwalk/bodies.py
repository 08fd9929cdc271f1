"""Star-shaped bodies presented by membership oracles.

A body answers two membership questions: ``contains`` (point in the body) and
``kernel_contains`` (point sees the whole body).  All built-in bodies are
immutable after construction and safe to share across threads; membership is
pure.  Boundary points count as inside (closed bodies, plain <= comparisons,
no tolerance inside the oracles).

Points are plain 1-D float64 numpy arrays, matrices 2-D float64 arrays.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

__all__ = [
    "Halfspace",
    "Polytope",
    "StarBody",
    "Ball",
    "Cube",
    "KOfMHalfspaces",
    "KOfMPolytopes",
    "AffineBody",
    "KernelOf",
    "make_ball",
    "make_cube",
    "affine_image",
    "segment_in_body",
    "as_point",
]

# type codes shared with the accelerated membership kernel (_accel.py)
TC_BALL = 0
TC_BOX = 1
TC_KOFM = 2
TC_KOFM_POLY = 3
TC_GLUED = 4
TC_CLIQUE = 5

_EMPTY_F = np.zeros(0, dtype=np.float64)
_EMPTY_I = np.zeros(0, dtype=np.int64)


def as_point(x, dim: int | None = None) -> np.ndarray:
    """Validate and convert to a finite 1-D float64 vector."""
    p = np.asarray(x, dtype=np.float64)
    if p.ndim != 1:
        raise ValueError(f"expected a 1-D point, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise ValueError("point has non-finite coordinates")
    if dim is not None and p.shape[0] != dim:
        raise ValueError(f"dimension mismatch: expected {dim}, got {p.shape[0]}")
    return p


def _as_batch(X, dim: int) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[None, :]
    if X.shape[1] != dim:
        raise ValueError(f"dimension mismatch: expected {dim}, got {X.shape[1]}")
    return X


@dataclass(frozen=True)
class Halfspace:
    """The closed set {x : a . x <= b}."""

    a: np.ndarray
    b: float

    def __post_init__(self):
        a = as_point(self.a)
        if not np.any(a != 0.0):
            raise ValueError("halfspace normal must be nonzero")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", float(self.b))

    def contains(self, x) -> bool:
        return float(self.a @ as_point(x, self.a.shape[0])) <= self.b


@dataclass(frozen=True)
class Polytope:
    """Intersection of finitely many halfspaces."""

    halfspaces: tuple[Halfspace, ...]

    def __post_init__(self):
        hs = tuple(self.halfspaces)
        if not hs:
            raise ValueError("polytope needs at least one halfspace")
        dims = {h.a.shape[0] for h in hs}
        if len(dims) != 1:
            raise ValueError("halfspaces of mixed dimension")
        object.__setattr__(self, "halfspaces", hs)

    @property
    def dim(self) -> int:
        return self.halfspaces[0].a.shape[0]

    def matrix(self) -> tuple[np.ndarray, np.ndarray]:
        A = np.array([h.a for h in self.halfspaces], dtype=np.float64)
        b = np.array([h.b for h in self.halfspaces], dtype=np.float64)
        return A, b

    def contains_many(self, X) -> np.ndarray:
        X = _as_batch(X, self.dim)
        A, b = self.matrix()
        return np.all(X @ A.T <= b, axis=1)


def _lp_coordinate_bounds(A: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-coordinate min/max over {x : A x <= b} via LP; raises if unbounded."""
    n = A.shape[1]
    lo = np.empty(n)
    hi = np.empty(n)
    for j in range(n):
        c = np.zeros(n)
        for sign, out in ((1.0, lo), (-1.0, hi)):
            c[j] = sign
            res = linprog(c, A_ub=A, b_ub=b, bounds=[(None, None)] * n, method="highs")
            if res.status == 3:
                raise ValueError("radius_bound cannot be certified: constraint system is unbounded")
            if not res.success:
                raise ValueError(f"coordinate bound LP failed: {res.message}")
            out[j] = sign * res.fun
        c[j] = 0.0
    return lo, hi


def _chebyshev_center(A: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, float]:
    """Largest ball inside {A x <= b}: returns (center, radius)."""
    n = A.shape[1]
    norms = np.linalg.norm(A, axis=1)
    A_ext = np.hstack([A, norms[:, None]])
    c = np.zeros(n + 1)
    c[-1] = -1.0
    res = linprog(c, A_ub=A_ext, b_ub=b, bounds=[(None, None)] * n + [(0, None)], method="highs")
    if not res.success:
        raise ValueError(f"Chebyshev center LP failed: {res.message}")
    return res.x[:n].copy(), float(res.x[-1])


class StarBody:
    """Oracle interface every body implements.

    Subclasses provide vectorized ``contains_many`` / ``kernel_contains_many``
    over (count, dim) arrays; scalar oracles wrap those.
    """

    _dim: int
    _accel_kern = False  # KernelOf flips this

    @property
    def dim(self) -> int:
        return self._dim

    # -- membership ------------------------------------------------------
    def contains_many(self, X) -> np.ndarray:
        raise NotImplementedError

    def kernel_contains_many(self, X) -> np.ndarray:
        raise NotImplementedError

    def contains(self, x) -> bool:
        return bool(self.contains_many(as_point(x, self.dim)[None, :])[0])

    def kernel_contains(self, x) -> bool:
        return bool(self.kernel_contains_many(as_point(x, self.dim)[None, :])[0])

    # -- certificates ----------------------------------------------------
    def interior_point(self) -> np.ndarray:
        raise NotImplementedError

    def radius_bound(self) -> float:
        """R with the body inside the origin-centered ball of radius R."""
        raise NotImplementedError

    def diameter_bound(self) -> float:
        """An upper bound on the diameter (exact where easy)."""
        return 2.0 * self.radius_bound()

    def kernel_ball(self) -> tuple[np.ndarray, float]:
        """A certified ball (center, radius) inside the kernel."""
        raise NotImplementedError

    # -- sampling support --------------------------------------------------
    def proposal_box(self) -> tuple[np.ndarray, np.ndarray]:
        r = self.radius_bound()
        return -r * np.ones(self.dim), r * np.ones(self.dim)

    def proposal_sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        """Uniform draws from a region covering the body (for rejection)."""
        lo, hi = self.proposal_box()
        return rng.random((count, self.dim)) * (hi - lo) + lo

    # -- acceleration -----------------------------------------------------
    def accel_payload(self):
        """Flat-array encoding for the compiled membership kernel, or None."""
        return None


def _payload(tc, n, A=None, b=None, lo=None, hi=None, ipar=None, fpar=None):
    A = np.zeros((0, n)) if A is None else np.ascontiguousarray(A, dtype=np.float64)
    b = _EMPTY_F if b is None else np.ascontiguousarray(b, dtype=np.float64)
    lo = _EMPTY_F if lo is None else np.ascontiguousarray(lo, dtype=np.float64)
    hi = _EMPTY_F if hi is None else np.ascontiguousarray(hi, dtype=np.float64)
    ipar = _EMPTY_I if ipar is None else np.ascontiguousarray(ipar, dtype=np.int64)
    fpar = _EMPTY_F if fpar is None else np.ascontiguousarray(fpar, dtype=np.float64)
    ident = np.eye(n)
    zshift = np.zeros(n)
    return (False, ident, zshift, tc, A, b, lo, hi, ipar, fpar)


class Ball(StarBody):
    """Euclidean ball; convex, so the kernel is the body itself."""

    def __init__(self, n: int, r: float, center=None):
        if r <= 0:
            raise ValueError("radius must be positive")
        self._dim = int(n)
        self.r = float(r)
        self.center = np.zeros(n) if center is None else as_point(center, n)

    def contains_many(self, X):
        X = _as_batch(X, self.dim)
        d = X - self.center
        return np.einsum("ij,ij->i", d, d) <= self.r * self.r

    kernel_contains_many = contains_many

    def interior_point(self):
        return self.center.copy()

    def radius_bound(self):
        return float(np.linalg.norm(self.center) + self.r)

    def diameter_bound(self):
        return 2.0 * self.r

    def kernel_ball(self):
        return self.center.copy(), self.r

    def proposal_box(self):
        return self.center - self.r, self.center + self.r

    def proposal_sample(self, rng, count):
        # direct: uniform in the ball itself (rejection then accepts everything)
        d = rng.standard_normal((count, self.dim))
        d /= np.maximum(np.linalg.norm(d, axis=1), 1e-300)[:, None]
        rad = self.r * rng.random(count) ** (1.0 / self.dim)
        return self.center + d * rad[:, None]

    def accel_payload(self):
        return _payload(TC_BALL, self.dim, fpar=np.concatenate([[self.r], self.center]))


class Cube(StarBody):
    """Axis-aligned cube [-h, h]^n; convex."""

    def __init__(self, n: int, half_width: float):
        if half_width <= 0:
            raise ValueError("half_width must be positive")
        self._dim = int(n)
        self.half_width = float(half_width)

    def contains_many(self, X):
        X = _as_batch(X, self.dim)
        return np.all(np.abs(X) <= self.half_width, axis=1)

    kernel_contains_many = contains_many

    def interior_point(self):
        return np.zeros(self.dim)

    def radius_bound(self):
        return self.half_width * math.sqrt(self.dim)

    def diameter_bound(self):
        return 2.0 * self.half_width * math.sqrt(self.dim)

    def kernel_ball(self):
        return np.zeros(self.dim), self.half_width

    def proposal_box(self):
        h = self.half_width
        return -h * np.ones(self.dim), h * np.ones(self.dim)

    def accel_payload(self):
        h = self.half_width
        return _payload(TC_BOX, self.dim, lo=-h * np.ones(self.dim), hi=h * np.ones(self.dim))


def make_ball(n: int, r: float) -> Ball:
    return Ball(n, r)


def make_cube(n: int, half_width: float) -> Cube:
    return Cube(n, half_width)


class KOfMHalfspaces(StarBody):
    """Points satisfying at least k of m linear inequalities.

    The kernel is the intersection of all m (plus box constraints).  A witness
    point of the full intersection is required; specs that cannot certify a
    bounding radius (k < m without box_bound) are rejected.
    """

    def __init__(self, k: int, halfspaces, witness, box_bound=None):
        hs = tuple(halfspaces)
        m = len(hs)
        if not 1 <= k <= m:
            raise ValueError("need 1 <= k <= m")
        n = hs[0].a.shape[0]
        self._dim = n
        self.k = int(k)
        self.halfspaces = hs
        self.box_bound = tuple(box_bound) if box_bound else ()
        self.A = np.array([h.a for h in hs], dtype=np.float64)
        self.b = np.array([h.b for h in hs], dtype=np.float64)
        if self.box_bound:
            self.A_box = np.array([h.a for h in self.box_bound], dtype=np.float64)
            self.b_box = np.array([h.b for h in self.box_bound], dtype=np.float64)
        else:
            self.A_box = np.zeros((0, n))
            self.b_box = np.zeros(0)
        self.witness = as_point(witness, n)
        if not self.kernel_contains(self.witness):
            raise ValueError("witness point does not satisfy all constraints")
        # certify the bounding box
        if self.box_bound:
            lo, hi = _lp_coordinate_bounds(self.A_box, self.b_box)
        elif self.k == m:
            lo, hi = _lp_coordinate_bounds(self.A, self.b)
        else:
            raise ValueError("radius_bound cannot be certified: k < m requires box_bound")
        self._lo, self._hi = lo, hi

    def contains_many(self, X):
        X = _as_batch(X, self.dim)
        ok = np.sum(X @ self.A.T <= self.b, axis=1) >= self.k
        if self.A_box.shape[0]:
            ok &= np.all(X @ self.A_box.T <= self.b_box, axis=1)
        return ok

    def kernel_contains_many(self, X):
        X = _as_batch(X, self.dim)
        ok = np.all(X @ self.A.T <= self.b, axis=1)
        if self.A_box.shape[0]:
            ok &= np.all(X @ self.A_box.T <= self.b_box, axis=1)
        return ok

    def interior_point(self):
        return self.witness.copy()

    def radius_bound(self):
        return float(np.linalg.norm(np.maximum(np.abs(self._lo), np.abs(self._hi))))

    def diameter_bound(self):
        return float(np.linalg.norm(self._hi - self._lo))

    def kernel_ball(self):
        A = np.vstack([self.A, self.A_box])
        b = np.concatenate([self.b, self.b_box])
        return _chebyshev_center(A, b)

    def proposal_box(self):
        return self._lo.copy(), self._hi.copy()

    def accel_payload(self):
        A = np.vstack([self.A, self.A_box])
        b = np.concatenate([self.b, self.b_box])
        return _payload(TC_KOFM, self.dim, A=A, b=b, ipar=[self.k, self.A.shape[0]])


class KOfMPolytopes(StarBody):
    """Points lying in at least k of m polytopes with a common point."""

    def __init__(self, k: int, polytopes, witness):
        polys = tuple(polytopes)
        m = len(polys)
        if not 1 <= k <= m:
            raise ValueError("need 1 <= k <= m")
        n = polys[0].dim
        if any(p.dim != n for p in polys):
            raise ValueError("polytopes of mixed dimension")
        self._dim = n
        self.k = int(k)
        self.polytopes = polys
        self.witness = as_point(witness, n)
        if not self.kernel_contains(self.witness):
            raise ValueError("witness point is not in the intersection of all polytopes")
        los, his = [], []
        for p in polys:
            A, b = p.matrix()
            lo, hi = _lp_coordinate_bounds(A, b)
            los.append(lo)
            his.append(hi)
        self._lo = np.min(los, axis=0)
        self._hi = np.max(his, axis=0)

    def contains_many(self, X):
        X = _as_batch(X, self.dim)
        counts = np.zeros(X.shape[0], dtype=np.int64)
        for p in self.polytopes:
            counts += p.contains_many(X)
        return counts >= self.k

    def kernel_contains_many(self, X):
        X = _as_batch(X, self.dim)
        ok = np.ones(X.shape[0], dtype=bool)
        for p in self.polytopes:
            ok &= p.contains_many(X)
        return ok

    def interior_point(self):
        return self.witness.copy()

    def radius_bound(self):
        return float(np.linalg.norm(np.maximum(np.abs(self._lo), np.abs(self._hi))))

    def diameter_bound(self):
        return float(np.linalg.norm(self._hi - self._lo))

    def kernel_ball(self):
        mats = [p.matrix() for p in self.polytopes]
        A = np.vstack([m[0] for m in mats])
        b = np.concatenate([m[1] for m in mats])
        return _chebyshev_center(A, b)

    def proposal_box(self):
        return self._lo.copy(), self._hi.copy()

    def accel_payload(self):
        mats = [p.matrix() for p in self.polytopes]
        A = np.vstack([m[0] for m in mats])
        b = np.concatenate([m[1] for m in mats])
        offsets = np.cumsum([0] + [m[0].shape[0] for m in mats])
        ipar = np.concatenate([[self.k, len(self.polytopes)], offsets])
        return _payload(TC_KOFM_POLY, self.dim, A=A, b=b, ipar=ipar)


class AffineBody(StarBody):
    """Image {M x + shift : x in inner} of a body under an invertible map.

    Nested affine wraps are flattened at construction, so membership always
    costs one solve against the inner primitive.
    """

    def __init__(self, inner: StarBody, matrix, shift=None):
        n = inner.dim
        M = np.asarray(matrix, dtype=np.float64).reshape(n, n)
        t = np.zeros(n) if shift is None else as_point(shift, n)
        if isinstance(inner, AffineBody):
            # image under M1 then M2 equals image under M2 @ M1
            t = M @ inner.shift + t
            M = M @ inner.matrix
            inner = inner.inner
        cond = np.linalg.cond(M)
        if not np.isfinite(cond) or cond > 1e12:
            raise ValueError("singular map")
        self._dim = n
        self.inner = inner
        self.matrix = M
        self.shift = t
        self.matrix_inv = np.linalg.inv(M)
        self._svals = np.linalg.svd(M, compute_uv=False)

    def _pull_back(self, X):
        X = _as_batch(X, self.dim)
        return (X - self.shift) @ self.matrix_inv.T

    def contains_many(self, X):
        return self.inner.contains_many(self._pull_back(X))

    def kernel_contains_many(self, X):
        return self.inner.kernel_contains_many(self._pull_back(X))

    def interior_point(self):
        return self.matrix @ self.inner.interior_point() + self.shift

    def radius_bound(self):
        return float(self._svals[0] * self.inner.radius_bound() + np.linalg.norm(self.shift))

    def diameter_bound(self):
        return float(self._svals[0] * self.inner.diameter_bound())

    def kernel_ball(self):
        c, r = self.inner.kernel_ball()
        return self.matrix @ c + self.shift, float(r * self._svals[-1])

    def proposal_box(self):
        lo, hi = self.inner.proposal_box()
        corners = np.array(list(itertools.product(*zip(lo, hi))))
        mapped = corners @ self.matrix.T + self.shift
        return mapped.min(axis=0), mapped.max(axis=0)

    def proposal_sample(self, rng, count):
        return self.inner.proposal_sample(rng, count) @ self.matrix.T + self.shift

    def accel_payload(self):
        p = self.inner.accel_payload()
        if p is None:
            return None
        _, _, _, tc, A, b, lo, hi, ipar, fpar = p
        return (True, np.ascontiguousarray(self.matrix_inv), self.shift.copy(), tc, A, b, lo, hi, ipar, fpar)


class KernelOf(StarBody):
    """The (convex) kernel of a body, viewed as a body of its own."""

    _accel_kern = True  # kernel of the kernel is the kernel again

    def __init__(self, body: StarBody):
        while isinstance(body, KernelOf):
            body = body.body
        self._dim = body.dim
        self.body = body

    def contains_many(self, X):
        return self.body.kernel_contains_many(X)

    kernel_contains_many = contains_many

    def interior_point(self):
        return self.body.interior_point()

    def radius_bound(self):
        return self.body.radius_bound()

    def diameter_bound(self):
        return self.body.diameter_bound()

    def kernel_ball(self):
        return self.body.kernel_ball()

    def proposal_box(self):
        return self.body.proposal_box()

    def proposal_sample(self, rng, count):
        return self.body.proposal_sample(rng, count)

    def accel_payload(self):
        return self.body.accel_payload()


def affine_image(body: StarBody, map, shift=None) -> AffineBody:
    """Wrap a body with an invertible affine map (singular maps rejected)."""
    return AffineBody(body, map, shift)


def segment_in_body(body: StarBody, a, b, samples: int) -> bool:
    """Test-only certificate: all evenly spaced points of [a, b] are inside."""
    if samples < 2:
        raise ValueError("samples must be >= 2")
    a = as_point(a, body.dim)
    b = as_point(b, body.dim)
    ts = np.linspace(0.0, 1.0, samples)[:, None]
    pts = a[None, :] * (1.0 - ts) + b[None, :] * ts
    return bool(np.all(body.contains_many(pts)))
