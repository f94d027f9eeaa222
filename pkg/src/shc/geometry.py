"""C^{1,1} domains with the uniform ball condition: distances, normals,
volumes, surface quadrature, and boundary-layer (coarea) sampling.

Three variants: balls and half-spaces with exact formulas, and
implicit domains given by a true signed-distance callable (|grad d| = 1)
with a declared interior/exterior ball parameter R.  Boundary-layer
integrals use the parametrization x = y - s*nu(y) over (s, y) in
(0, a) x boundary; the area element of the inner parallel surface is
within ((R-a)/R)^(d-1) .. (R/(R-a))^(d-1) of the boundary's, which is
the sandwich every layer routine here reports against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.special import roots_legendre
from scipy.stats import qmc

from .errors import (
    InvalidModelError,
    NonUniqueProjectionError,
    SurfaceQualityError,
    UnboundedDomainError,
)
from .scaling import sphere_area


def ball_volume(d: int, radius: float) -> float:
    return math.pi ** (d / 2.0) / math.gamma(d / 2.0 + 1.0) * radius**d


@dataclass(frozen=True)
class SurfaceQuadrature:
    nodes: np.ndarray    # (n, d) boundary points
    weights: np.ndarray  # (n,), sum = |boundary|
    normals: np.ndarray  # (n, d) outward units

    @property
    def total(self) -> float:
        return float(self.weights.sum())


class Domain:
    """Common interface; see Ball, HalfSpace, ImplicitDomain."""

    dimension: int
    ball_R: float  # uniform interior/exterior ball parameter

    def signed_distance(self, x):  # negative inside
        raise NotImplementedError

    @property
    def bounded(self) -> bool:
        raise NotImplementedError

    def contains(self, x):
        return self.signed_distance(x) < 0


class Ball(Domain):
    def __init__(self, center, radius: float):
        self.center = np.asarray(center, dtype=float)
        if radius <= 0:
            raise ValueError("radius must be positive")
        self.radius = float(radius)
        self.dimension = self.center.shape[0]
        self.ball_R = self.radius

    @property
    def bounded(self) -> bool:
        return True

    def signed_distance(self, x):
        x = np.asarray(x, dtype=float)
        rel = x - self.center
        dist = np.sqrt((rel * rel).sum(axis=-1))
        return dist - self.radius

    def volume(self) -> float:
        return ball_volume(self.dimension, self.radius)

    def surface_area(self) -> float:
        return sphere_area(self.dimension) * self.radius ** (self.dimension - 1)


class HalfSpace(Domain):
    """{x : <x - point, normal> < 0} with `normal` the outward unit."""

    def __init__(self, point, normal):
        self.point = np.asarray(point, dtype=float)
        normal = np.asarray(normal, dtype=float)
        nrm = np.linalg.norm(normal)
        if nrm == 0:
            raise ValueError("normal must be nonzero")
        self.normal = normal / nrm
        self.dimension = self.point.shape[0]
        self.ball_R = math.inf

    @property
    def bounded(self) -> bool:
        return False

    def signed_distance(self, x):
        x = np.asarray(x, dtype=float)
        return (x - self.point) @ self.normal


class ImplicitDomain(Domain):
    """Domain from a true signed-distance field (negative inside).

    The gradient-norm identity |grad d| = 1 is spot-checked at random
    boundary-layer points at construction, and the declared ball
    parameter is probed against osculating-sphere curvature estimates.
    """

    def __init__(self, sd, ball_R: float, bbox, name: str = "implicit",
                 grad_step: float = 1e-6, validate: bool = True):
        self._sd = sd
        self.ball_R = float(ball_R)
        lo, hi = bbox
        self.bbox = (np.asarray(lo, dtype=float), np.asarray(hi, dtype=float))
        self.dimension = self.bbox[0].shape[0]
        self.name = name
        self.grad_step = grad_step
        self._quad_cache: dict = {}
        if validate:
            self._validate()

    @property
    def bounded(self) -> bool:
        return True

    def signed_distance(self, x):
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        val = np.asarray(self._sd(x[None, :] if single else x), dtype=float)
        return float(val[0]) if single else val

    def gradient(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        h = self.grad_step
        g = np.empty_like(x)
        for k in range(self.dimension):
            e = np.zeros(self.dimension)
            e[k] = h
            g[:, k] = (self.signed_distance(x + e) - self.signed_distance(x - e)) / (
                2 * h
            )
        return g

    def laplacian(self, x):
        """Sum of principal curvatures of the level set through x."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        h = 1e-4 * self.ball_R
        acc = np.zeros(x.shape[0])
        d0 = self.signed_distance(x)
        for k in range(self.dimension):
            e = np.zeros(self.dimension)
            e[k] = h
            acc += self.signed_distance(x + e) + self.signed_distance(x - e) - 2 * d0
        return acc / (h * h)

    def _validate(self):
        rng_ = np.random.default_rng(1234)
        lo, hi = self.bbox
        pts = lo + (hi - lo) * rng_.random((4000, self.dimension))
        sd = self.signed_distance(pts)
        layer = pts[(sd > -0.5 * self.ball_R) & (sd < 0.5 * self.ball_R)][:1000]
        if len(layer) < 16:
            raise InvalidModelError("bounding box misses the boundary layer")
        gn = np.linalg.norm(self.gradient(layer), axis=1)
        if np.max(np.abs(gn - 1.0)) > 1e-4:
            raise InvalidModelError(
                "callable is not a signed distance: |grad d| deviates from 1 "
                f"by {np.max(np.abs(gn - 1.0)):.2e}"
            )
        # Osculating-sphere probe of the declared R at 64 boundary points.
        y, _, _ = boundary_projection(self, layer[:64])
        curv = np.abs(self.laplacian(y)) / (self.dimension - 1)
        implied = 1.0 / max(curv.max(), 1e-12)
        if self.ball_R > 1.5 * implied:
            raise InvalidModelError(
                f"declared ball parameter {self.ball_R} inconsistent with "
                f"curvature probe (implied <= {implied:.3g})"
            )


def signed_distance(domain: Domain, x):
    """Signed distance to the boundary (negative inside)."""
    return domain.signed_distance(x)


def boundary_projection(domain: Domain, x):
    """Unique projection of layer points: x = y - delta * nu.

    Returns (y, nu, delta) with nu the outward unit normal at y and
    delta = -signed_distance(x) (positive inside).  Points at interior
    depth >= R have no unique projection and raise.
    """
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    pts = np.atleast_2d(x)
    sd = np.atleast_1d(domain.signed_distance(pts))
    if np.any(-sd >= domain.ball_R * (1 - 1e-12)):
        raise NonUniqueProjectionError(
            "point(s) at depth >= R: projection not unique"
        )
    if isinstance(domain, Ball):
        rel = pts - domain.center
        dist = np.linalg.norm(rel, axis=1, keepdims=True)
        if np.any(dist < 1e-14):
            raise NonUniqueProjectionError("center of the ball")
        nu = rel / dist
        y = domain.center + domain.radius * nu
    elif isinstance(domain, HalfSpace):
        nu = np.broadcast_to(domain.normal, pts.shape).copy()
        y = pts - sd[:, None] * nu
    elif isinstance(domain, ImplicitDomain):
        y = pts.copy()
        for _ in range(50):
            val = domain.signed_distance(y)
            if np.max(np.abs(val)) < 1e-12 * domain.ball_R:
                break
            g = domain.gradient(y)
            gn2 = (g * g).sum(axis=1, keepdims=True)
            y = y - (val[:, None] * g) / np.maximum(gn2, 1e-12)
        g = domain.gradient(y)
        nu = g / np.linalg.norm(g, axis=1, keepdims=True)
    else:
        raise TypeError(f"unsupported domain {type(domain)}")
    delta = -sd
    if single:
        return y[0], nu[0], float(delta[0])
    return y, nu, delta


def volume(domain: Domain, *, n_qmc: int = 1 << 17, seed: int = 2024):
    """|D|; exact for balls, scrambled-QMC for implicit domains.

    Returns (value, stderr); stderr is 0 for exact cases.
    """
    if not domain.bounded:
        raise UnboundedDomainError("volume of an unbounded domain")
    if isinstance(domain, Ball):
        return domain.volume(), 0.0
    lo, hi = domain.bbox
    box = float(np.prod(hi - lo))
    reps = []
    for k in range(8):
        sob = qmc.Sobol(d=domain.dimension, scramble=True, seed=seed + k)
        pts = lo + (hi - lo) * sob.random(n_qmc // 8)
        reps.append(box * float(np.mean(domain.signed_distance(pts) < 0)))
    reps = np.array(reps)
    return float(reps.mean()), float(reps.std(ddof=1) / math.sqrt(len(reps)))


def _fibonacci_sphere(n: int) -> np.ndarray:
    k = np.arange(n) + 0.5
    phi = math.pi * (1 + 5**0.5) * k
    cos_t = 1 - 2 * k / n
    sin_t = np.sqrt(1 - cos_t**2)
    return np.stack([sin_t * np.cos(phi), sin_t * np.sin(phi), cos_t], axis=1)


def surface_quadrature(domain: Domain, n_nodes: int = 1024) -> SurfaceQuadrature:
    """Boundary nodes/weights/normals with sum(weights) = |boundary|."""
    if not domain.bounded:
        raise UnboundedDomainError("surface quadrature needs a bounded domain")
    if isinstance(domain, Ball):
        d, R = domain.dimension, domain.radius
        if d == 2:
            ang = 2 * math.pi * (np.arange(n_nodes) + 0.5) / n_nodes
            normals = np.stack([np.cos(ang), np.sin(ang)], axis=1)
        elif d == 3:
            normals = _fibonacci_sphere(n_nodes)
        else:
            g = np.random.default_rng(7).standard_normal((n_nodes, d))
            normals = g / np.linalg.norm(g, axis=1, keepdims=True)
        nodes = domain.center + R * normals
        w = np.full(n_nodes, domain.surface_area() / n_nodes)
        return SurfaceQuadrature(nodes, w, normals)
    if isinstance(domain, ImplicitDomain):
        key = n_nodes
        hit = domain._quad_cache.get(key)
        if hit is not None:
            return hit
        quad = _implicit_surface_quadrature(domain, n_nodes)
        domain._quad_cache[key] = quad
        return quad
    raise TypeError(f"unsupported domain {type(domain)}")


def _implicit_surface_quadrature(domain: ImplicitDomain, n_nodes: int):
    """Shell sampling of {|d| < h}, projected, with density correction.

    Each kept point x at offset s = d(x) contributes weight
    (box/N)/(2h) divided by the parallel-surface Jacobian estimate
    (1 + s * laplacian), so the weights sum to |boundary| + O(h^2).
    """
    h = 1e-3 * domain.ball_R
    lo, hi = domain.bbox
    box = float(np.prod(hi - lo))
    sob = qmc.Sobol(d=domain.dimension, scramble=True, seed=99)
    kept, offs = [], []
    n_total = 0
    while sum(len(k) for k in kept) < n_nodes and n_total < (1 << 26):
        pts = lo + (hi - lo) * sob.random(1 << 16)
        n_total += len(pts)
        sd = domain.signed_distance(pts)
        mask = np.abs(sd) < h
        kept.append(pts[mask])
        offs.append(sd[mask])
    pts = np.concatenate(kept, axis=0)
    offs = np.concatenate(offs)
    if len(pts) == 0:
        raise SurfaceQualityError("no shell points found; check the bbox")
    y, nu, _ = boundary_projection(domain, pts)
    resid = np.abs(domain.signed_distance(y))
    bad = resid > 1e-8 * domain.ball_R
    if bad.mean() > 1e-3:
        raise SurfaceQualityError(
            f"{bad.mean():.2%} of shell projections failed"
        )
    ok = ~bad
    y, nu, offs, pts = y[ok], nu[ok], offs[ok], pts[ok]
    jac = 1.0 + offs * domain.laplacian(pts)
    w = (box / n_total) / (2 * h) / np.maximum(jac, 0.5)
    return SurfaceQuadrature(y, w, nu)


def layer_jacobian(domain: Domain, quad: SurfaceQuadrature, s, node_idx):
    """Inner-parallel-surface area factor at depth s from given nodes.

    Exact ((R-s)/R)^(d-1) for balls; curvature-based first-order form
    (1 - s*H/(d-1))^(d-1) for implicit domains; 1 for half-spaces.
    """
    d = domain.dimension
    if isinstance(domain, Ball):
        return ((domain.radius - s) / domain.radius) ** (d - 1)
    if isinstance(domain, HalfSpace):
        return np.ones_like(np.asarray(s, dtype=float))
    key = ("curvature", len(quad.weights))
    curv = domain._quad_cache.get(key)
    if curv is None:
        curv = domain.laplacian(quad.nodes)
        domain._quad_cache[key] = curv
    return np.maximum(1.0 - s * curv[node_idx] / (d - 1), 0.0) ** (d - 1)


@dataclass(frozen=True)
class LayerSample:
    """Monte Carlo sample of the boundary layer D \\ D_a.

    `weight` integrates the layer parametrization (sum w_i f(x_i) /n ->
    layer integral); multiplying by `jacobian` targets the volume
    integral over the layer instead.
    """

    x: np.ndarray
    y: np.ndarray
    s: np.ndarray
    nu: np.ndarray
    weight: float
    jacobian: np.ndarray


def layer_sample(domain: Domain, a: float, rng_: np.random.Generator,
                 n: int, *, quad: Optional[SurfaceQuadrature] = None) -> LayerSample:
    """Draw (y, s) with y ~ surface measure and s ~ U(0, a).

    The induced weighted integral approximates the layer integral
    int_0^a int f(y - s nu) S(dy) ds; `jacobian` upgrades it to the
    volume integral within the usual sandwich factors.
    """
    if not (0 < a < domain.ball_R / 2):
        raise ValueError("layer width must lie in (0, R/2)")
    if quad is None:
        quad = surface_quadrature(domain)
    p = quad.weights / quad.total
    idx = rng_.choice(len(p), size=n, p=p)
    s = a * rng_.random(n)
    y = quad.nodes[idx]
    nu = quad.normals[idx]
    x = y - s[:, None] * nu
    jac = layer_jacobian(domain, quad, s, idx)
    return LayerSample(x=x, y=y, s=s, nu=nu, weight=a * quad.total, jacobian=jac)


@dataclass(frozen=True)
class CoareaReport:
    ratio: float
    band: float
    lower: float
    upper: float
    volume_integral: float
    layer_integral: float
    status: str  # "pass" | "fail" | "inconclusive"


def coarea_sandwich_check(
    domain: Domain,
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    *,
    n_qmc: int = 1 << 16,
    s_order: int = 32,
    n_surface: int = 2048,
    seed: int = 7,
) -> CoareaReport:
    """Check the layer-vs-volume sandwich for a bounded integrand.

    The volume side uses scrambled QMC over the bounding box restricted
    to the layer; the boundary side uses surface quadrature x a 1-d
    Gauss rule in the depth. Bands wider than the sandwich gap give an
    inconclusive status rather than a failure.
    """
    if not (0 < a < domain.ball_R / 2):
        raise ValueError("layer width must lie in (0, R/2)")
    if not domain.bounded:
        raise UnboundedDomainError("sandwich check needs a bounded domain")
    d = domain.dimension
    if isinstance(domain, Ball):
        lo = domain.center - domain.radius
        hi = domain.center + domain.radius
    else:
        lo, hi = domain.bbox
    box = float(np.prod(hi - lo))
    reps = []
    for k in range(8):
        sob = qmc.Sobol(d=d, scramble=True, seed=seed + k)
        pts = lo + (hi - lo) * sob.random(n_qmc // 8)
        sd = domain.signed_distance(pts)
        mask = (sd > -a) & (sd < 0)
        vals = np.zeros(len(pts))
        if mask.any():
            vals[mask] = f(pts[mask])
        reps.append(box * vals.mean())
    reps = np.array(reps)
    vol_int = float(reps.mean())
    vol_se = float(reps.std(ddof=1) / math.sqrt(len(reps)))

    quad = surface_quadrature(domain, n_surface)
    gl_x, gl_w = roots_legendre(s_order)
    s_nodes = 0.5 * a * (gl_x + 1.0)
    s_w = 0.5 * a * gl_w
    layer_int = 0.0
    for s, w in zip(s_nodes, s_w):
        pts = quad.nodes - s * quad.normals
        layer_int += w * float(quad.weights @ f(pts))

    lower = ((domain.ball_R - a) / domain.ball_R) ** (d - 1)
    upper = (domain.ball_R / (domain.ball_R - a)) ** (d - 1)
    ratio = vol_int / layer_int
    band = 3 * vol_se / abs(layer_int)
    if band > (upper - lower):
        status = "inconclusive"
    elif lower - band <= ratio <= upper + band:
        status = "pass"
    else:
        status = "fail"
    return CoareaReport(
        ratio=ratio, band=band, lower=lower, upper=upper,
        volume_integral=vol_int, layer_integral=layer_int, status=status,
    )


def sample_interior(domain: Domain, n: int, rng_: np.random.Generator) -> np.ndarray:
    """Uniform points in a bounded domain."""
    if not domain.bounded:
        raise UnboundedDomainError("cannot sample an unbounded domain")
    d = domain.dimension
    if isinstance(domain, Ball):
        g = rng_.standard_normal((n, d))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        r = domain.radius * rng_.random(n) ** (1.0 / d)
        return domain.center + g * r[:, None]
    lo, hi = domain.bbox
    out = np.empty((0, d))
    while len(out) < n:
        pts = lo + (hi - lo) * rng_.random((2 * n, d))
        out = np.concatenate([out, pts[domain.signed_distance(pts) < 0]])
    return out[:n]


# ----- built-in implicit catalog (exact signed distances) -----


def implicit_ball(center, radius: float) -> ImplicitDomain:
    center = np.asarray(center, dtype=float)

    def sd(x):
        return np.linalg.norm(x - center, axis=-1) - radius

    pad = 1.25 * radius
    return ImplicitDomain(
        sd, ball_R=radius, bbox=(center - pad, center + pad), name="implicit-ball"
    )


def rounded_box(half_widths, corner_radius: float) -> ImplicitDomain:
    """Axis-aligned box with rounded corners; exact SDF, R = corner radius."""
    b = np.asarray(half_widths, dtype=float) - corner_radius
    if np.any(b <= 0):
        raise ValueError("corner radius exceeds a half-width")

    def sd(x):
        q = np.abs(x) - b
        outside = np.linalg.norm(np.maximum(q, 0.0), axis=-1)
        inside = np.minimum(q.max(axis=-1), 0.0)
        return outside + inside - corner_radius

    pad = b + 2.0 * corner_radius
    return ImplicitDomain(sd, ball_R=corner_radius, bbox=(-pad, pad),
                          name="rounded-box")


def stadium(half_length: float, radius: float) -> ImplicitDomain:
    """2-d capsule: points within `radius` of a horizontal segment."""

    def sd(x):
        px = np.clip(x[..., 0], -half_length, half_length)
        rel = np.array(x, dtype=float)
        rel[..., 0] -= px
        return np.linalg.norm(rel, axis=-1) - radius

    pad = np.array([half_length + 2 * radius, 2 * radius])
    return ImplicitDomain(sd, ball_R=radius, bbox=(-pad, pad), name="stadium")
