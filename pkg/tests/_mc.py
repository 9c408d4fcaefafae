"""Monte Carlo oracles for moments, independent of the closed-form paths.

Volume moments use hit-or-miss sampling in a bounding box with a containment
test that never touches the Green's-theorem / barycentric formulas; boundary
moments sample the boundary directly (length-, measure- or speed-weighted).
Every estimate comes with its standard error so tests can assert agreement
within k standard errors.
"""

from __future__ import annotations

import math

import numpy as np

from isomoment import Ellipsoid, FourierBoundary, Polygon, SimplicialBody, evaluate


class Estimate:
    def __init__(self, value, se):
        self.value = float(value)
        self.se = float(se)

    def agrees(self, reference, k=4.0, floor=0.0):
        return abs(self.value - reference) <= k * self.se + floor

    def __repr__(self):
        return f"Estimate({self.value:.6g} +- {self.se:.2g})"


def _estimate(samples, scale):
    n = len(samples)
    mean = float(np.mean(samples))
    se = float(np.std(samples) / np.sqrt(n))
    return Estimate(scale * mean, scale * se)


def _eval_powers(fb, sigma, block=131072):
    """Curve evaluation via powers of exp(i sigma); same values as
    ``isomoment.evaluate`` but cheaper for large random sample sets."""
    if len(sigma) > block:
        parts = [_eval_powers(fb, sigma[i:i + block])
                 for i in range(0, len(sigma), block)]
        return (np.vstack([p[0] for p in parts]),
                np.vstack([p[1] for p in parts]))
    z = np.exp(1j * sigma)
    zp = z.copy()
    x = np.full(sigma.shape, 0.5 * fb.a0)
    y = np.full(sigma.shape, 0.5 * fb.b0)
    dx = np.zeros_like(x)
    dy = np.zeros_like(y)
    tmp = np.empty_like(x)

    def fma(target, arr, coeff):
        if coeff:
            np.multiply(arr, coeff, out=tmp)
            target += tmp

    for k in range(1, fb.order + 1):
        re, im = zp.real, zp.imag            # views, no copies
        a, ap, b, bp = fb.a[k - 1], fb.ap[k - 1], fb.b[k - 1], fb.bp[k - 1]
        fma(x, re, a)
        fma(x, im, ap)
        fma(y, re, b)
        fma(y, im, bp)
        fma(dx, im, -k * a)
        fma(dx, re, k * ap)
        fma(dy, im, -k * b)
        fma(dy, re, k * bp)
        if k < fb.order:
            zp *= z
    return np.column_stack([x, y]), np.column_stack([dx, dy])


# ---------------------------------------------------------------------------
# Containment tests
# ---------------------------------------------------------------------------


def _contains_polygon(vertices, pts):
    v0 = vertices
    v1 = np.roll(vertices, -1, axis=0)
    x, y = pts[:, 0], pts[:, 1]
    inside = np.zeros(len(pts), dtype=bool)
    for (x0, y0), (x1, y1) in zip(v0, v1):
        crosses = (y0 <= y[:]) != (y1 <= y)
        with np.errstate(divide="ignore", invalid="ignore"):
            xi = x0 + (y - y0) * (x1 - x0) / (y1 - y0)
        inside ^= crosses & (x < xi)
    return inside


def _contains_simplicial(body, pts, block=40_000):
    # One BLAS product against all simplices' inverse edge maps at once.
    # Single precision is ample: boundary-grazing misclassifications shift
    # the estimate by far less than its own standard error.
    verts = body.vertices
    dim = body.dimension
    origins = verts[body.simplices[:, 0]]                   # (s, N)
    edges = verts[body.simplices[:, 1:]] - origins[:, None]  # (s, N, N) rows
    inv = np.linalg.inv(np.transpose(edges, (0, 2, 1)))     # coords -> barycentric
    flat = np.hstack([m.T for m in inv]).astype(np.float32)  # (N, s*N)
    shift = np.concatenate([-m @ o for m, o in zip(inv, origins)]).astype(np.float32)
    out = np.empty(len(pts), dtype=bool)
    pts32 = pts.astype(np.float32)
    for lo in range(0, len(pts), block):
        chunk = pts32[lo:lo + block]
        lam = (chunk @ flat + shift).reshape(len(chunk), len(inv), dim)
        ok = lam[:, :, 0] >= 0.0
        total = lam[:, :, 0].copy()
        for j in range(1, dim):          # unrolled: reductions over a
            ok &= lam[:, :, j] >= 0.0    # length-N axis are ufunc-bound
            total += lam[:, :, j]
        ok &= total <= 1.0
        out[lo:lo + block] = np.any(ok, axis=1)
    return out


def _contains_fourier(fb, pts, boundary_samples=4096):
    """Containment from dense boundary samples.

    Star-shaped-about-origin curves (the generated test shapes) use an exact
    polar comparison against the interpolated boundary radius; anything else
    falls back to matplotlib's even-odd path test.
    """
    bpts, _ = evaluate(fb, 2.0 * np.pi * np.arange(boundary_samples) / boundary_samples)
    theta = np.unwrap(np.arctan2(bpts[:, 1], bpts[:, 0]))
    if np.all(np.diff(theta) > 0.0) and abs(theta[-1] - theta[0]) < 2.0 * np.pi:
        radius = np.hypot(bpts[:, 0], bpts[:, 1])
        order = np.argsort(theta % (2.0 * np.pi))
        tgrid = (theta % (2.0 * np.pi))[order]
        rgrid = radius[order]
        # Wrap the grid once so plain interp covers [0, 2*pi) queries.
        tgrid = np.concatenate([[tgrid[-1] - 2.0 * np.pi], tgrid,
                                [tgrid[0] + 2.0 * np.pi]])
        rgrid = np.concatenate([[rgrid[-1]], rgrid, [rgrid[0]]])
        tq = np.arctan2(pts[:, 1], pts[:, 0]) % (2.0 * np.pi)
        rq = np.interp(tq, tgrid, rgrid)
        return np.hypot(pts[:, 0], pts[:, 1]) <= rq
    from matplotlib.path import Path

    return Path(bpts).contains_points(pts)


def _contains(shape, pts):
    if isinstance(shape, Polygon):
        return _contains_polygon(shape.vertices, pts)
    if isinstance(shape, SimplicialBody):
        return _contains_simplicial(shape, pts)
    if isinstance(shape, Ellipsoid):
        return np.sum(((pts - shape.center) / shape.semi_axes) ** 2, axis=1) <= 1.0
    if isinstance(shape, FourierBoundary):
        return _contains_fourier(shape, pts)
    raise TypeError(type(shape))


def _bounding_box(shape, pad=1e-9):
    if isinstance(shape, Polygon):
        pts = shape.vertices
    elif isinstance(shape, SimplicialBody):
        pts = shape.vertices
    elif isinstance(shape, Ellipsoid):
        lo = shape.center - shape.semi_axes
        hi = shape.center + shape.semi_axes
        return lo - pad, hi + pad
    else:
        pts, _ = evaluate(shape, 2.0 * np.pi * np.arange(1024) / 1024)
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    span = hi - lo
    return lo - pad * span, hi + pad * span


def volume_moments(shape, n=1_000_000, seed=0, chunk=200_000):
    """Hit-or-miss estimates of the volume and every J_k, with standard errors.

    Returns ``(volume_estimate, [J_k estimates])``.  Standard errors come
    from running first and second sample moments; misses contribute zero, so
    only hit points enter the sums.
    """
    lo, hi = _bounding_box(shape)
    dim = len(lo)
    box = float(np.prod(hi - lo))
    rng = np.random.default_rng(seed)
    count = 0
    s1 = np.zeros(dim)
    s2 = np.zeros(dim)
    done = 0
    while done < n:
        m = min(chunk, n - done)
        pts = rng.uniform(lo, hi, (m, dim))
        inside = _contains(shape, pts)
        count += int(np.count_nonzero(inside))
        sq = pts[inside] ** 2
        s1 += sq.sum(axis=0)
        s2 += (sq * sq).sum(axis=0)
        done += m

    def from_sums(total, total_sq):
        mean = total / n
        var = max(total_sq / n - mean * mean, 0.0)
        return Estimate(box * mean, box * math.sqrt(var / n))

    vol = from_sums(float(count), float(count))    # indicator: f^2 = f
    js = [from_sums(s1[k], s2[k]) for k in range(dim)]
    return vol, js


def boundary_moments(shape, n=1_000_000, seed=0):
    """Boundary-sampling estimates of the surface measure and every I_k.

    Returns ``(surface_estimate, [I_k estimates])``.  The surface estimate is
    exact (zero standard error) for polygons, simplicial bodies and balls,
    where sampling is done directly in the boundary measure.
    """
    rng = np.random.default_rng(seed)
    if isinstance(shape, Polygon):
        v = shape.vertices
        w = np.roll(v, -1, axis=0)
        lengths = np.linalg.norm(w - v, axis=1)
        total = float(np.sum(lengths))
        edge = rng.choice(len(v), size=n, p=lengths / total)
        t = rng.uniform(0.0, 1.0, n)
        pts = v[edge] + t[:, None] * (w[edge] - v[edge])
        surface = Estimate(total, 0.0)
    elif isinstance(shape, SimplicialBody):
        measures = shape.facet_measures()
        total = float(np.sum(measures))
        idx = rng.choice(len(measures), size=n, p=measures / total)
        dim = shape.dimension
        lam = rng.dirichlet(np.ones(dim), size=n)
        pts = np.einsum("nk,nkd->nd", lam, shape.vertices[shape.facets[idx]])
        surface = Estimate(total, 0.0)
    elif isinstance(shape, Ellipsoid) and shape.is_ball():
        dim = shape.dimension
        r = float(np.mean(shape.semi_axes))
        g = rng.standard_normal((n, dim))
        pts = shape.center + r * g / np.linalg.norm(g, axis=1, keepdims=True)
        from isomoment import ball_surface_measure

        surface = Estimate(ball_surface_measure(dim, r), 0.0)
    elif isinstance(shape, FourierBoundary) or \
            (isinstance(shape, Ellipsoid) and shape.dimension == 2):
        # Uniform parameter samples, importance-weighted by the speed.
        if isinstance(shape, Ellipsoid):
            ax, ay = shape.semi_axes
            sig = rng.uniform(0.0, 2.0 * np.pi, n)
            pts = shape.center + np.column_stack([ax * np.cos(sig), ay * np.sin(sig)])
            speed = np.hypot(-ax * np.sin(sig), ay * np.cos(sig))
        else:
            sig = rng.uniform(0.0, 2.0 * np.pi, n)
            pts, tan = _eval_powers(shape, sig)
            speed = np.hypot(tan[:, 0], tan[:, 1])
        surface = _estimate(speed, 2.0 * np.pi)
        out = [_estimate(pts[:, k] ** 2 * speed, 2.0 * np.pi) for k in range(2)]
        return surface, out
    else:
        raise TypeError(type(shape))
    dim = pts.shape[1]
    out = [_estimate(pts[:, k] ** 2, 1.0) for k in range(dim)]
    for e in out:
        e.value *= surface.value
        e.se *= surface.value
    return surface, out
