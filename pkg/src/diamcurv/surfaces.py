"""Built-in surface generators and the ``name(arg, ...)`` spec parser."""
from __future__ import annotations

import math
import re

import numpy as np

from .geometry.ambient import AmbientSpace
from .geometry.immersion import ParametricImmersion, TriangleMeshImmersion
from .geometry.mesh import icosphere, periodic_grid, read_mesh

__all__ = [
    "SurfaceSpecError",
    "GENERATORS",
    "parse_surface_spec",
    "generate",
    "sphere",
    "ellipsoid",
    "torus",
    "bumpy_sphere",
    "flat_torus_4d",
    "small_sphere",
    "equator",
    "geodesic_sphere",
    "load_mesh",
]

MAX_LEVEL = 6
MAX_GRID = 1024


class SurfaceSpecError(ValueError):
    """``code`` is UNKNOWN_GENERATOR or PARAMETER_RANGE."""

    def __init__(self, code, message):
        super().__init__(f"{code}: {message}")
        self.code = code


def _check_level(level):
    if not 1 <= level <= MAX_LEVEL:
        raise SurfaceSpecError("PARAMETER_RANGE", f"icosphere level must be in 1..{MAX_LEVEL}")
    return int(level)


def _check_grid(n):
    if not 8 <= n <= MAX_GRID:
        raise SurfaceSpecError("PARAMETER_RANGE", f"grid size must be in 8..{MAX_GRID}")
    return int(n)


def _positive(name, value):
    if not value > 0:
        raise SurfaceSpecError("PARAMETER_RANGE", f"{name} must be > 0, got {value}")
    return float(value)


def sphere(r=1.0, level=4):
    r = _positive("r", r)
    v, f = icosphere(_check_level(level))
    return TriangleMeshImmersion(r * v, f, name="sphere", params={"r": r, "level": level})


def ellipsoid(a=2.0, b=1.0, c=1.0, level=4):
    a, b, c = (_positive(n, x) for n, x in zip("abc", (a, b, c)))
    v, f = icosphere(_check_level(level))
    return TriangleMeshImmersion(
        v * [a, b, c], f, name="ellipsoid", params={"a": a, "b": b, "c": c, "level": level}
    )


def torus(R=2.0, r=1.0, n=96):
    """Torus of revolution; ``n`` cells around the core circle, proportionally
    fewer around the tube."""
    R, r = _positive("R", R), _positive("r", r)
    if r >= R:
        raise SurfaceSpecError("PARAMETER_RANGE", "torus needs r < R")
    nu = _check_grid(n)
    nv = max(8, int(round(nu * r / R)))
    params, f = periodic_grid(nu, nv)
    u, v = params[:, 0], params[:, 1]
    x = np.stack([(R + r * np.cos(v)) * np.cos(u), (R + r * np.cos(v)) * np.sin(u), r * np.sin(v)], axis=1)
    return TriangleMeshImmersion(x, f, name="torus", params={"R": R, "r": r, "n": nu})


def bumpy_sphere(r=1.0, amp=0.1, freq=3.0, seed=0, level=4, n_waves=6):
    """Sphere with a smooth random radial perturbation
    ``r (1 + amp * mean_k cos(freq <p, d_k> + phi_k))``."""
    r = _positive("r", r)
    if not 0 <= amp < 0.5:
        raise SurfaceSpecError("PARAMETER_RANGE", "amp must be in [0, 0.5)")
    rng = np.random.default_rng(int(seed))
    dirs = rng.normal(size=(n_waves, 3))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    phases = rng.uniform(0.0, 2.0 * np.pi, size=n_waves)
    v, f = icosphere(_check_level(level))
    bump = np.cos(freq * v @ dirs.T + phases).mean(axis=1)
    x = v * (r * (1.0 + amp * bump))[:, None]
    return TriangleMeshImmersion(
        x, f, name="bumpy-sphere",
        params={"r": r, "amp": float(amp), "freq": float(freq), "seed": int(seed), "level": level},
    )


def flat_torus_4d(r1=1.0, r2=1.0, n=64):
    """Clifford-type torus ``(r1 cos u, r1 sin u, r2 cos v, r2 sin v)`` in R^4."""
    r1, r2 = _positive("r1", r1), _positive("r2", r2)
    n = _check_grid(n)
    params, f = periodic_grid(n, n)

    def chart(q):
        u, v = q[..., 0], q[..., 1]
        return np.stack([r1 * np.cos(u), r1 * np.sin(u), r2 * np.cos(v), r2 * np.sin(v)], axis=-1)

    h = 2.0 * np.pi / n
    return ParametricImmersion(
        chart, params, f, AmbientSpace.flat(4), "torus", (h, h),
        name="flat-torus-4d", params={"r1": r1, "r2": r2, "n": n},
    )


def _sphere_domain(level):
    p, f = icosphere(_check_level(level))
    e = np.linalg.norm(p[f[:, 0]] - p[f[:, 1]], axis=1)
    return p, f, float(e.mean())


def _geodesic_sphere_in(ambient, rho, level, name, params):
    k = ambient.curvature
    p, f, h = _sphere_domain(level)
    if ambient.kind == "sphere":
        theta = k * rho
        c, s = math.cos(theta), math.sin(theta)
    else:
        theta = k * rho
        c, s = math.cosh(theta), math.sinh(theta)

    def chart(q):
        head = np.full(q.shape[:-1] + (1,), c)
        return np.concatenate([head, s * q], axis=-1) / k

    return ParametricImmersion(chart, p, f, ambient, "sphere", (h, h), name=name, params=params)


def small_sphere(rho=0.1, b=1.0, level=4):
    """Geodesic sphere of radius ``rho`` in the round 3-sphere of curvature b^2."""
    rho, b = _positive("rho", rho), _positive("b", b)
    if not rho * b < math.pi:
        raise SurfaceSpecError("PARAMETER_RANGE", "small-sphere needs rho < pi / b")
    return _geodesic_sphere_in(
        AmbientSpace.round_sphere(3, b), rho, level, "small-sphere", {"rho": rho, "b": b, "level": level}
    )


def equator(b=1.0, level=4):
    """Totally geodesic equatorial 2-sphere of the round 3-sphere."""
    b = _positive("b", b)
    return _geodesic_sphere_in(
        AmbientSpace.round_sphere(3, b), math.pi / (2 * b), level, "equator", {"b": b, "level": level}
    )


def geodesic_sphere(rho=0.5, beta=1.0, level=4):
    """Geodesic sphere of radius ``rho`` in hyperbolic 3-space of curvature -beta^2."""
    rho, beta = _positive("rho", rho), _positive("beta", beta)
    return _geodesic_sphere_in(
        AmbientSpace.hyperbolic_space(3, beta), rho, level, "geodesic-sphere",
        {"rho": rho, "beta": beta, "level": level},
    )


def load_mesh(path):
    v, f = read_mesh(path)
    return TriangleMeshImmersion(v, f, name=str(path), params={"path": str(path)})


# name -> (function, positional parameter names, resolution keyword, ambient keyword)
GENERATORS = {
    "sphere": (sphere, ("r",), "level", None),
    "ellipsoid": (ellipsoid, ("a", "b", "c"), "level", None),
    "torus": (torus, ("R", "r"), "n", None),
    "bumpy-sphere": (bumpy_sphere, ("r", "amp", "freq", "seed"), "level", None),
    "flat-torus-4d": (flat_torus_4d, ("r1", "r2"), "n", None),
    "small-sphere": (small_sphere, ("rho",), "level", "b"),
    "equator": (equator, (), "level", "b"),
    "geodesic-sphere": (geodesic_sphere, ("rho",), "level", "beta"),
}

_SPEC_RE = re.compile(r"^\s*([A-Za-z][\w-]*)\s*(?:\((.*)\))?\s*$")


def parse_surface_spec(spec):
    """Split ``"torus(2, 1)"`` into ``("torus", [2.0, 1.0])``."""
    match = _SPEC_RE.match(spec)
    if not match:
        raise SurfaceSpecError("UNKNOWN_GENERATOR", f"cannot parse surface spec {spec!r}")
    name, args = match.group(1), match.group(2)
    if name not in GENERATORS:
        raise SurfaceSpecError("UNKNOWN_GENERATOR", f"unknown generator {name!r}; known: {sorted(GENERATORS)}")
    values = []
    if args and args.strip():
        for tok in args.split(","):
            try:
                values.append(float(tok))
            except ValueError:
                raise SurfaceSpecError("PARAMETER_RANGE", f"bad numeric argument {tok!r}") from None
    if len(values) > len(GENERATORS[name][1]):
        raise SurfaceSpecError("PARAMETER_RANGE", f"{name} takes at most {len(GENERATORS[name][1])} arguments")
    return name, values


def generate(spec, resolution=None, curvature=None):
    """Build a surface from a spec string such as ``"sphere(1)"``.

    ``resolution`` is the icosphere level or grid size; ``curvature`` the
    ambient ``b``/``beta`` for model-space generators.
    """
    name, values = parse_surface_spec(spec)
    fn, names, res_key, amb_key = GENERATORS[name]
    kwargs = dict(zip(names, values))
    if name == "bumpy-sphere" and "seed" in kwargs:
        kwargs["seed"] = int(kwargs["seed"])
    if resolution is not None:
        kwargs[res_key] = int(resolution)
    if curvature is not None:
        if amb_key is None:
            raise SurfaceSpecError("PARAMETER_RANGE", f"{name} lives in flat space; no curvature parameter")
        kwargs[amb_key] = float(curvature)
    return fn(**kwargs)
