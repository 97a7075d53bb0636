"""Structured coverings of frequency space.

A covering is a family of sets Q_i = T_i Q'_i + b_i indexed by a lattice
scheme.  This module provides window enumeration, exact intersection
tests for the supported base-set shapes (balls, boxes, origin-centered
annuli and convex polygons), adjacency structure, and the empirical
structure constants used as evidence: the neighbor count N_hat, the
transition norm C_hat and the base-set radius R_hat.

Geometry is exact whenever every matrix entry, offset and set parameter
is rational; numeric fallbacks are flagged through the ``certain`` bits
so that downstream evidence never silently claims tightness it does not
have.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence, Union

import numpy as np

from .errors import (
    MissingTightnessWitness,
    SchemaError,
    UnsupportedGeometry,
    WindowCapExceeded,
)
from .seqspace import rat_from_json, rat_to_json

__all__ = [
    "BallSet",
    "BoxSet",
    "AnnulusSet",
    "PolygonSet",
    "ZScheme",
    "N0Scheme",
    "ZdPuncturedScheme",
    "ShearletScheme",
    "CoorbitScheme",
    "DiagonalScheme",
    "ExplicitScheme",
    "Covering",
    "cone_trapezoid",
    "enumerate_window",
    "adjacency",
    "neighbors",
    "certify_constants",
    "check_moderate",
    "norm_surrogate_check",
    "spectral_norm",
    "mat_det",
    "mat_inverse",
    "mat_mul",
    "transform_base",
    "sets_intersect",
    "base_set_from_json",
    "custom_covering_from_json",
    "window_cap",
]

Scalar = Union[int, float, Fraction]
Vec = tuple[Scalar, ...]
Mat = tuple[Vec, ...]
Index = tuple[int, ...]

WINDOW_CAP_ENV = "DECOMP_EMBED_MAX_WINDOW"
_DEFAULT_WINDOW_CAP = 10**6

_FLOAT_GAP_TOL = 1e-9


def window_cap() -> int:
    return int(os.environ.get(WINDOW_CAP_ENV, _DEFAULT_WINDOW_CAP))


def _is_exact(*values: object) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in values)


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------

def mat_mul(a: Mat, b: Mat) -> Mat:
    n, k, m = len(a), len(b), len(b[0])
    return tuple(
        tuple(sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m))
        for i in range(n)
    )


def mat_vec(a: Mat, x: Vec) -> Vec:
    return tuple(sum(row[j] * x[j] for j in range(len(x))) for row in a)


def mat_det(a: Mat) -> Scalar:
    """Determinant by cofactor expansion; exact when the entries are exact."""
    n = len(a)
    if n == 1:
        return a[0][0]
    if n == 2:
        return a[0][0] * a[1][1] - a[0][1] * a[1][0]
    total = 0
    for col in range(n):
        minor = tuple(
            tuple(row[c] for c in range(n) if c != col) for row in a[1:]
        )
        sign = 1 if col % 2 == 0 else -1
        total = total + sign * a[0][col] * mat_det(minor)
    return total


def mat_inverse(a: Mat) -> Mat:
    """Inverse by Gaussian elimination; exact when the entries are exact."""
    n = len(a)
    exact = _is_exact(*(v for row in a for v in row))
    cast = Fraction if exact else float
    aug = [[cast(a[i][j]) for j in range(n)] + [cast(i == j) for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = max(range(col, n), key=lambda r: abs(aug[r][col]))
        if aug[pivot][col] == 0:
            raise ZeroDivisionError("singular transform")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv_p = aug[col][col]
        aug[col] = [v / inv_p for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [v - factor * w for v, w in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


def spectral_norm(a: Mat | np.ndarray) -> float:
    """The operator 2-norm, closed form up to 2x2, power iteration above."""
    m = np.asarray(a, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("spectral_norm expects a square matrix")
    d = m.shape[0]
    if d == 1:
        return abs(float(m[0, 0]))
    if d == 2:
        g = m.T @ m
        tr = g[0, 0] + g[1, 1]
        det = g[0, 0] * g[1, 1] - g[0, 1] * g[1, 0]
        disc = max(tr * tr - 4.0 * det, 0.0)
        return math.sqrt(max((tr + math.sqrt(disc)) / 2.0, 0.0))
    g = m.T @ m
    v = np.ones(d) + 1e-3 * np.arange(d)  # deterministic, never orthogonal to all
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(10**4):
        w = g @ v
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return 0.0
        v_next = w / norm
        if abs(norm - lam) <= 1e-12 * max(norm, 1.0):
            lam = norm
            break
        lam = norm
        v = v_next
    return math.sqrt(lam)


# ---------------------------------------------------------------------------
# base sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BallSet:
    """Open Euclidean ball."""

    center: Vec
    radius: Scalar

    @property
    def dim(self) -> int:
        return len(self.center)

    def sup_norm(self) -> float:
        c = math.sqrt(float(sum(x * x for x in self.center)))
        return c + float(self.radius)

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        c = np.array([float(x) for x in self.center])
        r = float(self.radius)
        return c - r, c + r

    def to_json(self) -> object:
        return {
            "ball": {
                "center": [rat_to_json(Fraction(x)) for x in self.center],
                "radius": rat_to_json(Fraction(self.radius)),
            }
        }


@dataclass(frozen=True)
class BoxSet:
    """Open axis-parallel box."""

    lo: Vec
    hi: Vec

    @property
    def dim(self) -> int:
        return len(self.lo)

    def sup_norm(self) -> float:
        best = 0.0
        for corner in itertools.product(*zip(self.lo, self.hi)):
            best = max(best, math.sqrt(float(sum(x * x for x in corner))))
        return best

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        return (
            np.array([float(x) for x in self.lo]),
            np.array([float(x) for x in self.hi]),
        )

    def to_json(self) -> object:
        return {
            "box": {
                "lo": [rat_to_json(Fraction(x)) for x in self.lo],
                "hi": [rat_to_json(Fraction(x)) for x in self.hi],
            }
        }


@dataclass(frozen=True)
class AnnulusSet:
    """Open annulus inner < |x| < outer, centered at the origin."""

    dim_: int
    inner: Scalar
    outer: Scalar

    @property
    def dim(self) -> int:
        return self.dim_

    def sup_norm(self) -> float:
        return float(self.outer)

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        r = float(self.outer)
        return np.full(self.dim_, -r), np.full(self.dim_, r)

    def to_json(self) -> object:
        return {
            "annulus": {
                "dim": self.dim_,
                "inner": rat_to_json(Fraction(self.inner)),
                "outer": rat_to_json(Fraction(self.outer)),
            }
        }


@dataclass(frozen=True)
class PolygonSet:
    """Open convex polygon in the plane, given by its vertices in order."""

    vertices: tuple[Vec, ...]

    @property
    def dim(self) -> int:
        return 2

    def sup_norm(self) -> float:
        return max(math.sqrt(float(x * x + y * y)) for x, y in self.vertices)

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        xs = [float(v[0]) for v in self.vertices]
        ys = [float(v[1]) for v in self.vertices]
        return np.array([min(xs), min(ys)]), np.array([max(xs), max(ys)])

    def to_json(self) -> object:
        return {
            "polygon": {
                "vertices": [
                    [rat_to_json(Fraction(x)), rat_to_json(Fraction(y))]
                    for x, y in self.vertices
                ]
            }
        }


BaseSet = Union[BallSet, BoxSet, AnnulusSet, PolygonSet]


def cone_trapezoid(
    x_lo: Scalar, x_hi: Scalar, slope_lo: Scalar, slope_hi: Scalar
) -> PolygonSet:
    """The trapezoid x in (x_lo, x_hi), y/x in (slope_lo, slope_hi)."""
    return PolygonSet(
        (
            (x_lo, x_lo * slope_lo),
            (x_hi, x_hi * slope_lo),
            (x_hi, x_hi * slope_hi),
            (x_lo, x_lo * slope_hi),
        )
    )


def base_set_from_json(doc: object) -> BaseSet:
    if not isinstance(doc, dict) or len(doc) != 1:
        raise SchemaError(f"not a base-set descriptor: {doc!r}")
    (kind, body), = doc.items()
    try:
        if kind == "ball":
            return BallSet(
                tuple(rat_from_json(x) for x in body["center"]),
                rat_from_json(body["radius"]),
            )
        if kind == "box":
            return BoxSet(
                tuple(rat_from_json(x) for x in body["lo"]),
                tuple(rat_from_json(x) for x in body["hi"]),
            )
        if kind == "annulus":
            return AnnulusSet(
                int(body.get("dim", 1)),
                rat_from_json(body["inner"]),
                rat_from_json(body["outer"]),
            )
        if kind == "polygon":
            return PolygonSet(
                tuple(
                    (rat_from_json(v[0]), rat_from_json(v[1]))
                    for v in body["vertices"]
                )
            )
        if kind == "cone_trapezoid":
            return cone_trapezoid(
                rat_from_json(body["x"][0]),
                rat_from_json(body["x"][1]),
                rat_from_json(body["slope"][0]),
                rat_from_json(body["slope"][1]),
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad base-set descriptor: {doc!r}") from exc
    raise SchemaError(f"unknown base-set kind {kind!r}")


# ---------------------------------------------------------------------------
# transforms into normal form
# ---------------------------------------------------------------------------

def _is_similarity(t: Mat) -> Scalar | None:
    """The scale s >= 0 with t^T t == s^2 * id, or None if t is not one."""
    d = len(t)
    g = mat_mul(tuple(zip(*t)), t)
    s2 = g[0][0]
    for i in range(d):
        for j in range(d):
            if i == j and g[i][j] != s2:
                return None
            if i != j and g[i][j] != 0:
                return None
    if _is_exact(s2):
        fr = Fraction(s2)
        rn, rd = math.isqrt(fr.numerator), math.isqrt(fr.denominator)
        if rn * rn == fr.numerator and rd * rd == fr.denominator:
            return Fraction(rn, rd)
    return math.sqrt(float(s2))


def _is_diagonal(t: Mat) -> bool:
    return all(t[i][j] == 0 for i in range(len(t)) for j in range(len(t)) if i != j)


def transform_base(base: BaseSet, t: Mat, b: Vec) -> tuple[BaseSet, bool]:
    """The image T(base) + b as a normal-form set, with an exactness bit.

    Balls and annuli stay exact under similarity transforms, boxes under
    diagonal ones, polygons under any plane transform.  Everything else
    degrades to a conservative bounding ball with the bit cleared.
    """
    if isinstance(base, PolygonSet) and len(t) == 2:
        verts = tuple(
            tuple(x + y for x, y in zip(mat_vec(t, v), b)) for v in base.vertices
        )
        return PolygonSet(verts), True
    if isinstance(base, BallSet):
        s = _is_similarity(t)
        if s is not None:
            center = tuple(x + y for x, y in zip(mat_vec(t, base.center), b))
            return BallSet(center, abs(s) * base.radius), True
    if isinstance(base, AnnulusSet):
        s = _is_similarity(t)
        if s is not None and all(x == 0 for x in b):
            return AnnulusSet(base.dim, abs(s) * base.inner, abs(s) * base.outer), True
    if isinstance(base, BoxSet) and _is_diagonal(t):
        lo, hi = [], []
        for j in range(len(b)):
            a1 = t[j][j] * base.lo[j] + b[j]
            a2 = t[j][j] * base.hi[j] + b[j]
            lo.append(min(a1, a2))
            hi.append(max(a1, a2))
        return BoxSet(tuple(lo), tuple(hi)), True
    # conservative fallback: bounding ball of the image
    c0, r0 = _bounding_ball(base)
    center = tuple(
        float(x) + float(y) for x, y in zip(mat_vec(t, c0), b)
    )
    radius = spectral_norm(t) * float(r0)
    return BallSet(center, radius), False


def _bounding_ball(base: BaseSet) -> tuple[Vec, Scalar]:
    if isinstance(base, BallSet):
        return base.center, base.radius
    if isinstance(base, AnnulusSet):
        return tuple([0] * base.dim), base.outer
    if isinstance(base, BoxSet):
        center = tuple((lo + hi) / 2 for lo, hi in zip(base.lo, base.hi))
        rad = math.sqrt(float(sum((hi - lo) ** 2 for lo, hi in zip(base.lo, base.hi)))) / 2
        return center, rad
    if isinstance(base, PolygonSet):
        n = len(base.vertices)
        cx = sum(v[0] for v in base.vertices) / n
        cy = sum(v[1] for v in base.vertices) / n
        rad = max(
            math.sqrt(float((v[0] - cx) ** 2 + (v[1] - cy) ** 2))
            for v in base.vertices
        )
        return (cx, cy), rad
    raise UnsupportedGeometry(f"no bounding ball for {type(base).__name__}")


# ---------------------------------------------------------------------------
# intersection tests
# ---------------------------------------------------------------------------

def _norm_interval(s: BaseSet) -> tuple[Scalar, Scalar] | None:
    """The open interval of Euclidean norms attained on the set.

    Only exact for origin-centered balls and annuli; None otherwise.
    """
    if isinstance(s, AnnulusSet):
        return s.inner, s.outer
    if isinstance(s, BallSet) and all(x == 0 for x in s.center):
        return 0, s.radius
    return None


def _intervals_overlap(a: tuple, b: tuple) -> bool:
    # norm ranges of open radial sets: open intervals, so a touch is empty
    lo = max(a[0], b[0])
    hi = min(a[1], b[1])
    return lo < hi


def _project(vertices: Sequence[Vec], axis: Vec) -> tuple[Scalar, Scalar]:
    vals = [v[0] * axis[0] + v[1] * axis[1] for v in vertices]
    return min(vals), max(vals)


def _polygons_intersect(a: PolygonSet, b: PolygonSet) -> tuple[bool, bool]:
    """Separating-axis test for open convex polygons.

    Open interiors touching only along boundaries count as disjoint, so
    weak separation (max <= min) already separates.  With float vertices
    a near-tie is resolved conservatively as intersecting, uncertain.
    """
    exact = _is_exact(*(x for v in a.vertices for x in v)) and _is_exact(
        *(x for v in b.vertices for x in v)
    )
    scale = max(
        1.0,
        *(abs(float(x)) for v in a.vertices for x in v),
        *(abs(float(x)) for v in b.vertices for x in v),
    )
    tol = 0.0 if exact else _FLOAT_GAP_TOL * scale
    certain = True
    for poly in (a, b):
        verts = poly.vertices
        for k in range(len(verts)):
            p, q = verts[k], verts[(k + 1) % len(verts)]
            axis = (q[1] - p[1], p[0] - q[0])
            if axis[0] == 0 and axis[1] == 0:
                continue
            lo_a, hi_a = _project(a.vertices, axis)
            lo_b, hi_b = _project(b.vertices, axis)
            if hi_a <= lo_b - tol or hi_b <= lo_a - tol:
                return False, True
            if not exact and (hi_a <= lo_b + tol or hi_b <= lo_a + tol):
                certain = False
    return True, certain


def sets_intersect(a: BaseSet, b: BaseSet) -> tuple[bool, bool]:
    """Whether two open sets meet; second bit reports certainty.

    Unsupported shape pairs answer (True, False): conservative for
    neighbor counting, and flagged so constants built on them never
    claim tightness.
    """
    if isinstance(a, BallSet) and isinstance(b, BallSet):
        exact = _is_exact(*a.center, a.radius, *b.center, b.radius)
        gap2 = sum((x - y) ** 2 for x, y in zip(a.center, b.center))
        lim2 = (a.radius + b.radius) ** 2
        if exact:
            return gap2 < lim2, True
        g, l = float(gap2), float(lim2)
        if abs(g - l) <= _FLOAT_GAP_TOL * max(g, l, 1.0):
            return True, False
        return g < l, True
    if isinstance(a, BoxSet) and isinstance(b, BoxSet):
        exact = _is_exact(*a.lo, *a.hi, *b.lo, *b.hi)
        certain = True
        for lo1, hi1, lo2, hi2 in zip(a.lo, a.hi, b.lo, b.hi):
            lo = max(lo1, lo2)
            hi = min(hi1, hi2)
            if not lo < hi:
                return False, True
            if not exact and float(hi - lo) <= _FLOAT_GAP_TOL * max(
                1.0, abs(float(hi)), abs(float(lo))
            ):
                certain = False
        return True, certain
    ia, ib = _norm_interval(a), _norm_interval(b)
    if ia is not None and ib is not None:
        exact = _is_exact(*ia, *ib)
        hit = _intervals_overlap(ia, ib)
        if exact:
            return hit, True
        lo = max(float(ia[0]), float(ib[0]))
        hi = min(float(ia[1]), float(ib[1]))
        if abs(hi - lo) <= _FLOAT_GAP_TOL * max(hi, lo, 1.0):
            return True, False
        return hit, True
    if isinstance(a, PolygonSet) and isinstance(b, PolygonSet):
        return _polygons_intersect(a, b)
    return True, False


# ---------------------------------------------------------------------------
# index schemes
# ---------------------------------------------------------------------------

def _check_cap(count: int) -> None:
    cap = window_cap()
    if count > cap:
        raise WindowCapExceeded(
            f"window of {count} indices exceeds the cap of {cap} "
            f"(override via {WINDOW_CAP_ENV})"
        )


@dataclass(frozen=True)
class ZScheme:
    label: str = "Z"

    def window(self, radius: int) -> list[Index]:
        _check_cap(2 * radius + 1)
        return [(n,) for n in range(-radius, radius + 1)]


@dataclass(frozen=True)
class N0Scheme:
    label: str = "N0"

    def window(self, radius: int) -> list[Index]:
        _check_cap(radius + 1)
        return [(n,) for n in range(0, radius + 1)]


@dataclass(frozen=True)
class ZdPuncturedScheme:
    d: int
    label: str = "Zd_punctured"

    def window(self, radius: int) -> list[Index]:
        _check_cap((2 * radius + 1) ** self.d - 1)
        rng = range(-radius, radius + 1)
        return [
            pt
            for pt in itertools.product(*([rng] * self.d))
            if any(x != 0 for x in pt)
        ]


@dataclass(frozen=True)
class ShearletScheme:
    """Index (0,) plus cone indices (n, m, eps, delta)."""

    label: str = "shearlet"

    def window(self, radius: int) -> list[Index]:
        count = 1 + sum(4 * (2 * 2**n + 1) for n in range(radius + 1))
        _check_cap(count)
        out: list[Index] = [(0,)]
        for n in range(radius + 1):
            for m in range(-(2**n), 2**n + 1):
                for eps in (-1, 1):
                    for delta in (0, 1):
                        out.append((n, m, eps, delta))
        return out


@dataclass(frozen=True)
class CoorbitScheme:
    """Indices (n, m, eps) over Z^2 x {+-1}; windows cap |m| at 2^radius."""

    label: str = "coorbit"

    def window(self, radius: int) -> list[Index]:
        count = (2 * radius + 1) * (2 * 2**radius + 1) * 2
        _check_cap(count)
        out: list[Index] = []
        for n in range(-radius, radius + 1):
            for m in range(-(2**radius), 2**radius + 1):
                for eps in (-1, 1):
                    out.append((n, m, eps))
        return out


@dataclass(frozen=True)
class DiagonalScheme:
    """Indices (k_1..k_d, eps_1..eps_d) over Z^d x {+-1}^d."""

    d: int
    label: str = "diagonal"

    def window(self, radius: int) -> list[Index]:
        _check_cap(((2 * radius + 1) ** self.d) * 2**self.d)
        rng = range(-radius, radius + 1)
        out: list[Index] = []
        for ks in itertools.product(*([rng] * self.d)):
            for eps in itertools.product(*([(-1, 1)] * self.d)):
                out.append(ks + eps)
        return out


@dataclass(frozen=True)
class ExplicitScheme:
    indices: tuple[Index, ...]
    label: str = "explicit"

    def window(self, radius: int) -> list[Index]:
        _check_cap(len(self.indices))
        return list(self.indices)


IndexScheme = Union[
    ZScheme,
    N0Scheme,
    ZdPuncturedScheme,
    ShearletScheme,
    CoorbitScheme,
    DiagonalScheme,
    ExplicitScheme,
]


# ---------------------------------------------------------------------------
# coverings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Covering:
    """An indexed family of sets T_i Q'_i + b_i over an index scheme."""

    label: str
    dimension: int
    scheme: IndexScheme
    transform: Callable[[Index], tuple[Mat, Vec]]
    base_set: Callable[[Index], BaseSet]
    exact: bool = True

    def window(self, radius: int) -> list[Index]:
        return self.scheme.window(radius)

    def transformed_set(self, i: Index) -> tuple[BaseSet, bool]:
        t, b = self.transform(i)
        return transform_base(self.base_set(i), t, b)


def enumerate_window(covering: Covering, radius: int) -> list[Index]:
    """The finite index window at the given radius, in a fixed order."""
    return covering.window(radius)


def _window_geometry(covering: Covering, radius: int):
    indices = covering.window(radius)
    sets = []
    certain_all = True
    for i in indices:
        s, ok = covering.transformed_set(i)
        sets.append(s)
        certain_all = certain_all and ok
    los = np.empty((len(sets), covering.dimension))
    his = np.empty((len(sets), covering.dimension))
    for row, s in enumerate(sets):
        lo, hi = s.bounding_box()
        los[row] = lo
        his[row] = hi
    return indices, sets, los, his, certain_all


def adjacency(
    covering: Covering, radius: int
) -> tuple[dict[Index, tuple[Index, ...]], bool]:
    """Neighbor map i -> i* over the window, and whether it is certain.

    The relation is reflexive (every nonempty set meets itself) and kept
    symmetric by construction.
    """
    indices, sets, los, his, certain = _window_geometry(covering, radius)
    pad = 0.0 if covering.exact else _FLOAT_GAP_TOL
    n = len(indices)
    nbrs: dict[Index, list[Index]] = {i: [] for i in indices}
    for row in range(n):
        hit = np.nonzero(
            np.all(his[row] >= los - pad, axis=1)
            & np.all(los[row] <= his + pad, axis=1)
        )[0]
        for col in hit:
            if col < row:
                continue
            if col == row:
                nbrs[indices[row]].append(indices[row])
                continue
            meet, sure = sets_intersect(sets[row], sets[col])
            certain = certain and sure
            if meet:
                nbrs[indices[row]].append(indices[col])
                nbrs[indices[col]].append(indices[row])
    return {i: tuple(sorted(js)) for i, js in nbrs.items()}, certain


def neighbors(covering: Covering, i: Index, radius: int) -> tuple[Index, ...]:
    """The neighbor set i* of one index within the window."""
    indices, sets, los, his, _ = _window_geometry(covering, radius)
    try:
        row = indices.index(i)
    except ValueError:
        raise ValueError(f"index {i} is outside the window of radius {radius}")
    pad = 0.0 if covering.exact else _FLOAT_GAP_TOL
    hit = np.nonzero(
        np.all(his[row] >= los - pad, axis=1) & np.all(los[row] <= his + pad, axis=1)
    )[0]
    out = []
    for col in hit:
        if col == row:
            out.append(i)
            continue
        meet, _ = sets_intersect(sets[row], sets[col])
        if meet:
            out.append(indices[col])
    return tuple(sorted(out))


def certify_constants(covering: Covering, radius: int) -> dict:
    """Empirical structure constants over one window.

    N_hat: the largest neighbor count; C_hat: the largest transition
    norm ||T_i^-1 T_j|| over intersecting pairs; R_hat: the largest
    base-set radius sup_{x in Q'_i} |x|.  tightness_ok reports whether
    every ingredient was computed from exact geometry.
    """
    nbrs, certain = adjacency(covering, radius)
    n_hat = max(len(js) for js in nbrs.values())
    c_hat = 0.0
    inv_cache: dict[Index, Mat] = {}
    for i, js in nbrs.items():
        if i not in inv_cache:
            inv_cache[i] = mat_inverse(covering.transform(i)[0])
        t_inv = inv_cache[i]
        for j in js:
            c_hat = max(c_hat, spectral_norm(mat_mul(t_inv, covering.transform(j)[0])))
    r_hat = max(covering.base_set(i).sup_norm() for i in nbrs)
    return {
        "N_hat": n_hat,
        "C_hat": c_hat,
        "R_hat": r_hat,
        "tightness_ok": bool(covering.exact and certain),
    }


def check_moderate(
    covering: Covering,
    u: Callable[[Index], float],
    radii: tuple[int, int],
) -> dict:
    """Empirical moderateness of a weight along the covering adjacency.

    C_uQ_hat is the largest ratio u_i / u_j over neighbors j of i.  The
    check passes when the estimate is finite and moves by at most one
    percent between the two window radii.
    """
    estimates = []
    for radius in radii:
        nbrs, _ = adjacency(covering, radius)
        worst = 0.0
        for i, js in nbrs.items():
            ui = u(i)
            for j in js:
                uj = u(j)
                if uj == 0.0:
                    worst = math.inf
                else:
                    worst = max(worst, ui / uj)
        estimates.append(worst)
    first, second = estimates
    ok = (
        math.isfinite(second)
        and first > 0.0
        and second / first <= 1.01
    )
    return {"C_uQ_hat": second, "ok": bool(ok), "estimates": estimates}


def norm_surrogate_check(covering: Covering, radius: int) -> dict:
    """Ratio of |b_i| + ||T_i|| to the true extent of the transformed set.

    Needs exact geometry end to end; a covering without a tightness
    witness cannot anchor the surrogate and raises instead of guessing.
    """
    indices = covering.window(radius)
    ratios = []
    for i in indices:
        s, ok = covering.transformed_set(i)
        if not (covering.exact and ok):
            raise MissingTightnessWitness(
                f"covering {covering.label!r} has no tight bound for index {i}"
            )
        t, b = covering.transform(i)
        surrogate = math.sqrt(float(sum(x * x for x in b))) + spectral_norm(t)
        extent = s.sup_norm()
        ratios.append(surrogate / extent)
    return {"min_ratio": min(ratios), "max_ratio": max(ratios)}


# ---------------------------------------------------------------------------
# custom coverings from JSON
# ---------------------------------------------------------------------------

def custom_covering_from_json(doc: object) -> Covering:
    """Build a covering from explicit per-index data.

    Expected shape: {"dimension": d, "indices": [...], "T": [matrix, ...],
    "b": [vector, ...], "base_set": descriptor or [descriptor, ...]},
    with every number a rational literal (int, [num, den] or "a/b").
    """
    if not isinstance(doc, dict):
        raise SchemaError("custom covering must be an object")
    try:
        dim = int(doc["dimension"])
        raw_indices = doc["indices"]
        raw_t = doc["T"]
        raw_b = doc["b"]
        raw_base = doc["base_set"]
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"custom covering is missing a field: {exc}") from exc
    if not isinstance(raw_indices, list) or not raw_indices:
        raise SchemaError("custom covering needs a nonempty index list")
    if not (len(raw_t) == len(raw_b) == len(raw_indices)):
        raise SchemaError("T and b must run parallel to the index list")
    indices = tuple(tuple(int(x) for x in idx) for idx in raw_indices)
    if len(set(indices)) != len(indices):
        raise SchemaError("duplicate indices in custom covering")
    try:
        mats = [
            tuple(tuple(rat_from_json(x) for x in row) for row in mat)
            for mat in raw_t
        ]
        vecs = [tuple(rat_from_json(x) for x in vec) for vec in raw_b]
    except ValueError as exc:
        raise SchemaError(f"bad transform entry: {exc}") from exc
    for mat in mats:
        if len(mat) != dim or any(len(row) != dim for row in mat):
            raise SchemaError("transform matrices must be dimension x dimension")
    for vec in vecs:
        if len(vec) != dim:
            raise SchemaError("offsets must have one entry per dimension")
    if isinstance(raw_base, list):
        bases = [base_set_from_json(b) for b in raw_base]
        if len(bases) != len(indices):
            raise SchemaError("per-index base sets must run parallel to indices")
    else:
        bases = [base_set_from_json(raw_base)] * len(indices)
    for base in bases:
        if base.dim != dim:
            raise SchemaError("base-set dimension mismatch")

    t_of = dict(zip(indices, mats))
    b_of = dict(zip(indices, vecs))
    base_of = dict(zip(indices, bases))
    return Covering(
        label="custom",
        dimension=dim,
        scheme=ExplicitScheme(indices),
        transform=lambda i: (t_of[i], b_of[i]),
        base_set=lambda i: base_of[i],
        exact=True,
    )
