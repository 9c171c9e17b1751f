"""Stability diagrams as mechanism-labelled polylines.

Two planes are supported:

* capillary plane, ``x = kd`` and ``y = k sqrt(T/g)``, so ``tau = (y/x)^2``;
* vorticity plane, ``x = varpi = gamma sqrt(d/g)`` and ``y = kd``.

Each mechanism function is sampled on a tensor grid. Sign changes along
grid columns and rows are bisected onto the zero set, and the resulting
points are chained into polylines by nearest neighbour.
"""
from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from ._backend import kernels, max_workers
from .dispersion import Branch, DispersionModel
from .errors import ParameterDomainError
from .stability import Mechanism, Verdict, bf_root, delta_mi

GAP_CELLS = 3.0
BISECT_TOL = 1e-13
MIN_RESOLUTION = 100


class Plane(str, enum.Enum):
    CAPILLARY = "capillary"
    VORTICITY = "vorticity"

    @property
    def code(self) -> int:
        return kernels.PLANE_CAPILLARY if self is Plane.CAPILLARY else kernels.PLANE_VORTICITY


class CurveKind(str, enum.Enum):
    """Curve labels: the four mechanisms (BF split by branch) plus two reference lines."""

    GROUP_VEL_EXTREMUM = "group_velocity_extremum"
    LONG_SHORT_RESONANCE = "long_short_resonance"
    SECOND_HARMONIC = "second_harmonic"
    BF_RESONANCE_PLUS = "bf_plus"
    BF_RESONANCE_MINUS = "bf_minus"
    CRITICAL_TAU = "critical_tau"
    GRAVITY_BF_ROOT = "gravity_bf_root"

    @property
    def is_annotation(self) -> bool:
        return self in (CurveKind.CRITICAL_TAU, CurveKind.GRAVITY_BF_ROOT)

    @property
    def mechanism(self) -> Mechanism | None:
        return _KIND_TO_MECH.get(self)


_KIND_TO_MECH = {
    CurveKind.GROUP_VEL_EXTREMUM: Mechanism.GROUP_VELOCITY_EXTREMUM,
    CurveKind.LONG_SHORT_RESONANCE: Mechanism.LONG_SHORT_RESONANCE,
    CurveKind.SECOND_HARMONIC: Mechanism.SECOND_HARMONIC,
    CurveKind.BF_RESONANCE_PLUS: Mechanism.BENJAMIN_FEIR,
    CurveKind.BF_RESONANCE_MINUS: Mechanism.BENJAMIN_FEIR,
}
_MECH_TO_KIND = {
    Mechanism.GROUP_VELOCITY_EXTREMUM: CurveKind.GROUP_VEL_EXTREMUM,
    Mechanism.LONG_SHORT_RESONANCE: CurveKind.LONG_SHORT_RESONANCE,
    Mechanism.SECOND_HARMONIC: CurveKind.SECOND_HARMONIC,
    Mechanism.BENJAMIN_FEIR: CurveKind.BF_RESONANCE_PLUS,
}


@dataclass
class StabilityCurve:
    """One traced branch; ``points`` is an (n, 2) array ordered along the curve."""

    plane: Plane
    kind: CurveKind
    points: np.ndarray

    def __post_init__(self):
        self.plane = Plane(self.plane)
        self.kind = CurveKind(self.kind)
        self.points = np.asarray(self.points, dtype=float).reshape(-1, 2)

    @property
    def annotation(self) -> bool:
        return self.kind.is_annotation

    @property
    def x(self) -> np.ndarray:
        return self.points[:, 0]

    @property
    def y(self) -> np.ndarray:
        return self.points[:, 1]

    def residual(self) -> float:
        """Largest |F| of the curve's mechanism function over its points."""
        mech = self.kind.mechanism
        if mech is None:
            return 0.0
        family, sign = _plane_family(self.plane, self.kind)
        vals = kernels.mechanism_values(self.plane.code, family, sign, int(mech),
                                        np.ascontiguousarray(self.x), np.ascontiguousarray(self.y))
        return float(np.max(np.abs(vals))) if len(vals) else 0.0

    def y_at(self, x: float) -> list:
        """Linearly interpolated y wherever the polyline crosses the vertical line at x."""
        return _crossings(self.points, x, axis=0)

    def x_at(self, y: float) -> list:
        return _crossings(self.points, y, axis=1)

    def to_dict(self) -> dict:
        return {"plane": self.plane.value, "kind": self.kind.value,
                "annotation": self.annotation,
                "points": [[float(px), float(py)] for px, py in self.points]}

    @classmethod
    def from_dict(cls, d: dict) -> "StabilityCurve":
        return cls(plane=Plane(d["plane"]), kind=CurveKind(d["kind"]),
                   points=np.array(d["points"], dtype=float).reshape(-1, 2))


def _plane_family(plane: Plane, kind: CurveKind):
    if plane is Plane.VORTICITY:
        sign = -1.0 if kind is CurveKind.BF_RESONANCE_MINUS else 1.0
        return kernels.FAMILY_VORTICITY, sign
    return kernels.FAMILY_CAPILLARY, 1.0


def _crossings(points, level, axis):
    p = points[:, axis]
    q = points[:, 1 - axis]
    out = []
    for i in range(len(p) - 1):
        a, b = p[i] - level, p[i + 1] - level
        if a == 0:
            out.append(float(q[i]))
        elif a * b < 0:
            t = a / (a - b)
            out.append(float(q[i] + t * (q[i + 1] - q[i])))
    if len(p) and p[-1] == level:
        out.append(float(q[-1]))
    return out


def _check_range(name, rng, positive=True):
    lo, hi = (float(v) for v in rng)
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise ParameterDomainError(f"{name} must be an increasing finite pair, got {rng!r}")
    if positive and lo <= 0:
        raise ParameterDomainError(f"{name} must be positive, got {rng!r}")
    return lo, hi


def _check_resolution(resolution):
    if isinstance(resolution, (tuple, list)):
        nx, ny = (int(r) for r in resolution)
    else:
        nx = ny = int(resolution)
    if min(nx, ny) < MIN_RESOLUTION:
        raise ParameterDomainError(f"resolution must be at least {MIN_RESOLUTION} per axis")
    return nx, ny


def scan_zero_set(plane: Plane, family: int, sign: float, mech: int, xs, ys):
    """Zero-set points of one mechanism from column and row sign changes."""
    X, Y = np.meshgrid(xs, ys)
    V = np.asarray(kernels.mechanism_values(plane.code, family, sign, mech,
                                            X.ravel(), Y.ravel())).reshape(X.shape)
    S = np.sign(V)
    pts = [np.column_stack([X[S == 0], Y[S == 0]])]
    for axis in (0, 1):
        if axis == 0:  # along columns (varying y)
            lo, hi = (slice(None, -1), slice(None)), (slice(1, None), slice(None))
        else:
            lo, hi = (slice(None), slice(None, -1)), (slice(None), slice(1, None))
        mask = S[lo] * S[hi] < 0
        if not mask.any():
            continue
        bx, by = kernels.bisect_segments(plane.code, family, sign, mech,
                                         np.ascontiguousarray(X[lo][mask]),
                                         np.ascontiguousarray(Y[lo][mask]),
                                         np.ascontiguousarray(X[hi][mask]),
                                         np.ascontiguousarray(Y[hi][mask]), tol=BISECT_TOL)
        pts.append(np.column_stack([bx, by]))
    return np.concatenate(pts, axis=0)


def _dedupe(points, scale, radius=0.25):
    if len(points) < 2:
        return points
    tree = cKDTree(points / scale)
    drop = set()
    for i, j in sorted(tree.query_pairs(radius)):
        if i not in drop:
            drop.add(j)
    keep = np.array([i for i in range(len(points)) if i not in drop])
    return points[keep]


def chain_points(points, cell, gap=GAP_CELLS):
    """Greedy nearest-neighbour chaining into branches.

    Distances are measured in grid cells (``cell = (dx, dy)``); a jump of
    more than ``gap`` cells ends the branch. Single stray points are dropped.
    """
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(points) == 0:
        return []
    scale = np.asarray(cell, dtype=float)
    points = _dedupe(points, scale)
    scaled = points / scale
    tree = cKDTree(scaled)
    used = np.zeros(len(points), dtype=bool)

    def walk(start):
        path = []
        cur = start
        while True:
            cand = [j for j in tree.query_ball_point(scaled[cur], gap) if not used[j]]
            if not cand:
                return path
            d = np.linalg.norm(scaled[cand] - scaled[cur], axis=1)
            cur = cand[int(np.argmin(d))]
            used[cur] = True
            path.append(cur)

    branches = []
    # start from the leftmost remaining point so that branches run left to right
    order = np.lexsort((points[:, 1], points[:, 0]))
    for start in order:
        if used[start]:
            continue
        used[start] = True
        fwd = walk(start)
        back = walk(start)
        idx = back[::-1] + [start] + fwd
        if len(idx) >= 2:
            branches.append(points[idx])
    return branches


def _trace(plane, family, sign, mechs, xs, ys):
    cell = (xs[1] - xs[0], ys[1] - ys[0])

    def one(mech):
        return mech, chain_points(scan_zero_set(plane, family, sign, int(mech), xs, ys), cell)

    workers = min(max_workers(), len(mechs))
    if workers <= 1:
        return [one(m) for m in mechs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, mechs))


def capillary_diagram(z_range=(0.05, 32.0), y_range=(1e-3, 3.0), resolution=300):
    """Mechanism curves in the (kd, k sqrt(T/g)) plane plus two reference lines.

    The Benjamin-Feir curve carries ``CurveKind.BF_RESONANCE_PLUS``, the only
    branch for surface tension. Annotations are the critical line
    ``y = x/sqrt(3)`` and the vertical line at the gravity root of Delta_BF.
    """
    x_lo, x_hi = _check_range("z_range", z_range)
    y_lo, y_hi = _check_range("y_range", y_range)
    nx, ny = _check_resolution(resolution)
    xs = np.linspace(x_lo, x_hi, nx)
    ys = np.linspace(y_lo, y_hi, ny)
    curves = []
    for mech, branches in _trace(Plane.CAPILLARY, kernels.FAMILY_CAPILLARY, 1.0,
                                 list(Mechanism), xs, ys):
        curves.extend(StabilityCurve(Plane.CAPILLARY, _MECH_TO_KIND[mech], b) for b in branches)

    # tau = 1/3 ray, clipped to the window
    s = 1.0 / math.sqrt(3.0)
    a = max(x_lo, y_lo / s)
    b = min(x_hi, y_hi / s)
    if a < b:
        curves.append(StabilityCurve(Plane.CAPILLARY, CurveKind.CRITICAL_TAU,
                                     [[a, s * a], [b, s * b]]))
    zc = bf_root(DispersionModel.gravity())
    if x_lo <= zc <= x_hi:
        curves.append(StabilityCurve(Plane.CAPILLARY, CurveKind.GRAVITY_BF_ROOT,
                                     [[zc, y_lo], [zc, y_hi]]))
    return curves


def _clip_runs(points, x_lo, x_hi):
    inside = (points[:, 0] >= x_lo) & (points[:, 0] <= x_hi)
    runs, cur = [], []
    for p, ok in zip(points, inside):
        if ok:
            cur.append(p)
        elif cur:
            runs.append(np.array(cur))
            cur = []
    if cur:
        runs.append(np.array(cur))
    return [r for r in runs if len(r) >= 2]


def vorticity_diagram(varpi_range=(-10.0, 10.0), z_range=(0.05, 6.0), resolution=300):
    """Zero sets of Delta_BF on both branches in the (varpi, kd) plane.

    Only the Plus branch is traced. The Minus curve is its mirror image
    ``varpi -> -varpi``, because Delta_BF on the Minus branch at varpi is
    minus Delta_BF on the Plus branch at -varpi.
    """
    w_lo, w_hi = _check_range("varpi_range", varpi_range, positive=False)
    z_lo, z_hi = _check_range("z_range", z_range)
    nx, ny = _check_resolution(resolution)
    # trace on the symmetric hull so the mirror image covers the window too
    span = max(abs(w_lo), abs(w_hi))
    lo, hi = -span, span
    n_sym = max(nx, int(math.ceil(nx * (hi - lo) / (w_hi - w_lo))))
    xs = np.linspace(lo, hi, n_sym)
    ys = np.linspace(z_lo, z_hi, ny)
    (_, branches), = _trace(Plane.VORTICITY, kernels.FAMILY_VORTICITY, 1.0,
                            [Mechanism.BENJAMIN_FEIR], xs, ys)
    curves = []
    for b in branches:
        for run in _clip_runs(b, w_lo, w_hi):
            curves.append(StabilityCurve(Plane.VORTICITY, CurveKind.BF_RESONANCE_PLUS, run))
    for b in branches:
        mirrored = b[::-1] * np.array([-1.0, 1.0])
        for run in _clip_runs(mirrored, w_lo, w_hi):
            curves.append(StabilityCurve(Plane.VORTICITY, CurveKind.BF_RESONANCE_MINUS, run))
    return curves


def curve_intersections(c1: StabilityCurve, c2: StabilityCurve):
    """All crossing points of two polylines, as a list of (x, y)."""
    p, q = c1.points, c2.points
    if len(p) < 2 or len(q) < 2:
        return []
    a0, a1 = p[:-1, None, :], p[1:, None, :]
    b0, b1 = q[None, :-1, :], q[None, 1:, :]
    r = a1 - a0
    s = b1 - b0
    denom = r[..., 0] * s[..., 1] - r[..., 1] * s[..., 0]
    d = b0 - a0
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (d[..., 0] * s[..., 1] - d[..., 1] * s[..., 0]) / denom
        u = (d[..., 0] * r[..., 1] - d[..., 1] * r[..., 0]) / denom
    hit = (denom != 0) & (t >= 0) & (t <= 1) & (u >= 0) & (u <= 1)
    i, j = np.nonzero(hit)
    pts = a0[i, 0, :] + t[i, j][:, None] * r[i, 0, :]
    return [(float(x), float(y)) for x, y in pts]


@dataclass(frozen=True)
class PointClass:
    """Verdicts at one diagram point, keyed by branch (``"plus"``, ``"minus"``)."""

    plane: Plane
    x: float
    y: float
    verdicts: dict = field(default_factory=dict)

    @property
    def verdict(self) -> Verdict:
        return self.verdicts[Branch.PLUS.value]

    @property
    def label(self) -> str:
        """``S``/``U`` for the capillary plane, ``S+,U-`` style for vorticity."""
        if self.plane is Plane.CAPILLARY:
            return self.verdict.value
        parts = []
        for br, mark in ((Branch.PLUS, "+"), (Branch.MINUS, "-")):
            v = self.verdicts[br.value]
            parts.append(v.value + mark if v in (Verdict.STABLE, Verdict.UNSTABLE) else v.value)
        return ",".join(parts)

    def to_dict(self) -> dict:
        return {"plane": self.plane.value, "x": self.x, "y": self.y, "label": self.label,
                "verdicts": {k: v.value for k, v in self.verdicts.items()}}


def model_at(plane: Plane | str, x: float, y: float, branch: Branch | str = Branch.PLUS):
    """Reconstruct ``(model, z)`` from diagram coordinates."""
    plane = Plane(plane)
    if plane is Plane.CAPILLARY:
        if not x > 0 or y < 0:
            raise ParameterDomainError("capillary plane needs x > 0 and y >= 0")
        return DispersionModel.capillary((y / x) ** 2), float(x)
    if not y > 0:
        raise ParameterDomainError("vorticity plane needs kd = y > 0")
    return DispersionModel.vorticity(x, branch), float(y)


def classify_point(plane: Plane | str, x: float, y: float) -> PointClass:
    """Index verdict at a diagram point (both branches in the vorticity plane)."""
    plane = Plane(plane)
    branches = (Branch.PLUS,) if plane is Plane.CAPILLARY else (Branch.PLUS, Branch.MINUS)
    verdicts = {}
    for br in branches:
        model, z = model_at(plane, x, y, br)
        verdicts[br.value] = delta_mi(model, z).verdict
    return PointClass(plane=plane, x=float(x), y=float(y), verdicts=verdicts)
