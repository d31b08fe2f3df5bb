"""Finite theta-metric spaces: validation, balls, topological witnesses, traces."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import _pykernels
from ._backend import kernels
from .actions import Action, eta, image_contains
from .errors import ImageError, InputError, InvariantError, PreconditionError

TOL_CMP = 1e-9
SEPARATION_SHRINK = 1.0 - 1e-6
UNIFORMITY_CAP = 10**9


class FiniteSpace:
    """Labeled points with a square distance matrix.

    Construction checks structure only (shape, finiteness, nonnegativity).
    Identity and symmetry are reported by :func:`validate_theta_metric`.
    """

    def __init__(self, labels: Sequence[str], dist, name: str = ""):
        labels = [str(x) for x in labels]
        try:
            d = np.array(dist, dtype=np.float64)
        except (TypeError, ValueError):
            raise InputError("distance matrix must be a numeric square array") from None
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise InputError(f"distance matrix must be square, got shape {d.shape}")
        if d.shape[0] != len(labels):
            raise InputError(f"{len(labels)} labels for a {d.shape[0]}x{d.shape[0]} matrix")
        if len(labels) == 0:
            raise InputError("a space needs at least one point")
        if len(set(labels)) != len(labels):
            raise InputError("point labels must be distinct")
        if not np.all(np.isfinite(d)):
            raise InputError("distance matrix entries must be finite")
        if np.any(d < 0):
            i, j = np.argwhere(d < 0)[0]
            raise InputError(f"negative distance d({labels[i]}, {labels[j]}) = {d[i, j]!r}")
        d.setflags(write=False)
        self.labels = labels
        self.dist = d
        self.name = name
        self._index = {lab: i for i, lab in enumerate(labels)}

    def __len__(self):
        return len(self.labels)

    def __repr__(self):
        return f"FiniteSpace({self.name or self.labels!r}, n={len(self)})"

    def index(self, point) -> int:
        if isinstance(point, (int, np.integer)) and not isinstance(point, bool):
            if 0 <= point < len(self.labels):
                return int(point)
            raise InputError(f"point index {point} out of range")
        try:
            return self._index[point]
        except KeyError:
            raise InputError(f"unknown point {point!r}") from None

    def d(self, x, y) -> float:
        return float(self.dist[self.index(x), self.index(y)])

    @classmethod
    def from_json(cls, obj: dict, name: str = "") -> "FiniteSpace":
        try:
            return cls(obj["points"], obj["distances"], name=name)
        except (KeyError, TypeError):
            raise InputError("space JSON needs 'points' and 'distances'") from None

    def to_json(self) -> dict:
        return {"points": list(self.labels), "distances": self.dist.tolist()}


@dataclass
class MetricReport:
    space: str
    status: dict
    violations: list = field(default_factory=list)
    identity_violations: list = field(default_factory=list)
    symmetry_violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(self.status.values())

    def families(self):
        """Group triangle violations by unordered endpoint pair and midpoint."""
        fam = {}
        for i, j, k, lhs, rhs in self.violations:
            fam.setdefault((min(i, j), max(i, j), k), []).append((i, j, k, lhs, rhs))
        return fam

    def to_dict(self, labels=None):
        name = (lambda i: labels[i]) if labels else (lambda i: i)
        return {
            "space": self.space,
            "passed": self.passed,
            "status": dict(self.status),
            "identity_violations": [
                {"i": name(i), "j": name(j), "value": v} for i, j, v in self.identity_violations
            ],
            "symmetry_violations": [
                {"i": name(i), "j": name(j), "d_ij": a, "d_ji": b} for i, j, a, b in self.symmetry_violations
            ],
            "violations": [
                {"i": name(i), "j": name(j), "k": name(k), "lhs": lhs, "rhs": rhs}
                for i, j, k, lhs, rhs in self.violations
            ],
        }


def _identity_and_symmetry(sp):
    d = sp.dist
    n = len(sp)
    ident, sym = [], []
    for i in range(n):
        for j in range(n):
            if (i == j) != (d[i, j] == 0.0):
                ident.append((i, j, float(d[i, j])))
            if j > i and d[i, j] != d[j, i]:
                sym.append((i, j, float(d[i, j]), float(d[j, i])))
    return ident, sym


def _triangle_scan(sp, a, tol):
    if a is None:
        return kernels.a3_scan(sp.dist, _pykernels.K_SUM, 1.0, tol)
    if a._code is not None:
        return kernels.a3_scan(sp.dist, a._code, a._p, tol)
    d = sp.dist
    n = len(sp)
    out = []
    for i in range(n):
        for j in range(n):
            lhs = float(d[i, j])
            for k in range(n):
                rhs = a.raw(float(d[i, k]), float(d[k, j]))
                if not lhs <= rhs + tol * max(abs(lhs), abs(rhs)):
                    out.append((i, j, k, lhs, rhs))
    return out


def validate_theta_metric(sp: FiniteSpace, a: Action, tol: float = TOL_CMP) -> MetricReport:
    """Check identity, symmetry and ``d(i,j) <= theta(d(i,k), d(k,j))`` on all ordered triples."""
    ident, sym = _identity_and_symmetry(sp)
    tri = _triangle_scan(sp, a, tol)
    status = {"A1": not ident, "A2": not sym, "A3": not tri}
    return MetricReport(sp.name, status, tri, ident, sym)


def validate_plain_metric(sp: FiniteSpace, tol: float = TOL_CMP) -> MetricReport:
    """Same checks with the ordinary triangle inequality."""
    ident, sym = _identity_and_symmetry(sp)
    tri = _triangle_scan(sp, None, tol)
    status = {"A1": not ident, "A2": not sym, "triangle": not tri}
    return MetricReport(sp.name, status, tri, ident, sym)


# -- balls and topological witnesses --------------------------------------------


def open_ball(sp: FiniteSpace, center, r: float, a: Optional[Action] = None) -> frozenset:
    """Labels ``y`` with ``d(center, y) < r``.

    When ``a`` is given, a radius outside its image only triggers a warning.
    """
    c = sp.index(center)
    r = float(r)
    if not r > 0.0 or math.isnan(r):
        raise InputError(f"ball radius must be positive, got {r!r}")
    if a is not None and math.isfinite(r) and not image_contains(a, r).contains:
        warnings.warn(f"radius {r!r} is outside the image of {a.name}", stacklevel=2)
    row = sp.dist[c]
    return frozenset(sp.labels[j] for j in range(len(sp)) if row[j] < r)


@dataclass(frozen=True)
class OpennessWitness:
    delta: float
    ball: frozenset
    inner_ball: frozenset


def openness_witness(
    sp: FiniteSpace, a: Action, center, r: float, y, mode: str = "strict"
) -> OpennessWitness:
    """Radius ``delta = eta(r, d(center, y))`` with ``B(y, delta) <= B(center, r)`` verified."""
    outer = open_ball(sp, center, r)
    if sp.labels[sp.index(y)] not in outer:
        raise PreconditionError(f"{y!r} is not in the ball of radius {r!r} about {center!r}", witness=sp.d(center, y))
    delta = eta(a, r, sp.d(center, y), mode=mode)
    if not delta > 0.0:
        raise InvariantError(f"eta({r!r}, {sp.d(center, y)!r}) = {delta!r} is not a positive radius")
    inner = open_ball(sp, y, delta)
    if not inner <= outer:
        raise InvariantError(
            f"B({y}, {delta!r}) is not inside B({center}, {r!r})", witness=sorted(inner - outer)
        )
    return OpennessWitness(delta, outer, inner)


@dataclass(frozen=True)
class SeparationWitness:
    r: float
    s: float
    alpha: float
    ball_x: frozenset
    ball_y: frozenset


def separation_witness(sp: FiniteSpace, a: Action, x, y, mode: str = "strict") -> SeparationWitness:
    """Radii ``r, s`` with ``theta(r, s) < d(x, y)`` and disjoint balls about ``x`` and ``y``."""
    ix, iy = sp.index(x), sp.index(y)
    dxy = float(sp.dist[ix, iy])
    if ix == iy or not dxy > 0.0:
        raise PreconditionError(f"separation needs distinct points at positive distance, got {x!r}, {y!r}")
    alpha = SEPARATION_SHRINK * dxy
    if a.image_sup is not None and alpha >= a.image_sup:
        alpha = SEPARATION_SHRINK * a.image_sup
    if not image_contains(a, alpha).contains:
        raise ImageError(f"alpha={alpha!r} is not in the image of {a.name}")
    s = alpha / 2.0
    r = eta(a, alpha, s, mode=mode)
    bx = open_ball(sp, ix, r) if r > 0.0 else frozenset()
    by = open_ball(sp, iy, s)
    if not r > 0.0 or bx & by:
        raise InvariantError(
            f"balls B({x}, {r!r}) and B({y}, {s!r}) intersect; {a.name} is not a valid action on this data",
            witness=sorted(bx & by),
        )
    return SeparationWitness(r, s, alpha, bx, by)


def uniformity_base_index(a: Action, n: int, cap: int = UNIFORMITY_CAP) -> int:
    """Smallest integer ``m > 2n`` with ``theta(1/m, 1/m) < 1/n``."""
    if int(n) != n or n < 1:
        raise InputError(f"n must be a positive integer, got {n!r}")
    n = int(n)
    target = 1.0 / n

    def ok(m):
        return a.raw(1.0 / m, 1.0 / m) < target

    lo = 2 * n + 1
    if ok(lo):
        return lo
    hi = lo
    step = 1
    while not ok(hi):
        lo = hi
        if hi >= cap:
            raise InvariantError(
                f"{a.name}: theta(1/m, 1/m) >= 1/{n} up to m={cap}; continuity at zero fails"
            )
        step *= 2
        hi = min(hi + step, cap)
    # theta(1/m, 1/m) is nonincreasing in m; invariant: not ok(lo), ok(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


# -- sequences -----------------------------------------------------------------


@dataclass
class SequenceTrace:
    """A finite sequence of points with the distance that measures it."""

    points: list
    dist: Callable

    def __post_init__(self):
        if len(self.points) == 0:
            raise InputError("a trace needs at least one point")

    @classmethod
    def on_space(cls, sp: FiniteSpace, points) -> "SequenceTrace":
        idx = [sp.index(p) for p in points]
        return cls(idx, lambda i, j: float(sp.dist[i, j]))

    def __len__(self):
        return len(self.points)


def _least_tail_index(values, eps):
    """1-based least N such that every value from position N on is < eps."""
    best = None
    for pos in range(len(values) - 1, -1, -1):
        if values[pos] < eps:
            best = pos + 1
        else:
            break
    return best


def is_cauchy(tr: SequenceTrace, a: Action, eps_schedule) -> dict:
    """Least ``N`` per epsilon with all tail distances ``d(x_n, x_m) < eps``.

    The tail must contain at least two points. ``None`` means no such
    ``N`` within the trace.
    """
    if len(tr) < 2:
        raise InputError("Cauchy analysis needs a trace of length >= 2")
    pts = tr.points
    L = len(pts)
    # tail_max[n] = max over n <= p <= q of d(x_p, x_q)
    tail_max = [0.0] * L
    running = 0.0
    for p in range(L - 1, -1, -1):
        row = max((tr.dist(pts[p], pts[q]) for q in range(p, L)), default=0.0)
        running = max(running, row)
        tail_max[p] = running
    table = []
    for eps in eps_schedule:
        eps = float(eps)
        # tail_max is nonincreasing; the last admissible N leaves two points
        N = next((p + 1 for p in range(L - 1) if tail_max[p] < eps), None)
        table.append({"eps": eps, "N": N})
    return {"length": L, "action": a.name, "table": table, "tail_max": tail_max}


def check_limit_behavior(
    tr_x: SequenceTrace, tr_y: SequenceTrace, x, y, a: Action, eps_schedule
) -> dict:
    """Finite-trace evidence for convergence, continuity of d, and unique limits.

    ``x`` and ``y`` are candidate limits of ``tr_x`` and ``tr_y``. The
    uniqueness entry asks whether ``x`` and ``y`` can both be limits at the
    finest scheduled epsilon, i.e. ``d(x, y) <= theta(eps, eps)``.
    """
    eps_schedule = [float(e) for e in eps_schedule]
    if not eps_schedule:
        raise InputError("empty epsilon schedule")
    dx = [tr_x.dist(p, x) for p in tr_x.points]
    dy = [tr_y.dist(p, y) for p in tr_y.points]
    dxy = tr_x.dist(x, y)
    m = min(len(tr_x), len(tr_y))
    gap = [abs(tr_x.dist(tr_x.points[i], tr_y.points[i]) - dxy) for i in range(m)]
    tab = []
    for eps in eps_schedule:
        tab.append(
            {
                "eps": eps,
                "N_x": _least_tail_index(dx, eps),
                "N_y": _least_tail_index(dy, eps),
                "N_dist": _least_tail_index(gap, eps),
            }
        )
    finest = min(eps_schedule)
    bound = a.raw(finest, finest)
    return {
        "table": tab,
        "x_converges": all(row["N_x"] is not None for row in tab),
        "y_converges": all(row["N_y"] is not None for row in tab),
        "dist_converges": all(row["N_dist"] is not None for row in tab),
        "uniqueness": {"consistent": dxy <= bound, "dist": dxy, "eps": finest, "bound": bound},
    }
