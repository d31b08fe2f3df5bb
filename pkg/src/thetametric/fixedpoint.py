"""Banach iteration on distance oracles and Caristi-type fixed points on finite spaces."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Optional, Sequence

import numpy as np

from .actions import Action, Sampler, Violation, check_eta_properties, eta, image_contains
from .errors import ImageError, InputError, InvariantError, PreconditionError, StrictRangeError
from .spaces import FiniteSpace

TOL_FIX = 1e-8
TOL_CMP = 1e-9


def _le(lhs, rhs, tol):
    # relative slack, floored at an absolute tol for values near zero
    return lhs <= rhs + tol * max(1.0, abs(lhs), abs(rhs))


class PointOracle:
    """Distance oracle over either a finite space (points are indices) or vectors."""

    def __init__(self, dist: Callable, space: Optional[FiniteSpace] = None):
        self._dist = dist
        self.space = space

    @classmethod
    def finite(cls, sp: FiniteSpace) -> "PointOracle":
        return cls(lambda i, j: float(sp.dist[i, j]), space=sp)

    @classmethod
    def functional(cls, dist: Callable) -> "PointOracle":
        return cls(dist)

    @property
    def is_finite(self) -> bool:
        return self.space is not None

    def points(self):
        if self.space is None:
            raise InputError("a functional oracle has no point enumeration")
        return range(len(self.space))

    def d(self, x, y) -> float:
        return float(self._dist(x, y))


class TableMap:
    """Self-map of a finite space given as an index table."""

    def __init__(self, table: Sequence[int]):
        self.table = [int(i) for i in table]
        n = len(self.table)
        bad = [i for i in self.table if not 0 <= i < n]
        if bad:
            raise InputError(f"map image index {bad[0]} outside the space")

    @classmethod
    def from_labels(cls, sp: FiniteSpace, mapping: dict) -> "TableMap":
        missing = [lab for lab in sp.labels if lab not in mapping]
        if missing:
            raise InputError(f"map has no image for {missing[0]!r}")
        return cls([sp.index(mapping[lab]) for lab in sp.labels])

    def __call__(self, i):
        return self.table[i]

    def __len__(self):
        return len(self.table)


class MultiMap:
    """Set-valued map of a finite space; every image is a nonempty index set."""

    def __init__(self, table: Sequence):
        self.table = [frozenset(int(j) for j in img) for img in table]
        n = len(self.table)
        for i, img in enumerate(self.table):
            if not img:
                raise InputError(f"multimap image of point {i} is empty")
            if any(not 0 <= j < n for j in img):
                raise InputError(f"multimap image of point {i} leaves the space")

    @classmethod
    def from_labels(cls, sp: FiniteSpace, mapping: dict) -> "MultiMap":
        missing = [lab for lab in sp.labels if lab not in mapping]
        if missing:
            raise InputError(f"multimap has no image for {missing[0]!r}")
        return cls([[sp.index(y) for y in mapping[lab]] for lab in sp.labels])

    def __call__(self, i):
        return self.table[i]


# -- Banach iteration ------------------------------------------------------------


def estimate_contraction(po: PointOracle, f: Callable, sample=None) -> float:
    """Largest observed ratio ``d(fx, fy) / d(x, y)``; exhaustive on finite oracles."""
    if sample is None:
        sample = list(combinations(po.points(), 2))
    sample = list(sample)
    if not sample:
        raise InputError("empty sample for contraction estimate")
    best = 0.0
    for x, y in sample:
        dxy = po.d(x, y)
        if not dxy > 0.0:
            raise InputError(f"sample pair ({x!r}, {y!r}) is not distinct")
        best = max(best, po.d(f(x), f(y)) / dxy)
    return best


@dataclass
class SolveTrace:
    iterates: list
    step_dists: list
    status: str
    result: object = None
    residual: Optional[float] = None
    decay_violations: list = field(default_factory=list)

    @property
    def converged(self) -> bool:
        return self.status == "converged"

    @property
    def iterations(self) -> int:
        return len(self.step_dists)


def banach_solve(
    po: PointOracle,
    f: Callable,
    x0,
    tol_fix: float = TOL_FIX,
    max_iter: int = 1000,
    alpha_hat: Optional[float] = None,
    tol_cmp: float = 1e-12,
) -> SolveTrace:
    """Iterate ``x_{n+1} = f(x_n)`` until a step is at most ``tol_fix``.

    The returned fixed point is the last iterate and its residual
    ``d(x*, f(x*))`` is checked against ``tol_fix``. With ``alpha_hat``,
    steps that break ``step[n] <= alpha_hat * step[n-1] + tol_cmp`` are
    listed in ``decay_violations``.
    """
    if not tol_fix > 0.0:
        raise InputError(f"tol_fix must be positive, got {tol_fix!r}")
    if int(max_iter) != max_iter or max_iter < 1:
        raise InputError(f"max_iter must be a positive integer, got {max_iter!r}")
    iterates = [x0]
    steps = []
    x = x0
    status = "max_iter"
    for _ in range(int(max_iter)):
        nxt = f(x)
        step = po.d(x, nxt)
        iterates.append(nxt)
        steps.append(step)
        if not math.isfinite(step):
            status = "diverged"
            x = nxt
            break
        x = nxt
        if step <= tol_fix:
            status = "converged"
            break
    trace = SolveTrace(iterates, steps, status)
    if alpha_hat is not None:
        trace.decay_violations = [
            n for n in range(1, len(steps)) if not steps[n] <= alpha_hat * steps[n - 1] + tol_cmp
        ]
    if status == "converged":
        residual = po.d(x, f(x))
        if not residual <= tol_fix:
            raise InvariantError(f"converged iterate has residual {residual!r} > {tol_fix!r}", witness=x)
        trace.result = x
        trace.residual = residual
    else:
        trace.result = None
    return trace


def fixed_points(po: PointOracle, f: Callable) -> list:
    """Exhaustive scan of a finite oracle for points with ``d(x, f(x)) = 0``."""
    return [i for i in po.points() if po.d(i, f(i)) == 0.0]


# -- Caristi potentials ------------------------------------------------------------


def gamma_identity(t):
    return t


def gamma_rational(t):
    return t / (1.0 + t)


def gamma_from_table(ts, values):
    """Piecewise-linear gamma through the knots, extended by the last slope."""
    ts = np.asarray(ts, dtype=float)
    vs = np.asarray(values, dtype=float)
    if ts.ndim != 1 or ts.shape != vs.shape or len(ts) < 2 or np.any(np.diff(ts) <= 0):
        raise InputError("gamma table needs >= 2 strictly increasing knots with matching values")
    slope = (vs[-1] - vs[-2]) / (ts[-1] - ts[-2])

    def gamma(t):
        if t <= ts[-1]:
            return float(np.interp(t, ts, vs))
        return float(vs[-1] + slope * (t - ts[-1]))

    return gamma


def _signed_root(v, k):
    return math.copysign(abs(v) ** (1.0 / k), v)


def psi_from_phi(phi: Sequence[float], form, a: Optional[Action] = None) -> Callable:
    """Potential built from a scalar function on points.

    ``form='exp'`` gives ``exp(phi(y) - phi(x))`` off the diagonal and 0 on
    it; ``form=('odd_root', n)`` gives the signed ``(2n+1)``-th root of
    ``phi(y) - phi(x)``. A warning is issued when ``a`` is not the action
    family the form is meant for.
    """
    phi = [float(v) for v in phi]
    if form == "exp":
        expected = a is not None and a.kind == "prod_over_one_plus_prod"

        def psi(i, j):
            return 0.0 if i == j else math.exp(phi[j] - phi[i])

    elif isinstance(form, tuple) and len(form) == 2 and form[0] == "odd_root":
        n = int(form[1])
        if n < 0:
            raise InputError(f"odd_root needs n >= 0, got {n}")
        k = 2 * n + 1
        expected = a is not None and (
            (a.kind == "root_sum_power" and a.params["n"] == k)
            or (k == 1 and a.kind == "k_sum" and a.params["k"] == 1.0)
        )

        def psi(i, j):
            return _signed_root(phi[j] - phi[i], k)

    else:
        raise InputError(f"unknown potential form {form!r}")
    if a is not None and not expected:
        warnings.warn(f"potential form {form!r} is not designed for action {a.name}", stacklevel=2)
    return psi


@dataclass
class CaristiData:
    """Scaling map gamma plus a potential psi tabulated on a finite space."""

    gamma: Callable
    psi: np.ndarray
    phi: Optional[list] = None
    gamma_kind: str = "custom"
    psi_kind: str = "table"
    derived: bool = False

    @classmethod
    def tabulate(cls, sp: FiniteSpace, gamma: Callable, psi: Callable, **kw) -> "CaristiData":
        n = len(sp)
        table = np.array([[psi(i, j) for j in range(n)] for i in range(n)], dtype=float)
        return cls(gamma, table, derived=True, **kw)

    @classmethod
    def from_json(cls, obj: dict, sp: FiniteSpace, a: Optional[Action] = None) -> "CaristiData":
        try:
            g = obj.get("gamma", {"kind": "identity"})
            p = obj["psi"]
            gkind = g["kind"]
            pkind = p["kind"]
        except (KeyError, TypeError, AttributeError):
            raise InputError("caristi JSON needs 'psi' with a 'kind' (and optionally 'gamma')") from None
        if gkind == "identity":
            gamma = gamma_identity
        elif gkind == "rational":
            gamma = gamma_rational
        elif gkind == "custom_table":
            gamma = gamma_from_table(g.get("t", []), g.get("values", []))
        else:
            raise InputError(f"unknown gamma kind {gkind!r}")
        if pkind == "table":
            rows = p.get("table")
            if isinstance(rows, dict):
                try:
                    rows = [[rows[x][y] for y in sp.labels] for x in sp.labels]
                except KeyError as exc:
                    raise InputError(f"psi table misses entry {exc}") from None
            table = np.array(rows, dtype=float)
            if table.shape != (len(sp), len(sp)) or not np.all(np.isfinite(table)):
                raise InputError("psi table must be a finite square matrix matching the space")
            return cls(gamma, table, gamma_kind=gkind, psi_kind=pkind)
        phi_map = p.get("phi")
        if not isinstance(phi_map, dict):
            raise InputError("psi kinds exp_phi / odd_root_phi need a 'phi' object")
        try:
            phi = [float(phi_map[lab]) for lab in sp.labels]
        except KeyError as exc:
            raise InputError(f"phi has no value for {exc}") from None
        if pkind == "exp_phi":
            form = "exp"
        elif pkind == "odd_root_phi":
            form = ("odd_root", int(p.get("n", 0)))
        else:
            raise InputError(f"unknown psi kind {pkind!r}")
        psi = psi_from_phi(phi, form, a)
        return cls.tabulate(sp, gamma, psi, phi=phi, gamma_kind=gkind, psi_kind=pkind)


@dataclass
class CheckReport:
    status: dict
    violations: list
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.status.values())

    def to_dict(self):
        return {
            "passed": self.passed,
            "status": dict(self.status),
            "notes": dict(self.notes),
            "violations": [v.to_dict() for v in self.violations],
        }


def _space_of(po):
    if isinstance(po, FiniteSpace):
        return po
    if isinstance(po, PointOracle) and po.space is not None:
        return po.space
    raise InputError("this check needs a finite space")


def check_psi(po, a: Action, cd: CaristiData, tol: float = TOL_CMP) -> CheckReport:
    """Check ``psi(x, x) = 0``, the theta-triangle condition, and a lower bound.

    Semicontinuity is vacuous on a finite space and only noted.
    """
    sp = _space_of(po)
    psi = cd.psi
    n = len(sp)
    viol = []
    for i in range(n):
        v = float(psi[i, i])
        ok = v == 0.0 if not cd.derived else abs(v) <= tol
        if not ok:
            viol.append(Violation("E2", {"x": sp.labels[i]}, {"psi_x_x": v}))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                lhs = a.raw(float(psi[i, j]), float(psi[j, k]))
                rhs = float(psi[i, k])
                if not _le(lhs, rhs, tol):
                    viol.append(
                        Violation(
                            "E3",
                            {"x": sp.labels[i], "y": sp.labels[j], "z": sp.labels[k]},
                            {"theta_psi_xy_psi_yz": lhs, "psi_xz": rhs},
                        )
                    )
    row_min = [float(np.min(psi[i])) for i in range(n)]
    anchors = [i for i in range(n) if math.isfinite(row_min[i])]
    if not anchors:
        viol.append(Violation("E1", {}, {"row_minima": row_min}))
    notes = {
        "E1_anchor": sp.labels[anchors[0]] if anchors else None,
        "E1_lower_bound": row_min[anchors[0]] if anchors else None,
        "semicontinuity": "vacuous on a finite space",
    }
    status = {c: not any(v.condition == c for v in viol) for c in ("E1", "E2", "E3")}
    return CheckReport(status, viol, notes)


def check_gamma(cd: CaristiData, a: Action, sp: Optional[Sampler] = None, tol: float = TOL_CMP) -> CheckReport:
    """Sample ``gamma(0) = 0``, positivity, monotonicity and theta-subadditivity."""
    sp = sp or Sampler()
    rng = sp.rng()
    g = cd.gamma
    viol = []
    g0 = g(0.0)
    if g0 != 0.0:
        viol.append(Violation("zero", {"t": 0.0}, {"gamma": g0}))
    grid = [float(t) for t in sp.grid()]
    vals = [g(t) for t in grid]
    for (t0, v0), (t1, v1) in zip(zip(grid, vals), zip(grid[1:], vals[1:])):
        if not v0 <= v1:
            viol.append(Violation("nondecreasing", {"t": t0, "u": t1}, {"gamma_t": v0, "gamma_u": v1}))
    pos = grid[1:] + [float(t) for t in sp.uniform(sp.random_points, rng) if t > 0.0]
    for t in pos:
        if not g(t) > 0.0:
            viol.append(Violation("positive", {"t": t}, {"gamma": g(t)}))
    pairs = [(x, y) for x in grid for y in grid] + [
        (float(x), float(y)) for x, y in rng.uniform(0.0, sp.domain_cap, (sp.random_points, 2))
    ]
    for x, y in pairs:
        lhs = g(a.raw(x, y))
        rhs = a.raw(g(x), g(y))
        if not _le(lhs, rhs, tol):
            viol.append(Violation("subadditive", {"x": x, "y": y}, {"gamma_theta": lhs, "theta_gamma": rhs}))
    status = {c: not any(v.condition == c for v in viol) for c in ("zero", "nondecreasing", "positive", "subadditive")}
    return CheckReport(status, viol, {"pairs": len(pairs), "sampler": sp.to_dict()})


def psi_inverse_bound(sp: FiniteSpace, a: Action, cd: CaristiData, tol: float = TOL_CMP) -> tuple:
    """Check ``psi(x, y) <= eta(psi(x, z), psi(y, z))`` wherever eta is defined.

    Returns ``(checked, violations)``; triples outside eta's domain
    (``0 <= psi(y,z) <= psi(x,z)`` with ``psi(x,z)`` in the image) are skipped.
    """
    psi = cd.psi
    n = len(sp)
    checked = 0
    viol = []
    for i in range(n):
        for j in range(n):
            for k in range(n):
                c, b = float(psi[i, k]), float(psi[j, k])
                if not 0.0 <= b <= c or not image_contains(a, c).contains:
                    continue
                try:
                    e = eta(a, c, b, mode="existence")
                except (ImageError, StrictRangeError):
                    continue
                checked += 1
                if not float(psi[i, j]) <= e + tol * max(1.0, c):
                    viol.append(
                        Violation(
                            "psi_inverse_bound",
                            {"x": sp.labels[i], "y": sp.labels[j], "z": sp.labels[k]},
                            {"psi_xy": float(psi[i, j]), "eta": e},
                        )
                    )
    return checked, viol


# -- order and fixed points --------------------------------------------------------


def _ensure_regular(a, sampler):
    if a.regular_flag is None:
        check_eta_properties(a, sampler)
    if not a.regular_flag:
        raise PreconditionError(f"action {a.name} is not regular (eta(r, r) != 0)")


def caristi_order(
    sp: FiniteSpace, a: Action, cd: CaristiData, sampler: Optional[Sampler] = None, tol: float = TOL_CMP
) -> np.ndarray:
    """Boolean matrix ``R[x, y]`` meaning ``gamma(d(x, y)) <= psi(x, y)``.

    The action must be regular and the data must pass :func:`check_psi` and
    :func:`check_gamma`. The result is verified to be a partial order.
    """
    _ensure_regular(a, sampler)
    rep = check_psi(sp, a, cd, tol)
    if not rep.passed:
        raise PreconditionError("psi fails its conditions", witness=rep.violations[0].to_dict())
    rep = check_gamma(cd, a, sampler, tol)
    if not rep.passed:
        raise PreconditionError("gamma fails its conditions", witness=rep.violations[0].to_dict())
    n = len(sp)
    R = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(n):
            R[i, j] = _le(cd.gamma(float(sp.dist[i, j])), float(cd.psi[i, j]), tol)
    verify_partial_order(R, sp.labels)
    return R


def verify_partial_order(R: np.ndarray, labels=None) -> None:
    """Raise :class:`InvariantError` unless ``R`` is reflexive, antisymmetric, transitive."""
    n = R.shape[0]
    lab = labels or list(range(n))
    for i in range(n):
        if not R[i, i]:
            raise InvariantError("relation is not reflexive", witness=(lab[i],))
    for i in range(n):
        for j in range(i + 1, n):
            if R[i, j] and R[j, i]:
                raise InvariantError("relation is not antisymmetric", witness=(lab[i], lab[j]))
    for i in range(n):
        for j in range(n):
            if not R[i, j]:
                continue
            for k in range(n):
                if R[j, k] and not R[i, k]:
                    raise InvariantError("relation is not transitive", witness=(lab[i], lab[j], lab[k]))


def minimal_elements(R: np.ndarray) -> list:
    """Indices ``x`` with no ``y != x`` such that ``R[y, x]``."""
    n = R.shape[0]
    return [x for x in range(n) if not any(R[y, x] for y in range(n) if y != x)]


@dataclass
class CaristiResult:
    point: str
    minimal: list
    relation: np.ndarray


def _solve_by_minimal(sp, a, cd, sampler, tol, is_fixed):
    R = caristi_order(sp, a, cd, sampler, tol)
    mins = minimal_elements(R)
    if not mins:
        raise InvariantError("no minimal element on a finite nonempty space")
    for m in mins:
        if not is_fixed(m):
            raise InvariantError(f"minimal element {sp.labels[m]!r} is not fixed", witness=sp.labels[m])
    labels = sorted(sp.labels[m] for m in mins)
    return CaristiResult(labels[0], labels, R)


def caristi_fixed_point(
    sp: FiniteSpace,
    a: Action,
    cd: CaristiData,
    T: TableMap,
    sampler: Optional[Sampler] = None,
    tol: float = TOL_CMP,
) -> CaristiResult:
    """Fixed point of ``T`` found as a minimal element of the Caristi order.

    Checks ``gamma(d(x, Tx)) <= psi(Tx, x)`` for every ``x`` first.
    """
    if len(T) != len(sp):
        raise InputError("map size does not match the space")
    for x in range(len(sp)):
        tx = T(x)
        lhs = cd.gamma(float(sp.dist[x, tx]))
        rhs = float(cd.psi[tx, x])
        if not _le(lhs, rhs, tol):
            raise PreconditionError(
                f"hypothesis fails at {sp.labels[x]!r}: gamma(d(x, Tx)) = {lhs!r} > psi(Tx, x) = {rhs!r}",
                witness=sp.labels[x],
            )
    return _solve_by_minimal(sp, a, cd, sampler, tol, lambda m: T(m) == m)


def endpoint(
    sp: FiniteSpace,
    a: Action,
    cd: CaristiData,
    T: MultiMap,
    sampler: Optional[Sampler] = None,
    tol: float = TOL_CMP,
) -> CaristiResult:
    """Point ``x`` with ``T(x) = {x}``; checks ``gamma(d(x, y)) <= psi(y, x)`` for ``y`` in ``T(x)``."""
    if len(T.table) != len(sp):
        raise InputError("multimap size does not match the space")
    for x in range(len(sp)):
        for y in sorted(T(x)):
            lhs = cd.gamma(float(sp.dist[x, y]))
            rhs = float(cd.psi[y, x])
            if not _le(lhs, rhs, tol):
                raise PreconditionError(
                    f"hypothesis fails at ({sp.labels[x]!r}, {sp.labels[y]!r}): {lhs!r} > {rhs!r}",
                    witness=(sp.labels[x], sp.labels[y]),
                )
    return _solve_by_minimal(sp, a, cd, sampler, tol, lambda m: T(m) == frozenset([m]))
