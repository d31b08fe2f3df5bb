"""Pure-Python kernels; reference implementation mirrored by ``_ckernels.pyx``.

Kind codes index the built-in action formulas. Every formula is evaluated
with its arguments sorted (smaller first) so results are bitwise symmetric.
"""
import math

K_SUM = 0
K_SUM_PROD = 1
PROD_OVER_ONE_PLUS_PROD = 2
ROOT_SUM_POWER = 3
SUM_PLUS_PROD = 4
SUM_PLUS_SQRT_PROD = 5
SUM_TIMES_ONE_PLUS_PROD = 6


def _signed_root(v, n):
    if n == 1.0:
        return v
    if v < 0.0:
        return -math.pow(-v, 1.0 / n)
    return math.pow(v, 1.0 / n)


def theta(kind, p, s, t):
    if t < s:
        s, t = t, s
    if kind == K_SUM:
        return p * (s + t)
    if kind == K_SUM_PROD:
        return p * (s + t + s * t)
    if kind == PROD_OVER_ONE_PLUS_PROD:
        q = s * t
        return q / (1.0 + q)
    if kind == ROOT_SUM_POWER:
        # scaled by the larger magnitude so theta(0, s) == s exactly
        m = max(abs(s), abs(t))
        if m == 0.0:
            return 0.0
        a, b = s / m, t / m
        v = math.pow(a, p) + math.pow(b, p) if a >= 0.0 and b >= 0.0 else _signed_pow_sum(a, b, p)
        return m * _signed_root(v, p)
    if kind == SUM_PLUS_PROD:
        return s + t + s * t
    if kind == SUM_PLUS_SQRT_PROD:
        q = s * t
        return s + t + (math.sqrt(q) if q >= 0.0 else math.nan)
    if kind == SUM_TIMES_ONE_PLUS_PROD:
        return (s + t) * (1.0 + s * t)
    raise ValueError(f"unknown kind code {kind}")


def _signed_pow_sum(s, t, p):
    # odd integer powers keep the sign; anything else is undefined for s, t < 0
    if p == math.floor(p) and int(p) % 2 == 1:
        return math.copysign(math.pow(abs(s), p), s) + math.copysign(math.pow(abs(t), p), t)
    return math.nan


def bisect_callable(g, r, lo, hi, max_iter):
    """Solve ``g(t) = r`` for nondecreasing ``g`` with ``g(lo) <= r <= g(hi)``."""
    glo = g(lo)
    if glo >= r:
        return lo
    ghi = g(hi)
    if ghi == r:
        return hi
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        gm = g(mid)
        if gm == r:
            return mid
        if gm < r:
            lo, glo = mid, gm
        else:
            hi, ghi = mid, gm
    return lo if r - glo <= ghi - r else hi


def bisect_kind(kind, p, r, s, lo, hi, max_iter):
    return bisect_callable(lambda t: theta(kind, p, t, s), r, lo, hi, max_iter)


def a3_scan(dist, kind, p, rel_tol):
    """Return ``(i, j, k, lhs, rhs)`` for every ordered triple violating A3."""
    n = len(dist)
    out = []
    for i in range(n):
        row_i = dist[i]
        for j in range(n):
            lhs = float(row_i[j])
            for k in range(n):
                rhs = theta(kind, p, float(row_i[k]), float(dist[k][j]))
                if not lhs <= rhs + rel_tol * max(abs(lhs), abs(rhs)):
                    out.append((i, j, k, lhs, rhs))
    return out
