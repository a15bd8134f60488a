"""Real roots of polynomials of degree at most four.

Coefficients are passed in ascending order, ``c[0] + c[1] x + c[2] x**2 + ...``.
Every solver returns the distinct real roots in increasing order.
"""

from __future__ import annotations

import math
from typing import Sequence

REDUCE_RTOL = 1e-14
CLUSTER_TOL = 1e-7
NEWTON_STEPS = 3


def trim(coeffs: Sequence[float]) -> list[float]:
    """Drop leading coefficients below ``REDUCE_RTOL * max|c|``."""
    c = [float(x) for x in coeffs]
    if not all(math.isfinite(x) for x in c):
        raise ValueError("coefficients must be finite")
    scale = max((abs(x) for x in c), default=0.0)
    while len(c) > 1 and abs(c[-1]) <= REDUCE_RTOL * scale:
        c.pop()
    return c


def effective_degree(coeffs: Sequence[float]) -> int:
    c = trim(coeffs)
    if len(c) == 1 and c[0] == 0.0:
        return -1
    return len(c) - 1


def horner(c: Sequence[float], x: float) -> tuple[float, float]:
    """Value and derivative of the polynomial at ``x``."""
    p, dp = 0.0, 0.0
    for coef in reversed(c):
        dp = dp * x + p
        p = p * x + coef
    return p, dp


def _polish(c: Sequence[float], x: float) -> float:
    p, dp = horner(c, x)
    for _ in range(NEWTON_STEPS):
        if p == 0.0 or not math.isfinite(dp) or abs(dp) <= 1e-300:
            break
        nx = x - p / dp
        np_, ndp = horner(c, nx)
        if not abs(np_) < abs(p):
            break
        x, p, dp = nx, np_, ndp
    return x


def _cluster(roots: list[float]) -> list[float]:
    roots = sorted(roots)
    out: list[list[float]] = []
    for r in roots:
        if out and r - out[-1][-1] <= CLUSTER_TOL:
            out[-1].append(r)
        else:
            out.append([r])
    return [math.fsum(g) / len(g) for g in out]


def _require_degree(c: list[float]) -> None:
    if len(c) < 2:
        raise ValueError("polynomial of degree 0 has no roots to find")


def solve_quadratic(coeffs: Sequence[float]) -> list[float]:
    c = trim(coeffs)
    _require_degree(c)
    if len(c) > 3:
        raise ValueError("solve_quadratic takes at most 3 coefficients")
    if len(c) == 2:
        return [-c[0] / c[1]]
    c0, b, a = c
    disc = b * b - 4.0 * a * c0
    if disc < 0.0:
        return []
    if disc == 0.0:
        return [-b / (2.0 * a)]
    q = -0.5 * (b + math.copysign(math.sqrt(disc), b))
    r1 = q / a
    r2 = c0 / q if q != 0.0 else r1
    return _cluster([r1, r2])


def solve_cubic(coeffs: Sequence[float]) -> list[float]:
    c = trim(coeffs)
    _require_degree(c)
    if len(c) > 4:
        raise ValueError("solve_cubic takes at most 4 coefficients")
    if len(c) < 4:
        return solve_quadratic(c)
    lead = c[3]
    return _monic_cubic(c[2] / lead, c[1] / lead, c[0] / lead)


def _monic_cubic(a: float, b: float, d: float) -> list[float]:
    """Real roots of ``x^3 + a x^2 + b x + d``."""
    monic = [d, b, a, 1.0]
    if d == 0.0:
        return _cluster([0.0] + solve_quadratic([b, a, 1.0]))

    shift = -a / 3.0
    p = b - a * a / 3.0
    q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + d
    half_q = 0.5 * q
    third_p = p / 3.0
    disc = half_q * half_q + third_p * third_p * third_p
    scale = max(half_q * half_q, abs(third_p) ** 3)

    if p == 0.0 and q == 0.0:
        ts = [0.0]
    elif abs(disc) <= 1e-14 * scale:
        # double root: t1 = 3q/p, t2 = -3q/(2p)
        if p == 0.0:
            ts = [-math.copysign(abs(q) ** (1 / 3), q)]
        else:
            ts = [3.0 * q / p, -1.5 * q / p]
    elif disc > 0.0:
        s = math.sqrt(disc)
        big = abs(half_q) + s
        A = -math.copysign(big ** (1.0 / 3.0), q) if q != 0.0 else big ** (1.0 / 3.0)
        ts = [A - third_p / A] if A != 0.0 else [0.0]
    else:
        r = 2.0 * math.sqrt(-third_p)
        arg = (3.0 * q / (2.0 * p)) * math.sqrt(-3.0 / p)
        phi = math.acos(max(-1.0, min(1.0, arg))) / 3.0
        ts = [r * math.cos(phi - 2.0 * math.pi * k / 3.0) for k in range(3)]
    return _cluster([_polish(monic, t + shift) for t in ts])


def _neumark_factor(a, b, c, d, y):
    """Split the monic quartic into ``(x^2 + G x + H)(x^2 + g x + h)`` for resolvent root ``y``."""
    s2 = a * a - 4.0 * y
    s = math.sqrt(s2) if s2 > 0.0 else 0.0
    G = 0.5 * (a + math.copysign(s, a)) if a != 0.0 else 0.5 * s
    g = y / G if G != 0.0 else a - G
    m = b - y
    options = []
    if s > 0.0:
        n = (a * m - 2.0 * c) / s
        if a < 0.0:
            n = -n  # G took the minus branch
        options.append((0.5 * (m + n), 0.5 * (m - n)))
    disc = m * m - 4.0 * d
    r = math.sqrt(disc) if disc > 0.0 else 0.0
    big = 0.5 * (m + math.copysign(r, m)) if m != 0.0 else 0.5 * r
    small = d / big if big != 0.0 else m - big
    options += [(big, small), (small, big)]

    def residual(H, h):
        return abs(G * h + g * H - c) + abs(H * h - d) + abs(H + h + G * g - b)

    H, h = min(options, key=lambda o: residual(*o))
    return G, H, g, h, residual(H, h)


def solve_quartic(coeffs: Sequence[float]) -> list[float]:
    """Real roots via Neumark's factorisation into two quadratics."""
    c = trim(coeffs)
    _require_degree(c)
    if len(c) > 5:
        raise ValueError("solve_quartic takes at most 5 coefficients")
    if len(c) < 5:
        return solve_cubic(c)
    lead = c[4]
    a, b, cc, d = c[3] / lead, c[2] / lead, c[1] / lead, c[0] / lead
    monic = [d, cc, b, a, 1.0]
    if d == 0.0:
        return _cluster([0.0] + solve_cubic([cc, b, a, 1.0]))

    resolvent = [a * a * d - a * b * cc + cc * cc, b * b + a * cc - 4.0 * d, -2.0 * b, 1.0]
    ys = _monic_cubic(resolvent[2], resolvent[1], resolvent[0])
    # prefer the root giving the widest real split a^2 - 4y; fall back on residual
    ys.sort()
    best = None
    scale = 1.0 + max(abs(a), abs(b), abs(cc), abs(d))
    for y in ys:
        fac = _neumark_factor(a, b, cc, d, y)
        if best is None or fac[4] < best[4]:
            best = fac
        if fac[4] <= 1e-12 * scale:
            break
    G, H, g, h, _ = best
    roots = solve_quadratic([H, G, 1.0]) + solve_quadratic([h, g, 1.0])
    return _cluster([_polish(monic, r) for r in roots])


def solve(coeffs: Sequence[float]) -> list[float]:
    """Dispatch on the effective degree (1 to 4)."""
    c = trim(coeffs)
    _require_degree(c)
    return [solve_quadratic, solve_quadratic, solve_quadratic, solve_cubic, solve_quartic][len(c) - 1](c)


def roots_in_open_unit_interval(coeffs: Sequence[float], edge_tol: float = 1e-12) -> list[float]:
    c = trim(coeffs)
    if len(c) < 2:
        return []
    return [r for r in solve(c) if edge_tol < r < 1.0 - edge_tol]
