"""Univariate polynomials over Q(zeta) as coefficient lists, lowest degree first."""

from __future__ import annotations

from .cyclotomic import Cyc, CyclotomicField

Poly = list  # list[Cyc]


def trim(p: Poly) -> Poly:
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def add(K, p: Poly, r: Poly) -> Poly:
    n = max(len(p), len(r))
    p = p + [K.zero] * (n - len(p))
    r = r + [K.zero] * (n - len(r))
    return trim([a + b for a, b in zip(p, r)])


def sub(K, p: Poly, r: Poly) -> Poly:
    return add(K, p, [-c for c in r])


def mul(K, p: Poly, r: Poly) -> Poly:
    if not p or not r:
        return []
    out = [K.zero] * (len(p) + len(r) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(r):
                if b:
                    out[i + j] = out[i + j] + a * b
    return trim(out)


def scale(p: Poly, c: Cyc) -> Poly:
    return trim([a * c for a in p])


def divmod_(K, p: Poly, d: Poly) -> tuple[Poly, Poly]:
    d = trim(d)
    if not d:
        raise ZeroDivisionError("polynomial division by zero")
    p = trim(p)
    if len(p) < len(d):
        return [], p
    lead_inv = d[-1].inv()
    quo = [K.zero] * (len(p) - len(d) + 1)
    rem = list(p)
    for k in range(len(quo) - 1, -1, -1):
        c = rem[k + len(d) - 1] * lead_inv
        quo[k] = c
        if c:
            for i, x in enumerate(d):
                rem[k + i] = rem[k + i] - c * x
    return trim(quo), trim(rem[: len(d) - 1])


def linear_power(K, root: Cyc, m: int) -> Poly:
    """(t - root)^m."""
    p = [K.one]
    for _ in range(m):
        p = mul(K, p, [-root, K.one])
    return p


def xgcd(K, a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """(g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = trim(a), trim(b)
    s0, s1 = [K.one], []
    t0, t1 = [], [K.one]
    while r1:
        quo, rem = divmod_(K, r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, sub(K, s0, mul(K, quo, s1))
        t0, t1 = t1, sub(K, t0, mul(K, quo, t1))
    if not r0:
        return [], s0, t0
    inv = r0[-1].inv()
    return scale(r0, inv), scale(s0, inv), scale(t0, inv)


def inverse_mod(K, a: Poly, m: Poly) -> Poly:
    g, s, _ = xgcd(K, a, m)
    if len(g) != 1:
        raise ZeroDivisionError("not invertible modulo the given polynomial")
    return divmod_(K, s, m)[1]


def evaluate(K, p: Poly, x: Cyc) -> Cyc:
    acc = K.zero
    for c in reversed(p):
        acc = acc * x + c
    return acc


def multiplicity(K, p: Poly, root: Cyc) -> int:
    """Largest m with (t - root)^m dividing p (p nonzero)."""
    m = 0
    p = trim(p)
    lin = [-root, K.one]
    while p:
        quo, rem = divmod_(K, p, lin)
        if rem:
            break
        p = quo
        m += 1
    return m
