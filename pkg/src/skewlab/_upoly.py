"""Dense univariate polynomials over an exact field.

A polynomial is a list of coefficients, lowest degree first, with no
trailing zeros (the zero polynomial is ``[]``).  Coefficients may be
``Fraction`` objects or :class:`~skewlab.scalars.Scalar` values; only
``+ - * /`` and comparison with ``0`` are used.
"""

from __future__ import annotations


def trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def deg(p) -> int:
    return len(p) - 1


def add(p, q):
    n = max(len(p), len(q))
    out = []
    for i in range(n):
        if i < len(p) and i < len(q):
            out.append(p[i] + q[i])
        elif i < len(p):
            out.append(p[i])
        else:
            out.append(q[i])
    return trim(out)


def neg(p):
    return [-c for c in p]


def sub(p, q):
    return add(p, neg(q))


def mul(p, q):
    if not p or not q:
        return []
    out = [p[0] * 0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return trim(out)


def scale(p, c):
    return trim([c * a for a in p])


def divmod_(p, q):
    """Euclidean division ``p = quo*q + rem`` with ``deg rem < deg q``."""
    q = trim(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = trim(p)
    if len(rem) < len(q):
        return [], rem
    lead = q[-1]
    quo = [lead * 0] * (len(rem) - len(q) + 1)
    while rem and len(rem) >= len(q):
        shift = len(rem) - len(q)
        c = rem[-1] / lead
        quo[shift] = c
        for i, b in enumerate(q):
            rem[i + shift] = rem[i + shift] - c * b
        rem = trim(rem)
    return trim(quo), rem


def monic(p):
    p = trim(p)
    if not p:
        return p
    lead = p[-1]
    return [c / lead for c in p]


def gcd(p, q):
    p, q = trim(p), trim(q)
    while q:
        p, q = q, divmod_(p, q)[1]
    return monic(p)


def xgcd(p, q):
    """Return ``(g, s, t)`` with ``s*p + t*q = g`` and ``g`` monic."""
    r0, r1 = trim(p), trim(q)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        quo, rem = divmod_(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, sub(s0, mul(quo, s1))
        t0, t1 = t1, sub(t0, mul(quo, t1))
    if not r0:
        return [], s0, t0
    lead = r0[-1]
    return monic(r0), [c / lead for c in s0], [c / lead for c in t0]


def derivative(p):
    return trim([p[i] * i for i in range(1, len(p))])


def evaluate(p, x):
    acc = x * 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def is_squarefree(p) -> bool:
    """Characteristic-0 squarefree test via ``gcd(p, p')``."""
    return deg(gcd(p, derivative(p))) == 0
