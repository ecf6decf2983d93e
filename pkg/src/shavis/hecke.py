"""Fourier coefficients a_q via point counting over prime fields.

Below the naive threshold we count with a quadratic-residue table in O(q);
above it a baby-step giant-step order search in the Hasse interval takes
over (Mestre style, with deterministic point selection so runs repeat).
Bad primes use the standard rules: +-1 for multiplicative reduction, 0 for
additive; multiplicative splitness can also be read off a direct nonsingular
point count, which the tests use as an independent oracle against Tate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import arith, curves, localdata
from .arith import ArithmeticError_
from .curves import WeierstrassModel

NAIVE_LIMIT = 10_000
HARD_LIMIT = 10_000_000


class BadReductionError(ValueError):
    """Point count requested at a prime of bad reduction."""


@dataclass(frozen=True)
class ApRecord:
    q: int
    a_q: int
    method: str  # naive-count | bsgs | bad-prime-rule

    def __post_init__(self):
        if self.method != "bad-prime-rule":
            assert self.a_q * self.a_q <= 4 * self.q, f"Hasse bound violated at {self.q}"


def _reduced_ainvs(model: WeierstrassModel, q: int) -> tuple[int, ...]:
    minimal, _ = curves.minimal_model(model)
    return tuple(int(a) % q for a in minimal.int_ainvs())


def has_good_reduction(model: WeierstrassModel, q: int) -> bool:
    minimal, _ = curves.minimal_model(model)
    return int(curves.invariants(minimal).disc) % q != 0


def count_points(model: WeierstrassModel, q: int) -> int:
    """#E(F_q) including the point at infinity; requires good reduction."""
    if not arith.is_prime(q):
        raise ArithmeticError_(f"{q} is not prime")
    if q > HARD_LIMIT:
        raise ArithmeticError_(f"point counting capped at q <= {HARD_LIMIT}")
    if not has_good_reduction(model, q):
        raise BadReductionError(f"bad reduction at {q}; use the bad-prime rule")
    if q <= NAIVE_LIMIT:
        return _count_naive(model, q)
    return _count_bsgs(model, q)


def _count_naive(model: WeierstrassModel, q: int) -> int:
    a1, a2, a3, a4, a6 = _reduced_ainvs(model, q)
    if q == 2:
        count = 1
        for x in (0, 1):
            for y in (0, 1):
                if (y * y + a1 * x * y + a3 * y - (x**3 + a2 * x * x + a4 * x + a6)) % 2 == 0:
                    count += 1
        return count
    # complete the square: (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
    b2 = (a1 * a1 + 4 * a2) % q
    b4 = (a1 * a3 + 2 * a4) % q
    b6 = (a3 * a3 + 4 * a6) % q
    qr = bytearray(q)
    for z in range(1, (q + 1) // 2):
        qr[z * z % q] = 1
    count = q + 1
    for x in range(q):
        rhs = (4 * x**3 + b2 * x * x + 2 * b4 * x + b6) % q
        if rhs == 0:
            continue  # one point, already budgeted in the q of q+1
        count += 1 if qr[rhs] else -1
    return count


def _short_mod(model: WeierstrassModel, q: int) -> tuple[int, int]:
    """Coefficients (A, B) of an F_q-isomorphic y^2 = x^3 + Ax + B, q >= 5."""
    inv = curves.invariants(curves.minimal_model(model)[0])
    c4, c6 = int(inv.c4), int(inv.c6)
    return (-27 * c4) % q, (-54 * c6) % q


def _ec_add(P, Q, A, q):
    if P is None:
        return Q
    if Q is None:
        return P
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if (y1 + y2) % q == 0:
            return None
        lam = (3 * x1 * x1 + A) * pow(2 * y1, -1, q) % q
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, q) % q
    x3 = (lam * lam - x1 - x2) % q
    return x3, (lam * (x1 - x3) - y1) % q


def _ec_mul(k, P, A, q):
    if k < 0:
        k, P = -k, (P[0], (-P[1]) % q) if P else None
    R = None
    while k:
        if k & 1:
            R = _ec_add(R, P, A, q)
        P = _ec_add(P, P, A, q)
        k >>= 1
    return R


def _point_order_multiple(P, A, q) -> int:
    """A positive multiple of ord(P): finds n near q + 1 with nP = O.

    BSGS for z with (q+1)P = zP and |z| <= 2*sqrt(q); then n = q + 1 - z.
    Hasse guarantees z exists (take z = a_q).
    """
    width = 2 * math.isqrt(q) + 1
    m = math.isqrt(width) + 1
    Q = _ec_mul(q + 1, P, A, q)
    baby = {}
    R = _ec_mul(-m, P, A, q)
    for i in range(-m, m + 1):
        baby.setdefault(R, i)
        R = _ec_add(R, P, A, q)
    step = _ec_mul(2 * m + 1, P, A, q)
    neg_step = None if step is None else (step[0], (-step[1]) % q)
    R = _ec_add(Q, _ec_mul(m * (2 * m + 1), P, A, q), A, q)  # j = -m
    for j in range(-m, m + 1):
        if R in baby:
            z = baby[R] + j * (2 * m + 1)
            n = q + 1 - z
            if n > 0 and _ec_mul(n, P, A, q) is None:
                return n
        R = _ec_add(R, neg_step, A, q)
    raise ArithmeticError_(f"BSGS failed at {q}")  # unreachable if Hasse holds


def _count_bsgs(model: WeierstrassModel, q: int) -> int:
    A, B = _short_mod(model, q)
    lo = q + 1 - 2 * math.isqrt(q)
    hi = q + 1 + 2 * math.isqrt(q)
    order_lcm = 1
    for x in range(q):  # deterministic point sweep
        rhs = (x**3 + A * x + B) % q
        if rhs == 0:
            y = 0
        elif pow(rhs, (q - 1) // 2, q) == 1:
            y = pow(rhs, (q + 1) // 4, q) if q % 4 == 3 else _sqrt_mod(rhs, q)
        else:
            continue
        P = (x, y)
        n = _point_order_multiple(P, A, q)
        order_lcm = arith.lcm(order_lcm, _exact_order(P, n, A, q))
        multiples = [k for k in range(lo + (-lo % order_lcm), hi + 1, order_lcm) if k >= lo]
        if len(multiples) == 1:
            return multiples[0]
    raise ArithmeticError_(f"group order ambiguous at {q}")


def _exact_order(P, n, A, q) -> int:
    """ord(P) given a multiple n of it."""
    order = n
    for p in arith.prime_divisors(n):
        while order % p == 0 and _ec_mul(order // p, P, A, q) is None:
            order //= p
    return order


def _sqrt_mod(a: int, q: int) -> int:
    """Tonelli-Shanks for q = 1 mod 4."""
    s, d = 0, q - 1
    while d % 2 == 0:
        d //= 2
        s += 1
    z = 2
    while pow(z, (q - 1) // 2, q) != q - 1:
        z += 1
    m, c, t, r = s, pow(z, d, q), pow(a, d, q), pow(a, (d + 1) // 2, q)
    while t != 1:
        i, tt = 0, t
        while tt != 1:
            tt = tt * tt % q
            i += 1
        b = pow(c, 1 << (m - i - 1), q)
        m, c = i, b * b % q
        t, r = t * c % q, r * b % q
    return r


def count_nonsingular_points(model: WeierstrassModel, q: int) -> int:
    """#E_ns(F_q) of the reduced minimal model (independent splitness oracle).

    Split multiplicative gives q - 1, nonsplit q + 1, additive q.
    """
    a1, a2, a3, a4, a6 = _reduced_ainvs(model, q)
    count = 1
    for x in range(q):
        for y in range(q):
            fx = (y * y + a1 * x * y + a3 * y - (x**3 + a2 * x * x + a4 * x + a6)) % q
            if fx != 0:
                continue
            # partial derivatives
            dfx = (a1 * y - 3 * x * x - 2 * a2 * x - a4) % q
            dfy = (2 * y + a1 * x + a3) % q
            if dfx or dfy:
                count += 1
    return count


def a_q(model: WeierstrassModel, q: int) -> ApRecord:
    """The Fourier coefficient a_q, with the counting method recorded."""
    if not arith.is_prime(q):
        raise ArithmeticError_(f"{q} is not prime")
    if has_good_reduction(model, q):
        n = count_points(model, q)
        return ApRecord(q, q + 1 - n, "naive-count" if q <= NAIVE_LIMIT else "bsgs")
    local = localdata.tate_algorithm(model, q)
    if local.reduction_class == localdata.SPLIT_MULT:
        return ApRecord(q, 1, "bad-prime-rule")
    if local.reduction_class == localdata.NONSPLIT_MULT:
        return ApRecord(q, -1, "bad-prime-rule")
    return ApRecord(q, 0, "bad-prime-rule")
