"""Tate's algorithm at rational primes and Tamagawa behavior under base change.

The algorithm below is the classical one (Tate's step structure), run on
integer quintuples with exact divisibility checks at every step; it loops on
non-minimal input, so the reported data always refers to the local minimal
model. Extension-field Tamagawa numbers are never recomputed by re-running
Tate over a bigger ring: they follow from the standard behavior of the
component group under base change, with an explicit refusal (Unsupported)
for ramified base change at additive primes.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import arith, curves, fields
from .arith import ArithmeticError_, exact_div
from .curves import WeierstrassModel

GOOD = "good"
SPLIT_MULT = "split-mult"
NONSPLIT_MULT = "nonsplit-mult"
ADDITIVE = "additive"


class UnsupportedBaseChangeError(ValueError):
    """Tamagawa base change we refuse to guess (ramified additive case)."""


@dataclass(frozen=True)
class LocalReductionData:
    q: int
    kodaira: str
    f: int
    c: int
    v_delta: int
    reduction_class: str

    def __post_init__(self):
        # structural sanity of Tate output
        if self.reduction_class == GOOD:
            assert self.f == 0 and self.c == 1
        elif self.reduction_class == SPLIT_MULT:
            assert self.f == 1 and self.c == self.v_delta
        elif self.reduction_class == NONSPLIT_MULT:
            assert self.f == 1 and self.c == (2 if self.v_delta % 2 == 0 else 1)
        else:
            assert self.f >= 2 and 1 <= self.c <= 4

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "kodaira": self.kodaira,
            "f": self.f,
            "c": self.c,
            "v_delta": self.v_delta,
            "class": self.reduction_class,
        }

    @classmethod
    def from_json(cls, blob: dict) -> "LocalReductionData":
        return cls(blob["q"], blob["kodaira"], blob["f"], blob["c"],
                   blob["v_delta"], blob["class"])


@dataclass(frozen=True)
class LocalFieldExtension:
    """Local behavior of an extension field at a residue characteristic."""

    residue_char: int
    e: int
    f: int

    def __post_init__(self):
        if self.e < 1 or self.f < 1:
            raise ArithmeticError_("ramification/residue degrees must be >= 1")


def _inv(a: int, p: int) -> int:
    return pow(a, -1, p)


def _quad_has_root(a: int, b: int, c: int, p: int) -> bool:
    """Does a*Y^2 + b*Y + c = 0 have a root in F_p? (a may vanish mod p.)"""
    a, b, c = a % p, b % p, c % p
    if p == 2:
        return (c == 0) or ((a + b + c) % 2 == 0)
    if a == 0:
        return True  # linear (or constant-zero) always has a root here
    disc = (b * b - 4 * a * c) % p
    return disc == 0 or pow(disc, (p - 1) // 2, p) == 1


def _cubic_root_count(b: int, c: int, d: int, p: int) -> int:
    """Number of distinct roots of T^3 + b T^2 + c T + d in F_p."""
    if p <= 64:
        return sum(1 for t in range(p) if (t**3 + b * t * t + c * t + d) % p == 0)
    # gcd(X^p - X, P) via binary exponentiation modulo the cubic
    mod = (d % p, c % p, b % p, 1)

    def polymul(f, g):
        out = [0] * (len(f) + len(g) - 1)
        for i, fi in enumerate(f):
            if fi:
                for j, gj in enumerate(g):
                    out[i + j] = (out[i + j] + fi * gj) % p
        return out

    def polyrem(f):
        f = list(f)
        while len(f) > 3:
            lead = f[-1]
            if lead:
                shift = len(f) - 4
                for k in range(4):
                    f[shift + k] = (f[shift + k] - lead * mod[k]) % p
            f.pop()
        while f and f[-1] == 0:
            f.pop()
        return f or [0]

    # X^p mod P
    result, base, e = [1], [0, 1], p
    while e:
        if e & 1:
            result = polyrem(polymul(result, base))
        base = polyrem(polymul(base, base))
        e >>= 1
    # gcd(X^p - X, P)
    f = list(result)
    while len(f) < 2:
        f.append(0)
    f[1] = (f[1] - 1) % p
    g = [x % p for x in mod]
    a, bb = g, polyrem(f)
    while bb != [0]:
        # a mod bb
        r = list(a)
        inv_lead = _inv(bb[-1], p)
        while len(r) >= len(bb) and r != [0]:
            coef = r[-1] * inv_lead % p
            shift = len(r) - len(bb)
            for k in range(len(bb)):
                r[shift + k] = (r[shift + k] - coef * bb[k]) % p
            while r and r[-1] == 0:
                r.pop()
            if not r:
                r = [0]
        a, bb = bb, r
    return len(a) - 1


def _translate(a: tuple[int, ...], r: int, s: int, t: int) -> tuple[int, ...]:
    """Integral (u=1, r, s, t) change of variables on an integer quintuple."""
    a1, a2, a3, a4, a6 = a
    return (
        a1 + 2 * s,
        a2 - s * a1 + 3 * r - s * s,
        a3 + r * a1 + 2 * t,
        a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t,
        a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1,
    )


def _bc_invariants(a):
    a1, a2, a3, a4, a6 = a
    b2 = a1 * a1 + 4 * a2
    b4 = a1 * a3 + 2 * a4
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - 24 * b4
    c6 = -(b2**3) + 36 * b2 * b4 - 216 * b6
    delta = -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    return b2, b4, b6, b8, c4, c6, delta


def tate_algorithm(model: WeierstrassModel, q: int) -> LocalReductionData:
    """Kodaira type, conductor exponent, Tamagawa number and splitness at q."""
    if not arith.is_prime(q):
        raise ArithmeticError_(f"{q} is not prime")
    work, _ = curves.integral_model(model)
    a = work.int_ainvs()
    p = q

    while True:
        b2, b4, b6, b8, c4, c6, delta = _bc_invariants(a)
        if delta == 0:
            raise curves.SingularCurveError(f"singular model {model}")
        n = arith.valuation(delta, p)

        if n == 0:
            return LocalReductionData(p, "I0", 0, 1, 0, GOOD)

        # Step 2: move the singular point of the reduction to (0, 0).
        a1, a2, a3, a4, a6 = a
        if p == 2:
            if b2 % 2 == 0:
                r = a4 % 2
                t = (r * (1 + a2 + a4) + a6) % 2
            else:
                r = a3 % 2
                t = (r + a4) % 2
        elif p == 3:
            r = (-b6) % 3 if b2 % 3 == 0 else (-b2 * b4) % 3
            t = (a1 * r + a3) % 3
        else:
            if c4 % p == 0:
                r = -b2 * _inv(12, p)
            else:
                r = -(c6 + b2 * c4) * _inv(12 * c4, p)
            r %= p
            t = (-(a1 * r + a3) * _inv(2, p)) % p
        a = _translate(a, r, 0, t)
        a1, a2, a3, a4, a6 = a
        assert a3 % p == 0 and a4 % p == 0 and a6 % p == 0
        # b-invariants are not translation-invariant; refresh before testing
        b2, b4, b6, b8, c4, c6, delta = _bc_invariants(a)

        if c4 % p != 0:
            # Type I_n, multiplicative; splitness from the tangent quadratic
            if _quad_has_root(1, a1, -a2, p):
                return LocalReductionData(p, f"I{n}", 1, n, n, SPLIT_MULT)
            c = 2 if n % 2 == 0 else 1
            return LocalReductionData(p, f"I{n}", 1, c, n, NONSPLIT_MULT)

        if a6 % p**2 != 0:
            return LocalReductionData(p, "II", n, 1, n, ADDITIVE)
        if b8 % p**3 != 0:
            return LocalReductionData(p, "III", n - 1, 2, n, ADDITIVE)
        if b6 % p**3 != 0:
            c = 3 if _quad_has_root(1, exact_div(a3, p), -exact_div(a6, p * p), p) else 1
            return LocalReductionData(p, "IV", n - 2, c, n, ADDITIVE)

        # Step 6 preparation: p | a1, a2; p^2 | a3, a4; p^3 | a6.
        if p == 2:
            s = a2 % 2
            t = 2 * (exact_div(a6, 4) % 2)
        else:
            s = (-a1 * _inv(2, p)) % p
            t = (-a3 * _inv(2, p * p)) % (p * p)
        a = _translate(a, 0, s, t)
        a1, a2, a3, a4, a6 = a
        assert a1 % p == 0 and a2 % p == 0
        assert a3 % p**2 == 0 and a4 % p**2 == 0 and a6 % p**3 == 0

        # Step 6: cubic T^3 + b T^2 + c T + d from the depressed equation.
        b = exact_div(a2, p)
        cc = exact_div(a4, p * p)
        d = exact_div(a6, p**3)
        w = 27 * d * d - b * b * cc * cc + 4 * b**3 * d - 18 * b * cc * d + 4 * cc**3
        x = 3 * cc - b * b

        if w % p != 0:
            # distinct roots: I0*
            c = 1 + _cubic_root_count(b, cc, d, p)
            return LocalReductionData(p, "I0*", n - 4, c, n, ADDITIVE)

        if x % p != 0:
            # double root: I_m* for some m >= 1; move the double root to T = 0
            if p == 2:
                r = cc % 2
            elif p == 3:
                r = (b * cc) % 3
            else:
                r = ((b * cc - 9 * d) * _inv(2 * x, p)) % p
            a = _translate(a, p * r, 0, 0)
            a1, a2, a3, a4, a6 = a
            assert a2 % p == 0 and a2 % p**2 != 0
            assert a4 % p**3 == 0 and a6 % p**4 == 0

            ix, iy = 3, 3
            mx, my = p * p, p * p
            while True:
                a2t = exact_div(a2, p)
                a3t = exact_div(a3, my)
                a4t = exact_div(a4, p * mx)
                a6t = exact_div(a6, mx * my)
                # quadratic Y^2 + a3t Y - a6t
                if (a3t * a3t + 4 * a6t) % p != 0:
                    m = ix + iy - 5
                    c = 4 if _quad_has_root(1, a3t, -a6t, p) else 2
                    return LocalReductionData(p, f"I{m}*", n - m - 4, c, n, ADDITIVE)
                t = my * ((a6t % 2) if p == 2 else (-a3t * _inv(2, p)) % p)
                a = _translate(a, 0, 0, t)
                a1, a2, a3, a4, a6 = a
                iy += 1
                my *= p

                a2t = exact_div(a2, p)
                a4t = exact_div(a4, p * mx)
                a6t = exact_div(a6, mx * my)
                # quadratic a2t X^2 + a4t X + a6t
                if (a4t * a4t - 4 * a2t * a6t) % p != 0:
                    m = ix + iy - 5
                    c = 4 if _quad_has_root(a2t, a4t, a6t, p) else 2
                    return LocalReductionData(p, f"I{m}*", n - m - 4, c, n, ADDITIVE)
                r = mx * ((a6t * a2t) % 2 if p == 2 else (-a4t * _inv(2 * a2t, p)) % p)
                a = _translate(a, r, 0, 0)
                a1, a2, a3, a4, a6 = a
                ix += 1
                mx *= p

        # triple root: move it to T = 0
        if p == 2:
            r = d % 2
        elif p == 3:
            r = (-d) % 3
        else:
            r = (-b * _inv(3, p)) % p
        a = _translate(a, p * r, 0, 0)
        a1, a2, a3, a4, a6 = a
        assert a2 % p**2 == 0 and a4 % p**3 == 0 and a6 % p**4 == 0

        # Step 8: quadratic Y^2 + (a3/p^2) Y - a6/p^4
        a3t = exact_div(a3, p * p)
        a6t = exact_div(a6, p**4)
        if (a3t * a3t + 4 * a6t) % p != 0:
            c = 3 if _quad_has_root(1, a3t, -a6t, p) else 1
            return LocalReductionData(p, "IV*", n - 6, c, n, ADDITIVE)
        t = p * p * ((a6t % 2) if p == 2 else (-a3t * _inv(2, p)) % p)
        a = _translate(a, 0, 0, t)
        a1, a2, a3, a4, a6 = a
        assert a3 % p**3 == 0 and a6 % p**5 == 0

        if a4 % p**4 != 0:
            return LocalReductionData(p, "III*", n - 7, 2, n, ADDITIVE)
        if a6 % p**6 != 0:
            return LocalReductionData(p, "II*", n - 8, 1, n, ADDITIVE)

        # Non-minimal at p: rescale and restart.
        a = (
            exact_div(a1, p),
            exact_div(a2, p * p),
            exact_div(a3, p**3),
            exact_div(a4, p**4),
            exact_div(a6, p**6),
        )


def conductor(model: WeierstrassModel) -> tuple[int, list[LocalReductionData]]:
    """Conductor N = prod q^f over bad primes of the global minimal model."""
    minimal, _ = curves.minimal_model(model)
    disc = int(curves.invariants(minimal).disc)
    locals_ = []
    n = 1
    for q in arith.prime_divisors(disc):
        data = tate_algorithm(minimal, q)
        if data.reduction_class != GOOD:
            locals_.append(data)
            n *= q**data.f
    return n, locals_


def kodaira_in_n(kodaira: str) -> int | None:
    """The n of I_n (None for other types)."""
    if kodaira.startswith("I") and not kodaira.endswith("*") and kodaira not in ("II", "III", "IV"):
        return int(kodaira[1:])
    return None


def kodaira_star_n(kodaira: str) -> int | None:
    if kodaira.startswith("I") and kodaira.endswith("*") and kodaira not in ("II*", "III*", "IV*"):
        return int(kodaira[1:-1])
    return None


def component_count(kodaira: str) -> int:
    """Number of geometric components of the special fiber (Ogg bookkeeping)."""
    n = kodaira_in_n(kodaira)
    if n is not None:
        return max(n, 1)
    n = kodaira_star_n(kodaira)
    if n is not None:
        return n + 5
    return {"II": 1, "III": 2, "IV": 3, "IV*": 7, "III*": 8, "II*": 9}[kodaira]


def tamagawa_over_extension(local: LocalReductionData, ext: LocalFieldExtension) -> int:
    """Tamagawa number after local base change with data (e, f).

    Good: 1. Multiplicative I_n: type becomes I_(e*n); split stays split, and
    nonsplit becomes split exactly when the residue extension has even degree.
    Additive with e = 1: the component group is unchanged as a scheme, so the
    rational point count over the bigger residue field follows from the shape
    recorded by Tate. Additive with e > 1 is refused.
    """
    if ext.residue_char != local.q:
        raise ArithmeticError_(
            f"extension residue characteristic {ext.residue_char} != prime {local.q}"
        )
    e, f = ext.e, ext.f
    if local.reduction_class == GOOD:
        return 1
    if local.reduction_class == SPLIT_MULT:
        return e * local.v_delta
    if local.reduction_class == NONSPLIT_MULT:
        n = e * local.v_delta
        if f % 2 == 0:
            return n  # unramified quadratic inside the extension splits the torus
        return 2 if n % 2 == 0 else 1
    # additive
    if e > 1:
        raise UnsupportedBaseChangeError(
            f"ramified base change (e={e}) at additive prime {local.q}; supply local data"
        )
    k = local.kodaira
    if k in ("II", "II*", "III", "III*"):
        # component groups 0, 0, Z/2, Z/2 with rational points already counted
        return local.c
    if k in ("IV", "IV*"):
        if local.c == 3:
            return 3
        return 3 if f % 2 == 0 else 1
    if k == "I0*":
        # c - 1 of the cubic's roots are rational; the rest are conjugate
        if local.c == 4:
            return 4
        if local.c == 2:
            return 4 if f % 2 == 0 else 2
        return 4 if f % 3 == 0 else 1
    # I_m*, m >= 1: component group rationality decided by a quadratic
    if local.c == 4:
        return 4
    return 4 if f % 2 == 0 else 2


def bad_primes(model: WeierstrassModel) -> list[int]:
    minimal, _ = curves.minimal_model(model)
    return arith.prime_divisors(int(curves.invariants(minimal).disc))


@dataclass(frozen=True)
class TamagawaVerdict:
    """Outcome of the p-unit Tamagawa check over a field."""

    all_coprime: bool
    offending: list[int]
    inconclusive: list[int]
    detail: dict[int, dict]

    def to_json(self) -> dict:
        return {
            "all_coprime": self.all_coprime,
            "offending": self.offending,
            "inconclusive": self.inconclusive,
            "detail": {str(q): blob for q, blob in sorted(self.detail.items())},
        }


def is_p_unit_tamagawa(
    model: WeierstrassModel,
    p: int,
    field: fields.NumberFieldDescriptor,
    restrict_to: list[int] | None = None,
) -> TamagawaVerdict:
    """Are the Tamagawa numbers of the model over `field` coprime to p?

    Checks every bad prime of the minimal model (or only `restrict_to`).
    Returns offending primes, plus an inconclusive list where the base-change
    rules refuse (ramified additive reduction).
    """
    minimal, _ = curves.minimal_model(model)
    detail: dict[int, dict] = {}
    offending, inconclusive = [], []
    for q in bad_primes(minimal):
        if restrict_to is not None and q not in restrict_to:
            continue
        local = tate_algorithm(minimal, q)
        if local.reduction_class == GOOD:
            continue
        split = fields.splitting_data(field, q)
        ext = LocalFieldExtension(q, split.e, split.f)
        entry = {"local": local.to_json(), "e": split.e, "f": split.f}
        try:
            c_ext = tamagawa_over_extension(local, ext)
            entry["c_over_field"] = c_ext
            if c_ext % p == 0:
                offending.append(q)
        except UnsupportedBaseChangeError as exc:
            entry["unsupported"] = str(exc)
            inconclusive.append(q)
        detail[q] = entry
    return TamagawaVerdict(
        all_coprime=not offending and not inconclusive,
        offending=offending,
        inconclusive=inconclusive,
        detail=detail,
    )
