"""Exact arithmetic and invariants of the base quadratic field Q(sqrt(D)).

Everything here is integer arithmetic: squarefree validation, fundamental
discriminants, Kronecker symbols, prime splitting, class numbers by reduced
binary quadratic forms, and fundamental units by continued fractions.  The
class number and unit routines double as the scope gate's evidence oracle:
a field is rejected with the computed numbers, never with a lookup table.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, NamedTuple, Optional

from .errors import NotSquarefree, OutOfScope, Overflow

DEFAULT_CLASS_NUMBER_BOUND = 10**6
DEFAULT_UNIT_BIT_BOUND = 512


class Kind(Enum):
    IMAGINARY_ODD_CLASS = "ImaginaryOddClass"
    SPECIAL_I = "SpecialImaginary(i)"
    SPECIAL_SQRT_M2 = "SpecialImaginary(sqrt(-2))"
    SPECIAL_SQRT_M3 = "SpecialImaginary(sqrt(-3))"
    REAL_NORM_MINUS_ONE = "RealNormMinusOne"


SPECIAL_KINDS = (Kind.SPECIAL_I, Kind.SPECIAL_SQRT_M2, Kind.SPECIAL_SQRT_M3)


class SplitType(Enum):
    SPLIT = "Split"
    INERT = "Inert"
    RAMIFIED = "Ramified"


class FundUnit(NamedTuple):
    x: int
    y: int
    sigma: int  # unit is (x + y*sqrt(D)) / sigma
    norm: int  # (x^2 - D y^2) / sigma^2, always +1 or -1


class PrimeIdeal(NamedTuple):
    norm: int
    p: int
    type: SplitType


@dataclass(frozen=True)
class PrimeSplitting:
    p: int
    type: SplitType
    ideal_norms: tuple[int, ...]


@dataclass(frozen=True)
class FieldSpec:
    """A validated base field K = Q(sqrt(D)) with its invariants.

    d_K is the discriminant as a positive integer (the paper's convention);
    signed_disc is the usual fundamental discriminant, used by all
    Kronecker-character code.
    """

    D: int
    kind: Kind
    d_K: int
    signed_disc: int
    h_K: int
    w_K: int
    fund_unit: Optional[FundUnit]
    regulator: float

    @property
    def is_real(self) -> bool:
        return self.D > 0

    def to_json_dict(self) -> dict:
        fu = None
        if self.fund_unit is not None:
            fu = {
                "x": self.fund_unit.x,
                "y": self.fund_unit.y,
                "sigma": self.fund_unit.sigma,
                "norm": self.fund_unit.norm,
            }
        return {
            "D": self.D,
            "kind": self.kind.value,
            "d_K": self.d_K,
            "signed_disc": self.signed_disc,
            "h": self.h_K,
            "w": self.w_K,
            "fund_unit": fu,
            "regulator": self.regulator,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())


def _sieve_primes(n: int) -> list[int]:
    """All primes <= n."""
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i in range(2, n + 1) if sieve[i]]


def _factor(n: int) -> dict[int, int]:
    """Trial-division factorization; inputs here stay within the class-number bound."""
    n = abs(n)
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_squarefree(n: int) -> bool:
    return all(e == 1 for e in _factor(n).values())


def fundamental_discriminant(D: int) -> int:
    """Signed discriminant of Q(sqrt(D)) for squarefree D: D if D=1 mod 4, else 4D."""
    return D if D % 4 == 1 else 4 * D


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n), extended to all integers n.

    Completely multiplicative in n; for fundamental a its period in n
    divides |a|.
    """
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result = -result
    # n odd > 0: Jacobi with quadratic reciprocity.
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def class_number(D: int, bound: int = DEFAULT_CLASS_NUMBER_BOUND) -> int:
    """Class number of Q(sqrt(D)) by exhaustive form enumeration.

    Imaginary: count reduced forms (a,b,c) of discriminant Delta = b^2-4ac,
    |b| <= a <= c with b >= 0 when a = c or a = |b|.  Real: count cycles of
    reduced indefinite forms under the reduction operator, which gives the
    narrow class number; divide by 2 when the fundamental unit has norm +1.
    Deliberately non-analytic: the class number formula is what the rest of
    the package is tested against.
    """
    if D in (0, 1):
        raise NotSquarefree(f"D={D} does not define a quadratic field")
    if not is_squarefree(D):
        raise NotSquarefree(f"D={D} is not squarefree")
    delta = fundamental_discriminant(D)
    if abs(delta) > bound:
        raise Overflow(f"|discriminant| {abs(delta)} exceeds bound {bound}")
    if delta < 0:
        return _imaginary_class_number(delta)
    h_plus = len(_reduced_indefinite_cycles(delta))
    unit = fundamental_unit(D)
    return h_plus if unit.norm == -1 else h_plus // 2


def _imaginary_class_number(delta: int) -> int:
    assert delta < 0 and delta % 4 in (0, 1)
    h = 0
    b_max = math.isqrt(-delta // 3)
    for b in range(abs(delta) % 2, b_max + 1, 2):
        m = (b * b - delta) // 4
        for a in range(max(b, 1), math.isqrt(m) + 1):
            if m % a:
                continue
            c = m // a
            # (a, +-b, c) reduced; b = 0, a = b, a = c each give one class.
            h += 1 if (b == 0 or a == b or a == c) else 2
    return h


def _reduced_indefinite_cycles(delta: int) -> list[list[tuple[int, int, int]]]:
    """All cycles of reduced indefinite forms of (fundamental) discriminant delta."""
    assert delta > 0
    root = math.isqrt(delta)
    assert root * root != delta
    forms = set()
    for b in range(1, root + 1):
        if (b - delta) % 2:
            continue
        m = (delta - b * b) // 4  # a*c = -m < 0
        lo = (root - b) // 2 + 1  # sqrt(delta) - b < 2|a|
        hi = (root + b) // 2  # 2|a| < sqrt(delta) + b
        for a_abs in range(max(lo, 1), hi + 1):
            if m % a_abs:
                continue
            c = m // a_abs
            forms.add((a_abs, b, -c))
            forms.add((-a_abs, b, c))

    def step(form: tuple[int, int, int]) -> tuple[int, int, int]:
        _, b, c = form
        two_c = 2 * abs(c)
        r = (-b) % two_c
        r += two_c * ((root - r) // two_c)  # largest r < sqrt(delta) in its class
        return (c, r, (r * r - delta) // (4 * c))

    cycles = []
    seen: set[tuple[int, int, int]] = set()
    for start in sorted(forms):
        if start in seen:
            continue
        cycle = []
        f = start
        while f not in seen:
            seen.add(f)
            cycle.append(f)
            f = step(f)
        cycles.append(cycle)
    return cycles


def fundamental_unit(D: int, bit_bound: int = DEFAULT_UNIT_BIT_BOUND) -> FundUnit:
    """Smallest unit > 1 of O_{Q(sqrt(D))} via the continued fraction of
    (delta mod 2 + sqrt(delta))/2, delta the discriminant.

    Convergents are tracked exactly; G_i = 2 A_i - P0 B_i satisfies
    G^2 - delta B^2 = +-4 exactly when the quotient cycle closes (Q returns
    to 2), giving the fundamental solution with norm sign determined by the
    period parity.
    """
    if D <= 1:
        raise OutOfScope("not_real", f"D={D} is not a real quadratic radicand")
    if not is_squarefree(D):
        raise NotSquarefree(f"D={D} is not squarefree")
    delta = fundamental_discriminant(D)
    root = math.isqrt(delta)
    p0 = delta % 2
    p_cur, q_cur = p0, 2
    quot = (p_cur + root) // q_cur
    num_prev, num_cur = 1, quot  # convergent numerators A_i
    den_prev, den_cur = 0, 1  # convergent denominators B_i
    while True:
        p_next = quot * q_cur - p_cur
        q_next = (delta - p_next * p_next) // q_cur
        if q_next == 2:
            x = 2 * num_cur - p0 * den_cur
            y = den_cur
            break
        quot = (p_next + root) // q_next
        num_cur, num_prev = quot * num_cur + num_prev, num_cur
        den_cur, den_prev = quot * den_cur + den_prev, den_cur
        p_cur, q_cur = p_next, q_next
        if den_cur.bit_length() > bit_bound:
            raise Overflow(
                f"continued-fraction convergents for D={D} exceed {bit_bound} bits"
            )
    # Unit is (x + y sqrt(delta))/2; rewrite over sqrt(D).
    if delta == 4 * D:
        x, sigma = x // 2, 1  # x is even: x^2 = 4 D y^2 +- 4
    elif x % 2 == 0 and y % 2 == 0:
        x, y, sigma = x // 2, y // 2, 1
    else:
        sigma = 2
    norm = (x * x - D * y * y) // (sigma * sigma)
    assert norm in (1, -1)
    return FundUnit(x, y, sigma, norm)


def splitting_type(field: FieldSpec, p: int) -> PrimeSplitting:
    """Splitting of the rational prime p in K, decided by kronecker(Delta, p)."""
    sym = kronecker(field.signed_disc, p)
    if sym == 0:
        return PrimeSplitting(p, SplitType.RAMIFIED, (p,))
    if sym == 1:
        return PrimeSplitting(p, SplitType.SPLIT, (p, p))
    return PrimeSplitting(p, SplitType.INERT, (p * p,))


def prime_ideals_up_to(field: FieldSpec, N: int) -> Iterator[PrimeIdeal]:
    """Prime ideals of O_K with norm <= N, ordered by norm then p.

    Split p contributes two ideals of norm p, ramified p one of norm p,
    inert p one of norm p^2 (so only p <= sqrt(N) matters).
    """
    ideals: list[PrimeIdeal] = []
    for p in _sieve_primes(N):
        sp = splitting_type(field, p)
        if sp.type is SplitType.SPLIT:
            ideals.append(PrimeIdeal(p, p, SplitType.SPLIT))
            ideals.append(PrimeIdeal(p, p, SplitType.SPLIT))
        elif sp.type is SplitType.RAMIFIED:
            ideals.append(PrimeIdeal(p, p, SplitType.RAMIFIED))
        elif p * p <= N:
            ideals.append(PrimeIdeal(p * p, p, SplitType.INERT))
    ideals.sort(key=lambda ideal: (ideal.norm, ideal.p))
    yield from ideals


def validate_field(D: int, bound: int = DEFAULT_CLASS_NUMBER_BOUND) -> FieldSpec:
    """Scope gate: build a FieldSpec iff Q(sqrt(D)) is a covered field.

    Covered: imaginary Q(sqrt(-p)) with p prime = 3 mod 4 and the three
    special fields Q(i), Q(sqrt(-2)), Q(sqrt(-3)); real Q(sqrt(p)) with
    p prime = 1 mod 4 (these have a norm -1 unit).  Every rejection carries
    evidence computed by the form or Pell oracle.
    """
    if D in (0, 1):
        raise NotSquarefree(f"D={D} does not define a quadratic field")
    if not is_squarefree(D):
        raise NotSquarefree(f"D={D} is not squarefree")
    delta = fundamental_discriminant(D)
    if D < 0:
        return _validate_imaginary(D, delta, bound)
    return _validate_real(D, delta, bound)


def _validate_imaginary(D: int, delta: int, bound: int) -> FieldSpec:
    h = class_number(D, bound)
    if D == -1:
        return FieldSpec(D, Kind.SPECIAL_I, 4, -4, h, 4, None, 0.0)
    if D == -2:
        return FieldSpec(D, Kind.SPECIAL_SQRT_M2, 8, -8, h, 2, None, 0.0)
    if D == -3:
        return FieldSpec(D, Kind.SPECIAL_SQRT_M3, 3, -3, h, 6, None, 0.0)
    p = -D
    factors = _factor(p)
    if len(factors) > 1:
        raise OutOfScope(
            "composite",
            f"radicand {p} = {_format_factors(factors)} is composite; genus theory "
            f"forces an even class number (computed h = {h})",
            factors=factors,
            h=h,
        )
    if h % 2 == 0:
        raise OutOfScope(
            "even_class_number",
            f"class number {h} is even (form enumeration); only 2-unramified "
            f"fields with odd class number are covered",
            h=h,
        )
    # Odd h for a prime radicand forces p = 3 mod 4 (2 would otherwise ramify).
    if p % 4 != 3:
        raise OutOfScope(
            "wrong_congruence",
            f"prime {p} = {p % 4} mod 4: 2 ramifies in Q(sqrt({D})) and the field "
            f"is not one of the special cases",
            h=h,
        )
    return FieldSpec(D, Kind.IMAGINARY_ODD_CLASS, -delta, delta, h, 2, None, 0.0)


def _validate_real(D: int, delta: int, bound: int) -> FieldSpec:
    unit = fundamental_unit(D)
    if D % 4 != 1:
        if D % 2 == 0:
            raise OutOfScope(
                "two_ramified",
                f"2 ramifies in Q(sqrt({D})) (discriminant {delta}); real fields "
                f"with 2 ramified are not covered",
                unit_norm=unit.norm,
            )
        raise OutOfScope(
            "wrong_congruence",
            f"real radicand {D} = 3 mod 4: the fundamental unit has norm "
            f"{unit.norm} (Pell oracle), so no unit of norm -1 exists",
            unit_norm=unit.norm,
        )
    factors = _factor(D)
    if len(factors) > 1:
        raise OutOfScope(
            "composite",
            f"radicand {D} = {_format_factors(factors)} is composite; genus theory "
            f"forces an even narrow class group (unit norm {unit.norm})",
            factors=factors,
            unit_norm=unit.norm,
        )
    if unit.norm != -1:
        raise OutOfScope(
            "no_negative_pell",
            f"x^2 - {D} y^2 = -4 has no solution: fundamental unit norm is +1",
            unit_norm=unit.norm,
        )
    h = class_number(D, bound)
    if h % 2 == 0:
        raise OutOfScope(
            "even_class_number", f"class number {h} is even", h=h
        )
    regulator = math.log((unit.x + unit.y * math.sqrt(D)) / unit.sigma)
    return FieldSpec(D, Kind.REAL_NORM_MINUS_ONE, delta, delta, h, 2, unit, regulator)


def _format_factors(factors: dict[int, int]) -> str:
    return "*".join(
        str(p) if e == 1 else f"{p}^{e}" for p, e in sorted(factors.items())
    )
