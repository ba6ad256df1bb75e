"""Residues, special values, and the asymptotic constant C.

Two independent numeric routes are kept for each ingredient: the class
number formula residue against a direct L(chi, 1) summation, and zeta_K(2)
by character factorization against the cotangent/A(x) integral formula for
imaginary fields.  C itself is assembled as

    C = prefactor * Res_{s=1} zeta_K / zeta_K(2) * prod_{p|2} g_p(1)/(1+1/N(p))

with prefactor 1/(2 d_K^2) for imaginary fields (the factor-of-two comes
from averaging the plain and signed counting series) and 1/d_K^2 for real
fields.  The product over primes above 2 evaluates to 1 exactly; it is kept
as an explicitly computed report column.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
from scipy.integrate import quad
from scipy.special import zeta as hurwitz_zeta

from .errors import MethodUnsupported, NonConvergence, QuadratureFailure
from .localdata import evaluate_g, local_factor
from .quadfield import FieldSpec, kronecker, prime_ideals_up_to

DEFAULT_L_TERMS = 10**6
A_INTEGRAL_CUTOFF = 30.0  # integrand is below 1e-20 past t = 30 for x >= cot(pi(1-1/3))


class Zeta2Method(Enum):
    FACTORIZATION = "Factorization"
    ZAGIER = "Zagier"


@dataclass(frozen=True)
class ConstantReport:
    field_D: int
    C: float
    residue: float
    zeta2: float
    zeta2_alt: Optional[float]  # Zagier value when applicable
    two_adic_factor: float
    prefactor: float
    h: int
    w: int
    regulator: float

    def to_json_dict(self) -> dict:
        return {
            "D": self.field_D,
            "C": self.C,
            "residue": self.residue,
            "zeta2": self.zeta2,
            "zeta2_alt": self.zeta2_alt,
            "two_adic_factor": self.two_adic_factor,
            "prefactor": self.prefactor,
            "h": self.h,
            "w": self.w,
            "regulator": self.regulator,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())


def dedekind_residue(field: FieldSpec) -> float:
    """Res_{s=1} zeta_K by the class number formula.

    Imaginary: 2 pi h / (w sqrt(d_K)); real: 2 h log(eps) / sqrt(d_K)
    (r1 = 2, w = 2, regulator log eps).
    """
    if field.is_real:
        return 2.0 * field.h_K * field.regulator / math.sqrt(field.d_K)
    return 2.0 * math.pi * field.h_K / (field.w_K * math.sqrt(field.d_K))


def residue_via_L(
    field: FieldSpec, terms: int = DEFAULT_L_TERMS, tol: Optional[float] = None
) -> tuple[float, float]:
    """Res_{s=1} zeta_K = L(chi_K, 1) summed directly, with the error bound.

    zeta_K = zeta * L(chi_K, .) makes the residue an L-value that knows
    nothing of class numbers or units.  The partial sums S(M+j)/n are
    averaged over one full character period (Cesaro), which cancels the
    oscillating tail; the reported bound |Delta|/terms is the conservative
    pre-averaging estimate.
    """
    delta = field.signed_disc
    period = abs(delta)
    if terms < period:
        raise NonConvergence(f"terms {terms} < period {period}", float("inf"))
    chi_period = np.array([kronecker(delta, n) for n in range(period)], dtype=np.float64)
    reps = terms // period
    m = reps * period  # whole periods only
    n = np.arange(1, m + period, dtype=np.float64)
    chi = np.tile(chi_period, reps + 1)[1 : m + period]
    terms_arr = chi / n
    cumulative = np.cumsum(terms_arr)
    # average the partial sums S(m), S(m+1), ..., S(m+period-1)
    value = float(np.mean(cumulative[m - 1 : m - 1 + period]))
    bound = period / m
    if tol is not None and bound > tol:
        raise NonConvergence(f"error bound {bound:g} exceeds tol {tol:g}", bound)
    return value, bound


def kronecker_L(top: int, s: float, tol: float = 1e-12) -> float:
    """L(chi, s) for the Kronecker character (top/.), s >= 2.

    Summed exactly over residue classes via the Hurwitz zeta function:
    L = m^-s * sum_r chi(r) zeta(s, r/m), m = |top|; the remainder is pure
    float roundoff, far below any meaningful tol.
    """
    if s < 2:
        raise MethodUnsupported("kronecker_L is restricted to s >= 2")
    if tol <= 0:
        raise MethodUnsupported("tol must be positive")
    m = abs(top)
    r = np.arange(1, m + 1, dtype=np.float64)
    chi = np.array([kronecker(top, n) for n in range(1, m + 1)], dtype=np.float64)
    mask = chi != 0
    return float(m**-s * np.sum(chi[mask] * hurwitz_zeta(s, r[mask] / m)))


def zagier_A(x: float, tol: float = 1e-10) -> float:
    """A(x) = 2 int_0^inf t dt / (x sinh^2 t + cosh^2 t / x); odd in x.

    The integrand decays like 8t e^(-2t)/(x + 1/x), so truncating at t = 30
    discards under 1e-20; adaptive Gauss-Kronrod handles the rest, with the
    kink near t <= 1 isolated by an explicit breakpoint.
    """
    if x == 0:
        return 0.0
    if x < 0:
        return -zagier_A(-x, tol)

    def integrand(t: float) -> float:
        return 2.0 * t / (x * math.sinh(t) ** 2 + math.cosh(t) ** 2 / x)

    value, err = quad(
        integrand, 0.0, A_INTEGRAL_CUTOFF, points=[1.0], limit=200,
        epsabs=1e-13, epsrel=1e-13,
    )
    if err > tol:
        raise QuadratureFailure(f"A({x}) quadrature error {err:g}", err)
    return value


def zeta_K_2(field: FieldSpec, method: Zeta2Method = Zeta2Method.FACTORIZATION) -> float:
    """zeta_K(2), by zeta(2) L(chi_K, 2) or by the cotangent integral formula

        zeta_K(2) = pi^2/(6 sqrt(d)) sum_{0<n<d} (Delta/n) A(cot(pi n/d)),

    the latter only for imaginary fields.
    """
    if method is Zeta2Method.FACTORIZATION:
        return (math.pi**2 / 6.0) * kronecker_L(field.signed_disc, 2.0)
    if field.is_real:
        raise MethodUnsupported("the cotangent formula covers imaginary fields only")
    d = field.d_K
    total = 0.0
    for n in range(1, d):
        chi = kronecker(field.signed_disc, n)
        if chi == 0:
            continue
        total += chi * zagier_A(1.0 / math.tan(math.pi * n / d))
    return math.pi**2 / (6.0 * math.sqrt(d)) * total


def two_adic_factor(field: FieldSpec) -> float:
    """prod over primes above 2 of g_p(1) / (1 + N(p)^-1); identically 1."""
    result = 1.0
    for ideal in prime_ideals_up_to(field, 4):
        if ideal.p != 2:
            continue
        spec = local_factor(field, ideal)
        result *= evaluate_g(spec, 1.0, signed=False) / (1.0 + 1.0 / ideal.norm)
    return result


def asymptotic_constant(field: FieldSpec, zagier_check: bool = True) -> ConstantReport:
    """Assemble the constant C of a_K(n) = C n + o(n) with all sub-factors."""
    residue = dedekind_residue(field)
    zeta2 = zeta_K_2(field, Zeta2Method.FACTORIZATION)
    zeta2_alt = None
    if zagier_check and not field.is_real:
        zeta2_alt = zeta_K_2(field, Zeta2Method.ZAGIER)
    factor2 = two_adic_factor(field)
    prefactor = 1.0 / field.d_K**2 if field.is_real else 0.5 / field.d_K**2
    c = prefactor * residue / zeta2 * factor2
    return ConstantReport(
        field_D=field.D,
        C=c,
        residue=residue,
        zeta2=zeta2,
        zeta2_alt=zeta2_alt,
        two_adic_factor=factor2,
        prefactor=prefactor,
        h=field.h_K,
        w=field.w_K,
        regulator=field.regulator,
    )
