"""Per-prime character/conductor tables and the local factors g, g_-.

At an odd prime there are exactly two Z/2Z-characters of the local units
(conductors 0 and 1); the nontrivial one is odd exactly when the prime is
not inert and p = 3 mod 4 (for Q(i) the test unit is i instead of -1, and
the split rule becomes p = 5 mod 8).  The 2-adic tables are finite and
theorem-fixed, so they ship as static golden data keyed by (field kind,
splitting of 2); their parity columns at a ramified 2 are not stated by the
underlying theory and were filled in by the oracle module's finite-ring
enumeration (see tests/test_localdata.py for the regeneration check).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from importlib import resources

from .errors import UnsupportedPrime
from .quadfield import FieldSpec, Kind, PrimeIdeal, SplitType

GOLDEN_RESOURCE = "golden_local_tables.json"


class Parity(Enum):
    EVEN = "Even"
    ODD = "Odd"


@dataclass(frozen=True)
class LocalFactorSpec:
    """Rows (f, m, m_odd): m characters of exact local conductor f, m_odd of
    them sending the field's deciding unit to 1."""

    prime_norm: int
    rows: tuple[tuple[int, int, int], ...]

    def to_json_dict(self) -> dict:
        return {
            "prime_norm": self.prime_norm,
            "rows": [{"f": f, "m": m, "m_odd": mo} for f, m, mo in self.rows],
        }


def _load_golden() -> dict[tuple[str, str], tuple[tuple[int, int, int], ...]]:
    text = resources.files(__package__).joinpath("data", GOLDEN_RESOURCE).read_text()
    tables = {}
    for entry in json.loads(text):
        rows = tuple((r["f"], r["m"], r["m_odd"]) for r in entry["rows"])
        tables[(entry["field_kind"], entry["two_type"])] = rows
    return tables


_GOLDEN = _load_golden()


def two_adic_table(kind: Kind, two_type: SplitType) -> tuple[tuple[int, int, int], ...]:
    key = (kind.value, two_type.value.lower())
    try:
        return _GOLDEN[key]
    except KeyError:
        raise UnsupportedPrime(
            f"no 2-adic table for field kind {kind.value} with 2 {two_type.value}"
        ) from None


def serialize_golden_tables() -> str:
    """The packaged golden tables in their interchange schema."""
    entries = [
        {
            "field_kind": kind,
            "two_type": two_type,
            "rows": [{"f": f, "m": m, "m_odd": mo} for f, m, mo in rows],
        }
        for (kind, two_type), rows in sorted(_GOLDEN.items())
    ]
    return json.dumps(entries, indent=1)


def parity_at_odd_prime(field: FieldSpec, prime: PrimeIdeal) -> Parity:
    """Parity of the nontrivial character at a prime over odd p.

    Real fields always report Even: a sign condition on the units can be
    absorbed by a character at the two real places, so no finite-prime
    choice is ever obstructed.
    """
    if prime.p == 2:
        raise UnsupportedPrime("parity_at_odd_prime requires an odd prime")
    if field.kind is Kind.REAL_NORM_MINUS_ONE:
        return Parity.EVEN
    if field.kind is Kind.SPECIAL_I:
        # unit group generated by i; -1 = i^2 is killed by every character
        if prime.type is SplitType.INERT:
            return Parity.EVEN
        if prime.type is SplitType.RAMIFIED:
            raise UnsupportedPrime("Q(i) has no odd ramified primes")
        return Parity.ODD if prime.p % 8 == 5 else Parity.EVEN
    # unit group {+1, -1} (for Q(sqrt(-3)) the order-3 unit is always killed)
    if prime.type is not SplitType.INERT and prime.p % 4 == 3:
        return Parity.ODD
    return Parity.EVEN


def local_factor(field: FieldSpec, prime: PrimeIdeal) -> LocalFactorSpec:
    """The (f, m, m_odd) table at one prime ideal of this field."""
    if prime.p == 2:
        return LocalFactorSpec(prime.norm, two_adic_table(field.kind, prime.type))
    m_odd = 1 if parity_at_odd_prime(field, prime) is Parity.ODD else 0
    return LocalFactorSpec(prime.norm, ((0, 1, 0), (1, 1, m_odd)))


def evaluate_g(spec: LocalFactorSpec, s: float, signed: bool) -> float:
    """g_p(s) (unsigned) or g_-(s)_p (signed): each odd character flips sign."""
    total = 0.0
    for f, m, m_odd in spec.rows:
        coeff = m - 2 * m_odd if signed else m
        total += coeff * float(spec.prime_norm) ** (-f * s)
    return total
