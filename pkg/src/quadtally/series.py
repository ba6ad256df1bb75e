"""Truncated Dirichlet coefficients of the counting functions.

a0[n] counts all finite-idele characters of conductor norm n, aminus[n] the
even-minus-odd tally; both are produced in one pass by in-place Dirichlet
convolution with each prime ideal's local polynomial, processing ideals in
increasing norm.  Split primes over one rational p enter as two independent
ideals: the Euler product runs over prime ideals, not rational primes.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass
from enum import Enum
from typing import IO

import numpy as np

from .errors import CapacityExceeded, OutOfRange, Overflow, ParityViolation
from .localdata import local_factor
from .quadfield import FieldSpec, prime_ideals_up_to

DEFAULT_CAPACITY = 10**8
CAPACITY_ENV_VAR = "QUADTALLY_MAX_N"


def capacity_limit() -> int:
    value = os.environ.get(CAPACITY_ENV_VAR)
    return int(value) if value else DEFAULT_CAPACITY


class Mode(Enum):
    ORDINARY = "Ordinary"
    SIGNED = "Signed"
    EXTENSION_COUNT = "ExtensionCount"


class IndexMeaning(Enum):
    CONDUCTOR_NORM = "ConductorNorm"
    ABSOLUTE_DISCRIMINANT = "AbsoluteDiscriminant"


@dataclass(frozen=True)
class CoeffArray:
    """Dense integer coefficients a[1..N]; index 0 is unused padding."""

    N: int
    a: np.ndarray
    mode: Mode
    index_meaning: IndexMeaning
    field_D: int

    def __post_init__(self):
        assert self.a.shape == (self.N + 1,)
        self.a.flags.writeable = False

    def __getitem__(self, n: int) -> int:
        if not 1 <= n <= self.N:
            raise OutOfRange(f"index {n} outside 1..{self.N}")
        return int(self.a[n])

    def to_json_header(self) -> str:
        return json.dumps(
            {
                "field_D": self.field_D,
                "N": self.N,
                "mode": self.mode.value,
                "index_meaning": self.index_meaning.value,
            }
        )


def euler_coefficient_pair(field: FieldSpec, N: int) -> tuple[CoeffArray, CoeffArray]:
    """(a0, aminus) up to conductor norm N by one convolution sweep."""
    if N < 1:
        raise CapacityExceeded("N must be >= 1")
    if N > capacity_limit():
        raise CapacityExceeded(
            f"N={N} exceeds capacity {capacity_limit()} "
            f"(override with {CAPACITY_ENV_VAR})"
        )
    a0 = np.zeros(N + 1, dtype=np.int64)
    am = np.zeros(N + 1, dtype=np.int64)
    a0[1] = am[1] = 1
    for ideal in prime_ideals_up_to(field, N):
        spec = local_factor(field, ideal)
        rows = [
            (ideal.norm**f, m, m - 2 * m_odd)
            for f, m, m_odd in spec.rows
            if f >= 1 and ideal.norm**f <= N
        ]
        if not rows:
            continue
        # All rows of one ideal must convolve against the pre-update array;
        # with several rows the smaller steps' targets feed the larger steps'
        # sources, so snapshot the shared source prefix first.
        top0 = N // rows[0][0]
        src0 = a0[1 : top0 + 1].copy() if len(rows) > 1 else a0[1 : top0 + 1]
        srcm = am[1 : top0 + 1].copy() if len(rows) > 1 else am[1 : top0 + 1]
        for step, m, m_signed in rows:
            top = N // step
            a0[step :: step] += m * src0[:top]
            am[step :: step] += m_signed * srcm[:top]
    if int(np.abs(a0).max()) >= 2**62:
        raise Overflow("coefficients approach int64 range")
    unsigned = CoeffArray(N, a0, Mode.ORDINARY, IndexMeaning.CONDUCTOR_NORM, field.D)
    signed = CoeffArray(N, am, Mode.SIGNED, IndexMeaning.CONDUCTOR_NORM, field.D)
    return unsigned, signed


def euler_coefficients(field: FieldSpec, N: int, signed: bool) -> CoeffArray:
    unsigned_arr, signed_arr = euler_coefficient_pair(field, N)
    return signed_arr if signed else unsigned_arr


def even_character_counts(field: FieldSpec, N: int) -> CoeffArray:
    """Counts of even characters by conductor norm: (a0 + aminus)/2.

    For real fields every finite-prime character extends to an even one, so
    the count is a0 itself (and aminus degenerates to a0).
    """
    unsigned_arr, signed_arr = euler_coefficient_pair(field, N)
    if field.is_real:
        return CoeffArray(
            N, unsigned_arr.a.copy(), Mode.ORDINARY, IndexMeaning.CONDUCTOR_NORM, field.D
        )
    total = unsigned_arr.a + signed_arr.a
    if int(np.abs(total[1:] % 2).max() if N >= 1 else 0) != 0:
        bad = int(np.nonzero(total % 2)[0][0])
        raise ParityViolation(f"a0[{bad}] + aminus[{bad}] is odd: table bug")
    return CoeffArray(
        N, total // 2, Mode.ORDINARY, IndexMeaning.CONDUCTOR_NORM, field.D
    )


def extension_counts(field: FieldSpec, X: int) -> CoeffArray:
    """c[m] = number of quadratic extensions L/K with |disc L| = m, m <= d_K^2 X.

    Indices that are not d_K^2 * n are zero; the trivial character is removed
    at n = 1 (the extension K/K is not counted).
    """
    if X < 1:
        raise CapacityExceeded("X must be >= 1")
    scale = field.d_K**2
    if scale * X > capacity_limit():
        raise CapacityExceeded(
            f"d_K^2*X = {scale * X} exceeds capacity {capacity_limit()}"
        )
    even = even_character_counts(field, X)
    c = np.zeros(scale * X + 1, dtype=np.int64)
    c[scale::scale] = even.a[1:]
    c[scale] = 0
    return CoeffArray(
        scale * X, c, Mode.EXTENSION_COUNT, IndexMeaning.ABSOLUTE_DISCRIMINANT, field.D
    )


def partial_sum(coeffs: CoeffArray, X: int) -> int:
    """Sum of a[n] for n <= X."""
    if X < 0 or X > coeffs.N:
        raise OutOfRange(f"X={X} outside 0..{coeffs.N}")
    return int(coeffs.a[1 : X + 1].sum())


def write_csv(out: IO[str], unsigned_arr: CoeffArray, signed_arr: CoeffArray) -> None:
    """RFC-4180 rows n,a0,aminus,even_count with a mandatory header."""
    assert unsigned_arr.N == signed_arr.N
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["n", "a0", "aminus", "even_count"])
    for n in range(1, unsigned_arr.N + 1):
        a0n = int(unsigned_arr.a[n])
        amn = int(signed_arr.a[n])
        writer.writerow([n, a0n, amn, (a0n + amn) // 2])
