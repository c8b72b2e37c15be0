"""Exact arithmetic in F_{p^R} backed by exponent and logarithm tables.

An element is an integer index in ``[0, q)``; the index of the polynomial
``c_0 + c_1 x + ... + c_{R-1} x^{R-1}`` is ``sum(c_i * p**i)``.  Index 0 is the
zero element and index 1 is the identity.

The modulus is chosen deterministically: the lexicographically smallest monic
polynomial of degree R (comparing ``c_0`` first) for which the class of ``x``
is a primitive element.  That class is ``omega``, which in index form is
``p`` when ``R > 1``.  For ``R == 1`` the field is the prime field and
``omega`` is the smallest primitive root modulo ``p``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from sympy.ntheory import factorint, isprime

from .errors import CapExceeded, InvalidParameters

DEFAULT_FIELD_CAP = 1 << 20

FieldElem = int


def _poly_mulmod(a: list[int], b: list[int], low: Sequence[int], p: int) -> list[int]:
    """Multiply two residues modulo the monic polynomial ``x^R + low``."""
    R = len(low)
    prod = [0] * (2 * R - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    for deg in range(2 * R - 2, R - 1, -1):
        top = prod[deg]
        if top:
            prod[deg] = 0
            for i, c in enumerate(low):
                prod[deg - R + i] = (prod[deg - R + i] - top * c) % p
    return prod[:R]


def _poly_powmod(exp: int, low: Sequence[int], p: int) -> list[int]:
    """Return ``x**exp`` modulo ``x^R + low``."""
    R = len(low)
    result = [1] + [0] * (R - 1)
    base = [0] * R
    if R == 1:
        base = [(-low[0]) % p]
    else:
        base[1] = 1
    while exp:
        if exp & 1:
            result = _poly_mulmod(result, base, low, p)
        base = _poly_mulmod(base, base, low, p)
        exp >>= 1
    return result


def _x_is_primitive(low: Sequence[int], p: int, q: int) -> bool:
    """True when the class of x has multiplicative order q-1.

    Such a polynomial is automatically irreducible: q-1 distinct units among
    the q-1 nonzero residues force the quotient ring to be a field.
    """
    one = [1] + [0] * (len(low) - 1)
    if _poly_powmod(q - 1, low, p) != one:
        return False
    return all(_poly_powmod((q - 1) // r, low, p) != one for r in factorint(q - 1))


@dataclass(frozen=True, eq=False)
class FieldSpec:
    """The finite field F_{p^R} with fixed modulus and primitive element."""

    p: int
    R: int
    q: int
    modulus: tuple[int, ...]
    omega: int
    exp_table: np.ndarray = field(repr=False)
    log_table: np.ndarray = field(repr=False)
    digits: np.ndarray = field(repr=False)

    @property
    def order(self) -> int:
        return self.q

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FieldSpec) and (self.p, self.R, self.modulus) == (
            other.p,
            other.R,
            other.modulus,
        )

    def __hash__(self) -> int:
        return hash((self.p, self.R, self.modulus))

    # -- element codec -------------------------------------------------
    def encode(self, coeffs: Sequence[int]) -> FieldElem:
        if len(coeffs) != self.R:
            raise InvalidParameters(f"expected {self.R} coefficients, got {len(coeffs)}")
        return sum((int(c) % self.p) * self.p**i for i, c in enumerate(coeffs))

    def decode(self, x: FieldElem) -> tuple[int, ...]:
        self._check(x)
        return tuple(int(c) for c in self.digits[x])

    def _check(self, x: FieldElem) -> None:
        if not 0 <= x < self.q:
            raise InvalidParameters(f"{x} is not an element index of F_{self.q}")

    # -- scalar arithmetic -----------------------------------------------
    def add(self, x: FieldElem, y: FieldElem) -> FieldElem:
        return int(self.add_vec(np.asarray(x), y))

    def sub(self, x: FieldElem, y: FieldElem) -> FieldElem:
        return self.add(x, self.neg(y))

    def neg(self, x: FieldElem) -> FieldElem:
        return int(self.neg_vec(np.asarray(x)))

    def mul(self, x: FieldElem, y: FieldElem) -> FieldElem:
        if x == 0 or y == 0:
            return 0
        lx, ly = self.log_table[x], self.log_table[y]
        return int(self.exp_table[(lx + ly) % (self.q - 1)])

    def inv(self, x: FieldElem) -> FieldElem:
        if x == 0:
            raise ZeroDivisionError("inversion of zero")
        return int(self.exp_table[(-self.log_table[x]) % (self.q - 1)])

    def pow(self, x: FieldElem, e: int) -> FieldElem:
        if x == 0:
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return 1 if e == 0 else 0
        return int(self.exp_table[(int(self.log_table[x]) * e) % (self.q - 1)])

    def omega_pow(self, e: int) -> FieldElem:
        """Return ``omega**e`` for any integer ``e``."""
        return int(self.exp_table[e % (self.q - 1)])

    def dlog(self, x: FieldElem) -> int:
        if x == 0:
            raise InvalidParameters("discrete logarithm of zero")
        self._check(x)
        return int(self.log_table[x])

    def frobenius(self, x: FieldElem, j: int = 1) -> FieldElem:
        """Apply ``x -> x^(p^j)``."""
        if x == 0:
            return 0
        e = pow(self.p, j % self.R, self.q - 1)
        return int(self.exp_table[(int(self.log_table[x]) * e) % (self.q - 1)])

    def in_subfield(self, x: FieldElem, a: int) -> bool:
        if a < 1 or self.R % a:
            raise InvalidParameters(f"{a} does not divide R = {self.R}")
        return x == 0 or self.frobenius(x, a) == x

    def subfield_elements(self, a: int) -> np.ndarray:
        """Elements of F_{p^a} ordered as 0, then omega^(t*(q-1)/(p^a-1)) for t = 0, 1, ..."""
        if a < 1 or self.R % a:
            raise InvalidParameters(f"{a} does not divide R = {self.R}")
        step = (self.q - 1) // (self.p**a - 1)
        return np.concatenate(([0], self.exp_table[0 : self.q - 1 : step]))

    # -- vectorised arithmetic -------------------------------------------
    def add_vec(self, xs: np.ndarray, y: FieldElem | np.ndarray) -> np.ndarray:
        """Elementwise sum of index arrays (broadcasting)."""
        xs = np.asarray(xs)
        y = np.asarray(y)
        if self.R == 1:
            return (xs + y) % self.p
        if self.p == 2:
            return np.bitwise_xor(xs, y)
        d = (self.digits[xs].astype(np.int64) + self.digits[y]) % self.p
        return d @ self._place_values

    def neg_vec(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs)
        if self.R == 1:
            return (-xs) % self.p
        if self.p == 2:
            return xs.copy()
        d = (-self.digits[xs].astype(np.int64)) % self.p
        return d @ self._place_values

    def mul_vec(self, xs: np.ndarray, y: FieldElem) -> np.ndarray:
        """Multiply every element of an index array by the scalar ``y``."""
        xs = np.asarray(xs)
        if y == 0:
            return np.zeros_like(xs)
        ly = int(self.log_table[y])
        out = self.exp_table[(self.log_table[xs] + ly) % (self.q - 1)]
        return np.where(xs == 0, 0, out)

    def frobenius_vec(self, xs: np.ndarray, j: int = 1) -> np.ndarray:
        xs = np.asarray(xs)
        e = pow(self.p, j % self.R, self.q - 1)
        out = self.exp_table[(self.log_table[xs] * e) % (self.q - 1)]
        return np.where(xs == 0, 0, out)

    @property
    def _place_values(self) -> np.ndarray:
        return self.p ** np.arange(self.R, dtype=np.int64)

    def elements(self) -> range:
        return range(self.q)

    def __repr__(self) -> str:
        return f"FieldSpec(p={self.p}, R={self.R}, modulus={self.modulus}, omega={self.omega})"


_FIELD_CACHE: dict[tuple[int, int], FieldSpec] = {}


def make_field(p: int, R: int = 1, cap: int = DEFAULT_FIELD_CAP) -> FieldSpec:
    """Build (or fetch from cache) the field F_{p^R}.

    Raises InvalidParameters for a non-prime ``p`` or ``R < 1`` and
    CapExceeded when ``p**R`` exceeds ``cap``.
    """
    if not isinstance(p, (int, np.integer)) or not isprime(int(p)):
        raise InvalidParameters(f"p = {p} is not prime")
    if not isinstance(R, (int, np.integer)) or R < 1:
        raise InvalidParameters(f"R = {R} must be a positive integer")
    p, R = int(p), int(R)
    q = p**R
    if q > cap:
        raise CapExceeded(f"field size {q} exceeds cap {cap}")
    key = (p, R)
    if key in _FIELD_CACHE:
        return _FIELD_CACHE[key]

    digits = np.zeros((q, R), dtype=np.int64)
    idx = np.arange(q, dtype=np.int64)
    for i in range(R):
        digits[:, i] = (idx // p**i) % p

    if R == 1:
        omega = next(g for g in range(1, p) if _is_prime_field_generator(g, p))
        modulus = (-omega % p, 1)
        exp_table = np.empty(max(q - 1, 1), dtype=np.int64)
        x = 1
        for i in range(q - 1):
            exp_table[i] = x
            x = x * omega % p
    else:
        low = next(
            c for c in itertools.product(range(p), repeat=R) if c[0] != 0 and _x_is_primitive(c, p, q)
        )
        modulus = tuple(low) + (1,)
        omega = p
        exp_table = _build_exp_table(low, p, R, q)

    log_table = np.full(q, -1, dtype=np.int64)
    log_table[exp_table[: q - 1]] = np.arange(q - 1, dtype=np.int64)
    for arr in (exp_table, log_table, digits):
        arr.setflags(write=False)
    spec = FieldSpec(p, R, q, modulus, omega, exp_table, log_table, digits)
    _FIELD_CACHE[key] = spec
    return spec


def _is_prime_field_generator(g: int, p: int) -> bool:
    if p == 2:
        return g == 1
    return all(pow(g, (p - 1) // r, p) != 1 for r in factorint(p - 1))


def _build_exp_table(low: Sequence[int], p: int, R: int, q: int) -> np.ndarray:
    """Tabulate ``x**i`` for ``i < q-1`` by repeated multiplication by x."""
    coeffs = np.zeros(R, dtype=np.int64)
    coeffs[0] = 1
    low_arr = np.asarray(low, dtype=np.int64)
    place = p ** np.arange(R, dtype=np.int64)
    out = np.empty(q - 1, dtype=np.int64)
    # Walk with plain ints; numpy per-step overhead would dominate for small R.
    c = [1] + [0] * (R - 1)
    low_l = [int(v) for v in low_arr]
    place_l = [int(v) for v in place]
    for i in range(q - 1):
        out[i] = sum(ci * pv for ci, pv in zip(c, place_l))
        top = c[-1]
        c = [0] + c[:-1]
        if top:
            c = [(ci - top * li) % p for ci, li in zip(c, low_l)]
    return out


def frobenius(field: FieldSpec, x: FieldElem, j: int = 1) -> FieldElem:
    return field.frobenius(x, j)


def dlog(field: FieldSpec, x: FieldElem) -> int:
    return field.dlog(x)


def in_subfield(field: FieldSpec, x: FieldElem, a: int) -> bool:
    return field.in_subfield(x, a)


def divisors(n: int) -> list[int]:
    """Positive divisors of ``n`` in ascending order."""
    from sympy.ntheory import divisors as _divisors

    return [int(d) for d in _divisors(n)]
