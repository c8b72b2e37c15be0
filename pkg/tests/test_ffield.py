from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from homfac.errors import CapExceeded, InvalidParameters
from homfac.ffield import dlog, frobenius, in_subfield, make_field

FIELDS = [(2, 1), (2, 2), (2, 4), (3, 1), (3, 2), (3, 4), (5, 1), (5, 2), (7, 2), (13, 1), (2, 6), (3, 3)]


def _poly_mul_mod(a, b, modulus, p):
    """Schoolbook polynomial product reduced by a monic modulus (low degree first)."""
    R = len(modulus) - 1
    out = [0] * (2 * R)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    for deg in range(2 * R - 1, R - 1, -1):
        c = out[deg]
        if c:
            for i in range(R + 1):
                out[deg - R + i] = (out[deg - R + i] - c * modulus[i]) % p
    return out[:R]


def test_f2_trivial():
    F = make_field(2, 1)
    assert F.q == 2 and F.omega == 1
    assert F.q - 1 == 1


def test_f5_omega_is_smallest_primitive_root():
    F = make_field(5, 1)
    orders = {g: next(k for k in range(1, 5) if pow(g, k, 5) == 1) for g in (2, 3, 4)}
    smallest = min(g for g, o in orders.items() if o == 4)
    assert F.omega == smallest == 2


def test_f9_omega_order():
    F = make_field(3, 2)
    assert F.q == 9
    x, order = F.omega, 1
    while x != 1:
        x = F.mul(x, F.omega)
        order += 1
    assert order == 8


@pytest.mark.parametrize("p,R", [(2, 2), (2, 3), (3, 2), (5, 2), (2, 4), (3, 3)])
def test_modulus_is_lexicographically_first_with_primitive_x(p, R):
    import itertools

    F = make_field(p, R)
    q = p**R

    def x_order(low):
        modulus = list(low) + [1]
        one = [1] + [0] * (R - 1)
        x = [0, 1] + [0] * (R - 2)
        cur, k = x, 1
        while cur != one:
            cur = _poly_mul_mod(cur, x, modulus, p)
            k += 1
            if k > q:
                return None
        return k

    for low in itertools.product(range(p), repeat=R):
        if low[0] == 0:
            continue
        if x_order(low) == q - 1:
            assert F.modulus == tuple(low) + (1,)
            break


@pytest.mark.parametrize("p,R", FIELDS)
def test_mul_matches_polynomial_arithmetic(p, R):
    F = make_field(p, R)
    rng = np.random.default_rng(p * 100 + R)
    for _ in range(50):
        x, y = (int(v) for v in rng.integers(0, F.q, 2))
        expect = _poly_mul_mod(list(F.decode(x)), list(F.decode(y)), list(F.modulus), p)
        assert F.decode(F.mul(x, y)) == tuple(expect)
        assert F.decode(F.add(x, y)) == tuple((a + b) % p for a, b in zip(F.decode(x), F.decode(y)))


@pytest.mark.parametrize("p,R", FIELDS)
def test_field_invariants(p, R):
    F = make_field(p, R)
    q = F.q
    nonzero = range(1, q)
    assert sorted(F.dlog(x) for x in nonzero) == list(range(q - 1))
    for x in nonzero:
        assert F.pow(F.omega, F.dlog(x)) == x
        assert F.mul(x, F.inv(x)) == 1
    assert sorted(F.encode(F.decode(x)) for x in range(q)) == list(range(q))
    assert F.encode([1] + [0] * (R - 1)) == 1 and F.decode(0) == (0,) * R


def test_f9_examples():
    F = make_field(3, 2)
    assert F.pow(F.omega, 8) == 1
    w4 = F.pow(F.omega, 4)
    for x in range(9):
        assert F.neg(x) == F.mul(x, w4)


def test_negative_powers():
    F = make_field(7, 2)
    for x in range(1, 49):
        assert F.pow(x, -3) == F.inv(F.pow(x, 3))
    with pytest.raises(ZeroDivisionError):
        F.inv(0)


def test_frobenius_examples():
    F9 = make_field(3, 2)
    assert {x for x in range(9) if frobenius(F9, x, 1) == x} == set(F9.subfield_elements(1).tolist())
    assert len(F9.subfield_elements(1)) == 3
    F4 = make_field(2, 2)
    assert frobenius(F4, F4.omega, 1) == F4.mul(F4.omega, F4.omega)
    for p, R in FIELDS:
        F = make_field(p, R)
        assert all(frobenius(F, x, R) == x for x in range(F.q))


@pytest.mark.parametrize("p,R", [(2, 4), (3, 2), (5, 2), (3, 3)])
def test_frobenius_is_a_field_automorphism(p, R):
    F = make_field(p, R)
    for x in range(F.q):
        for y in range(F.q):
            assert F.frobenius(F.add(x, y)) == F.add(F.frobenius(x), F.frobenius(y))
            assert F.frobenius(F.mul(x, y)) == F.mul(F.frobenius(x), F.frobenius(y))


def test_dlog_examples():
    for p, R in FIELDS:
        F = make_field(p, R)
        assert dlog(F, 1) == 0
        if F.q > 2:
            assert dlog(F, F.omega) == 1
        if p % 2:
            assert dlog(F, F.neg(1)) == (F.q - 1) // 2
    with pytest.raises(InvalidParameters):
        dlog(make_field(3, 2), 0)


def test_in_subfield_examples():
    F9 = make_field(3, 2)
    assert in_subfield(F9, 0, 1) and in_subfield(F9, 0, 2)
    assert not in_subfield(F9, F9.omega, 1)
    F16 = make_field(2, 4)
    assert in_subfield(F16, F16.omega_pow(5), 2)
    with pytest.raises(InvalidParameters):
        in_subfield(F16, 1, 3)


def test_make_field_errors():
    with pytest.raises(InvalidParameters):
        make_field(4, 1)
    with pytest.raises(InvalidParameters):
        make_field(3, 0)
    with pytest.raises(CapExceeded):
        make_field(2, 21)
    with pytest.raises(CapExceeded):
        make_field(3, 4, cap=80)


def test_deterministic():
    a = make_field(5, 2)
    b = make_field(5, 2)
    assert a.modulus == b.modulus and np.array_equal(a.exp_table, b.exp_table)


@given(st.sampled_from(FIELDS), st.data())
def test_dlog_is_a_homomorphism(pr, data):
    F = make_field(*pr)
    x = data.draw(st.integers(1, F.q - 1))
    y = data.draw(st.integers(1, F.q - 1))
    assert F.dlog(F.mul(x, y)) == (F.dlog(x) + F.dlog(y)) % (F.q - 1)


@given(st.sampled_from([(3, 2), (5, 2), (2, 4), (7, 2), (3, 3)]), st.data())
def test_frobenius_permutes_power_cosets(pr, data):
    p, R = pr
    F = make_field(p, R)
    q1 = F.q - 1
    d = data.draw(st.sampled_from([d for d in range(1, q1 + 1) if q1 % d == 0]))
    c = data.draw(st.integers(0, d - 1))
    j = data.draw(st.integers(0, R - 1))
    coset = {F.omega_pow(i) for i in range(q1) if i % d == c}
    target = {F.omega_pow(i) for i in range(q1) if i % d == (c * p**j) % d}
    assert {F.frobenius(x, j) for x in coset} == target
