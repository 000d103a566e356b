import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pmdlab.gf import (
    MODULI,
    FieldError,
    add,
    field_make,
    field_of_order,
    inv,
    mul,
    neg,
    prime_power,
    sub,
    supported_fields,
)

ALL_Q = supported_fields()
SMALL_Q = [q for q in ALL_Q if q <= 9]
LARGE_Q = [q for q in ALL_Q if q > 9]


def poly_mul_mod(a, b, mod, p):
    """Schoolbook product of coefficient lists (constant first), reduced by a monic modulus."""
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    d = len(mod) - 1
    for top in range(len(prod) - 1, d - 1, -1):
        c = prod[top]
        if c:
            for i, m in enumerate(mod):
                prod[top - d + i] = (prod[top - d + i] - c * m) % p
    return (prod + [0] * d)[:d]


def digits(n, p, d):
    return [(n // p**i) % p for i in range(d)]


def test_field_make_prime():
    F = field_make(2, 1)
    assert F.q == 2
    assert F.p == 2 and F.d == 1


def test_gf4_modulus_is_x2_x_1_and_has_no_root():
    F = field_make(2, 2)
    assert F.modulus == (1, 1, 1)
    assert all((x * x + x + 1) % 2 for x in range(2))


def test_shipped_moduli_have_no_factors_of_low_degree():
    # no roots means irreducible for degree <= 3
    for (p, d), mod in MODULI.items():
        for x in range(p):
            assert sum(c * x**i for i, c in enumerate(mod)) % p != 0, (p, d)
    # x^4 + x + 1 is also not divisible by x^2 + x + 1, the only irreducible quadratic over GF(2)
    assert poly_mul_mod([1, 1, 0, 0, 1], [1], [1, 1, 1], 2) != [0, 0]


def test_non_prime_rejected():
    with pytest.raises(FieldError, match="not prime"):
        field_make(4, 1)


@pytest.mark.parametrize("p,d", [(37, 1), (2, 5), (7, 2)])
def test_unsupported_field_names_limit(p, d):
    with pytest.raises(FieldError, match="unsupported field"):
        field_make(p, d)


def test_deterministic_modulus():
    assert field_make(3, 2) is field_make(3, 2)
    from pmdlab.gf import FieldSpec

    assert FieldSpec(3, 2).modulus == field_make(3, 2).modulus
    assert FieldSpec(3, 2) == field_make(3, 2)


def test_prime_power():
    assert prime_power(8) == (2, 3)
    assert prime_power(9) == (3, 2)
    assert prime_power(6) is None
    assert prime_power(1) is None


def test_spot_values():
    F3, F4, F2, F5, F7 = (field_of_order(q) for q in (3, 4, 2, 5, 7))
    assert add(F3(1), F3(2)) == F3(0)
    assert add(F4(2), F4(3)) == F4(1)
    assert add(F2(1), F2(1)) == F2(0)
    assert mul(F5(2), F5(3)) == F5(1)
    assert mul(F4(2), F4(2)) == F4(3)
    assert inv(F7(3)) == F7(5)
    assert inv(F4(2)) == F4(3)
    assert sub(F5(1), F5(3)) == F5(3)
    assert neg(F7(2)) == F7(5)


@pytest.mark.parametrize("q", ALL_Q)
def test_one_is_identity_and_one_inverts(q):
    F = field_of_order(q)
    for a in F.elements():
        assert a * F(1) == a
    assert inv(F(1)) == F(1)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        inv(field_of_order(5)(0))


def test_field_mismatch():
    with pytest.raises(FieldError, match="field mismatch"):
        field_of_order(5)(1) + field_of_order(7)(1)


def test_index_range_checked():
    with pytest.raises(FieldError):
        field_of_order(4)(4)


@pytest.mark.parametrize("q", [q for q in ALL_Q if prime_power(q)[1] > 1])
def test_tables_match_polynomial_oracle(q):
    F = field_of_order(q)
    p, d = F.p, F.d
    for a, b in itertools.product(range(q), repeat=2):
        da, db = digits(a, p, d), digits(b, p, d)
        s = [(x + y) % p for x, y in zip(da, db)]
        assert F.add(a, b) == sum(c * p**i for i, c in enumerate(s))
        prod = poly_mul_mod(da, db, list(F.modulus), p)
        assert F.mul(a, b) == sum(c * p**i for i, c in enumerate(prod))


@pytest.mark.parametrize("q", SMALL_Q)
def test_axioms_exhaustive(q):
    F = field_of_order(q)
    E = range(q)
    for a, b in itertools.product(E, repeat=2):
        assert F.add(a, b) == F.add(b, a)
        assert F.mul(a, b) == F.mul(b, a)
        assert 0 <= F.add(a, b) < q and 0 <= F.mul(a, b) < q
    for a, b, c in itertools.product(E, repeat=3):
        assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
        assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))


@settings(max_examples=1000, deadline=None)
@given(st.sampled_from(LARGE_Q), st.data())
def test_axioms_random(q, data):
    F = field_of_order(q)
    a, b, c = (F(data.draw(st.integers(0, q - 1))) for _ in range(3))
    assert a + b == b + a and a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - b + b == a


@pytest.mark.parametrize("q", ALL_Q)
def test_fermat_and_inverse_involution(q):
    F = field_of_order(q)
    for a in F.elements():
        assert a**q == a
        if a:
            assert a ** (q - 1) == F(1)
            assert a * a.inverse() == F(1)
            assert inv(inv(a)) == a
        assert a + (-a) == F(0)
