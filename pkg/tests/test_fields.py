import pytest

from charp import ConfigError, FieldConfig
from charp.fields import get_gf, is_prime


@pytest.mark.parametrize("p,e", [(2, 1), (3, 1), (5, 1), (2, 2), (2, 3), (3, 2), (2, 6)])
def test_field_axioms(p, e):
    gf = get_gf(p, e)
    q = p**e
    assert gf.q == q
    for a in range(q):
        assert gf.add(a, gf.neg(a)) == 0
        if a:
            assert gf.mul(a, gf.inv(a)) == 1
            assert gf.pow(a, q - 1) == 1
        assert gf.root(gf.frob(a)) == a


def test_multiplicative_group_is_cyclic():
    gf = get_gf(2, 4)
    orders = set()
    for a in range(1, 16):
        k = 1
        while gf.pow(a, k) != 1:
            k += 1
        orders.add(k)
    assert 15 in orders


def test_trace_is_additive_and_onto():
    gf = get_gf(3, 2)
    for a in range(9):
        for b in range(9):
            assert gf.trace(gf.add(a, b)) == (gf.trace(a) + gf.trace(b)) % 3
    assert {gf.trace(a) for a in range(9)} == {0, 1, 2}


def test_is_prime():
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]


def test_config_validation():
    with pytest.raises(ConfigError):
        FieldConfig(4, 1, ("x",))
    with pytest.raises(ConfigError):
        FieldConfig(2, 1, ("x", "x"))
    c = FieldConfig(3, 1, ("x", "y", "z"))
    assert c.without("y").variables == ("x", "z")
    with pytest.raises(ConfigError):
        c.index("w")
