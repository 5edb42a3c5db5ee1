import pytest

from charp import ConfigError, RationalFunction, as_reduce, frobenius_scalar
from charp.artin_schreier import squarefree_decomposition, to_dense, u_mul, wp
from charp.suites import wp_image_table
from conftest import field, rf


def check_witness(f, red):
    assert red.representative + wp(red.witness) == f


def test_documented_examples():
    c = field(2, "t")
    red = as_reduce(rf("t^2 + t", c))
    assert red.trivial and red.witness == rf("t", c)
    red = as_reduce(rf("t^2", c))
    assert not red.trivial and red.representative == rf("t", c)
    red = as_reduce(rf("1/t", c))
    assert not red.trivial and red.representative == rf("1/t", c)
    assert [(str(s), k) for s, k in red.pole_data] == [("t", 1)]


@pytest.mark.parametrize("text", ["(t + 1)/t^2", "t/(t^2 + 1)", "t^4 + t", "1/(t^4 + t^2)"])
def test_reduction_witnesses(text):
    c = field(2, "t")
    f = rf(text, c)
    red = as_reduce(f)
    check_witness(f, red)
    assert red.trivial == (text != "1/(t^4 + t^2)")


def test_trivial_set_frozen_from_exhaustive_search():
    # every f = u/v over F_2(t) with deg u, deg v <= 2 that is some g^2 - g
    c = field(2, "t")
    table = wp_image_table(6)
    trivial = []
    seen = set()
    for v in range(1, 8):
        for u in range(8):
            f = sum((rf("t", c) ** k for k in range(3) if u >> k & 1), RationalFunction.zero(c)) / \
                sum((rf("t", c) ** k for k in range(3) if v >> k & 1), RationalFunction.zero(c))
            if f in seen:
                continue
            seen.add(f)
            if as_reduce(f).trivial:
                trivial.append(str(f))
    assert sorted(trivial) == ["(t + 1)/t^2", "0", "t/(t^2 + 1)", "t^2 + t"]
    assert len(table) > 1000


def test_constants_over_extension_use_trace():
    c = field(2, "t", e=2)
    one = RationalFunction.one(c)
    # 1 = w^2 + w for w a primitive cube root of unity in F_4
    red = as_reduce(one)
    assert red.trivial
    check_witness(one, red)
    c1 = field(2, "t")
    assert not as_reduce(RationalFunction.one(c1)).trivial


def test_p3_poles_at_places():
    c = field(3, "t")
    f = rf("1/(t^2+1)^3 + t^6", c)
    red = as_reduce(f)
    check_witness(f, red)
    assert all(k % 3 for _, k in red.pole_data)


def test_squarefree_decomposition():
    c = field(3, "t")
    gf = c.gf
    f = rf("(t+1)^2*(t^2+1)*t^3", c).num
    parts = squarefree_decomposition(to_dense(f), gf)
    prod = [1]
    for j, s in parts.items():
        for _ in range(j):
            prod = u_mul(prod, s, gf)
    assert prod == to_dense(f)
    assert sorted(parts) == [1, 2, 3]


def test_needs_one_variable():
    with pytest.raises(ConfigError):
        as_reduce(rf("x", field(2, "x", "y")))


def test_frobenius_of_witness_matches():
    c = field(2, "t")
    g = rf("(t^3 + 1)/(t^2 + t + 1)", c)
    f = frobenius_scalar(g) - g
    red = as_reduce(f)
    assert red.trivial
    check_witness(f, red)
