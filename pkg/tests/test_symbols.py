import pytest

from charp import (
    DifferentialForm,
    GenericSymbolSpec,
    MilnorSymbol,
    PreconditionError,
    ValuationSpec,
    complete_differential_basis,
    exterior_d,
    generic_residues,
    make_generic_symbol,
    omega_injectivity_check,
    p_independence_test,
    residue_chain_certificate,
    restriction_zero_check,
    tame_symbol,
)
from charp.symbols import expected_generic_residues, residues_p_independent
from charp.textio import format_value, parse_value
from conftest import field, form, rf


@pytest.mark.parametrize("n,l,text", [
    (1, 1, "x1*dlog(y11)"),
    (2, 1, "x1*dlog(y11)^dlog(y12)"),
    (1, 2, "x1*dlog(y11) + x2*dlog(y21)"),
])
def test_generic_symbols(n, l, text):
    assert format_value(make_generic_symbol(GenericSymbolSpec(n, l, 2))) == text


def test_generic_residue_examples():
    spec = GenericSymbolSpec(1, 1, 2)
    first, second = generic_residues(spec, "y11")
    assert first.is_zero() and format_value(second) == "x1"
    spec = GenericSymbolSpec(1, 2, 2)
    first, second = generic_residues(spec, "y21")
    assert format_value(first) == "x1*dlog(y11)" and format_value(second) == "x2"
    spec = GenericSymbolSpec(2, 1, 3)
    first, second = generic_residues(spec, ValuationSpec("y12", spec.config))
    assert first.is_zero() and format_value(second) == "x1*dlog(y11)"
    with pytest.raises(PreconditionError):
        generic_residues(spec, "y11")


@pytest.mark.parametrize("n,l", [(1, 1), (2, 1), (1, 2), (3, 3)])
def test_residue_chain(n, l):
    spec = GenericSymbolSpec(n, l, 2)
    cert = residue_chain_certificate(spec)
    assert [s.variable for s in cert.steps] == [spec.y(l, j) for j in range(n, 0, -1)]
    assert format_value(cert.terminal_value) == f"x{l}"
    assert cert.nontrivial
    first, second = expected_generic_residues(spec)
    assert cert.steps[0].representative == second


def milnor(text, *names, p=2):
    return parse_value(text, field(p, *names))


def test_milnor_normal_form():
    s = milnor("{y, x}", "x", "y")
    assert s == milnor("{x, y}", "x", "y").scale(-1)
    assert milnor("{x*y, x}", "x", "y") == milnor("{x, -1} + {y, x}", "x", "y")
    assert milnor("{x, 1}", "x").is_zero()
    assert isinstance(milnor("{x1, y11, y}", "x1", "y11", "y"), MilnorSymbol)
    assert milnor("{x1, y11, y}", "x1", "y11", "y").length == 3


def test_tame_examples():
    c = field(2, "x", "y")
    assert tame_symbol(milnor("{y, x}", "x", "y"), "y") == MilnorSymbol.from_entries(
        c.without("y"), [rf("x", c.without("y"))])
    s = milnor("{x1, y11}", "x1", "y11", "t")
    assert tame_symbol(s, "t").is_zero()
    names = ("x1", "y11", "y")
    got = tame_symbol(milnor("{x1, y11, y}", *names), "y")
    residue = field(2, "x1", "y11")
    assert got == MilnorSymbol.from_entries(residue, [rf("x1", residue), rf("y11", residue)])


def test_tame_with_ramification():
    names = ("x", "z", "t")
    c = field(3, *names)
    s = milnor("{x, z*t^2}", *names, p=3)
    residue = c.without("t")
    assert tame_symbol(s, "t") == MilnorSymbol.from_entries(residue, [rf("x", residue)], -2)


def test_p_independence():
    for p in (2, 3):
        c = field(p, "x", "y")
        assert p_independence_test([rf("x", c), rf("y", c)], c)
        assert not p_independence_test([rf("x", c), rf(f"x*y^{p}", c)], c)
    c = field(2, "x", "y")
    assert p_independence_test([rf("x*y", c), rf("y", c)], c)


def test_differential_basis_completion():
    for p in (2, 3):
        c = field(p, "x", "y")
        b = complete_differential_basis([rf("x", c)], ValuationSpec("y", c))
        assert [format_value(a) for a in b.basis] == ["x", "y"] and b.i0 == 2
        assert residues_p_independent(b)
    c = field(2, "x", "y")
    b = complete_differential_basis([rf("y", c)], ValuationSpec("y", c))
    assert [format_value(a) for a in b.basis] == ["y", "x"] and b.i0 == 1
    # x*y^2 has valuation divisible by 2, so the unit x takes its place
    b = complete_differential_basis([rf("x*y^2", c)], ValuationSpec("y", c))
    assert [format_value(a) for a in b.basis] == ["x", "y"] and b.i0 == 2
    with pytest.raises(PreconditionError):
        complete_differential_basis([rf("x", c), rf("x^3", c)], ValuationSpec("y", c))


def test_restriction_examples():
    c = field(2, "x", "y")
    assert form("d(x)^d(y^2)", c).is_zero()
    assert form("d(x*y^2)^d(x^3)", c).is_zero()
    assert exterior_d(DifferentialForm.scalar(rf("x^2", c))).is_zero()
    report = restriction_zero_check(1, 2, c, trials=10, gens=[rf("x", c)])
    assert report["ok"]
    with pytest.raises(PreconditionError):
        restriction_zero_check(2, 2, c)


def test_omega_injectivity():
    c = field(3, "x", "y", "z")
    gens = [rf("x*y", c), rf("y", c), rf("z^2", c)]
    report = omega_injectivity_check(3, 3, 2, c, gens)
    assert report["ok"] and report["count"] == 3
    with pytest.raises(PreconditionError):
        omega_injectivity_check(2, 2, 1, c, [rf("x", c), rf("x^4", c)])
