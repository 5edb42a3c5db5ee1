"""Generic p-symbols, residue chains, monomial Milnor symbols and p-bases."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product

from . import linalg
from .artin_schreier import ASReducedClass, as_reduce
from .errors import (
    DomainError,
    PreconditionError,
    UnsupportedPresentationError,
)
from .fields import FieldConfig
from .forms import DifferentialForm, LogTermSum, dlog, log_to_form, wedge
from .laurent import LaurentClass, LaurentField, residues
from .rational import RationalFunction, frobenius_scalar, monomial_exponents
from .sampling import Sampler, stream


def generic_variables(n: int, l: int):
    sep = "_" if n > 9 or l > 9 else ""
    return [f"x{i}" for i in range(1, l + 1)] + [
        f"y{i}{sep}{j}" for i in range(1, l + 1) for j in range(1, n + 1)]


@dataclass(frozen=True)
class GenericSymbolSpec:
    """gen(n+1, l, p): l terms of n dlog factors over l(n+1) variables."""

    n: int
    l: int
    p: int
    e: int = 1

    def __post_init__(self):
        if self.n < 1 or self.l < 1:
            raise ValueError("need n >= 1 and l >= 1")

    @property
    def config(self) -> FieldConfig:
        return FieldConfig(self.p, self.e, tuple(generic_variables(self.n, self.l)))

    def x(self, i):
        return generic_variables(self.n, self.l)[i - 1]

    def y(self, i, j):
        return generic_variables(self.n, self.l)[self.l + (i - 1) * self.n + (j - 1)]


@dataclass(frozen=True)
class ValuationSpec:
    """The variable-adic valuation for one variable of a configuration."""

    variable: str
    config: FieldConfig

    def __post_init__(self):
        self.config.index(self.variable)

    @property
    def index(self):
        return self.config.index(self.variable)


def make_generic_symbol(spec: GenericSymbolSpec) -> LogTermSum:
    config = spec.config
    terms = []
    for i in range(1, spec.l + 1):
        a = RationalFunction.variable(config, spec.x(i))
        bs = [RationalFunction.variable(config, spec.y(i, j)) for j in range(1, spec.n + 1)]
        terms.append((a, bs))
    return LogTermSum(config, spec.n, terms)


def laurent_at(form: DifferentialForm, variable: str) -> LaurentClass:
    """View a form over F_q(..., t, ...) as a class over K1((t))."""
    field_ = LaurentField(form.config.without(variable), variable)
    return LaurentClass.from_form(field_, form)


def generic_residues(spec: GenericSymbolSpec, val: ValuationSpec | str):
    """(first, second) residue of gen at the y_{l,n}-adic valuation."""
    name = val.variable if isinstance(val, ValuationSpec) else val
    if name != spec.y(spec.l, spec.n):
        raise PreconditionError(
            f"the residue formulas use the {spec.y(spec.l, spec.n)}-adic valuation, not {name}",
            witness=name)
    form = log_to_form(make_generic_symbol(spec))
    return residues(laurent_at(form, name))


def expected_generic_residues(spec: GenericSymbolSpec):
    """gen(n+1, l-1) and x_l dlog y_{l,1} ^ ... ^ dlog y_{l,n-1}, over the residue field."""
    config = spec.config
    residue_field = config.without(spec.y(spec.l, spec.n))
    if spec.l > 1:
        smaller = make_generic_symbol(GenericSymbolSpec(spec.n, spec.l - 1, spec.p, spec.e))
        first = log_to_form(smaller.reindex(config)).reindex(residue_field)
    else:
        first = DifferentialForm.zero(residue_field, spec.n)
    x = RationalFunction.variable(residue_field, spec.x(spec.l))
    bs = [RationalFunction.variable(residue_field, spec.y(spec.l, j)) for j in range(1, spec.n)]
    second = log_to_form(LogTermSum(residue_field, spec.n - 1, [(x, bs)]))
    return first, second


@dataclass
class ChainStep:
    variable: str
    map: str
    representative: DifferentialForm


@dataclass
class ResidueChainCertificate:
    steps: list
    terminal_value: RationalFunction
    terminal: ASReducedClass

    @property
    def nontrivial(self) -> bool:
        return not self.terminal.trivial


def residue_chain_certificate(spec: GenericSymbolSpec) -> ResidueChainCertificate:
    """Second residues at y_{l,n}, ..., y_{l,1}, ending at x_l over F_q(x_l)."""
    current = log_to_form(make_generic_symbol(spec))
    steps = []
    for j in range(spec.n, 0, -1):
        name = spec.y(spec.l, j)
        _, second = residues(laurent_at(current, name))
        steps.append(ChainStep(name, "second", second))
        current = second
    value = current.scalar_value()
    used = {value.config.variables[i] for i in value.support()}
    if len(used) > 1:
        raise PreconditionError(f"terminal value {value} is not a one-variable function")
    var = used.pop() if used else spec.x(spec.l)
    line = FieldConfig(spec.p, spec.e, (var,))
    terminal = value.reindex(line)
    return ResidueChainCertificate(steps, terminal, as_reduce(terminal))


# ---------------------------------------------------------------------------
# Milnor K-theory with monomial entries


def _symbol_atoms(entry: RationalFunction):
    """Entry as (multiplicity, atom) pairs; atoms are variables or constants."""
    config = entry.config
    if entry.is_zero():
        raise DomainError("zero entry in a Milnor symbol")
    if not entry.is_monomial():
        raise UnsupportedPresentationError(f"Milnor symbol entry {entry} is not a monomial")
    c, exps = entry.monomial_data()
    out = [(1, RationalFunction.constant(config, c))] if c != 1 else []
    out += [(a, RationalFunction.variable(config, j)) for j, a in enumerate(exps) if a]
    return out


def _symbol_key(atom: RationalFunction):
    if atom.is_constant():
        return (1, atom.constant_value())
    return (0, atom.monomial_data()[1].index(1))


class MilnorSymbol:
    """Formal integer combination of symbols {a_1, ..., a_n} with monomial entries.

    Stored canonically: entries are single variables or constants in
    increasing order, with a repeated variable x rewritten via {x, x} = {x, -1}.
    """

    __slots__ = ("config", "length", "terms")

    def __init__(self, config: FieldConfig, length: int, terms=()):
        self.config = config
        self.length = length
        acc = {}
        entries_of = {}
        minus_one = RationalFunction.from_int(config, -1)
        for entries, k in terms:
            if len(entries) != length:
                raise ValueError("symbol length mismatch")
            for choice in product(*[_symbol_atoms(e) for e in entries]):
                coeff = k
                atoms = []
                for mult, atom in choice:
                    coeff *= mult
                    atoms.append(atom)
                if coeff == 0:
                    continue
                seen = set()
                for pos, atom in enumerate(atoms):
                    if not atom.is_constant() and atom in seen:
                        atoms[pos] = minus_one
                    seen.add(atom)
                if any(a.is_one() for a in atoms):
                    continue
                keys = [_symbol_key(a) for a in atoms]
                order = sorted(range(length), key=lambda i: keys[i])
                inversions = sum(1 for i in range(length) for j in range(i + 1, length)
                                 if order[i] > order[j])
                if inversions % 2:
                    coeff = -coeff
                key = tuple(keys[i] for i in order)
                acc[key] = acc.get(key, 0) + coeff
                entries_of[key] = tuple(atoms[i] for i in order)
        self.terms = tuple((entries_of[k], acc[k]) for k in sorted(acc) if acc[k])

    @classmethod
    def from_entries(cls, config, entries, coefficient=1):
        return cls(config, len(entries), [(tuple(entries), coefficient)])

    @classmethod
    def zero(cls, config, length):
        return cls(config, length)

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        if not isinstance(other, MilnorSymbol):
            return NotImplemented
        self.config.check_same(other.config)
        if other.length != self.length:
            if other.is_zero():
                return self
            if self.is_zero():
                return other
            raise ValueError("adding Milnor symbols of different lengths")
        return MilnorSymbol(self.config, self.length, self.terms + other.terms)

    def scale(self, k: int):
        return MilnorSymbol(self.config, self.length, [(e, c * k) for e, c in self.terms])

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def reindex(self, target):
        return MilnorSymbol(target, self.length,
                            [(tuple(a.reindex(target) for a in e), c) for e, c in self.terms])

    def __eq__(self, other):
        if not isinstance(other, MilnorSymbol):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return self.config == other.config
        return self.config == other.config and self.terms == other.terms

    def __hash__(self):
        return hash((self.config, self.terms))

    def __repr__(self):
        from .textio import format_milnor

        return f"MilnorSymbol({format_milnor(self)})"

    def __str__(self):
        from .textio import format_milnor

        return format_milnor(self)


def tame_symbol(s: MilnorSymbol, val: ValuationSpec | str) -> MilnorSymbol:
    """Residue K^M_n -> K^M_{n-1} of the residue field, t-first convention.

    d{t, u_2, ..., u_n} = {u_2, ..., u_n}; a t in slot i is moved to the
    front first, at the cost of (-1)^(i-1).  All-unit symbols map to 0.
    """
    name = val.variable if isinstance(val, ValuationSpec) else val
    config = s.config
    t = RationalFunction.variable(config, name)
    residue_field = config.without(name)
    out = MilnorSymbol.zero(residue_field, max(s.length - 1, 0))
    for entries, k in s.terms:
        hits = [i for i, a in enumerate(entries) if a == t]
        if not hits:
            continue
        i = hits[0]
        rest = [a.reindex(residue_field) for j, a in enumerate(entries) if j != i]
        sign = -1 if i % 2 else 1
        out = out + MilnorSymbol(residue_field, s.length - 1, [(tuple(rest), sign * k)])
    return out


# ---------------------------------------------------------------------------
# p-bases


def p_independence_test(candidates, config: FieldConfig) -> bool:
    """Monomials are p-independent iff their exponent vectors are independent mod p."""
    rows = []
    for a in candidates:
        config.check_same(a.config)
        rows.append([k % config.p for k in monomial_exponents(a)])
    return linalg.rank(rows, config.gf) == len(rows)


@dataclass
class DifferentialBasis:
    """A monomial p-basis with one uniformizer (1-based index i0) and unit residues."""

    basis: tuple
    i0: int
    valuation: ValuationSpec
    notes: list = field(default_factory=list)

    def valuations(self):
        k = self.valuation.index
        return [monomial_exponents(a)[k] for a in self.basis]


def _valuation(a, k):
    return monomial_exponents(a)[k]


def complete_differential_basis(monomials, val: ValuationSpec) -> DifferentialBasis:
    config = val.config
    p, k = config.p, val.index
    m = config.nvars
    monomials = list(monomials)
    if not p_independence_test(monomials, config):
        raise PreconditionError("input monomials are not p-independent")
    y = RationalFunction.variable(config, val.variable)
    notes = []
    basis = []
    for a in monomials:
        v = _valuation(a, k)
        if v % p == 0 and v:
            notes.append(f"{a}: valuation {v} divisible by p, replaced by the unit {a * y ** (-v)}")
            a = a * y ** (-v)
        basis.append(a)
    i0 = next((i for i, a in enumerate(basis) if _valuation(a, k) % p), None)
    if i0 is None:
        # gamma: first grlex exponent vector in {0..p-1}^m with valuation prime to p
        # that keeps the set p-independent
        candidates = sorted(product(range(p), repeat=m), key=lambda e: (sum(e), e))
        for e in candidates:
            if e[k] % p == 0:
                continue
            gamma = RationalFunction.monomial(config, e)
            if p_independence_test(basis + [gamma], config):
                break
        v = e[k]
        beta = pow(v, -1, p)
        alpha = (1 - beta * v) // p
        a = y ** (p * alpha) * gamma**beta
        notes.append(f"uniformizer built from gamma = {gamma}: alpha = {alpha}, beta = {beta}")
        basis.append(a)
        i0 = len(basis) - 1
    else:
        a = basis[i0]
        v = _valuation(a, k)
        beta = pow(v, -1, p)
        alpha = (1 - beta * v) // p
        basis[i0] = y ** (p * alpha) * a**beta
    uni = basis[i0]
    for i, a in enumerate(basis):
        v = _valuation(a, k)
        if i != i0 and v:
            basis[i] = a * uni ** (-v)
    for j in range(m):
        if len(basis) == m:
            break
        if j == k:
            continue
        x = RationalFunction.variable(config, j)
        if p_independence_test(basis + [x], config):
            basis.append(x)
    if len(basis) != m or not p_independence_test(basis, config):
        raise PreconditionError("could not complete to a p-basis")
    return DifferentialBasis(tuple(basis), i0 + 1, val, notes)


def residues_p_independent(basis: DifferentialBasis) -> bool:
    """The units of the basis reduce to a p-independent set of the residue field."""
    config = basis.valuation.config
    k = basis.valuation.index
    rows = [[x % config.p for j, x in enumerate(monomial_exponents(a)) if j != k]
            for i, a in enumerate(basis.basis) if i != basis.i0 - 1]
    return linalg.rank(rows, config.gf) == len(rows)


def _random_subfield_element(sampler: Sampler, gens, max_deg=1):
    """sum_e f_e^p a^e over a few multi-indices e, f_e random."""
    config = sampler.config
    p = config.p
    total = RationalFunction.zero(config)
    for _ in range(sampler.integer(1, 2)):
        e = [sampler.integer(0, p - 1) for _ in gens]
        term = frobenius_scalar(sampler.rational(max_deg, 2, den_deg=1))
        for a, k in zip(gens, e):
            term = term * a**k
        total = total + term
    return total


def restriction_zero_check(s: int, n: int, config: FieldConfig, trials: int = 50,
                           seed: int = 0, gens=None):
    """b dc_1 ^ ... ^ dc_n with b, c_i in K^p(a_1..a_s), s < n, is the zero form over K."""
    if s >= n:
        raise PreconditionError(f"need s < n, got s = {s}, n = {n}")
    if n > config.nvars:
        raise PreconditionError(f"n = {n} exceeds the number of variables")
    if gens is None:
        gens = [RationalFunction.variable(config, j) for j in range(s)]
    if len(gens) != s or not p_independence_test(gens, config):
        raise PreconditionError("generators must be s p-independent monomials")
    counterexamples = []
    for case in range(trials):
        sampler = Sampler(stream(seed, f"zero-restriction-{s}-{n}", case), config)
        b = _random_subfield_element(sampler, gens)
        cs = [_random_subfield_element(sampler, gens) for _ in range(n)]
        from .forms import exterior_d

        form = DifferentialForm.scalar(b)
        for c in cs:
            form = form.wedge(exterior_d(DifferentialForm.scalar(c)))
        if not form.is_zero():
            counterexamples.append((b, cs, form))
    return {"s": s, "n": n, "trials": trials, "counterexamples": counterexamples,
            "ok": not counterexamples}


def omega_injectivity_check(r: int, s: int, n: int, config: FieldConfig, gens=None):
    """Basis forms da_I (I in the first r generators) stay nonzero, distinct and independent."""
    if gens is None:
        gens = [RationalFunction.variable(config, j) for j in range(s)]
    if not (n <= r <= s <= len(gens)):
        raise PreconditionError("need n <= r <= s generators")
    if not p_independence_test(gens[:s], config):
        raise PreconditionError("generators must be p-independent")
    forms = []
    for I in combinations(range(r), n):
        forms.append(wedge(*[dlog(gens[i]) for i in I]) if I else
                     DifferentialForm.scalar(RationalFunction.one(config)))
    nonzero = all(not f.is_zero() for f in forms)
    distinct = len(set(forms)) == len(forms)
    rows = []
    for I in combinations(range(r), n):
        # dlog a_I = sum_J det(A_{I,J}) dlog x_J with A the exponent matrix
        exps = [monomial_exponents(gens[i]) for i in I]
        rows.append([_det_mod([[row[j] for j in J] for row in exps], config.p)
                     for J in combinations(range(config.nvars), n)])
    independent = linalg.rank([[x % config.p for x in row] for row in rows], config.gf) == len(rows)
    return {"r": r, "s": s, "n": n, "count": len(forms), "nonzero": nonzero,
            "distinct": distinct, "independent": independent,
            "ok": nonzero and distinct and independent}


def _det_mod(matrix, p):
    n = len(matrix)
    if n == 0:
        return 1
    a = [[x % p for x in row] for row in matrix]
    det = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det = det * a[c][c] % p
        inv = pow(a[c][c], -1, p)
        for r in range(c + 1, n):
            f = a[r][c] * inv % p
            a[r] = [(x - f * y) % p for x, y in zip(a[r], a[c])]
    return det % p
