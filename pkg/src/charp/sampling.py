"""Reproducible random objects for property campaigns.

Every case draws from its own counter-based stream keyed by
(seed, suite, case), so cases are independent of evaluation order.
"""

from __future__ import annotations

import zlib

import numpy as np

from .fields import FieldConfig
from .forms import DifferentialForm, LogTermSum
from .poly import Polynomial
from .rational import RationalFunction


def stream(seed: int, suite: str, case: int) -> np.random.Generator:
    key = zlib.crc32(suite.encode())
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, key, case])))


class Sampler:
    def __init__(self, rng: np.random.Generator, config: FieldConfig):
        self.rng = rng
        self.config = config

    def integer(self, lo, hi):
        """Uniform integer in [lo, hi]."""
        return int(self.rng.integers(lo, hi + 1))

    def choice(self, seq):
        return seq[self.integer(0, len(seq) - 1)]

    def element(self):
        return self.integer(0, self.config.q - 1)

    def nonzero_element(self):
        return self.integer(1, self.config.q - 1)

    def exponents(self, max_deg, variables=None):
        m = self.config.nvars
        allowed = range(m) if variables is None else variables
        e = [0] * m
        budget = self.integer(0, max_deg)
        for _ in range(budget):
            e[self.choice(list(allowed))] += 1
        return tuple(e)

    def poly(self, max_deg=2, max_terms=3, variables=None, nonzero=False):
        while True:
            terms = {}
            for _ in range(self.integer(1, max_terms)):
                terms[self.exponents(max_deg, variables)] = self.element()
            f = Polynomial(self.config, terms)
            if not nonzero or not f.is_zero():
                return f

    def rational(self, max_deg=2, max_terms=3, variables=None, nonzero=False, den_deg=None):
        den_deg = max_deg if den_deg is None else den_deg
        num = self.poly(max_deg, max_terms, variables, nonzero)
        if den_deg == 0 or self.integer(0, 2) == 0:
            den = Polynomial.one(self.config)
        else:
            den = self.poly(den_deg, max_terms, variables, nonzero=True)
        return RationalFunction(num, den)

    def monomial(self, lo=-2, hi=2, variables=None):
        m = self.config.nvars
        allowed = range(m) if variables is None else variables
        e = [self.integer(lo, hi) if j in allowed else 0 for j in range(m)]
        return RationalFunction.monomial(self.config, e, self.nonzero_element())

    def form(self, degree, max_deg=2, max_terms=2, den_deg=None):
        m = self.config.nvars
        if degree == 0:
            return DifferentialForm.scalar(self.rational(max_deg, max_terms, den_deg=den_deg))
        coeffs = {}
        for _ in range(self.integer(1, 2)):
            I = tuple(sorted(self.rng.choice(m, size=degree, replace=False).tolist()))
            coeffs[I] = self.rational(max_deg, max_terms, den_deg=den_deg)
        return DifferentialForm(self.config, degree, coeffs)

    def laurent_form(self, degree, lo=-2, hi=2, max_terms=3):
        """Form whose coefficients are Laurent polynomials (monomial denominators)."""
        m = self.config.nvars
        coeffs = {}
        for _ in range(self.integer(1, max_terms)):
            I = tuple(sorted(self.rng.choice(m, size=degree, replace=False).tolist()))
            term = self.monomial(lo, hi)
            coeffs[I] = coeffs[I] + term if I in coeffs else term
        return DifferentialForm(self.config, degree, coeffs)

    def logsum(self, degree, max_deg=2, terms=2, variables=None):
        config = self.config
        out = []
        for _ in range(self.integer(1, terms)):
            a = self.rational(max_deg, 2, variables, den_deg=1)
            bs = []
            for _ in range(degree):
                if self.integer(0, 3) == 0:
                    b = self.rational(1, 2, variables, nonzero=True, den_deg=0)
                    if b.is_constant():
                        b = b + RationalFunction.variable(config, self.choice(
                            list(range(config.nvars)) if variables is None else list(variables)))
                        if b.is_zero():
                            b = RationalFunction.one(config)
                else:
                    b = self.monomial(-1, 2, variables)
                bs.append(b)
            out.append((a, bs))
        return LogTermSum(config, degree, out)
