"""Sparse integer polynomials in the 3n coordinate variables.

Variable ``3*label + axis`` is the ``axis`` (x, y, z) coordinate of a label,
so variables are ordered label-major.  Terms live in a dict mapping dense
exponent tuples to nonzero ints.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from operator import add
from typing import Mapping, Sequence

from .errors import InvalidTetra
from .exact import Configuration, label_name, parse_label
from .identities import Identity, permutation_sign

AXES = "xyz"


def variable_index(label, axis: str) -> int:
    return 3 * parse_label(label) + AXES.index(axis)


def variable_name(index: int) -> str:
    label, axis = divmod(index, 3)
    return f"{AXES[axis]}_{label_name(label)}"


class SparsePolynomial:
    """Immutable-by-convention sparse polynomial with integer coefficients."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping | None = None):
        self.nvars = nvars
        self.terms = {}
        if terms:
            for exp, c in terms.items():
                exp = tuple(exp)
                if len(exp) != nvars:
                    raise ValueError(f"exponent {exp} has wrong length for {nvars} variables")
                c = self.terms.get(exp, 0) + int(c)
                if c:
                    self.terms[exp] = c
                else:
                    self.terms.pop(exp, None)

    @classmethod
    def constant(cls, nvars: int, value: int) -> "SparsePolynomial":
        return cls(nvars, {(0,) * nvars: value} if value else None)

    @classmethod
    def variable(cls, nvars: int, index: int) -> "SparsePolynomial":
        exp = [0] * nvars
        exp[index] = 1
        return cls(nvars, {tuple(exp): 1})

    def _check(self, other):
        if isinstance(other, int):
            return SparsePolynomial.constant(self.nvars, other)
        if other.nvars != self.nvars:
            raise ValueError("polynomials live in different variable sets")
        return other

    def __add__(self, other):
        other = self._check(other)
        out = dict(self.terms)
        for exp, c in other.terms.items():
            v = out.get(exp, 0) + c
            if v:
                out[exp] = v
            else:
                del out[exp]
        return _raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return _raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        out: dict = {}
        get = out.get
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(map(add, e1, e2))
                out[e] = get(e, 0) + c1 * c2
        return _raw(self.nvars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int):
            other = SparsePolynomial.constant(self.nvars, other)
        if not isinstance(other, SparsePolynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"SparsePolynomial({self.nvars}, {len(self.terms)} terms)"

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def evaluate(self, values: Sequence) -> Fraction:
        values = [Fraction(v) for v in values]
        total = Fraction(0)
        for exp, c in self.terms.items():
            term = Fraction(c)
            for v, k in zip(values, exp):
                if k:
                    term *= v ** k
            total += term
        return total

    def substitute(self, images: Sequence["SparsePolynomial"]) -> "SparsePolynomial":
        """Replace variable i by ``images[i]`` (all in one common ring) and expand."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        nv = images[0].nvars
        powers = [[SparsePolynomial.constant(nv, 1)] for _ in images]
        result = SparsePolynomial(nv)
        for exp, c in self.terms.items():
            term = SparsePolynomial.constant(nv, c)
            for i, k in enumerate(exp):
                if k:
                    while len(powers[i]) <= k:
                        powers[i].append(powers[i][-1] * images[i])
                    term = term * powers[i][k]
            result = result + term
        return result

    def to_text(self) -> str:
        """Stable plain-text form: terms in descending lexicographic exponent order."""
        if not self.terms:
            return "0"
        lines = []
        for exp in sorted(self.terms, reverse=True):
            c = self.terms[exp]
            factors = [variable_name(i) + (f"^{k}" if k > 1 else "")
                       for i, k in enumerate(exp) if k]
            lines.append(f"{c:+d}" + ("*" + "*".join(factors) if factors else ""))
        return "\n".join(lines)


def _raw(nvars, terms) -> SparsePolynomial:
    p = SparsePolynomial.__new__(SparsePolynomial)
    p.nvars = nvars
    p.terms = terms
    return p


def is_zero(poly: SparsePolynomial) -> bool:
    return not poly.terms


def volume_polynomial(p, q, r, s, n: int) -> SparsePolynomial:
    """Six times the signed volume of pqrs as a cubic in the 3n coordinates.

    Leibniz expansion of det[[1, x_p, y_p, z_p], ..., [1, x_s, y_s, z_s]],
    which equals det[q-p; r-p; s-p].  Gives 24 signed monomials.
    """
    labels = [parse_label(x) for x in (p, q, r, s)]
    if len(set(labels)) != 4:
        raise InvalidTetra(f"tetrahedron labels must be distinct: {labels}")
    if max(labels) >= n:
        raise InvalidTetra(f"label {label_name(max(labels))} outside a {n}-point configuration")
    nvars = 3 * n
    terms = {}
    for sigma in itertools.permutations(range(4)):
        exp = [0] * nvars
        for row, col in enumerate(sigma):
            if col:
                exp[3 * labels[row] + col - 1] += 1
        terms[tuple(exp)] = permutation_sign(sigma)
    return SparsePolynomial(nvars, terms)


def _drop_label(poly: SparsePolynomial, label: int) -> SparsePolynomial:
    idx = range(3 * label, 3 * label + 3)
    return _raw(poly.nvars, {e: c for e, c in poly.terms.items() if not any(e[i] for i in idx)})


def expand_identity(identity: Identity, fix_origin: bool = False) -> SparsePolynomial:
    """Expand sum(coeff * prod(6V)) in coordinates; zero iff the identity holds.

    With ``fix_origin`` label 0 is placed at the origin first, removing three
    variables; translation invariance makes that equivalent.
    """
    nvars = 3 * identity.n
    cache = {}
    result = SparsePolynomial(nvars)
    for coeff, mono in identity.terms:
        factors = []
        for t in mono:
            if t not in cache:
                vp = volume_polynomial(*t, identity.n)
                cache[t] = _drop_label(vp, 0) if fix_origin else vp
            factors.append(cache[t])
        factors.sort(key=len)
        prod = SparsePolynomial.constant(nvars, coeff)
        for f in factors:
            prod = prod * f
        result = result + prod
    assert result.total_degree() <= 3 * identity.degree
    return result


def configuration_values(config: Configuration) -> list:
    return [c for p in config.points for c in p]
