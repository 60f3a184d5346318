"""Volume-product monomials, identities among them, and their symmetric-group orbits.

A tetrahedron is stored as its ascending 4-tuple of labels; any orientation
sign is pushed into the coefficient of the enclosing term.  A monomial is a
sorted tuple of such tetrahedra and an :class:`Identity` is an integer linear
combination of monomials of one degree, normalized to a primitive integer
vector with positive leading coefficient.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import CalibrationError, DegenerateConfiguration, InvalidTetra, UnsupportedArity
from .exact import (Configuration, format_rational, label_name, parse_label,
                    random_configuration, six_volume)

Tetra = tuple
Monomial = tuple


def permutation_sign(seq: Sequence[int]) -> int:
    """Parity (+1/-1) of the permutation sorting ``seq`` (entries distinct)."""
    sign = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def make_tetra(labels: Iterable) -> tuple[Tetra, int]:
    """Return the canonical (sorted) tetrahedron and the parity of the sort."""
    labels = tuple(parse_label(x) for x in labels)
    if len(labels) != 4 or len(set(labels)) != 4:
        raise InvalidTetra(f"a tetrahedron needs 4 distinct labels, got {labels}")
    return tuple(sorted(labels)), permutation_sign(labels)


def complement_tetra(pair: Iterable, n: int = 6) -> Tetra:
    """Tetrahedron on the four labels not in ``pair`` (6 points only)."""
    if n != 6:
        raise UnsupportedArity(f"complement volumes need n = 6, got {n}")
    omitted = {parse_label(x) for x in pair}
    if len(omitted) != 2 or not omitted <= set(range(6)):
        raise InvalidTetra(f"complement pair must be two distinct labels of A..F, got {pair}")
    return tuple(i for i in range(6) if i not in omitted)


def complement_volume(config: Configuration, pair: Iterable) -> Fraction:
    """Signed volume of the four labels other than ``pair``, in ascending order."""
    return six_volume(config, *complement_tetra(pair, config.n)) / 6


def make_monomial(factors: Iterable) -> tuple[Monomial, int]:
    sign = 1
    tets = []
    for f in factors:
        t, s = make_tetra(f)
        tets.append(t)
        sign *= s
    return tuple(sorted(tets)), sign


def _normalize(terms: Iterable[tuple]) -> tuple:
    acc: dict = {}
    for coeff, mono in terms:
        acc[mono] = acc.get(mono, 0) + Fraction(coeff)
    items = sorted((m, c) for m, c in acc.items() if c != 0)
    if not items:
        return ()
    den = reduce(lcm, (c.denominator for _, c in items), 1)
    ints = [int(c * den) for _, c in items]
    g = reduce(gcd, ints, 0)
    if ints[0] < 0:
        g = -g
    return tuple((v // g, m) for v, (m, _) in zip(ints, items))


@dataclass(frozen=True)
class Identity:
    """Linear combination of volume monomials claimed to vanish identically.

    ``terms`` is a tuple of ``(coefficient, monomial)``.  Construction
    canonicalizes: duplicate monomials merge, zeros drop, terms sort by
    monomial, and coefficients become a primitive integer vector whose first
    entry is positive.  Equality ignores provenance.
    """

    n: int
    terms: tuple = ()
    provenance: str = field(default="", compare=False)

    def __post_init__(self):
        terms = []
        for coeff, factors in self.terms:
            mono, sign = make_monomial(factors)
            if any(max(t) >= self.n for t in mono):
                raise UnsupportedArity(f"monomial {mono} uses a label outside 0..{self.n - 1}")
            terms.append((sign * Fraction(coeff), mono))
        degrees = {len(m) for _, m in terms}
        if len(degrees) > 1:
            raise ValueError(f"terms of an identity must share one degree, got {sorted(degrees)}")
        object.__setattr__(self, "terms", _normalize(terms))

    @property
    def degree(self) -> int:
        return len(self.terms[0][1]) if self.terms else 0

    def is_zero(self) -> bool:
        return not self.terms

    def sort_key(self):
        return tuple((m, c) for c, m in self.terms)

    def __neg__(self):
        return Identity(self.n, tuple((-c, m) for c, m in self.terms), self.provenance)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for c, mono in self.terms:
            vols = "*".join("V[" + "".join(label_name(i) for i in t) + "]" for t in mono)
            parts.append(f"{'-' if c < 0 else '+'} {abs(c)}*{vols}")
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else text

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "n": self.n,
            "degree": self.degree,
            "terms": [{"coeff": format_rational(c),
                       "factors": [[label_name(i) for i in t] for t in mono]}
                      for c, mono in self.terms],
            "provenance": self.provenance,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "Identity":
        terms = tuple((Fraction(t["coeff"]), tuple(tuple(f) for f in t["factors"]))
                      for t in doc["terms"])
        ident = cls(int(doc["n"]), terms, doc.get("provenance", ""))
        if "degree" in doc and ident.terms and int(doc["degree"]) != ident.degree:
            raise ValueError(f"declared degree {doc['degree']} != actual {ident.degree}")
        return ident


def volume_table(config: Configuration, tetras: Iterable[Tetra]) -> dict:
    return {t: six_volume(config, *t) / 6 for t in set(tetras)}


def evaluate(identity: Identity, config: Configuration) -> Fraction:
    """Exact value of sum(coeff * prod(volume)) at ``config``."""
    if identity.n != config.n:
        raise UnsupportedArity(f"identity has n={identity.n}, configuration has n={config.n}")
    vols = volume_table(config, (t for _, m in identity.terms for t in m))
    total = Fraction(0)
    for coeff, mono in identity.terms:
        prod = Fraction(coeff)
        for t in mono:
            prod *= vols[t]
        total += prod
    return total


# --- the octahedron identities ---------------------------------------------

# Each expression is two products of complement volumes, written by omitted pair.
EQ9_EXPRESSIONS = (
    (("FD", "CE", "AB"), ("AD", "BE", "CF")),
    (("AD", "FE", "BC"), ("BD", "CE", "AF")),
    (("BD", "AE", "CF"), ("CD", "FE", "AB")),
    (("CD", "BE", "AF"), ("FD", "AE", "BC")),
)

# Signs relative to ascending-order complement volumes, found by
# calibrate_eq9_signs() (kept as a regression test).  Row k is expression k.
EQ9_SIGNS = (
    (1, -1),
    (-1, -1),
    (-1, 1),
    (-1, -1),
)

# Denominator shared by the four bracket expressions.
BRACKET_DENOMINATOR = ("AB", "AF", "BC", "CF")
# (numerator pairs, denominator pairs) for each ratio term of variants 5..8.
BRACKET_TERMS = {
    5: ((("FD", "CE"), ("CF", "AF", "BC")), (("AD", "BE"), ("AB", "AF", "BC"))),
    6: ((("AD", "FE"), ("CF", "AF", "AB")), (("BD", "CE"), ("AB", "CF", "BC"))),
    7: ((("BD", "AE"), ("BC", "AF", "AB")), (("CD", "FE"), ("AF", "CF", "BC"))),
    8: ((("CD", "BE"), ("CF", "AB", "BC")), (("FD", "AE"), ("AB", "AF", "CF"))),
}


def _pair_monomial(pairs: Sequence[str]) -> tuple:
    return tuple(complement_tetra(p) for p in pairs)


def _expression_terms(k: int, signs) -> list:
    return [(s, _pair_monomial(pairs)) for s, pairs in zip(signs[k], EQ9_EXPRESSIONS[k])]


def _difference(k: int, signs, provenance: str) -> Identity:
    terms = _expression_terms(0, signs) + [(-c, m) for c, m in _expression_terms(k, signs)]
    return Identity(6, tuple(terms), provenance)


def eq9_identities(signs=EQ9_SIGNS) -> list[Identity]:
    """The three octahedron identities E1 - E2, E1 - E3, E1 - E4."""
    return [_difference(k, signs, f"eq9-{k}") for k in (1, 2, 3)]


def calibrate_eq9_signs(probes: int = 20, coord_bound: int = 1000, seed: int = 9) -> tuple:
    """Search all term-sign assignments against exact evaluations on probe configs.

    For each difference E1 - Ek every one of the 2**4 sign choices is tried;
    exactly one must survive up to a global sign.  Signs are then fixed so
    that the first term of E1 is +1, and the choices for E1 must agree
    across the three differences.
    """
    configs = [random_configuration(6, coord_bound, seed + i) for i in range(probes)]
    first_expr = None
    rows = [None] * 4
    for k in (1, 2, 3):
        survivors = []
        for s in itertools.product((1, -1), repeat=4):
            signs = [None] * 4
            signs[0], signs[k] = s[:2], s[2:]
            terms = [(c, m) for c, m in _expression_terms(0, signs)] + \
                    [(-c, m) for c, m in _expression_terms(k, signs)]
            ident = Identity(6, tuple(terms))
            if not ident.is_zero() and all(evaluate(ident, c) == 0 for c in configs):
                survivors.append(s)
        canonical = {s if s[0] == 1 else tuple(-x for x in s) for s in survivors}
        if len(canonical) != 1:
            raise CalibrationError(f"E1 - E{k + 1}: {len(canonical)} sign assignments survive")
        (s,) = canonical
        if first_expr is None:
            first_expr = s[:2]
        elif first_expr != s[:2]:
            raise CalibrationError("inconsistent signs for E1 across the three differences")
        rows[k] = s[2:]
    rows[0] = first_expr
    return tuple(tuple(r) for r in rows)


def bracket_expression(variant: int, config: Configuration, signs=EQ9_SIGNS) -> Fraction:
    """Sum of the two volume ratios on the right of the angle-derivative formula.

    The common ``-l_DE**2 / 6`` prefactor is omitted.  Variant k in 5..8
    equals expression E(k-4) divided by V̄AB·V̄AF·V̄BC·V̄CF.
    """
    if variant not in BRACKET_TERMS:
        raise ValueError(f"variant must be one of 5, 6, 7, 8, got {variant}")
    if config.n != 6:
        raise UnsupportedArity(f"bracket expressions need n = 6, got {config.n}")
    vol = {}
    needed = {p for num, den in BRACKET_TERMS[variant] for p in num + den}
    for p in needed:
        vol[p] = complement_volume(config, p)
    for p in sorted({p for _, den in BRACKET_TERMS[variant] for p in den}):
        if vol[p] == 0:
            raise DegenerateConfiguration(f"complement volume V[{p}] is zero", volume=p)
    total = Fraction(0)
    for sign, (num, den) in zip(signs[variant - 5], BRACKET_TERMS[variant]):
        total += sign * vol[num[0]] * vol[num[1]] / (vol[den[0]] * vol[den[1]] * vol[den[2]])
    return total


def bracket_denominator(config: Configuration) -> Fraction:
    out = Fraction(1)
    for p in BRACKET_DENOMINATOR:
        out *= complement_volume(config, p)
    return out


# --- permutations and orbits -------------------------------------------------

def apply_permutation(identity: Identity, perm: Sequence[int]) -> Identity:
    """Relabel every factor by ``i -> perm[i]`` and re-canonicalize."""
    perm = tuple(parse_label(p) for p in perm)
    if sorted(perm) != list(range(identity.n)):
        raise ValueError(f"{perm} is not a permutation of 0..{identity.n - 1}")
    terms = tuple((c, tuple(tuple(perm[i] for i in t) for t in mono))
                  for c, mono in identity.terms)
    return Identity(identity.n, terms, identity.provenance)


def orbit(identity: Identity) -> list[Identity]:
    """Distinct images under all n! relabelings, deduplicated up to global sign.

    Canonical forms already fix the sign of the leading coefficient, so I and
    -I share a representative.  Returned in canonical order.
    """
    seen = {}
    for perm in itertools.permutations(range(identity.n)):
        image = apply_permutation(identity, perm)
        seen.setdefault(image, image)
    return sorted(seen.values(), key=Identity.sort_key)
