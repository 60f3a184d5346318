"""Search for volume identities by exact kernels of evaluation matrices.

Columns are the monomials of a :class:`MonomialSpace`, rows are random
integer configurations, and entries are monomial values with every volume
replaced by six times itself (so they are integers).  Every kernel vector is
a candidate identity; candidates must agree across two independent seeds and
are then certified either symbolically or by further random evaluation.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InfeasibleProfile, TooLarge, UnstableKernel
from .exact import random_configuration, six_volume
from .identities import Identity, evaluate
from .linalg import nullspace
from .poly import expand_identity

log = logging.getLogger(__name__)

DEFAULT_MAX_MONOMIALS = 300
SYMBOLIC_MAX_N = 6
SYMBOLIC_MAX_DEGREE = 3


@dataclass(frozen=True)
class MonomialSpace:
    """Monomials of a fixed degree in the tetra volumes of n points.

    ``profile`` is ``"balanced"`` (every label used 4*degree/n times),
    ``"unconstrained"``, or an explicit per-label usage tuple.
    """

    n: int
    degree: int
    profile: object = "balanced"

    def __post_init__(self):
        if isinstance(self.profile, list):
            object.__setattr__(self, "profile", tuple(self.profile))

    def usage(self):
        """Required per-label usage counts, or None when unconstrained."""
        n, d = self.n, self.degree
        if self.profile == "unconstrained":
            return None
        if self.profile == "balanced":
            if (4 * d) % n:
                raise InfeasibleProfile(f"balanced profile needs n | 4*degree; {n} does not divide {4 * d}")
            return (4 * d // n,) * n
        if isinstance(self.profile, tuple):
            u = tuple(int(x) for x in self.profile)
            if len(u) != n or sum(u) != 4 * d or any(x < 0 or x > d for x in u):
                raise InfeasibleProfile(f"usage vector {u} is infeasible for n={n}, degree={d}")
            return u
        raise InfeasibleProfile(f"unknown profile {self.profile!r}")

    def to_json(self) -> dict:
        prof = list(self.profile) if isinstance(self.profile, tuple) else self.profile
        return {"n": self.n, "degree": self.degree, "profile": prof}

    @classmethod
    def from_json(cls, doc: dict) -> "MonomialSpace":
        return cls(int(doc["n"]), int(doc["degree"]), doc.get("profile", "balanced"))


def enumerate_monomials(space: MonomialSpace, max_monomials: int | None = None) -> list:
    """All monomials of the space in canonical (lexicographic) order."""
    if space.n < 4 or space.degree < 0:
        raise InfeasibleProfile(f"need n >= 4 and degree >= 0, got {space.n}, {space.degree}")
    usage = space.usage()
    tetras = list(itertools.combinations(range(space.n), 4))
    out = []

    def emit(mono):
        out.append(mono)
        if max_monomials is not None and len(out) > max_monomials:
            raise TooLarge(f"monomial space exceeds budget of {max_monomials}",
                           size=len(out), budget=max_monomials)

    if usage is None:
        for mono in itertools.combinations_with_replacement(tetras, space.degree):
            emit(mono)
        return out

    remaining = list(usage)

    def extend(start, chosen, slots):
        if slots == 0:
            if not any(remaining):
                emit(tuple(chosen))
            return
        if max(remaining) > slots:
            return
        for i in range(start, len(tetras)):
            t = tetras[i]
            if any(remaining[x] == 0 for x in t):
                continue
            for x in t:
                remaining[x] -= 1
            chosen.append(t)
            extend(i, chosen, slots - 1)
            chosen.pop()
            for x in t:
                remaining[x] += 1

    extend(0, [], space.degree)
    return out


@dataclass
class EvaluationMatrix:
    space: MonomialSpace
    monomials: list
    rows: list
    seeds: list
    coord_bound: int

    @property
    def shape(self):
        return len(self.rows), len(self.monomials)


def evaluation_row(monomials, config) -> list[int]:
    tetras = {t for m in monomials for t in m}
    vols = {t: six_volume(config, *t) for t in tetras}
    row = []
    for m in monomials:
        v = Fraction(1)
        for t in m:
            v *= vols[t]
        row.append(v)
    if any(v.denominator != 1 for v in row):
        raise ValueError("evaluation matrices need integer coordinates")
    return [int(v) for v in row]


def build_matrix(space: MonomialSpace, num_rows: int, coord_bound: int, seed: int,
                 monomials: list | None = None) -> EvaluationMatrix:
    """Row i is evaluated at random_configuration(n, coord_bound, seed + i)."""
    if num_rows < 1:
        raise ValueError("num_rows must be at least 1")
    if monomials is None:
        monomials = enumerate_monomials(space)
    seeds = [seed + i for i in range(num_rows)]
    rows = [evaluation_row(monomials, random_configuration(space.n, coord_bound, s))
            for s in seeds]
    return EvaluationMatrix(space, monomials, rows, seeds, coord_bound)


def kernel(matrix: EvaluationMatrix) -> list[list[int]]:
    return nullspace(matrix.rows, len(matrix.monomials))


def identity_from_vector(n, monomials, vector, provenance="") -> Identity:
    return Identity(n, tuple((c, m) for c, m in zip(vector, monomials) if c), provenance)


def identity_vector(identity: Identity, monomials: list) -> list[int] | None:
    """Coefficient vector of ``identity`` over ``monomials``; None if outside the space."""
    index = {m: i for i, m in enumerate(monomials)}
    vec = [0] * len(monomials)
    for c, m in identity.terms:
        if m not in index:
            return None
        vec[index[m]] = c
    return vec


@dataclass
class DiscoveryResult:
    space: MonomialSpace
    monomials: list
    basis: list
    identities: list
    certified: str
    seeds: list
    coord_bound: int
    failure_bound: dict = field(default_factory=dict)

    @property
    def kernel_dim(self) -> int:
        return len(self.basis)

    def __iter__(self):
        return iter(self.identities)

    def __len__(self):
        return len(self.identities)

    def to_json(self) -> dict:
        doc = {
            "schema": 1,
            "space": self.space.to_json(),
            "monomial_count": len(self.monomials),
            "kernel_dim": self.kernel_dim,
            "certified": self.certified,
            "identities": [i.to_json() for i in self.identities],
            "seeds": list(self.seeds),
            "coord_bound": self.coord_bound,
        }
        if self.failure_bound:
            doc["failure_bound"] = self.failure_bound
        return doc


def discover(space: MonomialSpace, coord_bound: int = 1000, seed: int = 0,
             extra_rows: int = 10, max_monomials: int = DEFAULT_MAX_MONOMIALS,
             certify_trials: int = 200) -> DiscoveryResult:
    """Find a basis of all identities in ``space``.

    Two matrices of ``len(basis) + extra_rows`` rows are built from seeds
    ``seed`` and ``seed + rows``; their kernels must coincide.  Small spaces
    (n <= 6, degree <= 3) are proved by symbolic expansion, others are checked
    at ``certify_trials`` further random configurations.
    """
    monomials = enumerate_monomials(space, max_monomials)
    nrows = len(monomials) + extra_rows
    seeds = [seed, seed + nrows]
    bases = []
    for s in seeds:
        m = build_matrix(space, nrows, coord_bound, s, monomials)
        bases.append(kernel(m))
        log.debug("seed %d: %d x %d matrix, kernel dim %d", s, nrows, len(monomials), len(bases[-1]))
    if bases[0] != bases[1]:
        raise UnstableKernel(f"kernel dimensions {len(bases[0])} and {len(bases[1])} "
                             f"from seeds {seeds}; retry with more rows or a larger bound")
    basis = bases[0]
    tag = f"discover:n{space.n}:d{space.degree}"
    identities = [identity_from_vector(space.n, monomials, v, f"{tag}:{i}")
                  for i, v in enumerate(basis)]

    failure_bound = {}
    if space.n <= SYMBOLIC_MAX_N and space.degree <= SYMBOLIC_MAX_DEGREE:
        certified = "symbolic"
        for ident in identities:
            if expand_identity(ident).terms:
                raise UnstableKernel(f"candidate {ident.provenance} failed symbolic certification")
    else:
        certified = "probabilistic"
        start = seeds[1] + nrows
        for k in range(certify_trials):
            config = random_configuration(space.n, coord_bound, start + k)
            for ident in identities:
                if evaluate(ident, config) != 0:
                    raise UnstableKernel(f"candidate {ident.provenance} is nonzero at seed {start + k}")
        per_trial = Fraction(3 * space.degree, 2 * coord_bound + 1)
        failure_bound = {
            "per_trial": float(per_trial),
            "trials": certify_trials,
            "combined_log10": certify_trials * math.log10(per_trial),
        }
    return DiscoveryResult(space, monomials, basis, identities, certified, seeds,
                           coord_bound, failure_bound)


def result_from_json(doc: dict) -> tuple[MonomialSpace, list[Identity]]:
    space = MonomialSpace.from_json(doc["space"])
    return space, [Identity.from_json(d) for d in doc["identities"]]
