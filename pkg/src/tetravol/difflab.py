"""Floating-point checks of the dihedral-angle differential relations.

Everything here is binary64 and numpy.  Points are passed as mappings from
label (``"A"`` or ``0``) to 3-vectors.  The octahedron convention puts the
diagonal DE through the middle with A, B, C, F around it in cyclic order
B, C, F, A, so the four dihedral angles at DE are

    alpha = (BDE, CDE), delta = (CDE, FDE), beta = (FDE, ADE), gamma = (ADE, BDE).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import DegenerateAngle, NoCircle, NotEmbeddable
from .exact import label_name, parse_label

ANGLE_FACES = {
    "alpha": ("B", "C"),
    "beta": ("F", "A"),
    "gamma": ("A", "B"),
    "delta": ("C", "F"),
}
REFERENCE_EQ2_CONSTANT = 1.0 / 6.0
EQ2_TOL = 1e-5
EQ4_TOL = 1e-9
EQ4_FD_TOL = 1e-6
EQ5_TOL = 1e-8


def _key(label) -> str:
    return label_name(parse_label(label))


def _pair(a, b) -> tuple:
    a, b = parse_label(a), parse_label(b)
    return (min(a, b), max(a, b))


def as_points(config) -> dict:
    """Normalize a configuration (exact or float mapping) to {name: float array}."""
    if hasattr(config, "as_floats"):
        config = config.as_floats()
    return {_key(k): np.asarray(v, dtype=float) for k, v in config.items()}


def edge_lengths(points: Mapping, labels: Sequence | None = None) -> dict:
    """All pairwise distances, keyed by sorted label-index pairs."""
    pts = as_points(points)
    labels = list(labels) if labels is not None else list(pts)
    out = {}
    for i, a in enumerate(labels):
        for b in labels[i + 1:]:
            out[_pair(a, b)] = float(np.linalg.norm(pts[_key(a)] - pts[_key(b)]))
    return out


def cayley_menger(d2: np.ndarray) -> float:
    """Bordered Cayley-Menger determinant of a squared-distance matrix."""
    k = d2.shape[0]
    m = np.ones((k + 1, k + 1))
    m[0, 0] = 0.0
    m[1:, 1:] = d2
    return float(np.linalg.det(m))


def signed_volume(p, q, r, s) -> float:
    return float(np.dot(np.subtract(q, p), np.cross(np.subtract(r, p), np.subtract(s, p)))) / 6.0


@dataclass
class EmbeddedTetra:
    """Four labeled points in canonical gauge.

    First point at the origin, second on +x, third in the z = 0 plane with
    y > 0, fourth with z > 0.
    """

    labels: tuple
    coords: np.ndarray

    def __getitem__(self, label) -> np.ndarray:
        return self.coords[self.labels.index(_key(label))]

    def keys(self):
        return self.labels

    def items(self):
        return zip(self.labels, self.coords)

    @property
    def volume(self) -> float:
        return abs(signed_volume(*self.coords))


def embed_from_lengths(lengths: Mapping, labels: Sequence | None = None) -> EmbeddedTetra:
    """Realize six edge lengths as coordinates (trilateration, checked by Cayley-Menger)."""
    lens = {_pair(*k): float(v) for k, v in lengths.items()}
    if labels is None:
        labels = sorted({x for k in lens for x in k})
    labels = tuple(_key(x) for x in labels)
    if len(labels) != 4 or len(set(labels)) != 4:
        raise ValueError(f"need four distinct labels, got {labels}")
    d = np.zeros((4, 4))
    for i in range(4):
        for j in range(i + 1, 4):
            key = _pair(labels[i], labels[j])
            if key not in lens:
                raise ValueError(f"missing length for edge {labels[i]}{labels[j]}")
            if not lens[key] > 0:
                raise NotEmbeddable(f"edge {labels[i]}{labels[j]} has non-positive length {lens[key]}")
            d[i, j] = d[j, i] = lens[key]
    d2 = d * d
    scale = d.max()
    for face in ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)):
        # 2D Cayley-Menger is -16 * area^2
        cm_face = -cayley_menger(d2[np.ix_(face, face)])
        if cm_face <= 1e-12 * scale ** 4:
            raise NotEmbeddable(
                f"face {''.join(labels[i] for i in face)} violates the triangle inequality",
                determinant=cm_face)
    cm = cayley_menger(d2)
    if cm <= 1e-10 * scale ** 6:
        raise NotEmbeddable(f"Cayley-Menger determinant {cm:.3e} is not positive", determinant=cm)

    x2 = (d2[0, 1] + d2[0, 2] - d2[1, 2]) / (2 * d[0, 1])
    y2 = math.sqrt(d2[0, 2] - x2 * x2)
    x3 = (d2[0, 1] + d2[0, 3] - d2[1, 3]) / (2 * d[0, 1])
    y3 = (d2[0, 2] + d2[0, 3] - d2[2, 3] - 2 * x2 * x3) / (2 * y2)
    z3sq = d2[0, 3] - x3 * x3 - y3 * y3
    if z3sq <= 0:
        raise NotEmbeddable("fourth point falls in the base plane", determinant=cm)
    coords = np.array([[0.0, 0.0, 0.0],
                       [d[0, 1], 0.0, 0.0],
                       [x2, y2, 0.0],
                       [x3, y3, math.sqrt(z3sq)]])
    tet = EmbeddedTetra(labels, coords)
    cm_volume = math.sqrt(cm / 288.0)
    if abs(tet.volume - cm_volume) > 1e-10 * cm_volume:
        raise NotEmbeddable("coordinate volume disagrees with Cayley-Menger volume", determinant=cm)
    return tet


def dihedral_angle(points: Mapping, edge: Sequence, from_label, to_label) -> float:
    """Angle in [0, pi] between the half-planes (edge, from_label) and (edge, to_label)."""
    pts = points if isinstance(points, EmbeddedTetra) else as_points(points)
    e0, e1 = (np.asarray(pts[_key(x)], dtype=float) for x in edge)
    u = e1 - e0
    length = np.linalg.norm(u)
    if length == 0:
        raise DegenerateAngle("edge has zero length")
    u = u / length
    rej = []
    for lab in (from_label, to_label):
        v = np.asarray(pts[_key(lab)], dtype=float) - e0
        r = v - np.dot(v, u) * u
        norm = np.linalg.norm(r)
        if norm <= 1e-14 * max(np.linalg.norm(v), length):
            raise DegenerateAngle(f"point {_key(lab)} lies on the edge line")
        rej.append(r / norm)
    return math.atan2(np.linalg.norm(np.cross(rej[0], rej[1])), float(np.dot(rej[0], rej[1])))


def octahedron_angles(points: Mapping) -> dict:
    """The four dihedral angles at DE named as in the module docstring."""
    pts = as_points(points)
    return {name: dihedral_angle(pts, ("D", "E"), a, b) for name, (a, b) in ANGLE_FACES.items()}


# --- dihedral derivative with respect to the opposite edge -----------------

def random_tetra_points(rng: np.random.Generator, min_quality: float = 0.02) -> np.ndarray:
    """Random well-shaped tetrahedron: volume / longest_edge**3 >= min_quality."""
    while True:
        pts = rng.uniform(-1.0, 1.0, size=(4, 3))
        longest = max(np.linalg.norm(pts[i] - pts[j]) for i in range(4) for j in range(i + 1, 4))
        if abs(signed_volume(*pts)) >= min_quality * longest ** 3:
            return pts


def _alpha_from_lengths(lengths: dict) -> float:
    tet = embed_from_lengths(lengths, ("D", "E", "B", "C"))
    return dihedral_angle(tet, ("D", "E"), "B", "C")


def eq2_ratios(seed: int, h: float, samples: int) -> np.ndarray:
    """(d alpha / d l_BC) * V / (l_BC * l_DE) on random tetrahedra BCDE.

    alpha is the dihedral angle at DE; the derivative is a central difference
    in l_BC with the five other lengths held fixed.
    """
    rng = np.random.default_rng(seed)
    bc, de = _pair("B", "C"), _pair("D", "E")
    out = []
    while len(out) < samples:
        pts = random_tetra_points(rng)
        lengths = edge_lengths(dict(zip("BCDE", pts)))
        try:
            plus = _alpha_from_lengths({**lengths, bc: lengths[bc] + h})
            minus = _alpha_from_lengths({**lengths, bc: lengths[bc] - h})
        except NotEmbeddable:
            continue
        volume = abs(signed_volume(*pts))
        out.append((plus - minus) / (2 * h) * volume / (lengths[bc] * lengths[de]))
    return np.array(out)


def check_eq2(seed: int = 0, h: float = 1e-5, samples: int = 100, tol: float = EQ2_TOL) -> dict:
    if not 1e-7 <= h <= 1e-3:
        raise ValueError(f"h must lie in [1e-7, 1e-3], got {h}")
    if samples < 1:
        raise ValueError("samples must be positive")
    rho = eq2_ratios(seed, h, samples)
    c = float(rho.mean())
    dev = float(np.max(np.abs(rho / c - 1.0)))
    return {
        "schema": 1,
        "check": "eq2",
        "seed": seed,
        "samples": samples,
        "h": h,
        "fitted_constant": c,
        "reference_constant": REFERENCE_EQ2_CONSTANT,
        "rel_diff_from_reference": abs(c / REFERENCE_EQ2_CONSTANT - 1.0),
        "max_rel_dev": dev,
        "tolerance": tol,
        "pass": dev <= tol,
    }


# --- constrained motion of D --------------------------------------------------

@dataclass
class MotionState:
    """D on the circle keeping |AD| and |FD| fixed, at parameter t."""

    t: float
    position: np.ndarray
    tangent: np.ndarray
    center: np.ndarray
    radius: float
    axis: np.ndarray
    basis: tuple = field(repr=False, default=())


def _circle(pts: dict):
    A, D, F = pts["A"], pts["D"], pts["F"]
    axis = F - A
    dist = float(np.linalg.norm(axis))
    if dist == 0:
        raise NoCircle("A and F coincide")
    u = axis / dist
    l_ad2 = float(np.dot(D - A, D - A))
    l_fd2 = float(np.dot(D - F, D - F))
    a = (l_ad2 - l_fd2 + dist * dist) / (2 * dist)
    r2 = l_ad2 - a * a
    scale2 = max(l_ad2, l_fd2, dist * dist)
    if r2 <= 1e-20 * scale2:
        raise NoCircle(f"spheres about A and F meet in a circle of radius^2 {r2:.3e}")
    center = A + a * u
    w = D - center
    w = w - np.dot(w, u) * u
    e1 = w / np.linalg.norm(w)
    e2 = np.cross(u, e1)
    return center, math.sqrt(r2), u, e1, e2


def motion_state(config, t: float) -> MotionState:
    """Position and analytic tangent of D(t); t = 0 is the (projected) input D."""
    pts = as_points(config)
    center, r, u, e1, e2 = _circle(pts)
    c, s = math.cos(t), math.sin(t)
    pos = center + r * (c * e1 + s * e2)
    tan = r * (-s * e1 + c * e2)
    return MotionState(t, pos, tan, center, r, u, (e1, e2))


def moved(config, t: float) -> dict:
    pts = as_points(config)
    pts["D"] = motion_state(pts, t).position
    return pts


# --- l dl / V agree along the motion -------------------------------------------

# (edge partner of D, omitted pair of the complement volume)
EQ4_TERMS = (("E", ("B", "C")), ("B", ("C", "E")), ("C", ("B", "E")))


def _complement_volume(pts: dict, pair) -> float:
    omitted = {parse_label(x) for x in pair}
    labels = [label_name(i) for i in range(6) if i not in omitted]
    return signed_volume(*(pts[x] for x in labels))


def eq4_quantities(config, t: float, finite_difference: bool = False, h: float = 1e-6):
    """Return ``(q, volumes)`` at parameter t: q_i = l dl/dt / V for the three edges."""
    pts = as_points(config)
    state = motion_state(pts, t)
    D = state.position
    if finite_difference:
        tangent = (motion_state(pts, t + h).position - motion_state(pts, t - h).position) / (2 * h)
    else:
        tangent = state.tangent
    pts["D"] = D
    qs, vols = [], []
    for partner, pair in EQ4_TERMS:
        # l * dl/dt = (D - X) . D'
        l_dl = float(np.dot(D - pts[partner], tangent))
        v = _complement_volume(pts, pair)
        vols.append(v)
        qs.append(l_dl / v if v != 0 else math.nan)
    return np.array(qs), np.array(vols)


def _sign(x: float) -> int:
    return 1 if x > 0 else -1


def check_eq4(config, samples: int = 64, t_values: Sequence | None = None,
              finite_difference: bool = False, h: float = 1e-6,
              tol: float | None = None, volume_floor: float = 1e-9) -> dict:
    """Compare |q1|, |q2|, |q3| along the circle and track their sign pattern.

    Samples whose volumes fall below ``volume_floor * scale**3`` are flagged
    and skipped; the sample sequence is split into windows wherever a volume
    changes sign, and the sign pattern must be constant inside each window.
    """
    pts = as_points(config)
    if tol is None:
        tol = EQ4_FD_TOL if finite_difference else EQ4_TOL
    if t_values is None:
        t_values = [2 * math.pi * k / samples for k in range(samples)]
    scale = max(np.linalg.norm(pts[a] - pts[b]) for a in pts for b in pts)
    floor = volume_floor * scale ** 3
    max_dev = 0.0
    flagged = []
    windows = [[]]
    prev_signs = None
    for t in t_values:
        q, vols = eq4_quantities(pts, t, finite_difference, h)
        vsigns = tuple(_sign(v) for v in vols)
        if prev_signs is not None and vsigns != prev_signs:
            windows.append([])
        prev_signs = vsigns
        if np.any(np.abs(vols) < floor):
            flagged.append(float(t))
            continue
        a = np.abs(q)
        for i in range(3):
            for j in range(i + 1, 3):
                max_dev = max(max_dev, float(abs(a[i] - a[j]) / max(a[i], a[j])))
        windows[-1].append((float(t), (_sign(q[0] * q[1]), _sign(q[0] * q[2]))))
    window_reports = []
    consistent = True
    for w in windows:
        if not w:
            continue
        patterns = sorted({p for _, p in w})
        consistent &= len(patterns) == 1
        window_reports.append({"t_start": w[0][0], "t_end": w[-1][0],
                               "sign_patterns": [list(p) for p in patterns]})
    return {
        "schema": 1,
        "check": "eq4",
        "samples": len(t_values),
        "derivatives": "finite-difference" if finite_difference else "analytic",
        "max_rel_dev": float(max_dev),
        "tolerance": tol,
        "windows": window_reports,
        "flagged_t": flagged,
        "signs_constant": bool(consistent),
        "pass": bool(max_dev <= tol and consistent),
    }


def random_float_configuration(rng: np.random.Generator, n: int = 6) -> dict:
    return {label_name(i): rng.uniform(-1.0, 1.0, 3) for i in range(n)}


def run_eq4(seed: int = 0, samples: int = 64, configs: int = 20, **kwargs) -> dict:
    rng = np.random.default_rng(seed)
    reports = [check_eq4(random_float_configuration(rng), samples, **kwargs) for _ in range(configs)]
    return {
        "schema": 1,
        "check": "eq4",
        "seed": seed,
        "configs": configs,
        "samples": samples,
        "derivatives": reports[0]["derivatives"],
        "max_rel_dev": float(max(r["max_rel_dev"] for r in reports)),
        "tolerance": reports[0]["tolerance"],
        "flagged": sum(len(r["flagged_t"]) for r in reports),
        "signs_constant": all(r["signs_constant"] for r in reports),
        "pass": all(r["pass"] for r in reports),
    }


# --- the angle sum at DE is stationary ------------------------------------------

REGULAR_OCTAHEDRON = {
    "A": (0.0, -1.0, 0.0),
    "B": (1.0, 0.0, 0.0),
    "C": (0.0, 1.0, 0.0),
    "D": (0.0, 0.0, 1.0),
    "E": (0.0, 0.0, -1.0),
    "F": (-1.0, 0.0, 0.0),
}


def perturbed_octahedron(seed: int, amplitude: float = 0.1) -> dict:
    """Regular octahedron (diagonal DE) with every vertex jittered uniformly."""
    rng = np.random.default_rng(seed)
    return {k: np.array(v) + rng.uniform(-amplitude, amplitude, 3)
            for k, v in REGULAR_OCTAHEDRON.items()}


def angle_sum(points) -> float:
    return sum(octahedron_angles(points).values())


def angle_rates(config, t: float, h: float) -> dict:
    """Central-difference d/dt of each angle at DE while D moves."""
    plus = octahedron_angles(moved(config, t + h))
    minus = octahedron_angles(moved(config, t - h))
    return {k: (plus[k] - minus[k]) / (2 * h) for k in plus}


def check_eq5_lhs(config, h: float = 1e-5, t_values: Sequence | None = None,
                  tol: float = EQ5_TOL) -> dict:
    """d(alpha + beta + gamma + delta)/dt along the D-motion must vanish."""
    pts = as_points(config)
    if t_values is None:
        t_values = list(np.linspace(-0.2, 0.2, 16))
    max_rate = 0.0
    max_sum_err = 0.0
    for t in t_values:
        rate = (angle_sum(moved(pts, t + h)) - angle_sum(moved(pts, t - h))) / (2 * h)
        max_rate = max(max_rate, abs(rate))
        max_sum_err = max(max_sum_err, abs(angle_sum(moved(pts, t)) - 2 * math.pi))
    return {
        "schema": 1,
        "check": "eq5",
        "samples": len(t_values),
        "h": h,
        "max_abs_rate": max_rate,
        "max_angle_sum_error": max_sum_err,
        "tolerance": tol,
        "pass": bool(max_rate <= tol and max_sum_err <= 1e-9),
    }


def run_eq5(seed: int = 0, h: float = 1e-5, samples: int = 16, configs: int = 5,
            tol: float = EQ5_TOL) -> dict:
    reports = [check_eq5_lhs(perturbed_octahedron(seed + k), h,
                             list(np.linspace(-0.2, 0.2, samples)), tol)
               for k in range(configs)]
    return {
        "schema": 1,
        "check": "eq5",
        "seed": seed,
        "configs": configs,
        "samples": samples,
        "h": h,
        "max_abs_rate": max(r["max_abs_rate"] for r in reports),
        "max_angle_sum_error": max(r["max_angle_sum_error"] for r in reports),
        "tolerance": tol,
        "pass": all(r["pass"] for r in reports),
    }
