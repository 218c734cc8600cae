"""Explicit equivariant self-maps of S^3 and a numerical Brouwer-degree oracle.

A map is a pair of polynomials in (z1, conj z1, z2, conj z2), stored as lists
of monomials ``(coef, a, b, c, d) = coef * z1^a * conj(z1)^b * z2^c * conj(z2)^d``,
followed by radial projection back to the sphere.  Derivatives are exact
(Wirtinger calculus on the monomials), so orientation signs do not depend on
finite-difference steps.

Points of S^3 are identified with SU(2) via (z1, z2) -> [[z1, z2], [-conj z2, conj z1]]
and a group element G acts by left multiplication; the cyclic family instead
uses its own diagonal action (zeta z1, zeta^q z2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .groups import FamilySpec, FiniteGroup, build_group, mat_to_complex

Monomial = tuple[complex, int, int, int, int]

NORM_TOL = 1e-12


class ProjectionUndefined(ValueError):
    def __init__(self, point):
        super().__init__(f"map vanishes at {point}; radial projection undefined")
        self.point = point


@dataclass(frozen=True)
class SpherePoint:
    z1: complex
    z2: complex

    def __post_init__(self):
        n = abs(self.z1) ** 2 + abs(self.z2) ** 2
        if abs(n - 1) > NORM_TOL:
            raise ValueError(f"|z1|^2 + |z2|^2 = {n}, not on S^3")

    @classmethod
    def normalized(cls, z1: complex, z2: complex) -> SpherePoint:
        r = math.sqrt(abs(z1) ** 2 + abs(z2) ** 2)
        return cls(z1 / r, z2 / r)

    def as_real(self) -> np.ndarray:
        return np.array([self.z1.real, self.z1.imag, self.z2.real, self.z2.imag])

    @classmethod
    def from_real(cls, x) -> SpherePoint:
        return cls.normalized(complex(x[0], x[1]), complex(x[2], x[3]))


def _to_complex(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return x[..., 0] + 1j * x[..., 1], x[..., 2] + 1j * x[..., 3]


def _to_real(z1, z2) -> np.ndarray:
    return np.stack([z1.real, z1.imag, z2.real, z2.imag], axis=-1)


def random_sphere(rng, count: int) -> np.ndarray:
    x = rng.normal(size=(count, 4))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


# ---------------------------------------------------------------------------
# Maps


@dataclass
class EquivariantMap:
    case: str
    params: dict
    components: tuple[list[Monomial], list[Monomial]]
    spec: FamilySpec  # whose group acts on source and target
    phi: dict[str, list[tuple[str, int]]]  # generator -> word of its image, as (label, exponent)

    @property
    def name(self) -> str:
        args = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.case}({args})"

    def raw(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Pre-projection values (w1, w2) at real points x of shape (..., 4)."""
        z1, z2 = _to_complex(x)
        c1, c2 = np.conj(z1), np.conj(z2)
        out = []
        for comp in self.components:
            w = np.zeros(z1.shape, dtype=complex)
            for coef, a, b, c, d in comp:
                w = w + coef * z1**a * c1**b * z2**c * c2**d
            out.append(w)
        return out[0], out[1]

    def raw_real(self, x: np.ndarray) -> np.ndarray:
        return _to_real(*self.raw(x))

    def jacobian(self, x: np.ndarray) -> np.ndarray:
        """Real 4x4 Jacobian of the pre-projection map at points x (..., 4)."""
        z1, z2 = _to_complex(x)
        c1, c2 = np.conj(z1), np.conj(z2)
        J = np.zeros(x.shape[:-1] + (4, 4))
        for j, comp in enumerate(self.components):
            d1 = np.zeros(z1.shape, dtype=complex)
            db1, d2, db2 = d1.copy(), d1.copy(), d1.copy()
            for coef, a, b, c, d in comp:
                if a:
                    d1 = d1 + a * coef * z1 ** (a - 1) * c1**b * z2**c * c2**d
                if b:
                    db1 = db1 + b * coef * z1**a * c1 ** (b - 1) * z2**c * c2**d
                if c:
                    d2 = d2 + c * coef * z1**a * c1**b * z2 ** (c - 1) * c2**d
                if d:
                    db2 = db2 + d * coef * z1**a * c1**b * z2**c * c2 ** (d - 1)
            # d/dx = dz + dzbar, d/dy = i (dz - dzbar)
            cols = (d1 + db1, 1j * (d1 - db1), d2 + db2, 1j * (d2 - db2))
            for k, col in enumerate(cols):
                J[..., 2 * j, k] = col.real
                J[..., 2 * j + 1, k] = col.imag
        return J

    def __call__(self, x: np.ndarray) -> np.ndarray:
        """pi o f at real points (..., 4)."""
        w = self.raw_real(np.asarray(x, dtype=float))
        nrm = np.linalg.norm(w, axis=-1, keepdims=True)
        bad = nrm[..., 0] <= NORM_TOL
        if np.any(bad):
            raise ProjectionUndefined(np.asarray(x)[bad][0])
        return w / nrm


def eval_map(m: EquivariantMap, x: SpherePoint) -> SpherePoint:
    return SpherePoint.from_real(m(x.as_real()[None, :])[0])


def case_i(k: int, p: int = 5, lens_q: int = 1) -> EquivariantMap:
    return EquivariantMap("CaseI", {"k": k, "p": p, "q": lens_q},
                          ([(1, k, 0, 0, 0)], [(1, 0, 0, k, 0)]),
                          FamilySpec.cyclic(p, lens_q), {"a": [("a", k)]})


def case_ii_kernel_half(n: int) -> EquivariantMap:
    if n % 2:
        raise ValueError("the kernel-half construction needs even n")
    comps = ([(1, n, 0, 0, 0), (1, 0, 0, 0, n)], [(1, 1, 0, n - 1, 0), (-1, 0, n - 1, 0, 1)])
    return EquivariantMap("CaseII_KernelHalf", {"n": n}, comps, FamilySpec.binary_dihedral(n),
                          {"a": [], "b": [("b", n)]})


def case_ii_kernel_z2n(n: int) -> EquivariantMap:
    m = 2 * n
    comps = ([(1, m, 0, 0, 0), (-1, 0, 0, 0, m)], [(1, 1, 0, m - 1, 0), (1, 0, m - 1, 0, 1)])
    return EquivariantMap("CaseII_KernelZ2n", {"n": n}, comps, FamilySpec.binary_dihedral(n),
                          {"a": [("b", n)], "b": []})


def case_ii_odd_power(d: int, n: int | None = None) -> EquivariantMap:
    if d % 2 == 0:
        raise ValueError("odd power map needs odd d")
    n = n or d
    return EquivariantMap("CaseII_OddPower", {"d": d, "n": n},
                          ([(1, d, 0, 0, 0)], [(1, 0, 0, d, 0)]),
                          FamilySpec.binary_dihedral(n), {"a": [("a", 1)], "b": [("b", d)]})


def case_iii() -> EquivariantMap:
    zeta8 = complex(math.cos(math.pi / 4), math.sin(math.pi / 4))
    comps = ([(1, 4, 0, 0, 0), (1, 0, 0, 0, 4), (2j, 2, 0, 0, 2)],
             [(2 * math.sqrt(2) * zeta8, 0, 2, 2, 0)])
    return EquivariantMap("CaseIII", {}, comps, FamilySpec.binary_tetrahedral(),
                          {"a": [], "b": [("b", 2)]})


MAP_FACTORIES = {
    "CaseI": case_i,
    "CaseII_KernelHalf": case_ii_kernel_half,
    "CaseII_KernelZ2n": case_ii_kernel_z2n,
    "CaseII_OddPower": case_ii_odd_power,
    "CaseIII": case_iii,
}


# ---------------------------------------------------------------------------
# Group actions


def act(group: FiniteGroup, element: int, x: np.ndarray) -> np.ndarray:
    """Floating-point action of a group element on real points of S^3."""
    mat = element_matrix(group, element)
    z1, z2 = _to_complex(x)
    if group.action == "diagonal":
        return _to_real(mat[0, 0] * z1, mat[1, 1] * z2)
    g11, g12 = mat[0, 0], mat[0, 1]
    return _to_real(g11 * z1 - g12 * np.conj(z2), g11 * z2 + g12 * np.conj(z1))


def element_matrix(group: FiniteGroup, element: int) -> np.ndarray:
    mats = getattr(group, "element_matrices", None)
    if mats is None:
        raise ValueError(f"{group.name} was not built from matrices")
    return mat_to_complex(mats[element])


def _word_element(group: FiniteGroup, word: list[tuple[str, int]]) -> int:
    return group.product(*(group.power(group.generator(l), e) for l, e in word))


@dataclass
class EquivarianceReport:
    map_name: str
    samples: int
    tol: float
    deviations: dict[str, float]

    @property
    def max_deviation(self) -> float:
        return max(self.deviations.values())

    @property
    def passed(self) -> bool:
        return self.max_deviation < self.tol

    def to_dict(self) -> dict:
        return {"map": self.map_name, "samples": self.samples, "tol": self.tol,
                "deviations": self.deviations, "max_deviation": self.max_deviation,
                "passed": self.passed}


def check_equivariance(m: EquivariantMap, spec: FamilySpec | None = None, samples: int = 10_000,
                       tol: float = 1e-10, seed: int = 0) -> EquivarianceReport:
    """max |f(g x) - phi(g) f(x)| over random x, for each generator g."""
    spec = spec or m.spec
    if spec.family != m.spec.family:
        raise ValueError(f"{m.case} is equivariant for {m.spec.family}, not {spec.family}")
    g = build_group(spec, method="matrix")
    rng = np.random.default_rng(seed)
    x = random_sphere(rng, samples)
    fx = m(x)
    dev = {}
    for label in g.generator_labels:
        gx = act(g, g.generator(label), x)
        target = act(g, _word_element(g, m.phi[label]), fx)
        dev[label] = float(np.abs(m(gx) - target).max())
    return EquivarianceReport(m.name, samples, tol, dev)


# ---------------------------------------------------------------------------
# Degree by signed preimage counting


@dataclass
class TargetResult:
    target: list[float]
    preimages: int
    signed: int
    min_abs_det: float
    dedup_margin: float
    seeds: int
    rounds: int

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class DegreeResult:
    map_name: str
    degree: int | None
    targets: list[TargetResult] = field(default_factory=list)
    rejected_targets: int = 0
    note: str = ""

    @property
    def inconclusive(self) -> bool:
        return self.degree is None

    def to_dict(self) -> dict:
        return {"map": self.map_name,
                "degree": self.degree if self.degree is not None else "inconclusive",
                "per_target": [t.to_dict() for t in self.targets],
                "rejected_targets": self.rejected_targets, "note": self.note}


def _newton(m: EquivariantMap, y: np.ndarray, x: np.ndarray, iters: int) -> tuple[np.ndarray, np.ndarray]:
    """Solve F(x) = lam y, |x| = 1 with lam > 0 by damped Gauss-Newton on the 5x5 system."""
    lam = np.maximum(m.raw_real(x) @ y, 1e-3)
    eye = np.eye(5)
    for _ in range(iters):
        V, J = m.raw_real(x), m.jacobian(x)
        R = np.concatenate([V - lam[:, None] * y, ((x * x).sum(1) - 1)[:, None]], axis=1)
        M = np.zeros((len(x), 5, 5))
        M[:, :4, :4] = J
        M[:, :4, 4] = -y
        M[:, 4, :4] = 2 * x
        Mt = np.transpose(M, (0, 2, 1))
        d = np.linalg.solve(Mt @ M + 1e-13 * eye, (Mt @ -R[..., None]))[..., 0]
        step = np.minimum(1.0, 0.5 / np.maximum(np.linalg.norm(d, axis=1), 1e-300))
        x = x + step[:, None] * d[:, :4]
        lam = lam + step * d[:, 4]
    V = m.raw_real(x)
    res = np.linalg.norm(np.concatenate([V - lam[:, None] * y, ((x * x).sum(1) - 1)[:, None]], axis=1), axis=1)
    ok = (res < 1e-12) & (lam > 0)
    return x[ok], lam[ok]


def _dedup(sols: list[np.ndarray], new: np.ndarray, radius: float) -> int:
    added = 0
    for p in new:
        if all(np.linalg.norm(p - s) > radius for s in sols):
            sols.append(p)
            added += 1
    return added


def _orientation(m: EquivariantMap, y: np.ndarray, sols: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Orientation signs of pi o f at each solution and |det| of its tangent map."""
    J = m.jacobian(sols)
    lam = np.linalg.norm(m.raw_real(sols), axis=1)
    signs, dets = [], []
    for x, Jx, l in zip(sols, J, lam):
        Q, _ = np.linalg.qr(np.column_stack([x, np.eye(4)]))
        T = Q[:, 1:4]
        s_src = np.sign(np.linalg.det(np.column_stack([x, T])))
        det_img = np.linalg.det(np.column_stack([y, Jx @ T])) / l**3
        signs.append(s_src * np.sign(det_img))
        dets.append(abs(det_img))
    return np.array(signs), np.array(dets)


def numeric_degree(m: EquivariantMap, targets: int = 5, starts: int = 20_000, seed: int = 0,
                   iters: int = 60, max_rounds: int = 6, dedup: float = 1e-8,
                   det_floor: float = 1e-6) -> DegreeResult:
    """Brouwer degree of pi o f as a signed preimage count, agreed across targets.

    Seeds are added in rounds (``starts``, then doubling the running total)
    until two consecutive rounds find no new preimage.  Targets with a
    near-critical preimage are resampled.  Disagreement between targets, or
    failure to stabilize within ``max_rounds``, makes the result inconclusive.
    """
    rng = np.random.default_rng(seed)
    results: list[TargetResult] = []
    rejected = 0
    while len(results) < targets:
        if rejected > 10 * targets:
            return DegreeResult(m.name, None, results, rejected, "too many near-critical targets")
        y = random_sphere(rng, 1)[0]
        sols: list[np.ndarray] = []
        quiet, total, rnd, batch = 0, 0, 0, starts
        while quiet < 2 and rnd < max_rounds:
            found, _ = _newton(m, y, random_sphere(rng, batch), iters)
            quiet = quiet + 1 if _dedup(sols, found, dedup) == 0 else 0
            total += batch
            rnd += 1
            batch = total
        if quiet < 2:
            return DegreeResult(m.name, None, results, rejected,
                                f"preimage search did not stabilize within {max_rounds} rounds")
        pts = np.array(sols).reshape(-1, 4)
        if len(pts):
            signs, dets = _orientation(m, y, pts)
            if dets.min() < det_floor:
                rejected += 1
                continue
            gaps = [np.linalg.norm(p - q) for i, p in enumerate(pts) for q in pts[i + 1:]]
            results.append(TargetResult(y.tolist(), len(pts), int(signs.sum()), float(dets.min()),
                                        float(min(gaps)) if gaps else math.inf, total, rnd))
        else:
            results.append(TargetResult(y.tolist(), 0, 0, math.inf, math.inf, total, rnd))
    degs = {r.signed for r in results}
    if len(degs) != 1:
        return DegreeResult(m.name, None, results, rejected, "targets disagree")
    return DegreeResult(m.name, degs.pop(), results, rejected)
