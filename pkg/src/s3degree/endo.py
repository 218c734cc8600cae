"""Enumeration of all endomorphisms of a small group and kernel bookkeeping."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .groups import (
    FamilySpec,
    FiniteGroup,
    SubgroupHandle,
    build_group,
    homomorphisms,
    is_homomorphism,
    minimal_generating_set,
)
from .isotype import (
    BTS,
    TRIVIAL,
    IsoType,
    binary_dihedral,
    cyclic,
    direct_product,
    iso_type,
    quaternion_times_cyclic,
    spec_iso_type,
)


@dataclass(eq=False)
class Endomorphism:
    group: FiniteGroup
    images: np.ndarray

    def __post_init__(self):
        self.images = np.asarray(self.images, dtype=np.int32)
        self.images.flags.writeable = False

    def __call__(self, x: int) -> int:
        return int(self.images[x])

    def __eq__(self, other):
        return isinstance(other, Endomorphism) and np.array_equal(self.images, other.images)

    def __hash__(self):
        return hash(self.images.tobytes())

    def compose(self, other: Endomorphism) -> Endomorphism:
        """self o other."""
        return Endomorphism(self.group, self.images[other.images])

    @cached_property
    def kernel(self) -> SubgroupHandle:
        return SubgroupHandle(self.group, tuple(np.flatnonzero(self.images == self.group.identity)))

    @cached_property
    def image(self) -> SubgroupHandle:
        return SubgroupHandle(self.group, tuple(np.unique(self.images)))

    @property
    def is_automorphism(self) -> bool:
        return self.kernel.order == 1

    @property
    def is_trivial(self) -> bool:
        return self.kernel.order == self.group.order

    @property
    def kernel_type(self) -> IsoType:
        return iso_type(self.kernel)

    def generator_images(self) -> dict[str, int]:
        g = self.group
        return {lab: self(x) for lab, x in zip(g.generator_labels, g.generators)}

    def describe(self) -> str:
        g = self.group
        return ", ".join(f"{lab} -> {g.word(self(x))}" for lab, x in zip(g.generator_labels, g.generators))


@dataclass
class EndoCensus:
    group: FiniteGroup
    endomorphisms: list[Endomorphism]
    generators_used: list[int]

    @property
    def spec(self) -> FamilySpec | None:
        return self.group.spec

    def __len__(self):
        return len(self.endomorphisms)

    @cached_property
    def matrix(self) -> np.ndarray:
        return np.stack([e.images for e in self.endomorphisms])

    @cached_property
    def automorphisms(self) -> list[Endomorphism]:
        return [e for e in self.endomorphisms if e.is_automorphism]

    def by_kernel_type(self) -> dict[IsoType, list[Endomorphism]]:
        out: dict[IsoType, list[Endomorphism]] = {}
        for e in self.endomorphisms:
            if not (e.is_automorphism or e.is_trivial):
                out.setdefault(e.kernel_type, []).append(e)
        return out

    def image_set(self) -> set[bytes]:
        return {e.images.tobytes() for e in self.endomorphisms}


def enumerate_endomorphisms(g: FiniteGroup, gens: Sequence[int] | None = None) -> EndoCensus:
    """Every endomorphism of ``g``, deduplicated and in lexicographic order."""
    gens = list(gens) if gens is not None else minimal_generating_set(g)
    if len(gens) > 3:
        raise ValueError(f"{len(gens)} generators; the enumeration supports at most 3")
    phis = homomorphisms(g, g, gens)
    phis = np.unique(phis, axis=0)
    for row in phis:
        if not is_homomorphism(g, g, row):  # pragma: no cover - guarded by the edge test
            raise RuntimeError("enumerated map fails the full Cayley check")
    return EndoCensus(g, [Endomorphism(g, row) for row in phis], gens)


@dataclass
class KernelCensus:
    automorphisms: int
    trivial_maps: int
    proper: dict[IsoType, int]

    def to_dict(self) -> dict:
        return {
            "Trivial (automorphisms)": self.automorphisms,
            "Full (trivial map)": self.trivial_maps,
            **{str(k): v for k, v in sorted(self.proper.items(), key=lambda kv: str(kv[0]))},
        }


def kernel_census(census: EndoCensus) -> KernelCensus:
    proper = Counter()
    autos = trivial = 0
    for e in census.endomorphisms:
        if e.is_automorphism:
            autos += 1
        elif e.is_trivial:
            trivial += 1
        else:
            proper[e.kernel_type] += 1
    return KernelCensus(autos, trivial, dict(proper))


# ---------------------------------------------------------------------------
# Expected kernel rows


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def expected_kernel_row(spec: FamilySpec) -> set[IsoType]:
    """Proper non-trivial kernel types of the expected classification row."""
    f = spec.family
    full = spec_iso_type(spec)
    out: set[IsoType] = set()
    if f == "CyclicZp":
        out = {cyclic(d) for d in _divisors(spec.p)}
    elif f == "BinaryDihedral":
        n = spec.n
        out.add(cyclic(2 * n))
        if n % 2 == 0:
            out.add(binary_dihedral(n // 2))
        out |= {cyclic(h) for h in _divisors(n) if h % 2 == 1 and h > 1}
    elif f == "BinaryTetrahedral":
        out = {binary_dihedral(2)}
    elif f == "BinaryOctahedral":
        out = {BTS}
    elif f == "BinaryIcosahedral":
        out = set()
    elif f == "TPrime":
        out = {quaternion_times_cyclic(3 ** (spec.q - p)) for p in range(1, spec.q + 1)}
    elif f == "DPrime":
        nn, q = spec.nprime, spec.q
        out = {cyclic(nn * 2 ** (q - p)) for p in range(1, q + 1)}
        out |= {cyclic(nn // d * 2**q) for d in _divisors(nn) if d > 1}
    elif f == "ProductZmG":
        inner = expected_kernel_row(spec.inner) | {TRIVIAL, spec_iso_type(spec.inner)}
        out = {direct_product(cyclic(d), h) for d in _divisors(spec.m) for h in inner}
    return {t for t in out if t != TRIVIAL and t != full}


# ---------------------------------------------------------------------------
# Verification


RELATION_LEVELS = ("one-sided", "inner", "two-sided", "kernel-orbit")
PASSING_LEVELS = RELATION_LEVELS[:3]


@dataclass
class ClassRelation:
    kernel_type: IsoType
    count: int
    level: str  # weakest relation needed inside the class, or "failed"
    failures: int = 0

    @property
    def passed(self) -> bool:
        return self.level in PASSING_LEVELS

    def to_dict(self) -> dict:
        return {"kernel_type": str(self.kernel_type), "count": self.count,
                "level": self.level, "passed": self.passed, "failures": self.failures}


@dataclass
class VerificationReport:
    spec: FamilySpec
    expected: set[IsoType]
    observed: set[IsoType]
    kernel_counts: KernelCensus
    relations: list[ClassRelation] = field(default_factory=list)

    @property
    def missing(self) -> set[IsoType]:
        return self.expected - self.observed

    @property
    def unexpected(self) -> set[IsoType]:
        return self.observed - self.expected

    @property
    def kernel_check(self) -> bool:
        return self.expected == self.observed

    @property
    def relation_check(self) -> bool:
        return all(r.passed for r in self.relations)

    @property
    def ok(self) -> bool:
        return self.kernel_check and self.relation_check

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "kernel_check": self.kernel_check,
            "relation_check": self.relation_check,
            "expected": sorted(map(str, self.expected)),
            "observed": sorted(map(str, self.observed)),
            "missing": sorted(map(str, self.missing)),
            "unexpected": sorted(map(str, self.unexpected)),
            "kernel_counts": self.kernel_counts.to_dict(),
            "classes": [r.to_dict() for r in self.relations],
        }


def _relation_level(g: FiniteGroup, autos: np.ndarray, members: np.ndarray) -> tuple[str, int]:
    """Weakest relation of each member phi2 to phi1 = members[0].

    Levels, strongest first: phi2 = phi1 o alpha; phi2 = c_g o phi1 o alpha
    with c_g inner; phi2 = beta o phi1 o alpha; and finally only
    ker phi2 = alpha^-1(ker phi1), so phi2 differs from phi1 o alpha by an
    isomorphism between the images that need not extend to the group.
    """
    rep = members[0]
    orbit = {row.tobytes() for row in rep[autos]}
    ker1 = np.flatnonzero(rep == g.identity)
    ker_orbit = {np.sort(np.flatnonzero(np.isin(a, ker1))).tobytes() for a in autos}
    inv = g.inverses
    ar = np.arange(g.order)
    worst, failures = 0, 0
    for phi in members:
        if phi.tobytes() in orbit:
            continue
        conj = g.cayley[g.cayley[ar[:, None], phi[None, :]], inv[:, None]]
        if any(row.tobytes() in orbit for row in conj):
            worst = max(worst, 1)
        elif any(row.tobytes() in orbit for row in autos[:, phi]):
            worst = max(worst, 2)
        elif np.flatnonzero(phi == g.identity).tobytes() in ker_orbit:
            worst = max(worst, 3)
        else:
            failures += 1
    return ("failed" if failures else RELATION_LEVELS[worst]), failures


def verify_kernels(spec: FamilySpec, census: EndoCensus | None = None) -> VerificationReport:
    """Compare observed kernel types with the predicted row and relate maps within each class.

    Two endomorphisms with the same kernel type pass the relation check when
    one is obtained from the other by precomposing with an automorphism, up
    to postcomposing with an automorphism (inner conjugation is reported
    separately as a finer level).
    """
    if census is None:
        census = enumerate_endomorphisms(build_group(spec))
    kc = kernel_census(census)
    classes = census.by_kernel_type()
    autos = np.stack([e.images for e in census.automorphisms])
    rels = []
    for t, members in sorted(classes.items(), key=lambda kv: str(kv[0])):
        mat = np.stack([e.images for e in members])
        level, fails = _relation_level(census.group, autos, mat)
        rels.append(ClassRelation(t, len(members), level, fails))
    return VerificationReport(spec, expected_kernel_row(spec), set(classes), kc, rels)


def verify_endo_properties(census: EndoCensus, pairs: int | None = None, seed: int = 0) -> dict:
    """Closure under composition, |ker| |im| = |G|, and independence of the generating set."""
    g = census.group
    mats = census.matrix
    keys = census.image_set()
    rng = np.random.default_rng(seed)
    k = len(mats)
    if pairs is None or pairs >= k * k:
        idx = [(i, j) for i in range(k) for j in range(k)]
    else:
        idx = [tuple(x) for x in rng.integers(0, k, size=(pairs, 2))]
    closure = all(mats[i][mats[j]].tobytes() in keys for i, j in idx)
    order_law = all(e.kernel.order * e.image.order == g.order for e in census.endomorphisms)
    alt_gens = _alternative_generators(g, census.generators_used, rng)
    alt = enumerate_endomorphisms(g, alt_gens)
    return {
        "closure": closure,
        "kernel_image_orders": order_law,
        "generating_set_invariance": alt.image_set() == keys,
        "alternative_generators": alt_gens,
        "count": k,
    }


def _alternative_generators(g: FiniteGroup, gens: Sequence[int], rng) -> list[int]:
    """A different generating set of the same size: a Nielsen move, then conjugation by a random element."""
    gens = list(gens)
    if len(gens) >= 2:
        gens[0] = g.mul(gens[0], gens[1])
    else:
        o = int(g.orders[gens[0]])
        u = next((u for u in range(2, o) if math.gcd(u, o) == 1), 1)
        gens[0] = g.power(gens[0], u)
    x = int(rng.integers(0, g.order))
    return [g.product(x, s, g.inv(x)) for s in gens]
