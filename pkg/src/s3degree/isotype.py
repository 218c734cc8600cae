"""Isomorphism-type labels for subgroups and quotients.

Labels are normalized so that isomorphic groups get equal labels whenever
both are recognized: Cyclic(1) is Trivial, BinaryDihedralStar(1) is
Cyclic(4), QuaternionTimesCyclic(8, 1) is BinaryDihedralStar(2), TPrime(1) is
the binary tetrahedral group, DPrime(n', 2) is BinaryDihedralStar(n'), and a
product of coprime factors is split into a cyclic part times a core.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

from .groups import (
    FamilySpec,
    FiniteGroup,
    SubgroupHandle,
    build_group,
    center,
    commutator_subgroup,
    direct_product_group,
    is_isomorphic,
)

KINDS = (
    "Trivial",
    "Cyclic",
    "BinaryDihedralStar",
    "BinaryTetrahedralStar",
    "BinaryOctahedralStar",
    "BinaryIcosahedralStar",
    "QuaternionTimesCyclic",
    "TPrime",
    "DPrime",
    "DirectProduct",
    "Unrecognized",
)


@dataclass(frozen=True)
class IsoType:
    kind: str
    params: tuple = ()

    def __str__(self):
        k, p = self.kind, self.params
        if k == "Trivial":
            return "1"
        if k == "Cyclic":
            return f"Z_{p[0]}"
        if k == "BinaryDihedralStar":
            return f"D*_{4 * p[0]}"
        if k == "BinaryTetrahedralStar":
            return "T*_24"
        if k == "BinaryOctahedralStar":
            return "O*_48"
        if k == "BinaryIcosahedralStar":
            return "I*_120"
        if k == "QuaternionTimesCyclic":
            return f"Q8 x Z_{p[1]}"
        if k == "TPrime":
            return f"T'_{{8.3^{p[0]}}}"
        if k == "DPrime":
            return f"D'_{{{p[0]}.2^{p[1]}}}"
        if k == "DirectProduct":
            return f"{p[0]} x {p[1]}"
        return f"Unrecognized(order={p[0]})"

    @property
    def order(self) -> int:
        k, p = self.kind, self.params
        return {
            "Trivial": lambda: 1,
            "Cyclic": lambda: p[0],
            "BinaryDihedralStar": lambda: 4 * p[0],
            "BinaryTetrahedralStar": lambda: 24,
            "BinaryOctahedralStar": lambda: 48,
            "BinaryIcosahedralStar": lambda: 120,
            "QuaternionTimesCyclic": lambda: p[0] * p[1],
            "TPrime": lambda: 8 * 3 ** p[0],
            "DPrime": lambda: p[0] * 2 ** p[1],
            "DirectProduct": lambda: p[0].order * p[1].order,
            "Unrecognized": lambda: p[0],
        }[k]()


TRIVIAL = IsoType("Trivial")
BTS = IsoType("BinaryTetrahedralStar")
BOS = IsoType("BinaryOctahedralStar")
BIS = IsoType("BinaryIcosahedralStar")


def cyclic(k: int) -> IsoType:
    return TRIVIAL if k == 1 else IsoType("Cyclic", (k,))


def binary_dihedral(n: int) -> IsoType:
    return cyclic(4) if n == 1 else IsoType("BinaryDihedralStar", (n,))


def quaternion_times_cyclic(three_power: int) -> IsoType:
    return binary_dihedral(2) if three_power == 1 else IsoType("QuaternionTimesCyclic", (8, three_power))


def tprime(q: int) -> IsoType:
    return BTS if q == 1 else IsoType("TPrime", (q,))


def dprime(nprime: int, q: int) -> IsoType:
    if q == 2:
        return binary_dihedral(nprime)
    return IsoType("DPrime", (nprime, q))


def unrecognized(order: int, fingerprint) -> IsoType:
    return IsoType("Unrecognized", (order, fingerprint))


def _split(t: IsoType) -> tuple[int, IsoType]:
    """(c, core) with t = Z_c x core and core not cyclic (or trivial)."""
    if t.kind == "Trivial":
        return 1, TRIVIAL
    if t.kind == "Cyclic":
        return t.params[0], TRIVIAL
    if t.kind == "QuaternionTimesCyclic":
        return t.params[1], binary_dihedral(2)
    if t.kind == "DirectProduct":
        c1, k1 = _split(t.params[0])
        c2, k2 = _split(t.params[1])
        if k1 != TRIVIAL and k2 != TRIVIAL:
            return c1 * c2, IsoType("DirectProduct", (k1, k2))
        return c1 * c2, k1 if k2 == TRIVIAL else k2
    return 1, t


def direct_product(a: IsoType, b: IsoType) -> IsoType:
    """Label of a x b for factors of coprime order, in canonical form."""
    if math.gcd(a.order, b.order) != 1:
        raise ValueError("direct_product labels need coprime factor orders")
    c1, k1 = _split(a)
    c2, k2 = _split(b)
    c = c1 * c2
    if k1 != TRIVIAL and k2 != TRIVIAL:
        core = IsoType("DirectProduct", tuple(sorted((k1, k2), key=str)))
    else:
        core = k1 if k2 == TRIVIAL else k2
    if core == TRIVIAL:
        return cyclic(c)
    if c == 1:
        return core
    if core == binary_dihedral(2) and _is_power_of_three(c):
        return quaternion_times_cyclic(c)
    return IsoType("DirectProduct", (cyclic(c), core))


def _is_power_of_three(c: int) -> bool:
    while c % 3 == 0:
        c //= 3
    return c == 1


def spec_iso_type(spec: FamilySpec) -> IsoType:
    f = spec.family
    if f == "CyclicZp":
        return cyclic(spec.p)
    if f == "BinaryDihedral":
        return binary_dihedral(spec.n)
    if f == "BinaryTetrahedral":
        return BTS
    if f == "BinaryOctahedral":
        return BOS
    if f == "BinaryIcosahedral":
        return BIS
    if f == "TPrime":
        return tprime(spec.q)
    if f == "DPrime":
        if spec.q == 1:
            return IsoType("DPrime", (spec.nprime, 1))
        return dprime(spec.nprime, spec.q)
    return direct_product(cyclic(spec.m), spec_iso_type(spec.inner))


# ---------------------------------------------------------------------------
# Recognition


def fingerprint(g: FiniteGroup) -> tuple:
    hist = tuple(sorted(Counter(g.orders.tolist()).items()))
    return (g.order, g.is_abelian, hist, center(g).order, commutator_subgroup(g).order)


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _base_labels(order: int) -> list[IsoType]:
    out = []
    if order % 4 == 0 and order >= 8:
        out.append(binary_dihedral(order // 4))
    out += {24: [BTS], 48: [BOS], 120: [BIS]}.get(order, [])
    if order % 8 == 0:
        t, q = order // 8, 0
        while t % 3 == 0:
            t, q = t // 3, q + 1
        if t == 1 and q >= 2:
            out.append(tprime(q))
    q, t = 0, order
    while t % 2 == 0:
        t, q = t // 2, q + 1
    if t >= 3 and q != 2 and q >= 1:
        out.append(IsoType("DPrime", (t, q)))
    return out


def candidate_labels(order: int) -> list[IsoType]:
    seen: dict[IsoType, None] = {}
    for c in _divisors(order):
        if math.gcd(c, order // c) != 1:
            continue
        for base in _base_labels(order // c):
            lab = direct_product(cyclic(c), base)
            if lab.kind not in ("Cyclic", "Trivial"):
                seen.setdefault(lab, None)
    return list(seen)


@lru_cache(maxsize=None)
def reference_group(t: IsoType) -> FiniteGroup:
    """A concrete group carrying the label ``t``."""
    k, p = t.kind, t.params
    if k == "Trivial":
        return build_group(FamilySpec.cyclic(1))
    if k == "Cyclic":
        return build_group(FamilySpec.cyclic(p[0]))
    if k == "BinaryDihedralStar":
        return build_group(FamilySpec.binary_dihedral(p[0]), method="normal")
    if k == "BinaryTetrahedralStar":
        return build_group(FamilySpec.binary_tetrahedral())
    if k == "BinaryOctahedralStar":
        return build_group(FamilySpec.binary_octahedral())
    if k == "BinaryIcosahedralStar":
        return build_group(FamilySpec.binary_icosahedral())
    if k == "TPrime":
        return build_group(FamilySpec.tprime(p[0]))
    if k == "DPrime":
        return build_group(FamilySpec.dprime(p[0], p[1]))
    if k == "QuaternionTimesCyclic":
        return direct_product_group(reference_group(cyclic(p[1])), reference_group(binary_dihedral(2)))
    if k == "DirectProduct":
        return direct_product_group(reference_group(p[0]), reference_group(p[1]))
    raise ValueError(f"no reference group for {t}")


@lru_cache(maxsize=None)
def _reference_fingerprint(t: IsoType) -> tuple:
    return fingerprint(reference_group(t))


def recognize(g: FiniteGroup) -> IsoType:
    n = g.order
    if n == 1:
        return TRIVIAL
    if int(g.orders.max()) == n:
        return cyclic(n)
    fp = fingerprint(g)
    for lab in candidate_labels(n):
        if _reference_fingerprint(lab) != fp:
            continue
        if is_isomorphic(reference_group(lab), g):
            return lab
    return unrecognized(n, fp)


# values keep the parent alive so its id() cannot be recycled
_SUBGROUP_CACHE: dict[tuple[int, tuple[int, ...]], tuple[FiniteGroup, IsoType]] = {}


def iso_type(obj: FiniteGroup | SubgroupHandle) -> IsoType:
    """Recognize a group or subgroup; subgroup results are cached per member set."""
    if isinstance(obj, FiniteGroup):
        return recognize(obj)
    key = (id(obj.parent), obj.members)
    entry = _SUBGROUP_CACHE.get(key)
    if entry is None:
        if obj.order == 1:
            hit = TRIVIAL
        elif obj.order == obj.parent.order and obj.parent.spec is not None:
            hit = spec_iso_type(obj.parent.spec)
        else:
            hit = recognize(obj.as_group)
        entry = _SUBGROUP_CACHE[key] = (obj.parent, hit)
    return entry[1]
