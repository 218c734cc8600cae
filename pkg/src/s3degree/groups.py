"""Finite fundamental groups of spherical 3-manifolds as explicit Cayley tables.

Eight families are supported:

================  =====================================  ===============
tag               group                                  construction
================  =====================================  ===============
CyclicZp          Z_p                                    residues
BinaryDihedral    D*_{4n}                                2x2 matrices over Q(zeta_2n), cross-checked by normal form
BinaryTetrahedral T*_24                                  2x2 matrices over Q(i)
BinaryOctahedral  O*_48                                  2x2 matrices over Q(zeta_8)
BinaryIcosahedral I*_120                                 2x2 matrices over Q(zeta_20)
TPrime            T'_{8.3^q} = Q8 x| Z_{3^q}             normal form
DPrime            D'_{n'.2^q} = Z_{n'} x| Z_{2^q}        normal form
ProductZmG        Z_m x G, gcd(m, |G|) = 1               pairs
================  =====================================  ===============

Elements are numbered in breadth-first order over right multiplication by the
generators (identity first), so every table is reproducible for a fixed spec.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from .cyclo import (
    CycloNum,
    cyc_conj,
    cyc_from_rational,
    cyc_make_root,
    cyc_one,
    cyc_zero,
)

DEFAULT_ORDER_CAP = 4000
ORDER_CAP_ENV = "S3DEGREE_ORDER_CAP"

FAMILIES = (
    "CyclicZp",
    "BinaryDihedral",
    "BinaryTetrahedral",
    "BinaryOctahedral",
    "BinaryIcosahedral",
    "TPrime",
    "DPrime",
    "ProductZmG",
)


class SpecError(ValueError):
    """A FamilySpec violates its parameter constraints."""


class OrderCapExceeded(RuntimeError):
    pass


class ConstructionError(RuntimeError):
    """Generators failed a presentation relation or the closure has the wrong order."""


def default_order_cap() -> int:
    raw = os.environ.get(ORDER_CAP_ENV)
    return int(raw) if raw else DEFAULT_ORDER_CAP


# ---------------------------------------------------------------------------
# Family descriptors


@dataclass(frozen=True)
class FamilySpec:
    family: str
    p: int | None = None
    lens_q: int = 1
    n: int | None = None
    q: int | None = None
    nprime: int | None = None
    m: int | None = None
    inner: FamilySpec | None = None

    # constructors -----------------------------------------------------------
    @classmethod
    def cyclic(cls, p: int, lens_q: int = 1) -> FamilySpec:
        return cls("CyclicZp", p=p, lens_q=lens_q).validated()

    @classmethod
    def binary_dihedral(cls, n: int) -> FamilySpec:
        return cls("BinaryDihedral", n=n).validated()

    @classmethod
    def binary_tetrahedral(cls) -> FamilySpec:
        return cls("BinaryTetrahedral")

    @classmethod
    def binary_octahedral(cls) -> FamilySpec:
        return cls("BinaryOctahedral")

    @classmethod
    def binary_icosahedral(cls) -> FamilySpec:
        return cls("BinaryIcosahedral")

    @classmethod
    def tprime(cls, q: int) -> FamilySpec:
        return cls("TPrime", q=q).validated()

    @classmethod
    def dprime(cls, nprime: int, q: int) -> FamilySpec:
        return cls("DPrime", nprime=nprime, q=q).validated()

    @classmethod
    def product(cls, m: int, inner: FamilySpec) -> FamilySpec:
        return cls("ProductZmG", m=m, inner=inner).validated()

    # -------------------------------------------------------------------------
    def validated(self) -> FamilySpec:
        f = self.family
        if f not in FAMILIES:
            raise SpecError(f"unknown family {f!r}")
        if f == "CyclicZp":
            if self.p is None or self.p < 1:
                raise SpecError("CyclicZp needs p >= 1")
            if math.gcd(self.lens_q, self.p) != 1:
                raise SpecError("lens parameter q must be coprime to p")
        elif f == "BinaryDihedral":
            if self.n is None or self.n < 1:
                raise SpecError("BinaryDihedral needs n >= 1")
        elif f == "TPrime":
            if self.q is None or self.q < 1:
                raise SpecError("TPrime needs q >= 1")
        elif f == "DPrime":
            if self.nprime is None or self.nprime < 3 or self.nprime % 2 == 0:
                raise SpecError("DPrime needs odd n' >= 3")
            if self.q is None or self.q < 1:
                raise SpecError("DPrime needs q >= 1")
        elif f == "ProductZmG":
            if self.inner is None:
                raise SpecError("ProductZmG needs an inner family")
            if self.inner.family == "ProductZmG":
                raise SpecError("ProductZmG inner family cannot itself be a product")
            self.inner.validated()
            if self.m is None or self.m < 2:
                raise SpecError("ProductZmG needs m >= 2")
            if math.gcd(self.m, self.inner.expected_order()) != 1:
                raise SpecError("ProductZmG needs gcd(m, |G|) = 1")
        return self

    def expected_order(self) -> int:
        f = self.family
        if f == "CyclicZp":
            return self.p
        if f == "BinaryDihedral":
            return 4 * self.n
        if f == "BinaryTetrahedral":
            return 24
        if f == "BinaryOctahedral":
            return 48
        if f == "BinaryIcosahedral":
            return 120
        if f == "TPrime":
            return 8 * 3**self.q
        if f == "DPrime":
            return self.nprime * 2**self.q
        return self.m * self.inner.expected_order()

    def label(self) -> str:
        f = self.family
        if f == "CyclicZp":
            return f"Z_{self.p}" + (f" (lens q={self.lens_q})" if self.lens_q != 1 else "")
        if f == "BinaryDihedral":
            return f"D*_{4 * self.n}"
        if f == "BinaryTetrahedral":
            return "T*_24"
        if f == "BinaryOctahedral":
            return "O*_48"
        if f == "BinaryIcosahedral":
            return "I*_120"
        if f == "TPrime":
            return f"T'_{{8.3^{self.q}}}"
        if f == "DPrime":
            return f"D'_{{{self.nprime}.2^{self.q}}}"
        return f"Z_{self.m} x {self.inner.label()}"

    def to_dict(self) -> dict:
        d: dict = {"family": self.family}
        for key in ("p", "n", "q", "nprime", "m"):
            val = getattr(self, key)
            if val is not None:
                d[key] = val
        if self.family == "CyclicZp" and self.lens_q != 1:
            d["lens_q"] = self.lens_q
        if self.inner is not None:
            d["inner"] = self.inner.to_dict()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> FamilySpec:
        inner = cls.from_dict(d["inner"]) if d.get("inner") else None
        return cls(
            d["family"],
            p=d.get("p"),
            lens_q=d.get("lens_q", 1),
            n=d.get("n"),
            q=d.get("q"),
            nprime=d.get("nprime"),
            m=d.get("m"),
            inner=inner,
        ).validated()


# ---------------------------------------------------------------------------
# 2x2 matrices over a cyclotomic field

Mat2 = tuple[CycloNum, CycloNum, CycloNum, CycloNum]


def mat_mul(x: Mat2, y: Mat2) -> Mat2:
    a, b, c, d = x
    e, f, g, h = y
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def mat_identity(n: int) -> Mat2:
    return (cyc_one(n), cyc_zero(n), cyc_zero(n), cyc_one(n))


def mat_to_complex(x: Mat2) -> np.ndarray:
    return np.array([[x[0].to_complex(), x[1].to_complex()], [x[2].to_complex(), x[3].to_complex()]])


def mat_conj_transpose(x: Mat2) -> Mat2:
    return (cyc_conj(x[0]), cyc_conj(x[2]), cyc_conj(x[1]), cyc_conj(x[3]))


def _mat_key(x: Mat2) -> Hashable:
    return tuple(c.coeffs for c in x)


def _quaternion(n: int, x0, x1, x2, x3) -> Mat2:
    """x0 + x1 i + x2 j + x3 k as [[x0 + x1 i, x2 + x3 i], [-x2 + x3 i, x0 - x1 i]]."""
    i = cyc_make_root(n, n // 4)
    return (x0 + x1 * i, x2 + x3 * i, -x2 + x3 * i, x0 - x1 * i)


# ---------------------------------------------------------------------------
# Finite groups


class FiniteGroup:
    """A finite group given by its full Cayley table on indices 0..order-1."""

    def __init__(
        self,
        cayley,
        generators: Sequence[int],
        generator_labels: Sequence[str],
        element_words: Sequence[tuple[str, ...]] | None = None,
        *,
        spec: FamilySpec | None = None,
        name: str | None = None,
        matrices: dict[str, Mat2] | None = None,
        ambient_order: int | None = None,
        action: str | None = None,
    ):
        table = np.ascontiguousarray(cayley, dtype=np.int32)
        table.flags.writeable = False
        self.cayley = table
        self.order = int(table.shape[0])
        rows = np.flatnonzero((table == np.arange(self.order)).all(axis=1))
        if rows.size != 1:
            raise ConstructionError("Cayley table has no unique identity")
        self.identity = int(rows[0])
        inv = np.argmax(table == self.identity, axis=1).astype(np.int32)
        inv.flags.writeable = False
        self.inverses = inv
        self.generators = [int(g) for g in generators]
        self.generator_labels = list(generator_labels)
        self.element_words = list(element_words) if element_words is not None else None
        self.spec = spec
        self.name = name or (spec.label() if spec else f"group of order {self.order}")
        self.matrices = matrices or {}
        self.ambient_order = ambient_order
        self.action = action
        # set by direct-product builders: element -> (first factor index, second factor index)
        self.factor_parts: tuple[np.ndarray, np.ndarray] | None = None
        self.factors: tuple[FiniteGroup, FiniteGroup] | None = None

    def __repr__(self):
        return f"<FiniteGroup {self.name}, order {self.order}>"

    def mul(self, x: int, y: int) -> int:
        return int(self.cayley[x, y])

    def inv(self, x: int) -> int:
        return int(self.inverses[x])

    def power(self, x: int, k: int) -> int:
        if k < 0:
            x, k = self.inv(x), -k
        result = self.identity
        while k:
            if k & 1:
                result = self.mul(result, x)
            x = self.mul(x, x)
            k >>= 1
        return result

    def product(self, *xs: int) -> int:
        return reduce(self.mul, xs, self.identity)

    def generator(self, label: str) -> int:
        return self.generators[self.generator_labels.index(label)]

    def word(self, x: int) -> str:
        if self.element_words is None:
            return f"g{x}"
        w = self.element_words[x]
        if not w:
            return "1"
        sep = "" if all(len(s) == 1 for s in self.generator_labels) else "*"
        return sep.join(w)

    @cached_property
    def orders(self) -> np.ndarray:
        n = self.order
        out = np.zeros(n, dtype=np.int64)
        ar = np.arange(n)
        cur = ar.copy()
        k = 1
        while True:
            hit = (cur == self.identity) & (out == 0)
            out[hit] = k
            if (out > 0).all():
                break
            cur = self.cayley[cur, ar]
            k += 1
        out.flags.writeable = False
        return out

    @cached_property
    def is_abelian(self) -> bool:
        return bool((self.cayley == self.cayley.T).all())

    def spanning_tree(self, gens: Sequence[int]):
        """BFS tree over right multiplication; returns (levels, parent, via)."""
        n = self.order
        parent = np.full(n, -1, dtype=np.int64)
        via = np.full(n, -1, dtype=np.int64)
        seen = np.zeros(n, dtype=bool)
        seen[self.identity] = True
        frontier = [self.identity]
        levels = []
        while frontier:
            nxt = []
            for x in frontier:
                for s, g in enumerate(gens):
                    y = int(self.cayley[x, g])
                    if not seen[y]:
                        seen[y] = True
                        parent[y], via[y] = x, s
                        nxt.append(y)
            if nxt:
                levels.append(np.array(nxt, dtype=np.int64))
            frontier = nxt
        if not seen.all():
            raise ValueError("elements do not generate the group")
        return levels, parent, via

    @classmethod
    def from_table(cls, cayley, name: str | None = None) -> FiniteGroup:
        """Wrap a bare Cayley table, choosing a small generating set greedily."""
        table = np.asarray(cayley, dtype=np.int32)
        g = cls(table, [], [], name=name)
        gens = _greedy_generators(g)
        labels = [f"g{i}" for i in range(len(gens))]
        g.generators, g.generator_labels = gens, labels
        levels, parent, via = g.spanning_tree(gens)
        words: list[tuple[str, ...]] = [()] * g.order
        for level in levels:
            for y in level:
                words[y] = words[parent[y]] + (labels[via[y]],)
        g.element_words = words
        return g

    def relabeled(self, perm: Sequence[int]) -> FiniteGroup:
        """Isomorphic copy where old element x becomes perm[x]."""
        perm = np.asarray(perm, dtype=np.int64)
        inv = np.argsort(perm)
        table = perm[self.cayley[np.ix_(inv, inv)]]
        return FiniteGroup(
            table,
            [int(perm[g]) for g in self.generators],
            self.generator_labels,
            [self.element_words[i] for i in inv] if self.element_words else None,
            name=self.name + " (relabeled)",
        )


def _greedy_generators(g: FiniteGroup) -> list[int]:
    gens: list[int] = []
    mask = np.zeros(g.order, dtype=bool)
    mask[g.identity] = True
    by_order = sorted(range(g.order), key=lambda x: (-int(g.orders[x]), x))
    for x in by_order:
        if mask.all():
            break
        if not mask[x]:
            gens.append(x)
            mask = generated_mask(g, gens)
    return gens


def generated_mask(g: FiniteGroup, elements: Iterable[int]) -> np.ndarray:
    gens = np.unique(np.fromiter(elements, dtype=np.int64))
    mask = np.zeros(g.order, dtype=bool)
    mask[g.identity] = True
    frontier = np.array([g.identity])
    if gens.size == 0:
        return mask
    while frontier.size:
        nxt = np.unique(g.cayley[np.ix_(frontier, gens)].ravel())
        nxt = nxt[~mask[nxt]]
        mask[nxt] = True
        frontier = nxt
    return mask


def minimal_generating_set(g: FiniteGroup) -> list[int]:
    """Drop redundant presentation generators; fall back to a greedy set."""
    gens = list(dict.fromkeys(g.generators)) or _greedy_generators(g)
    if not generated_mask(g, gens).all():
        gens = _greedy_generators(g)
    i = 0
    while i < len(gens):
        rest = gens[:i] + gens[i + 1 :]
        if rest and generated_mask(g, rest).all():
            gens = rest
        else:
            i += 1
    return gens


# ---------------------------------------------------------------------------
# Construction


def _closure(identity, gen_raws, labels, mul: Callable, key: Callable, cap: int):
    index = {key(identity): 0}
    raws = [identity]
    words: list[tuple[str, ...]] = [()]
    parent, via = [-1], [-1]
    right: list[list[int]] = [[] for _ in gen_raws]
    i = 0
    while i < len(raws):
        x = raws[i]
        for s, g in enumerate(gen_raws):
            y = mul(x, g)
            k = key(y)
            j = index.get(k)
            if j is None:
                j = len(raws)
                if j >= cap:
                    raise OrderCapExceeded(f"group order exceeds the cap of {cap}")
                index[k] = j
                raws.append(y)
                words.append(words[i] + (labels[s],))
                parent.append(i)
                via.append(s)
            right[s].append(j)
        i += 1
    n = len(raws)
    rights = [np.array(r, dtype=np.int32) for r in right]
    cay = np.empty((n, n), dtype=np.int32)
    cay[:, 0] = np.arange(n)
    for y in range(1, n):
        cay[:, y] = rights[via[y]][cay[:, parent[y]]]
    gens = [index[key(g)] for g in gen_raws]
    return cay, gens, words, raws


def _check_cap(spec: FamilySpec, cap: int) -> None:
    if spec.expected_order() > cap:
        raise OrderCapExceeded(
            f"{spec.label()} has order {spec.expected_order()} > cap {cap}"
        )


def _finish(spec, cay, gens, labels, words, cap, **kw) -> FiniteGroup:
    g = FiniteGroup(cay, gens, labels, words, spec=spec, **kw)
    if g.order != spec.expected_order():
        raise ConstructionError(
            f"{spec.label()}: closure has order {g.order}, expected {spec.expected_order()}"
        )
    return g


def _matrix_group(spec, n_amb, gen_mats: dict[str, Mat2], cap, action="su2") -> FiniteGroup:
    labels = list(gen_mats)
    cay, gens, words, raws = _closure(
        mat_identity(n_amb), [gen_mats[l] for l in labels], labels, mat_mul, _mat_key, cap
    )
    g = _finish(spec, cay, gens, labels, words, cap, matrices=dict(gen_mats),
                ambient_order=n_amb, action=action)
    g.element_matrices = raws
    return g


def _cyclic(spec: FamilySpec, cap: int) -> FiniteGroup:
    p = spec.p
    cay, gens, words, raws = _closure(0, [1 % p], ["a"], lambda x, y: (x + y) % p, lambda x: x, cap)

    def diag(r):
        return (cyc_make_root(p, r), cyc_zero(p), cyc_zero(p), cyc_make_root(p, r * spec.lens_q))

    g = _finish(spec, cay, gens, ["a"], words, cap, matrices={"a": diag(1)}, ambient_order=p,
                action="diagonal")
    g.element_matrices = [diag(r) for r in raws]
    return g


def binary_dihedral_matrices(n: int) -> dict[str, Mat2]:
    N = 2 * n
    one, zero = cyc_one(N), cyc_zero(N)
    zeta = cyc_make_root(N, 1)
    return {"a": (zero, one, -one, zero), "b": (zeta, zero, zero, cyc_conj(zeta))}


def _binary_dihedral_normal(spec: FamilySpec, cap: int) -> FiniteGroup:
    n = spec.n
    m = 2 * n

    def mul(x, y):
        (e1, i), (e2, j) = x, y
        if e1 == 0:
            return (e2, (j - i) % m) if e2 else (0, (i + j) % m)
        return (0, (n + j - i) % m) if e2 else (1, (i + j) % m)

    cay, gens, words, _ = _closure((0, 0), [(1, 0), (0, 1 % m)], ["a", "b"], mul, lambda x: x, cap)
    return _finish(spec, cay, gens, ["a", "b"], words, cap)


def _binary_dihedral(spec: FamilySpec, cap: int, method: str) -> FiniteGroup:
    normal = _binary_dihedral_normal(spec, cap)
    if method == "normal":
        return normal
    g = _matrix_group(spec, 2 * spec.n, binary_dihedral_matrices(spec.n), cap)
    if not is_isomorphic(g, normal):
        raise ConstructionError(f"{spec.label()}: matrix and normal-form builds disagree")
    g.normal_form_twin = normal
    return g


def binary_tetrahedral_matrices() -> dict[str, Mat2]:
    N = 4
    h = Fraction(1, 2)
    # a is the inverse of diag(i, -i); with that matrix itself (ab)^3 = +1
    a = _quaternion(N, 0, -1, 0, 0)
    b = _quaternion(N, h, h, h, h)
    return {"a": a, "b": b}


def binary_octahedral_matrices() -> dict[str, Mat2]:
    N = 8
    half_sqrt2 = (cyc_make_root(N, 1) + cyc_make_root(N, 7)) * Fraction(1, 2)
    h = Fraction(1, 2)
    zero = cyc_zero(N)
    a = _quaternion(N, zero, half_sqrt2, half_sqrt2, zero)
    b = _quaternion(N, h, h, h, h)
    return {"a": a, "b": b}


def binary_icosahedral_matrices() -> dict[str, Mat2]:
    N = 20
    golden = 1 + cyc_make_root(N, 4) + cyc_make_root(N, 16)
    h = Fraction(1, 2)
    zero = cyc_zero(N)
    a = _quaternion(N, zero, golden * h, (golden - 1) * h, cyc_from_rational(N, -h))
    b = _quaternion(N, h, h, h, h)
    return {"a": a, "b": b}


_Q8_NAMES = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]


def _q8_mul(x: int, y: int) -> int:
    # x = 2*u + s encodes (-1)^s * unit[u], unit = 1, i, j, k
    ux, sx = divmod(x, 2)
    uy, sy = divmod(y, 2)
    table = {
        (0, 0): (0, 0), (0, 1): (1, 0), (0, 2): (2, 0), (0, 3): (3, 0),
        (1, 0): (1, 0), (1, 1): (0, 1), (1, 2): (3, 0), (1, 3): (2, 1),
        (2, 0): (2, 0), (2, 1): (3, 1), (2, 2): (0, 1), (2, 3): (1, 0),
        (3, 0): (3, 0), (3, 1): (2, 0), (3, 2): (1, 1), (3, 3): (0, 1),
    }
    u, s = table[(ux, uy)]
    return 2 * u + (s ^ sx ^ sy)


def _q8_cycle(x: int) -> int:
    # i -> j -> k -> i, signs kept
    u, s = divmod(x, 2)
    return 2 * (u if u == 0 else u % 3 + 1) + s


def _tprime(spec: FamilySpec, cap: int) -> FiniteGroup:
    t = 3**spec.q

    def mul(x, y):
        (a, e), (b, f) = x, y
        for _ in range(e % 3):
            b = _q8_cycle(b)
        return (_q8_mul(a, b), (e + f) % t)

    gens = [(2, 0), (4, 0), (6, 0), (0, 1 % t)]
    labels = ["i", "j", "k", "w"]
    cay, gidx, words, _ = _closure((0, 0), gens, labels, mul, lambda x: x, cap)
    return _finish(spec, cay, gidx, labels, words, cap)


def _dprime(spec: FamilySpec, cap: int) -> FiniteGroup:
    nn, t = spec.nprime, 2**spec.q

    def mul(x, y):
        # (alpha, beta) is w^alpha u^beta
        (a, b), (c, d) = x, y
        return ((a + c) % t, ((-b if c % 2 else b) + d) % nn)

    labels = ["u", "w"]
    cay, gidx, words, _ = _closure((0, 0), [(0, 1), (1, 0)], labels, mul, lambda x: x, cap)
    return _finish(spec, cay, gidx, labels, words, cap)


def direct_product_group(g1: FiniteGroup, g2: FiniteGroup, spec: FamilySpec | None = None,
                         cap: int | None = None, labels: tuple[Sequence[str], Sequence[str]] | None = None
                         ) -> FiniteGroup:
    cap = cap or default_order_cap()
    if g1.order * g2.order > cap:
        raise OrderCapExceeded(f"direct product order {g1.order * g2.order} > cap {cap}")
    l1, l2 = labels or (g1.generator_labels, g2.generator_labels)
    gen_raws = [(x, g2.identity) for x in g1.generators] + [(g1.identity, y) for y in g2.generators]
    lab = list(l1) + list(l2)
    c1, c2 = g1.cayley, g2.cayley

    def mul(x, y):
        return (int(c1[x[0], y[0]]), int(c2[x[1], y[1]]))

    cay, gidx, words, raws = _closure((g1.identity, g2.identity), gen_raws, lab, mul, lambda x: x,
                                      cap + 1)
    g = FiniteGroup(cay, gidx, lab, words, spec=spec,
                    name=spec.label() if spec else f"{g1.name} x {g2.name}")
    g.factor_parts = (np.array([r[0] for r in raws]), np.array([r[1] for r in raws]))
    g.factors = (g1, g2)
    return g


def _product(spec: FamilySpec, cap: int, method: str) -> FiniteGroup:
    inner = build_group(spec.inner, cap=cap, method=method)
    zm = build_group(FamilySpec.cyclic(spec.m), cap=cap)
    g = direct_product_group(zm, inner, spec=spec, cap=cap, labels=(["z"], inner.generator_labels))
    if g.order != spec.expected_order():
        raise ConstructionError("product has the wrong order")
    return g


def build_group(spec: FamilySpec, cap: int | None = None, method: str = "auto") -> FiniteGroup:
    """Build the group of ``spec`` and verify its presentation relators.

    ``method`` only affects BinaryDihedral: ``"matrix"`` closes the 2x2
    matrices and cross-checks against the normal form, ``"normal"`` skips the
    matrices, ``"auto"`` uses matrices for n <= 64.
    """
    spec = spec.validated()
    cap = cap if cap is not None else default_order_cap()
    _check_cap(spec, cap)
    f = spec.family
    if f == "CyclicZp":
        g = _cyclic(spec, cap)
    elif f == "BinaryDihedral":
        if method == "auto":
            method = "matrix" if spec.n <= 64 else "normal"
        g = _binary_dihedral(spec, cap, method)
    elif f == "BinaryTetrahedral":
        g = _matrix_group(spec, 4, binary_tetrahedral_matrices(), cap)
    elif f == "BinaryOctahedral":
        g = _matrix_group(spec, 8, binary_octahedral_matrices(), cap)
    elif f == "BinaryIcosahedral":
        g = _matrix_group(spec, 20, binary_icosahedral_matrices(), cap)
    elif f == "TPrime":
        g = _tprime(spec, cap)
    elif f == "DPrime":
        g = _dprime(spec, cap)
    else:
        g = _product(spec, cap, method)
    failed = [name for name, ok in check_relators(g) if not ok]
    if failed:
        raise ConstructionError(f"{spec.label()}: relators fail: {failed}")
    return g


# ---------------------------------------------------------------------------
# Presentation relators


def _central_minus_one(g: FiniteGroup) -> int | None:
    inv2 = np.flatnonzero(g.orders == 2)
    return int(inv2[0]) if inv2.size == 1 else None


def check_relators(g: FiniteGroup) -> list[tuple[str, bool]]:
    """Evaluate every presentation relation of the group's family."""
    spec = g.spec
    if spec is None:
        return []
    P, e = g.power, g.identity
    out: list[tuple[str, bool]] = []
    f = spec.family
    if f == "CyclicZp":
        a = g.generator("a")
        out.append((f"a^{spec.p} = 1", P(a, spec.p) == e))
    elif f in ("BinaryDihedral", "BinaryTetrahedral", "BinaryOctahedral", "BinaryIcosahedral"):
        a, b = g.generator("a"), g.generator("b")
        k = {"BinaryDihedral": 2, "BinaryTetrahedral": 3,
             "BinaryOctahedral": 4, "BinaryIcosahedral": 5}[f]
        bexp = spec.n if f == "BinaryDihedral" else 3
        ab = g.mul(a, b)
        out += [
            (f"a^2 = b^{bexp}", P(a, 2) == P(b, bexp)),
            (f"b^{bexp} = (ab)^{k}", P(b, bexp) == P(ab, k)),
            ("a^4 = 1", P(a, 4) == e),
        ]
        # second reading: the common value is the central element -1
        minus = _central_minus_one(g)
        out.append(("a^2 = -1 (unique involution)", minus is not None and P(a, 2) == minus))
        if g.matrices and hasattr(g, "element_matrices"):
            mat = g.element_matrices[P(a, 2)]
            n_amb = g.ambient_order
            neg = (-cyc_one(n_amb), cyc_zero(n_amb), cyc_zero(n_amb), -cyc_one(n_amb))
            out.append(("a^2 = -I as a matrix", _mat_key(mat) == _mat_key(neg)))
    elif f == "TPrime":
        i, j, k, w = (g.generator(s) for s in "ijkw")
        winv = g.inv(w)
        out += [
            ("i^2 = j^2", P(i, 2) == P(j, 2)),
            ("j^2 = k^2", P(j, 2) == P(k, 2)),
            ("i^4 = 1", P(i, 4) == e),
            ("ij = k", g.mul(i, j) == k),
            ("jk = i", g.mul(j, k) == i),
            ("ki = j", g.mul(k, i) == j),
            (f"w^{3 ** spec.q} = 1", P(w, 3**spec.q) == e),
            ("w i w^-1 = j", g.product(w, i, winv) == j),
            ("w j w^-1 = k", g.product(w, j, winv) == k),
            ("w k w^-1 = i", g.product(w, k, winv) == i),
        ]
    elif f == "DPrime":
        u, w = g.generator("u"), g.generator("w")
        out += [
            (f"u^{spec.nprime} = 1", P(u, spec.nprime) == e),
            (f"w^{2 ** spec.q} = 1", P(w, 2**spec.q) == e),
            ("w u w^-1 = u^-1", g.product(w, u, g.inv(w)) == g.inv(u)),
        ]
    elif f == "ProductZmG":
        z = g.generator("z")
        out.append((f"z^{spec.m} = 1", P(z, spec.m) == e))
        inner = g.factors[1]
        for lab in inner.generator_labels:
            x = g.generator(lab)
            out.append((f"z {lab} = {lab} z", g.mul(z, x) == g.mul(x, z)))
        for name, ok in check_relators(inner):
            out.append((f"inner: {name}", ok))
    return out


# ---------------------------------------------------------------------------
# Subgroups


@dataclass(frozen=True, eq=False)
class SubgroupHandle:
    parent: FiniteGroup
    members: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(sorted(int(x) for x in self.members)))

    def __eq__(self, other):
        return (isinstance(other, SubgroupHandle) and other.parent is self.parent
                and other.members == self.members)

    def __hash__(self):
        return hash((id(self.parent), self.members))

    @property
    def order(self) -> int:
        return len(self.members)

    def __contains__(self, x: int) -> bool:
        return bool(self.mask[x])

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.parent.order, dtype=bool)
        m[list(self.members)] = True
        return m

    def is_subgroup(self) -> bool:
        idx = np.array(self.members)
        return bool(self.mask[self.parent.identity]
                    and self.mask[self.parent.cayley[np.ix_(idx, idx)]].all()
                    and self.mask[self.parent.inverses[idx]].all())

    @cached_property
    def as_group(self) -> FiniteGroup:
        idx = np.array(self.members)
        pos = np.full(self.parent.order, -1, dtype=np.int64)
        pos[idx] = np.arange(len(idx))
        table = pos[self.parent.cayley[np.ix_(idx, idx)]]
        return FiniteGroup.from_table(table, name=f"subgroup of {self.parent.name}")


def generated_by(g: FiniteGroup, elements: Iterable[int]) -> SubgroupHandle:
    return SubgroupHandle(g, tuple(np.flatnonzero(generated_mask(g, elements))))


def whole_group(g: FiniteGroup) -> SubgroupHandle:
    return SubgroupHandle(g, tuple(range(g.order)))


def trivial_subgroup(g: FiniteGroup) -> SubgroupHandle:
    return SubgroupHandle(g, (g.identity,))


def element_order(g: FiniteGroup, x: int) -> int:
    if not 0 <= x < g.order:
        raise IndexError(f"element {x} out of range for order {g.order}")
    return int(g.orders[x])


def center(g: FiniteGroup) -> SubgroupHandle:
    return SubgroupHandle(g, tuple(np.flatnonzero((g.cayley == g.cayley.T).all(axis=0))))


def conjugate_members(g: FiniteGroup, s: SubgroupHandle, x: int) -> tuple[int, ...]:
    idx = np.array(s.members)
    return tuple(sorted(set(g.cayley[g.cayley[x, idx], g.inverses[x]].tolist())))


def is_normal(g: FiniteGroup, s: SubgroupHandle) -> bool:
    idx = np.array(s.members)
    allg = np.arange(g.order)
    conj = g.cayley[g.cayley[np.ix_(allg, idx)], g.inverses[allg][:, None]]
    return bool(s.mask[conj].all())


def conjugates(g: FiniteGroup, s: SubgroupHandle) -> list[SubgroupHandle]:
    seen = {}
    for x in range(g.order):
        mem = conjugate_members(g, s, x)
        seen.setdefault(mem, SubgroupHandle(g, mem))
    return list(seen.values())


def commutator_subgroup(g: FiniteGroup) -> SubgroupHandle:
    inv = g.inverses
    c = g.cayley
    ar = np.arange(g.order)
    comm = c[c[c[inv[:, None], inv[None, :]], ar[:, None]], ar[None, :]]
    return generated_by(g, np.unique(comm))


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _is_power_of(x: int, p: int) -> bool:
    while x % p == 0:
        x //= p
    return x == 1


def sylow_subgroup(g: FiniteGroup, p: int) -> SubgroupHandle:
    """A Sylow p-subgroup, grown greedily by adjoining p-elements."""
    if p < 2 or g.order % p or _prime_factors(p) != [p]:
        raise ValueError(f"{p} is not a prime divisor of {g.order}")
    target = 1
    while g.order % (target * p) == 0:
        target *= p
    p_elems = [x for x in range(g.order) if x != g.identity and _is_power_of(int(g.orders[x]), p)]
    gens: list[int] = []
    mask = generated_mask(g, gens)
    while mask.sum() < target:
        for x in p_elems:
            if mask[x]:
                continue
            trial = generated_mask(g, gens + [x])
            if _is_power_of(int(trial.sum()), p):
                gens.append(x)
                mask = trial
                break
        else:  # pragma: no cover - Sylow theory guarantees an extension
            raise RuntimeError("greedy Sylow closure stalled")
    return SubgroupHandle(g, tuple(np.flatnonzero(mask)))


# ---------------------------------------------------------------------------
# Homomorphisms


def homomorphisms(src: FiniteGroup, dst: FiniteGroup, gens: Sequence[int] | None = None, *,
                  injective: bool = False, first: bool = False,
                  chunk_elems: int = 4_000_000) -> np.ndarray:
    """All homomorphisms src -> dst as rows of an (K, |src|) image array.

    Each generator is sent to every element whose order divides its own; the
    assignment is propagated along a BFS spanning tree of the Cayley graph and
    kept iff phi(x g) = phi(x) phi(g) holds on every edge, which is equivalent
    to being a homomorphism.
    """
    gens = list(gens) if gens is not None else minimal_generating_set(src)
    if not gens:
        return np.full((1, src.order), dst.identity, dtype=np.int32)
    levels, parent, via = src.spanning_tree(gens)
    if injective and src.order != dst.order:
        return np.empty((0, src.order), dtype=np.int32)
    cands = []
    for x in gens:
        o = int(src.orders[x])
        ok = (dst.orders == o) if injective else (o % dst.orders == 0)
        cands.append(np.flatnonzero(ok).astype(np.int32))
    shape = tuple(len(c) for c in cands)
    total = int(np.prod(shape))
    n = src.order
    batch = max(1, chunk_elems // n)
    right = [src.cayley[:, x] for x in gens]
    found = []
    for start in range(0, total, batch):
        stop = min(total, start + batch)
        idx = np.unravel_index(np.arange(start, stop), shape)
        imgs = np.stack([c[i] for c, i in zip(cands, idx)], axis=1)
        phi = np.empty((stop - start, n), dtype=np.int32)
        phi[:, src.identity] = dst.identity
        for level in levels:
            phi[:, level] = dst.cayley[phi[:, parent[level]], imgs[:, via[level]]]
        ok = np.ones(stop - start, dtype=bool)
        for s in range(len(gens)):
            ok &= (phi[:, right[s]] == dst.cayley[phi, imgs[:, s][:, None]]).all(axis=1)
        if injective:
            srt = np.sort(phi, axis=1)
            ok &= (np.diff(srt, axis=1) != 0).all(axis=1)
        if ok.any():
            found.append(phi[ok])
            if first:
                break
    if not found:
        return np.empty((0, n), dtype=np.int32)
    out = np.concatenate(found)
    return out[:1] if first else out


def is_homomorphism(src: FiniteGroup, dst: FiniteGroup, images) -> bool:
    phi = np.asarray(images)
    return bool((phi[src.cayley] == dst.cayley[phi[:, None], phi[None, :]]).all())


def is_isomorphic(g: FiniteGroup, h: FiniteGroup) -> bool:
    if g.order != h.order:
        return False
    if np.array_equal(g.cayley, h.cayley):
        return True
    if sorted(g.orders.tolist()) != sorted(h.orders.tolist()):
        return False
    return homomorphisms(g, h, injective=True, first=True).shape[0] > 0


# ---------------------------------------------------------------------------
# Dump


def group_dump(g: FiniteGroup) -> dict:
    return {
        "spec": g.spec.to_dict() if g.spec else None,
        "name": g.name,
        "order": g.order,
        "identity": g.identity,
        "generators": [{"label": l, "index": x} for l, x in zip(g.generator_labels, g.generators)],
        "element_words": [g.word(x) for x in range(g.order)],
        "cayley": g.cayley.tolist(),
    }


def group_dump_json(g: FiniteGroup) -> str:
    return json.dumps(group_dump(g), separators=(",", ":"))
