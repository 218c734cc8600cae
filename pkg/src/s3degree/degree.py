"""Self-map degree sets D(M) as residue sets modulo |pi_1(M)|.

Two independent routes are provided:

* :func:`degree_set_from_census` assembles D from the endomorphism census:
  ``{0} u AutSq u (rep(K) * AutSq for each kernel class K)``, where the
  representative degrees rep(K) come from explicit constructions per family.
* :func:`degree_set_closed_form` sweeps the printed closed-form rows.

:func:`sylow_crt_degrees` is a third, per-endomorphism route used only for
auditing: the degree modulo each Sylow order is read off the restriction of
the endomorphism to a Sylow subgroup and the pieces are glued by CRT.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .endo import EndoCensus, _relation_level, enumerate_endomorphisms
from .groups import FamilySpec, FiniteGroup, _prime_factors, build_group, sylow_subgroup
from .isotype import (
    BTS,
    TRIVIAL,
    IsoType,
    binary_dihedral,
    cyclic,
    direct_product,
    quaternion_times_cyclic,
    spec_iso_type,
)


# ---------------------------------------------------------------------------
# Residue arithmetic


@dataclass(frozen=True)
class ResidueSet:
    modulus: int
    residues: tuple[int, ...] = ()

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be positive")
        object.__setattr__(self, "residues", tuple(sorted({int(r) % self.modulus for r in self.residues})))

    @classmethod
    def of(cls, modulus: int, values: Iterable[int]) -> ResidueSet:
        return cls(modulus, tuple(values))

    def __iter__(self):
        return iter(self.residues)

    def __len__(self):
        return len(self.residues)

    def __contains__(self, x: int) -> bool:
        return x % self.modulus in self.residues

    def _check(self, other: ResidueSet) -> None:
        if other.modulus != self.modulus:
            raise ValueError(f"moduli differ: {self.modulus} vs {other.modulus}")

    def __or__(self, other: ResidueSet) -> ResidueSet:
        self._check(other)
        return ResidueSet(self.modulus, self.residues + other.residues)

    def __and__(self, other: ResidueSet) -> ResidueSet:
        self._check(other)
        return ResidueSet(self.modulus, tuple(set(self.residues) & set(other.residues)))

    def __sub__(self, other: ResidueSet) -> ResidueSet:
        self._check(other)
        return ResidueSet(self.modulus, tuple(set(self.residues) - set(other.residues)))

    def __le__(self, other: ResidueSet) -> bool:
        self._check(other)
        return set(self.residues) <= set(other.residues)

    def times(self, other: ResidueSet) -> ResidueSet:
        """Pointwise products {x y mod N}."""
        self._check(other)
        return ResidueSet(self.modulus, tuple(x * y for x in self.residues for y in other.residues))

    def is_multiplicatively_closed(self) -> bool:
        s = set(self.residues)
        return all((x * y) % self.modulus in s for x in self.residues for y in self.residues)

    def to_list(self) -> list[int]:
        return list(self.residues)


@dataclass(frozen=True)
class CongruenceSystem:
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pairs = []
        for r, m in self.pairs:
            if m < 1:
                raise ValueError("moduli must be positive")
            pairs.append((r % m, m))
        mods = [m for _, m in pairs]
        for i in range(len(mods)):
            for j in range(i + 1, len(mods)):
                if math.gcd(mods[i], mods[j]) != 1:
                    raise ValueError(f"moduli {mods[i]} and {mods[j]} are not coprime")
        object.__setattr__(self, "pairs", tuple(pairs))

    @property
    def modulus(self) -> int:
        return math.prod(m for _, m in self.pairs)

    def satisfied_by(self, x: int) -> bool:
        return all(x % m == r for r, m in self.pairs)


def crt_solve(system: CongruenceSystem | Sequence[tuple[int, int]]) -> int:
    """The unique residue modulo the product of the (pairwise coprime) moduli."""
    if not isinstance(system, CongruenceSystem):
        system = CongruenceSystem(tuple(system))
    x, mod = 0, 1
    for r, m in system.pairs:
        # x + mod * t = r (mod m)
        t = ((r - x) * pow(mod, -1, m)) % m if m > 1 else 0
        x, mod = x + mod * t, mod * m
    return x % mod


def crt(r1: int, m1: int, r2: int, m2: int) -> int:
    return crt_solve([(r1, m1), (r2, m2)])


def automorphism_square_set(modulus: int) -> ResidueSet:
    if modulus < 1:
        raise ValueError("modulus must be positive")
    return ResidueSet(modulus, tuple(k * k for k in range(modulus) if math.gcd(k, modulus) == 1))


# ---------------------------------------------------------------------------
# Representative degrees per kernel class


class UnruledKernelClass(KeyError):
    pass


@dataclass(frozen=True)
class DegreeRule:
    kernel: IsoType
    name: str
    residues: ResidueSet
    extension: bool = False  # kernel class absent from the published row

    def to_dict(self) -> dict:
        return {"kernel_type": str(self.kernel), "rule": self.name,
                "degrees": self.residues.to_list(), "extension": self.extension}


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def degree_rules(spec: FamilySpec) -> list[DegreeRule]:
    """Every representative-degree construction known for the family."""
    f = spec.family
    N = spec.expected_order()
    R = lambda vals: ResidueSet.of(N, vals)
    rules: list[DegreeRule] = []
    if f == "CyclicZp":
        p = spec.p
        for d in _divisors(p):
            if 1 < d < p:
                vals = [k * k for k in range(p) if math.gcd(k, p) == d]
                rules.append(DegreeRule(cyclic(d), f"a -> a^k, gcd(k,{p})={d}", R(vals)))
    elif f == "BinaryDihedral":
        n = spec.n
        rules.append(DegreeRule(cyclic(2 * n), "kernel Z_2n: (2n)^2", R([(2 * n) ** 2])))
        if n % 2 == 0:
            rules.append(DegreeRule(binary_dihedral(n // 2), "kernel D*_4(n/2): n^2", R([n * n])))
        for h in _divisors(n):
            if h % 2 and h > 1:
                rules.append(DegreeRule(cyclic(h), f"b -> b^{h}: {h}^2", R([h * h])))
    elif f == "BinaryTetrahedral":
        rules.append(DegreeRule(binary_dihedral(2), "kernel Q8: 16", R([16])))
    elif f == "BinaryOctahedral":
        rules.append(DegreeRule(BTS, "kernel T*: 0", R([0])))
    elif f == "TPrime":
        q = spec.q
        t = 3**q
        for p in range(1, q + 1):
            base = 3 ** (q - p)
            vals = [crt(0, 8, (k * base) ** 2, t) for k in range(1, t + 1) if k % 3]
            rules.append(DegreeRule(quaternion_times_cyclic(base), f"p={p}: (0 mod 8, (k 3^{q - p})^2 mod 3^{q})", R(vals)))
    elif f == "DPrime":
        nn, q = spec.nprime, spec.q
        t = 2**q
        for p in range(1, q + 1):
            base = 2 ** (q - p)
            vals = [crt(0, nn, (h * base) ** 2, t) for h in range(1, t + 1, 2)]
            rules.append(DegreeRule(cyclic(nn * base), f"A p={p}: (0 mod {nn}, (h 2^{q - p})^2 mod 2^{q})", R(vals)))
        for d in _divisors(nn):
            if d > 1:
                vals = [crt((l * nn // d) ** 2, nn, 0, t) for l in range(1, d + 1) if math.gcd(l, d) == 1]
                rules.append(DegreeRule(cyclic(nn // d * t), f"B n''={d}: ((l n'/n'')^2 mod n', 0 mod 2^q)", R(vals)))
        for d in _divisors(nn):
            if 1 < d < nn:
                vals = [crt((l * nn // d) ** 2, nn, s * s, t)
                        for l in range(1, d + 1) if math.gcd(l, d) == 1 for s in range(1, t, 2)]
                rules.append(DegreeRule(cyclic(nn // d), f"C n''={d}: ((l n'/n'')^2 mod n', s^2 mod 2^q)", R(vals),
                                        extension=True))
    elif f == "ProductZmG":
        m = spec.m
        inner = spec.inner
        G = inner.expected_order()
        inner_sets: list[tuple[IsoType, str, ResidueSet, bool]] = [
            (TRIVIAL, "automorphism", automorphism_square_set(G), False),
            (spec_iso_type(inner), "trivial", ResidueSet(G, (0,)), False),
        ]
        inner_sets += [(r.kernel, r.name, r.residues, r.extension) for r in degree_rules(inner)]
        for mp in _divisors(m):
            zvals = {(mp * u) ** 2 % m for u in range(1, m + 1) if math.gcd(u, m // mp) == 1}
            for h, name, hs, ext in inner_sets:
                kernel = direct_product(cyclic(mp), h)
                if kernel == TRIVIAL or kernel == spec_iso_type(spec):
                    continue
                vals = [crt(x, G, y, m) for x in hs for y in zvals]
                rules.append(DegreeRule(kernel, f"z-kernel Z_{mp}, inner {name}", R(vals), ext))
    return rules


def representative_degree_classes(kernel_class: IsoType, spec: FamilySpec,
                                  allow_extensions: bool = False) -> ResidueSet:
    """Union of the representative degrees of every rule for ``kernel_class``."""
    rules = [r for r in degree_rules(spec) if r.kernel == kernel_class
             and (allow_extensions or not r.extension)]
    if not rules:
        raise UnruledKernelClass(f"{kernel_class} has no degree rule for {spec.label()}")
    return reduce(ResidueSet.__or__, (r.residues for r in rules))


# ---------------------------------------------------------------------------
# Findings and reports


@dataclass
class Finding:
    kind: str
    detail: dict

    def to_dict(self) -> dict:
        return {"kind": self.kind, "detail": self.detail}


@dataclass
class ClassDegrees:
    kernel_type: IsoType
    count: int
    rules: list[DegreeRule]
    degrees: ResidueSet  # rep * AutSq

    def to_dict(self) -> dict:
        return {"kernel_type": str(self.kernel_type), "degrees": self.degrees.to_list()}


@dataclass
class CensusAssembly:
    residues: ResidueSet
    per_class: list[ClassDegrees]
    findings: list[Finding]


def assemble_from_census(spec: FamilySpec, census: EndoCensus) -> CensusAssembly:
    N = census.group.order
    aut = automorphism_square_set(N)
    D = ResidueSet(N, (0,)) | aut
    rules = degree_rules(spec)
    per_class, findings = [], []
    for kt, members in sorted(census.by_kernel_type().items(), key=lambda kv: str(kv[0])):
        matching = [r for r in rules if r.kernel == kt]
        if not matching:
            findings.append(Finding("unruled_kernel_class", {
                "kernel_type": str(kt), "count": len(members),
                "example": members[0].describe()}))
            continue
        if any(r.extension for r in matching):
            findings.append(Finding("kernel_outside_expected_row", {
                "kernel_type": str(kt), "count": len(members),
                "example": members[0].describe(),
                "rules": [r.to_dict() for r in matching if r.extension]}))
        orbits = [r.residues.times(aut) for r in matching]
        degrees = reduce(ResidueSet.__or__, orbits)
        if len({o.residues for o in orbits}) > 1:
            autos = np.stack([e.images for e in census.automorphisms])
            level, _ = _relation_level(census.group, autos, np.stack([e.images for e in members]))
            findings.append(Finding("conflict", {
                "kernel_type": str(kt),
                "reason": "distinct constructions give the same kernel class but different degrees",
                "candidates": [{"rule": r.name, "degrees": o.to_list()} for r, o in zip(matching, orbits)],
                "relation_level_within_class": level,
            }))
        per_class.append(ClassDegrees(kt, len(members), matching, degrees))
        D = D | degrees
    return CensusAssembly(D, per_class, findings)


def degree_set_from_census(spec: FamilySpec, census: EndoCensus | None = None) -> ResidueSet:
    census = census or enumerate_endomorphisms(build_group(spec))
    return assemble_from_census(spec, census).residues


# ---------------------------------------------------------------------------
# Closed forms


def _power_cycle(x: int, mod: int) -> set[int]:
    seen, cur = set(), 1 % mod
    while cur not in seen:
        seen.add(cur)
        cur = cur * x % mod
    return seen


def _dprime_factors(nn: int, q: int) -> tuple[int, dict[int, tuple[int, bool]]]:
    N = nn * 2**q
    e1 = (1 - pow(nn, 2**q - 1)) % N
    f2 = {}
    for p in range(1, q + 1):
        exp = (2 * p - q) * (nn - 1)
        if exp >= 0:
            f2[p] = ((1 - pow(2, exp)) % N, False)
        else:
            f2[p] = (crt(0, nn, 1, 2**q), True)
    return e1, f2


def _tprime_literal(q: int, p: int, k: int) -> int:
    tail = 3**q if q % 2 == 0 else 3 ** (q + 1)
    return k * k * (3 ** (2 * q - 2 * p) - tail)


def degree_set_closed_form(spec: FamilySpec) -> ResidueSet:
    f = spec.family
    N = spec.expected_order()
    if f == "CyclicZp":
        return ResidueSet.of(N, (k * k for k in range(N)))
    if f == "BinaryDihedral":
        n = spec.n
        return ResidueSet.of(N, [h * h for h in range(1, N, 2)] + [n * n, 0])
    if f == "BinaryTetrahedral":
        return ResidueSet(N, (0, 1, 16))
    if f == "BinaryOctahedral":
        return ResidueSet(N, (0, 1, 25))
    if f == "BinaryIcosahedral":
        return ResidueSet(N, (0, 1, 49))
    if f == "TPrime":
        q = spec.q
        return ResidueSet.of(N, (_tprime_literal(q, p, k) for p in range(1, q + 1)
                                 for k in range(1, N + 1) if k % 3))
    if f == "DPrime":
        e1, f2 = _dprime_factors(spec.nprime, spec.q)
        squares = {k * k % N for k in range(N)}
        e_pows = _power_cycle(e1, N)
        vals = set()
        for fp, _neg in f2.values():
            for fj in _power_cycle(fp, N):
                vals |= {s * e * fj for s in squares for e in e_pows}
        return ResidueSet.of(N, vals)
    inner = degree_set_closed_form(spec.inner)
    m, G = spec.m, inner.modulus
    return ResidueSet.of(N, (crt(h, G, k * k, m) for h in inner for k in range(m)))


# ---------------------------------------------------------------------------
# Sylow restriction oracle


def _find_conjugator(g: FiniteGroup, image: np.ndarray, pmask: np.ndarray) -> int | None:
    """Some x with x^-1 image x inside the subgroup given by pmask."""
    xs = np.arange(g.order)
    conj = g.cayley[g.cayley[g.inverses[xs][:, None], image[None, :]], xs[:, None]]
    ok = np.flatnonzero(pmask[conj].all(axis=1))
    return int(ok[0]) if ok.size else None


def _sylow_piece(g: FiniteGroup, phi: np.ndarray, P: np.ndarray, pmask: np.ndarray) -> int | None:
    order = len(P)
    x = _find_conjugator(g, np.unique(phi[P]), pmask)
    if x is None:  # pragma: no cover - Sylow theorem
        raise RuntimeError("p-subgroup image not conjugate into the Sylow subgroup")
    xinv = g.inv(x)
    psi = lambda y: g.mul(g.mul(xinv, int(phi[y])), x)
    Pg = [int(y) for y in P]
    top = max(Pg, key=lambda y: g.orders[y])
    if g.orders[top] == order:  # cyclic
        img = psi(top)
        t = next(t for t in range(order) if g.power(top, t) == img)
        return t * t % order
    images = {psi(y) for y in Pg}
    if images == {g.identity}:
        return 0
    if len(images) == order:
        if order == 8:
            return 1
        img = psi(top)
        for t in range(1, order, 2):
            if g.power(top, t) == img:
                return t * t % order
    return None


@dataclass
class SylowOracle:
    modulus: int
    degrees: list[int | None]  # one entry per census member

    @property
    def determined(self) -> ResidueSet:
        return ResidueSet.of(self.modulus, (d for d in self.degrees if d is not None))

    @property
    def undetermined(self) -> int:
        return sum(d is None for d in self.degrees)


def sylow_crt_degrees(census: EndoCensus, sylows: dict[int, Sequence[int]] | None = None) -> SylowOracle:
    """Per-endomorphism degree residues from Sylow restrictions glued by CRT.

    For a cyclic Sylow subgroup P = <x> with restriction x -> x^t the piece
    is t^2 mod |P|; for a quaternion Sylow subgroup the trivial restriction
    gives 0 and an injective one gives t^2 on the cyclic index-2 subgroup
    (1 for Q8). Other restrictions leave the degree undetermined (None).
    """
    g = census.group
    N = g.order
    primes = _prime_factors(N) if N > 1 else []
    subs = {}
    for p in primes:
        members = np.array(sorted(sylows[p])) if sylows and p in sylows else np.array(sylow_subgroup(g, p).members)
        mask = np.zeros(N, dtype=bool)
        mask[members] = True
        subs[p] = (members, mask)
    out: list[int | None] = []
    for e in census.endomorphisms:
        pairs = []
        for p in primes:
            members, mask = subs[p]
            piece = _sylow_piece(g, e.images, members, mask)
            if piece is None:
                pairs = None
                break
            pairs.append((piece, len(members)))
        out.append(None if pairs is None else (crt_solve(pairs) if pairs else 0))
    return SylowOracle(N, out)


# ---------------------------------------------------------------------------
# Audit


def _structure_findings(label: str, D: ResidueSet) -> list[dict]:
    issues = []
    if 0 not in D:
        issues.append({"set": label, "check": "contains 0"})
    if 1 not in D:
        issues.append({"set": label, "check": "contains 1"})
    if not D.is_multiplicatively_closed():
        bad = [(x, y) for x in D for y in D if (x * y) % D.modulus not in D]
        issues.append({"set": label, "check": "multiplicatively closed",
                       "examples": [[x, y, x * y % D.modulus] for x, y in bad[:5]]})
    missing = automorphism_square_set(D.modulus) - D
    if missing:
        issues.append({"set": label, "check": "AutSq subset", "missing": missing.to_list()})
    return issues


def structural_checks(D: ResidueSet) -> dict[str, bool]:
    return {
        "contains_0": 0 in D,
        "contains_1": 1 in D,
        "multiplicatively_closed": D.is_multiplicatively_closed(),
        "autsq_subset": automorphism_square_set(D.modulus) <= D,
    }


def _tuple_audit(spec: FamilySpec) -> list[Finding]:
    N = spec.expected_order()
    out: list[Finding] = []
    if spec.family == "TPrime":
        q = spec.q
        for p in range(1, q + 1):
            bad: dict[tuple[int, int], list[int]] = {}
            for k in range(1, 3**q * 2 + 1):
                if k % 3 == 0:
                    continue
                lit = _tprime_literal(q, p, k) % N
                truth = crt(0, 8, (k * 3 ** (q - p)) ** 2, 3**q)
                if lit != truth:
                    bad.setdefault((lit, truth), []).append(k)
            for (lit, truth), ks in sorted(bad.items()):
                out.append(Finding("closed_form_tuple_mismatch", {
                    "q": q, "p": p, "k": ks[:6], "closed_form": lit, "crt": truth,
                    "system": [[0, 8], [truth % 3**q, 3**q]]}))
    elif spec.family == "DPrime":
        nn, q = spec.nprime, spec.q
        t = 2**q
        e1, f2 = _dprime_factors(nn, q)
        for p, (fp, neg) in f2.items():
            if neg:
                out.append(Finding("negative_exponent", {
                    "p": p, "q": q, "exponent": (2 * p - q) * (nn - 1),
                    "substituted": fp, "meaning": f"crt(0 mod {nn}, 1 mod {t})"}))
            bad = {}
            for h in range(1, t + 1, 2):
                lit = (h * h * 4 ** (q - p) * fp) % N
                truth = crt(0, nn, (h * 2 ** (q - p)) ** 2, t)
                if lit != truth:
                    bad.setdefault((lit, truth), []).append(h)
            for (lit, truth), hs in sorted(bad.items()):
                out.append(Finding("closed_form_tuple_mismatch", {
                    "class": "A", "p": p, "h": hs, "closed_form": lit, "crt": truth}))
        for d in _divisors(nn):
            if d == 1:
                continue
            bad = {}
            for l in range(1, d + 1):
                if math.gcd(l, d) != 1:
                    continue
                base = (l * nn // d) ** 2
                lit = base * e1 % N
                truth = crt(base, nn, 0, t)
                if lit != truth:
                    bad.setdefault((lit, truth), []).append(l)
            for (lit, truth), ls in sorted(bad.items()):
                out.append(Finding("closed_form_tuple_mismatch", {
                    "class": "B", "n''": d, "l": ls, "closed_form": lit, "crt": truth}))
    return out


def _crt_family(spec: FamilySpec) -> bool:
    base = spec.inner if spec.family == "ProductZmG" else spec
    return base.family in ("TPrime", "DPrime")


def crt_certificates(spec: FamilySpec) -> list[tuple[str, CongruenceSystem, int]]:
    """(rule, displayed congruence system, solved residue) for every CRT-derived degree."""
    out = []
    f = spec.family
    if f == "TPrime":
        q, t = spec.q, 3**spec.q
        for p in range(1, q + 1):
            for k in range(1, t + 1):
                if k % 3:
                    sys_ = CongruenceSystem(((0, 8), ((k * 3 ** (q - p)) ** 2, t)))
                    out.append((f"p={p} k={k}", sys_, crt_solve(sys_)))
    elif f == "DPrime":
        nn, q = spec.nprime, spec.q
        t = 2**q
        for p in range(1, q + 1):
            for h in range(1, t + 1, 2):
                sys_ = CongruenceSystem(((0, nn), ((h * 2 ** (q - p)) ** 2, t)))
                out.append((f"A p={p} h={h}", sys_, crt_solve(sys_)))
        for d in _divisors(nn):
            for l in range(1, d + 1):
                if d > 1 and math.gcd(l, d) == 1:
                    sys_ = CongruenceSystem((((l * nn // d) ** 2, nn), (0, t)))
                    out.append((f"B n''={d} l={l}", sys_, crt_solve(sys_)))
    elif f == "ProductZmG":
        m, G = spec.m, spec.inner.expected_order()
        inner = degree_set_from_census(spec.inner)
        for h in inner:
            for k in range(m):
                sys_ = CongruenceSystem(((h, G), (k * k, m)))
                out.append((f"h={h} k={k}", sys_, crt_solve(sys_)))
    return out


@dataclass
class DegreeReport:
    spec: FamilySpec
    census_set: ResidueSet
    closed_form_set: ResidueSet
    per_class: list[ClassDegrees]
    findings: list[Finding] = field(default_factory=list)
    sylow_oracle: SylowOracle | None = None

    @property
    def modulus(self) -> int:
        return self.census_set.modulus

    def findings_of(self, kind: str) -> list[Finding]:
        return [f for f in self.findings if f.kind == kind]

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "modulus": self.modulus,
            "census_set": self.census_set.to_list(),
            "closed_form_set": self.closed_form_set.to_list(),
            "per_class": [c.to_dict() for c in self.per_class],
            "findings": [f.to_dict() for f in self.findings],
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def to_csv(self) -> str:
        c, f = set(self.census_set), set(self.closed_form_set)
        lines = ["residue,provenance"]
        for r in sorted(c | f):
            prov = "both" if r in c and r in f else ("census" if r in c else "closed-form")
            lines.append(f"{r},{prov}")
        return "\n".join(lines) + "\n"


def _attribute(r: int, per_class: list[ClassDegrees], aut: ResidueSet) -> list[str]:
    where = [str(c.kernel_type) for c in per_class if r in c.degrees]
    if r == 0:
        where.append("trivial map")
    if r in aut:
        where.append("automorphisms")
    return where


def audit(spec: FamilySpec, census: EndoCensus | None = None, *, with_sylow: bool = True,
          evidence: dict | None = None) -> DegreeReport:
    """Compute both degree sets and collect every structural or agreement finding.

    ``evidence`` is attached to each conflict finding (e.g. numeric degrees
    of the explicit maps behind the conflicting constructions).
    """
    census = census or enumerate_endomorphisms(build_group(spec))
    asm = assemble_from_census(spec, census)
    D, per_class = asm.residues, asm.per_class
    C = degree_set_closed_form(spec)
    aut = automorphism_square_set(D.modulus)
    findings = list(asm.findings)
    for issue in _structure_findings("census", D):
        findings.append(Finding("census_structure", issue))
    for issue in _structure_findings("closed_form", C):
        findings.append(Finding("closed_form_structure", issue))
    if D != C:
        kind = "closed_form_mismatch" if _crt_family(spec) else "conflict"
        findings.append(Finding(kind, {
            "reason": "census set differs from closed-form set",
            "census_only": [{"residue": r, "from": _attribute(r, per_class, aut)} for r in D - C],
            "closed_form_only": (C - D).to_list(),
        }))
    findings += _tuple_audit(spec)
    oracle = None
    if with_sylow:
        oracle = sylow_crt_degrees(census)
        det = oracle.determined
        if oracle.undetermined == 0 and det != D:
            findings.append(Finding("sylow_crt_mismatch", {
                "census_only": (D - det).to_list(), "sylow_only": (det - D).to_list()}))
        elif not det <= D:
            findings.append(Finding("sylow_crt_mismatch", {
                "sylow_only": (det - D).to_list(), "undetermined": oracle.undetermined}))
    if evidence:
        for f in findings:
            if f.kind == "conflict":
                f.detail["evidence"] = evidence
        for name, ev in evidence.items():
            num, claimed, mod = ev.get("numeric_degree"), ev.get("claimed"), ev.get("modulus")
            if num is not None and claimed is not None and mod and (num - claimed) % mod:
                findings.append(Finding("oracle_mismatch", {
                    "map": name, "numeric_degree": num, "claimed": claimed, "modulus": mod}))
    return DegreeReport(spec, D, C, per_class, findings, oracle)

