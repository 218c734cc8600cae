"""Command-line front end.

Exit status: 0 on success, 1 when a report contains findings of kind
"conflict" (unless --allow-findings), 2 on usage errors, 3 when the group
order exceeds the cap.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass

from .degree import DegreeReport, audit, structural_checks
from .endo import enumerate_endomorphisms, kernel_census, verify_kernels
from .eqmap import MAP_FACTORIES, check_equivariance, numeric_degree
from .groups import (
    FamilySpec,
    OrderCapExceeded,
    SpecError,
    build_group,
    default_order_cap,
    group_dump,
)

EXIT_OK, EXIT_CONFLICT, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3

FAMILY_NAMES = {
    "zp": "CyclicZp",
    "dstar": "BinaryDihedral",
    "tstar": "BinaryTetrahedral",
    "ostar": "BinaryOctahedral",
    "istar": "BinaryIcosahedral",
    "tprime": "TPrime",
    "dprime": "DPrime",
    "product": "ProductZmG",
}

DEFAULT_SWEEP = {
    "zp": [{"p": p} for p in range(2, 51)],
    "dstar": [{"n": n} for n in range(1, 13)],
    "tstar": [{}],
    "ostar": [{}],
    "istar": [{}],
    "tprime": [{"q": q} for q in (1, 2, 3)],
    "dprime": [{"nprime": a, "q": b} for a, b in ((3, 2), (3, 3), (5, 2), (7, 2), (15, 3))],
    "product": [{"m": 5, "inner": "dstar", "n": 2}, {"m": 7, "inner": "tprime", "q": 1}],
}

DEFAULT_ORACLE_MAPS = ["CaseI:k=1", "CaseI:k=2", "CaseI:k=3", "CaseIII",
                       "CaseII_KernelHalf:n=2", "CaseII_KernelHalf:n=4"]


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    spec: FamilySpec | None
    emit: str
    cap: int
    seed: int
    output: str | None
    allow_findings: bool
    extra: argparse.Namespace


def spec_from_params(family: str, *, p=None, n=None, q=None, nprime=None, m=None, inner=None) -> FamilySpec:
    if family not in FAMILY_NAMES:
        raise SpecError(f"unknown family {family!r}; choose from {', '.join(FAMILY_NAMES)}")
    tag = FAMILY_NAMES[family]

    def need(name, val):
        if val is None:
            raise SpecError(f"--family {family} needs --{name}")
        return val

    if tag == "CyclicZp":
        return FamilySpec.cyclic(need("p", p), q if q is not None else 1)
    if tag == "BinaryDihedral":
        return FamilySpec.binary_dihedral(need("n", n))
    if tag == "BinaryTetrahedral":
        return FamilySpec.binary_tetrahedral()
    if tag == "BinaryOctahedral":
        return FamilySpec.binary_octahedral()
    if tag == "BinaryIcosahedral":
        return FamilySpec.binary_icosahedral()
    if tag == "TPrime":
        return FamilySpec.tprime(need("q", q))
    if tag == "DPrime":
        return FamilySpec.dprime(need("nprime", nprime), need("q", q))
    if inner is None:
        raise SpecError("--family product needs --inner FAMILY")
    if inner == "product":
        raise SpecError("--inner cannot be product")
    inner_spec = spec_from_params(inner, p=p, n=n, q=q, nprime=nprime)
    return FamilySpec.product(need("m", m), inner_spec)


# ---------------------------------------------------------------------------
# Formatting helpers


def _set_str(vals, modulus) -> str:
    return "{" + ", ".join(map(str, vals)) + "}" + f" + {modulus}Z"


def _table(rows: list[list[str]], header: list[str]) -> str:
    widths = [max(len(str(r[i])) for r in rows + [header]) for i in range(len(header))]
    fmt = " | ".join("{:<%d}" % w for w in widths)
    lines = [fmt.format(*header), "-+-".join("-" * w for w in widths)]
    lines += [fmt.format(*map(str, r)) for r in rows]
    return "\n".join(lines) + "\n"


def _csv(rows: list[list], header: list[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _has_conflict(report: DegreeReport) -> bool:
    return any(f.kind == "conflict" for f in report.findings)


# ---------------------------------------------------------------------------
# Subcommands


def cmd_degrees(cfg: RunConfig) -> tuple[str, int]:
    report = audit(cfg.spec, enumerate_endomorphisms(build_group(cfg.spec, cap=cfg.cap)))
    c, f = set(report.census_set), set(report.closed_form_set)
    prov = {r: ("both" if r in c and r in f else "census" if r in c else "closed-form")
            for r in sorted(c | f)}
    if cfg.emit == "json":
        out = _json({
            "spec": cfg.spec.to_dict(),
            "label": cfg.spec.label(),
            "modulus": report.modulus,
            "residues": report.census_set.to_list(),
            "closed_form": report.closed_form_set.to_list(),
            "provenance": [{"residue": r, "source": s} for r, s in prov.items()],
            "findings": [x.to_dict() for x in report.findings],
        })
    elif cfg.emit == "csv":
        out = report.to_csv()
    else:
        rows = [[cfg.spec.label(), _set_str(report.census_set, report.modulus),
                 _set_str(report.closed_form_set, report.modulus)]]
        out = _table(rows, ["M = S^3/G", "D(M) (census)", "D(M) (closed form)"])
        out += "".join(f"  {r}: {s}\n" for r, s in prov.items())
        out += _findings_summary(report)
    return out, _status(cfg, _has_conflict(report))


def _findings_summary(report: DegreeReport) -> str:
    if not report.findings:
        return "findings: none\n"
    kinds: dict[str, int] = {}
    for f in report.findings:
        kinds[f.kind] = kinds.get(f.kind, 0) + 1
    return "findings: " + ", ".join(f"{k} x{v}" for k, v in sorted(kinds.items())) + "\n"


def _status(cfg: RunConfig, conflict: bool) -> int:
    if conflict and not cfg.allow_findings:
        return EXIT_CONFLICT
    return EXIT_OK


def cmd_census(cfg: RunConfig) -> tuple[str, int]:
    g = build_group(cfg.spec, cap=cfg.cap)
    census = enumerate_endomorphisms(g)
    kc = kernel_census(census)
    if cfg.emit == "json":
        out = _json({
            "spec": cfg.spec.to_dict(),
            "order": g.order,
            "count": len(census),
            "counts": kc.to_dict(),
            "endomorphisms": [
                {"images": {lab: g.word(x) for lab, x in e.generator_images().items()},
                 "kernel_order": e.kernel.order,
                 "kernel_type": "Trivial" if e.is_automorphism else ("Full" if e.is_trivial else str(e.kernel_type))}
                for e in census.endomorphisms
            ],
        })
    elif cfg.emit == "csv":
        out = _csv([[k, v] for k, v in kc.to_dict().items()], ["kernel_type", "count"])
    else:
        out = f"{cfg.spec.label()}: {len(census)} endomorphisms\n"
        out += _table([[k, v] for k, v in kc.to_dict().items()], ["kernel type", "count"])
    return out, EXIT_OK


def cmd_verify_kernels(cfg: RunConfig) -> tuple[str, int]:
    census = enumerate_endomorphisms(build_group(cfg.spec, cap=cfg.cap))
    rep = verify_kernels(cfg.spec, census)
    d = rep.to_dict()
    if cfg.emit == "json":
        out = _json(d)
    elif cfg.emit == "csv":
        out = _csv([[c["kernel_type"], c["count"], c["level"], c["passed"]] for c in d["classes"]],
                   ["kernel_type", "count", "relation_level", "passed"])
    else:
        out = f"{cfg.spec.label()}\n"
        out += f"check 1 (kernel types = row): {'pass' if rep.kernel_check else 'FAIL'}\n"
        out += f"  expected: {', '.join(d['expected']) or '-'}\n  observed: {', '.join(d['observed']) or '-'}\n"
        if rep.missing or rep.unexpected:
            out += f"  missing: {', '.join(d['missing']) or '-'}; unexpected: {', '.join(d['unexpected']) or '-'}\n"
        out += f"check 2 (automorphism relation): {'pass' if rep.relation_check else 'FAIL'}\n"
        out += _table([[c["kernel_type"], c["count"], c["level"]] for c in d["classes"]],
                      ["kernel type", "count", "relation"]) if d["classes"] else ""
    return out, EXIT_OK


def _oracle_evidence(seed: int) -> dict:
    out = {}
    for n in (2, 4):
        res = numeric_degree(MAP_FACTORIES["CaseII_KernelHalf"](n), seed=seed)
        out[f"CaseII_KernelHalf(n={n})"] = {"numeric_degree": res.degree, "claimed": n * n,
                                             "modulus": 4 * n}
    return out


def cmd_audit(cfg: RunConfig) -> tuple[str, int]:
    census = enumerate_endomorphisms(build_group(cfg.spec, cap=cfg.cap))
    evidence = _oracle_evidence(cfg.seed) if cfg.extra.oracle_evidence else None
    report = audit(cfg.spec, census, evidence=evidence)
    if cfg.emit == "json":
        out = _json(report.to_dict())
    elif cfg.emit == "csv":
        out = _csv([[f.kind, json.dumps(f.detail, sort_keys=True)] for f in report.findings], ["kind", "detail"])
    else:
        out = f"{cfg.spec.label()} (modulus {report.modulus})\n"
        out += f"census:      {_set_str(report.census_set, report.modulus)}\n"
        out += f"closed form: {_set_str(report.closed_form_set, report.modulus)}\n"
        for name, ok in structural_checks(report.census_set).items():
            out += f"  {name}: {'pass' if ok else 'FAIL'}\n"
        for f in report.findings:
            out += f"- {f.kind}: {json.dumps(f.detail, sort_keys=True)}\n"
    return out, _status(cfg, _has_conflict(report))


def parse_map(text: str):
    name, _, args = text.partition(":")
    if name not in MAP_FACTORIES:
        raise UsageError(f"unknown map {name!r}; choose from {', '.join(MAP_FACTORIES)}")
    kwargs = {}
    for part in filter(None, args.split(",")):
        key, _, val = part.partition("=")
        if key == "q":
            key = "lens_q"
        kwargs[key] = int(val)
    try:
        return MAP_FACTORIES[name](**kwargs)
    except TypeError as e:
        raise UsageError(f"bad parameters for {name}: {e}") from e


def cmd_oracle(cfg: RunConfig) -> tuple[str, int]:
    ex = cfg.extra
    maps = [parse_map(t) for t in (ex.map or DEFAULT_ORACLE_MAPS)]
    reports = []
    for m in maps:
        eq = check_equivariance(m, samples=ex.samples, seed=cfg.seed)
        deg = numeric_degree(m, targets=ex.targets, starts=ex.starts, seed=cfg.seed)
        reports.append({"map": m.name, "equivariance": eq.to_dict(), **deg.to_dict()})
    if cfg.emit == "json":
        out = _json({"seed": cfg.seed, "maps": reports})
    else:
        rows = [[r["map"], f"{r['equivariance']['max_deviation']:.2e}", r["degree"],
                 " ".join(str(t["signed"]) for t in r["per_target"])] for r in reports]
        header = ["map", "max equivariance deviation", "degree", "per-target signed counts"]
        out = _csv(rows, header) if cfg.emit == "csv" else _table(rows, header)
    return out, EXIT_OK


def cmd_dump_group(cfg: RunConfig) -> tuple[str, int]:
    g = build_group(cfg.spec, cap=cfg.cap)
    if cfg.emit == "json":
        return _json(group_dump(g)), EXIT_OK
    if cfg.emit == "csv":
        return _csv(g.cayley.tolist(), [g.word(x) for x in range(g.order)]), EXIT_OK
    out = f"{g.name}: order {g.order}, generators " + ", ".join(
        f"{l}={x}" for l, x in zip(g.generator_labels, g.generators)) + "\n"
    out += _table([[x, g.word(x), int(g.orders[x])] for x in range(g.order)], ["index", "word", "order"])
    return out, EXIT_OK


def _parse_grid(items: list[str] | None) -> dict[str, list[int]]:
    grid = {}
    for item in items or []:
        key, _, rng = item.partition("=")
        if ".." in rng:
            lo, hi = rng.split("..")
            grid[key] = list(range(int(lo), int(hi) + 1))
        else:
            grid[key] = [int(v) for v in rng.split(",")]
    return grid


def _sweep_specs(family: str | None, grid: dict[str, list[int]], base: dict) -> list[FamilySpec]:
    families = [family] if family else list(DEFAULT_SWEEP)
    specs = []
    for fam in families:
        if grid:
            keys = list(grid)
            combos = [{}]
            for k in keys:
                combos = [{**c, k: v} for c in combos for v in grid[k]]
            params = [{**base, **c} for c in combos]
        else:
            params = DEFAULT_SWEEP[fam] if not family or not any(v is not None for v in base.values()) else [base]
        for p in params:
            specs.append(spec_from_params(fam, **{k: v for k, v in p.items() if v is not None}))
    return specs


def cmd_sweep(cfg: RunConfig) -> tuple[str, int]:
    ex = cfg.extra
    base = {"p": ex.p, "n": ex.n, "q": ex.q, "nprime": ex.nprime, "m": ex.m, "inner": ex.inner}
    specs = _sweep_specs(ex.family, _parse_grid(ex.grid), base)
    rows, conflict, summary = [], False, {}
    for spec in specs:
        rep = audit(spec, enumerate_endomorphisms(build_group(spec, cap=cfg.cap)))
        conflict |= _has_conflict(rep)
        kinds = sorted({f.kind for f in rep.findings})
        for k in kinds:
            summary[k] = summary.get(k, 0) + 1
        rows.append({"spec": spec.to_dict(), "label": spec.label(), "modulus": rep.modulus,
                     "census_set": rep.census_set.to_list(),
                     "closed_form_set": rep.closed_form_set.to_list(),
                     "agree": rep.census_set == rep.closed_form_set, "findings": kinds})
    if cfg.emit == "json":
        out = _json({"rows": rows, "summary": summary})
    else:
        table_rows = [[r["label"], r["modulus"], " ".join(map(str, r["census_set"])),
                       "yes" if r["agree"] else "no", " ".join(r["findings"]) or "-"] for r in rows]
        header = ["M", "|G|", "D(M) census", "closed form agrees", "findings"]
        if cfg.emit == "csv":
            out = _csv(table_rows, header)
        else:
            out = _table(table_rows, header)
            out += "summary: " + (", ".join(f"{k}: {v} specs" for k, v in sorted(summary.items())) or "no findings") + "\n"
    return out, _status(cfg, conflict)


COMMANDS = {
    "degrees": cmd_degrees,
    "census": cmd_census,
    "verify-kernels": cmd_verify_kernels,
    "audit": cmd_audit,
    "oracle": cmd_oracle,
    "dump-group": cmd_dump_group,
    "sweep": cmd_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--family", choices=list(FAMILY_NAMES))
    common.add_argument("--p", type=int, help="order of the cyclic group")
    common.add_argument("--n", type=int, help="binary dihedral parameter (order 4n)")
    common.add_argument("--q", type=int, help="TPrime/DPrime exponent, or lens parameter for zp")
    common.add_argument("--nprime", type=int, help="odd part n' of DPrime")
    common.add_argument("--m", type=int, help="cyclic factor of a product")
    common.add_argument("--inner", choices=[f for f in FAMILY_NAMES if f != "product"],
                        help="inner family of a product; reuses --p/--n/--q/--nprime")
    common.add_argument("--emit", choices=["table", "json", "csv"], default="table")
    common.add_argument("--cap", type=int, default=None, help="maximum group order")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("-o", "--output", help="write to this file instead of stdout")
    common.add_argument("--allow-findings", action="store_true",
                        help="exit 0 even when conflict findings are present")

    parser = argparse.ArgumentParser(prog="s3degree", description="Self-map degrees of spherical 3-manifolds.")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in ("degrees", "census", "verify-kernels", "dump-group"):
        sub.add_parser(name, parents=[common])
    a = sub.add_parser("audit", parents=[common])
    a.add_argument("--oracle-evidence", action="store_true",
                   help="attach numeric degrees of the Case II kernel-half maps to conflict findings")
    o = sub.add_parser("oracle", parents=[common])
    o.add_argument("--map", action="append", help="NAME[:key=val,...], e.g. CaseI:k=2; repeatable")
    o.add_argument("--samples", type=int, default=10_000)
    o.add_argument("--targets", type=int, default=5)
    o.add_argument("--starts", type=int, default=20_000)
    s = sub.add_parser("sweep", parents=[common])
    s.add_argument("--grid", action="append", help="key=lo..hi or key=v1,v2; repeatable")
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cap = args.cap if args.cap is not None else default_order_cap()
    try:
        spec = None
        if args.subcommand not in ("oracle", "sweep"):
            if not args.family:
                raise SpecError(f"{args.subcommand} needs --family")
            spec = spec_from_params(args.family, p=args.p, n=args.n, q=args.q,
                                    nprime=args.nprime, m=args.m, inner=args.inner)
        cfg = RunConfig(args.subcommand, spec, args.emit, cap, args.seed, args.output,
                        args.allow_findings, args)
        out, status = COMMANDS[args.subcommand](cfg)
    except (SpecError, UsageError) as e:
        print(f"s3degree: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OrderCapExceeded as e:
        print(f"s3degree: error: {e}", file=sys.stderr)
        return EXIT_CAP
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return status


def main() -> None:
    sys.exit(run())
