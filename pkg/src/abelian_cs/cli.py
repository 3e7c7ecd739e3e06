"""Command-line front end.

Exit status: 0 success, 2 unreadable input, 3 validation failure,
4 quantization constraint rejected, 5 unsupported manifold class.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Sequence

from .chern_simons import (
    ConstraintViolation,
    UnsupportedManifoldError,
    WilsonComponent,
    WilsonLink,
    check_level,
    evaluate,
    render_decimal,
)
from .exact_linalg import format_rational
from .linking import FREE, FramedCycle, LinkingError, classify, default_pushoff, linking_number
from .manifold import BUILTIN_NAMES, builtin, load_triangulation
from .manifold.triangulation import DualCycle, ParseError, Triangulation, TriangulationError

EXIT_OK, EXIT_PARSE, EXIT_VALIDATION, EXIT_CONSTRAINT, EXIT_UNSUPPORTED = 0, 2, 3, 4, 5


class InputError(Exception):
    """Unreadable or malformed input (exit status 2)."""


# -- job description --------------------------------------------------------


@dataclass
class ComponentDecl:
    cycle: str
    pushoff: str | None = None
    twist: int | None = None
    charge: int | None = None


@dataclass
class JobSpec:
    command: str
    manifold: str
    cycles: dict[str, list[list[int]] | str] = field(default_factory=dict)
    components: list[ComponentDecl] = field(default_factory=list)
    level: int | None = None
    charges: list[int] | None = None


_LINK_FIELDS = {"cycles", "components"}
_COMPONENT_FIELDS = {"cycle", "pushoff", "twist", "charge"}


def _is_int(x: Any) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def parse_link(data: Any) -> tuple[dict[str, list[list[int]] | str], list[ComponentDecl]]:
    """Validate the link-file structure; cycle references are resolved later."""
    if not isinstance(data, dict):
        raise InputError("link file must hold a JSON object")
    unknown = set(data) - _LINK_FIELDS
    if unknown:
        raise InputError(f"unknown link-file fields: {', '.join(sorted(unknown))}")
    cycles: dict[str, list[list[int]] | str] = {}
    raw = data.get("cycles", {})
    if not isinstance(raw, dict):
        raise InputError("'cycles' must map names to walks")
    for name, body in raw.items():
        if isinstance(body, dict):
            if set(body) != {"designated"} or not isinstance(body["designated"], str):
                raise InputError(f"cycle {name!r}: expected {{\"designated\": <name>}}")
            cycles[name] = body["designated"]
        elif isinstance(body, list) and all(
                isinstance(s, list) and len(s) == 3 and all(_is_int(x) for x in s) for s in body):
            cycles[name] = body
        else:
            raise InputError(f"cycle {name!r}: expected a list of [tetrahedron, face, sign]")
    comps = []
    raw_comps = data.get("components", [])
    if not isinstance(raw_comps, list):
        raise InputError("'components' must be a list")
    for k, c in enumerate(raw_comps):
        if not isinstance(c, dict):
            raise InputError(f"component {k} must be an object")
        unknown = set(c) - _COMPONENT_FIELDS
        if unknown:
            raise InputError(f"component {k}: unknown fields {', '.join(sorted(unknown))}")
        if not isinstance(c.get("cycle"), str):
            raise InputError(f"component {k}: 'cycle' must name a cycle")
        if "pushoff" in c and "twist" in c:
            raise InputError(f"component {k}: give either 'pushoff' or 'twist', not both")
        if "pushoff" in c and not isinstance(c["pushoff"], str):
            raise InputError(f"component {k}: 'pushoff' must name a cycle")
        for key in ("twist", "charge"):
            if key in c and not _is_int(c[key]):
                raise InputError(f"component {k}: '{key}' must be an integer")
        comps.append(ComponentDecl(c["cycle"], c.get("pushoff"), c.get("twist"), c.get("charge")))
    return cycles, comps


def _read_link(path: str) -> Any:
    p = Path(path)
    if p.is_file():
        text = p.read_text(encoding="utf-8")
    else:
        packaged = resources.files("abelian_cs.examples").joinpath(path)
        if not packaged.is_file():
            raise InputError(f"link file {path!r} not found")
        text = packaged.read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"link file {path!r}: {exc}") from exc


def load_manifold(source: str) -> Triangulation:
    if source in BUILTIN_NAMES:
        return builtin(source)
    if Path(source).is_file():
        return load_triangulation(source)
    raise InputError(f"manifold {source!r} is neither a builtin ({', '.join(BUILTIN_NAMES)}) "
                     "nor a readable file")


# -- resolution ---------------------------------------------------------------


def resolve_cycles(M: Triangulation, declared: dict[str, list[list[int]] | str]) -> dict[str, DualCycle]:
    """Designated cycles of M plus the declared ones, all validated on M."""
    table = dict(M.designated)
    for name, body in declared.items():
        if isinstance(body, str):
            if body not in M.designated:
                raise LinkingError(f"cycle {name!r} refers to unknown designated cycle {body!r}")
            table[name] = M.designated[body].renamed(name)
        else:
            z = DualCycle(tuple(tuple(s) for s in body), name)
            M.validate_cycle(z)
            table[name] = z
    return table


def resolve_components(M: Triangulation, table: dict[str, DualCycle],
                       comps: Sequence[ComponentDecl]) -> list[FramedCycle]:
    def lookup(name: str) -> DualCycle:
        if name not in table:
            raise LinkingError(f"undeclared cycle {name!r}")
        return table[name]

    cores = [lookup(c.cycle) for c in comps]
    pushoffs: dict[int, DualCycle] = {}
    for k, c in enumerate(comps):
        if c.pushoff is not None:
            pushoffs[k] = lookup(c.pushoff)
    for k, c in enumerate(comps):
        if k in pushoffs:
            continue
        avoid = [z for j, z in enumerate(cores) if j != k] + list(pushoffs.values())
        w = default_pushoff(cores[k], M, c.twist or 0, avoid=avoid)
        pushoffs[k] = w.renamed(f"{c.cycle}_push")
    return [FramedCycle(cores[k], pushoffs[k], M) for k in range(len(comps))]


# -- reports ----------------------------------------------------------------


def _q(x: Fraction | int) -> str:
    return format_rational(x)


def report_homology(M: Triangulation) -> dict:
    groups = [M.complex.homology(k) for k in range(4)]
    return {
        "manifold": M.name,
        "f_vector": list(M.f_vector),
        "homology": [{"degree": k, "betti": g.betti, "torsion": list(g.torsion), "group": str(g)}
                     for k, g in enumerate(groups)],
    }


def report_classify(M: Triangulation, table: dict[str, DualCycle]) -> dict:
    rows = []
    for name in sorted(table):
        cls = classify(table[name], M)
        rows.append({
            "cycle": name,
            "length": len(table[name]),
            "kind": cls.kind,
            "degree": cls.degree,
            "witness": None if cls.witness is None
            else [[f, c] for f, c in cls.witness.coefficients.items()],
        })
    return {"manifold": M.name, "h1": str(M.complex.homology(1)), "cycles": rows}


def report_link(M: Triangulation, framed: Sequence[FramedCycle]) -> dict:
    n = len(framed)
    L = [[Fraction(0)] * n for _ in range(n)]
    comps = []
    for i, f in enumerate(framed):
        cls = classify(f.cycle, M)
        if cls.kind == FREE:
            raise UnsupportedManifoldError(
                f"unsupported manifold class: {f.name or 'cycle'} is free in H_1")
        L[i][i] = linking_number(f.cycle, f.pushoff, M, cls.witness, cls.degree).value
        for j, g in enumerate(framed):
            if j != i:
                L[i][j] = linking_number(f.cycle, g.cycle, M, cls.witness, cls.degree).value
        comps.append({"cycle": f.name, "pushoff": f.pushoff.name, "kind": cls.kind,
                      "degree": cls.degree, "self_linking": _q(L[i][i])})
    return {"manifold": M.name, "components": comps,
            "linking_matrix": [[_q(x) for x in row] for row in L]}


def report_wilson(M: Triangulation, framed: Sequence[FramedCycle], charges: Sequence[int],
                  level: int, digits: int | None) -> dict:
    link = WilsonLink(tuple(WilsonComponent(f, q) for f, q in zip(framed, charges)), M)
    r = evaluate(link, level)
    out = {
        "manifold": M.name,
        "level": level,
        "components": [
            {"cycle": c.name, "pushoff": f.pushoff.name, "kind": c.kind, "degree": c.degree,
             "charge": c.charge, "self_linking": _q(c.self_linking),
             "witness_crossings": c.witness_crossings}
            for c, f in zip(r.components, framed)],
        "linking_matrix": [[_q(x) for x in row] for row in r.linking_matrix],
        "phase": str(r.phase),
        "value": f"exp(2*pi*i*{r.phase})",
    }
    if digits is not None:
        out["decimal"] = render_decimal(r.phase, digits)
    return out


def _table(rows: Sequence[Sequence[str]]) -> list[str]:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]


def render_text(command: str, rep: dict) -> str:
    lines = [f"manifold: {rep['manifold']}"]
    if command == "homology":
        lines.append("f-vector: " + " ".join(map(str, rep["f_vector"])))
        lines += _table([["degree", "betti", "torsion", "group"]] + [
            [f"H_{h['degree']}", str(h["betti"]), str(h["torsion"]), h["group"]]
            for h in rep["homology"]])
    elif command == "classify":
        lines.append(f"H_1: {rep['h1']}")
        lines += _table([["cycle", "length", "kind", "degree", "witness faces"]] + [
            [r["cycle"], str(r["length"]), r["kind"], str(r["degree"]),
             "-" if r["witness"] is None else str(len(r["witness"]))]
            for r in rep["cycles"]])
    else:
        if command == "wilson":
            lines.append(f"level: {rep['level']}")
        head = ["component", "pushoff", "kind", "degree"]
        head += ["charge", "self-linking"] if command == "wilson" else ["self-linking"]
        body = []
        for c in rep["components"]:
            row = [c["cycle"], c["pushoff"], c["kind"], str(c["degree"])]
            row += [str(c["charge"]), c["self_linking"]] if command == "wilson" else [c["self_linking"]]
            body.append(row)
        lines += _table([head] + body)
        lines.append("linking matrix:")
        lines += ["  " + r for r in _table(rep["linking_matrix"])]
        if command == "wilson":
            lines.append(f"phase: {rep['phase']}")
            lines.append(f"value: {rep['value']}")
            if "decimal" in rep:
                lines.append(f"decimal: {rep['decimal']}")
    return "\n".join(lines) + "\n"


# -- entry point --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="abelian-cs",
        description="Exact abelian Chern-Simons Wilson lines on triangulated 3-manifolds.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, link: bool) -> None:
        p.add_argument("--manifold", required=True,
                       help=f"builtin ({', '.join(BUILTIN_NAMES)}) or triangulation file")
        if link:
            p.add_argument("--link", help="link file (path, or name of a packaged example)")
        p.add_argument("--output", help="write the report here instead of stdout")
        p.add_argument("--format", choices=("text", "json"), default="text")

    common(sub.add_parser("homology", help="integral homology H_0..H_3"), link=False)
    common(sub.add_parser("classify", help="classify designated or declared cycles"), link=True)
    common(sub.add_parser("link", help="linking matrix of framed components"), link=True)
    w = sub.add_parser("wilson", help="Wilson-line expectation value")
    common(w, link=True)
    w.add_argument("--level", type=int, required=True)
    w.add_argument("--charges", help="comma-separated charges overriding the link file")
    w.add_argument("--decimal-digits", type=int, help="also print the value with this many digits")
    return parser


def _parse_charges(text: str | None) -> list[int] | None:
    if text is None:
        return None
    try:
        return [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise InputError(f"bad --charges {text!r}: expected comma-separated integers") from exc


def run(args: argparse.Namespace) -> tuple[int, str]:
    """Execute one job; returns (exit status, report or diagnostic)."""
    try:
        job = JobSpec(args.command, args.manifold,
                      level=getattr(args, "level", None),
                      charges=_parse_charges(getattr(args, "charges", None)))
        if getattr(args, "link", None):
            job.cycles, job.components = parse_link(_read_link(args.link))
        elif args.command in ("link", "wilson"):
            raise InputError(f"{args.command} needs --link")
        digits = getattr(args, "decimal_digits", None)
        if digits is not None and digits < 1:
            raise InputError("--decimal-digits must be positive")
        M = load_manifold(job.manifold)
        if job.command == "homology":
            rep = report_homology(M)
        else:
            table = resolve_cycles(M, job.cycles)
            if job.command == "classify":
                if job.components or job.cycles:
                    names = {c.cycle for c in job.components} | set(job.cycles)
                    table = {k: v for k, v in table.items() if k in names}
                rep = report_classify(M, table)
            else:
                if not job.components:
                    raise InputError("link file declares no components")
                if job.command == "wilson":
                    # level first, so a bad level is reported before any cycle work
                    lv = check_level(job.level, M)
                    if not lv:
                        raise ConstraintViolation(lv)
                    charges = job.charges or [c.charge for c in job.components]
                    if len(charges) != len(job.components) or any(q is None for q in charges):
                        raise InputError("every component needs a charge (link file or --charges)")
                framed = resolve_components(M, table, job.components)
                if job.command == "link":
                    rep = report_link(M, framed)
                else:
                    rep = report_wilson(M, framed, charges, job.level, digits)
    except (InputError, ParseError, OSError) as exc:
        return EXIT_PARSE, f"error: {exc}\n"
    except ConstraintViolation as exc:
        return EXIT_CONSTRAINT, f"constraint rejected: {exc}\n"
    except UnsupportedManifoldError as exc:
        return EXIT_UNSUPPORTED, f"error: {exc}\n"
    except (TriangulationError, LinkingError, ValueError) as exc:
        return EXIT_VALIDATION, f"validation error: {exc}\n"
    if args.format == "json":
        return EXIT_OK, json.dumps(rep, indent=2) + "\n"
    return EXIT_OK, render_text(args.command, rep)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    status, text = run(args)
    if status == EXIT_OK and args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        (sys.stdout if status == EXIT_OK else sys.stderr).write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
