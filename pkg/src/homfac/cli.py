"""Command-line interface: ``homfac <command> ...``.

Graph and factorisation arguments accept either a file path or a named
object:

* ``gpaley(q,val)`` / ``tgpaley(q,val)``: graphs named by order and valency;
* ``gpaley:p,R,k`` / ``tgpaley:p,R,h`` / ``hamming:a,b`` (also ``hamming(a,b)``);
* ``psl28-factor``: the first factor of the PSL(2,8) factorisation of K_28;
* ``gpaley-partition(p,R,k)``, ``tgpaley-partition(p,R,h)``, ``psl28``:
  factorisations, with their groups attached.

Exit codes: 0 success, 1 verification failure, 2 invalid parameters,
3 parse error, 4 cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path
from typing import Any, Sequence

from . import designs, graphs, homfac, iso, onedim
from .errors import CapExceeded, InvalidParameters, ParseError, VerificationFailed
from .ffield import DEFAULT_FIELD_CAP
from .perm import DEFAULT_CLOSURE_CAP

SCHEMA = "homfac/1"

EXIT_OK, EXIT_FAILED, EXIT_INVALID, EXIT_PARSE, EXIT_CAP = 0, 1, 2, 3, 4

_NAMED = re.compile(r"^([a-z0-9-]+)(?:\(([^)]*)\)|:(.*))?$")


def _ints(text: str | None) -> list[int]:
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise InvalidParameters(f"expected comma-separated integers, got {text!r}") from exc


def _prime_power(q: int) -> tuple[int, int]:
    from sympy import factorint

    fac = factorint(q)
    if q < 2 or len(fac) != 1:
        raise InvalidParameters(f"{q} is not a prime power")
    (p, R), = fac.items()
    return int(p), int(R)


def _split_named(spec: str) -> tuple[str, list[int], bool] | None:
    """(name, args, by_order) for a named object, None for a file path."""
    if Path(spec).exists():
        return None
    m = _NAMED.match(spec.strip().lower())
    if not m:
        return None
    name, paren, colon = m.groups()
    return name, _ints(paren if paren is not None else colon), paren is not None


def resolve_graph(spec: str) -> graphs.Graph:
    named = _split_named(spec)
    if named is None:
        return graphs.Graph.from_text(_read(spec))
    name, args, by_order = named
    if name in ("gpaley", "tgpaley"):
        if by_order:
            if len(args) != 2:
                raise InvalidParameters(f"{name}(q,val) takes two integers")
            q, val = args
            p, R = _prime_power(q)
            if val < 1 or (q - 1) % val:
                raise InvalidParameters(f"valency {val} does not divide q-1 = {q - 1}")
            third = (q - 1) // val if name == "gpaley" else (q - 1) // (2 * val)
            if name == "tgpaley" and (q - 1) % (2 * val):
                raise InvalidParameters(f"valency {val}: (q-1)/val must be even for the twisted graph")
            args = [p, R, third]
        if len(args) != 3:
            raise InvalidParameters(f"{name} takes p,R,k")
        return graphs.gpaley(*args) if name == "gpaley" else graphs.tgpaley(*args)
    if name == "hamming":
        if len(args) != 2:
            raise InvalidParameters("hamming takes a,b")
        return graphs.hamming(*args)
    if name == "psl28-factor":
        return homfac.psl28_factorisation().factor(0)
    raise InvalidParameters(f"unknown graph {spec!r}")


def resolve_factorisation(spec: str) -> homfac.Factorisation:
    named = _split_named(spec)
    if named is None:
        return homfac.Factorisation.from_text(_read(spec), label=spec)
    name, args, _ = named
    if name == "gpaley-partition" and len(args) == 3:
        return homfac.gpaley_partition(*args)
    if name == "tgpaley-partition" and len(args) == 3:
        return homfac.tgpaley_partition(*args)
    if name == "psl28" and not args:
        return homfac.psl28_factorisation()
    raise InvalidParameters(f"unknown factorisation {spec!r}")


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


# -- output ------------------------------------------------------------------------------
def _emit(args: argparse.Namespace, command: str, result: Any) -> None:
    if args.format == "json":
        text = json.dumps({"schema": SCHEMA, "command": command, "result": result}, indent=2, sort_keys=True)
    else:
        text = _as_text(result)
    print(text)


def _as_text(result: Any, indent: str = "") -> str:
    if isinstance(result, dict):
        lines = []
        for key in sorted(result):
            val = result[key]
            if isinstance(val, (dict, list)) and val and not _flat(val):
                lines.append(f"{indent}{key}:")
                lines.append(_as_text(val, indent + "  "))
            else:
                lines.append(f"{indent}{key}: {json.dumps(val, sort_keys=True)}")
        return "\n".join(lines)
    if isinstance(result, list):
        return "\n".join(
            f"{indent}-\n" + _as_text(x, indent + "  ") if isinstance(x, dict) else f"{indent}- {json.dumps(x)}"
            for x in result
        )
    return f"{indent}{result}"


def _flat(val) -> bool:
    items = val.values() if isinstance(val, dict) else val
    return all(not isinstance(x, (dict, list)) for x in items)


def _write(path: str | Path, text: str) -> None:
    Path(path).write_text(text)


# -- commands ------------------------------------------------------------------------------
def cmd_construct(args: argparse.Namespace) -> int:
    kind = args.kind.lower()
    params = args.params
    if kind in ("gpaley-partition", "tgpaley-partition", "psl28"):
        f = resolve_factorisation(f"{kind}({','.join(map(str, params))})" if params else kind)
        if args.out:
            _write(args.out, f.to_text())
            for tag, grp in (("M", f.m_group), ("G", f.g_group)):
                if grp is not None:
                    _write(f"{args.out}.{tag}.gens", homfac.gens_to_text(grp))
        elif args.format == "text":
            sys.stdout.write(f.to_text())
            return EXIT_OK
        _emit(args, "construct", {"n": f.n, "k": f.k, "label": f.label, "valencies": [len(e) * 2 // f.n for e in f.parts]})
        return EXIT_OK
    if kind == "psl28-factor":
        g = resolve_graph("psl28-factor")
    elif kind in ("gpaley", "tgpaley", "hamming"):
        g = resolve_graph(f"{kind}:{','.join(map(str, params))}")
    else:
        raise InvalidParameters(f"unknown kind {args.kind!r}")
    if args.out:
        _write(args.out, g.to_text())
    elif args.format == "text":
        sys.stdout.write(g.to_text())
        return EXIT_OK
    _emit(args, "construct", g.summary())
    return EXIT_OK


def cmd_enumerate(args: argparse.Namespace) -> int:
    if args.p < 2 or args.R < 1:
        raise InvalidParameters("need a prime p and R >= 1")
    from sympy import isprime

    if not isprime(args.p):
        raise InvalidParameters(f"p = {args.p} is not prime")
    if args.p**args.R > args.field_cap:
        raise CapExceeded(f"p^R = {args.p**args.R} exceeds the field cap {args.field_cap}")
    rows = onedim.enumerate_solutions(args.p, args.R)
    out = []
    failed = False
    for i, row in enumerate(rows):
        item = row.to_json()
        if args.realize:
            f = onedim.generic_construction(args.p, args.R, row)
            rep = homfac.verify_factorisation(f, iso_cap=args.iso_cap)
            item["verification"] = rep.to_json()
            failed |= not rep.ok
            if args.out:
                outdir = Path(args.out)
                outdir.mkdir(parents=True, exist_ok=True)
                path = outdir / f"row{i + 1:03d}.fact"
                _write(path, f.to_text())
                item["file"] = path.name
        out.append(item)
    _emit(args, "enumerate", out)
    return EXIT_FAILED if failed else EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    f = resolve_factorisation(args.factorisation)
    if args.m_gens:
        f.m_group = homfac.gens_from_text(_read(args.m_gens))
    if args.g_gens:
        f.g_group = homfac.gens_from_text(_read(args.g_gens))
    for grp in (f.m_group, f.g_group):
        if grp is not None and grp.degree != f.n:
            raise ParseError("generator degree does not match the factorisation")
    rep = homfac.verify_factorisation(f, iso_cap=args.iso_cap)
    _emit(args, "verify", rep.to_json())
    return EXIT_OK if rep.ok else EXIT_FAILED


def cmd_iso(args: argparse.Namespace) -> int:
    g1, g2 = resolve_graph(args.g1), resolve_graph(args.g2)
    same, witness = iso.are_isomorphic(g1, g2, cap=args.iso_cap)
    result = {"isomorphic": same, "witness": witness.images.tolist() if witness is not None else None}
    _emit(args, "iso", result)
    return EXIT_OK


def cmd_aut(args: argparse.Namespace) -> int:
    g = resolve_graph(args.graph)
    A = iso.automorphism_group(g, cap=args.iso_cap)
    _emit(args, "aut", {"order": A.order, "generators": [x.images.tolist() for x in A.generators]})
    return EXIT_OK


def cmd_design(args: argparse.Namespace) -> int:
    f = resolve_factorisation(args.factorisation)
    d = designs.extract_design(f)
    if args.out:
        _write(args.out, d.to_text())
    result = d.summary()
    result["verified"] = bool(designs.verify_design(d))
    _emit(args, "design", result)
    return EXIT_OK


def cmd_tables(args: argparse.Namespace) -> int:
    rows = homfac.twodim_table_rows(args.q, args.base, closure_cap=args.closure_cap)
    out = []
    for row in rows:
        item = row.to_json()
        if args.aut:
            if args.q > 11:
                raise CapExceeded("automorphism orders are only computed for q <= 11")
            item["aut_order"] = iso.automorphism_group(row.orbital_graph(), cap=args.iso_cap).order
        out.append(item)
    _emit(args, "tables", out)
    return EXIT_OK


# -- parser -------------------------------------------------------------------------------
def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("caps must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="json")
    common.add_argument("--out", help="output file (or directory for enumerate --realize)")
    common.add_argument("--closure-cap", type=_positive, default=DEFAULT_CLOSURE_CAP)
    common.add_argument("--iso-cap", type=_positive, default=iso.DEFAULT_ISO_CAP)
    common.add_argument("--field-cap", type=_positive, default=DEFAULT_FIELD_CAP)

    parser = argparse.ArgumentParser(prog="homfac", description="Homogeneous factorisations of complete graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", parents=[common], help="build a graph or factorisation")
    p.add_argument("kind", help="gpaley, tgpaley, hamming, psl28-factor, gpaley-partition, tgpaley-partition, psl28")
    p.add_argument("params", nargs="*", type=int)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("enumerate", parents=[common], help="one-dimensional parameter solutions")
    p.add_argument("p", type=int)
    p.add_argument("R", type=int)
    p.add_argument("--realize", action="store_true", help="build and verify each factorisation")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("verify", parents=[common], help="verify a factorisation")
    p.add_argument("factorisation")
    p.add_argument("m_gens", nargs="?")
    p.add_argument("g_gens", nargs="?")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("iso", parents=[common], help="graph isomorphism")
    p.add_argument("g1")
    p.add_argument("g2")
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("aut", parents=[common], help="automorphism group")
    p.add_argument("graph")
    p.set_defaults(func=cmd_aut)

    p = sub.add_parser("design", parents=[common], help="extract a 2-design")
    p.add_argument("factorisation")
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("tables", parents=[common], help="two-dimensional table rows")
    p.add_argument("q", type=int)
    p.add_argument("base", help="Q8, SL23 or SL25")
    p.add_argument("--aut", action="store_true", help="add |Aut| of each orbital graph (q <= 11)")
    p.set_defaults(func=cmd_tables)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InvalidParameters as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except VerificationFailed as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
