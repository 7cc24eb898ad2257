"""Command-line front end.

Exit codes: 0 when a definite verdict is reached, 1 when the result is
inconclusive, 2 on bad input.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import reproduce
from .certificate import Certificate, extension_to_dict
from .criterion import Bounds, direct_certificate, incoherence_certificate
from .fpgroups import abelianization, extension_h1, semidirect_presentation, subgroup_names
from .groupfile import GroupFileError, is_presentation_file, parse_group, parse_presentation
from .replay import ReplayError, replay
from .search import virtual_verdict
from .words import format_word

EXIT_VERDICT, EXIT_INCONCLUSIVE, EXIT_INPUT = 0, 1, 2


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _load(path: str):
    return parse_group(_read(path))


def _bounds(args: argparse.Namespace) -> Bounds:
    return Bounds(
        probe_length=args.probe_length,
        max_fiber_index=args.max_fiber_index,
        max_index=args.max_index,
        strategy=args.strategy,
    )


def _emit(cert: Certificate, args: argparse.Namespace, lines: list[str]) -> int:
    if args.format == "machine":
        sys.stdout.write(cert.dumps())
    else:
        print("\n".join(lines))
    if getattr(args, "certificate", None):
        Path(args.certificate).write_text(cert.dumps())
    return EXIT_VERDICT if cert.conclusive else EXIT_INCONCLUSIVE


def _character_lines(cert: Certificate) -> list[str]:
    return [f"  character: ({', '.join(c)})" for c in cert.characters]


def cmd_check(args: argparse.Namespace) -> int:
    gf = _load(args.file)
    e = gf.extension
    h1 = extension_h1(e)
    cert = direct_certificate(e)
    if cert is None:
        cert = Certificate(
            verdicts=("Inconclusive",),
            route="R1",
            data={"extension": extension_to_dict(e), "h1": str(h1), "reason": "not excessive"},
        )
        summary = f"H1 = {h1}; not excessive; inconclusive"
    elif "Incoherent" in cert.verdicts:
        summary = f"H1 = {h1}; excessive; incoherent (route R1)"
    else:
        summary = f"H1 = {h1}; excessive; algebraically fibers (incoherence needs a non-fibering fiber and base rank >= 2)"
    lines = [f"{gf.name}: {summary}"] + _character_lines(cert)
    if cert.theorems:
        lines.append("  results used: " + ", ".join(cert.theorems))
    lines += [f"  assumption: {a}" for a in cert.assumptions]
    return _emit(cert, args, lines)


def _describe_subgroup(desc: dict) -> str:
    parts = [f"kind {desc.get('kind')}", f"index {desc.get('index')}"]
    if "fiber_index" in desc:
        parts.append(f"fiber index {desc['fiber_index']}")
    return ", ".join(parts)


def cmd_search(args: argparse.Namespace) -> int:
    gf = _load(args.file)
    e = gf.extension
    bounds = _bounds(args)
    cert = incoherence_certificate(e, bounds) if e.base_rank >= 2 else virtual_verdict(e, bounds)
    h1 = extension_h1(e)
    lines = [f"{gf.name}: H1 = {h1}"]
    if not cert.conclusive:
        lines.append(f"  inconclusive within bounds {bounds.to_dict()}")
        lines.append(f"  reason: {cert.data.get('reason', '')}")
    elif cert.route == "R1":
        lines.append("  excessive already; " + ("incoherent (route R1)" if "Incoherent" in cert.verdicts else "fibers"))
    elif cert.route == "R2":
        lines.append("  a base word acts by an inner automorphism; contains F2 x F2; incoherent (route R2)")
        lines.append(f"  F2 x F2 generators: {', '.join(cert.witness['f2xf2_generators'])}")
    else:
        hit = cert.data["hit"]
        desc = cert.data["descriptor"]
        tags = ["virtually fibers"] + (["incoherent"] if "Incoherent" in cert.verdicts else [])
        lines.append(f"  found subgroup ({_describe_subgroup(desc)}) via {hit['strategy']}")
        lines.append(f"  subgroup H1 = {hit['h1']} over base rank {hit['base_rank']}")
        if desc.get("fiber_basis"):
            names = subgroup_names(len(desc["fiber_basis"]), 0)["fiber_names"]
            fnames = e.fiber_names or None
            lines.append("  fiber basis: " + ", ".join(
                f"{n} = {format_word(w, fnames)}" for n, w in zip(names, desc["fiber_basis"])))
        if desc.get("base_basis"):
            bnames = e.base_names or None
            lines.append("  base basis: " + ", ".join(format_word(w, bnames) for w in desc["base_basis"]))
        lines += _character_lines(cert)
        lines.append("  " + "; ".join(tags) + f" (route {cert.route})")
    if cert.theorems:
        lines.append("  results used: " + ", ".join(cert.theorems))
    lines += [f"  assumption: {a}" for a in cert.assumptions]
    return _emit(cert, args, lines)


def cmd_reproduce(args: argparse.Namespace) -> int:
    rep = reproduce.run(reproduce.tampered() if args.tamper else None)
    print("\n".join(rep.lines()))
    print("all checks match" if rep.ok else "MISMATCH against embedded golden values")
    return EXIT_VERDICT if rep.ok else EXIT_INCONCLUSIVE


def cmd_abelianize(args: argparse.Namespace) -> int:
    text = _read(args.file)
    if is_presentation_file(text):
        p = parse_presentation(text)
        print(f"presentation: {abelianization(p)}")
        return EXIT_VERDICT
    e = parse_group(text).extension
    formula = extension_h1(e)
    print(f"formula:      {formula}")
    if e.fiber_mode == "abelian":
        print("presentation: unavailable for abelian fiber data")
        return EXIT_VERDICT
    direct = abelianization(semidirect_presentation(e))
    print(f"presentation: {direct}")
    if formula != direct:
        print("the two computations disagree", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_VERDICT


def cmd_replay(args: argparse.Namespace) -> int:
    try:
        cert = Certificate.loads(_read(args.certificate_file))
        verdicts = replay(cert)
    except ReplayError as exc:
        print(f"replay failed: {exc}", file=sys.stderr)
        return EXIT_INPUT
    recorded = Certificate(verdicts=cert.verdicts, route=cert.route).dumps().splitlines()[0]
    again = Certificate(verdicts=verdicts, route=cert.route).dumps().splitlines()[0]
    print(again)
    if recorded != again:
        print(f"recorded {recorded}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_INCONCLUSIVE if "Inconclusive" in verdicts else EXIT_VERDICT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="freebyfree", description="Excessive homology and incoherence for H x| F_k.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=["text", "machine"], default="text")
        p.add_argument("--certificate", metavar="PATH", help="also write the certificate to PATH")

    p = sub.add_parser("check", help="direct excessive-homology check")
    p.add_argument("file")
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("search", help="search finite-index subgroups for excessive homology")
    p.add_argument("file")
    d = Bounds()
    p.add_argument("--max-index", type=int, default=d.max_index)
    p.add_argument("--max-fiber-index", type=int, default=d.max_fiber_index)
    p.add_argument("--strategy", choices=["orbit", "lowindex", "both"], default=d.strategy)
    p.add_argument("--probe-length", type=int, default=d.probe_length)
    common(p)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("reproduce", help="recompute the F2 x| F2 stabilizer example against golden values")
    p.add_argument("--tamper", action="store_true", help="use a corrupted golden fixture (negative control)")
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("abelianize", help="H1 by the extension formula and from the presentation")
    p.add_argument("file")
    p.set_defaults(func=cmd_abelianize)

    p = sub.add_parser("replay", help="recompute a certificate's verdict from its own data")
    p.add_argument("certificate_file")
    p.set_defaults(func=cmd_replay)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_VERDICT
    try:
        return args.func(args)
    except (GroupFileError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
