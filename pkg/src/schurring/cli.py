"""Command-line interface.

Exit codes: 0 success (or "isomorphic" / "separable"), 1 negative verdict
("not isomorphic" / "not separable"), 2 usage, parse, shape or size error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .abelian import DESK_BOUND, AbelianGroup, parse_element, parse_group
from .catalogue import (
    TABLES,
    enumerate_srings,
    separability_sweep,
    check_separability,
    table_group_order,
    table_sring,
)
from .comiso import aut_group_order, graph_iso_pipeline_result
from .construct import closure
from .errors import SchurError
from .sring import SRing, dump, sring_radical, valency_profile
from .wl import scheme_from_cayley_graph

EXIT_OK, EXIT_NEGATIVE, EXIT_ERROR = 0, 1, 2


@dataclass(frozen=True)
class Config:
    max_order: int = 32
    fmt: str = "text"
    seed: int = 0
    verbose: bool = False


class _Bail(Exception):
    pass


def read_connection_set(path: str | Path, G: AbelianGroup) -> frozenset:
    """One element literal per line; ``#`` starts a comment.

    For cyclic groups a bare integer is accepted as well as ``(3)``.
    """
    text = Path(path).read_text()
    out = set()
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not line.startswith("("):
            line = f"({line})"
        out.add(parse_element(line, G))
    return frozenset(out)


def _group(text: str, cfg: Config) -> AbelianGroup:
    G = parse_group(text)
    if G.order > cfg.max_order:
        raise _Bail(f"|{G.name}| = {G.order} exceeds --max-order {cfg.max_order}")
    return G


def sring_record(A: SRing) -> dict:
    return {"group": A.group.name, "rank": A.rank, "classes": A.literal_classes()}


# -- subcommands -------------------------------------------------------------------------


def cmd_scheme(args, cfg: Config):
    G = _group(args.group, cfg)
    X = read_connection_set(args.file, G)
    A = scheme_from_cayley_graph(G, X)
    return EXIT_OK, sring_record(A), dump(A, with_tensor=args.tensor)


def cmd_closure(args, cfg: Config):
    G = _group(args.group, cfg)
    seeds = [read_connection_set(f, G) for f in args.files]
    A = closure(G, seeds)
    return EXIT_OK, sring_record(A), dump(A)


def cmd_aut(args, cfg: Config):
    G = _group(args.group, cfg)
    A = scheme_from_cayley_graph(G, read_connection_set(args.file, G))
    n = aut_group_order(A, bound=cfg.max_order)
    return EXIT_OK, {"group": G.name, "rank": A.rank, "aut_order": n}, f"aut {G.name} rank={A.rank} order={n}\n"


def cmd_iso(args, cfg: Config):
    G = _group(args.group_a, cfg)
    H = _group(args.group_b, cfg)
    X = read_connection_set(args.file_a, G)
    Y = read_connection_set(args.file_b, H)
    res = graph_iso_pipeline_result(G, X, H, Y)
    rec = {"isomorphic": res.isomorphic, "reason": res.reason}
    lines = [f"verdict {'iso' if res.isomorphic else 'non-iso'} reason={res.reason}"]
    if res.isomorphic:
        cert = res.certificate
        table = [[G.literal(g), H.literal(int(h))] for g, h in enumerate(cert.point_map.table)]
        rec.update(strategy=cert.detail, point_map=table, class_map=list(cert.induced.class_map))
        lines.append(f"strategy {cert.detail}")
        lines.append(cert.point_map.dump().rstrip("\n"))
    return (EXIT_OK if res.isomorphic else EXIT_NEGATIVE), rec, "\n".join(lines) + "\n"


def cmd_enumerate(args, cfg: Config):
    G = _group(args.group, cfg)
    rings = enumerate_srings(G, method=args.method, up_to=args.up_to, bound=cfg.max_order)
    rec = {"group": G.name, "count": len(rings), "srings": [sring_record(A) for A in rings]}
    text = f"enumerate {G.name} count={len(rings)}\n" + "".join(dump(A) for A in rings)
    return EXIT_OK, rec, text


def cmd_catalogue(args, cfg: Config):
    p, i, k = args.p, args.i, args.k
    if p ** (k + 1) > max(cfg.max_order, DESK_BOUND):
        raise _Bail(f"|D| = {p ** (k + 1)} exceeds the desk bound {DESK_BOUND}")
    A = table_sring(p, i, k)
    order = table_group_order(p, i, k)
    N = sorted(valency_profile(A))
    rad = sring_radical(A).order
    rec = {"p": p, "i": i, "k": k, "order": order, "table_order": TABLES[p][i].order,
           "valencies": N, "radical_order": rad, "sring": sring_record(A)}
    head = f"catalogue p={p} K{i} k={k} order={order} N={{{','.join(map(str, N))}}} rad={rad}\n"
    return EXIT_OK, rec, head + dump(A)


def cmd_separability(args, cfg: Config):
    G = _group(args.group, cfg)
    if args.sample:
        rings = enumerate_srings(G, up_to="aut", bound=cfg.max_order)
        rng = random.Random(cfg.seed)
        chosen = sorted(rng.sample(range(len(rings)), min(args.sample, len(rings))))
        rep = None
        for j in chosen:
            rep = check_separability(rings[j], a_id=str(j), confirm_brute=args.brute, report=rep)
    else:
        rep = separability_sweep(G, confirm_brute=args.brute)
    rec = {"group": G.name, "separable": rep.separable, "induced": rep.induced, "empty": rep.empty,
           "errors": rep.errors, "methods": dict(sorted(rep.methods.items())), "lines": rep.lines}
    tail = f"summary separable={str(rep.separable).lower()} induced={rep.induced} empty={rep.empty} errors={rep.errors}\n"
    return (EXIT_OK if rep.separable else EXIT_NEGATIVE), rec, rep.text() + tail


# -- entry point ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    common.add_argument("--max-order", type=int, default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)

    ap = argparse.ArgumentParser(prog="schurring", description=__doc__.splitlines()[0], parents=[common])
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("scheme", parents=[common], help="least Cayley scheme containing Cay(G, X)")
    s.add_argument("group")
    s.add_argument("file")
    s.add_argument("--tensor", action="store_true", help="include nonzero structure constants")
    s.set_defaults(func=cmd_scheme)

    s = sub.add_parser("closure", parents=[common], help="least S-ring containing the given sets")
    s.add_argument("group")
    s.add_argument("files", nargs="+")
    s.set_defaults(func=cmd_closure)

    s = sub.add_parser("aut", parents=[common], help="order of the automorphism group of the scheme")
    s.add_argument("group")
    s.add_argument("file")
    s.set_defaults(func=cmd_aut)

    s = sub.add_parser("iso", parents=[common], help="isomorphism test for two Cayley graphs")
    s.add_argument("group_a")
    s.add_argument("file_a")
    s.add_argument("group_b")
    s.add_argument("file_b")
    s.set_defaults(func=cmd_iso)

    s = sub.add_parser("enumerate", parents=[common], help="all S-rings over a group")
    s.add_argument("group")
    s.add_argument("--method", choices=("rational", "partition"), default="rational")
    s.add_argument("--up-to", choices=("none", "aut"), default="none")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("catalogue", parents=[common], help="cyc(K_i, C_p x C_p^k) from the tables")
    s.add_argument("p", type=int)
    s.add_argument("i", type=int)
    s.add_argument("k", type=int)
    s.set_defaults(func=cmd_catalogue)

    s = sub.add_parser("separability", parents=[common], help="induce every algebraic isomorphism")
    s.add_argument("group")
    s.add_argument("--brute", action="store_true", help="confirm with the brute-force finder")
    s.add_argument("--sample", type=int, default=0, help="check only this many random S-rings")
    s.set_defaults(func=cmd_separability)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_ERROR
    cfg = Config(
        max_order=getattr(args, "max_order", 32),
        fmt=getattr(args, "format", "text"),
        seed=getattr(args, "seed", 0),
        verbose=getattr(args, "verbose", False),
    )
    try:
        code, record, text = args.func(args, cfg)
    except (SchurError, _Bail, ValueError, OSError) as e:
        if cfg.fmt == "json":
            print(json.dumps({"error": type(e).__name__, "message": str(e)}))
        else:
            print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    if cfg.fmt == "json":
        print(json.dumps({"command": args.command, "exit": code, **record}, sort_keys=True))
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
