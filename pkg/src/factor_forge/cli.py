"""Command-line front end: construct, verify, decide, search and export."""
from __future__ import annotations

import argparse
import re
import sys
from pathlib import Path

from .calculus import ctype
from .catalog import UNSAT, BudgetExceeded, Catalog, SearchBudget, default_catalog
from .detach import DetachmentFailed, detach
from .layering import LayerPlan, LayerPlanError, layer
from .model import COMPLETE, GraphSpec, dumps, loads
from .solvers import (
    CONSTRUCTED,
    KNOWN_UNSOLVABLE,
    OPEN_CASE,
    UNSUPPORTED,
    HwpInstance,
    SmallEvenParams,
    Verdict,
    solve_alpha_resolvable,
    solve_HWP,
    solve_OP,
    solve_small_even,
)
from .verify import verify_all, verify_holey

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_UNSOLVABLE = 2
EXIT_OPEN = 3
EXIT_UNSUPPORTED = 4
EXIT_BUDGET = 5
EXIT_USAGE = 64
EXIT_DATA = 65

STATUS_EXIT = {
    CONSTRUCTED: EXIT_OK,
    KNOWN_UNSOLVABLE: EXIT_UNSOLVABLE,
    OPEN_CASE: EXIT_OPEN,
    UNSUPPORTED: EXIT_UNSUPPORTED,
}
DECIDE_WORD = {
    CONSTRUCTED: "solvable-by",
    KNOWN_UNSOLVABLE: "known-unsolvable",
    OPEN_CASE: "open",
    UNSUPPORTED: "unsupported",
}

_TYPE_RE = re.compile(r"^\[?\s*\d+(\s*,\s*\d+)*\s*\]?$")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(EXIT_USAGE)


def parse_type(text: str) -> tuple[int, ...]:
    """``[3,4]`` or ``3,4`` as a cycle type."""
    text = text.strip()
    if not _TYPE_RE.match(text):
        raise argparse.ArgumentTypeError(f"malformed cycle type {text!r}")
    vals = [int(x) for x in text.strip("[] ").split(",")]
    if any(v < 2 for v in vals):
        raise argparse.ArgumentTypeError(f"cycle lengths must be at least 2 in {text!r}")
    return ctype(vals)


def parse_type_list(text: str) -> list[tuple[int, ...]]:
    """``;``-separated cycle types; empty text gives an empty list."""
    text = text.strip()
    if not text:
        return []
    return [parse_type(part) for part in text.split(";")]


def _common(p: argparse.ArgumentParser, graph=True):
    if graph:
        p.add_argument("--lambda", dest="lam", type=int, default=1)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--m", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=10**7, help="search node limit")
    p.add_argument("--cache", help="catalog cache directory (defaults to $FACTOR_FORGE_CACHE)")
    p.add_argument("-o", "--output", help="write JSON here instead of stdout")


def _problem_parsers(sub, witness_flag: bool):
    out = {}
    op = sub.add_parser("op", help="uniform 2-factor type")
    op.add_argument("--type", dest="T", type=parse_type, required=True)
    hwp = sub.add_parser("hwp", help="two 2-factor types with prescribed counts")
    hwp.add_argument("--t1", type=parse_type, required=True)
    hwp.add_argument("--t2", type=parse_type, required=True)
    hwp.add_argument("--alpha", type=int, required=True)
    hwp.add_argument("--gamma", type=int, help="defaults to the remaining number of 2-factors")
    al = sub.add_parser("alpha", help="alpha-resolvable cycle decomposition")
    al.add_argument("--len", dest="cycle_len", type=int, required=True, help="base cycle length (3 or 4)")
    al.add_argument("--alpha", type=int, required=True)
    se = sub.add_parser("small-even", help="small even order families")
    for x in "abcdey":
        se.add_argument(f"--{x}", type=int, default=0)
    se.add_argument("--primes", type=parse_type_list, default=[], help="T' types, ';'-separated")
    se.add_argument("--beta", type=int)
    se.add_argument("--fillers", type=parse_type_list, default=[], help="blockwise fillers, ';'-separated")
    for p in (op, hwp, al, se):
        _common(p)
        if witness_flag:
            p.add_argument("--witness", action="store_true", help="also emit the witness")
    out.update(op=op, hwp=hwp, alpha=al, **{"small-even": se})
    if not witness_flag:
        de = sub.add_parser("detach", help="detach a factorization of lambda*m K_n")
        de.add_argument("--input", required=True)
        de.add_argument("--m", type=int, required=True)
        de.add_argument("--lambda", dest="lam", type=int)
        _common(de, graph=False)
        la = sub.add_parser("layer", help="layer factorizations of mu_i K_n")
        la.add_argument("--layer", dest="layers", action="append", required=True,
                        help="FILE or FILE@x for x stacked copies")
        la.add_argument("--fillers", type=parse_type_list, default=[])
        _common(la, graph=False)
    return out


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="factor-forge", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    c = sub.add_parser("construct", help="build and emit a verified witness")
    _problem_parsers(c.add_subparsers(dest="problem", required=True, parser_class=_Parser), False)
    d = sub.add_parser("decide", help="report a verdict and the conditions checked")
    _problem_parsers(d.add_subparsers(dest="problem", required=True, parser_class=_Parser), True)
    v = sub.add_parser("verify", help="check claims about a JSON decomposition")
    v.add_argument("file")
    v.add_argument("--type", dest="ftype", type=parse_type_list, help="factorization type, ';'-separated")
    v.add_argument("--profile", help="resolution profile, e.g. 1,1,2")
    v.add_argument("--holey", action="store_true", help="classes are holey 2-factors")
    s = sub.add_parser("search", help="direct catalog search for a factorization type")
    s.add_argument("--types", type=parse_type_list, required=True, help="one type per class, ';'-separated")
    _common(s)
    e = sub.add_parser("export", help="print a JSON decomposition as text")
    e.add_argument("file")
    return p


def _spec(args) -> GraphSpec:
    try:
        if args.m == 1:
            return GraphSpec.complete(args.lam, args.n)
        return GraphSpec.equipartite(args.lam, args.n, args.m)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _catalog(args) -> Catalog:
    return Catalog(args.cache) if args.cache else default_catalog()


def _budget(args) -> SearchBudget:
    try:
        return SearchBudget(node_limit=args.budget, seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _solve(args) -> Verdict:
    cat, budget = _catalog(args), _budget(args)
    if args.problem == "small-even":
        params = SmallEvenParams(args.n, args.a, args.b, args.c, args.d, args.e, args.y,
                                 tuple(args.primes), args.m, args.beta, tuple(args.fillers))
        return solve_small_even(args.lam, params, cat, budget)
    spec = _spec(args)
    if args.problem == "op":
        return solve_OP(spec, args.T, cat, budget)
    if args.problem == "hwp":
        gamma = args.gamma if args.gamma is not None else spec.num_factors - args.alpha
        return solve_HWP(HwpInstance(spec, args.t1, args.t2, args.alpha, gamma), cat, budget)
    return solve_alpha_resolvable(spec, args.cycle_len, args.alpha, cat, budget)


def _emit(args, text: str) -> None:
    if getattr(args, "output", None):
        Path(args.output).write_text(text + "\n")
    else:
        print(text)


def _verdict_exit(v: Verdict) -> int:
    if v.budget_exceeded:
        return EXIT_BUDGET
    return STATUS_EXIT[v.status]


def _read(path: str):
    try:
        return loads(Path(path).read_text())
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise _DataError(f"cannot read {path}: {exc}") from exc


class _DataError(Exception):
    pass


def cmd_construct(args) -> int:
    if args.problem == "detach":
        spec_in, d = _read(args.input)
        if spec_in.kind != COMPLETE:
            raise UsageError("detach input must be a decomposition of a complete multigraph")
        lam = args.lam if args.lam is not None else spec_in.lam // args.m
        try:
            out = detach(d, args.m, lam, spec_in.n)
        except DetachmentFailed as exc:
            print(f"detachment failed: {exc}", file=sys.stderr)
            return EXIT_BUDGET
        except ValueError as exc:
            print(f"unsupported: {exc}", file=sys.stderr)
            return EXIT_UNSUPPORTED
        _emit(args, dumps(GraphSpec.equipartite(lam, spec_in.n, args.m), out))
        return EXIT_OK
    if args.problem == "layer":
        layers = []
        n = None
        for item in args.layers:
            path, _, x = item.partition("@")
            spec_in, d = _read(path)
            if spec_in.kind != COMPLETE or (n is not None and spec_in.n != n):
                raise UsageError("layers must factorize complete multigraphs of one order")
            n = spec_in.n
            layers.append((spec_in.lam, d, int(x) if x else 1))
        try:
            out = layer(LayerPlan(n, layers, [list(T) for T in args.fillers]))
        except LayerPlanError as exc:
            print(f"unsupported: {exc}", file=sys.stderr)
            return EXIT_UNSUPPORTED
        _emit(args, dumps(GraphSpec.complete(sum(mu * x for mu, _, x in layers), n), out))
        return EXIT_OK
    v = _solve(args)
    if v.constructed:
        _emit(args, dumps(v.spec, v.witness, {"route": v.route}))
    else:
        print(f"{v.status}: {v.route}", file=sys.stderr)
        for c in v.conditions:
            print(f"  {c}", file=sys.stderr)
    return _verdict_exit(v)


def cmd_decide(args) -> int:
    v = _solve(args)
    word = DECIDE_WORD[v.status]
    line = f"{word}: {v.route}"
    if v.budget_exceeded:
        line += " (budget exceeded)"
    print(line)
    if v.conditions:
        label = "violated" if v.status == UNSUPPORTED else "conditions"
        print(f"{label}: " + "; ".join(v.conditions))
    if args.witness and v.constructed:
        _emit(args, dumps(v.spec, v.witness, {"route": v.route}))
    return _verdict_exit(v)


def cmd_verify(args) -> int:
    spec, d = _read(args.file)
    profile = None
    if args.profile:
        try:
            profile = [int(x) for x in args.profile.strip("[] ").split(",")]
        except ValueError:
            raise UsageError(f"malformed profile {args.profile!r}")
    if args.holey:
        rep = verify_holey(spec, d, args.ftype)
        if profile is not None:
            rep.extend(verify_all(spec, d, profile=profile))
    else:
        rep = verify_all(spec, d, ftype=args.ftype, profile=profile)
    if rep.ok:
        print(f"ok: {spec.label()} with {len(d.cycles)} cycles")
        return EXIT_OK
    print(rep.summary())
    return EXIT_FAILED


def cmd_search(args) -> int:
    spec = _spec(args)
    try:
        d = _catalog(args).factorization(spec, args.types, _budget(args))
    except BudgetExceeded as exc:
        print(f"budget exceeded after {exc.nodes} nodes", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    if d is UNSAT:
        print("UNSAT", file=sys.stderr)
        return EXIT_UNSOLVABLE
    _emit(args, dumps(spec, d))
    return EXIT_OK


def cmd_export(args) -> int:
    spec, d = _read(args.file)
    print(f"# {spec.label()}")
    if d.classes is None:
        for c in d.cycles:
            print(" ".join(map(str, c)))
    else:
        for j, (a, cycles) in enumerate(zip(d.alphas, d.class_cycles())):
            body = " | ".join(" ".join(map(str, c)) for c in cycles)
            print(f"class {j} (alpha={a}): {body}")
    if d.one_factor is not None:
        print("1-factor: " + " ".join(f"{u}-{v}" for u, v in d.one_factor))
    return EXIT_OK


COMMANDS = {
    "construct": cmd_construct,
    "decide": cmd_decide,
    "verify": cmd_verify,
    "search": cmd_search,
    "export": cmd_export,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"factor-forge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _DataError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
