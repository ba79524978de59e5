"""Command line entry point: ``formality <command> ...``.

Exit codes: 0 success, 1 error, 2 refused by the column budget (or, for
``verify-paper``, some claims skipped for budget).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from fractions import Fraction

from . import __version__
from .cache import ReportCache, cache_key
from .engine import BOTH, INVARIANTS, ROUTES, TORUS, SpaceSpec, analyze
from .exact import DEFAULT_PRIME, format_cyclotomic
from .lie_a import (
    BlockDecomposition,
    TorusEmbedding,
    ambient_vars,
    block_embedding,
    block_invariant_polynomials,
    coxeter_eigenvector,
    elementary_symmetric,
    eval_at_eigenvector,
    full_torus_embedding,
    restrict,
    zero_sum_partition,
)
from .multipoly import format_poly, parse_poly
from .nakayama import AUTO, MODES, Budget, BudgetExceeded, default_threads, subalgebra_membership
from .suite import exit_code, run_suite

log = logging.getLogger("formality")

EXIT_OK, EXIT_ERROR, EXIT_BUDGET = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: usage error: {message}\n")


def _int_list(text: str) -> list:
    try:
        out = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not out:
        raise argparse.ArgumentTypeError("empty list")
    return out


def _emit(doc: dict) -> None:
    sys.stdout.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")


def load_embedding(path: str) -> TorusEmbedding:
    """Read an embedding file: ``{"n": N, "matrix": [[...], ...], "names": [...]}``."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
        matrix = [[Fraction(str(c)) for c in row] for row in doc["matrix"]]
        names = doc.get("names")
        emb = TorusEmbedding.from_matrix(matrix, names)
    except (OSError, KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"malformed embedding file {path}: {exc}") from exc
    if "n" in doc and doc["n"] != emb.n:
        raise UsageError(f"embedding file declares n = {doc['n']} but has {emb.n} rows")
    return emb


def _space(args) -> SpaceSpec:
    if args.embedding:
        emb = load_embedding(args.embedding)
        if args.n is not None and args.n != emb.n:
            raise UsageError(f"--n {args.n} does not match the embedding (n = {emb.n})")
        return SpaceSpec(emb.n, emb)
    if args.n is None:
        raise UsageError("--n is required unless --embedding is given")
    if args.full_torus:
        return SpaceSpec.full_torus(args.n)
    if not args.blocks:
        raise UsageError("give --blocks, --full-torus or --embedding")
    try:
        return SpaceSpec(args.n, BlockDecomposition(args.n, args.blocks))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _budget(args) -> Budget:
    return Budget.capped(args.max_columns)


def _threads(args) -> int:
    return args.threads if args.threads else default_threads()


def format_report(doc: dict) -> str:
    lines = [
        f"space          {doc['space']}",
        f"m = rank H     {doc['m']}",
        f"r              {doc['r']}",
        f"per degree     " + ", ".join(f"r_{d}={c}" for d, c in doc["per_degree"].items()),
        f"deficiency     {doc['df']}",
        f"verdict        {doc['verdict']}",
        f"certification  {doc['certification']}",
        f"route          {doc['route']}",
    ]
    lines.extend(f"note           {n}" for n in doc["notes"])
    return "\n".join(lines)


def cmd_check(args) -> int:
    spec = _space(args)
    if args.route != TORUS and not isinstance(spec.subgroup, BlockDecomposition):
        if args.route == INVARIANTS:
            raise UsageError("the invariants route needs --blocks")
        route = TORUS
    else:
        route = args.route
    problem = {
        "kind": "check",
        "space": spec.describe(),
        "route": route,
        "mode": args.mode,
        "modulus": args.prime,
        "max_columns": args.max_columns,
    }
    cache = ReportCache(args.cache_dir) if args.cache_dir else None
    key = cache_key(problem)
    doc = None
    if cache:
        hit = cache.get(key)
        if hit:
            log.info("cache hit %s", key)
            doc = hit.value
    if doc is None:
        report = analyze(spec, route, args.mode, args.prime, _budget(args), _threads(args))
        doc = report.to_dict()
        if cache:
            cache.put(key, doc)
    if args.json:
        _emit(doc)
    else:
        print(format_report(doc))
    return EXIT_OK


def cmd_verify_paper(args) -> int:
    def progress(row):
        if not args.json:
            print(f"{row.status:8} {row.seconds:8.2f}s  {row.claim}  [{row.detail}]", flush=True)

    rows = run_suite(_budget(args), _threads(args), corrupt=args.corrupt_generator, progress=progress)
    code = exit_code(rows)
    if args.json:
        _emit({"schema": "formality-verify/1", "rows": [r.to_dict() for r in rows], "exit_code": code})
    else:
        counts = {s: sum(r.status == s for r in rows) for s in ("PASS", "FAIL", "SKIPPED")}
        print(f"{counts['PASS']} passed, {counts['FAIL']} failed, {counts['SKIPPED']} skipped")
    return code


def _parse_invariant(text: str, n: int):
    t = text.strip()
    if t[:1] in ("P", "e") and t[1:].isdigit():
        return elementary_symmetric(n, int(t[1:]))
    return parse_poly(t, ambient_vars(n))


def cmd_eigen(args) -> int:
    X = coxeter_eigenvector(args.n, args.k)
    p = _parse_invariant(args.poly, args.n)
    value = eval_at_eigenvector(p, X)
    if args.json:
        _emit(
            {
                "schema": "formality-eigen/1",
                "n": args.n,
                "k": args.k,
                "poly": format_poly(p),
                "value": format_cyclotomic(value),
                "zero": value.is_zero(),
                "order": value.order,
            }
        )
    else:
        print(format_cyclotomic(value))
    return EXIT_OK


def cmd_membership(args) -> int:
    n = args.n
    if args.blocks:
        try:
            bd = BlockDecomposition(n, args.blocks)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    else:
        bd = BlockDecomposition(n, [n])
    ring = args.ring or (INVARIANTS if args.blocks else TORUS)
    if ring == INVARIANTS:
        polys = block_invariant_polynomials(bd)
    else:
        emb = block_embedding(bd) if args.blocks else full_torus_embedding(n)
        polys = dict(zip(range(2, n + 1), restrict(emb)))
    for j in [args.target, *args.basis]:
        if j not in polys:
            raise UsageError(f"p{j} is not defined for SU({n}) (need 2 <= j <= n)")
    target = polys[args.target]
    basis = [polys[j] for j in args.basis]
    mem = subalgebra_membership(target, basis)
    labels = [f"p{j}" for j in args.basis if not polys[j].is_zero()]
    terms = []
    if mem.member:
        for exps, c in zip(mem.exponents, mem.coefficients):
            if c:
                mono = "*".join(f"{lab}^{e}" if e > 1 else lab for lab, e in zip(labels, exps) if e) or "1"
                terms.append({"product": mono, "coefficient": str(c)})
    if args.json:
        _emit(
            {
                "schema": "formality-membership/1",
                "space": bd.label(),
                "ring": ring,
                "target": f"p{args.target}",
                "basis": [f"p{j}" for j in args.basis],
                "member": mem.member,
                "certificate": terms if mem.member else None,
            }
        )
    else:
        print("MEMBER" if mem.member else "NON-MEMBER")
        for t in terms:
            print(f"  {t['coefficient']} * {t['product']}")
    return EXIT_OK


def cmd_partition(args) -> int:
    X = coxeter_eigenvector(args.n, args.k)
    part = zero_sum_partition(X, args.sizes)
    if args.json:
        _emit({"schema": "formality-partition/1", "n": args.n, "k": args.k, "sizes": args.sizes, "partition": part})
    else:
        print("none exists" if part is None else json.dumps(part))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="formality", description="Deficiency and formality of SU(n)/H, computed exactly.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="diagnostics on stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def engine_opts(p):
        p.add_argument("--max-columns", type=int, default=None, help="refuse degree slices wider than this")
        p.add_argument("--threads", type=int, default=None, help="worker processes (default: FORMALITY_THREADS or CPU count)")
        p.add_argument("--json", action="store_true", help="print one JSON document")

    p = sub.add_parser("check", help="deficiency and verdict for one space")
    p.add_argument("--n", type=int)
    p.add_argument("--blocks", type=_int_list, help="block sizes q1,q2,... summing to n")
    p.add_argument("--embedding", help="JSON file with an n x m rational embedding matrix")
    p.add_argument("--full-torus", action="store_true", help="H = maximal torus of SU(n)")
    p.add_argument("--route", choices=ROUTES, default=BOTH)
    p.add_argument("--mode", choices=MODES, default=AUTO)
    p.add_argument("--prime", type=int, default=DEFAULT_PRIME)
    p.add_argument("--cache-dir")
    engine_opts(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("verify-paper", help="re-run every non-formality claim at desk scale")
    engine_opts(p)
    p.add_argument("--corrupt-generator", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify_paper)

    p = sub.add_parser("eigen", help="evaluate an invariant at a Coxeter eigenvector")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--poly", required=True, help="Pj for the j-th elementary symmetric polynomial, or text in x1..xn")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_eigen)

    p = sub.add_parser("membership", help="is p_target a polynomial in the p_j of the basis?")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--blocks", type=_int_list)
    p.add_argument("--ring", choices=(TORUS, INVARIANTS))
    p.add_argument("--target", type=int, required=True)
    p.add_argument("--basis", type=_int_list, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_membership)

    p = sub.add_parser("partition", help="zero-sum partition of the coordinates of X_k")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--sizes", type=_int_list, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_partition)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
