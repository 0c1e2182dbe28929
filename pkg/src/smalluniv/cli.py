"""Command-line entry point: ``smalluniv <subcommand> ...``.

Exit status is 0 on success, 1 when the run completes but the answer is
negative (nothing found, certificate invalid) and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Optional

from . import __version__
from .enumeration import (INTERNAL_MAX_ORDER, all_graphs, all_trees,
                          candidates, ensure_candidate_file, graphs_from_file)
from .graph import Graph6Error, decode_graph6, encode_graph6
from .records import RunRecord
from .search import (Strategy, OrderingStrategy, all_induced_universal_graphs,
                     default_jobs, family_from_descriptor, minimal_universal_search,
                     order_family, ordering_experiment, strategy_means,
                     write_experiment_csv)

OUT_ENV = "SMALLUNIV_OUT"


class UsageError(Exception):
    pass


@contextmanager
def _output(path: Optional[str]):
    if path is None or path == "-":
        yield sys.stdout
    else:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w") as fh:
            yield fh


def _record_path(args, name: str) -> Optional[Path]:
    if getattr(args, "no_record", False):
        return None
    if getattr(args, "record", None):
        return Path(args.record)
    out = getattr(args, "out", None)
    if out and out != "-":
        return Path(out).with_suffix(".json")
    return Path(os.environ.get(OUT_ENV, ".")) / f"{name}.json"


def _save_record(args, rec: RunRecord, name: str) -> None:
    path = _record_path(args, name)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        rec.save(path)


def _family(desc: str):
    try:
        return family_from_descriptor(desc)
    except FileNotFoundError as exc:
        raise UsageError(f"family file not found: {exc}") from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _flags(args) -> dict:
    return {k: v for k, v in vars(args).items() if k != "func"}


# -- subcommands ----------------------------------------------------------


def cmd_enumerate(args) -> int:
    n = args.order
    with _output(args.out) as fh:
        if args.trees:
            try:
                trees = all_trees(n)
            except ValueError as exc:
                raise UsageError(str(exc)) from None
            for t in trees:
                fh.write(encode_graph6(t) + "\n")
            return 0
        if n < 0:
            raise UsageError("order must be non-negative")
        if n <= INTERNAL_MAX_ORDER:
            stream = all_graphs(n)
        else:
            def progress(done, total):
                print(f"order {n}: {done}/{total} parents", file=sys.stderr)
            src = ensure_candidate_file(n, args.data_dir, progress if args.verbose else None)
            stream = graphs_from_file(src, n)
        for g in stream:
            fh.write(encode_graph6(g) + "\n")
    return 0


def _candidate_source(args):
    def source(n: int):
        if args.candidates:
            path = Path(args.candidates)
            if not path.exists():
                raise FileNotFoundError(path)
            return graphs_from_file(path, n)
        return candidates(n, args.data_dir)
    return source


def cmd_search_exact(args) -> int:
    fam = _family(args.family)
    fam = order_family(fam, OrderingStrategy.parse(args.strategy, args.seed))
    source = _candidate_source(args)
    start = time.monotonic()
    try:
        if args.order is None:
            n, graphs, stats = minimal_universal_search(fam, source, jobs=args.jobs)
        else:
            n = args.order
            graphs, stats = all_induced_universal_graphs(fam, source(n), jobs=args.jobs)
    except FileNotFoundError as exc:
        raise UsageError(f"candidate file missing: {exc}") from None
    except LookupError as exc:
        raise UsageError(str(exc)) from None
    with _output(args.out) as fh:
        for g in graphs:
            fh.write(encode_graph6(g) + "\n")
    rec = RunRecord("search-exact", _flags(args), [args.seed], fam.label,
                    {**stats.as_dict(), "order": n}, [encode_graph6(g) for g in graphs],
                    round(time.monotonic() - start, 3))
    _save_record(args, rec, "search-exact")
    print(f"order {n}: {len(graphs)} universal graphs, {stats.subiso_calls} solver calls",
          file=sys.stderr)
    return 0


def cmd_search_heuristic(args) -> int:
    from .heuristic import ClimbConfig, default_max_iter, hill_climb, make_seed_template
    from .verify import format_matrix_text
    fam = _family(args.family)
    k = args.k if args.k is not None else fam.k
    if k is None:
        raise UsageError("--k is required for file families")
    try:
        tpl = make_seed_template(args.template, k, args.order)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    max_iter = args.max_iter or default_max_iter(k)
    cfg = ClimbConfig(tpl, fam, max_iter, args.time_limit, args.seed, args.max_restarts, args.jobs)
    g, rec = hill_climb(cfg)
    rec.flags = {**rec.flags, **_flags(args)}
    _save_record(args, rec, "search-heuristic")
    if g is None:
        print(f"no universal graph found ({rec.stats['restarts']} restarts, "
              f"best score {rec.stats['best_score']}/{len(fam)})", file=sys.stderr)
        return 1
    with _output(args.out) as fh:
        fh.write(encode_graph6(g) + "\n")
    if args.out and args.out != "-":
        Path(args.out).with_suffix(".txt").write_text(format_matrix_text(g))
    else:
        sys.stdout.write(format_matrix_text(g))
    return 0


def cmd_trees_complete(args) -> int:
    from .trees import complete_search, naive_complete_search
    start = time.monotonic()
    fn = naive_complete_search if args.naive else complete_search
    try:
        res = fn(args.order, args.k, jobs=args.jobs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    with _output(args.out) as fh:
        for g in res.graphs:
            fh.write(encode_graph6(g) + "\n")
    rec = RunRecord("trees-complete", _flags(args), [], f"trees order {args.k}",
                    {"matrices_tested": res.matrices_tested, "subiso_calls": res.subiso_calls,
                     "raw_hits": res.raw_hits, "universal_found": len(res.graphs)},
                    [encode_graph6(g) for g in res.graphs], round(time.monotonic() - start, 3))
    _save_record(args, rec, "trees-complete")
    print(f"order {args.order}, k={args.k}: {len(res.graphs)} graphs, "
          f"{res.matrices_tested} matrices tested", file=sys.stderr)
    return 0


def cmd_experiment(args) -> int:
    fam = _family(args.family)
    names = [s.strip() for s in args.strategies.split(",") if s.strip()]
    try:
        strategies = [Strategy(s) for s in names]
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        cands = _candidate_source(args)(args.order)
    except FileNotFoundError as exc:
        raise UsageError(f"candidate file missing: {exc}") from None
    start = time.monotonic()
    rows = ordering_experiment(fam, args.order, strategies, args.trials, args.seed, cands,
                               randomize_ties=args.randomize_ties)
    with _output(args.out) as fh:
        write_experiment_csv(rows, fh)
    means = strategy_means(rows)
    rec = RunRecord("experiment-ordering", _flags(args),
                    [args.seed] + sorted({r.seed for r in rows if r.trial != "mean"}),
                    fam.label, {"means": means}, [], round(time.monotonic() - start, 3))
    _save_record(args, rec, "experiment-ordering")
    return 0


def cmd_verify(args) -> int:
    from .verify import MatrixFormatError, certificate_json, parse_matrix_text, verify_universal
    if args.matrix:
        try:
            g = parse_matrix_text(Path(args.matrix).read_text())
        except FileNotFoundError:
            raise UsageError(f"matrix file not found: {args.matrix}") from None
        except MatrixFormatError as exc:
            raise UsageError(f"{args.matrix}: {exc}") from None
    else:
        try:
            g = decode_graph6(args.graph)
        except Graph6Error as exc:
            raise UsageError(f"bad graph6: {exc}") from None
    fam = _family(args.family)
    cert = verify_universal(g, fam)
    text = cert.to_text()
    if args.report:
        Path(args.report).write_text(certificate_json(cert) if args.report.endswith(".json") else text)
    if args.quiet:
        print(text.splitlines()[2])
    else:
        sys.stdout.write(text)
    return 0 if cert.valid else 1


# -- parser ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="smalluniv", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common_out(sp, record=True):
        sp.add_argument("--out", help="output file (default: stdout)")
        if record:
            sp.add_argument("--record", help="RunRecord JSON path (default: sibling of --out)")
            sp.add_argument("--no-record", action="store_true", help="do not write a RunRecord")

    sp = sub.add_parser("enumerate", help="write all graphs (or trees) of one order as graph6")
    sp.add_argument("--order", type=int, required=True)
    sp.add_argument("--trees", action="store_true", help="free trees instead of all graphs")
    sp.add_argument("--data-dir", help="cache for orders above 8")
    sp.add_argument("-v", "--verbose", action="store_true")
    common_out(sp, record=False)
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("search-exact", help="all universal graphs of one order (or the minimal order)")
    sp.add_argument("--family", required=True, help="all:K, trees:K or file:PATH")
    sp.add_argument("--order", type=int, help="candidate order; omit to search upward from the lower bound")
    sp.add_argument("--candidates", help="graph6 file of candidates")
    sp.add_argument("--strategy", default="automorphisms", choices=[s.value for s in Strategy])
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--jobs", type=int, default=default_jobs())
    sp.add_argument("--data-dir", help="directory of cached candidate files")
    common_out(sp)
    sp.set_defaults(func=cmd_search_exact)

    sp = sub.add_parser("search-heuristic", help="hill climbing from a seed template")
    sp.add_argument("--family", required=True)
    sp.add_argument("--order", type=int, required=True)
    sp.add_argument("--template", required=True, choices=["clique-indep", "star"])
    sp.add_argument("--k", type=int, help="template size (default: family order)")
    sp.add_argument("--max-iter", type=int, help="flips per restart (default 1000, or 10000 for k >= 7)")
    sp.add_argument("--max-restarts", type=int)
    sp.add_argument("--time-limit", type=float, default=600.0, help="seconds")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--jobs", type=int, default=default_jobs())
    common_out(sp)
    sp.set_defaults(func=cmd_search_heuristic)

    sp = sub.add_parser("trees-complete", help="completion search for tree families")
    sp.add_argument("--order", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--naive", action="store_true", help="no symmetry breaking")
    sp.add_argument("--jobs", type=int, default=default_jobs())
    common_out(sp)
    sp.set_defaults(func=cmd_trees_complete)

    sp = sub.add_parser("experiment-ordering", help="solver calls per ordering strategy (CSV)")
    sp.add_argument("--family", required=True)
    sp.add_argument("--order", type=int, required=True)
    sp.add_argument("--strategies", default=",".join(s.value for s in Strategy))
    sp.add_argument("--trials", type=int, default=50)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--randomize-ties", action="store_true",
                    help="break ties in sorted strategies with the trial shuffle")
    sp.add_argument("--candidates", help="graph6 file of candidates")
    sp.add_argument("--data-dir")
    common_out(sp)
    sp.set_defaults(func=cmd_experiment)

    sp = sub.add_parser("verify", help="certify a graph against a family")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--graph", help="graph6 string")
    src.add_argument("--matrix", help="adjacency-matrix text file")
    sp.add_argument("--family", required=True)
    sp.add_argument("--report", help="write the report here (.json for JSON)")
    sp.add_argument("-q", "--quiet", action="store_true", help="summary line only")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"smalluniv {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
