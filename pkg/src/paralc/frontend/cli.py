"""Command line interface.

    paralc check FILE --query Q [--mode para|classical] [--trace OUT] [--jobs N]
    paralc consistent FILE [--trace OUT]
    paralc subsumes FILE --sub C --sup D [--mode para|classical] [--trace OUT] [--jobs N]

With ``--trace`` the para mode expands the whole forest, which ``--jobs``
spreads over N processes.  Without a trace only the verdict is computed.

Exit codes: 0 entailed / consistent, 1 not entailed / inconsistent,
2 usage or parse error, 3 resource limit exceeded.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from ..reasoner import Consistency, Subsumes, answer
from ..tableau import Limits, ResourceLimitExceeded
from .parser import ParseError, load_ontology, parse_concept, parse_query
from .trace import write_trace

EXIT_TRUE, EXIT_FALSE, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="paralc", description="Paraconsistent ALC tableau reasoner.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_mode=True):
        p.add_argument("file", help="ontology file")
        if with_mode:
            p.add_argument("--mode", choices=("para", "classical"), default="para")
            p.add_argument("--jobs", type=int, default=1, help="worker processes for the full forest")
        p.add_argument("--trace", metavar="OUT", help="write a JSON trace to OUT")
        p.add_argument("--max-nodes", type=int, default=Limits.max_nodes)
        p.add_argument("--max-branches", type=int, default=Limits.max_branches)

    check = sub.add_parser("check", help="instance, subsumption or consistency query")
    common(check)
    check.add_argument("--query", required=True, help='e.g. "Fly(tweety)" or "A subsumedby B"')

    consistent = sub.add_parser("consistent", help="classical consistency of the ontology")
    common(consistent, with_mode=False)

    subsumes = sub.add_parser("subsumes", help="concept subsumption")
    common(subsumes)
    subsumes.add_argument("--sub", required=True)
    subsumes.add_argument("--sup", required=True)
    return parser


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_TRUE

    try:
        ontology = load_ontology(args.file)
        if args.command == "check":
            query = parse_query(args.query)
        elif args.command == "subsumes":
            query = Subsumes(parse_concept(args.sub), parse_concept(args.sup))
        else:
            query = Consistency()
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    limits = Limits(args.max_nodes, args.max_branches)
    mode = getattr(args, "mode", "classical")
    # a trace should show the whole forest; otherwise only the verdict matters
    kwargs = {} if mode == "classical" else {"exhaustive": bool(args.trace), "jobs": args.jobs}
    if getattr(args, "jobs", 1) < 1:
        print("error: --jobs must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        result = answer(ontology, query, mode, limits=limits, **kwargs)
    except ResourceLimitExceeded as exc:
        print(f"error: resource limit exceeded: {exc}", file=sys.stderr)
        return EXIT_LIMIT

    if isinstance(query, Consistency):
        print("CONSISTENT" if result.verdict else "INCONSISTENT")
    else:
        print("ENTAILED" if result.verdict else "NOT-ENTAILED")
    if args.trace:
        write_trace(result, args.trace)
    return EXIT_TRUE if result.verdict else EXIT_FALSE


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
