"""
Command-line front end: fmt, canon, extract, eq and verify
"""

import os
import re
import sys
import argparse
import logging
from typing import List, Optional, TextIO

from .algorithms.boolean_register import BoolRegAlphabet
from .algorithms.canonical import canonicalize_term
from .algorithms.equivalence import (Equal, NotEqual, bcong, beq, derivable_equal,
                                     instruction_normalizer, isc_equal, sc_equal)
from .algorithms.extraction import extract_term
from .algorithms.verification import completeness_experiment, soundness_experiment
from .core.alphabet import DEFAULT_SYMBOLS, GenericAlphabet
from .core.parser import format_term, parse_term
from .core.term_loader import TermLoader
from .utils.config import CompletenessConfig, SoundnessConfig
from .utils.export_manager import ExportManager

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_ERROR = 2

RELATIONS = ('isc', 'sc', 'beq', 'bcong', 'derive')

# short options known to the parser: -h and repeated -v
FLAG_PATTERN = re.compile(r'^-(h|v+)$')


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alphabet", choices=["generic", "br"], default="generic",
                        help="Basic instructions: opaque symbols or Boolean register f.p/q")
    common.add_argument("--symbols",
                        help="Comma-separated symbols (generic) or foci (br) to accept")
    common.add_argument("-v", "--verbose", action="count", default=0,
                        help="Log progress to standard error; repeat for debug output")

    parser = argparse.ArgumentParser(
        prog="pga",
        description="Canonical forms, thread extraction and equivalence of PGA instruction sequences")
    subparsers = parser.add_subparsers(dest="command", required=True)

    fmt = subparsers.add_parser("fmt", parents=[common], help="Parse and print terms")
    fmt.add_argument("source", help="A term, or a .pga/.txt file with one term per line")

    canon = subparsers.add_parser("canon", parents=[common], help="Canonical form of a term")
    canon.add_argument("--level", type=int, choices=[1, 2, 3], default=3)
    canon.add_argument("--trace", action="store_true", help="Print the axiom applications")
    canon.add_argument("--json", action="store_true")
    canon.add_argument("term")

    extract = subparsers.add_parser("extract", parents=[common], help="Thread of a term")
    extract.add_argument("--format", choices=["dot", "text"], default="text")
    extract.add_argument("term")

    eq = subparsers.add_parser("eq", parents=[common], help="Compare two terms")
    eq.add_argument("--relation", choices=RELATIONS, default="bcong")
    eq.add_argument("--json", action="store_true")
    eq.add_argument("--strict", action="store_true",
                    help="Exit with 1 when derivability is unknown")
    eq.add_argument("term1")
    eq.add_argument("term2")

    verify = subparsers.add_parser("verify", parents=[common],
                                   help="Soundness or completeness experiment")
    verify.add_argument("experiment", choices=["soundness", "completeness"])
    verify.add_argument("--max-len", type=int, default=None,
                        help="Longest enumerated term (default 3) or axiom subterm (default 4)")
    verify.add_argument("--jump-bound", type=int, default=None,
                        help="Largest jump literal (default 4 for completeness, 6 for soundness)")
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--samples", type=int, default=None,
                        help="Instances per axiom, or sampled cross-group pairs")
    verify.add_argument("--exploratory", type=int, default=0, metavar="N",
                        help="Also search N random terms with repetition for candidates")
    verify.add_argument("--json", action="store_true")
    verify.add_argument("--output", help="Write the report to a file")
    return parser


def make_alphabet(args: argparse.Namespace, enumerable: bool = False):
    symbols = [s.strip() for s in args.symbols.split(',') if s.strip()] if args.symbols else None
    if args.alphabet == 'br':
        return BoolRegAlphabet(symbols)
    if symbols is None and enumerable:
        symbols = list(DEFAULT_SYMBOLS)
    return GenericAlphabet(symbols)


def _configure_logging(verbosity: int):
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def cmd_fmt(args, alphabet, out: TextIO) -> int:
    if os.path.isfile(args.source):
        terms = TermLoader(alphabet).load_terms(args.source)
    else:
        terms = [parse_term(args.source, alphabet)]
    for t in terms:
        print(format_term(t), file=out)
    return EXIT_OK


def cmd_canon(args, alphabet, out: TextIO) -> int:
    t = parse_term(args.term, alphabet)
    seq, trace = canonicalize_term(t, args.level, instruction_normalizer(alphabet))
    if args.json:
        data = {'term': format_term(t), 'level': args.level,
                'canonical': seq.to_dict(), 'trace': trace.to_list()}
        print(ExportManager().to_json(data), file=out)
        return EXIT_OK
    print(seq, file=out)
    if args.trace and len(trace):
        print(trace.to_text(), file=out)
    return EXIT_OK


def cmd_extract(args, alphabet, out: TextIO) -> int:
    thread = extract_term(parse_term(args.term, alphabet))
    if args.format == 'dot':
        print(ExportManager().thread_to_dot(thread), file=out)
    else:
        print(thread.to_text(), file=out)
    return EXIT_OK


def _witness_text(witness) -> str:
    return f"context l={witness.l} n={witness.n}, differing at depth {witness.depth}"


def cmd_eq(args, alphabet, out: TextIO) -> int:
    t1, t2 = parse_term(args.term1, alphabet), parse_term(args.term2, alphabet)
    exporter = ExportManager()
    relation = args.relation
    details = {}
    note = None
    if relation == 'isc':
        holds = isc_equal(t1, t2)
    elif relation == 'sc':
        holds = sc_equal(t1, t2)
    elif relation == 'beq':
        holds = beq(t1, t2, alphabet)
    elif relation == 'bcong':
        result = bcong(t1, t2, alphabet)
        holds = result.congruent
        if result.witness is not None:
            details['witness'] = result.witness.to_dict()
            note = _witness_text(result.witness)
    else:
        verdict = derivable_equal(t1, t2, alphabet)
        details = verdict.to_dict()
        del details['verdict']
        if isinstance(verdict, Equal):
            holds = True
            note = f"canonical form {verdict.canonical}"
        elif isinstance(verdict, NotEqual):
            holds = False
            note = _witness_text(verdict.witness)
        else:
            holds = None
            note = f"canonical forms {verdict.canonical[0]} and {verdict.canonical[1]}, {verdict.reason}"

    if args.json:
        print(exporter.to_json(exporter.verdict_to_dict(relation, holds, details)), file=out)
    else:
        label = {True: 'equal', False: 'not equal', None: 'unknown'}[holds]
        print(f"{label} ({note})" if note else label, file=out)

    if holds is None:
        logger.warning(f"Derivability is unknown ({details['reason']})")
        return EXIT_FAILED if args.strict else EXIT_OK
    return EXIT_OK if holds else EXIT_FAILED


def cmd_verify(args, alphabet, out: TextIO) -> int:
    if args.experiment == 'soundness':
        config = SoundnessConfig(
            samples_per_axiom=args.samples if args.samples is not None else 100,
            max_subterm_len=args.max_len if args.max_len is not None else 4,
            max_jump=args.jump_bound if args.jump_bound is not None else 6,
            seed=args.seed, alphabet=alphabet)
        report = soundness_experiment(config)
    else:
        config = CompletenessConfig(
            max_len=args.max_len if args.max_len is not None else 3,
            jump_bound=args.jump_bound if args.jump_bound is not None else 4,
            seed=args.seed,
            samples=args.samples if args.samples is not None else 100_000,
            repetition_samples=args.exploratory, alphabet=alphabet)
        report = completeness_experiment(config)
    exporter = ExportManager()
    format = 'json' if args.json else 'text'
    if args.output:
        exporter.export_report(report, args.output, format)
    else:
        print(exporter.render_report(report, format), file=out)
    return EXIT_OK if report.passed else EXIT_FAILED


COMMANDS = {
    'fmt': cmd_fmt,
    'canon': cmd_canon,
    'extract': cmd_extract,
    'eq': cmd_eq,
    'verify': cmd_verify,
}


def protect_negative_tests(argv: List[str]) -> List[str]:
    """
    Keep terms such as -a;!;! positional

    argparse reads any argument with a leading dash as an option unless it
    contains a space, and leading whitespace is insignificant in a term.
    After a -- separator every argument is a term, so -v and -h can be
    written there as negative tests.
    """
    protected = []
    terms_only = False
    for arg in argv:
        if terms_only:
            protected.append(' ' + arg if arg.startswith('-') else arg)
        elif arg == '--':
            terms_only = True
        elif arg.startswith('-') and not arg.startswith('--') and not FLAG_PATTERN.match(arg):
            protected.append(' ' + arg)
        else:
            protected.append(arg)
    return protected


def run(argv: Optional[List[str]] = None, out: Optional[TextIO] = None) -> int:
    """
    Run one command

    Args:
        argv: Command-line arguments without the program name
        out: Stream for results; standard output by default

    Returns:
        0 on success or equality, 1 on inequality or a failed experiment,
        2 on usage and internal errors
    """
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(protect_negative_tests(
            list(argv if argv is not None else sys.argv[1:])))
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_ERROR
    _configure_logging(args.verbose)
    try:
        alphabet = make_alphabet(args, enumerable=args.command == 'verify')
        return COMMANDS[args.command](args, alphabet, out)
    except (ValueError, RuntimeError, OSError) as e:
        logger.debug(f"{args.command} failed", exc_info=True)
        print(f"error: {str(e)}", file=sys.stderr)
        return EXIT_ERROR
