"""Command-line front end.

Exit codes: 0 success or verdict true, 1 verdict false (counterexample
printed), 2 input error, 3 resource budget exceeded.
"""

from __future__ import annotations

import argparse
import sys

from . import oracles
from .algebra import FiniteAlgebra, format_alg, read_alg
from .analysis import (determines_principal, determines_principal_subcongruences, determines_syntactic,
                       syn, theta_upper)
from .congruence import DEFAULT_EXHAUSTIVE_CAP, generate_congruence
from .corpus import DEFAULT_SEED
from .errors import InputError, ResourceError
from .partition import Partition, parse_partition
from .qomega import (check_sentence_1, check_sentence_2, depth_growth_experiment, make_qn,
                     qn_congruence_report)
from .relation import Relation
from .terms import (DEFAULT_BUDGET, TermSet, enumerate_terms, parse_terms, split_term_list,
                    stabilization_depth)

EXIT_OK, EXIT_FALSE, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3


def _positive_int(text):
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _nonneg_int(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return v


class Out:
    """Collects report lines in text or tab-separated form."""

    def __init__(self, fmt: str, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout

    def row(self, *fields):
        if self.fmt == "tsv":
            print("\t".join(str(f) for f in fields), file=self.stream)
        else:
            key, *rest = fields
            print(f"{key}: {' '.join(str(f) for f in rest)}" if rest else str(key), file=self.stream)


def _name(A: FiniteAlgebra, e: int) -> str:
    return A.element_name(e)


def _blocks(A: FiniteAlgebra, p: Partition) -> str:
    return "{" + p.format(A.labels, omit_singletons=False) + "}"


def _pair(A: FiniteAlgebra, text: str) -> tuple[int, int]:
    if "@" not in text:
        raise InputError(f"pair literal {text!r} must look like a@b")
    x, y = text.split("@", 1)
    return A.element(x.strip()), A.element(y.strip())


def _pair_str(A, p):
    return f"{_name(A, p[0])}@{_name(A, p[1])}"


def _term_set(A: FiniteAlgebra, terms, depth) -> TermSet:
    if terms is not None and depth is not None:
        raise InputError("give either terms or a depth, not both")
    if terms is not None:
        lits = [t for chunk in terms for t in split_term_list(chunk)]
        if not lits:
            raise InputError("empty term list")
        return parse_terms(lits, A.signature)
    if depth is None:
        depth = stabilization_depth(A)
    return enumerate_terms(A.signature, depth)


# --------------------------------------------------------------------------


def cmd_info(args, out: Out) -> int:
    A = read_alg(args.path)
    ops = ", ".join(f"{nm}/{ar}" for nm, ar in A.signature)
    if out.fmt == "text":
        out.row(f"algebra {A.name}")
        out.row(f"size {A.size}, ops {ops}")
    else:
        out.row("algebra", A.name)
        out.row("size", A.size)
        out.row("ops", ops)
    for (nm, ar), crc in zip(A.signature, A.checksums()):
        out.row("crc32", f"{nm}/{ar}", f"{crc:08x}")
    return EXIT_OK


def cmd_principal(args, out: Out) -> int:
    A = read_alg(args.path)
    a, b = _pair(A, args.pair)
    theta = generate_congruence(A, [(a, b)])
    out.row("theta", _pair_str(A, (a, b)), _blocks(A, theta))
    if args.witness:
        F = _term_set(A, args.terms, args.depth)
        rel, wit = theta_upper(A, F, a, b, with_witness=True, budget=args.budget)
        same = rel == Relation.from_partition(theta)
        out.row("theta_F_equal", "yes" if same else "no")
        for (c, d) in sorted(wit):
            w = wit[(c, d)]
            chain = " ; ".join(
                f"{t}[{','.join(_name(A, e) for e in asg)}]{'~' if sw else ''}" for t, asg, sw in w.steps)
            out.row("witness", _pair_str(A, (c, d)), len(w.steps), chain)
    return EXIT_OK


def cmd_syn(args, out: Out) -> int:
    A = read_alg(args.path)
    theta = parse_partition(args.partition, A.size, A.labels)
    s = syn(A, theta)
    out.row("syn", _blocks(A, s))
    if args.oracle:
        if A.size > args.cap:
            raise ResourceError(f"oracle needs size <= cap {args.cap}", args.cap)
        o = oracles.syn_oracle(A, theta)
        out.row("oracle", _blocks(A, o))
        out.row("agree", "yes" if o == s else "no")
        return EXIT_OK if o == s else EXIT_FALSE
    return EXIT_OK


def cmd_check(args, out: Out) -> int:
    A = read_alg(args.path)
    F = _term_set(A, args.terms, args.depth)
    prop = args.property
    if prop is None:
        prop = "subcongruences" if (args.terms2 is not None or args.depth2 is not None) else "principal"
    if prop == "subcongruences":
        G = _term_set(A, args.terms2, args.depth2) if (args.terms2 or args.depth2 is not None) else F
        if args.recheck:
            a, b = _pair(A, args.recheck)
            return _recheck_subcongruence(A, F, G, a, b, args, out)
        v = determines_principal_subcongruences(A, F, G, args.budget)
        out.row("property", "principal-subcongruences")
        out.row("verdict", "true" if v else "false")
        if not v:
            out.row("counterexample", _pair_str(A, v.counterexample))
            out.row("recheck", f"--recheck {_pair_str(A, v.counterexample)}")
        return EXIT_OK if v else EXIT_FALSE
    if prop == "principal" or (prop == "syntactic" and args.mode == "principal"):
        if args.recheck:
            a, b = _pair(A, args.recheck)
            return _recheck_principal(A, F, a, b, args, out)
        v = determines_principal(A, F, args.budget)
        out.row("property", "principal" if prop == "principal" else "syntactic (principal mode)")
        out.row("verdict", "true" if v else "false")
        if not v:
            (a, b), (c, d) = v.counterexample
            out.row("counterexample", _pair_str(A, (a, b)), "missing", _pair_str(A, (c, d)))
            out.row("recheck", f"--recheck {_pair_str(A, (a, b))}")
        return EXIT_OK if v else EXIT_FALSE
    # syntactic, exhaustive
    if args.recheck:
        theta = parse_partition(args.recheck, A.size, A.labels)
        return _recheck_syntactic(A, F, theta, args, out)
    v = determines_syntactic(A, F, "exhaustive", args.cap, args.budget)
    out.row("property", "syntactic (exhaustive mode)")
    out.row("verdict", "true" if v else "false")
    if not v:
        lit = v.counterexample.format(A.labels)
        out.row("counterexample", _blocks(A, v.counterexample))
        out.row("recheck", f"--recheck '{lit}'")
    return EXIT_OK if v else EXIT_FALSE


def _recheck_principal(A, F, a, b, args, out) -> int:
    full = Relation.from_partition(generate_congruence(A, [(a, b)]))
    up = theta_upper(A, F, a, b, budget=args.budget)
    missing = sorted((full - up).pairs())
    out.row("recheck", _pair_str(A, (a, b)), "confirmed" if missing else "not-a-counterexample")
    for c, d in missing:
        out.row("missing", _pair_str(A, (c, d)))
    return EXIT_OK if missing else EXIT_FALSE


def _recheck_syntactic(A, F, theta, args, out) -> int:
    from .analysis import theta_lower
    s = Relation.from_partition(syn(A, theta))
    lower = theta_lower(A, F, theta, args.budget)
    bad = s != lower
    out.row("recheck", _blocks(A, theta), "confirmed" if bad else "not-a-counterexample")
    if bad:
        out.row("syn", _blocks(A, syn(A, theta)))
        out.row("theta_F", _blocks(A, lower.to_partition()))
    return EXIT_OK if bad else EXIT_FALSE


def _recheck_subcongruence(A, F, G, a, b, args, out) -> int:
    if a == b:
        raise InputError("subcongruence counterexamples have distinct elements")
    up = theta_upper(A, F, a, b, budget=args.budget)
    for c, d in sorted(up.pairs()):
        if c < d:
            full = Relation.from_partition(generate_congruence(A, [(c, d)]))
            if full == theta_upper(A, G, c, d, budget=args.budget):
                out.row("recheck", _pair_str(A, (a, b)), "not-a-counterexample", _pair_str(A, (c, d)))
                return EXIT_FALSE
    out.row("recheck", _pair_str(A, (a, b)), "confirmed")
    return EXIT_OK


def cmd_qomega(args, out: Out) -> int:
    qn = make_qn(args.n)
    A = qn.algebra
    chosen = args.emit or args.sentences or args.report or args.depth_growth is not None
    if args.emit or not chosen:
        sys.stdout.write(format_alg(A))
    status = EXIT_OK
    if args.sentences:
        for op in ("meet", "prod"):
            for k, check in ((1, check_sentence_1), (2, check_sentence_2)):
                v = check(A, op)
                cex = "" if v else ",".join(_name(A, e) for e in v.counterexample)
                out.row(f"sentence{k}", op, "holds" if v else "fails", cex)
                if not v:
                    status = EXIT_FALSE
    if args.report:
        rep = qn_congruence_report(args.n)
        for (x, y), p in rep.principal:
            nontriv = " | ".join(" ".join(_name(A, e) for e in blk) for blk in p.nontrivial_blocks())
            out.row("principal", _pair_str(A, (x, y)), nontriv)
        out.row("intersection", _blocks(A, rep.intersection))
        out.row("monolith", "absent" if rep.monolith is None else _blocks(A, rep.monolith))
    if args.depth_growth is not None:
        rows = depth_growth_experiment(args.depth_growth, args.budget)
        if out.fmt == "tsv":
            out.row("i", "n", "min_depth", "verified", "witness")
        for r in rows:
            if r.depth is None:
                out.row("depth", r.i, f"Q{r.n}", "budget-exhausted", r.error)
                status = EXIT_RESOURCE
                continue
            wq = make_qn(r.n).algebra
            chain = " ; ".join(f"{t}[{','.join(wq.element_name(e) for e in asg)}]{'~' if sw else ''}"
                               for t, asg, sw in r.witness.steps)
            out.row("depth", r.i, f"Q{r.n}", r.depth, "verified" if r.verified else "UNVERIFIED", chain)
    return status


def cmd_verify(args, out: Out) -> int:
    from .suites import SUITES, run_suites
    names = args.suite or ["all"]
    for nm in names:
        if nm != "all" and nm not in SUITES:
            raise InputError(f"unknown suite {nm!r}; choose from {', '.join(SUITES)} or all")
    results = run_suites(names, seed=args.seed, threads=args.threads)
    status = EXIT_OK
    for res in results:
        print(res.line())
        for ref in res.refutations[:20]:
            print(f"  refutation: {ref}")
        if not res.ok:
            status = EXIT_FALSE
    return status


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap", type=_positive_int, default=DEFAULT_EXHAUSTIVE_CAP,
                        help="largest size for exhaustive partition sweeps (default %(default)s)")
    common.add_argument("--budget", type=_positive_int, default=DEFAULT_BUDGET,
                        help="translation evaluation budget (default %(default)s)")
    common.add_argument("--format", choices=("text", "tsv"), default="text")
    common.add_argument("--threads", type=_positive_int, default=1)
    common.add_argument("--seed", type=_positive_int, default=DEFAULT_SEED)

    p = argparse.ArgumentParser(prog="congalg", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("info", parents=[common], help="signature, size and table checksums")
    s.add_argument("path")
    s.set_defaults(func=cmd_info)

    s = sub.add_parser("principal", parents=[common], help="principal congruence theta(a,b)")
    s.add_argument("path")
    s.add_argument("pair", help="pair literal such as a0@b0 or 1@2")
    s.add_argument("--witness", action="store_true", help="dump a chain witness for every pair")
    s.add_argument("--terms", nargs="+", help="term literals (default: all terms at full depth)")
    s.add_argument("--depth", type=_nonneg_int)
    s.set_defaults(func=cmd_principal)

    s = sub.add_parser("syn", parents=[common], help="syntactic congruence of a partition")
    s.add_argument("path")
    s.add_argument("partition", help="partition literal such as '0 2 | 1'")
    s.add_argument("--oracle", action="store_true", help="cross-check with the brute-force oracle")
    s.set_defaults(func=cmd_syn)

    s = sub.add_parser("check", parents=[common], help="term-set determination checks")
    s.add_argument("path")
    s.add_argument("--terms", nargs="+")
    s.add_argument("--depth", type=_nonneg_int)
    s.add_argument("--terms2", nargs="+", help="second term set G (principal subcongruences)")
    s.add_argument("--depth2", type=_nonneg_int)
    s.add_argument("--property", choices=("principal", "syntactic", "subcongruences"))
    s.add_argument("--mode", choices=("exhaustive", "principal"), default="exhaustive")
    s.add_argument("--recheck", metavar="COUNTEREXAMPLE",
                   help="re-check a printed counterexample; exit 0 when confirmed")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("qomega", parents=[common], help="truncations Q_n")
    s.add_argument("n", type=_positive_int)
    s.add_argument("--emit", action="store_true", help="print Q_n in .alg format")
    s.add_argument("--sentences", action="store_true", help="check the two universal sentences")
    s.add_argument("--report", action="store_true", help="principal congruences and monolith")
    s.add_argument("--depth-growth", type=_positive_int, metavar="MAX_I",
                   help="minimal term depth table for i = 1..MAX_I (n is ignored)")
    s.set_defaults(func=cmd_qomega)

    s = sub.add_parser("verify", parents=[common], help="property suites over the built-in corpus")
    s.add_argument("--suite", nargs="+",
                   help="syn, malcev, lemma22, comp, lemma24, quotient, prop32 or all")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    out = Out(args.format)
    try:
        return args.func(args, out)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceError as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
