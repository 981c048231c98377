"""Command line front end tying the library into reproducible runs.

Every command prints one machine-readable payload (JSON unless --format
says otherwise) and a one-line human summary.  With --out the payload goes
to the file and the summary to stdout; without it the payload goes to
stdout and the summary to stderr, so piped output stays parseable.

Exit codes: 0 success, 1 verification failure, 2 malformed input or usage,
3 capped or budget-limited run that returned a partial result.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import multiprocessing
import os
import sys

from .classify import classify_rm36_low_weight, classify_unital_spaces
from .distance import d_max_even, d_max_odd, feasible_k_range, z_distance
from .f2 import BitMatrix, ParseError, parse_matrix
from .level3 import is_level3_divisible
from .magic import simulate_protocol
from .rmpoly import RMPolynomial, parse_polynomial
from .spaces import (
    TriorthogonalSpace,
    even_descendant,
    indicator_to_generator,
    odd_descendant,
    read_code_json,
    read_code_text,
    verify_triorthogonal_matrix,
    write_code_json,
    write_code_text,
)

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_USAGE = 2
EXIT_PARTIAL = 3

_DEFAULT_WORKERS = int(os.environ.get("TRIORTHO_WORKERS", "1"))


def _read_file(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _read_code(path: str):
    text = _read_file(path)
    if text.lstrip().startswith("{"):
        return read_code_json(text)
    return read_code_text(text)


def _space_from_args(args) -> TriorthogonalSpace:
    if args.matrix is not None:
        return TriorthogonalSpace.from_generator(parse_matrix(_read_file(args.matrix)))
    return indicator_to_generator(parse_polynomial(args.poly, args.m))


def _emit(args, payload_text: str, summary: str) -> None:
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload_text)
        print(summary, file=sys.stdout)
    else:
        sys.stdout.write(payload_text)
        print(summary, file=sys.stderr)


def _json_text(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# commands

def _cmd_check(args) -> int:
    if args.code is not None:
        code = _read_code(args.code)
        g1, g0, parity = code.g1, code.g0, code.parity
    else:
        mat = parse_matrix(_read_file(args.matrix))
        # odd-weight rows carry the logical operators
        odd = [v for v in mat.row_vectors() if v.weight() % 2 == 1]
        even = [v for v in mat.row_vectors() if v.weight() % 2 == 0]
        g1 = BitMatrix.from_vectors(odd) if odd else BitMatrix(mat.cols, ())
        g0 = BitMatrix.from_vectors(even) if even else BitMatrix(mat.cols, ())
        parity = None
    ok = verify_triorthogonal_matrix(g1, g0)
    payload = {"triorthogonal": ok, "n": g1.cols, "k": g1.nrows}
    if parity is not None:
        payload["parity"] = parity
    verdict = "triorthogonal" if ok else "NOT triorthogonal"
    _emit(args, _json_text(payload),
          f"[[{payload['n']},{payload['k']}]] matrix: {verdict}")
    return EXIT_OK if ok else EXIT_VERIFICATION


def _cmd_descend(args) -> int:
    space = _space_from_args(args)
    columns = [int(tok) for tok in args.columns.split(",") if tok != ""]
    if args.parity == "even":
        code = even_descendant(space, columns)
    else:
        j = columns[0] if args.j is None else args.j
        code = odd_descendant(space, columns, j)
    text = write_code_json(code) if args.format == "json" else write_code_text(code)
    _emit(args, text,
          f"[[{code.n},{code.k}]] {args.parity} descendant of the "
          f"{space.c}-column space at columns {columns}")
    return EXIT_OK


def _cmd_distance(args) -> int:
    res = z_distance(_read_code(args.code), cap=args.cap)
    payload = {"d": res.value, "cap": res.cap, "exact": res.exact}
    if res.exact:
        summary = f"d_Z = {res.value}"
        status = EXIT_OK
    else:
        summary = f"d_Z > {res.cap} (partial: cap reached)"
        status = EXIT_PARTIAL
    _emit(args, _json_text(payload), summary)
    return status


def _cmd_dmax(args) -> int:
    space = _space_from_args(args)
    fn = d_max_even if args.parity == "even" else d_max_odd
    res = fn(space, args.k, cap=args.cap)
    payload = {
        "k": args.k,
        "parity": args.parity,
        "d": res.value,
        "cap": res.cap,
        "exact": res.exact,
    }
    if res.exact:
        summary = f"best {args.parity} descendant at k={args.k}: d_Z = {res.value}"
        status = EXIT_OK
    else:
        summary = f"best {args.parity} descendant at k={args.k}: d_Z > {res.cap} (partial)"
        status = EXIT_PARTIAL
    _emit(args, _json_text(payload), summary)
    return status


def _cmd_divisible(args) -> int:
    verdict = is_level3_divisible(_space_from_args(args))
    payload = {"divisible": verdict.divisible}
    if verdict.witness is not None:
        payload["witness"] = list(verdict.witness)
    if verdict.obstruction is not None:
        payload["obstruction_row"] = list(verdict.obstruction)
    _emit(args, _json_text(payload),
          "level-3 divisible" if verdict.divisible else "not level-3 divisible")
    return EXIT_OK


def _dmax_task(task):
    m, truth, parity, k, cap = task
    space = indicator_to_generator(RMPolynomial.from_truth(m, truth))
    fn = d_max_even if parity == "even" else d_max_odd
    res = fn(space, k, cap=cap)
    return res.value, res.exact


class _WarningTrap(logging.Handler):
    def __init__(self):
        super().__init__(logging.WARNING)
        self.hits = 0

    def emit(self, record):
        self.hits += 1


def _cmd_classify(args) -> int:
    trap = _WarningTrap()
    logger = logging.getLogger("triortho.classify")
    logger.addHandler(trap)
    try:
        ckpt = args.checkpoint
        if ckpt is None and args.heavy and args.out:
            ckpt = args.out + ".ckpt"
        classes = classify_unital_spaces(
            args.max_c, heavy=args.heavy, budget=args.budget,
            checkpoint_path=ckpt,
        )
    finally:
        logger.removeHandler(trap)
    rows = []
    tasks = []
    for i, cls in enumerate(classes):
        f = cls.representative
        space = indicator_to_generator(f)
        rows.append({
            "polynomial": str(f),
            "m": f.m,
            "weight": cls.weight,
            "r": space.r,
            "unital": True,
            "divisible_level3": is_level3_divisible(space).divisible,
            "dmax_even": {},
            "dmax_odd": {},
        })
        for parity in ("even", "odd"):
            for k in feasible_k_range(space, parity):
                if k > args.kmax:
                    break
                tasks.append((i, parity, k, f.m, f.truth))
    work = [(m, truth, parity, k, args.cap) for i, parity, k, m, truth in tasks]
    if args.workers > 1 and work:
        with multiprocessing.get_context("fork").Pool(args.workers) as pool:
            outcomes = pool.map(_dmax_task, work)
    else:
        outcomes = [_dmax_task(t) for t in work]
    partial = trap.hits > 0
    for (i, parity, k, _, _), (value, exact) in zip(tasks, outcomes):
        rows[i][f"dmax_{parity}"][str(k)] = value
        partial = partial or not exact
    if args.format == "csv":
        text = _classify_csv(rows)
    else:
        text = _json_text(rows)
    summary = f"{len(rows)} classes up to {args.max_c} columns"
    if partial:
        summary += " (partial: a search budget or distance cap was reached)"
    _emit(args, text, summary)
    return EXIT_PARTIAL if partial else EXIT_OK


def _classify_csv(rows) -> str:
    even_ks = sorted({int(k) for row in rows for k in row["dmax_even"]})
    odd_ks = sorted({int(k) for row in rows for k in row["dmax_odd"]})
    header = ["id", "polynomial", "m", "weight", "divisible"]
    header += [f"dmax_even_k{k}" for k in even_ks]
    header += [f"dmax_odd_k{k}" for k in odd_ks]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for i, row in enumerate(rows, start=1):
        record = [i, row["polynomial"], row["m"], row["weight"],
                  row["divisible_level3"]]
        record += [row["dmax_even"].get(str(k), "") for k in even_ks]
        record += [row["dmax_odd"].get(str(k), "") for k in odd_ks]
        writer.writerow(record)
    return buf.getvalue()


def _cmd_classify_rm36(args) -> int:
    classes = classify_rm36_low_weight(args.max_weight)
    payload = [
        {
            "polynomial": str(cls.representative),
            "weight": cls.weight,
            "members": cls.member_count_seen,
        }
        for cls in classes
    ]
    hist: dict[int, int] = {}
    for cls in classes:
        hist[cls.weight] = hist.get(cls.weight, 0) + 1
    counts = ", ".join(f"{w}: {n}" for w, n in sorted(hist.items()))
    _emit(args, _json_text(payload),
          f"{len(classes)} classes by weight {{{counts}}}")
    return EXIT_OK


def _cmd_simulate(args) -> int:
    code = _read_code(args.code)
    passes = 0
    fidelity_sum = 0.0
    injections = []
    for i in range(args.shots):
        trace = simulate_protocol(
            code, args.variant, noise=args.noise, seed=args.seed + i,
            correction_outcome=args.correction_outcome,
        )
        injections.append(trace.s_injection_count)
        if trace.postselect_pass:
            passes += 1
            fidelity_sum += trace.output_fidelity
    payload = {
        "pass_rate": passes / args.shots,
        "mean_fidelity_on_pass": fidelity_sum / passes if passes else None,
        "mean_s_injections": sum(injections) / args.shots,
        "max_s_injections": max(injections),
    }
    _emit(args, _json_text(payload),
          f"{passes}/{args.shots} shots passed postselection "
          f"({args.variant} variant, noise {args.noise})")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing

def _add_space_inputs(sub: argparse.ArgumentParser) -> None:
    src = sub.add_mutually_exclusive_group(required=True)
    src.add_argument("--matrix", help="generator matrix file, '0'/'1' rows")
    src.add_argument("--poly", help="indicator polynomial, e.g. 'x1*x2 + x3'")
    sub.add_argument("--m", type=int, default=None,
                     help="variable count for --poly (default: inferred)")


def _add_output(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--out", default=None, help="write the payload to this file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="triortho",
        description="Triorthogonal code toolkit: verification, descent, "
                    "distances, divisibility, classification, simulation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="verify triorthogonality of a matrix or code file")
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--matrix", help="stacked matrix file; odd rows count as logical")
    grp.add_argument("--code", help="two-block code file or its JSON form")
    _add_output(p)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("descend", help="build an even or odd descendant code")
    _add_space_inputs(p)
    p.add_argument("--parity", choices=["even", "odd"], required=True)
    p.add_argument("--columns", required=True,
                   help="comma-separated 0-based column indices forming P")
    p.add_argument("--j", type=int, default=None,
                   help="distinguished column for odd descent (default: first of P)")
    p.add_argument("--format", choices=["text", "json"], default="text")
    _add_output(p)
    p.set_defaults(func=_cmd_descend)

    p = sub.add_parser("distance", help="Z distance of a code file")
    p.add_argument("--code", required=True)
    p.add_argument("--cap", type=int, default=5, help="search cutoff (default 5)")
    _add_output(p)
    p.set_defaults(func=_cmd_distance)

    p = sub.add_parser("dmax", help="best descendant distance at one puncture size")
    _add_space_inputs(p)
    p.add_argument("--k", type=int, required=True, help="puncture set size")
    p.add_argument("--parity", choices=["even", "odd"], required=True)
    p.add_argument("--cap", type=int, default=5)
    _add_output(p)
    p.set_defaults(func=_cmd_dmax)

    p = sub.add_parser("divisible", help="level-3 divisibility of a space")
    _add_space_inputs(p)
    _add_output(p)
    p.set_defaults(func=_cmd_divisible)

    p = sub.add_parser("classify", help="affine classes of unital generators")
    p.add_argument("--max-c", type=int, required=True, dest="max_c",
                   help="column budget, at most 38")
    p.add_argument("--heavy", action="store_true",
                   help="include the heaviest sweep family beyond 30 columns")
    p.add_argument("--budget", type=int, default=20000,
                   help="classified hits per sweep (default 20000)")
    p.add_argument("--checkpoint", default=None,
                   help="sweep checkpoint file (default with --heavy: OUT.ckpt)")
    p.add_argument("--kmax", type=int, default=3,
                   help="largest puncture size tabulated (default 3)")
    p.add_argument("--cap", type=int, default=5)
    p.add_argument("--workers", type=int, default=_DEFAULT_WORKERS,
                   help="parallel distance chunks (default $TRIORTHO_WORKERS or 1)")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    _add_output(p)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("classify-rm36", help="affine classes of six-variable cubics")
    p.add_argument("--max-weight", type=int, default=18, dest="max_weight")
    _add_output(p)
    p.set_defaults(func=_cmd_classify_rm36)

    p = sub.add_parser("simulate", help="run the distillation protocol simulator")
    p.add_argument("--code", required=True)
    p.add_argument("--variant", choices=["delayed", "standard"], required=True)
    p.add_argument("--shots", type=int, default=1000)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--correction-outcome", type=int, choices=[-1, 1], default=-1,
                   dest="correction_outcome",
                   help="which measurement outcome triggers the correction")
    _add_output(p)
    p.set_defaults(func=_cmd_simulate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"triortho: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"triortho: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"triortho: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION


if __name__ == "__main__":
    sys.exit(main())
