"""Command-line front end.

Exit status: 0 on success, 1 on I/O, parse or usage errors, 2 when an input
violates a precondition or fails verification, 3 when ``repro`` finds a mismatch.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from ._engine import SolverOptions
from ._validation import PreconditionError
from .hurwitz import closest_hurwitz_unstable, hurwitz_stabilize, verify_hurwitz_stationary
from .matcore import format_csv, read_matrix, write_matrix
from .partitions import enumerate_local_minima, lower_dominant_example
from .schur import closest_unstable, stabilize, verify_stationary
from .spectral import spectral_abscissa, spectral_radius

SCHEMA = 1

MODE_NAMES = {
    ("stabilize", "schur"): "schur-stabilize",
    ("stabilize", "hurwitz"): "hurwitz-stabilize",
    ("destabilize", "schur"): "schur-destabilize",
    ("destabilize", "hurwitz"): "hurwitz-destabilize",
}


def _spectral(X, mode):
    return spectral_radius(X) if mode == "schur" else spectral_abscissa(X)


def _report(mode, args, X, A, iterations=0, classification=None, trace=(), certificate=None):
    dist = float(np.linalg.norm(X - A))
    return {
        "schema": SCHEMA,
        "mode": mode,
        "input_path": args.input,
        "distance": dist,
        "distance_squared": dist * dist,
        "spectral_value": _spectral(X, "hurwitz" if mode.startswith("hurwitz") else "schur"),
        "iterations": iterations,
        "classification": classification,
        "trace": [{"k": s.k, "distance": s.distance, "reduce": s.reduce, "kind": s.kind}
                  for s in trace],
        "certificate_summary": certificate.summary() if certificate is not None else None,
    }


def _options(args):
    return SolverOptions(tol=args.tol, max_iter=args.max_iter)


def _emit(args, X, report):
    if args.output:
        write_matrix(X, args.output, args.format)
    else:
        sys.stdout.write(format_csv(X))
    if args.report:
        with open(args.report, "w") as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")
    print(f"distance {report['distance']:.6g}", file=sys.stderr)


def cmd_stabilize(args, mode):
    A = read_matrix(args.input, args.format)
    if mode == "schur":
        res = stabilize(A, _options(args))
    else:
        res = hurwitz_stabilize(A, _options(args))
    rep = _report(MODE_NAMES["stabilize", mode], args, res.X, A, res.iterations,
                  res.classification, res.trace, res.certificate)
    _emit(args, res.X, rep)
    return 0


def cmd_destabilize(args, mode):
    A = read_matrix(args.input, args.format)
    if mode == "schur":
        res = closest_unstable(A)
        X = res.X
    else:
        res = closest_hurwitz_unstable(A)
        X = res.X
    _emit(args, X, _report(MODE_NAMES["destabilize", mode], args, X, A))
    return 0


def cmd_verify(args):
    X = read_matrix(args.input, args.format)
    A = read_matrix(args.against, args.format)
    verify = verify_stationary if args.mode == "schur" else verify_hurwitz_stationary
    cert = verify(X, A, mode=args.kind)
    rep = _report("verify", args, X, A, certificate=cert)
    if args.report:
        with open(args.report, "w") as fh:
            json.dump(rep, fh, indent=2)
            fh.write("\n")
    print("accepted" if cert.accepted else f"rejected: {cert.reason}")
    return 0 if cert.accepted else 2


def cmd_enumerate(args):
    if args.input:
        A = read_matrix(args.input, args.format)
    elif args.dim:
        A = lower_dominant_example(args.dim)
    else:
        raise PreconditionError("enumerate-minima needs --input or --dim")
    opts = _options(args)
    rows = enumerate_local_minima(A, opts)
    lines = ["partition,distance,stationary"]
    lines += [f"{p.label()},{dist:.17g},true" for p, _, dist in rows]
    text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_repro(args):
    from .repro import format_table, run_checks
    checks = run_checks()
    print(format_table(checks))
    return 0 if all(c.passed for c in checks) else 3


def build_parser():
    p = argparse.ArgumentParser(prog="posstab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, mode=True, need_input=True):
        sp.add_argument("--input", required=need_input, help="matrix file (CSV or JSON)")
        sp.add_argument("--output", help="write the result matrix here (default: stdout)")
        sp.add_argument("--report", help="write a JSON run report here")
        sp.add_argument("--format", choices=("csv", "json"), help="matrix file format (default: by extension)")
        sp.add_argument("--tol", type=float, default=1e-9, help="relaxation stall tolerance (default 1e-9)")
        sp.add_argument("--max-iter", type=int, default=None, help="iteration cap per relaxation (default 10 d + 500)")
        if mode:
            sp.add_argument("--mode", choices=("schur", "hurwitz"), default="schur")

    for name in ("stabilize", "destabilize"):
        common(sub.add_parser(name, help=f"{name} under the chosen mode"))
        common(sub.add_parser(f"hurwitz-{name}", help=f"{name} a Metzler matrix"), mode=False)
    sp = sub.add_parser("verify", help="check first-order conditions of X for A")
    common(sp)
    sp.add_argument("--against", required=True, help="the original matrix A")
    sp.add_argument("--kind", choices=("stabilize", "destabilize"), default="stabilize")
    sp = sub.add_parser("enumerate-minima", help="partition-indexed local minima as a CSV table")
    common(sp, mode=False, need_input=False)
    sp.add_argument("--dim", type=int, help="use the lower-dominant example of this size")
    sub.add_parser("repro", help="run the reference example table")
    return p


def run(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse reports usage errors with status 2, which is reserved here
        return 1 if exc.code == 2 else exc.code
    try:
        if args.command == "repro":
            return cmd_repro(args)
        if args.command in ("stabilize", "hurwitz-stabilize"):
            mode = "hurwitz" if args.command.startswith("hurwitz") else args.mode
            return cmd_stabilize(args, mode)
        if args.command in ("destabilize", "hurwitz-destabilize"):
            mode = "hurwitz" if args.command.startswith("hurwitz") else args.mode
            return cmd_destabilize(args, mode)
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "enumerate-minima":
            return cmd_enumerate(args)
    except PreconditionError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 1


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
