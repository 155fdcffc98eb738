"""Command line front end.

Verbs: glb, couple, sample, verify, causal. Exit codes: 0 on success, 1
when a verification or internal invariant fails, 2 on input errors.
Floats in textual reports carry 17 significant digits so they re-parse to
the exact doubles.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from .engine import compute_coupling, glb_entropy_score
from .engine import verify_coupling as _verify
from .errors import CouplingError, ParseError, ZeroColumnError
from .io import read_collection, read_coupling, read_joint, write_coupling, write_report
from .majorization import greatest_lower_bound, majorizes
from .pmf import Pmf, entropy
from .sampling import SampleStream, draw_stream


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _print_masses(label: str, masses) -> None:
    print(f"{label}\t" + "\t".join(_fmt(v) for v in masses))


def cmd_glb(args) -> int:
    pmfs = read_collection(args.input)
    res = greatest_lower_bound(pmfs)
    h = entropy(res.glb, args.alpha)
    _print_masses("glb", res.glb.masses)
    print(f"entropy (alpha={_fmt(args.alpha)})\t{_fmt(h)}")
    all_ok = True
    for i, p in enumerate(pmfs):
        ok = majorizes(p, res.glb)
        all_ok &= ok
        print(f"majorized by distributions[{i}]\t{'yes' if ok else 'NO'}")
    if args.out:
        write_report(
            args.out,
            {
                "glb": res.glb.masses.tolist(),
                "prefix": res.prefix.tolist(),
                "alpha": args.alpha,
                "entropy": h,
                "majorized_by_all": bool(all_ok),
            },
        )
    return 0 if all_ok else 1


def cmd_couple(args) -> int:
    pmfs = read_collection(args.input)
    start = time.perf_counter()
    coupling = compute_coupling(pmfs, truncation=args.trunc, eps=args.eps)
    elapsed = time.perf_counter() - start
    write_coupling(args.out, coupling)
    glb = greatest_lower_bound(pmfs).glb
    h_cells = entropy(coupling.q, args.alpha)
    h_glb = entropy(glb, args.alpha)
    bound = 2.0 - 2.0 ** (2 - coupling.m)
    print(f"m\t{coupling.m}")
    print(f"n\t{coupling.n}")
    print(f"cells\t{coupling.n_cells}")
    print(f"entropy (alpha={_fmt(args.alpha)})\t{_fmt(h_cells)}")
    print(f"glb entropy (alpha={_fmt(args.alpha)})\t{_fmt(h_glb)}")
    print(f"gap\t{_fmt(h_cells - h_glb)}")
    print(f"gap bound\t{_fmt(bound)}")
    print(f"seconds\t{_fmt(elapsed)}")
    print(f"wrote\t{args.out}")
    return 0


def cmd_sample(args) -> int:
    coupling = read_coupling(args.input)
    stream = SampleStream(seed=args.seed, count=args.count, layout="both")
    table = draw_stream(coupling, stream)
    header = "cell\t" + "\t".join(f"x{i + 1}" for i in range(coupling.m))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            np.savetxt(fh, table, fmt="%d", delimiter="\t", header=header, comments="")
    else:
        np.savetxt(sys.stdout, table, fmt="%d", delimiter="\t", header=header, comments="")
    return 0


def cmd_verify(args) -> int:
    coupling = read_coupling(args.coupling)
    pmfs = read_collection(args.collection)
    report = _verify(coupling, pmfs)
    checks = [
        (
            f"marginal tv <= {_fmt(report.tv_bound)} (worst {_fmt(report.tv.max())})",
            report.marginals_ok,
        ),
        (f"support {report.support} <= {report.support_bound}", report.support_ok),
        (
            "entropy between "
            f"{_fmt(report.glb_entropy)} and {_fmt(report.glb_entropy + report.gap_bound)} "
            f"(got {_fmt(report.entropy)})",
            report.entropy_ok,
        ),
        ("majorizes glb x capped-geometric yardstick", report.majorizes_product),
    ]
    for text, ok in checks:
        print(f"{'PASS' if ok else 'FAIL'}\t{text}")
    print(f"{'PASS' if report.passed else 'FAIL'}\toverall")
    if args.out:
        write_report(args.out, report.as_dict())
    return 0 if report.passed else 1


def cmd_causal(args) -> int:
    joint = read_joint(args.input)
    cols = joint.sum(axis=0)
    dead = np.flatnonzero(cols <= 0.0)
    if dead.size:
        raise ZeroColumnError(f"column {int(dead[0])} of the joint table has no mass")
    total = joint.sum()
    h_x = entropy(Pmf(joint.sum(axis=1) / total))
    h_y = entropy(Pmf(cols / total))
    forward = h_x + glb_entropy_score(joint)
    backward = h_y + glb_entropy_score(joint.T)
    print("each score is H(cause) plus the lowest joint entropy any coupling")
    print("of the effect conditionals can reach, matched within 2 bits")
    print(f"score rows->cols\t{_fmt(forward)}")
    print(f"score cols->rows\t{_fmt(backward)}")
    if abs(forward - backward) <= 1e-9:
        direction = "tie"
    elif forward < backward:
        direction = "rows->cols"
    else:
        direction = "cols->rows"
    print(f"direction\t{direction}")
    if args.out:
        write_report(
            args.out,
            {
                "score_rows_to_cols": forward,
                "score_cols_to_rows": backward,
                "direction": direction,
            },
        )
    return 0


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="mecoupling",
        description="Couple collections of discrete distributions with near-minimal joint entropy.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("glb", help="greatest lower bound of a collection")
    g.add_argument("input", help="JSON file with a 'distributions' array of arrays")
    g.add_argument("--alpha", type=float, default=1.0, help="entropy order for reports")
    g.add_argument("--out", help="write a JSON report here")
    g.set_defaults(func=cmd_glb)

    c = sub.add_parser("couple", help="build a coupling and write it to a file")
    c.add_argument("input", help="JSON file with a 'distributions' array of arrays")
    c.add_argument("--trunc", type=int, default=None, metavar="L", help="stick step cap")
    c.add_argument("--eps", type=float, default=1e-12, help="residual mass stop")
    c.add_argument("--alpha", type=float, default=1.0, help="entropy order for reports")
    c.add_argument("--out", required=True, help="coupling file to write")
    c.set_defaults(func=cmd_couple)

    s = sub.add_parser("sample", help="draw from a coupling file")
    s.add_argument("input", help="coupling file written by couple")
    s.add_argument("--seed", type=int, required=True, help="64-bit generator key")
    s.add_argument("--count", type=int, required=True, help="number of draws")
    s.add_argument("--out", help="TSV file (default stdout)")
    s.set_defaults(func=cmd_sample)

    v = sub.add_parser("verify", help="check a coupling file against a collection")
    v.add_argument("coupling", help="coupling file written by couple")
    v.add_argument("collection", help="JSON file with a 'distributions' array of arrays")
    v.add_argument("--out", help="write a JSON report here")
    v.set_defaults(func=cmd_verify)

    z = sub.add_parser("causal", help="entropy scores for both directions of a joint table")
    z.add_argument("input", help="JSON file with a 'joint' array of arrays")
    z.add_argument("--out", help="write a JSON report here")
    z.set_defaults(func=cmd_causal)

    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CouplingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RuntimeError as exc:
        print(f"invariant failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
