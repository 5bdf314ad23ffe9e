"""Command-line front end.

Exit status: 0 on success, 1 for unreadable or invalid input, 2 when the
decision pipeline itself fails (e.g. infeasible weight constraints).
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import distribution as dist
from .distribution import DistributionAssessment
from .linguistic import LinguisticScale
from .magdm import DecisionOutcome, SolveError, solve
from .multigranular import build_context, transform
from .problem_file import (
    ProblemFileError,
    dump_outcome,
    load_problem,
    parse_inline,
    problem_from_data,
    read_problem_data,
)

EXIT_OK, EXIT_INPUT, EXIT_SOLVE = 0, 1, 2


def _fmt_cell(m: DistributionAssessment) -> str:
    return "{" + ", ".join(f"{p:.4f}@{k}" for k, p in m.support().items()) + "}"


def _fmt_vector(values) -> str:
    return "(" + ", ".join(f"{v:.4f}" for v in values) + ")"


def _matrix_lines(title, mat, alts, attrs) -> list[str]:
    lines = [title]
    for alt, row in zip(alts, mat):
        for attr, cell in zip(attrs, row):
            lines.append(f"  {alt:<8} {attr:<8} {_fmt_cell(cell)}")
    return lines


def render_report(out: DecisionOutcome) -> str:
    alts, attrs = out.alternatives, out.attributes
    lines = ["Step 1: per-scale distribution matrices"]
    for scale, w, mat in zip(out.scales, out.group_weights, out.group_matrices):
        lines += _matrix_lines(f" {scale} (group weight {w:.4f})", mat, alts, attrs)
    lines.append("")
    lines.append(f"Step 2: unified on {out.lcm_scale} (granularity {out.lcm_scale.granularity})")
    for scale, mat in zip(out.scales, out.unified):
        lines += _matrix_lines(f" from {scale}", mat, alts, attrs)
    lines.append("")
    lines += _matrix_lines("Step 3: collective matrix", out.collective_matrix, alts, attrs)
    lines.append("")
    lines.append("Step 4: attribute weights")
    lines.append(f"  deviation  {_fmt_vector(out.deviation)}")
    lines.append(f"  w          {_fmt_vector(out.attribute_weights)}  [{out.weight_provenance}]")
    lines.append("")
    lines.append("Step 5: collective assessments and ranking")
    for alt, z, e, t in zip(alts, out.collective, out.expectations, out.inaccuracies):
        lines.append(f"  {alt:<8} {_fmt_cell(z)}")
        lines.append(
            f"  {'':<8} E = (s_{e.index}, {e.translation:+.4f})  T = {t:.4f}"
        )
    lines.append(f"  ranking: {out.ranking_text()}")
    lines.append("")
    lines.append("Step 6: collective assessments on the original scales")
    for scale, row in zip(out.scales, out.per_scale_views):
        lines.append(f" {scale}")
        for alt, v in zip(alts, row):
            lines.append(f"  {alt:<8} {_fmt_cell(v)}")
    return "\n".join(lines) + "\n"


def _error(msg: str) -> None:
    print(f"error: {msg}", file=sys.stderr)


def cmd_solve(args) -> int:
    try:
        problem = load_problem(args.path)
    except ProblemFileError as exc:
        for d in exc.diagnostics:
            _error(d)
        return EXIT_INPUT
    except OSError as exc:
        _error(str(exc))
        return EXIT_INPUT
    try:
        outcome = solve(problem)
    except SolveError as exc:
        _error(str(exc))
        return EXIT_SOLVE
    text = dump_outcome(outcome) if args.format == "json" else render_report(outcome)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _read_dist(spec: str, g: int) -> DistributionAssessment:
    return DistributionAssessment.from_mapping(LinguisticScale(g), parse_inline(spec))


def cmd_transform(args) -> int:
    try:
        source = LinguisticScale(args.source)
        target = LinguisticScale(args.target)
        m = _read_dist(args.dist, args.source)
        result = transform(m, build_context([source, target]), target)
    except (ValueError, IndexError, TypeError) as exc:
        _error(str(exc))
        return EXIT_INPUT
    sparse = ", ".join(f"{p:.4f}@{k}" for k, p in result.support().items())
    sys.stdout.write(f"{sparse}\n{_fmt_vector(result.proportions)}\n")
    return EXIT_OK


def cmd_rank(args) -> int:
    try:
        ms = [_read_dist(spec, args.scale) for spec in args.dist]
    except (ValueError, IndexError, TypeError) as exc:
        _error(str(exc))
        return EXIT_INPUT
    names = [f"m{i + 1}" for i in range(len(ms))]
    lines = []
    for name, m in zip(names, ms):
        e = dist.expectation(m)
        lines.append(
            f"{name}: E = (s_{e.index}, {e.translation:+.4f})  T = {dist.inaccuracy(m):.4f}"
        )
    groups = dist.rank(ms)
    lines.append("ranking: " + " > ".join(" = ".join(names[i] for i in g) for g in groups))
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_validate(args) -> int:
    try:
        data = read_problem_data(args.path)
    except ProblemFileError as exc:
        for d in exc.diagnostics:
            _error(d)
        return EXIT_INPUT
    except OSError as exc:
        _error(str(exc))
        return EXIT_INPUT
    _, diags = problem_from_data(data)
    for d in diags:
        _error(d)
    if diags:
        return EXIT_INPUT
    print(f"{args.path}: ok")
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="lingdist",
        description="Multi-granular linguistic distribution assessments and group decisions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run the full decision pipeline on a problem file")
    p.add_argument("path")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("--out", help="write output here instead of stdout")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("transform", help="move a distribution to another granularity")
    p.add_argument("--from", dest="source", type=int, required=True)
    p.add_argument("--to", dest="target", type=int, required=True)
    p.add_argument("--dist", required=True, help='e.g. "0.3@1,0.5@2,0.2@3"')
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("rank", help="rank distributions on one scale")
    p.add_argument("--scale", type=int, required=True)
    p.add_argument("--dist", action="append", required=True)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("validate", help="check a problem file and list every issue")
    p.add_argument("path")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
