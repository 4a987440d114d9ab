# cli/app.py

import argparse
import sys
from pathlib import Path
from typing import Any, Sequence

from config.settings import settings
from procell import ProcellError
from procell.cellcore import CellDatum, InconsistencyError, verify_cell_datum
from procell.completion import cached_quotient, complete_mul, parse_completion_element, smooth_classify
from procell.datum_io import export_datum, load_datum
from procell.instances import BUILTINS, build_builtin, poly_truncation
from procell.instances.tableaux import tableau_tower
from procell.model import AxiomReport, Report
from procell.posets import check_order_axioms, coideal_generate, profinite_check
from procell.repthy import classify, gram
from procell.scalars import field_from_descriptor
from procell.utils import label_text, parse_label, trace

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

DEFAULT_TRUNCATION = 4


class DatumRejected(ProcellError):
    """A datum file that fails the cellular axioms."""

    def __init__(self, path: str, report: AxiomReport):
        super().__init__(f"{path} fails the cellular axioms")
        self.path = path
        self.report = report


class Outcome:
    """What a command hands back: the JSON envelope, the text lines and the exit status."""

    def __init__(self, command: str, ok: bool, seed: int | None, data: dict[str, Any], lines: list[str], status: int | None = None):
        self.report = Report(command=command, ok=ok, seed=seed, data=data)
        self.lines = lines
        self.status = (EXIT_OK if ok else EXIT_FAILED) if status is None else status


def table(headers: Sequence[str], rows: Sequence[Sequence[Any]]) -> list[str]:
    cells = [[str(h) for h in headers]] + [[str(x) for x in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    fmt = lambda r: "  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip()
    return [fmt(cells[0]), fmt(["-" * w for w in widths])] + [fmt(r) for r in cells[1:]]


def _labels(texts: Sequence[str] | None) -> list:
    return [parse_label(t) for t in (texts or [])]


def _load_checked(args) -> CellDatum:
    """A --datum file; every command but verify refuses one that fails the axioms."""
    d = load_datum(Path(args.datum))
    if args.command != "verify":
        report = verify_cell_datum(d, jobs=args.jobs)
        if not report.ok:
            raise DatumRejected(args.datum, report)
    return d


def _full_datum(args) -> CellDatum:
    if args.datum:
        return _load_checked(args)
    if not args.builtin:
        raise ProcellError("give --builtin or --datum")
    if args.builtin == "tower":
        raise ProcellError("--builtin tower has no multiplication; only smooth runs on it")
    return build_builtin(args.builtin, n=args.n, delta=args.delta, field=field_from_descriptor(args.field))


def _finite_datum(args) -> CellDatum:
    """The finite algebra a command works on: a file, TL_n, or a truncation of a lazy builtin."""
    if args.datum:
        return _load_checked(args)
    bound = getattr(args, "bound", None)
    if args.truncate is not None and (bound or args.builtin != "poly"):
        raise ProcellError("--truncate applies to --builtin poly alone, without --bound")
    field = field_from_descriptor(args.field)
    if args.builtin == "poly" and not bound:
        k = DEFAULT_TRUNCATION if args.truncate is None else args.truncate
        return poly_truncation(k, field).datum
    d = _full_datum(args)
    if d.is_finite:
        return d
    return cached_quotient(d, coideal_generate(d.poset, _labels(bound))).datum


def _axiom_lines(report: AxiomReport) -> list[str]:
    rows = [(c.name, c.status, c.detail + (f" [witness: {'; '.join(c.witness)}]" if c.witness else "")) for c in report.checks]
    return [f"{report.datum} over {report.field}, dimension {report.dimension}"] + table(["axiom", "status", "detail"], rows)


def cmd_verify(args) -> Outcome:
    d = _finite_datum(args)
    report = verify_cell_datum(d, jobs=args.jobs)
    order = check_order_axioms(d.poset, seed=args.seed)
    lines = _axiom_lines(report)
    if order:
        lines += [f"order: {v}" for v in order]
    ok = report.ok and not order
    lines.append("PASS" if ok else "FAIL")
    return Outcome("verify", ok, args.seed, {"axioms": report.model_dump(), "order_violations": order}, lines)


def cmd_classify(args) -> Outcome:
    d = _finite_datum(args)
    result = classify(d, jobs=args.jobs)
    rows = [(r.cell, r.dim_w, r.dim_l, "yes" if r.in_lambda0 else "no", "" if r.absolutely_irreducible is None else r.absolutely_irreducible) for r in result.rows]
    lines = [f"{result.datum} over {result.field}"] + table(["cell", "dim W", "dim L", "in Lambda0", "Burnside"], rows)
    lines += [f"warning: {w}" for w in result.warnings]
    return Outcome("classify", True, args.seed, result.model_dump(), lines)


def cmd_gram(args) -> Outcome:
    d = _finite_datum(args)
    cells = _labels(args.cell) or d.cells()
    lines, data = [], []
    for cell in cells:
        g = gram(d, cell)
        det = g.determinant().text()
        rank = g.matrix.rank()
        lines.append(f"cell {label_text(cell)}: rank {rank}, determinant {det}")
        lines += ["  " + "  ".join(row) for row in g.matrix.to_text()]
        data.append({"cell": label_text(cell), "matrix": g.matrix.to_text(), "rank": rank, "determinant": det})
    return Outcome("gram", True, args.seed, {"datum": d.name, "forms": data}, lines)


def cmd_quotient(args) -> Outcome:
    d = _full_datum(args)
    gens = _labels(args.gens)
    p = coideal_generate(d.poset, gens)
    q = cached_quotient(d, p)
    report = verify_cell_datum(q.datum, jobs=args.jobs)
    doc = export_datum(q.datum)
    lines = [f"coideal {p!r}, quotient dimension {q.dimension}"]
    if not p.members:
        lines.append("empty coideal: the quotient is the zero algebra")
    lines += _axiom_lines(report)
    if args.out:
        Path(args.out).write_text(doc.to_json())
        lines.append(f"datum written to {args.out}")
    return Outcome("quotient", report.ok, args.seed, {"coideal": p.labels(), "axioms": report.model_dump(), "datum": doc.model_dump()}, lines)


def _smooth_tower(args) -> Outcome:
    tower = tableau_tower(args.n)
    gens = _labels(args.bound)
    p = coideal_generate(tower.poset, gens)
    profinite = profinite_check(tower.poset, gens or [()])
    order = check_order_axioms(tower.poset, sample=list(p) or [()], seed=args.seed)
    max_boxes = max((sum(s) for s in p), default=0)
    coherence = tower.coherence_check(max_boxes)
    rows = [(label_text(s), len(tower.tableaux(s))) for s in p]
    lines = [f"tower n={args.n}: coideal {p!r}"] + table(["shape", "|M|"], rows)
    lines.append(
        f"column removal up to {max_boxes} boxes: {coherence.pairs_checked} pairs, "
        f"{coherence.mapped} mapped, {coherence.zeroed} zero, {len(coherence.violations)} violations"
    )
    lines.append("no Gram data: the tower ships label-level maps only")
    ok = profinite.ok and not order and not coherence.violations
    data = {"coideal": p.labels(), "profinite": profinite.model_dump(), "order_violations": order, "coherence": coherence.model_dump()}
    return Outcome("smooth", ok, args.seed, data, lines)


def cmd_smooth(args) -> Outcome:
    if args.builtin == "tower":
        return _smooth_tower(args)
    d = _full_datum(args)
    gens = _labels(args.bound)
    if not gens and d.is_finite:
        gens = list(d.poset.iter_elements())
    p = coideal_generate(d.poset, gens)
    result = smooth_classify(d, p, jobs=args.jobs)
    lines = [f"{result.datum}, working coideal {p!r}"] + table(["cell", "dim L"], [(r.cell, r.dim_l) for r in result.rows])
    lines.append("agrees with the finite quotient" if result.agrees_with_quotient else "DISAGREES with the finite quotient")
    return Outcome("smooth", result.agrees_with_quotient, args.seed, result.model_dump(), lines)


def cmd_complete_mul(args) -> Outcome:
    d = _full_datum(args)
    e1 = parse_completion_element(d, args.left)
    e2 = parse_completion_element(d, args.right)
    p = coideal_generate(d.poset, _labels(args.bound))
    q = cached_quotient(d, p)
    prod = complete_mul(e1, e2)
    coeffs = [(b, prod.coefficient(b)) for b in q.datum.basis()]
    lines = [f"({args.left}) * ({args.right}) modulo the ideal of {p!r}"]
    lines += table(["label", "coefficient"], [(b.text(), c.text()) for b, c in coeffs])
    data = {"coideal": p.labels(), "coefficients": [{"label": b.text(), "value": c.text()} for b, c in coeffs]}
    return Outcome("complete-mul", True, args.seed, data, lines)


def cmd_export(args) -> Outcome:
    d = _finite_datum(args)
    doc = export_datum(d)
    if args.out:
        Path(args.out).write_text(doc.to_json())
        lines = [f"{d.name} written to {args.out}"]
    else:
        lines = doc.to_json().rstrip("\n").splitlines()
    return Outcome("export", True, args.seed, {"datum": doc.model_dump()}, lines)


COMMANDS = {
    "verify": cmd_verify,
    "classify": cmd_classify,
    "gram": cmd_gram,
    "quotient": cmd_quotient,
    "smooth": cmd_smooth,
    "complete-mul": cmd_complete_mul,
    "export": cmd_export,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--builtin", choices=BUILTINS, help="built-in datum")
    common.add_argument("--datum", help="path to a JSON datum file")
    common.add_argument("--n", type=int, help="strands for tl, sl_n rank for tower")
    common.add_argument("--delta", default="1", help="loop value for tl (default: 1)")
    common.add_argument("--truncate", type=int, help=f"poly truncation <k> (default: {DEFAULT_TRUNCATION})")
    common.add_argument("--field", default=settings.PROCELL_FIELD, help="q or gf:p (default: %(default)s)")
    common.add_argument("--json", action="store_true", help="print the JSON report instead of tables")
    common.add_argument("--seed", type=int, default=settings.DEFAULT_SEED, help="seed for sampled checks (default: %(default)s)")
    common.add_argument("--jobs", type=int, default=settings.DEFAULT_JOBS, help="parallel workers (default: %(default)s)")

    parser = argparse.ArgumentParser(prog="procell", description="Cellular algebras, cell modules and procellular completions.")
    sub = parser.add_subparsers(dest="command", required=True)

    bound_help = "labels generating the working coideal"
    p = sub.add_parser("verify", parents=[common], help="check the cellular axioms")
    p.add_argument("--bound", nargs="*", help=bound_help)
    p = sub.add_parser("classify", parents=[common], help="cell modules, Gram ranks and simple modules")
    p.add_argument("--bound", nargs="*", help=bound_help)
    p = sub.add_parser("gram", parents=[common], help="Gram matrices and determinants")
    p.add_argument("--cell", nargs="*", help="cells to show (default: all)")
    p.add_argument("--bound", nargs="*", help=bound_help)
    p = sub.add_parser("quotient", parents=[common], help="quotient by a finite coideal")
    p.add_argument("--gens", nargs="*", default=[], help="coideal generators")
    p.add_argument("--out", help="write the quotient datum file here")
    p = sub.add_parser("smooth", parents=[common], help="smooth simple modules inside a working coideal")
    p.add_argument("--bound", nargs="*", help=bound_help)
    p = sub.add_parser("complete-mul", parents=[common], help="product in the completion, truncated")
    p.add_argument("left", help="generator name, literal or support list")
    p.add_argument("right", help="generator name, literal or support list")
    p.add_argument("--bound", nargs="*", required=True, help=bound_help)
    p = sub.add_parser("export", parents=[common], help="write a finite datum as JSON")
    p.add_argument("--bound", nargs="*", help=bound_help)
    p.add_argument("--out", help="output path (default: stdout)")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    trace("CLI", f"{args.command} seed={args.seed}")
    try:
        outcome = COMMANDS[args.command](args)
    except DatumRejected as e:
        lines = [f"{e.path}: rejected, the datum fails the cellular axioms"] + _axiom_lines(e.report) + ["FAIL"]
        outcome = Outcome(args.command, False, args.seed, {"axioms": e.report.model_dump()}, lines)
    except InconsistencyError as e:
        print(f"[CLI] FAILED: {e}", file=sys.stderr)
        return EXIT_FAILED
    except ProcellError as e:
        print(f"[CLI] ERROR: {e}", file=sys.stderr)
        return EXIT_USAGE
    if args.json:
        print(outcome.report.model_dump_json(by_alias=True, indent=2))
    else:
        print("\n".join(outcome.lines))
    return outcome.status
