"""Command line entry point.

Examples::

    twolevel table1
    twolevel vanishing --group so-even --rank 2020 --level two
    twolevel lower-bound --group u --k 2
    twolevel iterate --group u --terms 5 --format json
    twolevel dump g --group sp --grid-n 401 --out g_sp.csv

Exit status is 0 on success, 1 on a numerical failure, 2 on an invalid request.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import warnings
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

from . import bounds, fnspace
from .bounds import Level
from .fredholm import FredholmError, NotContractive
from .kernels import SymmetryGroup, quadratic_coefficients

log = logging.getLogger("twolevel")

TABLE1_GAP_TOL = 1e-6


@dataclass(frozen=True)
class RunConfig:
    grid_n: int = fnspace.DEFAULT_N
    format: str = "text"
    precision: int = 6
    out: Optional[str] = None

    def __post_init__(self):
        if self.grid_n < 41 or self.grid_n % 2 == 0:
            raise ValueError(f"--grid-n must be odd and >= 41, got {self.grid_n}")
        if not 3 <= self.precision <= 17:
            raise ValueError(f"--precision must be in [3, 17], got {self.precision}")
        if self.format not in ("json", "csv", "text"):
            raise ValueError(f"unknown format {self.format!r}")

    def as_dict(self) -> dict:
        d = asdict(self)
        d.pop("out")
        return d


class CommandError(Exception):
    """Invalid request; reported with exit status 2."""


# -- rendering -------------------------------------------------------------

def _fmt(v, precision: int) -> str:
    if isinstance(v, float):
        return f"{v:.{precision}g}"
    if v is None:
        return "-"
    return str(v)


def _render(command: str, cfg: RunConfig, columns: list, rows: list, provenance,
            notes: tuple = ()) -> str:
    if cfg.format == "json":
        doc = {
            "command": command,
            "config": cfg.as_dict(),
            "results": [dict(zip(columns, r)) for r in rows],
            "provenance": provenance,
        }
        return json.dumps(doc, indent=2) + "\n"
    if cfg.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([repr(v) if isinstance(v, float) else v for v in r])
        return buf.getvalue()
    cells = [columns] + [[_fmt(v, cfg.precision) for v in r] for r in rows]
    widths = [max(len(c[i]) for c in cells) for i in range(len(columns))]
    lines = ["  ".join(c[i].ljust(widths[i]) for i in range(len(columns))).rstrip() for c in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    prov = provenance if isinstance(provenance, str) else "; ".join(f"{k}: {v}" for k, v in provenance.items())
    lines.append("")
    lines.append(f"provenance: {prov}")
    lines.extend(notes)
    return "\n".join(lines) + "\n"


def _emit(text: str, cfg: RunConfig):
    if cfg.out is None:
        sys.stdout.write(text)
        return
    path = Path(cfg.out)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


# -- commands --------------------------------------------------------------

def cmd_table1(cfg: RunConfig) -> int:
    rows = []
    ok = True
    for g in SymmetryGroup:
        exact = bounds.optimal_value(g)
        num = bounds.optimal_value_numeric(g, cfg.grid_n)
        gap = abs(exact.optimal_value - num.optimal_value)
        ok &= gap <= TABLE1_GAP_TOL
        rows.append([g.label, exact.naive_value, exact.optimal_value, num.optimal_value, gap])
    prov = {"optimal": "closed form c / <1, g> for the cosine solution",
            "numeric": f"Nystrom on {cfg.grid_n} nodes", "gap_tolerance": TABLE1_GAP_TOL}
    _emit(_render("table1", cfg, ["group", "naive", "optimal", "numeric", "gap"], rows, prov), cfg)
    if not ok:
        log.error("closed form and Nystrom values disagree beyond %.0e", TABLE1_GAP_TOL)
    return 0 if ok else 1


def cmd_vanishing(group: SymmetryGroup, rank: int, level: Level, cfg: RunConfig) -> int:
    bound = bounds.upper_bound_order(group, rank, level)
    if level.is_one_level:
        B = bounds.REFERENCE.one_level(group, level.support)
        prov = {"constant": f"B1 = {B!r} (1-level optimum, support [-{level.support}, {level.support}])",
                "coefficient": f"r = {rank}"}
    else:
        B = bounds.optimal_value(group).optimal_value
        coeff = round(B / bound)
        prov = {"constant": f"B2 = {B!r} (2-level optimum over supp in [-1, 1])",
                "coefficient": f"c2({rank}) = {coeff}"}
    rows = [[group.value, rank, level.value, bound]]
    _emit(_render("vanishing", cfg, ["group", "rank", "level", "bound"], rows, prov), cfg)
    return 0


def cmd_lower_bound(group: SymmetryGroup, k: int, level: Level, cfg: RunConfig) -> int:
    value = bounds.lower_bound_low_rank(group, k, level)
    if group is SymmetryGroup.SO_EVEN:
        ranks = f"ranks 0, 2, ..., {2 * k}"
    elif group is SymmetryGroup.SO_ODD:
        ranks = f"ranks 1, 3, ..., {2 * k + 1}"
    else:
        ranks = f"ranks <= {k}"
    rows = [[group.value, k, level.value, value]]
    prov = {"statement": f"proportion with {ranks} is at least the bound", "level": level.value}
    _emit(_render("lower-bound", cfg, ["group", "k", "level", "bound"], rows, prov), cfg)
    return 0


def cmd_iterate(group: SymmetryGroup, terms: int, cfg: RunConfig) -> int:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", NotContractive)
        rep = bounds.iterate(group, terms, cfg.grid_n)
    for w in caught:
        log.warning("%s", w.message)
    res = rep.neumann
    rows = [[n, s, b] for n, (s, b) in enumerate(zip(res.partial_sums, rep.partial_bounds))]
    prov = {"group": group.value, "c_const": rep.c_const, "norm_sq": res.norm_sq,
            "certified": res.certified, "terms_nonnegative": res.terms_nonnegative,
            "final_bound": rep.final_bound, "nystrom_value": rep.nystrom_value,
            "grid_n": cfg.grid_n}
    notes = ()
    if not res.certified:
        notes = ("warning: Hilbert-Schmidt norm >= 1, partial sums are not certified",)
    elif not res.terms_nonnegative:
        notes = ("warning: series terms not all nonnegative, truncations need not be upper bounds",)
    _emit(_render("iterate", cfg, ["n", "partial_sum", "bound"], rows, prov, notes), cfg)
    return 0


def dump_values(what: str, group: SymmetryGroup, n: int) -> fnspace.GridFunction:
    if what == "g":
        return bounds.optimal_solution(group).sample(n)
    if what == "phi_hat":
        return fnspace.self_correlate(bounds.optimal_solution(group).sample(n))
    if what == "kernel":
        return quadratic_coefficients(group).sample(2 * n - 1)
    raise CommandError(f"unknown dump target {what!r}")


def cmd_dump(what: str, group: SymmetryGroup, cfg: RunConfig) -> int:
    f = dump_values(what, group, cfg.grid_n)
    if cfg.format == "json":
        doc = {"command": "dump", "config": cfg.as_dict(),
               "results": {"what": what, "group": group.value, "lo": f.lo, "hi": f.hi,
                           "x": f.x.tolist(), "value": f.values.tolist()},
               "provenance": f"{what} for {group.label} sampled on {f.n} nodes of [{f.lo}, {f.hi}]"}
        _emit(json.dumps(doc) + "\n", cfg)
        return 0
    buf = io.StringIO()
    buf.write("x,value\n")
    for x, v in zip(f.x, f.values):
        buf.write(f"{x:.17g},{v:.17g}\n")
    _emit(buf.getvalue(), cfg)
    return 0


# -- parsing ---------------------------------------------------------------

def _group(s: str) -> SymmetryGroup:
    try:
        return SymmetryGroup.parse(s)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--grid-n", type=int, default=fnspace.DEFAULT_N,
                        help="odd node count on [-1/2, 1/2] (default %(default)s)")
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--precision", type=int, default=6, help="significant digits in text output")
    common.add_argument("--out", help="write to this file instead of standard output")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="twolevel", description="Optimal 2-level test functions "
                                "and bounds on vanishing at the central point.")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("table1", parents=[common], help="naive vs optimal values for all groups")

    s = sub.add_parser("vanishing", parents=[common], help="upper bound for vanishing to order >= rank")
    s.add_argument("--group", type=_group, required=True)
    s.add_argument("--rank", type=int, required=True)
    s.add_argument("--level", choices=[l.value for l in Level], default="two")

    s = sub.add_parser("lower-bound", parents=[common], help="lower bound for low-rank proportions")
    s.add_argument("--group", type=_group, required=True)
    s.add_argument("--k", type=int, default=None,
                   help="SO(even)/SO(odd): sum over m = 0..k; O/U/Sp: rank cap (only 2); "
                        "default 1 resp. 2")
    s.add_argument("--level", choices=[l.value for l in Level], default="two")

    s = sub.add_parser("iterate", parents=[common], help="one round of iteration with Neumann sums")
    s.add_argument("--group", type=_group, required=True)
    s.add_argument("--terms", type=int, default=5)

    s = sub.add_parser("dump", parents=[common], help="export g, phi_hat or the kernel as CSV")
    s.add_argument("what", choices=("g", "phi_hat", "kernel"))
    s.add_argument("--group", type=_group, required=True)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        cfg = RunConfig(args.grid_n, args.format, args.precision, args.out)
        if args.command == "table1":
            return cmd_table1(cfg)
        if args.command == "vanishing":
            return cmd_vanishing(args.group, args.rank, Level(args.level), cfg)
        if args.command == "lower-bound":
            k = args.k if args.k is not None else (2 if args.group.parity is None else 1)
            return cmd_lower_bound(args.group, k, Level(args.level), cfg)
        if args.command == "iterate":
            if args.terms < 1:
                raise CommandError("--terms must be >= 1")
            return cmd_iterate(args.group, args.terms, cfg)
        if args.command == "dump":
            return cmd_dump(args.what, args.group, cfg)
    except (CommandError, ValueError) as exc:
        print(f"twolevel {args.command}: {exc}", file=sys.stderr)
        return 2
    except (FredholmError, OSError) as exc:
        print(f"twolevel {args.command}: {exc}", file=sys.stderr)
        return 1
    parser.error(f"unknown command {args.command}")  # pragma: no cover


if __name__ == "__main__":
    sys.exit(main())
