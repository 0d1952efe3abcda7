"""Command-line surface: validation, pointwise evaluation, integral tables,
actions, Codazzi sampling, and figure-data export.

Exit codes: 0 success, 1 validation or check failure, 2 usage error,
3 numeric-domain error (out-of-domain coordinates, degenerate spectra,
singular metric blocks, exhausted retries).

All table output is RFC-4180-style CSV with '.' decimal separators and 17
significant digits; pointwise output is JSON.  Every subcommand is
deterministic given its flags.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .acceptance import run_all
from .bures_metric import closed_form_AB, metric
from .curvature import (
    FRAME_PAIRS,
    codazzi_residual,
    frame_curvature,
    riemann,
    scalar_curvature_closed_form,
)
from .errors import BuresError, RetryExhausted
from .invariants import INVARIANT_NAMES, invariant_row
from .quadrature import (
    FIELD_NAMES,
    QuadratureSpec,
    invariant_table,
    sample_point,
    table_csv,
    ym_actions,
)
from .spin7 import decompose
from .state_space import (
    COORD_NAMES,
    ZETA1_MAX,
    ZETA2_MAX,
    ParameterPoint,
    eigenvalues_from_spherical,
    spectrum_from_spherical,
    spectrum_gaps,
)

__all__ = ["RunConfig", "main"]

#: Published reference values for the three integrated squared norms, in the
#: row order (bures, sd, asd).  They are comparison data only: the source
#: table is internally inconsistent (the full-field value is ten orders of
#: magnitude below the sum of its parts), so nothing is asserted against it.
ACTION_REFERENCES: Tuple[float, float, float] = (0.0145485, 5.33268e6, 5.33255e6)


@dataclass(frozen=True)
class RunConfig:
    """Parsed invocation: subcommand, quadrature fields, output routing."""

    subcommand: str
    method: str = "mc"
    samples: int = 1000
    nodes: int = 2
    seed: int = 0
    out: Optional[str] = None
    output_format: str = "csv"
    grid: int = 64
    coords: Tuple[float, ...] = ()
    threshold: float = 1e-8
    sym_tol: float = 1e-3
    step_scale: float = 1e-3


def _quad_spec(cfg: RunConfig) -> QuadratureSpec:
    return QuadratureSpec(
        method=cfg.method,
        n_samples=cfg.samples,
        nodes_per_dim=cfg.nodes,
        seed=cfg.seed,
        threshold=cfg.threshold,
        sym_tol=cfg.sym_tol,
        step_scale=cfg.step_scale,
    )


def _emit(text: str, out: Optional[str]) -> None:
    """Write CSV text to a file (preserving CRLF) or to stdout."""
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as handle:
            handle.write(text)


def _format_cell(cell: object) -> str:
    if isinstance(cell, float):
        return format(cell, ".17g")
    return str(cell)


def _csv_text(header: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(list(header))
    for row in rows:
        writer.writerow([_format_cell(cell) for cell in row])
    return buf.getvalue()


def cmd_validate(cfg: RunConfig) -> int:
    results = run_all()
    for result in results:
        print(result.line())
    return 0 if all(result.passed for result in results) else 1


def cmd_point(cfg: RunConfig) -> int:
    p = ParameterPoint(*cfg.coords)
    m = metric(p)
    r = riemann(p)
    form = frame_curvature(p)
    plus, minus = decompose(form)

    def _row_dict(row) -> dict:
        return dict(zip(INVARIANT_NAMES, row.as_array().tolist()))

    doc = {
        "coordinates": dict(zip(COORD_NAMES, [float(c) for c in cfg.coords])),
        "g": m.g.tolist(),
        "g_inv": m.g_inv.tolist(),
        "sqrt_det": m.sqrt_det,
        "scalar_curvature": r.scalar,
        "scalar_curvature_closed_form": scalar_curvature_closed_form(
            spectrum_from_spherical(p.zeta1, p.zeta2)),
        "codazzi_residual": codazzi_residual(p),
        "invariants": {
            "bures": _row_dict(invariant_row(form)),
            "sd": _row_dict(invariant_row(plus)),
            "asd": _row_dict(invariant_row(minus)),
        },
        "frame_pairs": [list(pair) for pair in FRAME_PAIRS],
        "singular_values": np.linalg.svd(
            form.f, compute_uv=False).tolist(),
    }
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


def cmd_table(cfg: RunConfig) -> int:
    rows = invariant_table(_quad_spec(cfg))
    _emit(table_csv(rows), cfg.out)
    return 0


def cmd_action(cfg: RunConfig) -> int:
    estimates = ym_actions(_quad_spec(cfg))
    names = (FIELD_NAMES[0], FIELD_NAMES[2], FIELD_NAMES[1])  # bures, sd, asd
    body = [
        [name, float(est.value), float(est.stderr), float(ref),
         est.n_evaluated, est.n_rejected]
        for name, est, ref in zip(names, estimates, ACTION_REFERENCES)
    ]
    text = _csv_text(
        ["field", "value", "stderr", "reference", "n_evaluated", "n_rejected"],
        body,
    )
    _emit(text, cfg.out)
    return 0


def cmd_codazzi(cfg: RunConfig) -> int:
    # The outer Ricci stencil reaches ~1e-2 of a box length away from the
    # center, so draws need a far wider degeneracy margin than the
    # integrators; rejected or failing draws advance the retry counter just
    # like the Monte-Carlo loop.
    rows = []
    for index in range(cfg.samples):
        residual = None
        for retry in range(9):
            p = sample_point(cfg.seed, index, retry)
            lam = eigenvalues_from_spherical(np.array([p.zeta1, p.zeta2]))
            if float(lam.min()) < 0.02 or float(spectrum_gaps(lam)) < 0.02:
                continue
            try:
                residual = codazzi_residual(p)
            except BuresError:
                continue
            break
        if residual is None:
            raise RetryExhausted(f"sample {index} exhausted retries")
        rows.append([index, *[float(v) for v in p.as_array()], float(residual)])
    text = _csv_text(["index", *COORD_NAMES, "residual"], rows)
    _emit(text, cfg.out)
    return 0


def cmd_ab_scan(cfg: RunConfig) -> int:
    zeta1 = np.linspace(0.0, ZETA1_MAX, cfg.grid)
    zeta2 = np.linspace(0.0, ZETA2_MAX, cfg.grid)
    rows = []
    for z1 in zeta1:
        for z2 in zeta2:
            a_val, b_val = closed_form_AB(spectrum_from_spherical(float(z1), float(z2)))
            rows.append([float(z1), float(z2), a_val, b_val])
    _emit(_csv_text(["zeta1", "zeta2", "A", "B"], rows), cfg.out)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bures",
        description=("Bures-metric geometry of three-level quantum states: "
                     "validation oracles, pointwise curvature, integral "
                     "tables, and figure data."),
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    sub.add_parser("validate",
                   help="run every acceptance check, one line per check")

    p_point = sub.add_parser(
        "point", help="metric, curvature, and invariants at one point")
    p_point.add_argument(
        "coords", type=float, nargs=8, metavar="C",
        help=f"eight coordinates in the order {', '.join(COORD_NAMES)}")

    p_table = sub.add_parser(
        "table", help="integrated invariant table for all four fields")
    p_table.add_argument("--method", choices=("mc", "lattice"), default="mc")
    p_table.add_argument("--samples", type=int, default=1000,
                         help="Monte-Carlo sample count")
    p_table.add_argument("--nodes", type=int, default=2,
                         help="lattice nodes per active coordinate")
    p_table.add_argument("--seed", type=int, default=0)
    p_table.add_argument("--out", default=None, help="output CSV path")
    p_table.add_argument("--threshold", type=float, default=1e-8,
                         help="degeneracy rejection threshold")
    p_table.add_argument("--sym-tol", type=float, default=1e-3,
                         help="pair-exchange symmetry noise guard")

    p_action = sub.add_parser(
        "action", help="integrated squared norms of the three fields")
    p_action.add_argument("--samples", type=int, default=1000)
    p_action.add_argument("--seed", type=int, default=0)
    p_action.add_argument("--out", default=None)

    p_codazzi = sub.add_parser(
        "codazzi", help="normalized Codazzi residual at sampled points")
    p_codazzi.add_argument("--samples", type=int, default=8)
    p_codazzi.add_argument("--seed", type=int, default=0)
    p_codazzi.add_argument("--out", default=None)

    p_scan = sub.add_parser(
        "ab-scan", help="A and B polynomials over the spectral-angle grid")
    p_scan.add_argument("--grid", type=int, default=64,
                        help="nodes per axis (inclusive endpoints)")
    p_scan.add_argument("--out", default=None)

    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    fields = {
        "subcommand": args.subcommand,
        "output_format": "json" if args.subcommand == "point" else "csv",
    }
    for name in ("method", "samples", "nodes", "seed", "out", "grid",
                 "threshold"):
        if hasattr(args, name):
            fields[name] = getattr(args, name)
    if hasattr(args, "sym_tol"):
        fields["sym_tol"] = args.sym_tol
    if hasattr(args, "coords"):
        fields["coords"] = tuple(args.coords)
    return RunConfig(**fields)


_DISPATCH = {
    "validate": cmd_validate,
    "point": cmd_point,
    "table": cmd_table,
    "action": cmd_action,
    "codazzi": cmd_codazzi,
    "ab-scan": cmd_ab_scan,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 2
    if getattr(args, "grid", 2) < 2:
        print("error: --grid must be at least 2", file=sys.stderr)
        return 2
    cfg = _config_from_args(args)
    try:
        return _DISPATCH[cfg.subcommand](cfg)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BuresError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
