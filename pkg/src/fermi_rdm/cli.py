"""Command-line front end: ``certify``, ``sweep`` and ``extremal``."""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import comb
from typing import Optional, Sequence

import numpy as np

from .certificates import (
    all_passed,
    certify_state,
    check_entropy_bound,
    check_hs_bound,
    check_op_bounds,
    check_truncated_bound,
    tr_g1_one_minus_g1,
)
from .errors import DimensionError, NormalizationError, ParityError, TheoremViolation
from .extremal import OptimizerConfig, maximize
from .fock_basis import DEFAULT_CAP_DIM, MAX_FOCK_MODES
from .rdm import gamma1, gamma2, gamma2_truncated
from .spectral import eig_hermitian, entropy_from_eigenvalues, hs_norm
from .states import SectorVector, near_slater, random_state, slater, yang_pairing

SCHEMA_VERSION = 1
FAMILIES = ("slater", "pairing", "random", "near_slater")
CSV_COLUMNS = (
    "schema_version", "family", "M", "N", "seed", "t",
    "hs_gamma2", "op_gamma2", "tr_gamma2", "hs_gamma2T", "tr_g1_1mg1", "entropy",
    "margin_hs_bound", "margin_truncated_bound", "margin_op_bounds", "margin_entropy_bound",
)


class UsageError(Exception):
    pass


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)  # shortest string that round-trips
    return str(x)


def parse_int_list(text: str) -> list[int]:
    """``"4"``, ``"2-8"`` (inclusive) or ``"2,4,6"``."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    if not out:
        raise argparse.ArgumentTypeError(f"empty integer list {text!r}")
    return out


def parse_float_list(text: str) -> list[float]:
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def parse_families(text: str) -> list[str]:
    fams = [f.strip() for f in text.split(",") if f.strip()]
    bad = [f for f in fams if f not in FAMILIES]
    if bad or not fams:
        raise argparse.ArgumentTypeError(f"families must be a non-empty subset of {FAMILIES}, got {text!r}")
    return fams


def resolve_threads(flag: int) -> int:
    env = os.environ.get("FERMI_RDM_THREADS")
    n = int(env) if env else flag
    return max(1, n)


def _check_dims(M: int, N: int, cap_dim: int) -> None:
    if not 0 <= N <= M:
        raise UsageError(f"need 0 <= N <= M, got M={M}, N={N}")
    if M > MAX_FOCK_MODES:
        raise UsageError(f"two-body matrices need M <= {MAX_FOCK_MODES}")
    if comb(M, N) > cap_dim:
        raise UsageError(f"sector dimension C({M},{N}) exceeds --cap-dim {cap_dim}")


def build_state(family: str, M: int, N: int, seed: Optional[int], t: Optional[float],
                occupied: Optional[Sequence[int]] = None) -> SectorVector:
    if family == "slater":
        occ = list(range(N)) if occupied is None else list(occupied)
        if len(set(occ)) != N:
            raise UsageError(f"--occupied must list {N} distinct modes")
        return slater(M, occ)
    if family == "pairing":
        return yang_pairing(M, N)
    if family == "random":
        return random_state(M, N, seed)
    if family == "near_slater":
        return near_slater(M, N, 0.0 if t is None else t, seed)
    raise UsageError(f"unknown family {family!r}")


# -- certify --------------------------------------------------------------


def cmd_certify(args, out=sys.stdout) -> int:
    _check_dims(args.M, args.N, args.cap_dim)
    psi = build_state(args.family, args.M, args.N, args.seed, args.t, args.occupied)
    reports = certify_state(psi, seed=args.aux_seed, operator_checks=not args.no_operator_checks)
    for r in reports:
        r.context.update(family=args.family, state_seed=args.seed, t=args.t)
        out.write(r.to_json() + "\n")
    return 0 if all_passed(reports) else 1


# -- sweep ----------------------------------------------------------------


@dataclass(frozen=True)
class SweepSpec:
    M_range: tuple[int, ...]
    N_range: tuple[int, ...]
    families: tuple[str, ...]
    seeds: tuple[int, ...] = (0,)
    t_values: tuple[float, ...] = (0.0,)

    def __post_init__(self):
        if not self.families:
            raise UsageError("sweep needs at least one family")
        for M in self.M_range:
            if not 0 <= M <= MAX_FOCK_MODES:
                raise UsageError(f"M={M} outside [0, {MAX_FOCK_MODES}]")

    def rows(self):
        """Work units in deterministic (family, M, N, seed, t) order."""
        for fam in self.families:
            for M in self.M_range:
                for N in self.N_range:
                    if not 0 <= N <= M:
                        continue
                    if fam == "pairing" and (M % 2 or N % 2):
                        continue
                    if fam in ("slater", "pairing"):
                        yield fam, M, N, None, None
                    elif fam == "random":
                        for s in self.seeds:
                            yield fam, M, N, s, None
                    else:
                        for s in self.seeds:
                            for t in self.t_values:
                                yield fam, M, N, s, t


def sweep_row(family: str, M: int, N: int, seed: Optional[int], t: Optional[float]) -> dict:
    psi = build_state(family, M, N, seed, t)
    g1, g2 = gamma1(psi), gamma2(psi)
    w2 = eig_hermitian(g2).eigenvalues
    T = gamma2_truncated(psi, g1, g2)
    row = {
        "schema_version": SCHEMA_VERSION,
        "family": family, "M": M, "N": N, "seed": seed, "t": t,
        "hs_gamma2": hs_norm(g2),
        "op_gamma2": float(np.max(np.abs(w2), initial=0.0)),
        "tr_gamma2": float(np.trace(g2).real),
        "hs_gamma2T": hs_norm(T),
        "tr_g1_1mg1": tr_g1_one_minus_g1(g1),
        "entropy": None,
        "margin_hs_bound": check_hs_bound(psi, g2).margin,
        "margin_truncated_bound": check_truncated_bound(psi, g1, g2).margin,
        "margin_op_bounds": check_op_bounds(psi, g1, g2).margin,
        "margin_entropy_bound": None,
    }
    if N >= 2:
        row["entropy"] = entropy_from_eigenvalues(w2 / (N * (N - 1)))
        row["margin_entropy_bound"] = check_entropy_bound(psi, g2).margin
    return row


def run_sweep(spec: SweepSpec, threads: int = 1) -> list[dict]:
    units = list(spec.rows())
    if threads <= 1:
        return [sweep_row(*u) for u in units]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda u: sweep_row(*u), units))


def write_csv(rows: list[dict], fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for row in rows:
        w.writerow([fmt(row[c]) for c in CSV_COLUMNS])


def cmd_sweep(args, out=sys.stdout) -> int:
    spec = SweepSpec(tuple(args.M), tuple(args.N), tuple(args.family), tuple(args.seed), tuple(args.t))
    for fam, M, N, _, _ in spec.rows():
        _check_dims(M, N, args.cap_dim)
    rows = run_sweep(spec, resolve_threads(args.threads))
    if args.out in (None, "-"):
        write_csv(rows, out)
    else:
        with open(args.out, "w", newline="") as fh:
            write_csv(rows, fh)
    return 0


# -- extremal -------------------------------------------------------------


def cmd_extremal(args, out=sys.stdout) -> int:
    _check_dims(args.M, args.N, args.cap_dim)
    cfg = OptimizerConfig(
        max_iters=args.max_iters, step_size=args.step, tol_grad=args.tol_grad,
        restarts=args.restarts, seed=args.seed,
    )
    try:
        result = maximize(args.M, args.N, cfg)
        status = 0
        payload = result.to_dict()
    except TheoremViolation as exc:
        result = exc.report
        payload = {**result.to_dict(), "theorem_violation": True, "message": str(exc)}
        status = 1
    text = json.dumps(payload)
    if args.out and args.out != "-":
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    summary = {
        "M": args.M, "N": args.N,
        "best_value": result.best_value,
        "best_value_over_N": result.ratio,
        "sqrt5_N": math.sqrt(5) * args.N,
        "converged": result.converged,
    }
    if status:
        summary["theorem_violation"] = True
    out.write(json.dumps(summary) + "\n")
    return status


# -- parser ---------------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--threads", type=int, default=1, help="worker threads (env FERMI_RDM_THREADS overrides)")
    p.add_argument("--cap-dim", type=int, default=DEFAULT_CAP_DIM, help="maximum sector dimension")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fermi-rdm", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("certify", help="run all certificates on one state, JSON lines to stdout")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--seed", type=int, default=0, help="state seed (random, near_slater)")
    p.add_argument("--t", type=float, default=None, help="interpolation weight for near_slater")
    p.add_argument("--occupied", type=parse_int_list, default=None, help="Slater modes, e.g. 0,2,3")
    p.add_argument("--aux-seed", type=int, default=0, help="seed for test tensors and projections")
    p.add_argument("--no-operator-checks", action="store_true", help="skip full-Fock operator identities")
    _common(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("sweep", help="tabulate norms and bound margins over a grid, CSV output")
    p.add_argument("--family", type=parse_families, required=True, help="comma list of families")
    p.add_argument("--M", type=parse_int_list, required=True, help="e.g. 8, 4-8 or 4,6,8")
    p.add_argument("--N", type=parse_int_list, required=True)
    p.add_argument("--seed", type=parse_int_list, default=[0])
    p.add_argument("--t", type=parse_float_list, default=[0.0])
    p.add_argument("--out", default=None, help="CSV path; stdout when omitted")
    _common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("extremal", help="maximize ||gamma2||_HS over the sector")
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=8)
    p.add_argument("--max-iters", type=int, default=2000)
    p.add_argument("--step", type=float, default=0.1)
    p.add_argument("--tol-grad", type=float, default=1e-8)
    p.add_argument("--out", default=None, help="ExtremalResult JSON path")
    _common(p)
    p.set_defaults(func=cmd_extremal)
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out=out)
    except (UsageError, ParityError, DimensionError, NormalizationError, ValueError) as exc:
        print(f"fermi-rdm: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
