"""Command-line front end.

    cwbarriers tensor show cw:6 --symmetry cw
    cwbarriers barrier omega --tensor cw:6 --p 2
    cwbarriers barrier alpha --tensor cw:6
    cwbarriers barrier curve --tensor cw:6 --p-range 0:2:0.1 --format svg --out cw6.svg
    cwbarriers barrier table1 --q 1..14
    cwbarriers barrier mixed --tensor cw:7@9 --tensor cw:6@5.14 --p 2
    cwbarriers oracle check --tensor cw:1 --theta 0.34,0.33,0.33 --grid-step 0.01

Exit status is 0 when every requested row was computed (clamped rows
included), 1 when any row failed, 2 on invalid configuration.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import barriers as B
from .entropy import SolverError, Theta, brute_force_max, maximize_entropy
from .reports import ReportRow, to_csv, to_json, to_svg
from .symmetry import OrbitPartition, cw_small_action, cw_standard_action, orbits, parse_action
from .tensors import (CapacityError, Tensor, TensorError, asymptotic_rank, builtin_tensor,
                      parse_tensor)


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------- resolution

def resolve_tensor(spec: str) -> Tensor:
    if spec.startswith("file:"):
        return parse_tensor(Path(spec[5:]).read_text(encoding="utf-8"))
    return builtin_tensor(spec)


def resolve_partition(spec: str, tensor: Tensor, symmetry: str | None) -> OrbitPartition | None:
    kind, _, arg = spec.partition(":")
    if symmetry in (None, "auto"):
        symmetry = "cw" if kind in ("cw", "cwsmall") else "none"
    if symmetry == "none":
        return None
    if symmetry == "cw":
        if kind == "cw":
            return orbits(tensor.support, cw_standard_action(int(arg)))
        if kind == "cwsmall":
            return orbits(tensor.support, cw_small_action(int(arg)))
        raise ConfigError(f"--symmetry cw needs a cw:q or cwsmall:q tensor, got {spec!r}")
    if symmetry.startswith("file:"):
        action = parse_action(Path(symmetry[5:]).read_text(encoding="utf-8"))
        return orbits(tensor.support, action)
    raise ConfigError(f"--symmetry must be cw, none, auto or file:<path>, got {symmetry!r}")


def resolve_rank(spec: str, rank: float | None) -> tuple[float, str]:
    if rank is not None:
        return float(rank), "user-supplied"
    entry = asymptotic_rank(spec) if not spec.startswith("file:") else None
    if entry is None:
        raise ConfigError(f"no built-in asymptotic rank for {spec!r}; pass --rank")
    return entry.asymptotic_rank, "registry"


def build_query(spec: str, p: float, kappa: float, rank: float | None, symmetry) -> B.BarrierQuery:
    tensor = resolve_tensor(spec)
    value, mode = resolve_rank(spec, rank)
    return B.BarrierQuery(tensor.support, value, spec, p, kappa,
                          orbit_partition=resolve_partition(spec, tensor, symmetry), rank_mode=mode)


def parse_range(text: str) -> tuple[float, float, float]:
    try:
        a, b, step = (float(x) for x in text.split(":"))
    except ValueError:
        raise ConfigError(f"expected a:b:step, got {text!r}") from None
    if not (0 <= a <= b and step > 0):
        raise ConfigError(f"invalid range {text!r}")
    return a, b, step


def parse_q_list(text: str) -> list[int]:
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return list(range(int(lo), int(hi) + 1))
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise ConfigError(f"expected q range like 1..14 or 1,2,3, got {text!r}") from None


def parse_theta(text: str) -> Theta:
    try:
        vals = [float(x) for x in text.split(",")]
    except ValueError:
        raise ConfigError(f"expected t1,t2,t3, got {text!r}") from None
    if len(vals) != 3:
        raise ConfigError("theta needs three comma-separated values")
    # tolerate decimal input that sums to 1 only up to print precision
    total = sum(vals)
    if abs(total - 1.0) > 1e-6:
        raise ConfigError(f"theta must sum to 1, got {total}")
    vals[2] = 1.0 - vals[0] - vals[1]
    return Theta(*vals)


# ---------------------------------------------------------------- commands

def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _render(rows: list[ReportRow], fmt: str, decimals: int, x_label="p", x_values=None, title=""):
    if fmt == "csv":
        return to_csv(rows, decimals)
    if fmt == "json":
        return to_json(rows, decimals)
    if fmt == "svg":
        xs = x_values if x_values is not None else [r.p for r in rows]
        return to_svg([(x, r.barrier) for x, r in zip(xs, rows) if x is not None], x_label, "barrier", title)
    raise ConfigError(f"unknown format {fmt!r}")


def _search_config(args) -> B.SearchConfig:
    try:
        return B.SearchConfig(theta_step=args.theta_step, tol=args.tol)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _guarded(fn, spec, p, kappa, mode):
    try:
        return fn(), None
    except (SolverError, ValueError, ArithmeticError) as exc:
        print(f"error: {spec} p={p}: {exc}", file=sys.stderr)
        return ReportRow.failed(spec, p, kappa, mode, str(exc)), exc


def cmd_tensor_show(args) -> int:
    tensor = resolve_tensor(args.tensor_spec)
    partition = resolve_partition(args.tensor_spec, tensor, args.symmetry)
    n_orbits = len(tensor.support) if partition is None else len(partition)
    lines = [
        f"tensor: {args.tensor_spec}",
        "dims: %d %d %d" % tensor.dims,
        f"support: {len(tensor.support)}",
        f"orbits: {n_orbits}",
    ]
    if partition is not None:
        lines.append("orbit sizes: " + " ".join(str(s) for s in partition.sizes))
    entry = asymptotic_rank(args.tensor_spec) if not args.tensor_spec.startswith("file:") else None
    if entry is not None:
        lines.append(f"asymptotic rank: {entry.asymptotic_rank:g} ({entry.provenance})")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_omega(args) -> int:
    config = _search_config(args)
    query = build_query(args.tensor, args.p, args.kappa, args.rank, args.symmetry)
    row, err = _guarded(lambda: ReportRow.from_result(args.tensor, B.barrier_omega(query, config)),
                        args.tensor, args.p, args.kappa, query.rank_mode)
    _emit(_render([row], args.format, 6), args.out)
    return 1 if err else 0


def cmd_alpha(args) -> int:
    config = _search_config(args)
    query = build_query(args.tensor, 0.0, 0.0, args.rank, args.symmetry)

    def run():
        res = B.barrier_alpha(query, config)
        return ReportRow(args.tensor, None, 0.0, res.value, tuple(res.theta_star),
                         res.rank_mode, res.clamped)

    row, err = _guarded(run, args.tensor, None, 0.0, query.rank_mode)
    if args.format == "svg":
        raise ConfigError("svg output needs a curve; use csv or json for alpha")
    _emit(_render([row], args.format, 6), args.out)
    return 1 if err else 0


def cmd_curve(args) -> int:
    config = _search_config(args)
    a, b, step = parse_range(args.p_range)
    query = build_query(args.tensor, a, args.kappa, args.rank, args.symmetry)
    try:
        curve = B.barrier_curve(query, a, b, step, config)
    except (SolverError, ValueError) as exc:
        print(f"error: {args.tensor}: {exc}", file=sys.stderr)
        return 1
    rows = [ReportRow.from_result(args.tensor, res, p) for p, res in curve]
    _emit(_render(rows, args.format, 6, title=f"barrier for {args.tensor}"), args.out)
    return 0


def cmd_table1(args) -> int:
    config = _search_config(args)
    rows, failed = [], False
    qs = parse_q_list(args.q)
    for q in qs:
        spec = f"cw:{q}"
        query = build_query(spec, args.p, args.kappa, None, "cw")
        row, err = _guarded(lambda: ReportRow.from_result(spec, B.barrier_omega(query, config)),
                            spec, args.p, args.kappa, query.rank_mode)
        rows.append(row)
        failed |= err is not None
    _emit(_render(rows, args.format, 4, x_label="q", x_values=qs,
                  title=f"CW_q barriers at p = {args.p:g}"), args.out)
    return 1 if failed else 0


def parse_factor(text: str, symmetry) -> B.MixedFactor:
    parts = text.split("@")
    if len(parts) not in (2, 3):
        raise ConfigError(f"mixed factors are ID@WEIGHT[@RANK], got {text!r}")
    spec = parts[0]
    try:
        weight = float(parts[1])
        rank = float(parts[2]) if len(parts) == 3 else None
    except ValueError:
        raise ConfigError(f"bad weight or rank in {text!r}") from None
    tensor = resolve_tensor(spec)
    if rank is None and not spec.startswith("file:"):
        entry = asymptotic_rank(spec)
        rank = entry.asymptotic_rank if entry else None
    return B.MixedFactor(tensor.support, weight, rank,
                         resolve_partition(spec, tensor, symmetry), spec)


def cmd_mixed(args) -> int:
    config = _search_config(args)
    if not args.tensor:
        raise ConfigError("barrier mixed needs at least one --tensor ID@WEIGHT")
    factors = tuple(parse_factor(t, args.symmetry) for t in args.tensor)
    mode = {"product": "product-heuristic", "user": "user-supplied"}.get(args.rank_mode, args.rank_mode)
    try:
        mixed = B.MixedSequence(factors, mode, args.rank, "+".join(args.tensor))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    row, err = _guarded(
        lambda: ReportRow.from_result(mixed.tensor_id, B.barrier_mixed(mixed, args.p, args.kappa, config)),
        mixed.tensor_id, args.p, args.kappa, mode)
    _emit(_render([row], args.format, 6), args.out)
    return 1 if err else 0


def cmd_oracle_check(args) -> int:
    tensor = resolve_tensor(args.tensor)
    partition = resolve_partition(args.tensor, tensor, args.symmetry)
    theta = parse_theta(args.theta)
    try:
        oracle = brute_force_max(tensor.support, theta, args.grid_step, partition)
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    solver = maximize_entropy(tensor.support, theta, partition, args.tol).value_bits
    diff = solver - oracle
    ok = -1e-10 <= diff <= args.tolerance
    lines = [
        f"tensor: {args.tensor}",
        f"theta: {theta.t1:.6f} {theta.t2:.6f} {theta.t3:.6f}",
        f"solver: {solver:.10f}",
        f"oracle: {oracle:.10f} (grid step {args.grid_step:g})",
        f"difference: {diff:.3e}",
        f"status: {'ok' if ok else 'MISMATCH'}",
    ]
    _emit("\n".join(lines) + "\n", args.out)
    return 0 if ok else 1


# ---------------------------------------------------------------- parsing

_DEFAULTS = {
    "p": 2.0, "kappa": 0.0, "rank": None, "rank_mode": "product", "symmetry": "auto",
    "theta_step": 0.005, "tol": 1e-9, "format": "csv", "out": None, "q": "1..14",
    "p_range": "0:2:0.1", "grid_step": 0.01, "tolerance": 1e-2, "theta": "0.3333333333,0.3333333333,0.3333333334",
}


def _common(sub):
    sub.add_argument("--config", help="JSON file with option values; flags override it")
    sub.add_argument("--symmetry", help="auto | cw | none | file:<path>")
    sub.add_argument("--theta-step", type=float, dest="theta_step")
    sub.add_argument("--tol", type=float, help="inner solver tolerance in bits")
    sub.add_argument("--format", choices=("csv", "json", "svg"))
    sub.add_argument("--out", help="write output to this path instead of stdout")


def _tensor_opts(sub, p=True):
    sub.add_argument("--tensor", help="diag:n, mm:l,m,n, cw:q, cwsmall:q or file:<path>")
    if p:
        sub.add_argument("--p", type=float)
    sub.add_argument("--kappa", type=float)
    sub.add_argument("--rank", type=float, help="asymptotic rank of the tensor")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cwbarriers", description=__doc__.split("\n\n")[0])
    top = parser.add_subparsers(dest="group", required=True)

    tensor = top.add_parser("tensor").add_subparsers(dest="command", required=True)
    show = tensor.add_parser("show", help="dimensions, support size and orbit count")
    show.add_argument("tensor_spec")
    _common(show)
    show.set_defaults(func=cmd_tensor_show)

    barrier = top.add_parser("barrier").add_subparsers(dest="command", required=True)
    omega = barrier.add_parser("omega", help="barrier for upper bounds on omega(p)")
    _tensor_opts(omega)
    _common(omega)
    omega.set_defaults(func=cmd_omega)

    alpha = barrier.add_parser("alpha", help="barrier for lower bounds on alpha")
    _tensor_opts(alpha, p=False)
    _common(alpha)
    alpha.set_defaults(func=cmd_alpha)

    curve = barrier.add_parser("curve", help="omega(p) barriers over a p grid")
    curve.add_argument("--tensor")
    curve.add_argument("--p-range", "--p", dest="p_range", help="a:b:step")
    curve.add_argument("--kappa", type=float)
    curve.add_argument("--rank", type=float)
    _common(curve)
    curve.set_defaults(func=cmd_curve)

    table1 = barrier.add_parser("table1", help="CW_q barriers, 4-decimal table rows")
    table1.add_argument("--q", help="1..14 or a comma list")
    table1.add_argument("--p", type=float)
    table1.add_argument("--kappa", type=float)
    _common(table1)
    table1.set_defaults(func=cmd_table1)

    mixed = barrier.add_parser("mixed", help="barrier for a mixed tensor sequence")
    mixed.add_argument("--tensor", action="append", help="ID@WEIGHT[@RANK]; repeat per factor")
    mixed.add_argument("--p", type=float)
    mixed.add_argument("--kappa", type=float)
    mixed.add_argument("--rank", type=float, help="sequence rank per unit n (user mode)")
    mixed.add_argument("--rank-mode", dest="rank_mode", choices=("product", "user"))
    _common(mixed)
    mixed.set_defaults(func=cmd_mixed)

    oracle = top.add_parser("oracle").add_subparsers(dest="command", required=True)
    check = oracle.add_parser("check", help="compare the solver to the brute-force grid")
    check.add_argument("--tensor")
    check.add_argument("--theta", help="t1,t2,t3")
    check.add_argument("--grid-step", type=float, dest="grid_step")
    check.add_argument("--tolerance", type=float, help="allowed solver - oracle difference")
    _common(check)
    check.set_defaults(func=cmd_oracle_check)
    return parser


def _apply_config(args):
    values = {}
    if getattr(args, "config", None):
        try:
            values = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(values, dict):
            raise ConfigError("config file must hold a JSON object")
        values = {k.replace("-", "_"): v for k, v in values.items()}
    for key, default in _DEFAULTS.items():
        if hasattr(args, key) and getattr(args, key) is None:
            setattr(args, key, values.get(key, default))
    if hasattr(args, "tensor") and args.tensor is None:
        if "tensor" not in values:
            raise ConfigError("--tensor is required")
        args.tensor = values["tensor"]
    for key in ("p", "kappa"):
        v = getattr(args, key, 0.0)
        if v is not None and not (math.isfinite(v) and v >= 0):
            raise ConfigError(f"--{key} must be finite and nonnegative")
    return args


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args)
        return args.func(args)
    except (ConfigError, TensorError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
