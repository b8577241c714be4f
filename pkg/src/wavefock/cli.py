"""Command-line front end.

Subcommands load a filter bank or block matrix (from a JSON file or a named
builtin), run the corresponding verification, and emit a JSON or CSV report.
Exit codes: 0 when the requested verdict holds, 1 when it fails, 2 when the
input cannot be parsed.  Reports are byte-identical for a fixed seed and
config: keys are sorted and wall-clock data never enters the output.
"""

from __future__ import annotations

import argparse
import io
import csv
import json
import sys
from dataclasses import dataclass

from . import corpus
from .acceptance import DEFAULT_SEED, run_all
from .anchor import compute_anchor, cyclicity_check, pullback_depth
from .errors import SizeCapError, WavefockError
from .filterbank import FilterBank, relation_report
from .fock import ChoiMatrix, creation_matrices, truncated_fock, tstar_t_check, validate_choi
from .polyphase import LoopMatrix, SampledLoop, dual_loop, filters_from_loop, loop_from_filters
from .wavelet_fock import cor6_check, sampled_choi

VERDICT_FAILED = 1
PARSE_FAILED = 2

_CHOI_BUILTINS = {"cuntz", "collapse", "random-psd"}


class CliParseError(Exception):
    pass


@dataclass
class RunConfig:
    tolerance: float = 1e-9
    grid_size: int = 64
    fock_level_cap: int = 2
    mode_range: int | None = None
    rng_seed: int = DEFAULT_SEED
    output: str | None = None
    fmt: str = "json"

    def __post_init__(self):
        if self.tolerance <= 0:
            raise CliParseError("tolerance must be positive")
        if self.grid_size <= 0 or self.fock_level_cap <= 0:
            raise CliParseError("grid and level caps must be positive")
        if self.mode_range is not None and self.mode_range <= 0:
            raise CliParseError("mode range must be positive")


# ----------------------------------------------------------------------
# input plumbing


def _load_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise CliParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CliParseError(f"{path} is not valid JSON: {exc}") from exc


def _parse_builtin(tokens: list) -> tuple:
    name, params = tokens[0], {}
    for tok in tokens[1:]:
        key, sep, value = tok.partition("=")
        if not sep or not key:
            raise CliParseError(f"builtin parameter {tok!r} is not key=value")
        params[key] = value
    return name, params


def _bank_from_args(args) -> FilterBank:
    if args.builtin:
        name, params = _parse_builtin(args.builtin)
        try:
            return corpus.builtin_bank(name, params)
        except ValueError as exc:
            raise CliParseError(str(exc)) from exc
    if not args.input:
        raise CliParseError("either --input or --builtin is required")
    try:
        return FilterBank.from_json(_load_json(args.input))
    except ValueError as exc:
        raise CliParseError(str(exc)) from exc


def _fock_input_from_args(args, config: RunConfig):
    """Returns ("bank", FilterBank) or ("choi", ChoiMatrix); may bump the
    level cap when the builtin carries K=..."""
    if args.builtin:
        name, params = _parse_builtin(args.builtin)
        if "K" in params:
            config.fock_level_cap = int(params.pop("K"))
        try:
            if name in _CHOI_BUILTINS:
                return "choi", ChoiMatrix.from_matrix(corpus.builtin_choi(name, params))
            return "bank", corpus.builtin_bank(name, params)
        except ValueError as exc:
            raise CliParseError(str(exc)) from exc
    if not args.input:
        raise CliParseError("either --input or --builtin is required")
    doc = _load_json(args.input)
    try:
        if isinstance(doc, dict) and "filters" in doc:
            return "bank", FilterBank.from_json(doc)
        return "choi", ChoiMatrix.from_json(doc)
    except ValueError as exc:
        raise CliParseError(str(exc)) from exc


# ----------------------------------------------------------------------
# output plumbing


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for key in sorted(obj):
            yield from _flatten(obj[key], f"{prefix}{key}." if prefix else f"{key}.")
    elif isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}{i}.")
    else:
        yield prefix.rstrip("."), obj


def _to_csv(doc: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["key", "value"])
    for path, value in _flatten(doc):
        if isinstance(value, bool):
            value = str(value).lower()
        writer.writerow([path, value])
    return buf.getvalue()


def _emit(doc: dict, config: RunConfig):
    if config.fmt == "csv":
        text = _to_csv(doc)
    else:
        text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if config.output:
        with open(config.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _diagnostic(exc: WavefockError) -> int:
    print(f"{exc.code}: {exc}", file=sys.stderr)
    return VERDICT_FAILED


# ----------------------------------------------------------------------
# subcommands


def cmd_verify(args, config: RunConfig) -> int:
    bank = _bank_from_args(args)
    try:
        rep = relation_report(
            bank, mode_range=config.mode_range, tol=config.tolerance, grid=config.grid_size
        )
    except ValueError as exc:
        raise CliParseError(str(exc)) from exc
    _emit(rep.to_json(), config)
    verdict = rep.cuntz if bank.is_self_dual else rep.biorthogonal
    return 0 if verdict else VERDICT_FAILED


def cmd_loop(args, config: RunConfig) -> int:
    if args.direction == "from-loop":
        doc = _load_json(args.input) if args.input else None
        if doc is None:
            raise CliParseError("--input with a loop JSON file is required")
        try:
            A = LoopMatrix.from_json(doc)
        except ValueError as exc:
            raise CliParseError(str(exc)) from exc
        _emit(filters_from_loop(A).to_json(), config)
        return 0

    bank = _bank_from_args(args)
    A, At = loop_from_filters(bank)
    report = {"A": A.to_json(), "Atilde": None, "Atilde_exact": False}
    try:
        if At is None:
            At = dual_loop(A, grid=config.grid_size)
        if isinstance(At, SampledLoop):
            report["note"] = "determinant is not a monomial unit; no exact dual loop"
        else:
            report["Atilde"] = At.to_json()
            report["Atilde_exact"] = True
    except WavefockError as exc:
        _emit(report, config)
        return _diagnostic(exc)
    _emit(report, config)
    return 0


def cmd_anchor(args, config: RunConfig) -> int:
    bank = _bank_from_args(args)
    span = config.mode_range if config.mode_range is not None else 8
    try:
        anchor = compute_anchor(bank, tol=config.tolerance)
        depths = {str(n): pullback_depth(bank, n, anchor) for n in range(-span, span + 1)}
        cyc = cyclicity_check(bank, anchor, n_range=min(span, 8))
    except WavefockError as exc:
        return _diagnostic(exc)
    doc = {"anchor": anchor.to_json(), "depths": depths, "cyclicity": cyc.to_json()}
    _emit(doc, config)
    return 0


def cmd_fock(args, config: RunConfig) -> int:
    kind, obj = _fock_input_from_args(args, config)
    K = config.fock_level_cap
    cor6 = None
    try:
        if kind == "bank":
            sampled = sampled_choi(obj, grid_size=config.grid_size)
            P = sampled.block_choi()
            cor6 = cor6_check(obj, grid_size=config.grid_size, K=K)
        else:
            P = obj
        choi_rep = validate_choi(P)
        cap = max(16, P.N * P.d)
        fock = truncated_fock(P, K, letter_cap=cap)
        ops = creation_matrices(P, K, letter_cap=cap)
        tstar = tstar_t_check(ops, P)
    except SizeCapError as exc:
        # caps are configuration, not a verdict about the input
        raise CliParseError(str(exc)) from exc
    except WavefockError as exc:
        return _diagnostic(exc)

    doc = {
        "choi": {
            "rank": choi_rep.rank,
            "min_eigenvalue": choi_rep.min_eigenvalue,
            "norm": choi_rep.norm,
            "hermiticity_residual": choi_rep.hermiticity_residual,
        },
        "fock": fock.to_json(),
        "tstar": tstar.to_json(),
    }
    if cor6 is not None:
        doc["cor6"] = cor6.to_json()
    _emit(doc, config)

    failed = max(tstar.vacuum_residual, tstar.general_residual) > config.tolerance
    if cor6 is not None:
        failed = failed or cor6.residual > config.tolerance
    return VERDICT_FAILED if failed else 0


def cmd_acceptance(args, config: RunConfig) -> int:
    summary = run_all(seed=config.rng_seed)
    for line in summary.lines():
        print(line, file=sys.stderr)
    _emit(summary.to_json(), config)
    return 0 if summary.passed else VERDICT_FAILED


# ----------------------------------------------------------------------
# argument parsing


def _add_common(sub, grid_default=64):
    sub.add_argument("--input", help="JSON input file")
    sub.add_argument(
        "--builtin",
        nargs="+",
        metavar="NAME [key=value ...]",
        help="named builtin instance, e.g. 'haar' or 'random-psd N=3 rank=2 seed=7'",
    )
    sub.add_argument("--output", help="write the report here instead of stdout")
    sub.add_argument("--tolerance", type=float, default=1e-9)
    sub.add_argument("--grid", type=int, default=grid_default)
    sub.add_argument("--levels", type=int, default=2, help="word-length cap for Fock levels")
    sub.add_argument("--modes", type=int, default=None, help="mode range for exact checks")
    sub.add_argument("--seed", type=int, default=DEFAULT_SEED)
    fmt = sub.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json", default="json")
    fmt.add_argument("--csv", dest="fmt", action="store_const", const="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wavefock",
        description="verify filter-bank relations, loop matrices, anchors and Fock data",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("verify", help="subband relation residuals and verdicts")
    _add_common(sub)
    sub.set_defaults(fn=cmd_verify)

    sub = subs.add_parser("loop", help="convert between filters and loop matrices")
    sub.add_argument(
        "--direction", choices=("to-loop", "from-loop"), default="to-loop"
    )
    _add_common(sub)
    sub.set_defaults(fn=cmd_loop)

    sub = subs.add_parser("anchor", help="anchor subspace, depths, cyclicity")
    _add_common(sub)
    sub.set_defaults(fn=cmd_anchor)

    sub = subs.add_parser("fock", help="truncated Fock report; cor6 for bank input")
    _add_common(sub, grid_default=8)
    sub.set_defaults(fn=cmd_fock)

    sub = subs.add_parser("acceptance", help="run the full release gate")
    _add_common(sub)
    sub.set_defaults(fn=cmd_acceptance)

    return parser


def _config_from_args(args) -> RunConfig:
    return RunConfig(
        tolerance=args.tolerance,
        grid_size=args.grid,
        fock_level_cap=args.levels,
        mode_range=args.modes,
        rng_seed=args.seed,
        output=args.output,
        fmt=args.fmt,
    )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config_from_args(args)
        return args.fn(args, config)
    except CliParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return PARSE_FAILED


if __name__ == "__main__":
    sys.exit(main())
