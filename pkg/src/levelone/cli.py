"""Command line front end.

Exit codes: 0 success or verified certificate, 1 unverified certificate,
2 table cross-verification mismatch, 3 precondition or usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .arith import is_prime
from .classical import eisenstein
from .errors import PreconditionError
from .expr import evaluate
from .hecke import dimensions, eigenform, miller_basis
from .nonordinary import (
    certify_theorem1,
    certify_theorem2,
    criterion_certificate,
    hatada_certificate,
    nilpotency_certificate,
    nonordinary_table,
    solve_part1,
    weight_criterion,
)

EXIT_OK, EXIT_UNVERIFIED, EXIT_MISMATCH, EXIT_PRECONDITION = 0, 1, 2, 3

DEFAULT_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19)


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)
    output_format: str = "plain"
    output_path: Optional[Path] = None
    jobs: int = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PRECONDITION, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError(f"{n} must be at least 1")
    return n


def _even(text: str) -> int:
    n = int(text)
    if n % 2:
        raise argparse.ArgumentTypeError(f"weight {n} is odd")
    return n


def _prime(text: str) -> int:
    n = int(text)
    if not is_prime(n):
        raise argparse.ArgumentTypeError(f"{n} is not prime")
    return n


def _prime_list(text: str) -> list[int]:
    return [_prime(part) for part in text.split(",") if part.strip()]


def _weight_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    if not sep:
        raise argparse.ArgumentTypeError(f"range {text!r} must look like 12..42")
    return _even(lo), _even(hi)


def _triple(text: str) -> tuple[int, int, int]:
    parts = [int(x) for x in text.split(",")]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("decomposition must be r,s,t")
    return tuple(parts)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prec", type=_positive, default=None, help="series precision O(q^N)")
    common.add_argument("--format", choices=["json", "csv", "markdown", "plain"], default=None)
    common.add_argument("--out", type=Path, default=None, help="write output here instead of stdout")
    common.add_argument("--jobs", type=_positive, default=1, help="worker processes for table cells")

    parser = _Parser(prog="levelone", description="Exact q-expansions, Hecke matrices and non-ordinarity certificates.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("expand", parents=[common], help="print the coefficients of a form expression")
    p.add_argument("form", help='e.g. "delta*E6*E4^2", "j", "E4^2*E6^3*delta^-4"')

    p = sub.add_parser("eigenform", parents=[common], help="normalized eigenform of a weight with dim S_k = 1")
    p.add_argument("k", type=_even)

    p = sub.add_parser("table", parents=[common], help="weights where all eigenforms are non-ordinary")
    p.add_argument("--primes", type=_prime_list, default=list(DEFAULT_PRIMES))
    p.add_argument("--range", type=_weight_range, default=(12, 42), dest="weights")
    p.add_argument("--cross-verify", action="store_true", help="check every cell against charpoly(T_p) mod p")

    p = sub.add_parser("certify", parents=[common], help="emit a certificate as JSON")
    p.add_argument("kind", choices=["theorem1", "theorem2", "nilpotency", "hatada", "weight-criterion"])
    p.add_argument("--k", type=_even, default=None)
    p.add_argument("--p", type=_prime, required=True)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--b", type=int, default=None)
    p.add_argument("--u", type=_positive, default=1)
    p.add_argument("--v", type=_positive, default=None)
    p.add_argument("--decomposition", type=_triple, default=None, metavar="R,S,T")
    p.add_argument("--form", default=None, help="form expression for f (default: a cusp form of weight k)")
    p.add_argument("--basis-index", type=_positive, default=1,
                   help="cuspidal Miller basis element used when dim S_k > 1")
    p.add_argument("--mod-p-only", action="store_true", help="skip the exact constant-term evaluation")
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    defaults = {"expand": "plain", "eigenform": "plain", "table": "csv", "certify": "json"}
    params = {k: v for k, v in vars(args).items() if k not in ("command", "format", "out", "jobs")}
    return RunConfig(args.command, params, args.format or defaults[args.command], args.out, args.jobs)


def _emit(text: str, cfg: RunConfig) -> None:
    if cfg.output_path is None:
        sys.stdout.write(text)
    else:
        cfg.output_path.parent.mkdir(parents=True, exist_ok=True)
        cfg.output_path.write_text(text)


def _render_series(series, label: str, fmt: str) -> str:
    rows = list(series.items())
    if fmt == "json":
        return json.dumps({
            "form": label,
            "prec": series.prec,
            "valuation": series.valuation,
            "weight": series.weight,
            "coefficients": [[n, str(c)] for n, c in rows],
        }, indent=2) + "\n"
    if fmt == "csv":
        return "n,coefficient\n" + "".join(f"{n},{c}\n" for n, c in rows)
    if fmt == "markdown":
        return "| n | a(n) |\n|---|---|\n" + "".join(f"| {n} | {c} |\n" for n, c in rows)
    return "".join(f"{n}: {c}\n" for n, c in rows)


def _cmd_expand(cfg: RunConfig) -> int:
    prec = cfg.params["prec"] or 20
    series = evaluate(cfg.params["form"], prec)
    _emit(_render_series(series, cfg.params["form"], cfg.output_format), cfg)
    return EXIT_OK


def _cmd_eigenform(cfg: RunConfig) -> int:
    k = cfg.params["k"]
    series = eigenform(k, cfg.params["prec"] or 20)
    _emit(_render_series(series, f"eigenform{k}", cfg.output_format), cfg)
    return EXIT_OK


def _cmd_table(cfg: RunConfig) -> int:
    k_min, k_max = cfg.params["weights"]
    table = nonordinary_table(cfg.params["primes"], k_min, k_max,
                              cross_verify=cfg.params["cross_verify"], jobs=cfg.jobs)
    fmt = cfg.output_format
    if fmt == "json":
        text = json.dumps(table.to_dict(), indent=2) + "\n"
    elif fmt == "markdown":
        text = table.to_markdown()
    elif fmt == "plain":
        text = "".join(f"{p}: {' '.join(map(str, table.row(p)))}\n" for p in table.primes)
    else:
        text = table.to_csv()
    _emit(text, cfg)
    for p, k in table.mismatches:
        print(f"mismatch: criterion marks (p={p}, k={k}) but charpoly(T_p) is not x^dim mod p", file=sys.stderr)
    return EXIT_MISMATCH if table.mismatches else EXIT_OK


def _default_form(k: int, prec: int, index: int):
    _, dim_s = dimensions(k)
    if dim_s == 0:
        return eisenstein(k, prec)
    if index > dim_s:
        raise PreconditionError(f"basis index {index} exceeds dim S_{k} = {dim_s}")
    return miller_basis(k, max(prec, dim_s + 1)).basis[index].truncate(prec)


def _form_and_weight(params: dict, prec: int):
    if params["form"] is None:
        if params["k"] is None:
            raise PreconditionError("--k is required when --form is not given")
        return _default_form(params["k"], prec, params["basis_index"]), params["k"]
    f = evaluate(params["form"], prec)
    k = params["k"] if params["k"] is not None else f.weight
    if k is None:
        raise PreconditionError("the form has no declared weight; pass --k")
    return f, k


def _cmd_certify(cfg: RunConfig) -> int:
    prm = cfg.params
    kind, p = prm["kind"], prm["p"]
    if kind in ("nilpotency", "hatada", "weight-criterion"):
        if prm["k"] is None:
            raise PreconditionError(f"--k is required for {kind}")
        builder = {"nilpotency": nilpotency_certificate, "hatada": hatada_certificate,
                   "weight-criterion": criterion_certificate}[kind]
        cert = builder(prm["k"], p)
    elif kind == "theorem1":
        k = prm["k"]
        if k is None:
            if prm["form"] is None:
                raise PreconditionError("--k is required when --form is not given")
            k = evaluate(prm["form"], 1).weight
        m = prm["m"] if prm["m"] is not None else weight_criterion(k, p).m
        b = prm["b"]
        if b is None and m is not None:
            b = solve_part1(p, k, m).b
        f, k = _form_and_weight(dict(prm, k=k), max(prm["prec"] or 0, p ** (b or 0) + 1))
        cert = certify_theorem1(f, k, p, m, b, exact=not prm["mod_p_only"])
    else:
        if prm["form"] is None:
            raise PreconditionError("theorem2 needs --form")
        v = prm["v"] if prm["v"] is not None else prm["u"]
        f, k = _form_and_weight(prm, max(prm["prec"] or 0, p**v + 1))
        cert = certify_theorem2(f, k, p, prm["u"], v, prm["decomposition"])
    if cfg.output_format == "plain":
        text = "".join(f"{'PASS' if c.passed else 'FAIL'} {c.name}: {c.observed} (expected {c.expected})\n"
                       for c in cert.checks)
        text += f"verified: {str(cert.verified).lower()}\n"
    else:
        text = cert.to_json() + "\n"
    _emit(text, cfg)
    return EXIT_OK if cert.verified else EXIT_UNVERIFIED


_COMMANDS = {"expand": _cmd_expand, "eigenform": _cmd_eigenform, "table": _cmd_table, "certify": _cmd_certify}


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = _config(args)
    try:
        return _COMMANDS[cfg.command](cfg)
    except PreconditionError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    raise SystemExit(main())
