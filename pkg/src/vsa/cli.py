"""Command-line front end: ``vsa <subcommand> [options]``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from vsa.combinatorics import det_sign, frac_str, l_matrix, pascal_matrix, s_matrix, straightening_coeffs
from vsa.errors import DomainError, ParseError, TerminationGuardExceeded
from vsa.parse import parse_expression, render
from vsa.rewrite import Straightener, key_weight, span_check
from vsa.subspaces import generator_set
from vsa.verify import SUITES, run_suite

MAX_WEIGHT_CAP = 14


@dataclass
class CommandConfig:
    subcommand: str
    N: int = 1
    m: int | None = None
    n: str | None = None
    weight: int | None = None
    max_weight: int | None = None
    seed: int = 0
    output_format: str = "text"
    cache_path: str | None = None
    trace: bool = False
    expression: str | None = None
    suite: str = "all"

    def validate(self) -> None:
        if self.N < 1:
            raise DomainError(f"--N must be positive, got {self.N}")
        if self.max_weight is not None and not 0 <= self.max_weight <= MAX_WEIGHT_CAP:
            raise DomainError(f"--max-weight must lie in [0, {MAX_WEIGHT_CAP}]")
        if self.weight is not None and not 0 <= self.weight <= MAX_WEIGHT_CAP:
            raise DomainError(f"--weight must lie in [0, {MAX_WEIGHT_CAP}]")
        if self.seed < 0:
            raise DomainError("--seed must be nonnegative")


def _cache_file(cfg: CommandConfig, max_weight: int) -> Path | None:
    if cfg.cache_path:
        return Path(cfg.cache_path)
    root = os.environ.get("VSA_CACHE_DIR")
    if root:
        Path(root).mkdir(parents=True, exist_ok=True)
        return Path(root) / f"gens-N{cfg.N}-w{max_weight}.json"
    return None


def _gens(cfg: CommandConfig, max_weight: int):
    return generator_set(cfg.N, max_weight, _cache_file(cfg, max_weight))


def _matrix_rows(M) -> list[list[str]]:
    return [[frac_str(x) for x in row] for row in M.tolist()]


# -- subcommands -----------------------------------------------------------------

def cmd_matrix(cfg: CommandConfig) -> tuple[dict, str]:
    if cfg.m is None:
        raise DomainError("matrix needs --m")
    N, m = cfg.N, cfg.m
    S = s_matrix(N, m)
    det = S.det()
    report = {
        "N": N,
        "m": m,
        "P": _matrix_rows(pascal_matrix(N)),
        "L": _matrix_rows(l_matrix(N, m)),
        "S": _matrix_rows(S),
        "det": frac_str(det),
    }
    if m >= N - 1:
        report["detExpected"] = frac_str(det_sign(N))
        report["LSequalsP"] = l_matrix(N, m) @ S == pascal_matrix(N)
    lines = [f"S_{N}({m}):"] + ["  " + " ".join(r) for r in report["S"]]
    lines += [f"L_{N}({m}):"] + ["  " + " ".join(r) for r in report["L"]]
    lines += [f"det = {report['det']}"]
    return report, "\n".join(lines)


def _n_range(spec: str) -> list[int]:
    if ":" in spec:
        lo, hi = (int(x) for x in spec.split(":", 1))
        return list(range(lo, hi + 1))
    return [int(spec)]


def cmd_coeffs(cfg: CommandConfig) -> tuple[dict, str]:
    if cfg.n is None:
        raise DomainError("coeffs needs --n (an integer or LO:HI)")
    ns = _n_range(cfg.n)
    rows = [(n, [frac_str(c) for c in straightening_coeffs(cfg.N, n).values]) for n in ns]
    if len(rows) == 1:
        report = {"N": cfg.N, "n": rows[0][0], "coeffs": rows[0][1]}
    else:
        report = {"N": cfg.N, "table": [{"n": n, "coeffs": c} for n, c in rows]}
    text = "\n".join(f"n={n}: " + " ".join(c) for n, c in rows)
    return report, text


def cmd_gens(cfg: CommandConfig) -> tuple[dict, str]:
    max_weight = cfg.max_weight if cfg.max_weight is not None else 8
    gens = _gens(cfg, max_weight)
    report = gens.to_json()
    lines = [f"N={gens.N}: representatives of V/C_{gens.N + 1}(V) up to weight {max_weight}"]
    for w in range(max_weight + 1):
        reps = [list(next(iter(v))) for v in gens.per_weight[w]]
        lines.append(f"  w={w} ({len(reps)}): {reps}")
    return report, "\n".join(lines)


def cmd_straighten(cfg: CommandConfig) -> tuple[dict, str]:
    if cfg.expression is None:
        raise DomainError("straighten needs an expression")
    e = parse_expression(cfg.expression)
    top = max((key_weight(k) for k in e.keys()), default=0)
    max_weight = cfg.max_weight if cfg.max_weight is not None else max(top, 1)
    if top > max_weight:
        raise DomainError(f"expression weight {top} exceeds --max-weight {max_weight}")
    if max_weight > MAX_WEIGHT_CAP:
        raise DomainError(f"expression weight {top} exceeds the cap {MAX_WEIGHT_CAP}")
    eng = Straightener(cfg.N, _gens(cfg, max_weight))
    out, trace = eng.straighten(e)
    report = {"N": cfg.N, "input": render(e), "output": render(out), "normalForm": out.to_json()}
    text = render(out)
    if cfg.trace:
        report["trace"] = trace.to_json()
        text += "\n" + "\n".join(
            f"  {s.kind} ({s.lemma}): {render(type(out)({s.before: 1}))} -> {render(type(out)(s.after))}"
            for s in trace.steps
        )
    return report, text


def cmd_span_check(cfg: CommandConfig) -> tuple[dict, str]:
    if cfg.weight is not None:
        weights = [cfg.weight]
    elif cfg.max_weight is not None:
        weights = list(range(cfg.max_weight + 1))
    else:
        raise DomainError("span-check needs --weight or --max-weight")
    gens = _gens(cfg, max(weights))
    reports = [span_check(cfg.N, w, gens) for w in weights]
    if len(reports) == 1:
        r = reports[0]
        report = {"N": cfg.N, "weight": r.weight, "count": r.count, "rank": r.rank, "dim": r.dim, "ok": r.ok}
    else:
        report = {"N": cfg.N, "weights": [r.to_json() for r in reports], "ok": all(r.ok for r in reports)}
    text = "\n".join(
        f"N={cfg.N} w={r.weight}: rank {r.rank} / dim {r.dim} from {r.count} monomials"
        f" {'ok' if r.ok else 'DEFICIENT'}" for r in reports
    )
    report["_ok"] = all(r.ok for r in reports)
    return report, text


def cmd_verify(cfg: CommandConfig) -> tuple[dict, str]:
    results = run_suite(cfg.suite, cfg.seed)
    ok = all(r.ok for r in results)
    report = {"suite": cfg.suite, "seed": cfg.seed, "ok": ok, "results": [r.to_json() for r in results]}
    report["_ok"] = ok
    return report, "\n".join(r.line() for r in results)


COMMANDS = {
    "matrix": cmd_matrix,
    "coeffs": cmd_coeffs,
    "gens": cmd_gens,
    "straighten": cmd_straighten,
    "span-check": cmd_span_check,
    "verify": cmd_verify,
}


def _emit(obj: dict, text: str, fmt: str, stream) -> None:
    if fmt == "json":
        stream.write(json.dumps(obj, separators=(",", ":")) + "\n")
    else:
        stream.write(text + "\n")


def run(cfg: CommandConfig, stream=None) -> int:
    """Execute one subcommand; returns the exit status."""
    stream = stream or sys.stdout
    try:
        cfg.validate()
        report, text = COMMANDS[cfg.subcommand](cfg)
    except (DomainError, ParseError, TerminationGuardExceeded, OSError, ValueError) as exc:
        record = {"ok": False, "command": cfg.subcommand, "error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, ParseError):
            record["position"] = exc.position
        _emit(record, f"error ({type(exc).__name__}): {exc}", cfg.output_format, stream)
        return 2
    ok = report.pop("_ok", True)
    _emit(report, text, cfg.output_format, stream)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vsa", description="Difference-N spanning sets, computed exactly.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("--N", type=int, default=1, help="difference (positive)")
        p.add_argument("--format", dest="output_format", choices=("text", "json"), default="text")
        p.add_argument("--cache", dest="cache_path", help="generator-set cache file")
        p.add_argument("--seed", type=int, default=0)
        return p

    p = common(sub.add_parser("matrix", help="P_N, L_N(m), S_N(m) and det S_N(m)"))
    p.add_argument("--m", type=int, required=True)
    p = common(sub.add_parser("coeffs", help="straightening coefficients c_N(r, n)"))
    p.add_argument("--n", required=True, help="integer or inclusive range LO:HI")
    p = common(sub.add_parser("gens", help="build or load quotient representatives"))
    p.add_argument("--max-weight", type=int, default=8)
    p = common(sub.add_parser("straighten", help="rewrite an expression into normal form"))
    p.add_argument("expression")
    p.add_argument("--max-weight", type=int)
    p.add_argument("--trace", action="store_true")
    p = common(sub.add_parser("span-check", help="rank of normal monomials against dim V_w"))
    p.add_argument("--weight", type=int)
    p.add_argument("--max-weight", type=int)
    p = common(sub.add_parser("verify", help="run verification suites"))
    p.add_argument("--suite", choices=sorted(SUITES), default="all")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    fields = {k: v for k, v in vars(args).items() if k in CommandConfig.__dataclass_fields__}
    return run(CommandConfig(**fields))


if __name__ == "__main__":
    sys.exit(main())
