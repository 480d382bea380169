"""Command-line front end.

Exit codes: 0 every check passed, 1 a check failed (diagnostic printed),
2 usage or parameter error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .bundles import h1_FstarB, h1_FstarG, h1_sym2FstarB_lower, h1_sym2FstarG_lower
from .certificate import (
    cm_window,
    cone_certificate,
    emit,
    replay,
    theorem_kod_fails,
    validate,
    window_witnesses,
)
from .cohomology import h_Y
from .errors import (
    ContainmentFailed,
    HypothesisFailed,
    InvalidParams,
    KVCertError,
    SideConditionFailed,
    UnsupportedDimension,
    WindowExceeded,
)
from .ring import DEFAULT_DEGREE_CAP, RingParams

CACHE_ENV = "KVCERT_CACHE_DIR"

OK, FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class CliConfig:
    p: int = 2
    n: int = 3
    format: str = "text"
    degree_cap: int = DEFAULT_DEGREE_CAP
    out: str | None = None
    cache_dir: str | None = None


def _emit_rows(cfg: CliConfig, header: list[str], rows: list[list], title: str, extra: dict | None = None) -> str:
    if cfg.format == "json":
        doc = {"command": title, "p": cfg.p, "n": cfg.n,
               "rows": [dict(zip(header, r)) for r in rows]}
        if extra:
            doc.update(extra)
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if cfg.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return buf.getvalue()
    widths = [max(len(str(h)), *(len(str(r[k])) for r in rows)) if rows else len(str(h))
              for k, h in enumerate(header)]
    lines = [f"{title}  (p={cfg.p}, n={cfg.n})"]
    lines.append("  ".join(str(h).rjust(w) for h, w in zip(header, widths)))
    for r in rows:
        lines.append("  ".join(str(v).rjust(w) for v, w in zip(r, widths)))
    for k, v in (extra or {}).items():
        lines.append(f"{k}: {v}")
    return "\n".join(lines) + "\n"


def _check_twist(cfg: CliConfig, *vals: int) -> None:
    for v in vals:
        if abs(v) > cfg.degree_cap:
            raise UsageError(f"|{v}| exceeds the degree cap {cfg.degree_cap}")


# --------------------------------------------------------------------------
# commands


def cmd_lemma_ab(cfg: CliConfig, args) -> tuple[int, str]:
    lo, hi = args.sweep
    if lo > hi:
        raise UsageError("sweep bounds must satisfy A <= B")
    _check_twist(cfg, lo, hi)
    n, p = cfg.n, cfg.p
    top = 2 * n - 1
    rows, failures = [], []
    for a in range(lo, hi + 1):
        for b in range(lo, hi + 1):
            hs = [h_Y(n, (a, b), i, p) for i in range(top + 1)]
            rows.append([a, b, *hs])
            if n >= 3 and hs[1]:
                failures.append(f"h^1(Y,O({a},{b})) = {hs[1]}")
            if a >= -(n - 1) and b >= -(n - 1) and any(hs[1:]):
                failures.append(f"higher cohomology of O({a},{b}) is nonzero")
            if min(a, b) < 0 and hs[0]:
                failures.append(f"h^0(Y,O({a},{b})) = {hs[0]}")
    header = ["a", "b", *[f"h{i}" for i in range(top + 1)]]
    extra = {"checks": "pass" if not failures else "FAIL", "failures": failures}
    return (OK if not failures else FAILED), _emit_rows(cfg, header, rows, "lemma-ab", extra)


def cmd_lemma_bcoker(cfg: CliConfig, args) -> tuple[int, str]:
    _check_twist(cfg, args.a, args.b)
    r = h1_FstarB(args.a, args.b, cfg.p, cfg.n)
    rows = [[args.a, args.b, r.target_dim, r.image_dim, r.value, "yes" if r.shortcut else "no"]]
    header = ["a", "b", "target", "image", "h1_FstarB", "vanishing_range"]
    return OK, _emit_rows(cfg, header, rows, "lemma-bcoker")


def cmd_lemma_bg(cfg: CliConfig, args) -> tuple[int, str]:
    _check_twist(cfg, args.a, args.b)
    a, b, p, n = args.a, args.b, cfg.p, cfg.n
    g = h1_FstarG(a, b, p, n)
    extra = {"h1_FstarG": str(g.interval), "exact": g.exact, "side_conditions_hold": g.side_conditions_hold}
    try:
        s = h1_sym2FstarG_lower(a, b, p, n)
    except HypothesisFailed as exc:
        extra["sym2_injection"] = f"not applicable: {exc}"
        rows = []
    else:
        extra["sym2_injection"] = f"h1(Sym2F*G) >= {s.lower}; solver {s.interval}"
        rows = [[st.label, st.status, st.statement] for st in s.steps]
    return OK, _emit_rows(cfg, ["step", "status", "statement"], rows, "lemma-bg", extra)


def cmd_lemma_hfb(cfg: CliConfig, args) -> tuple[int, str]:
    _check_twist(cfg, args.a, args.b)
    a, b = args.a, args.b
    try:
        r = h1_sym2FstarB_lower(a, b, cfg.p, cfg.n)
    except HypothesisFailed as exc:
        raise UsageError(str(exc)) from None
    rows = [[a, b, r.target_dim, r.im_eta1.dim, r.im_eta2.dim, r.gap, str(r.interval), r.lower]]
    header = ["a", "b", "target", "im_eta1", "im_eta2", "gap", "solver_h1", "lower"]
    extra = {"exceeds_gap": r.exceeds_gap}
    code = OK if r.lower >= 1 else FAILED
    if code == FAILED:
        extra["diagnostic"] = "no positive lower bound for h^1(Y, Sym2F*B(a,b))"
    return code, _emit_rows(cfg, header, rows, "lemma-hfb", extra)


def _cached(cfg: CliConfig, name: str, build):
    """Return emitted certificate bytes, reusing a replay-verified copy in the cache directory."""
    fmt = "csv" if cfg.format == "csv" else "json"
    path = Path(cfg.cache_dir) / f"{name}-p{cfg.p}-n{cfg.n}.{fmt}" if cfg.cache_dir else None
    if path is not None and path.exists() and fmt == "json":
        data = path.read_bytes()
        doc = json.loads(data)
        if not replay(doc):
            return data, doc
    cert = build()
    data = emit(cert, fmt)
    doc = cert.to_json()
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(data)
    return data, doc


def cmd_thm_kod_fails(cfg: CliConfig, args) -> tuple[int, str]:
    data, doc = _cached(cfg, "theorem-kod-fails", lambda: theorem_kod_fails(cfg.p, cfg.n))
    v = doc["verdict"]
    if cfg.format in ("json", "csv"):
        text = data.decode()
    else:
        text = (f"thm-kod-fails (p={cfg.p}, n={cfg.n})\n"
                f"twist (a,b) = ({v['twist'][0]},{v['twist'][1]})\n"
                f"eta gap d = {v['gap']}\n"
                f"h^1(Y, Sym2F*G(a,b)) solver interval: {_fmt_iv(v['interval'])}\n"
                f"lower bound for h^5(X, omega_X^2): {v['lower_bound']}\n"
                f"verdict: {'h^5(X, omega_X^2) != 0 certified' if v['holds'] else 'NOT certified'}\n")
        if "diagnostic" in v:
            text += f"diagnostic: {v['diagnostic']}\n"
        if "note" in v:
            text += f"note: {v['note']}\n"
    return (OK if v["holds"] else FAILED), text


def cmd_certify_main2(cfg: CliConfig, args) -> tuple[int, str]:
    report = cone_certificate(cfg.p, cfg.n)
    fmt = "csv" if cfg.format == "csv" else "json"
    data = emit(report.certificate, fmt)
    if fmt == "json":
        validate(report.certificate.to_json())
    if cfg.out:
        Path(cfg.out).write_bytes(data)
    v = report.certificate.verdict
    if cfg.format == "text" or cfg.out:
        w = v["witness"]
        text = (f"certify-main2 (p={cfg.p}, n={cfg.n})\n"
                f"dim Z = {v['dim_Z']}\n"
                f"omega_Z line bundle: {v['omega_Z_line_bundle']} (index {v['index']})\n"
                f"not CM: {v['not_CM']} (witness i={w['i']}, q={w['q']}, lower bound {w['lower_bound']})\n"
                f"canonical singularities: {v['canonical']}\n"
                f"assumed nodes: {', '.join(report.assumptions)}\n")
        if "diagnostic" in v:
            text += f"diagnostic: {v['diagnostic']}\n"
        if cfg.out:
            text += f"certificate written to {cfg.out}\n"
    else:
        text = data.decode()
    return (OK if report.not_cm else FAILED), text


def cmd_cm_window(cfg: CliConfig, args) -> tuple[int, str]:
    table = cm_window(cfg.p, cfg.n, args.q)
    top = 3 * cfg.n - 3
    rows = [[q, *[str(iv) for iv in table[q]]] for q in sorted(table)]
    wit = window_witnesses(table)
    extra = {"witnesses": [list(w) for w in wit] if cfg.format == "json" else wit,
             "full_CM_criterion_checkable": False}
    header = ["q", *[f"h{i}" for i in range(1, top)]]
    return (OK if wit else FAILED), _emit_rows(cfg, header, rows, "cm-window", extra)


def cmd_table(cfg: CliConfig, args) -> tuple[int, str]:
    if args.what != "hY":
        raise UsageError(f"unknown table {args.what!r}")
    a0, a1 = args.arange
    b0, b1 = args.brange
    _check_twist(cfg, a0, a1, b0, b1)
    top = 2 * cfg.n - 1
    degrees = [args.degree] if args.degree is not None else list(range(top + 1))
    rows = []
    for a in range(a0, a1 + 1):
        for b in range(b0, b1 + 1):
            rows.append([a, b, *[h_Y(cfg.n, (a, b), i, cfg.p) for i in degrees]])
    return OK, _emit_rows(cfg, ["a", "b", *[f"h{i}" for i in degrees]], rows, "table hY")


def _fmt_iv(js: dict) -> str:
    if js["exact"]:
        return str(js["lower"])
    return f"[{js['lower']}, {'inf' if js['upper'] is None else js['upper']}]"


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    def options(default: bool) -> argparse.ArgumentParser:
        # subcommands repeat the global options without defaults so they do not override them
        d = (lambda v: v) if default else (lambda v: argparse.SUPPRESS)
        par = argparse.ArgumentParser(add_help=False)
        par.add_argument("--p", type=int, default=d(2), help="characteristic (default 2)")
        par.add_argument("--n", type=int, default=d(3), help="projective dimension (default 3)")
        par.add_argument("--format", choices=["text", "json", "csv"], default=d("text"))
        par.add_argument("--degree-cap", type=int, default=d(DEFAULT_DEGREE_CAP))
        return par

    common = options(False)
    ap = argparse.ArgumentParser(prog="kvcert", description=__doc__.splitlines()[0], parents=[options(True)])
    ap.add_argument("--version", action="version", version=f"kvcert {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("lemma-ab", parents=[common], help="line-bundle cohomology of Y over a box")
    s.add_argument("--sweep", type=int, nargs=2, metavar=("A", "B"), default=(-8, 8))
    s.set_defaults(func=cmd_lemma_ab)

    for name, func, hlp in (
        ("lemma-bcoker", cmd_lemma_bcoker, "h^1(F*B(a,b)) as a cokernel"),
        ("lemma-bg", cmd_lemma_bg, "h^1(F*G(a,b)) and the Sym2 injection chain"),
        ("lemma-hfb", cmd_lemma_hfb, "lower bound for h^1(Sym2F*B(a,b))"),
    ):
        s = sub.add_parser(name, parents=[common], help=hlp)
        s.add_argument("--a", type=int, required=True)
        s.add_argument("--b", type=int, required=True)
        s.set_defaults(func=func)

    s = sub.add_parser("thm-kod-fails", parents=[common], help="certificate for h^5(X, omega_X^2) != 0")
    s.set_defaults(func=cmd_thm_kod_fails)

    s = sub.add_parser("certify-main2", parents=[common], help="cone certificate")
    s.add_argument("--out", default=None, help="write the certificate here")
    s.set_defaults(func=cmd_certify_main2)

    s = sub.add_parser("cm-window", parents=[common], help="h^i(X, L^q) for q in -2..1")
    s.add_argument("--q", type=int, default=None)
    s.set_defaults(func=cmd_cm_window)

    s = sub.add_parser("table", parents=[common], help="tables of dimensions")
    s.add_argument("what", choices=["hY"])
    s.add_argument("--arange", type=int, nargs=2, default=(-3, 3), metavar=("A0", "A1"))
    s.add_argument("--brange", type=int, nargs=2, default=(-3, 3), metavar=("B0", "B1"))
    s.add_argument("--degree", type=int, default=None)
    s.set_defaults(func=cmd_table)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code not in (0, None) else OK
    cfg = CliConfig(args.p, args.n, args.format, args.degree_cap,
                    getattr(args, "out", None), os.environ.get(CACHE_ENV) or None)
    try:
        RingParams(cfg.p, cfg.n)
        code, text = args.func(cfg, args)
    except (UsageError, InvalidParams, UnsupportedDimension, WindowExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except HypothesisFailed as exc:
        print(f"error: hypothesis not met: {exc}", file=sys.stderr)
        return USAGE
    except (ContainmentFailed, SideConditionFailed) as exc:
        print(f"check failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return FAILED
    except KVCertError as exc:
        print(f"check failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return FAILED
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
