"""Command line: chatelet {count, verdict, bench}.

Exit codes: 0 ok, 2 invalid input, 3 guard exceeded, 4 undecided verdict.
Reports go to stdout; diagnostics go to stderr."""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import dataclass

from .arith import GuardError, IntPoly, check_delta

EXIT_OK, EXIT_INVALID, EXIT_GUARD, EXIT_UNDECIDED = 0, 2, 3, 4

SCANS = ("lod", "hooley", "chain", "eisenstein", "genus", "cusp", "grossen")
CSV_COLUMNS = ["scan_id", "delta", "poly", "param", "exact_value", "predicted",
               "abs_error", "ratio"]


class InvalidInput(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    delta: int | None
    poly: tuple | None
    B: int | None
    B_grid: tuple | None
    method: str
    fmt: str
    workers: int
    brute_ceiling: int
    hensel_depth: int | None
    timing: bool = False
    scan: str | None = None
    X: int | None = None
    D_grid: tuple | None = None


def _int_list(text: str, what: str) -> tuple:
    try:
        out = tuple(int(x) for x in text.split(",") if x.strip() != "")
    except ValueError:
        raise InvalidInput(f"malformed {what}: {text!r}")
    if not out:
        raise InvalidInput(f"empty {what}")
    return out


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--delta", type=int)
    common.add_argument("--poly", help="comma separated coefficients, constant term first")
    common.add_argument("--format", dest="fmt", choices=("json", "csv"))
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--brute-ceiling", type=int, default=20_000)
    common.add_argument("--hensel-depth", type=int)
    common.add_argument("--timing", action="store_true",
                        help="include wall-clock timings (breaks byte-for-byte reproducibility)")
    p = argparse.ArgumentParser(prog="chatelet", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)
    c = sub.add_parser("count", parents=[common], help="count points of bounded height")
    c.add_argument("--B", type=int)
    c.add_argument("--B-grid")
    c.add_argument("--method", choices=("brute", "fast", "both", "series"), default="fast")
    sub.add_parser("verdict", parents=[common], help="leading-constant vanishing verdict")
    b = sub.add_parser("bench", parents=[common], help="sieve scans, CSV rows")
    b.add_argument("scan", help="one of " + ", ".join(SCANS))
    b.add_argument("--B", type=int)
    b.add_argument("--B-grid")
    b.add_argument("--X", type=int)
    b.add_argument("--D-grid")
    b.add_argument("--method", choices=("brute", "fast", "both", "series"), default="fast")
    return p


def config_from_args(ns) -> RunConfig:
    B_grid = _int_list(ns.B_grid, "B grid") if getattr(ns, "B_grid", None) else None
    if B_grid and any(x < 0 for x in B_grid):
        raise InvalidInput("B values must be non-negative")
    B = getattr(ns, "B", None)
    if B is not None and B < 0:
        raise InvalidInput("B must be non-negative")
    poly = _int_list(ns.poly, "polynomial") if ns.poly is not None else None
    if ns.workers < 1:
        raise InvalidInput("workers must be positive")
    fmt = ns.fmt or ("csv" if ns.command == "bench" else "json")
    return RunConfig(ns.command, ns.delta, poly, B, B_grid, getattr(ns, "method", "fast"),
                     fmt, ns.workers, ns.brute_ceiling, ns.hensel_depth, ns.timing,
                     getattr(ns, "scan", None), getattr(ns, "X", None),
                     _int_list(ns.D_grid, "D grid") if getattr(ns, "D_grid", None) else None)


def _surface(cfg: RunConfig):
    from .counting import surface
    if cfg.delta is None or cfg.poly is None:
        raise InvalidInput("--delta and --poly are required")
    try:
        check_delta(cfg.delta)
        f = IntPoly(cfg.poly)
        if f.degree not in (3, 4):
            raise InvalidInput("f must have degree 3 or 4")
        S = surface(cfg.delta, cfg.poly)
        S.check_resultants()
    except InvalidInput:
        raise
    except ValueError as e:
        raise InvalidInput(str(e))
    return S


def _surface_record(S) -> dict:
    return {"delta": str(S.delta), "poly": [str(c) for c in S.f.coeffs]}


# ----------------------------------------------------------------- commands

def cmd_count(cfg: RunConfig) -> tuple:
    from .counting import (NO_POINTS, count_brute, count_fast, count_series,
                           fit_exponent)
    S = _surface(cfg)
    grid = cfg.B_grid or ((cfg.B,) if cfg.B is not None else None)
    if grid is None:
        raise InvalidInput("--B or --B-grid is required")
    rows = []
    timings = {}
    if cfg.method == "series":
        t0 = time.perf_counter()
        ser = count_series(S, list(grid), "fast", cfg.workers, cfg.brute_ceiling)
        timings["series"] = time.perf_counter() - t0
        for B, N, _ in ser.grid:
            rows.append({"B": str(B), "N": str(N), "twoN": str(2 * N)})
        fit = fit_exponent(ser)
        extra = {"fit": "no points" if fit is NO_POINTS else
                 {"slope": fit.slope, "residual": fit.residual}}
    else:
        extra = {}
        for B in grid:
            row = {"B": str(B)}
            vals = {}
            for m in ("brute", "fast"):
                if cfg.method in (m, "both"):
                    t0 = time.perf_counter()
                    if m == "brute":
                        vals[m] = count_brute(S, B, cfg.brute_ceiling)
                    else:
                        vals[m] = count_fast(S, B, cfg.workers)
                    timings[f"{m}:{B}"] = time.perf_counter() - t0
            N = vals.get("fast", vals.get("brute"))
            row["N"] = str(N)
            row["twoN"] = str(2 * N)
            for m, v in vals.items():
                row[m] = str(v)
            if cfg.method == "both":
                row["agreement"] = vals["brute"] == vals["fast"]
            rows.append(row)
    rep = {"command": "count", "surface": _surface_record(S), "method": cfg.method,
           "results": rows}
    rep.update(extra)
    if cfg.timing:
        rep["timing"] = timings
    ok = all(r.get("agreement", True) for r in rows)
    return rep, EXIT_OK if ok else 1


def _alphas(a) -> list:
    return [str(x) for x in a]


def _report_record(r) -> dict:
    out = {"place": str(r.place), "status": r.status}
    if r.witness is not None:
        out["witness"] = [str(x) for x in r.witness] if isinstance(r.witness, tuple) \
            else str(r.witness)
    return out


def cmd_verdict(cfg: RunConfig) -> tuple:
    from .localglobal import (constant_verdict, find_point, manin_exponent,
                              surface_local_reports, torsor_candidates)
    S = _surface(cfg)
    V = constant_verdict(S, cfg.hensel_depth)
    cands = torsor_candidates(S)
    rep = {"command": "verdict", "surface": _surface_record(S),
           "rho": str(manin_exponent(S)),
           "torsors": [_alphas(T.alphas) for T in cands],
           "reports": [{"alphas": _alphas(a), "places": [_report_record(r) for r in reps]}
                       for a, reps in V.reports.items()]}
    if V.constant_zero is None:
        rep["verdict"] = "undecided"
    else:
        rep["verdict"] = "zero" if V.constant_zero else "nonzero"
    if V.witness is not None:
        rep["witness"] = _alphas(V.witness.alphas)
    rep["obstructions"] = [{"alphas": _alphas(a), "places": [str(p) for p in ps]}
                           for a, ps in V.obstructions]
    if V.constant_zero:
        loc = surface_local_reports(S, 100, cfg.hensel_depth)
        rep["surface_everywhere_locally_soluble"] = all(r.solvable for r in loc)
        rep["surface_failures"] = [str(r.place) for r in loc if not r.solvable]
    else:
        pt = find_point(S, 10)
        rep["point"] = None if pt is None else dict(zip("xyuvt", map(str, pt)))
    return rep, EXIT_UNDECIDED if V.undecided and V.constant_zero is None else EXIT_OK


def _row(scan, S, param, exact, pred, err, ratio) -> dict:
    return {"scan_id": scan,
            "delta": "" if S is None else str(S.delta),
            "poly": "" if S is None else ",".join(map(str, S.f.coeffs)),
            "param": param, "exact_value": str(exact), "predicted": str(pred),
            "abs_error": str(err), "ratio": repr(float(ratio))}


def cmd_bench(cfg: RunConfig) -> tuple:
    from . import sievelab as sl
    from .quadring import genus_characters, reduced_forms
    scan = cfg.scan
    if scan not in SCANS:
        raise InvalidInput(f"unknown scan {scan!r}; choose from {', '.join(SCANS)}")
    rows = []
    if scan == "lod":
        S = _surface(cfg)
        X = cfg.X or 1000
        r = sl.lod_scan(S, X, list(cfg.D_grid) if cfg.D_grid else None)
        for D, E, M, T in zip(r.D_grid, r.E, r.main, r.exact):
            rows.append(_row(scan, S, f"X={r.X};D={D}", T, repr(M), repr(E), E / M if M else 0.0))
    elif scan == "hooley":
        f = IntPoly(cfg.poly) if cfg.poly else IntPoly([1, 0, 0, 0, 1])
        X = cfg.X or 10 ** 6
        rep = sl.hooley_average_report(f, X, delta=cfg.delta or 1)
        S = None
        for h in rep.rows:
            rows.append({**_row(scan, S, f"X={h.X}", h.numerator, repr(h.scale),
                                repr(abs(h.numerator - h.scale)), h.ratio),
                         "poly": ",".join(map(str, f.coeffs))})
    elif scan == "chain":
        X = cfg.X or 10 ** 6
        ch = sl.hooley_chain(X, cfg.delta or 1)
        rows.append({**_row(scan, None, f"N={X}", int(ch.holds), 1, 0 if ch.holds else 1,
                            float(ch.holds)), "delta": str(cfg.delta or 1)})
    elif scan == "eisenstein":
        delta = cfg.delta or 5
        G = reduced_forms(delta)
        pairs = cfg.X or 100_000
        for g in genus_characters(G):
            h = sl.eisenstein_mult_harness(g.q1, g.q2, pairs)
            rows.append({**_row(scan, None, f"q1={g.q1};q2={g.q2};pairs={pairs}",
                                h.pairs - h.failures, h.pairs, h.failures,
                                (h.pairs - h.failures) / h.pairs), "delta": str(delta)})
    elif scan == "genus":
        delta = cfg.delta or 5
        G = reduced_forms(delta)
        X = cfg.X or 10_000
        ns = [n for n in range(1, X + 1) if math.gcd(n, 2 * delta) == 1]
        good = sum(1 for n in ns if sl.genus_sum_check(G, n))
        rows.append({**_row(scan, None, f"n<={X}", good, len(ns), len(ns) - good,
                            good / len(ns)), "delta": str(delta)})
    elif scan in ("cusp", "grossen"):
        S = _surface(cfg)
        grid = cfg.B_grid or ((cfg.B,) if cfg.B else (100, 1000, 10_000))
        for B in grid:
            if scan == "cusp":
                r = sl.cusp_partial_sum(S, B)
                rows.append(_row(scan, S, f"B={B}", repr(abs(r.cusp)), r.eisenstein,
                                 repr(abs(r.eisenstein - abs(r.cusp))), r.ratio))
            else:
                r = sl.grossen_partial_sum(S, B)
                rows.append(_row(scan, S, f"B={B};h={r.h}", repr(r.value), r.eisenstein,
                                 repr(r.eisenstein - r.value), r.value / r.eisenstein))
    return {"command": "bench", "scan": scan, "rows": rows}, EXIT_OK


# ------------------------------------------------------------------ output

def emit(rep: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rep, indent=2) + "\n"
    buf = io.StringIO()
    if rep["command"] == "bench":
        w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        for r in rep["rows"]:
            w.writerow(r)
    elif rep["command"] == "count":
        keys = []
        for r in rep["results"]:
            keys += [k for k in r if k not in keys]
        w = csv.DictWriter(buf, fieldnames=["delta", "poly", "method"] + keys,
                           lineterminator="\n")
        w.writeheader()
        for r in rep["results"]:
            w.writerow({"delta": rep["surface"]["delta"],
                        "poly": ",".join(rep["surface"]["poly"]),
                        "method": rep["method"], **r})
    else:
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["alphas", "place", "status"])
        for r in rep["reports"]:
            for pl in r["places"]:
                w.writerow([",".join(r["alphas"]), pl["place"], pl["status"]])
        w.writerow(["verdict", "", rep["verdict"]])
    return buf.getvalue()


_VALUE_FLAGS = ("--delta", "--poly", "--B-grid", "--D-grid")


def _glue_values(argv: list) -> list:
    """'--poly -6,0,5' -> '--poly=-6,0,5' so leading minus signs are not read as flags."""
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in _VALUE_FLAGS and i + 1 < len(argv):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
        else:
            out.append(a)
            i += 1
    return out


def main(argv=None) -> int:
    parser = _parser()
    argv = _glue_values(list(sys.argv[1:] if argv is None else argv))
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else EXIT_INVALID
    try:
        cfg = config_from_args(ns)
        handler = {"count": cmd_count, "verdict": cmd_verdict, "bench": cmd_bench}[cfg.command]
        rep, code = handler(cfg)
    except InvalidInput as e:
        print(f"chatelet: invalid input: {e}", file=sys.stderr)
        return EXIT_INVALID
    except GuardError as e:
        print(f"chatelet: guard exceeded: {e}", file=sys.stderr)
        return EXIT_GUARD
    except ValueError as e:
        print(f"chatelet: invalid input: {e}", file=sys.stderr)
        return EXIT_INVALID
    sys.stdout.write(emit(rep, cfg.fmt))
    sys.stdout.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
