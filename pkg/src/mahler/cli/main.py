"""mahler: command-line front end.

Every command writes JSON (and a CSV mirror for tables). When any output path
is given a manifest is written next to it with the argv, versions, precision
and sha256 of every output; ``mahler --replay manifest.json`` reruns it into a
scratch directory and compares the hashes.
"""

import argparse
import csv
import hashlib
import io
import json
import os
import platform
import sys
import tempfile
import time
from fractions import Fraction

import flint
import gmpy2
from gmpy2 import mpq

from .. import __version__
from ..errors import MahlerError

DEFAULT_PREC = 256
OUTPUT_FLAGS = ("--out", "--report", "--csv", "--outdir", "--manifest")
_EXAMPLES = ("m", "chebyshev", "cantor")


class ConfigError(Exception):
    pass


def rat(s):
    """Exact rational from '3', '-7/12' or a decimal such as '0.01'."""
    try:
        f = Fraction(str(s).strip())
    except (ValueError, ZeroDivisionError) as e:
        raise argparse.ArgumentTypeError(f"not an exact rational: {s!r}") from e
    return mpq(f.numerator, f.denominator)


def int_range(s):
    """'a..b' (inclusive) or a single integer."""
    s = str(s)
    try:
        if ".." in s:
            a, b = s.split("..")
            a, b = int(a), int(b)
            if b < a:
                raise ValueError
            return list(range(a, b + 1))
        return [int(s)]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected N or A..B, got {s!r}") from e


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError as e:
        raise ConfigError(f"no such file: {path}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: invalid JSON ({e})") from e


def load_system(path):
    from ..mahler_system.system import MahlerSystem

    data = load_json(path)
    try:
        sys_ = MahlerSystem.from_json(data)
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, MahlerError):
            raise
        raise ConfigError(f"{path}: bad system descriptor ({e})") from e
    f0 = data.get("f0")
    return sys_, (None if f0 is None else [rat(x) for x in f0])


def dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=False, default=_no_floats) + "\n"


def _no_floats(o):
    if isinstance(o, (type(mpq(0)), type(gmpy2.mpz(0)))):
        return str(o)
    raise TypeError(f"not JSON-serializable: {type(o).__name__}")


def csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow(["" if v is None else v for v in r])
    return buf.getvalue()


def ball_cells(j):
    """(mid, rad) strings from an arb_json dict (or blanks)."""
    if j is None:
        return "", ""
    return j["mid"], j["rad"]


class Run:
    """Collects outputs; each one is flushed to disk as soon as it is produced."""

    def __init__(self, args):
        self.args = args
        self.outputs = []
        self.constants = {}

    def write(self, path, text):
        if path is None:
            sys.stdout.write(text)
            return
        d = os.path.dirname(os.path.abspath(path))
        os.makedirs(d, exist_ok=True)
        data = text.encode()
        with open(path, "wb") as fh:
            fh.write(data)
        self.outputs.append({"path": path, "sha256": hashlib.sha256(data).hexdigest(), "bytes": len(data)})

    def json(self, path, obj):
        self.write(path, dumps(obj))

    def csv(self, path, header, rows):
        if path is not None:
            self.write(path, csv_text(header, rows))


def _csv_path(args, report):
    if getattr(args, "csv", None):
        return args.csv
    if report and report.endswith(".json"):
        return report[:-5] + ".csv"
    return None


# ---- commands -------------------------------------------------------------


def cmd_solve(args, run):
    from ..mahler_system.system import solve_series

    sys_, f0 = load_system(args.system)
    if args.f0 is not None:
        f0 = [rat(x) for x in args.f0.split(",")]
    sol = solve_series(sys_, args.order, f0)
    ok = sol.check()
    out = {"command": "solve", "system": sys_.to_json(), "f0": None if f0 is None else [str(x) for x in f0]}
    out.update(sol.to_json())
    out["residual_zero"] = ok
    run.constants.update({"order": args.order, "residual_zero": ok})
    run.json(args.out, out)
    coeffs = [s.coefficients(args.order) for s in sol.f]
    run.csv(_csv_path(args, args.out), ["k"] + [f"f{i + 1}" for i in range(len(coeffs))],
            [[k] + [str(c[k]) for c in coeffs] for k in range(args.order)])
    if not ok:
        raise MahlerError("functional-equation residual is not zero")


def _load_p(spec):
    from ..algebra.poly import Poly, RationalFunction

    if os.path.exists(spec):
        data = load_json(spec)
    else:
        try:
            data = json.loads(spec)
        except json.JSONDecodeError as e:
            raise ConfigError(f"--p: neither a file nor inline JSON: {spec!r}") from e
    if isinstance(data, dict) and "p" in data:
        data = data["p"]
    try:
        return RationalFunction.from_json(data) if isinstance(data, dict) else RationalFunction(Poly.from_json(data))
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"--p: bad polynomial ({e})") from e


def cmd_orbit(args, run):
    from ..dynamics.balls import ball_json
    from ..dynamics.orbit import orbit_bounds, orbit_data

    p = _load_p(args.p)
    y = rat(args.y)
    data = orbit_data(p, y, args.tmax, args.prec)
    cert = orbit_bounds(p, y, args.tmax, args.prec)
    with flint.ctx.workprec(data["working_precision"]):
        steps = [ball_json(b) for b in data["balls"]]
    out = {
        "command": "orbit",
        "p": p.to_json(),
        "y": str(y),
        "precision": args.prec,
        "working_precision": data["working_precision"],
        "exact_prefix": [str(v) for v in data["exact"]],
        "steps": steps,
        "certificate": cert.to_json(),
    }
    run.constants.update({"T_s": cert.T_s, "c3_lower": cert.to_json()["c3_lower"], "c3_upper": cert.to_json()["c3_upper"]})
    run.json(args.report, out)
    rows = [[h, *ball_cells(s["re"]), *ball_cells(s["im"])] for h, s in enumerate(steps)]
    run.csv(_csv_path(args, args.report), ["h", "re_mid", "re_rad", "im_mid", "im_rad"], rows)


def _series_vector(args):
    from ..algebra.poly import Poly
    from ..algebra.series import TruncatedSeries

    if args.system:
        from ..auxpoly.verify import SystemSeries

        sys_, f0 = load_system(args.system)
        return SystemSeries(sys_, f0).vector(args.order)
    data = load_json(args.series)
    if isinstance(data, dict):
        data = data.get("series", data.get("f"))
    if not isinstance(data, list) or not data:
        raise ConfigError(f"{args.series}: expected a list of series")
    vec = []
    for s in data:
        if s == "z":
            vec.append(TruncatedSeries.from_poly(Poly.x(), args.order))
        else:
            vec.append(TruncatedSeries.from_json(s).truncate(args.order))
    return vec


def cmd_multiplicity(args, run):
    from ..multiplicity.vanishing import SupportSet, check_result_bound, grid_scan, max_vanishing_order

    vec = _series_vector(args)
    nv = len(vec)
    n = nv - 1
    if args.grid_scan:
        rows = grid_scan(vec, args.grid_scan, args.order, n=n)
        out = {"command": "multiplicity", "order": args.order, "nvars": nv, "rows": rows}
        run.json(args.report, out)
        if rows:
            hdr = list(rows[0].keys())
            run.csv(_csv_path(args, args.report), hdr, [[str(r[h]) for h in hdr] for r in rows])
        run.constants["ratios"] = [str(r["ratio"]) for r in rows]
        return
    try:
        support = SupportSet.parse(args.support, nv)
    except (OSError, json.JSONDecodeError, ValueError) as e:
        if isinstance(e, MahlerError):
            raise
        raise ConfigError(f"--support: {e}") from e
    res = max_vanishing_order(vec, support, args.order)
    out = {"command": "multiplicity", "order": args.order, "nvars": nv, "result": res.to_json()}
    if args.K1 is not None:
        out["bound_x"] = check_result_bound(res, n, rat(args.K1), "x").to_json()
        out["bound_total"] = check_result_bound(res, n, rat(args.K1), "total").to_json()
    run.constants.update({"T0": res.T0, "card": res.card})
    run.json(args.report, out)


def cmd_auxpoly(args, run):
    from ..auxpoly.verify import SystemSeries, double_bound_scan, verify_identity
    from ..auxpoly.construct import pushforward_chain

    sys_, f0 = load_system(args.system)
    y = rat(args.y)
    ss = SystemSeries(sys_, f0)
    Ts = args.T
    scan_Ts = [T for T in Ts if T >= 0]
    res = double_bound_scan(args.D, sys_, y, scan_Ts, precision=args.prec, f0=f0, ss=ss)
    out = {"command": "auxpoly", "y": str(y), "scan": res.to_json()}
    if args.identity:
        from ..multiplicity.vanishing import SupportSet
        from ..auxpoly.construct import siegel_polynomial

        sup = SupportSet.grid(args.D, sys_.n + 1)
        Nm = 4 * sup.card + 64
        P0 = siegel_polynomial(ss.vector(Nm), sup, None, Nm)
        chain, _ = pushforward_chain(P0, sys_, max(Ts))
        out["identity"] = [verify_identity(chain[T], sys_, y, P0.poly, ss, args.prec).to_json() for T in Ts]
    run.constants.update({
        "threshold_T": res.threshold_T,
        "c7_hat": out["scan"]["c7_hat"],
        "c8_hat": out["scan"]["c8_hat"],
        "C_measured": out["scan"]["C_measured"],
    })
    run.json(args.report, out)
    rows = []
    for r in out["scan"]["rows"]:
        b = r["bounds"]
        rows.append([r["T"], b.get("deg_z"), b.get("deg_X"), *ball_cells(b.get("log_length")), *ball_cells(r["logvalue"]),
                     *ball_cells(r["normalized"]), r["above_threshold"], b.get("deg_z_ok"), b.get("deg_X_ok"), b.get("length_ok")])
    run.csv(_csv_path(args, args.report),
            ["T", "deg_z", "deg_X", "log_length_mid", "log_length_rad", "log_abs_P_mid", "log_abs_P_rad",
             "normalized_mid", "normalized_rad", "above_threshold", "deg_z_ok", "deg_X_ok", "length_ok"], rows)


def cmd_measure(args, run):
    from ..measure import (
        EXPONENTS,
        VarietyStats,
        criterion_check,
        criterion_params_from_selection,
        dirichlet_report,
        parameter_selection,
        trdeg_bounds,
    )

    th = args.theorem
    if th in EXPONENTS:
        kw = {} if th == "thm2" else {"eps": args.eps}
        if args.k is None:
            raise ConfigError("--k is required for exponent calculators")
        res = EXPONENTS[th](args.n, args.k, args.d, args.delta, **kw).to_json()
    elif th == "trdeg":
        res = trdeg_bounds(args.n, args.d, args.delta).to_json()
    elif th == "dirichlet":
        res = dirichlet_report(args.n, args.d, args.delta).to_json()
    else:
        base = args.select or "ia1"
        if args.k is None:
            raise ConfigError("--k is required for parameter selection")
        stats = VarietyStats(args.k, args.degW, args.h)
        kw = {"c": args.c} if args.c is not None else {}
        choice = parameter_selection(base, stats, args.n, args.d, args.delta, eps=args.eps, **kw)
        res = {"selection": choice.to_json()}
        if th == "criterion":
            params = criterion_params_from_selection(choice, args.n, args.d, args.delta, args.c6, args.c7, args.c8)
            res["params"] = params.to_json()
            res["check"] = criterion_check(params, stats, args.n).to_json()
    out = {"command": "measure", "theorem": th, "result": res}
    run.json(args.report, out)
    flat = [[k, json.dumps(v) if isinstance(v, (dict, list)) else v] for k, v in _flatten(res)]
    run.csv(_csv_path(args, args.report), ["field", "value"], flat)


def _flatten(d, prefix=""):
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict) and not ("mid" in v and "rad" in v):
            yield from _flatten(v, key + ".")
        else:
            yield key, v


def cmd_probe(args, run):
    from ..measure import EXPONENTS, lll_small_value_probe, resolve_point

    vals = resolve_point(args.point, args.prec)
    n = len(vals)
    exps = EXPONENTS[args.theorem](n, n - 1, args.d, args.delta) if args.theorem else None
    rep = lll_small_value_probe(vals, args.deg, args.height, args.prec, exponents=exps, workers=args.workers,
                                d=args.d, delta=args.delta)
    out = {"command": "probe", "point": args.point}
    out.update(rep.to_json())
    run.constants.update({"sound": rep.sound, "consistent": rep.consistent, "exact_vanishing": rep.exact_vanishing})
    run.json(args.report, out)
    rows = []
    for c in out["cells"]:
        rows.append([c["deg"], c["height"], c["Q"], c["Q_degree"], c["Q_height"], c["exact_zero"],
                     *ball_cells(c["log_abs_Q"]), *ball_cells(c["log_abs_Q_certified_lower"]),
                     *ball_cells(c["predicted_log_lower"]), c["sound"], c["consistent_with_measure"]])
    run.csv(_csv_path(args, args.report),
            ["deg", "height", "Q", "Q_degree", "Q_height", "exact_zero", "log_abs_mid", "log_abs_rad",
             "log_lower_mid", "log_lower_rad", "predicted_mid", "predicted_rad", "sound", "consistent"], rows)


def cmd_examples(args, run):
    from . import examples

    which = _EXAMPLES if args.which == "all" else (args.which,)
    summary = []
    details = {}
    for name in which:
        rows, det = examples.RUNNERS[name](args.prec)
        summary.extend(rows)
        details[name] = det
    for r in summary:
        print(f"{r['example']:<10} {r['check']:<48} {'ok' if r['ok'] else 'FAIL'}  {r['value']}")
    outdir = args.outdir
    if outdir:
        run.json(os.path.join(outdir, "examples.json"), {"command": "examples", "summary": summary, "details": details})
        run.csv(os.path.join(outdir, "examples.csv"), ["example", "check", "ok", "value"],
                [[r["example"], r["check"], r["ok"], r["value"]] for r in summary])
    run.constants["all_ok"] = all(r["ok"] for r in summary)
    if not all(r["ok"] for r in summary):
        raise MahlerError("an example check failed")


COMMANDS = {
    "solve": cmd_solve,
    "orbit": cmd_orbit,
    "multiplicity": cmd_multiplicity,
    "auxpoly": cmd_auxpoly,
    "measure": cmd_measure,
    "probe": cmd_probe,
    "examples": cmd_examples,
}


def build_parser():
    ap = argparse.ArgumentParser(prog="mahler", description="Exact and ball-arithmetic tools for Mahler systems.")
    ap.add_argument("--version", action="version", version=f"mahler {__version__}")
    ap.add_argument("--workers", type=int, default=None, help="worker processes (MAHLER_WORKERS overrides)")
    ap.add_argument("--replay", metavar="MANIFEST", help="rerun a manifest and compare output hashes")
    ap.add_argument("--manifest", help="manifest path (default: next to the first output)")
    sub = ap.add_subparsers(dest="command")

    s = sub.add_parser("solve", help="series solution of a system")
    s.add_argument("--system", required=True)
    s.add_argument("--order", type=int, required=True)
    s.add_argument("--f0", help="comma-separated f(0) override")
    s.add_argument("--out")
    s.add_argument("--csv")

    s = sub.add_parser("orbit", help="ball orbit of p and its certificate")
    s.add_argument("--p", required=True, help="file or inline JSON (coefficient list or {num, den})")
    s.add_argument("--y", required=True)
    s.add_argument("--tmax", type=int, default=24)
    s.add_argument("--prec", type=int, default=DEFAULT_PREC)
    s.add_argument("--report")
    s.add_argument("--csv")

    s = sub.add_parser("multiplicity", help="maximal vanishing order on a support set")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--series", help="JSON list of series (\"z\" allowed)")
    g.add_argument("--system", help="use (z, f) from a system descriptor")
    s.add_argument("--support", default="grid:D=2")
    s.add_argument("--order", type=int, default=256)
    s.add_argument("--grid-scan", type=int_range, help="e.g. 2..5: scan grid supports instead")
    s.add_argument("--K1", help="report the multiplicity inequality for this K1")
    s.add_argument("--report")
    s.add_argument("--csv")

    s = sub.add_parser("auxpoly", help="auxiliary polynomials, bounds and values")
    s.add_argument("--system", required=True)
    s.add_argument("--y", required=True)
    s.add_argument("--D", type=int, default=2)
    s.add_argument("--T", type=int_range, default=int_range("0..6"))
    s.add_argument("--prec", type=int, default=384)
    s.add_argument("--identity", action="store_true", help="also verify the product identity per T")
    s.add_argument("--report")
    s.add_argument("--csv")

    s = sub.add_parser("measure", help="exponent, trdeg, parameter and criterion calculators")
    s.add_argument("--theorem", required=True, choices=["ia1", "ia2", "thm2", "trdeg", "dirichlet", "params", "criterion"])
    s.add_argument("--select", choices=["ia1", "ia2", "thm2"], help="statement used by params/criterion")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--delta", type=int, required=True)
    s.add_argument("--eps", type=rat, default=mpq(0))
    s.add_argument("--h", type=rat, default=mpq(1), help="height of W")
    s.add_argument("--degW", type=rat, default=mpq(1), help="degree of W")
    s.add_argument("--c", type=rat)
    s.add_argument("--c6", type=rat, default=mpq(1))
    s.add_argument("--c7", type=rat, default=mpq(1))
    s.add_argument("--c8", type=rat, default=mpq(1))
    s.add_argument("--report")
    s.add_argument("--csv")

    s = sub.add_parser("probe", help="lattice search for small polynomial values")
    s.add_argument("--point", required=True, help="'m-half', 'm:<q>' or comma-separated rationals")
    s.add_argument("--deg", type=int, default=4)
    s.add_argument("--height", type=int, default=1 << 16)
    s.add_argument("--prec", type=int, default=DEFAULT_PREC)
    s.add_argument("--theorem", choices=["ia1", "ia2", "thm2"], default="ia1")
    s.add_argument("--d", type=int, default=2)
    s.add_argument("--delta", type=int, default=2)
    s.add_argument("--report")
    s.add_argument("--csv")

    s = sub.add_parser("examples", help="replay the worked examples")
    s.add_argument("--which", choices=list(_EXAMPLES) + ["all"], default="all")
    s.add_argument("--prec", type=int, default=DEFAULT_PREC)
    s.add_argument("--outdir")
    return ap


def _workers(args):
    env = os.environ.get("MAHLER_WORKERS")
    if env:
        try:
            return max(1, int(env))
        except ValueError as e:
            raise ConfigError(f"MAHLER_WORKERS must be an integer, got {env!r}") from e
    return max(1, args.workers or 1)


def _manifest_path(args, run):
    if args.manifest:
        return args.manifest
    if run.outputs:
        return run.outputs[0]["path"] + ".manifest.json"
    return None


def _write_manifest(path, argv, args, run, status, error=None, elapsed=None):
    if path is None:
        return
    man = {
        "tool": "mahler",
        "version": __version__,
        "argv": list(argv),
        "command": args.command,
        "precision": getattr(args, "prec", None) if getattr(args, "prec", None) is not None else DEFAULT_PREC,
        "precision_is_default": getattr(args, "prec", DEFAULT_PREC) == DEFAULT_PREC,
        "workers": args.workers,
        "status": status,
        "error": error,
        "outputs": run.outputs,
        "measured_constants": run.constants,
        "environment": {
            "python": platform.python_version(),
            "python-flint": flint.__version__,
            "gmpy2": gmpy2.version(),
        },
        "elapsed_s": None if elapsed is None else f"{elapsed:.3f}",
    }
    with open(path, "w") as fh:
        fh.write(dumps(man))


def _replay(path):
    man = load_json(path)
    argv = list(man["argv"])
    with tempfile.TemporaryDirectory() as tmp:
        remap = {}
        new = []
        i = 0
        while i < len(argv):
            a = argv[i]
            flag, eq, val = a.partition("=")
            if flag in OUTPUT_FLAGS and flag != "--manifest":
                if not eq:
                    i += 1
                    val = argv[i]
                target = os.path.join(tmp, os.path.basename(val.rstrip("/")) or "out")
                remap[os.path.normpath(val)] = target
                new += [flag, target]
            elif flag == "--manifest":
                if not eq:
                    i += 1
            elif flag == "--replay":
                if not eq:
                    i += 1
            else:
                new.append(a)
            i += 1
        new = ["--manifest", os.path.join(tmp, "replay.manifest.json")] + new
        code = main(new)
        if code != 0:
            print(f"replay: rerun exited with {code}", file=sys.stderr)
            return code
        redo = load_json(os.path.join(tmp, "replay.manifest.json"))
        got = {}
        for o in redo["outputs"]:
            got[o["path"]] = o["sha256"]
        ok = True
        for o in man["outputs"]:
            src = os.path.normpath(o["path"])
            target = remap.get(src)
            if target is None:
                for k, v in remap.items():
                    if src.startswith(k + os.sep):
                        target = os.path.join(v, os.path.relpath(src, k))
            if target is None:
                # derived outputs (CSV mirrors) sit next to the remapped report
                target = os.path.join(tmp, os.path.basename(src))
            h = got.get(target)
            same = h == o["sha256"]
            ok &= same
            print(f"{'identical' if same else 'DIFFERS'}  {o['path']}")
    return 0 if ok else 3


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        if args.replay:
            return _replay(args.replay)
        if not args.command:
            ap.print_usage(sys.stderr)
            print("mahler: error: a subcommand is required", file=sys.stderr)
            return 2
        args.workers = _workers(args)
    except ConfigError as e:
        print(f"mahler: config error: {e}", file=sys.stderr)
        return 2
    run = Run(args)
    t0 = time.perf_counter()
    status, err, code = "ok", None, 0
    try:
        COMMANDS[args.command](args, run)
    except ConfigError as e:
        status, err, code = "config-error", str(e), 2
        print(f"mahler: config error: {e}", file=sys.stderr)
    except MahlerError as e:
        status, err, code = "error", f"{type(e).__name__}: {e}", 3
        print(f"mahler: {type(e).__name__}: {e}", file=sys.stderr)
    _write_manifest(_manifest_path(args, run), argv, args, run, status, err, time.perf_counter() - t0)
    return code


if __name__ == "__main__":
    sys.exit(main())
