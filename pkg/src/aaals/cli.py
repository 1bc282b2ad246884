"""Command-line interface: ``aaals {solve,approx,hilbert,confmap,demo}``.

Exit codes: 0 success, 1 malformed input, 2 a solver warning under --strict.
All numbers are written with 16 significant digits.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
import warnings
from pathlib import Path

import numpy as np

from ._json import jsonable
from .approx import approximate, on_interval, zigzag, zigzag_approximation
from .barycentric import NearDoublePoleWarning
from .demos import DEMOS
from .geometry import domain_from_dict, samples_at, smooth_blob
from .laplace import SolverOptions, SolverWarning, solve
from .transforms import (BUILTIN_FUNCTIONS, conformal_map, default_grid,
                         hilbert_transform)

EXIT_OK, EXIT_INPUT, EXIT_STRICT = 0, 1, 2


class InputError(Exception):
    """Malformed user input; the message names the file and line if known."""


# --------------------------------------------------------------------------
# output


def fmt(x):
    return format(float(x), ".16g")


def _dump(obj, indent=0):
    pad = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_dump(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(_dump(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + _dump(v, indent + 1) for v in obj) + "\n" + "  " * indent + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return fmt(obj) if math.isfinite(obj) else json.dumps(str(obj))
    return json.dumps(obj)


def write_json(path, obj):
    Path(path).write_text(_dump(jsonable(obj)) + "\n")


def write_csv(path, columns):
    """``columns`` maps header -> 1-D array (all the same length)."""
    names = list(columns)
    cols = [np.asarray(columns[n]).ravel() for n in names]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names)
        for row in zip(*cols):
            w.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])


# --------------------------------------------------------------------------
# input


def read_domain(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    try:
        spec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    try:
        return domain_from_dict(spec), spec
    except KeyError as exc:
        raise InputError(f"{path}:{_line_of(text, exc.args[0])}: missing field {exc.args[0]!r}") from exc
    except (ValueError, TypeError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _line_of(text, key):
    """Best-effort line number for a missing key: the enclosing object start."""
    for i, line in enumerate(text.splitlines(), 1):
        if "{" in line:
            last = i
        if f'"{key}"' in line:
            return i
    return locals().get("last", 1)


def read_table(path, ncols):
    rows = []
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    with fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            if not row or row[0].lstrip().startswith("#"):
                continue
            try:
                vals = [float(v) for v in row]
            except ValueError:
                if lineno == 1:  # header
                    continue
                raise InputError(f"{path}:{lineno}: non-numeric entry") from None
            if len(vals) != ncols:
                raise InputError(f"{path}:{lineno}: expected {ncols} columns, got {len(vals)}")
            if not all(math.isfinite(v) for v in vals):
                raise InputError(f"{path}:{lineno}: non-finite value")
            rows.append(vals)
    if not rows:
        raise InputError(f"{path}: no data rows")
    return np.array(rows)


def data_expression(expr):
    if expr == "re2":
        return lambda z: np.real(z) ** 2
    if expr == "re":
        return np.real
    if expr == "neglogabs":
        return lambda z: -np.log(np.abs(z))
    if expr.startswith("const:"):
        try:
            v = float(expr[6:])
        except ValueError:
            raise InputError(f"--data: bad constant in {expr!r}") from None
        return v
    raise InputError(f"--data: unknown expression {expr!r} "
                     "(use re2, re, neglogabs, const:<value> or const-per-component)")


def boundary_spec(arg, d, spec, path):
    if arg == "const-per-component":
        try:
            vals = [float(c["value"]) for c in spec["components"]]
        except (KeyError, TypeError, ValueError):
            raise InputError(f"{path}: const-per-component needs a numeric 'value' "
                             "on every component") from None
        return vals
    parts = [data_expression(p) for p in arg.split(",")]
    if len(parts) == 1:
        h = parts[0]
        return h if callable(h) else [h] * len(d.components)
    if len(parts) != len(d.components):
        raise InputError(f"--data: {len(parts)} expressions for {len(d.components)} components")
    return parts


def parse_points(items, spec):
    pts = [complex(*p) for p in spec.get("points", [])] if spec else []
    for s in items or []:
        try:
            re_, im_ = (float(v) for v in s.split(","))
        except ValueError:
            raise InputError(f"--point: expected RE,IM, got {s!r}") from None
        pts.append(complex(re_, im_))
    return pts


def parse_grades(s):
    try:
        if ".." in s:
            a, b = s.split("..")
            return list(range(int(a), int(b) + 1))
        return [int(v) for v in s.split(",")]
    except ValueError:
        raise InputError(f"--grades: expected A..B or a list, got {s!r}") from None


# --------------------------------------------------------------------------
# subcommands


def _solver_opts(args, d):
    try:
        return SolverOptions(
            variant=args.variant, aaa_tol=args.tol, poly_degree=args.degree,
            artificial_data=args.artificial_data, samples_per_segment=args.samples_per_segment)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def cmd_solve(args, out):
    d, spec = read_domain(args.domain)
    opts = _solver_opts(args, d)
    points = parse_points(args.point, spec)
    t0 = time.perf_counter()
    if args.data_csv:
        tab = read_table(args.data_csv, 3)
        try:
            S = samples_at(d, tab[:, 0] + 1j * tab[:, 1]).with_data(tab[:, 2])
        except ValueError as exc:
            raise InputError(f"{args.data_csv}: {exc}") from exc
        sol = solve(d, None, opts, samples=S)
    else:
        sol = solve(d, boundary_spec(args.data, d, spec, args.domain), opts)
    wall = time.perf_counter() - t0
    dg = sol.diagnostics
    S = dg["samples"]
    result = sol.to_dict()
    result["points"] = [{"z": z, "u": float(sol.eval_u(z)), "v": float(sol.eval_v(z))}
                        for z in points]
    result["wall_time"] = wall
    write_json(out / "solution.json", result)
    u = sol.eval_u(S.Z)
    write_csv(out / "boundary_error.csv", {"re": S.Z.real, "im": S.Z.imag,
                                           "component": S.component_index, "h": S.H,
                                           "u": u, "error": u - S.H})
    if args.grid:
        from .geometry import contains
        a, _ = d._edges
        x = np.linspace(a.real.min(), a.real.max(), args.grid)
        y = np.linspace(a.imag.min(), a.imag.max(), args.grid)
        X, Y = np.meshgrid(x, y)
        Zg = (X + 1j * Y).ravel()
        ins = contains(d, Zg)
        ug = np.full(Zg.size, np.nan)
        ug[ins] = sol.eval_u(Zg[ins])
        write_csv(out / "grid.csv", {"re": Zg.real, "im": Zg.imag, "u": ug})
    print(f"poles kept {dg['n_poles_kept']}, discarded {dg['n_poles_discarded']}; "
          f"matrix {dg['matrix_shape'][0]}x{dg['matrix_shape'][1]}")
    print(f"max boundary error {fmt(dg['max_error'])}"
          + (f", validation {fmt(dg['validation_error'])}" if "validation_error" in dg else ""))
    for p in result["points"]:
        print(f"u({fmt(p['z'].real)}{'+' if p['z'].imag >= 0 else '-'}{fmt(abs(p['z'].imag))}i)"
              f" = {fmt(p['u'])}")
    print(f"wall time {wall:.3f} s")


def cmd_approx(args, out):
    if args.csv:
        tab = read_table(args.csv, 2)
        X, F = tab[:, 0], tab[:, 1]
        name = Path(args.csv).stem
    elif args.function == "zigzag":
        X = F = None
        name = "zigzag"
    elif args.function == "recip2":
        X = np.linspace(-1, 1, args.npts)
        F = 1 / (X - 2)
        name = "recip2"
    elif args.function == "const":
        X = np.linspace(-1, 1, args.npts)
        F = np.ones_like(X)
        name = "const"
    else:
        raise InputError(f"approx: unknown function {args.function!r}")
    sing = None
    if args.singularities:
        try:
            sing = [float(v) for v in args.singularities.split(",")]
        except ValueError:
            raise InputError("--singularities: expected comma-separated numbers") from None
    deg = 16 if args.degree is None else args.degree
    if X is None:
        r = zigzag_approximation(tol=args.tol, degree=deg)
        exact = zigzag
    else:
        interval = None
        if args.interval:
            a, b = (float(v) for v in args.interval.split(","))
            interval = (a, b)
        try:
            r = approximate(X, F, sing, interval, tol=args.tol, degree=deg)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        exact = {"recip2": lambda x: 1 / (x - 2), "const": np.ones_like}.get(name)
    lo, hi = (-1.0, 1.0) if X is None else (float(X.min()), float(X.max()))
    x = np.linspace(lo, hi, 10_000)
    report = dict(r.diagnostics)
    report["function"] = name
    report["poles_on_interval"] = int(np.count_nonzero(on_interval(r.poles, lo, hi)))
    if exact is not None:
        err = r(x) - exact(x)
        report["uniform_max_error"] = float(np.max(np.abs(err)))
        write_csv(out / "approx_error.csv", {"x": x, "error": err})
    write_json(out / "approx.json", {"report": report, "approximation": r.to_dict()})
    print(f"{name}: degrees {report['aaa_degrees']}, poles kept {report['n_poles_kept']}, "
          f"discarded {report['n_poles_discarded']}, on interval {report['poles_on_interval']}, "
          f"dof {report['dof']}")
    if "uniform_max_error" in report:
        print(f"max error on 10^4 uniform points {fmt(report['uniform_max_error'])}")
    else:
        print(f"max error on samples {fmt(report['max_error'])}")


def cmd_hilbert(args, out):
    y0 = args.at
    if args.grades:
        fname = args.function or "abs-exp"
        if fname not in BUILTIN_FUNCTIONS:
            raise InputError(f"--function: unknown built-in {fname!r}")
        exact = BUILTIN_FUNCTIONS[fname][3]
        if exact is None:
            raise InputError(f"--grades needs a function with a closed-form transform; "
                             f"{fname!r} has none")
        yy = np.linspace(-5, 5, 1000)
        L, E = [], []
        for g in parse_grades(args.grades):
            h = hilbert_transform(fname, default_grid(g, 30 * g), tol=args.tol)
            L.append(g)
            E.append(float(np.max(np.abs(h.v(yy) - exact(yy)))))
            print(f"L={g}: max error on [-5,5] {fmt(E[-1])}")
        write_csv(out / "convergence.csv", {"L": np.array(L), "max_error": np.array(E)})
        return
    if args.csv:
        tab = read_table(args.csv, 2)
        runs = [(Path(args.csv).stem, lambda: hilbert_transform(tab[:, 1], tab[:, 0], tol=args.tol),
                 None, None)]
    else:
        names = [args.function] if args.function else list(BUILTIN_FUNCTIONS)
        for n in names:
            if n not in BUILTIN_FUNCTIONS:
                raise InputError(f"--function: unknown built-in {n!r}")
        runs = [(n, (lambda n=n: hilbert_transform(n, tol=args.tol)),
                 BUILTIN_FUNCTIONS[n][1], BUILTIN_FUNCTIONS[n][2]) for n in names]
    rows = []
    t_all = time.perf_counter()
    for name, run, ref, ref_err in runs:
        t = time.perf_counter()
        try:
            h = run()
        except ValueError as exc:
            raise InputError(f"{name}: {exc}") from exc
        v = float(h.v(y0))
        row = {"function": name, "y": y0, "v": v, "time": time.perf_counter() - t,
               **{k: h.diagnostics[k] for k in ("aaa_degree", "poles_kept", "max_error")}}
        if ref is not None and y0 == 2.0:
            row["table_value"] = ref
            row["error"] = v - ref
            row["table_error"] = ref_err
        rows.append(row)
        print(f"{name:8s} v({fmt(y0)}) = {fmt(v)}"
              + (f"  error {row['error']:+.1e}" if "error" in row else ""))
    print(f"total time {time.perf_counter() - t_all:.3f} s")
    write_json(out / "hilbert.json", {"rows": rows})
    keys = [k for k in rows[0] if k != "time"]
    write_csv(out / "hilbert_table.csv", {k: [r.get(k, "") for r in rows] for k in keys})


def cmd_confmap(args, out):
    if args.domain:
        d, _ = read_domain(args.domain)
    else:
        d = smooth_blob(seed=args.seed)
    opts = None
    if args.variant or args.samples_per_segment or args.degree is not None:
        opts = SolverOptions(variant=args.variant or ("local" if d.corners else "global"),
                             poly_degree=args.degree, samples_per_segment=args.samples_per_segment)
    try:
        cm = conformal_map(d, opts, tol=args.tol, seed=args.seed)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    rng = np.random.default_rng(args.seed + 1)
    n = args.npts
    w = np.sqrt(rng.random(n)) * np.exp(2j * np.pi * rng.random(n))
    rt = float(np.max(np.abs(cm.forward(cm.inverse(w)) - w)))
    res = cm.to_dict()
    res["domain"] = d.to_dict()
    res["round_trip"] = {"points": n, "max_error": rt}
    write_json(out / "confmap.json", res)
    print(f"forward degree {cm.diagnostics['forward_degree']}, inverse degree "
          f"{cm.diagnostics['inverse_degree']}, boundary error {fmt(cm.diagnostics['boundary_error'])}")
    print(f"round trip on {n} disk points: {fmt(rt)}")


def _write_demo(out, fig, result):
    for name, part in result.items():
        stem = f"{fig}_{name}"
        tables = {k: v for k, v in part.items() if isinstance(v, dict) and k != "summary"}
        write_json(out / f"{stem}.json", {"summary": part.get("summary", {}),
                                          **{k: v for k, v in tables.items()}})
        for k, cols in tables.items():
            write_csv(out / f"{stem}_{k}.csv", cols)


def cmd_demo(args, out):
    names = list(DEMOS) if args.name == "all" else args.name.split(",")
    for n in names:
        if n not in DEMOS:
            raise InputError(f"demo: unknown figure {n!r} (choose from {', '.join(DEMOS)} or all)")
    for n in names:
        t = time.perf_counter()
        res = DEMOS[n]()
        _write_demo(out, n, res)
        for part, rep in res.items():
            summ = rep.get("summary", {})
            brief = {k: summ[k] for k in list(summ)[:6] if k != "timings"}
            print(f"{n}/{part}: {brief}")
        print(f"{n} done in {time.perf_counter() - t:.2f} s")


# --------------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="aaals", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, tol=1e-8):
        sp.add_argument("--tol", type=float, default=tol, help=f"AAA tolerance (default {tol:g})")
        sp.add_argument("--degree", type=int, default=None,
                        help="polynomial degree (default depends on the problem)")
        sp.add_argument("--out", type=Path, default=Path("."), help="output directory")
        sp.add_argument("--strict", action="store_true",
                        help="exit with status 2 if a solver warning is raised")

    def solver(sp, variant_default="local"):
        sp.add_argument("--variant", choices=("global", "local"), default=variant_default,
                        help="global or per-corner AAA pole selection")
        sp.add_argument("--samples-per-segment", type=int, default=None,
                        help="boundary samples per segment (default 600 local, 300 global)")
        sp.add_argument("--artificial-data", choices=("off", "sqrt-product", "auto"),
                        default="auto", help="data used for local AAA pole location")

    s = sub.add_parser("solve", help="Dirichlet problem on a domain file")
    s.add_argument("domain", help="domain JSON file")
    s.add_argument("--data", default="re2",
                   help="re2, re, neglogabs, const:<v>, a comma list per component, "
                        "or const-per-component (uses each component's 'value')")
    s.add_argument("--data-csv", help="tabulated boundary data: rows re,im,h")
    s.add_argument("--point", action="append", metavar="RE,IM",
                   help="report u and v at this point (repeatable)")
    s.add_argument("--grid", type=int, default=0, metavar="N",
                   help="also write u on an N x N grid over the bounding box")
    common(s)
    solver(s)

    a = sub.add_parser("approx", help="real rational approximation on an interval")
    a.add_argument("function", nargs="?", default="zigzag",
                   help="zigzag, recip2 (1/(x-2)) or const; ignored with --csv")
    a.add_argument("--csv", help="tabulated samples: rows x,f")
    a.add_argument("--singularities", help="comma-separated singular points for local AAA")
    a.add_argument("--interval", help="A,B: discard poles on [A,B] (default: sample hull)")
    a.add_argument("--npts", type=int, default=500, help="samples for recip2/const")
    common(a)

    h = sub.add_parser("hilbert", help="Hilbert transform on the real line")
    h.add_argument("--function", help=f"built-in: {', '.join(BUILTIN_FUNCTIONS)} (default: all)")
    h.add_argument("--csv", help="tabulated samples: rows y,u")
    h.add_argument("--at", type=float, default=2.0, help="evaluation point (default 2)")
    h.add_argument("--grades", help="convergence study over grids of grade A..B")
    common(h)

    c = sub.add_parser("confmap", help="conformal map onto the unit disk")
    c.add_argument("domain", nargs="?", help="domain JSON (default: seeded smooth domain)")
    c.add_argument("--seed", type=int, default=0, help="seed for the default domain and test points")
    c.add_argument("--npts", type=int, default=10_000, help="round-trip test points")
    c.add_argument("--variant", choices=("global", "local"), default=None,
                   help="solver variant (default: local if the domain has corners)")
    c.add_argument("--samples-per-segment", type=int, default=None,
                   help="boundary samples per segment for the underlying solve")
    common(c, tol=1e-10)

    d = sub.add_parser("demo", help="regenerate figure data as CSV/JSON")
    d.add_argument("name", nargs="?", default="all", help=f"{', '.join(DEMOS)} or all")
    common(d)
    return p


COMMANDS = {"solve": cmd_solve, "approx": cmd_approx, "hilbert": cmd_hilbert,
            "confmap": cmd_confmap, "demo": cmd_demo}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse uses 2 for usage errors
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    if getattr(args, "tol", 1.0) <= 0:
        print("error: --tol must be positive", file=sys.stderr)
        return EXIT_INPUT
    try:
        args.out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"error: cannot create {args.out}: {exc.strerror}", file=sys.stderr)
        return EXIT_INPUT
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            COMMANDS[args.command](args, args.out)
        except InputError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
    for msg in dict.fromkeys(str(w.message) for w in caught):
        print(f"warning: {msg}", file=sys.stderr)
    flagged = [w for w in caught if issubclass(w.category, (SolverWarning, RuntimeWarning))
               and not issubclass(w.category, NearDoublePoleWarning)]
    if args.strict and flagged:
        return EXIT_STRICT
    return EXIT_OK


def main_exit():
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
