"""Command-line front end: parameter scans, spectra, quenches, phase maps.

Output is CSV with one leading comment line holding the full run
configuration as JSON, so every file is self-describing and reruns are
byte-identical.  Grid points go to a process pool (capped by the
DATXY_THREADS environment variable); results are written in row-major
order regardless of completion order.

Exit codes: 0 success, 2 configuration error, 3 numeric non-convergence
at one or more points (flagged rows are still emitted).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .blocks import bdg_bands, min_gap
from .errors import DatxyError, DomainError, NonConvergence, UnclassifiedPoint
from .order import Thresholds, classify_point, chiral_order, pm_discriminator, staggered_mx
from .params import ModelParams, QuadratureSpec, classify_regime
from .quench import QuenchSpec, ergodicity_verdict, evolve, time_averaged_ln
from .rdm import ent_derivative, equilibrium_correlators, equilibrium_ln
from .scans import Axis, QUANTITIES, ScanGrid
from .uniform import spectrum_uniform
from .ed import SpinChainED

_CORR_FIELDS = ("cxx", "cyy", "cxy", "cyx", "czz", "mz_e", "mz_o")


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def _parse_float(s: str) -> float:
    s = s.strip()
    if s.lower() in ("inf", "+inf", "infinity"):
        return math.inf
    if s.endswith("pi"):
        return float(s[:-2] or "1") * math.pi
    return float(s)


def _parse_grid(text: str) -> list[Axis]:
    """'lambda1=0:2.5:100,lambda2=0:2.5:100' -> [Axis, ...] (1 or 2)."""
    axes = []
    for part in text.split(","):
        if not part.strip():
            continue
        name, _, rng = part.partition("=")
        bits = rng.split(":")
        if len(bits) != 3:
            raise DomainError(f"grid axis {part!r} must be name=start:stop:count")
        axes.append(Axis(name=name.strip(), start=_parse_float(bits[0]),
                         stop=_parse_float(bits[1]), count=int(bits[2])))
    if not 1 <= len(axes) <= 2:
        raise DomainError("grid needs one or two axes")
    return axes


def _load_config(path: str) -> dict:
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, val = line.partition("=")
            if not _:
                raise DomainError(f"config line {raw!r} is not key=value")
            out[key.strip()] = val.strip()
    return out


def _model_from_args(args) -> ModelParams:
    return ModelParams(gamma=args.gamma, d=args.d, lambda1=args.lambda1,
                       lambda2=args.lambda2, betaJ=args.betaJ)


def _n_workers(requested: int | None) -> int:
    cap = os.environ.get("DATXY_THREADS")
    cap = int(cap) if cap else (os.cpu_count() or 1)
    want = requested if requested else cap
    return max(1, min(want, cap))


class _Writer:
    def __init__(self, path: str | None):
        self.path = path
        self.fh = open(path, "w", encoding="utf-8", newline="\n") if path else sys.stdout

    def line(self, text: str):
        self.fh.write(text + "\n")

    def close(self):
        if self.path:
            self.fh.close()


def _header(writer: _Writer, command: str, config: dict):
    payload = {"command": command, "version": __version__, **config}
    payload = {k: ("inf" if isinstance(v, float) and math.isinf(v) else v)
               for k, v in payload.items()}
    writer.line("# " + json.dumps(payload, sort_keys=True, default=str))


# ---------------------------------------------------------------- scan ----

def _scan_record(task) -> tuple[dict, bool]:
    """One grid-point record; returns (columns, converged)."""
    quantity, pdict, coords, opts = task
    p = ModelParams(**pdict)
    spec = QuadratureSpec(abs_tol=opts["tol"])
    row = dict(coords)
    row["regime"] = classify_regime(p).value
    converged = True
    try:
        if quantity == "LN":
            row["LN"] = equilibrium_ln(p, spec)
        elif quantity in ("dLN_dl1", "dLN_dl2"):
            which = "lambda1" if quantity.endswith("l1") else "lambda2"
            row[quantity] = ent_derivative(p, which, opts["fd_step"], spec)
        elif quantity == "Mx":
            row["Mx"] = staggered_mx(p, opts["ed_sites"], opts["hx"])
        elif quantity == "S":
            row["S"] = pm_discriminator(equilibrium_correlators(p, spec))
        elif quantity == "Cchi":
            row["Cchi"] = chiral_order(equilibrium_correlators(p, spec))
        elif quantity == "gap":
            row["gap"] = min_gap(p, opts["n_phi"])
        elif quantity == "mz":
            cs = equilibrium_correlators(p, spec)
            row["mz_e"], row["mz_o"] = cs.mz_e, cs.mz_o
        elif quantity == "correlators":
            cs = equilibrium_correlators(p, spec)
            for name in _CORR_FIELDS:
                row[name] = getattr(cs, name)
        elif quantity == "phase_label":
            try:
                lab = classify_point(p, ed_sites=opts["ed_sites"], hx=opts["hx"],
                                     n_phi=opts["n_phi"], spec=spec)
                row["label"] = lab.phase.value
                for k, v in lab.evidence.items():
                    row[k] = v
            except UnclassifiedPoint as exc:
                row["label"] = "UNCLASSIFIED"
                for k, v in exc.evidence.items():
                    row[k] = v
        else:
            raise DomainError(f"unsupported quantity {quantity!r}")
    except NonConvergence:
        converged = False
    row["converged"] = converged
    return row, converged


def _run_grid(args, writer, command: str, quantity: str) -> int:
    axes = _parse_grid(args.grid)
    if any(ax.name == "t" for ax in axes):
        raise DomainError("time traces are produced by the quench subcommand")
    base = _model_from_args(args)
    grid = ScanGrid(x=axes[0], y=axes[1] if len(axes) > 1 else None,
                    base=base, quantity=quantity)
    opts = {"tol": args.tol, "ed_sites": args.ed_sites, "hx": args.hx,
            "n_phi": args.n_phi, "fd_step": args.fd_step}

    tasks = []
    xs = grid.x.values()
    ys = grid.y.values() if grid.y is not None else None
    for ix, iy, p in grid.points():
        coords = {grid.x.name: float(xs[ix])}
        if ys is not None:
            coords[grid.y.name] = float(ys[iy])
        pdict = {"gamma": p.gamma, "d": p.d, "lambda1": p.lambda1,
                 "lambda2": p.lambda2, "J": p.J, "betaJ": p.betaJ}
        tasks.append((quantity, pdict, coords, opts))

    meta = {
        "quantity": quantity, "grid": args.grid, "gamma": args.gamma,
        "d": args.d, "lambda1": args.lambda1, "lambda2": args.lambda2,
        "betaJ": args.betaJ, "tol": args.tol, "ed_sites": args.ed_sites,
        "hx": args.hx, "n_phi": args.n_phi,
    }
    if quantity == "phase_label":
        th = Thresholds()
        meta["thresholds"] = {"theta_M": th.theta_M, "theta_C": th.theta_C,
                              "theta_S": th.theta_S, "theta_gap": th.theta_gap}
    _header(writer, command, meta)

    workers = _n_workers(args.threads)
    if workers > 1 and len(tasks) > 16:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_scan_record, tasks,
                                    chunksize=max(1, len(tasks) // (8 * workers))))
    else:
        results = [_scan_record(t) for t in tasks]

    columns = []
    for row, _ok in results:
        for key in row:
            if key not in columns:
                columns.append(key)
    writer.line(",".join(columns))
    all_ok = True
    for row, ok in results:
        all_ok &= ok
        writer.line(",".join(_fmt(row.get(c, "")) for c in columns))
    return 0 if all_ok else 3


def _cmd_scan(args, writer) -> int:
    if args.quantity not in QUANTITIES:
        raise DomainError(f"--quantity must be one of {QUANTITIES}")
    return _run_grid(args, writer, "scan", args.quantity)


def _cmd_phase_map(args, writer) -> int:
    return _run_grid(args, writer, "phase-map", "phase_label")


# ------------------------------------------------------------- spectrum ----

def _cmd_spectrum(args, writer) -> int:
    p = _model_from_args(args)
    _header(writer, "spectrum", {
        "gamma": args.gamma, "d": args.d, "lambda1": args.lambda1,
        "lambda2": args.lambda2, "n_phi": args.n_phi,
    })
    if p.lambda2 == 0.0:
        writer.line("phi,Lambda,omega")
        for phi in np.linspace(-math.pi, math.pi, args.n_phi):
            dp = spectrum_uniform(p, float(phi))
            writer.line(",".join(_fmt(v) for v in (dp.phi, dp.Lambda, dp.omega)))
    else:
        writer.line("phi,omega1,omega2,omega3,omega4")
        for phi in np.linspace(-math.pi / 2, math.pi / 2, args.n_phi):
            bands = bdg_bands(p, float(phi))
            writer.line(",".join(_fmt(v) for v in (phi, *bands)))
    return 0


# --------------------------------------------------------------- quench ----

def _cmd_quench(args, writer) -> int:
    p = _model_from_args(args)
    t_grid = np.linspace(0.0, _parse_float(args.t_max), args.samples)
    w0 = _parse_float(args.window_start)
    w1 = _parse_float(args.window_stop)
    if not (t_grid[0] <= w0 <= w1 <= t_grid[-1]):
        raise DomainError("averaging window must lie inside [0, t_max]")
    qspec = QuenchSpec(initial=p, t_grid=t_grid, avg_window=(w0, w1))
    spec = QuadratureSpec(abs_tol=args.tol)
    trace = evolve(qspec, spec)
    ln = trace.ln_values()
    _header(writer, "quench", {
        "gamma": args.gamma, "d": args.d, "lambda1": args.lambda1,
        "lambda2": args.lambda2, "betaJ": args.betaJ, "t_max": args.t_max,
        "samples": args.samples, "window": [w0, w1], "tol": args.tol,
    })
    writer.line("t," + ",".join(_CORR_FIELDS) + ",LN")
    for i, t in enumerate(trace.t_grid):
        cs = trace.values[i]
        vals = [t] + [getattr(cs, f) for f in _CORR_FIELDS] + [ln[i]]
        writer.line(",".join(_fmt(v) for v in vals))
    writer.line("# window_avg_LN=" + _fmt(time_averaged_ln(trace, (w0, w1))))
    return 0


# ----------------------------------------------------------- ergodicity ----

def _cmd_ergodicity(args, writer) -> int:
    p = _model_from_args(args)
    spec = QuadratureSpec(abs_tol=args.tol)
    grid = np.concatenate([np.geomspace(args.betaJ_min, args.betaJ_max,
                                        args.betaJ_points), [math.inf]])
    verdict = ergodicity_verdict(p, grid, spec,
                                 window_samples=args.window_samples)
    _header(writer, "ergodicity", {
        "gamma": args.gamma, "d": args.d, "lambda1": args.lambda1,
        "lambda2": args.lambda2, "betaJ": args.betaJ, "tol": args.tol,
        "betaJ_scan": [args.betaJ_min, args.betaJ_max, args.betaJ_points],
    })
    writer.line("gamma,d,lambda1,lambda2,lhs,rhs,ergodic,best_betaJ")
    writer.line(",".join(_fmt(v) for v in (
        p.gamma, p.d, p.lambda1, p.lambda2, verdict.lhs, verdict.rhs,
        verdict.ergodic, verdict.best_betaJ)))
    return 0


# ---------------------------------------------------------- oracle-check ----

def _cmd_oracle_check(args, writer) -> int:
    p = _model_from_args(args)
    spec = QuadratureSpec(abs_tol=args.tol)
    analytic = equilibrium_correlators(p, spec)
    ed = SpinChainED(args.sites, p)
    exact = ed.correlators()
    _header(writer, "oracle-check", {
        "gamma": args.gamma, "d": args.d, "lambda1": args.lambda1,
        "lambda2": args.lambda2, "betaJ": args.betaJ, "sites": args.sites,
        "tol": args.tol,
    })
    writer.line("quantity,analytic,ed,abs_diff")
    for name in _CORR_FIELDS:
        a = getattr(analytic, name)
        e = getattr(exact, name)
        writer.line(",".join((name, _fmt(a), _fmt(e), _fmt(abs(a - e)))))
    return 0


# ----------------------------------------------------------------- main ----

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="datxy",
        description="Equilibrium and quench physics of the XY chain with "
                    "DM interaction in uniform + alternating transverse fields.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, tol):
        sp.add_argument("--config", help="key=value file; command-line flags win")
        sp.add_argument("--gamma", type=float, default=0.8)
        sp.add_argument("--d", type=float, default=0.0)
        sp.add_argument("--lambda1", type=float, default=0.0)
        sp.add_argument("--lambda2", type=float, default=0.0)
        sp.add_argument("--betaJ", type=_parse_float, default=math.inf)
        sp.add_argument("--tol", type=float, default=tol,
                        help="quadrature absolute tolerance")
        sp.add_argument("--out", help="output CSV path (default stdout)")
        sp.add_argument("--seedless", action="store_true",
                        help="accepted for pipeline compatibility; output is "
                             "deterministic and seed-free regardless")

    sp = sub.add_parser("scan", help="grid scan of one quantity")
    common(sp, 1e-8)
    sp.add_argument("--quantity", required=True, choices=QUANTITIES)
    sp.add_argument("--grid", required=True,
                    help="axis spec, e.g. lambda1=0:2.5:100,lambda2=0:2.5:100")
    sp.add_argument("--threads", type=int, default=None)
    sp.add_argument("--ed-sites", type=int, default=8, dest="ed_sites")
    sp.add_argument("--hx", type=float, default=1e-3)
    sp.add_argument("--n-phi", type=int, default=512, dest="n_phi")
    sp.add_argument("--fd-step", type=float, default=1e-4, dest="fd_step")

    sp = sub.add_parser("phase-map", help="phase labels over a field grid")
    common(sp, 1e-6)
    sp.add_argument("--grid", required=True)
    sp.add_argument("--threads", type=int, default=None)
    sp.add_argument("--ed-sites", type=int, default=8, dest="ed_sites")
    sp.add_argument("--hx", type=float, default=1e-3)
    sp.add_argument("--n-phi", type=int, default=256, dest="n_phi")
    sp.add_argument("--fd-step", type=float, default=1e-4, dest="fd_step")

    sp = sub.add_parser("spectrum", help="single-particle bands over phi")
    common(sp, 1e-10)
    sp.add_argument("--n-phi", type=int, default=257, dest="n_phi")

    sp = sub.add_parser("quench", help="time trace after switching off fields")
    common(sp, 1e-7)
    sp.add_argument("--t-max", default="100pi", dest="t_max")
    sp.add_argument("--samples", type=int, default=2001)
    sp.add_argument("--window-start", default="80pi", dest="window_start")
    sp.add_argument("--window-stop", default="100pi", dest="window_stop")

    sp = sub.add_parser("ergodicity", help="long-time average vs thermal bound")
    common(sp, 1e-7)
    sp.add_argument("--betaJ-min", type=float, default=0.1, dest="betaJ_min")
    sp.add_argument("--betaJ-max", type=float, default=100.0, dest="betaJ_max")
    sp.add_argument("--betaJ-points", type=int, default=41, dest="betaJ_points")
    sp.add_argument("--window-samples", type=int, default=201, dest="window_samples")

    sp = sub.add_parser("oracle-check", help="exact diagonalization comparison")
    common(sp, 1e-10)
    sp.add_argument("--sites", type=int, default=10)
    return ap


_COMMANDS = {
    "scan": _cmd_scan,
    "phase-map": _cmd_phase_map,
    "spectrum": _cmd_spectrum,
    "quench": _cmd_quench,
    "ergodicity": _cmd_ergodicity,
    "oracle-check": _cmd_oracle_check,
}


def main(argv=None) -> int:
    ap = build_parser()
    tokens = list(sys.argv[1:] if argv is None else argv)
    args = ap.parse_args(tokens)
    if args.config:
        # config fills every key the command line left untouched
        try:
            cfg = _load_config(args.config)
        except OSError as exc:
            print(f"datxy: cannot read config: {exc}", file=sys.stderr)
            return 2
        explicit = _explicit_flags(tokens)
        try:
            for key, val in cfg.items():
                attr = key.replace("-", "_")
                if not hasattr(args, attr) or attr in explicit or attr == "command":
                    continue
                current = getattr(args, attr)
                if isinstance(current, bool):
                    setattr(args, attr, val.lower() in ("1", "true", "yes"))
                elif attr == "betaJ" or isinstance(current, float):
                    setattr(args, attr, _parse_float(val))
                elif isinstance(current, int):
                    setattr(args, attr, int(val))
                else:
                    setattr(args, attr, val)
        except ValueError as exc:
            print(f"datxy: bad config value: {exc}", file=sys.stderr)
            return 2

    writer = _Writer(getattr(args, "out", None))
    try:
        code = _COMMANDS[args.command](args, writer)
    except (DomainError, UnclassifiedPoint) as exc:
        print(f"datxy: {exc}", file=sys.stderr)
        return 2
    except NonConvergence as exc:
        print(f"datxy: {exc}", file=sys.stderr)
        return 3
    except DatxyError as exc:
        print(f"datxy: {exc}", file=sys.stderr)
        return 2
    finally:
        writer.close()
    return code


def _explicit_flags(argv) -> set:
    out = set()
    for token in argv:
        if token.startswith("--"):
            out.add(token[2:].split("=", 1)[0].replace("-", "_"))
    return out


if __name__ == "__main__":
    sys.exit(main())
