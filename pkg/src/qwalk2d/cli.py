"""Command line front end.

Every command writes CSV data plus a JSON manifest describing how it was
produced. Exit codes: 0 success, 1 invalid input, 2 a verification residual
above tolerance.
"""

from __future__ import annotations

import argparse
import cmath
import csv
import json
import math
import re
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .core import CoinParams, CoinState2, CoinState4, InvalidParameterError, grover_equivalent_init, new_state
from .entanglement import (
    CALIBRATED_CONVENTION,
    CONVENTIONS,
    calibrate_convention,
    entanglement_sweep,
    negativity,
    phi_grid,
    theta_grid,
    worker_count,
)
from .equivalence import distribution_distance, verify_pairing
from .limit import LimitDensityParams, convergence_report, density_grid, density_normalization
from .walks import Alternate, Grover, ProbabilityGrid, evolve, probability_grid

VERIFY_TOL = 1e-12

_ANGLE = re.compile(r"^\s*([+-]?\d*\.?\d*)\s*\*?\s*pi\s*(?:/\s*(\d+\.?\d*))?\s*$")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def parse_angle(text: str) -> float:
    """Float, or a multiple of pi such as ``pi/4``, ``3pi/2``, ``0.5*pi``."""
    text = str(text)
    m = _ANGLE.match(text)
    if m:
        coef = m.group(1)
        coef = 1.0 if coef in ("", "+") else -1.0 if coef == "-" else float(coef)
        div = float(m.group(2)) if m.group(2) else 1.0
        return coef * math.pi / div
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an angle: {text!r}") from None


def parse_init(name: str, walk: str, params: CoinParams):
    """Resolve an initial-coin preset for the given walk."""
    h = 1 / math.sqrt(2)
    qubit = {
        "symmetric": (h, 1j * h),
        "symmetric-orth": (h, -1j * h),
        "ket0": (1, 0),
        "ket1": (0, 1),
        "psi2": (h, -h),
        "psi2-orth": (h, h),
    }
    if walk == "grover":
        if name in ("grover-nonlocalized", "symmetric"):
            return grover_equivalent_init(params, 0)
        if name.startswith("basis4:"):
            k = int(name.split(":", 1)[1])
            if k not in range(4):
                raise InvalidParameterError("basis4 index must be 0..3")
            q = [0, 0, 0, 0]
            q[k] = 1
            return CoinState4(tuple(q))
        if name.startswith("coin4:"):
            parts = name.split(":", 1)[1].split(",")
            return CoinState4(tuple(complex(p) for p in parts))
        raise InvalidParameterError(f"unknown Grover-walk init {name!r}")
    if name in qubit:
        return CoinState2(*qubit[name])
    if name.startswith("bloch:"):
        parts = name.split(":")
        if len(parts) != 3:
            raise InvalidParameterError("bloch init must look like bloch:<theta>:<phi>")
        try:
            theta, phi = parse_angle(parts[1]), parse_angle(parts[2])
        except argparse.ArgumentTypeError as exc:
            raise InvalidParameterError(str(exc)) from None
        return CoinState2.from_bloch(theta, phi)
    raise InvalidParameterError(f"unknown alternate-walk init {name!r}")


def bloch_angles(state: CoinState2) -> tuple[float, float]:
    theta = 2 * math.acos(min(1.0, abs(state.nu0)))
    if abs(state.nu1) == 0 or abs(state.nu0) == 0:
        phi = 0.0 if abs(state.nu1) == 0 else cmath.phase(state.nu1)
    else:
        phi = cmath.phase(state.nu1) - cmath.phase(state.nu0)
    return theta, phi % (2 * math.pi)


def fmt(value: float) -> str:
    return format(float(value), ".17g")


def write_csv(path: Path, header, rows) -> int:
    path.parent.mkdir(parents=True, exist_ok=True)
    n = 0
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
            n += 1
    return n


def grid_rows(grid: ProbabilityGrid):
    """``(x, y, p)`` sorted by y then x."""
    xs = grid.coords
    for j, y in enumerate(xs):
        for i, x in enumerate(xs):
            yield int(x), int(y), float(grid.values[i, j])


def read_grid(path: Path) -> ProbabilityGrid:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"x", "y", "p"} <= set(reader.fieldnames):
            raise InvalidParameterError(f"{path}: expected header x,y,p")
        rows = [(int(r["x"]), int(r["y"]), float(r["p"])) for r in reader]
    if not rows:
        raise InvalidParameterError(f"{path}: no rows")
    L = max(max(abs(x), abs(y)) for x, y, _ in rows)
    if len(rows) != (2 * L + 1) ** 2:
        raise InvalidParameterError(f"{path}: expected a full square window of half-width {L}")
    values = np.zeros((2 * L + 1, 2 * L + 1))
    for x, y, p in rows:
        values[x + L, y + L] = p
    return ProbabilityGrid(L, values)


def write_manifest(path: Path, command: str, params: dict, outputs, started: float, norm_residual=None, extra=None):
    manifest = {
        "command": command,
        "params": params,
        "norm_residual": norm_residual,
        "wall_time_ms": round((time.perf_counter() - started) * 1000.0, 3),
        "version": __version__,
        "outputs": [str(p) for p in outputs],
    }
    if extra:
        manifest.update(extra)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return manifest


def _manifest_path(args, default: Path) -> Path:
    return Path(args.manifest) if args.manifest else default.with_suffix(".manifest.json")


def _effective(args) -> dict:
    skip = {"func", "config", "manifest"}
    return {k: v for k, v in vars(args).items() if k not in skip}


def _walk(name: str, params: CoinParams):
    return Alternate(params) if name == "alternate" else Grover(params)


def cmd_simulate(args) -> int:
    started = time.perf_counter()
    params = CoinParams(args.gamma)
    init = parse_init(args.init, args.walk, params)
    if args.t < 0:
        raise InvalidParameterError("t must be non-negative")
    state = evolve(new_state(init, args.t), _walk(args.walk, params), args.t)
    grid = probability_grid(state)
    out = Path(args.out)
    write_csv(out, ["x", "y", "p"], grid_rows(grid))
    write_manifest(
        _manifest_path(args, out),
        "simulate",
        _effective(args),
        [out],
        started,
        norm_residual=abs(grid.total() - 1.0),
        extra={"rows": (2 * args.t + 1) ** 2},
    )
    print(f"wrote {out} ({(2 * args.t + 1) ** 2} rows, |sum P - 1| = {abs(grid.total() - 1.0):.3e})")
    return 0


def cmd_verify(args) -> int:
    started = time.perf_counter()
    params = CoinParams(args.gamma)
    alt_init = parse_init(args.init, "alternate", params) if args.init else None
    reports = verify_pairing(params, args.xi, args.kappa, args.t_max, alt_init=alt_init)
    gated = ("lemma1", "mapping", "distribution")

    print(f"{'t':>4} {'lemma1':>11} {'mapping':>11} {'-mapping':>11} {'dist':>11}")
    for i in range(args.t_max + 1):
        vals = [reports[k].per_step[i][1] for k in ("lemma1", "mapping", "mapping_flipped", "distribution")]
        print(f"{i:>4} " + " ".join(f"{v:11.3e}" for v in vals))
    failed = [k for k in gated if not reports[k].passed(args.tol)]
    for k in failed:
        x, y, t = reports[k].worst
        print(f"FAIL {k}: max {reports[k].max_abs:.3e} at (x={x}, y={y}, t={t})")
    if not failed:
        print(f"OK: all residuals <= {args.tol:g} for t <= {args.t_max}")

    summary = {
        k: {"max_abs": r.max_abs, "worst": list(r.worst) if r.worst else None, "per_step": r.per_step}
        for k, r in reports.items()
    }
    outputs = []
    if args.out:
        out = Path(args.out)
        rows = (
            [t] + [reports[k].per_step[t][1] for k in ("lemma1", "mapping", "mapping_flipped", "distribution")]
            for t in range(args.t_max + 1)
        )
        write_csv(out, ["t", "lemma1", "mapping", "mapping_flipped", "distribution"], rows)
        outputs.append(out)
        write_manifest(
            _manifest_path(args, out),
            "verify",
            _effective(args),
            outputs,
            started,
            norm_residual=None,
            extra={"residuals": summary, "passed": not failed},
        )
    return 2 if failed else 0


def cmd_entangle(args) -> int:
    started = time.perf_counter()
    params = CoinParams(args.gamma)
    if args.t < 1:
        raise InvalidParameterError("entangle needs t >= 1")
    out = Path(args.out)
    extra = {"convention": args.convention, "conventions": {k: f"d-1 = {v(1)}t" for k, v in CONVENTIONS.items()}}
    walk = _walk(args.walk, params)

    if args.theta_points is None and args.phi_points is None:
        init = parse_init(args.init, args.walk, params)
        state = evolve(new_state(init, args.t), walk, args.t)
        res = negativity(state, args.convention)
        theta, phi = bloch_angles(init) if isinstance(init, CoinState2) else (math.nan, math.nan)
        n = write_csv(out, ["theta", "phi", "n"], [(theta, phi, res.value)])
        extra.update(
            {
                "trace_norm_minus_one": res.trace_norm_minus_one,
                "negativity": {"support": res.support, "window": res.window},
                "rows": n,
            }
        )
        print(f"N = {res.value:.5f} ({args.convention}; support={res.support:.6f}, window={res.window:.6f})")
        norm = abs(state.norm() - 1.0)
    else:
        if args.walk != "alternate":
            raise InvalidParameterError("Bloch sweeps are defined for the alternate walk only")
        if args.theta_points is not None and args.theta_points < 1:
            raise InvalidParameterError("--theta-points must be positive")
        if args.phi_points is not None and args.phi_points < 1:
            raise InvalidParameterError("--phi-points must be positive")
        thetas = theta_grid(args.theta_points) if args.theta_points else np.array([parse_angle(args.theta)])
        if args.phi_points:
            phis = phi_grid(args.phi_points)
        else:
            phis = np.array([parse_angle(p) for p in (args.phi or ["0"])])
        table = entanglement_sweep(thetas, phis, args.t, walk, args.convention, workers=args.workers)
        n = write_csv(out, ["theta", "phi", "n"], (tuple(float(v) for v in row) for row in table))
        if n != thetas.size * phis.size:
            raise RuntimeError("sweep row count does not match the grid")
        extra.update({"rows": n, "theta_grid": thetas.tolist(), "phi_grid": phis.tolist()})
        i = int(np.argmax(table[:, 2]))
        print(f"wrote {out} ({n} rows); max N = {table[i, 2]:.5f} at theta={table[i, 0]:.4f}, phi={table[i, 1]:.4f}")
        norm = None
    if args.calibrate:
        extra["calibration"] = calibrate_convention()
    write_manifest(_manifest_path(args, out), "entangle", _effective(args), [out], started, norm, extra)
    return 0


def cmd_limit(args) -> int:
    started = time.perf_counter()
    params = CoinParams(args.gamma)
    init = parse_init(args.init, "alternate", params)
    lp = LimitDensityParams(params, init)
    if args.grid_points < 1:
        raise InvalidParameterError("--grid-points must be positive")
    t_list = [int(t) for t in args.t_list.split(",") if t.strip()] if args.t_list else []

    centres, values, area = density_grid(lp, points=args.grid_points)
    density_out = Path(args.out)
    rows = (
        (float(centres[i]), float(centres[j]), float(values[i, j]))
        for j in range(centres.size)
        for i in range(centres.size)
    )
    write_csv(density_out, ["x", "y", "f"], rows)
    outputs = [density_out]
    normalization = density_normalization(lp, quadrature_points=args.quadrature_points)
    extra = {
        "normalization": normalization,
        "grid_mass": float(values.sum() * area),
        "f_origin": float(np.asarray(values)[centres.size // 2, centres.size // 2]) if centres.size % 2 else None,
        "rows": centres.size**2,
    }
    if t_list:
        report = convergence_report(lp, t_list=t_list, quadrature_points=args.quadrature_points)
        conv_out = Path(args.convergence_out) if args.convergence_out else density_out.with_name(
            density_out.stem + "_convergence.csv"
        )
        write_csv(
            conv_out,
            ["t", "r1", "r2", "simulated", "limit", "gap"],
            ((r["t"], r["r1"], r["r2"], r["simulated"], r["limit"], r["gap"]) for r in report),
        )
        outputs.append(conv_out)
        extra["convergence"] = report
    write_manifest(
        _manifest_path(args, density_out),
        "limit",
        _effective(args),
        outputs,
        started,
        norm_residual=abs(normalization - 1.0),
        extra=extra,
    )
    print(f"wrote {', '.join(map(str, outputs))}; integral of f = {normalization:.9f}")
    return 0


def cmd_compare(args) -> int:
    started = time.perf_counter()
    a, b = read_grid(Path(args.a)), read_grid(Path(args.b))
    d = distribution_distance(a, b)
    print(f"max |P_a - P_b| = {d:.3e}")
    if args.manifest:
        write_manifest(Path(args.manifest), "compare", _effective(args), [], started, None, {"distance": d})
    if args.tol is not None and d > args.tol:
        return 2
    return 0


def _read_config(path: str) -> dict:
    out = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise InvalidParameterError(f"cannot read config {path}: {exc}") from None
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidParameterError(f"{path}:{n}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qwalk2d", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, with_out=True, default_out=None):
        p.add_argument("--gamma", type=parse_angle, default=math.pi / 4, help="coin angle (default pi/4)")
        p.add_argument("--config", help="key=value file; command-line flags take precedence")
        p.add_argument("--manifest", help="manifest path (default: <out>.manifest.json)")
        if with_out:
            p.add_argument("--out", default=default_out, help=f"output CSV (default {default_out})")

    p = sub.add_parser("simulate", help="evolve a walk and write P(x, y)")
    common(p, default_out="simulate.csv")
    p.add_argument("--walk", choices=("alternate", "grover"), default="alternate")
    p.add_argument("--init", default="symmetric")
    p.add_argument("--t", type=int, default=50)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="certify the alternate/Grover equivalence step by step")
    common(p, default_out=None)
    p.add_argument("--xi", type=int, choices=(0, 1), default=0)
    p.add_argument("--kappa", type=int, choices=(0, 1), default=0)
    p.add_argument("--t-max", type=int, default=25)
    p.add_argument("--init", help="override the alternate-walk coin (breaks the pairing)")
    p.add_argument("--tol", type=float, default=VERIFY_TOL)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("entangle", help="x-y negativity for one init or a Bloch sweep")
    common(p, default_out="entangle.csv")
    p.add_argument("--walk", choices=("alternate", "grover"), default="alternate")
    p.add_argument("--init", default="symmetric")
    p.add_argument("--t", type=int, default=10)
    p.add_argument("--theta-points", type=int)
    p.add_argument("--theta", default="pi/2", help="fixed theta when only phi is swept")
    p.add_argument("--phi-points", type=int)
    p.add_argument("--phi", action="append", help="fixed phi value(s) for a theta sweep")
    p.add_argument("--convention", choices=tuple(CONVENTIONS), default=CALIBRATED_CONVENTION)
    p.add_argument("--workers", type=int, default=None, help="default: QWALK2D_WORKERS or CPU count")
    p.add_argument("--calibrate", action="store_true", help="record the t=10 calibration in the manifest")
    p.set_defaults(func=cmd_entangle)

    p = sub.add_parser("limit", help="limit density on [-1, 1]^2 and moment convergence")
    common(p, default_out="limit_density.csv")
    p.add_argument("--init", default="symmetric")
    p.add_argument("--grid-points", type=int, default=201)
    p.add_argument("--quadrature-points", type=int, default=1024)
    p.add_argument("--t-list", default="100,200,400", help="comma-separated; empty string skips")
    p.add_argument("--convergence-out")
    p.set_defaults(func=cmd_limit)

    p = sub.add_parser("compare", help="max |P_a - P_b| between two simulate outputs")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--tol", type=float, help="exit 2 when the distance exceeds this")
    p.add_argument("--manifest")
    p.add_argument("--config")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(argv)
        if getattr(args, "config", None):
            sub = parser._subparsers._group_actions[0].choices[args.command]
            config = _read_config(args.config)
            known = {a.dest for a in sub._actions}
            unknown = sorted(set(config) - known)
            if unknown:
                raise InvalidParameterError(f"unknown config keys: {', '.join(unknown)}")
            sub.set_defaults(**config)
            args = parser.parse_args(argv)
        if args.command == "entangle" and args.workers is None:
            args.workers = worker_count()
        return args.func(args)
    except InvalidParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
