"""Command-line interface.

Subcommands mirror the library: bands, zak, zero-modes, edges, bbc, sweep,
kurasov.  Tabular results go to CSV (period decimal separator, 17 significant
digits) or JSON; --plot renders a PNG figure next to the delimited output.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import boundary, kurasov, spectral, zak
from .coupling import Coupling, coupling_from_dict, make_coupling
from .errors import GdkpError
from .spectral import BandStructure

_FLOAT_FMT = "{:.17g}"


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, float):
        return _FLOAT_FMT.format(x)
    return str(x)


def _csv(header: list[str], rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _plot_path(out: str | None) -> str:
    if not out:
        raise ValueError("--plot requires --out (the figure is written alongside it)")
    stem = out.rsplit(".", 1)[0] if "." in out.rsplit("/", 1)[-1] else out
    return stem + ".png"


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--mass", type=float, default=None, help="particle mass (default 1.0)")
    parser.add_argument("--format", choices=("csv", "json"), default=None, help="output format")
    parser.add_argument("--out", default=None, help="output file (default stdout)")
    parser.add_argument("--workers", type=int, default=None, help="worker processes for sweeps")
    parser.add_argument("--tol", type=float, default=None, help="symmetry/permeability tolerance")
    parser.add_argument("--config", default=None, help="JSON config file merged under explicit flags")
    parser.add_argument("--plot", action="store_true", help="also render a PNG next to --out")


def _add_coupling_opts(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--family", choices=("D", "BDI", "AIII"), default=None)
    parser.add_argument("--theta", type=float, default=None)
    parser.add_argument("--m2", type=float, default=None)
    parser.add_argument("--eta", type=float, default=None)
    parser.add_argument("--m", type=float, nargs=4, default=None, metavar=("M0", "M1", "M2", "M3"))


def _merge_config(args: argparse.Namespace) -> None:
    """Fill unset options from the JSON config file; explicit flags win."""
    if not getattr(args, "config", None):
        return
    with open(args.config, encoding="utf-8") as fh:
        cfg = json.load(fh)
    for key, value in cfg.items():
        key = key.replace("-", "_")
        if hasattr(args, key) and getattr(args, key) is None:
            setattr(args, key, value)


def _resolve_coupling(args: argparse.Namespace) -> Coupling:
    if args.family is not None:
        if args.theta is None:
            raise ValueError("--theta is required with --family")
        return coupling_from_dict(
            {"family": args.family, "theta": args.theta, "m2": args.m2 or 0.0}
        )
    if args.eta is not None and args.m is not None:
        return make_coupling(args.eta, args.m)
    raise ValueError("specify a coupling: --family/--theta or --eta/--m")


def _coupling_meta(args: argparse.Namespace, c: Coupling) -> dict:
    meta = {"eta": c.eta, "m": list(c.m)}
    if args.family is not None:
        meta["family"] = args.family
        meta["theta"] = args.theta
        if args.m2 is not None:
            meta["m2"] = args.m2
    return meta


def cmd_bands(args) -> int:
    c = _resolve_coupling(args)
    mass = args.mass if args.mass is not None else 1.0
    window = tuple(args.window) if args.window else None
    bs = spectral.band_structure(
        c,
        mass,
        k_count=args.k,
        eps_window=window,
        eps_scan=args.eps_scan,
        n_max=args.n_max,
    )
    if (args.format or "csv") == "json":
        payload = bs.to_dict()
        payload["coupling"] = _coupling_meta(args, c)
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        _emit(_csv(["k", "n", "eps"], bs.rows()), args.out)
    if args.plot:
        from . import plots

        plots.plot_band_structure(bs, _plot_path(args.out))
    return 0


def cmd_zak(args) -> int:
    c = _resolve_coupling(args)
    mass = args.mass if args.mass is not None else 1.0
    result = zak.zak_phase(c, mass, args.band, args.M)
    payload = result.to_dict()
    if args.d is not None:
        payload["d"] = args.d
        payload["translated_phase"] = zak.translated_zak(result, args.d)
    if (args.format or "json") == "json":
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        header = list(payload)
        _emit(_csv(header, [[payload[k] for k in header]]), args.out)
    return 0


def cmd_zero_modes(args) -> int:
    c = _resolve_coupling(args)
    mass = args.mass if args.mass is not None else 1.0
    tol = args.tol if args.tol is not None else 1e-12
    report = spectral.zero_modes(c, mass, tol=tol)
    payload = {
        "count": report.count,
        "momenta": list(report.momenta),
        "G": report.g_value,
        "flat_zero_band": report.flat_zero_band,
    }
    if (args.format or "json") == "json":
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        _emit(
            _csv(
                ["count", "momenta", "G", "flat_zero_band"],
                [[report.count, ";".join(_fmt(k) for k in report.momenta), report.g_value, report.flat_zero_band]],
            ),
            args.out,
        )
    return 0


def _resolve_gaps(bs: BandStructure, spec_str: str) -> list:
    gaps = []
    for token in spec_str.split(","):
        token = token.strip()
        if token == "central":
            gaps.append(bs.central_gap())
        elif token == "all":
            gaps.extend(bs.gaps)
        else:
            n = int(token)
            g = bs.gap_above(n) if n > 0 else bs.gap_below(n)
            if g is None:
                raise GdkpError(f"gap adjacent to band {n} not resolved")
            gaps.append(g)
    seen, unique = set(), []
    for g in gaps:
        if (g.below, g.above) not in seen:
            seen.add((g.below, g.above))
            unique.append(g)
    return unique


def cmd_edges(args) -> int:
    c = _resolve_coupling(args)
    mass = args.mass if args.mass is not None else 1.0
    bs = spectral.band_structure(c, mass, k_count=48, n_max=args.n_max)
    gaps = _resolve_gaps(bs, args.gaps)
    rows = []
    gap_states = []
    for g in gaps:
        found = boundary.edge_states(c, mass, args.d, args.alpha, g)
        gap_states.append(((g.lo, g.hi), [s.eps for s in found if not s.touching]))
        for s in found:
            rows.append([g.below, g.above, s.eps, s.decay, s.touching])
    if (args.format or "csv") == "json":
        payload = {
            "d": args.d,
            "alpha": args.alpha,
            "states": [
                {"gap_below": r[0], "gap_above": r[1], "eps": r[2], "decay": r[3], "touching": bool(r[4])}
                for r in rows
            ],
        }
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        _emit(_csv(["gap_below", "gap_above", "eps", "decay", "touching"], rows), args.out)
    if args.plot:
        from . import plots

        plots.plot_edge_spectrum(gap_states, _plot_path(args.out))
    return 0


def cmd_bbc(args) -> int:
    mass = args.mass if args.mass is not None else 1.0
    if args.family is None or args.theta is None:
        raise ValueError("bbc requires --family and --theta")
    verdict = boundary.bbc_verdict(
        args.family,
        args.theta,
        args.m2 or 0.0,
        mass=mass,
        band=args.band,
        d=args.d,
        alpha=args.alpha,
        m_points=args.M,
    )
    payload = verdict.to_dict()
    if (args.format or "json") == "json":
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        header = list(payload)
        _emit(_csv(header, [[payload[k] for k in header]]), args.out)
    return 0


def cmd_kurasov(args) -> int:
    tol = args.tol if args.tol is not None else kurasov.BRANCH_TOL
    if args.from_g is not None:
        c = kurasov.strengths_to_coupling(args.from_g, tol=tol)
        payload = {"coupling": c.to_dict(), "g": list(args.from_g)}
    else:
        c = _resolve_coupling(args)
        s = kurasov.coupling_to_strengths(c, tol=tol)
        payload = {"coupling": c.to_dict(), "strengths": s.to_dict()}
    if (args.format or "json") == "json":
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        if "strengths" in payload and payload["strengths"].get("g") is not None:
            _emit(_csv(["g0", "g1", "g2", "g3"], [payload["strengths"]["g"]]), args.out)
        elif "strengths" in payload:
            _emit("singular\n1\n", args.out)
        else:
            _emit(_csv(["eta", "m0", "m1", "m2", "m3"], [[c.eta, *c.m]]), args.out)
    return 0


def _zak_task(payload: tuple) -> list[dict]:
    family, theta, m2, mass, bands, m_points, margin = payload
    grid = [(theta, m2)] if family == "AIII" else [theta]
    return zak.zak_sweep(family, grid, mass, bands, m_points, margin=margin)


def _edge_task(payload: tuple) -> list[dict]:
    family, theta, m2, mass, axis, axis_values, d, alpha, gap_count = payload
    return boundary.edge_sweep(
        family,
        [theta],
        mass,
        axis=axis,
        axis_values=axis_values,
        d=d,
        alpha=alpha,
        m2=m2,
        gap_count=gap_count,
    )


def _run_tasks(task_fn, payloads: list[tuple], workers: int) -> list[dict]:
    if workers <= 1:
        chunks = [task_fn(p) for p in payloads]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(task_fn, payloads))
    return [row for chunk in chunks for row in chunk]


def _theta_grid(args) -> list[float]:
    if args.thetas:
        return [float(t) for t in args.thetas]
    return list(np.linspace(args.theta_min, args.theta_max, args.theta_count))


def cmd_sweep(args) -> int:
    mass = args.mass if args.mass is not None else 1.0
    workers = args.workers if args.workers is not None else 1
    family = args.family or "BDI"
    thetas = _theta_grid(args)
    m2_values = [args.m2 or 0.0]
    if family == "AIII" and args.m2_count > 1:
        m2_values = list(np.linspace(args.m2_min, args.m2_max, args.m2_count))

    if args.kind == "zak":
        bands = [int(b) for b in args.bands]
        payloads = [
            (family, float(t), float(m2), mass, bands, args.M, args.margin)
            for m2 in m2_values
            for t in thetas
        ]
        rows = _run_tasks(_zak_task, payloads, workers)
        header = ["family", "theta", "m2", "band", "phase", "convergence", "flagged", "error"]
    else:
        axis_values = list(np.linspace(args.axis_min, args.axis_max, args.axis_count))
        payloads = [
            (family, float(t), float(m2), mass, args.axis, axis_values, args.d, args.alpha, args.gap_count)
            for m2 in m2_values
            for t in thetas
        ]
        rows = _run_tasks(_edge_task, payloads, workers)
        header = [
            "family", "theta", "m2", "d", "alpha",
            "gap_below", "gap_above", "count", "touching", "flagged", "error",
        ]

    if (args.format or "csv") == "json":
        _emit(json.dumps({"rows": rows}, indent=2) + "\n", args.out)
    else:
        _emit(_csv(header, ([r[h] for h in header] for r in rows)), args.out)
    if args.plot:
        from . import plots

        if args.kind == "zak":
            plots.plot_zak_sweep(rows, _plot_path(args.out))
        else:
            plots.plot_edge_sweep(rows, _plot_path(args.out), args.axis)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gdkp",
        description="Band structure, Zak phases, zero modes, and edge states of a "
        "1D Dirac chain with U(2) point interactions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bands", help="solve the band structure on a k grid")
    _add_common(p)
    _add_coupling_opts(p)
    p.add_argument("--k", type=int, default=201, help="number of k points in [-pi, pi)")
    p.add_argument("--window", type=float, nargs=2, default=None, metavar=("LO", "HI"))
    p.add_argument("--eps-scan", type=int, default=600)
    p.add_argument("--n-max", type=int, default=3)
    p.set_defaults(func=cmd_bands)

    p = sub.add_parser("zak", help="Zak phase of one isolated band")
    _add_common(p)
    _add_coupling_opts(p)
    p.add_argument("--band", type=int, required=True)
    p.add_argument("--M", type=int, default=2048, help="Brillouin-zone discretization")
    p.add_argument("--d", type=float, default=None, help="also report the translated-cell phase")
    p.set_defaults(func=cmd_zak)

    p = sub.add_parser("zero-modes", help="classify zero-energy fiber eigenvalues")
    _add_common(p)
    _add_coupling_opts(p)
    p.set_defaults(func=cmd_zero_modes)

    p = sub.add_parser("edges", help="edge states of the truncated chain")
    _add_common(p)
    _add_coupling_opts(p)
    p.add_argument("--d", type=float, required=True, help="edge-to-junction distance in [0, 1)")
    p.add_argument("--alpha", type=float, required=True, help="boundary angle in [-pi, pi)")
    p.add_argument("--gaps", default="central", help="comma list: central, all, or band labels")
    p.add_argument("--n-max", type=int, default=3)
    p.set_defaults(func=cmd_edges)

    p = sub.add_parser("bbc", help="bulk-boundary correspondence verdict")
    _add_common(p)
    _add_coupling_opts(p)
    p.add_argument("--band", type=int, required=True)
    p.add_argument("--d", type=float, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--M", type=int, default=2048)
    p.set_defaults(func=cmd_bbc)

    p = sub.add_parser("sweep", help="parameter sweeps producing phase-diagram tables")
    _add_common(p)
    p.add_argument("kind", choices=("zak", "edges"))
    p.add_argument("--family", choices=("D", "BDI", "AIII"), default="BDI")
    p.add_argument("--thetas", type=float, nargs="+", default=None)
    p.add_argument("--theta-min", type=float, default=-math.pi)
    p.add_argument("--theta-max", type=float, default=math.pi - 1e-9)
    p.add_argument("--theta-count", type=int, default=25)
    p.add_argument("--m2", type=float, default=None)
    p.add_argument("--m2-min", type=float, default=-1.0)
    p.add_argument("--m2-max", type=float, default=1.0)
    p.add_argument("--m2-count", type=int, default=1)
    p.add_argument("--bands", type=int, nargs="+", default=[1])
    p.add_argument("--M", type=int, default=2048)
    p.add_argument("--margin", type=float, default=0.05)
    p.add_argument("--axis", choices=("alpha", "d"), default="alpha")
    p.add_argument("--axis-min", type=float, default=-math.pi + 1e-9)
    p.add_argument("--axis-max", type=float, default=math.pi - 1e-9)
    p.add_argument("--axis-count", type=int, default=13)
    p.add_argument("--d", type=float, default=0.5)
    p.add_argument("--alpha", type=float, default=math.pi / 2)
    p.add_argument("--gap-count", type=int, default=3)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("kurasov", help="convert between couplings and delta strengths")
    _add_common(p)
    _add_coupling_opts(p)
    p.add_argument("--from-g", type=float, nargs=4, default=None, metavar=("G0", "G1", "G2", "G3"))
    p.set_defaults(func=cmd_kurasov)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _merge_config(args)
        return args.func(args)
    except (GdkpError, ValueError, OSError) as err:
        sys.stderr.write(
            json.dumps({"error": str(err), "type": type(err).__name__}) + "\n"
        )
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
