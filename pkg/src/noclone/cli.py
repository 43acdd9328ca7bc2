"""Command-line front end: no-cloning bound reports, critical-squeezing
queries, figure-style sweep datasets (CSV + JSON sidecar), and
non-Gaussianity scatter tables.

All commands are deterministic given (config, seed); CSV output is
byte-identical across re-runs. Exit codes: 0 success, 2 usage error,
3 solver failure, 4 truncation/accuracy failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from .cloner import (FockSolverParams, GridSolverParams, classical_bound,
                     gaussian_ncb, ncb_ultimate, truncation_sweep,
                     _fock_index_of)
from .errors import (AccuracyError, ConvergenceError, DomainError,
                     GridExtentError, NocloneError, PreconditionError,
                     TruncationError, UnreachableBoundError)
from .grids import Grid
from .iteration import (ansatz, default_z_edges, optimal_ansatz_r,
                        power_iterate, pz_profile)
from .qng import (PURE_FAMILIES, scatter_mixed, scatter_qng_vs_ncb)
from .states import (State, make_cat, make_coherent_mixture, make_fock,
                     make_superposition, purity, sample_random_pure,
                     state_from_json)
from .teleport import (TMSVResource, block_comparison, critical_squeezing,
                       pnes_frontier, tmsv_fidelity)

FIGURE_IDS = ("fig2", "fig3a", "fig3b", "fig4a", "fig4b",
              "s1", "s2", "s3", "s4", "s5", "s6")


class UsageError(NocloneError):
    """Malformed command line, spec string, or configuration."""


# ---------------------------------------------------------------------------
# configuration

@dataclass
class RunConfig:
    solver: str = "auto"          # auto | fock | grid
    ntrunc: int = 120
    grid_size: int = 256
    grid_extent: float = 8.0
    tol: float = 1e-8
    seed: int = 7
    samples: int = 0              # 0 = per-figure default
    outdir: str = "out"
    jobs: int = 1
    paper_scale: bool = False
    explicit: set = field(default_factory=set)

    def set(self, key: str, raw: str) -> None:
        caster = _CONFIG_CAST.get(key)
        if caster is None:
            raise UsageError(f"unknown config key {key!r}; known keys: "
                             + ", ".join(sorted(_CONFIG_CAST)))
        try:
            setattr(self, key, caster(raw))
        except ValueError as e:
            raise UsageError(f"bad value for {key!r}: {e}") from e
        self.explicit.add(key)

    def echo(self) -> str:
        keys = [f.name for f in fields(self) if f.name != "explicit"]
        return "".join(f"{k}={getattr(self, k)}\n" for k in sorted(keys))


def _parse_bool(raw: str) -> bool:
    low = raw.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {raw!r}")


_CONFIG_CAST = {
    "solver": str,
    "ntrunc": int,
    "grid_size": int,
    "grid_extent": float,
    "tol": float,
    "seed": int,
    "samples": int,
    "outdir": str,
    "jobs": int,
    "paper_scale": _parse_bool,
}


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Layered resolution: defaults < config file < NOCLONE_ environment
    variables < command-line flags. Unknown keys are rejected."""
    cfg = RunConfig()
    if args.config is not None:
        path = Path(args.config)
        if not path.is_file():
            raise UsageError(f"config file not found: {path}")
        for lineno, line in enumerate(path.read_text().splitlines(), 1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise UsageError(
                    f"{path}:{lineno}: expected key=value, got {stripped!r}")
            key, _, value = stripped.partition("=")
            cfg.set(key.strip(), value.strip())
    for name, value in sorted(os.environ.items()):
        if name.startswith("NOCLONE_"):
            cfg.set(name[len("NOCLONE_"):].lower(), value)
    for key in _CONFIG_CAST:
        flag = getattr(args, key, None)
        if flag is not None and flag is not False:
            cfg.set(key, str(flag))
    return cfg


def add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", default=None, metavar="PATH",
                        help="key=value config file")
    parser.add_argument("--solver", choices=("auto", "fock", "grid"))
    parser.add_argument("--ntrunc", type=int, metavar="N")
    parser.add_argument("--grid-size", dest="grid_size", type=int, metavar="G")
    parser.add_argument("--grid-extent", dest="grid_extent", type=float,
                        metavar="L")
    parser.add_argument("--tol", type=float)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--samples", type=int)
    parser.add_argument("--outdir", default=None)
    parser.add_argument("--jobs", type=int)
    parser.add_argument("--paper-scale", dest="paper_scale",
                        action="store_true", default=False)


# ---------------------------------------------------------------------------
# input specs

def parse_spec(spec: str) -> tuple[State, str]:
    """Input state from a spec string: fock:n | superposition:c0,c1,c2 |
    cat:alpha,gamma | random:seed | file:path. Returns (state, descriptor)."""
    kind, sep, arg = spec.partition(":")
    if not sep:
        raise UsageError(f"malformed input spec {spec!r}; expected kind:args")
    try:
        if kind == "fock":
            return make_fock(int(arg)), spec
        if kind == "superposition":
            parts = [complex(v) for v in arg.split(",")]
            if len(parts) != 3:
                raise UsageError(
                    "superposition spec needs exactly three amplitudes")
            return make_superposition(*parts), spec
        if kind == "cat":
            parts = arg.split(",")
            if len(parts) != 2:
                raise UsageError("cat spec needs alpha,gamma")
            alpha, gamma = float(parts[0]), int(parts[1])
            if gamma == 0:
                return make_coherent_mixture(alpha), spec
            return make_cat(alpha, gamma), spec
        if kind == "random":
            return sample_random_pure(3, int(arg)), spec
        if kind == "file":
            path = Path(arg)
            if not path.is_file():
                raise UsageError(f"state file not found: {path}")
            return state_from_json(json.loads(path.read_text())), spec
    except (ValueError, DomainError, PreconditionError) as e:
        raise UsageError(f"malformed input spec {spec!r}: {e}") from e
    raise UsageError(f"unknown input kind {kind!r}; expected fock, "
                     "superposition, cat, random, or file")


# ---------------------------------------------------------------------------
# output plumbing

def _fmt(value) -> str:
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return format(value, ".12g")
    return str(value)


def write_csv(path: Path, header: list[str], rows: list[tuple]) -> None:
    lines = [",".join(header)]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    path.write_text("\r\n".join(lines) + "\r\n")


def write_outputs(cfg: RunConfig, name: str, header: list[str],
                  rows: list[tuple], meta: dict) -> Path:
    outdir = Path(cfg.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "config.txt").write_text(cfg.echo())
    csv_path = outdir / f"{name}.csv"
    write_csv(csv_path, header, rows)
    sidecar = {"dataset": name, "columns": header,
               "rows": len(rows), "config": _config_dict(cfg)}
    sidecar.update(meta)
    (outdir / f"{name}.json").write_text(
        json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
    return csv_path


def _config_dict(cfg: RunConfig) -> dict:
    return {f.name: getattr(cfg, f.name) for f in fields(cfg)
            if f.name != "explicit"}


def _report(cfg: RunConfig, name: str, doc: dict) -> None:
    outdir = Path(cfg.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "config.txt").write_text(cfg.echo())
    text = json.dumps(doc, indent=2, sort_keys=True)
    (outdir / f"{name}.json").write_text(text + "\n")
    print(text)


def _pmap(fn, items, jobs: int) -> list:
    if jobs <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# solver dispatch

def _ultimate(state: State, cfg: RunConfig):
    solver = cfg.solver
    if solver == "auto":
        solver = "fock" if _fock_index_of(state) is not None else "grid"
    if solver == "fock":
        params = FockSolverParams(n_trunc=_ntrunc(cfg), tol=cfg.tol)
    else:
        params = GridSolverParams(size=cfg.grid_size, extent=cfg.grid_extent,
                                  tol=cfg.tol)
    return ncb_ultimate(state, solver=solver, params=params), solver


def _ntrunc(cfg: RunConfig) -> int:
    if cfg.paper_scale and "ntrunc" not in cfg.explicit:
        return 300
    return cfg.ntrunc


def _scatter_grid(cfg: RunConfig, size: int, extent: float) -> GridSolverParams:
    """Per-figure grid default, honoring explicit user overrides."""
    if "grid_size" in cfg.explicit:
        size = cfg.grid_size
    if "grid_extent" in cfg.explicit:
        extent = cfg.grid_extent
    return GridSolverParams(size=size, extent=extent, tol=cfg.tol)


def _sample_count(cfg: RunConfig, desk: int, paper: int) -> int:
    if cfg.samples > 0:
        return cfg.samples
    return paper if cfg.paper_scale else desk


# ---------------------------------------------------------------------------
# commands

def cmd_bounds(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    state, descriptor = parse_spec(args.spec)
    res, solver = _ultimate(state, cfg)
    doc = {
        "input": descriptor,
        "classical": classical_bound(state).bound,
        "gaussian": gaussian_ncb(state),
        "ultimate": res.bound,
        "purity": purity(state),
        "solver": solver,
        "diagnostics": {"iterations": res.iterations,
                        "residual": res.residual,
                        "params": res.params},
    }
    _report(cfg, "bounds", doc)
    return 0


def cmd_teleport(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    state, descriptor = parse_spec(args.spec)
    choice = args.bound
    if choice == "classical":
        bound = classical_bound(state).bound
    elif choice == "gaussian":
        bound = gaussian_ncb(state)
    elif choice == "ultimate":
        bound = _ultimate(state, cfg)[0].bound
    else:
        try:
            bound = float(choice)
        except ValueError:
            raise UsageError(
                f"--bound must be classical, gaussian, ultimate, or a "
                f"number; got {choice!r}") from None
    doc = {"input": descriptor, "bound_choice": choice, "bound": bound}
    try:
        r_c = critical_squeezing(state, bound)
        doc.update(reachable=True, critical_squeezing=r_c,
                   fidelity_at_r_c=tmsv_fidelity(state, r_c))
    except UnreachableBoundError as e:
        doc.update(reachable=False, critical_squeezing=None,
                   fidelity_supremum=e.supremum)
    _report(cfg, "teleport", doc)
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    figure = args.figure
    if figure not in FIGURE_IDS:
        raise UsageError(f"unknown figure id {figure!r}; expected one of "
                         + ", ".join(FIGURE_IDS))
    path = _SWEEPS[figure](cfg, figure)
    print(path)
    return 0


def _sweep_fig2(cfg: RunConfig, name: str) -> Path:
    """Critical squeezing to reach each bound, per Fock input."""
    def row(n: int):
        state = make_fock(n)
        bounds = {"classical": classical_bound(state).bound,
                  "gaussian": gaussian_ncb(state),
                  "ultimate": _ultimate(state, cfg)[0].bound}
        return (n, bounds["classical"], bounds["gaussian"], bounds["ultimate"],
                critical_squeezing(state, bounds["classical"]),
                critical_squeezing(state, bounds["gaussian"]),
                critical_squeezing(state, bounds["ultimate"]))

    rows = _pmap(row, range(4), cfg.jobs)
    return write_outputs(cfg, name,
                         ["n", "bound_classical", "bound_gaussian",
                          "bound_ultimate", "rc_classical", "rc_gaussian",
                          "rc_ultimate"], rows, {})


def _scatter_rows(records) -> list[tuple]:
    return [(r.family, r.param, r.delta, r.wn, r.ncb, r.r_c, r.error)
            for r in records]


_SCATTER_HEADER = ["family", "param", "delta", "wn", "ncb", "r_c", "error"]


def _sweep_scatter(cfg: RunConfig, name: str) -> Path:
    """Pure-state scatter behind the delta/W_N vs NCB/r_c panels."""
    count = _sample_count(cfg, desk=6, paper=25)
    grid = _scatter_grid(cfg, size=384, extent=12.0)
    records = scatter_qng_vs_ncb(PURE_FAMILIES, count, cfg.seed, grid)
    return write_outputs(cfg, name, _SCATTER_HEADER, _scatter_rows(records),
                         {"families": list(PURE_FAMILIES),
                          "samples_per_family": count})


def _sweep_fig4a(cfg: RunConfig, name: str) -> Path:
    count = _sample_count(cfg, desk=9, paper=21)
    alphas = np.linspace(0.05, 2.0, count)
    grid = _scatter_grid(cfg, size=384, extent=12.0)

    def row(alpha: float):
        def r_c(state):
            bound = ncb_ultimate(state, solver="grid", params=grid).bound
            try:
                return critical_squeezing(state, bound)
            except UnreachableBoundError:
                return math.nan
        return (alpha, r_c(make_cat(alpha, 1)),
                r_c(make_coherent_mixture(alpha)))

    rows = _pmap(row, [float(a) for a in alphas], cfg.jobs)
    return write_outputs(cfg, name, ["alpha", "rc_even_cat", "rc_mixture"],
                         rows, {})


def _sweep_fig4b(cfg: RunConfig, name: str) -> Path:
    count = _sample_count(cfg, desk=40, paper=200)
    grid = _scatter_grid(cfg, size=256, extent=12.0)
    records, corr = scatter_mixed(count, cfg.seed, dim=3, grid_params=grid)
    return write_outputs(cfg, name, _SCATTER_HEADER, _scatter_rows(records),
                         {"spearman_wn_rc": corr, "dim": 3})


def _sweep_s1(cfg: RunConfig, name: str) -> Path:
    top = _ntrunc(cfg)
    truncations = [N for N in (10, 20, 40, 60, 80, 120, 200, 300) if N <= top]
    if truncations[-1] != top:
        truncations.append(top)

    def rows_for(n: int):
        return [(n, N, bound)
                for N, bound in truncation_sweep(make_fock(n), truncations)]

    rows = [r for chunk in _pmap(rows_for, range(4), cfg.jobs) for r in chunk]
    return write_outputs(cfg, name, ["n", "ntrunc", "bound"], rows,
                         {"truncations": truncations})


def _iteration_grid(cfg: RunConfig) -> Grid:
    # 768 x 768 over [-24, 24]: dense enough that the periodized dual
    # lattice does not inflate the n = 2 Rayleigh quotient
    size = cfg.grid_size if "grid_size" in cfg.explicit else 768
    extent = cfg.grid_extent if "grid_extent" in cfg.explicit else 24.0
    return Grid(size=size, extent=extent)


def _sweep_s2(cfg: RunConfig, name: str) -> Path:
    """Power-iteration fidelity traces from the ansatz and vacuum starts."""
    from .cloner import fock_clone_kernel
    grid = _iteration_grid(cfg)
    steps = 7
    rows, meta = [], {}
    for n in (1, 2):
        kernel = fock_clone_kernel(n, grid)
        r_opt = optimal_ansatz_r(n)
        meta[f"optimal_r_n{n}"] = r_opt
        tr_a = power_iterate(ansatz(r_opt, grid).wavefunction, kernel,
                             steps).fidelity_trace
        tr_v = power_iterate(ansatz(0.0, grid).wavefunction, kernel,
                             steps).fidelity_trace
        rows += [(n, k + 1, tr_a[k], tr_v[k]) for k in range(steps)]
    return write_outputs(cfg, name, ["n", "step", "rq_ansatz", "rq_vacuum"],
                         rows, meta)


def _sweep_s3(cfg: RunConfig, name: str) -> Path:
    """Radial profile P(z) of the converged optimal-input eigenvector."""
    from .cloner import fock_clone_kernel
    grid = _iteration_grid(cfg)
    edges = default_z_edges(z_max=60.0, dz=0.02)
    mids = 0.5 * (edges[:-1] + edges[1:])
    rows = []
    for n in (1, 2):
        kernel = fock_clone_kernel(n, grid)
        psi = power_iterate(ansatz(optimal_ansatz_r(n), grid).wavefunction,
                            kernel, 7).final_state
        pz = pz_profile(psi, edges)
        rows += [(n, float(z), float(v)) for z, v in zip(mids, pz)]
    return write_outputs(cfg, name, ["n", "z", "pz"], rows,
                         {"dz": 0.02, "z_max": 60.0})


def _frontier_imax(cfg: RunConfig) -> int:
    if "ntrunc" in cfg.explicit:
        return cfg.ntrunc
    return 300 if cfg.paper_scale else 150


def _sweep_s5(cfg: RunConfig, name: str) -> Path:
    """Optimal fidelity vs mean photon number per photon-number offset d."""
    i_max = _frontier_imax(cfg)
    n_av_grid = np.linspace(0.0, 2.0, 41)
    rows = []
    for n in (1, 2):
        curves = block_comparison(n, [0, 1, 2], n_av_grid, i_max=i_max)
        rows += [(n, float(nav), float(curves[0][k]), float(curves[1][k]),
                  float(curves[2][k])) for k, nav in enumerate(n_av_grid)]
    return write_outputs(cfg, name, ["n", "n_av", "f_d0", "f_d1", "f_d2"],
                         rows, {"i_max": i_max})


def _sweep_s6(cfg: RunConfig, name: str) -> Path:
    """Optimal-resource frontier against the TMSV curve, per Fock input."""
    i_max = _frontier_imax(cfg)
    rows, meta = [], {"i_max": i_max}
    for n in (0, 1, 2):
        nav, fid = pnes_frontier(n, i_max=i_max)
        keep = nav <= 4.0
        for v, f in zip(nav[keep], fid[keep]):
            r = math.asinh(math.sqrt(v))
            rows.append((n, float(v), float(f),
                         tmsv_fidelity(make_fock(n), r)))
        res = ncb_ultimate(make_fock(n),
                           params=FockSolverParams(n_trunc=_ntrunc(cfg)))
        meta[f"ncb_n{n}"] = res.bound
    return write_outputs(cfg, name, ["n", "n_av", "f_pnes", "f_tmsv"],
                         rows, meta)


_SWEEPS = {
    "fig2": _sweep_fig2,
    "fig3a": _sweep_scatter,
    "fig3b": _sweep_scatter,
    "fig4a": _sweep_fig4a,
    "fig4b": _sweep_fig4b,
    "s1": _sweep_s1,
    "s2": _sweep_s2,
    "s3": _sweep_s3,
    "s4": _sweep_scatter,
    "s5": _sweep_s5,
    "s6": _sweep_s6,
}


def cmd_qng(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    kind, sep, arg = args.families.partition(":")
    if kind == "pure":
        families = arg.split(",") if sep and arg else list(PURE_FAMILIES)
        unknown = [f for f in families if f not in PURE_FAMILIES]
        if unknown:
            raise UsageError(f"unknown families {unknown}; expected a subset "
                             f"of {', '.join(PURE_FAMILIES)}")
        count = _sample_count(cfg, desk=6, paper=25)
        grid = _scatter_grid(cfg, size=384, extent=12.0)
        records = scatter_qng_vs_ncb(families, count, cfg.seed, grid)
        meta = {"families": families, "samples_per_family": count}
    elif kind == "mixed":
        dim = int(arg) if sep and arg else 3
        if not 2 <= dim <= 6:
            raise UsageError(f"mixed-state dimension must be in [2, 6], "
                             f"got {dim}")
        count = _sample_count(cfg, desk=40, paper=200)
        grid = _scatter_grid(cfg, size=256, extent=12.0)
        records, corr = scatter_mixed(count, cfg.seed, dim=dim,
                                      grid_params=grid)
        meta = {"spearman_wn_rc": corr, "dim": dim}
    else:
        raise UsageError(f"malformed family spec {args.families!r}; expected "
                         "pure[:fam1,fam2,...] or mixed[:dim]")
    path = write_outputs(cfg, "qng", _SCATTER_HEADER, _scatter_rows(records),
                         meta)
    print(path)
    return 0


# ---------------------------------------------------------------------------
# entry point

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="noclone",
        description="No-cloning bounds, teleportation thresholds, and "
                    "non-Gaussianity datasets for continuous-variable inputs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_bounds = sub.add_parser("bounds", help="classical / Gaussian / ultimate "
                              "no-cloning bounds for one input state")
    p_bounds.add_argument("spec", help="fock:n | superposition:c0,c1,c2 | "
                          "cat:alpha,gamma | random:seed | file:path")
    add_config_flags(p_bounds)
    p_bounds.set_defaults(func=cmd_bounds)

    p_tele = sub.add_parser("teleport", help="critical TMSV squeezing to "
                            "reach a fidelity bound")
    p_tele.add_argument("spec")
    p_tele.add_argument("--bound", default="ultimate",
                        help="classical | gaussian | ultimate | <number>")
    add_config_flags(p_tele)
    p_tele.set_defaults(func=cmd_teleport)

    p_sweep = sub.add_parser("sweep", help="figure-style dataset (CSV + "
                             "JSON sidecar)")
    p_sweep.add_argument("figure", help="one of " + ", ".join(FIGURE_IDS))
    add_config_flags(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep)

    p_qng = sub.add_parser("qng", help="non-Gaussianity scatter dataset")
    p_qng.add_argument("families", help="pure[:fam1,fam2,...] | mixed[:dim]")
    add_config_flags(p_qng)
    p_qng.set_defaults(func=cmd_qng)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, DomainError, PreconditionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ConvergenceError as e:
        print(f"solver failure: {e} (residual={e.residual!r})",
              file=sys.stderr)
        return 3
    except (TruncationError, AccuracyError, GridExtentError) as e:
        print(f"accuracy failure: {e}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
