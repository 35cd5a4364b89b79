"""Command-line front end: parameter scans, resonance tables, limits, histograms, simulation.

Every data-producing subcommand writes a delimited table (CSV by default,
JSON with --format json) and, unless --no-plot is given, renders a
matplotlib figure next to it (same stem, .png).  Outputs are deterministic
for fixed inputs and seed; floats are written with shortest round-trip
precision.

Configuration precedence: command-line flags > config file (--config,
flat KEY=VALUE lines, # comments) > built-in defaults.

Exit codes: 0 success, 1 runtime failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import asymptotics, observables, response, simulate
from .chain_core import (
    Band,
    ChainParams,
    ForceSpec,
    band_edges,
    classify,
    inverse_dispersion,
    spectrum,
)
from .errors import ChainworkError, ResonanceError

__all__ = ["main"]


class UsageError(Exception):
    pass


DEFAULTS = {
    "n": 50,
    "omega0": 1.0,
    "gamma_minus": 1.0,
    "gamma_plus": 1.0,
    "t_minus": 0.0,
    "t_plus": 0.0,
    "force_amp": 1.0,
    "omega": None,
    "omega_grid": None,
    "modes": None,
    "out": None,
    "format": "csv",
    "seed": 0,
    "threads": 1,
    "no_plot": False,
    # young
    "r": None,
    "u_samples": 4096,
    "bins": 64,
    # simulate
    "samples_per_period": 32,
    "burn_in": 200,
    "periods": 2000,
    "trajectories": 1,
    "method": "exact",
}


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=str, default=None, help="flat KEY=VALUE config file")
    parser.add_argument("--n", type=int)
    parser.add_argument("--omega0", type=float)
    parser.add_argument("--gamma-minus", dest="gamma_minus", type=float)
    parser.add_argument("--gamma-plus", dest="gamma_plus", type=float)
    parser.add_argument("--t-minus", dest="t_minus", type=float)
    parser.add_argument("--t-plus", dest="t_plus", type=float)
    parser.add_argument("--force-amp", dest="force_amp", type=float)
    parser.add_argument("--omega", type=float, help="single driving frequency")
    parser.add_argument(
        "--omega-grid",
        dest="omega_grid",
        type=str,
        help="MIN:MAX:COUNT or comma-separated explicit list",
    )
    parser.add_argument("--modes", type=str, help="force harmonics as L:AMP[,L:AMP...]")
    parser.add_argument("--out", type=str, help="output data file")
    parser.add_argument("--format", choices=("csv", "json"))
    parser.add_argument("--seed", type=int)
    parser.add_argument("--threads", type=int)
    parser.add_argument("--no-plot", dest="no_plot", action="store_const", const=True)


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    out = {}
    text = Path(path).read_text()
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config line not KEY=VALUE: {raw!r}")
        key, val = line.split("=", 1)
        out[key.strip().replace("-", "_")] = val.strip()
    return out


_CONFIG_TYPES = {
    "n": int,
    "seed": int,
    "threads": int,
    "u_samples": int,
    "bins": int,
    "samples_per_period": int,
    "burn_in": int,
    "periods": int,
    "trajectories": int,
    "no_plot": lambda s: s.lower() in ("1", "true", "yes"),
}


def _resolve(args: argparse.Namespace) -> dict:
    cfg = _load_config(getattr(args, "config", None))
    opts = {}
    for key, default in DEFAULTS.items():
        cli_val = getattr(args, key, None)
        if cli_val is not None:
            opts[key] = cli_val
        elif key in cfg:
            conv = _CONFIG_TYPES.get(key, float if isinstance(default, float) else str)
            opts[key] = conv(cfg[key])
        else:
            opts[key] = default
    return opts


def _chain_params(opts: dict) -> ChainParams:
    try:
        return ChainParams(
            n=opts["n"],
            omega0=opts["omega0"],
            gamma_minus=opts["gamma_minus"],
            gamma_plus=opts["gamma_plus"],
            T_minus=opts["t_minus"],
            T_plus=opts["t_plus"],
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _force_spec(opts: dict) -> ForceSpec:
    omega = opts["omega"]
    if omega is None:
        raise UsageError("--omega is required for this command")
    if opts["modes"]:
        modes = []
        for part in opts["modes"].split(","):
            ell, _, amp = part.partition(":")
            try:
                modes.append((int(ell), float(amp)))
            except ValueError as exc:
                raise UsageError(f"bad --modes entry {part!r}") from exc
        return ForceSpec(omega_fundamental=omega, modes=tuple(modes))
    return ForceSpec.single(omega, opts["force_amp"])


def _parse_grid(opts: dict) -> np.ndarray:
    spec = opts["omega_grid"]
    if spec is None:
        if opts["omega"] is not None:
            return np.array([opts["omega"]], dtype=float)
        raise UsageError("--omega-grid (or --omega) is required for this command")
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise UsageError(f"--omega-grid must be MIN:MAX:COUNT, got {spec!r}")
        try:
            lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError as exc:
            raise UsageError(f"bad --omega-grid {spec!r}") from exc
        if count < 2 or not lo < hi:
            raise UsageError("--omega-grid needs COUNT >= 2 and MIN < MAX")
        return np.linspace(lo, hi, count)
    try:
        grid = np.array([float(v) for v in spec.split(",") if v.strip()], dtype=float)
    except ValueError as exc:
        raise UsageError(f"bad --omega-grid {spec!r}") from exc
    if grid.size == 0:
        raise UsageError("--omega-grid list is empty")
    return grid


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return repr(value)
    return str(value)


def _write_table(path: Path, fmt: str, columns: list[str], rows: list[tuple], meta: dict) -> None:
    if fmt == "csv":
        lines = [",".join(columns)]
        lines += [",".join(_fmt(v) for v in row) for row in rows]
        path.write_text("\n".join(lines) + "\n")
    else:
        doc = {"meta": meta, "columns": columns, "rows": [list(r) for r in rows]}
        path.write_text(json.dumps(doc, indent=1, allow_nan=True) + "\n")


def _out_path(opts: dict, stem: str) -> Path:
    if opts["out"]:
        return Path(opts["out"])
    return Path(f"{stem}.{opts['format']}")


def _maybe_plot(opts: dict, path: Path, draw) -> None:
    if opts["no_plot"]:
        return
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    draw(ax)
    fig.tight_layout()
    fig.savefig(path.with_suffix(".png"), dpi=150)
    plt.close(fig)


def _chunked_work(grid, F, params, threads):
    if threads <= 1 or grid.size < 64:
        return observables.work_values(grid, F, params, check_resonance=False)
    chunks = np.array_split(grid, threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(
            pool.map(
                lambda g: observables.work_values(g, F, params, check_resonance=False), chunks
            )
        )
    return observables.WorkGrid(
        omega=np.concatenate([p.omega for p in parts]),
        W=np.concatenate([p.W for p in parts]),
        W_minus=np.concatenate([p.W_minus for p in parts]),
        W_plus=np.concatenate([p.W_plus for p in parts]),
        N=np.concatenate([p.N for p in parts]),
        D=np.concatenate([p.D for p in parts]),
    )


def _scan_rows(grid: np.ndarray, F: float, params: ChainParams, threads: int):
    """Work rows over a grid: resonant points rerouted to the finite limit,
    every chain mode inside the grid range added as an explicit row."""
    regimes = [classify(float(w), params) for w in grid]
    smooth = np.array([not reg.is_resonant for reg in regimes])
    vals = _chunked_work(grid[smooth], F, params, threads)
    rows = []
    it = iter(range(int(np.count_nonzero(smooth))))
    for w, reg, ok in zip(grid, regimes, smooth):
        if ok:
            i = next(it)
            rows.append(
                (float(w), float(vals.W[i]), float(vals.W_minus[i]), float(vals.W_plus[i]),
                 reg.tag(), float(vals.N[i]), float(vals.D[i]))
            )
        else:
            rep = observables.work_resonant(reg.j, F, params)
            rows.append((float(w), rep.W, rep.W_minus, rep.W_plus, reg.tag(), rep.N, rep.D))
    wj = spectrum(params)
    for j, w in enumerate(wj):
        if grid.min() <= w <= grid.max():
            rep = observables.work_resonant(j, F, params)
            rows.append((float(w), rep.W, rep.W_minus, rep.W_plus, f"resonance_{j}", rep.N, rep.D))
    rows.sort(key=lambda r: (r[0], r[4]))
    return rows


def cmd_work_scan(opts: dict) -> int:
    params = _chain_params(opts)
    grid = _parse_grid(opts)
    F = opts["force_amp"]
    rows = _scan_rows(grid, F, params, opts["threads"])
    columns = ["omega", "W", "W_minus", "W_plus", "regime", "N", "D"]
    path = _out_path(opts, "work_scan")
    meta = {"n": params.n, "omega0": params.omega0, "gamma_minus": params.gamma_minus,
            "gamma_plus": params.gamma_plus, "force_amp": F}
    _write_table(path, opts["format"], columns, rows, meta)

    def draw(ax):
        smooth = [(r[0], r[1]) for r in rows if not r[4].startswith("resonance")]
        res = [(r[0], r[1]) for r in rows if r[4].startswith("resonance")]
        if smooth:
            ax.plot(*zip(*smooth), lw=0.7, color="C0", label="off-resonance grid")
        if res:
            ax.plot(*zip(*res), "r.", ms=5, label="chain modes (finite limit)")
        ax.set_xlabel(r"$\omega$")
        ax.set_ylabel("W")
        ax.legend(fontsize=8)

    _maybe_plot(opts, path, draw)
    print(path)
    return 0


def cmd_energy_scan(opts: dict) -> int:
    params = _chain_params(opts)
    grid = _parse_grid(opts)
    F = opts["force_amp"]
    lo_edge, hi_edge = band_edges(params.omega0)
    rows = []
    for w in grid:
        w = float(w)
        reg = classify(w, params)
        if reg.is_resonant:
            e_tot = math.nan
        else:
            e_tot = observables.total_mech_energy_closed(w, F, params)
        if lo_edge < w < hi_edge:
            r = inverse_dispersion(w, params.omega0)
            point = asymptotics.scaling_point(r, (params.n + 1) * r, F, params, clamp_poles=True)
            ebar = point.ebar
        else:
            ebar = math.nan
        rows.append((w, e_tot, e_tot / params.n, ebar, reg.tag()))
    columns = ["omega", "E_mech", "E_mech_per_site", "ebar", "regime"]
    path = _out_path(opts, "energy_scan")
    meta = {"n": params.n, "omega0": params.omega0, "gamma_minus": params.gamma_minus,
            "gamma_plus": params.gamma_plus, "force_amp": F}
    _write_table(path, opts["format"], columns, rows, meta)

    def draw(ax):
        om = [r[0] for r in rows]
        ax.plot(om, [r[1] for r in rows], lw=0.7, color="C0", label="E_mech")
        ax.plot(om, [r[3] for r in rows], lw=0.7, color="C1", label=r"$\bar e(r,(n{+}1)r)$")
        for edge in band_edges(params.omega0):
            ax.axvline(edge, color="r", ls="--", lw=0.7)
        ax.set_xlabel(r"$\omega$")
        ax.set_ylabel("energy")
        ax.legend(fontsize=8)

    _maybe_plot(opts, path, draw)
    print(path)
    return 0


def cmd_currents(opts: dict) -> int:
    params = _chain_params(opts)
    grid = _parse_grid(opts)
    F = opts["force_amp"]
    if params.total_damping > 0 and (params.T_minus > 0 or params.T_plus > 0):
        j_th = observables.thermal_state(params).J_th
    else:
        j_th = math.nan
    if params.gamma_minus == params.gamma_plus and params.gamma_minus > 0:
        c_dt = observables.thermal_current_closed(params.gamma_minus, params.omega0) * (
            params.T_minus - params.T_plus
        )
    else:
        c_dt = math.nan
    rows = []
    for w in grid:
        w = float(w)
        reg = classify(w, params)
        if reg.is_resonant:
            rep = observables.work_resonant(reg.j, F, params)
        else:
            rep = observables.work(w, F, params)
        rows.append((w, -rep.W_minus, rep.W_minus, rep.W_plus, reg.tag(), j_th, c_dt))
    columns = ["omega", "J_mech", "W_minus", "W_plus", "regime", "J_th", "c_deltaT"]
    path = _out_path(opts, "currents")
    meta = {"n": params.n, "T_minus": params.T_minus, "T_plus": params.T_plus}
    _write_table(path, opts["format"], columns, rows, meta)

    def draw(ax):
        ax.plot([r[0] for r in rows], [r[1] for r in rows], lw=0.8, label="J_mech")
        if not math.isnan(j_th):
            ax.axhline(j_th, color="C2", lw=0.8, label="J_th")
        ax.set_xlabel(r"$\omega$")
        ax.set_ylabel("current")
        ax.legend(fontsize=8)

    _maybe_plot(opts, path, draw)
    print(path)
    return 0


def cmd_young(opts: dict) -> int:
    params = _chain_params(opts)
    if opts["r"] is not None:
        r = float(opts["r"])
    elif opts["omega"] is not None:
        try:
            r = inverse_dispersion(opts["omega"], params.omega0)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    else:
        raise UsageError("young needs --r or an in-band --omega")
    F = opts["force_amp"]
    hist = asymptotics.young_histogram(
        r, F, params, u_samples=int(opts["u_samples"]), bins=int(opts["bins"])
    )
    mean = asymptotics.mean_scaled_work(r, F, params)
    rows = [
        (float(hist.bin_edges[i]), float(hist.bin_edges[i + 1]), float(hist.masses[i]))
        for i in range(hist.masses.size)
    ]
    columns = ["bin_lo", "bin_hi", "mass"]
    path = _out_path(opts, "young")
    meta = {
        "r": r,
        "omega": float(np.sqrt(params.omega0**2 + 4 * np.sin(np.pi * r / 2) ** 2)),
        "mean_work": mean,
        "bound": observables.work_bound(1.0, F, params),
        "u_samples": hist.u_samples,
    }
    _write_table(path, opts["format"], columns, rows, meta)

    def draw(ax):
        width = np.diff(hist.bin_edges)
        ax.bar(hist.bin_edges[:-1], hist.masses, width=width, align="edge", color="C0")
        ax.set_xlabel(r"$\bar W$ value")
        ax.set_ylabel("mass")
        ax.set_title(f"limiting work distribution at r={r:g}")

    _maybe_plot(opts, path, draw)
    print(path)
    return 0


def cmd_limits(opts: dict) -> int:
    params = _chain_params(opts)
    grid = _parse_grid(opts)
    F = opts["force_amp"]
    lo_edge, hi_edge = band_edges(params.omega0)
    rows = []
    for w in grid:
        w = float(w)
        if lo_edge <= w <= hi_edge:
            rows.append((w, "in_band", math.nan, math.nan, math.nan, math.nan))
            continue
        gbar0, _ = asymptotics.limit_green_outside(w, params.omega0)
        rows.append(
            (
                w,
                "below_band" if w < lo_edge else "above_band",
                gbar0,
                w * gbar0,
                asymptotics.limit_work_outside(w, F, params),
                asymptotics.limit_energy_outside(w, F, params),
            )
        )
    columns = ["omega", "regime", "gbar0", "H", "W_limit", "E_limit"]
    path = _out_path(opts, "limits")
    lo_val, hi_val = asymptotics.limit_work_band_edges(F, params)
    meta = {"band_lower_edge_W": lo_val, "band_upper_edge_W": hi_val}
    _write_table(path, opts["format"], columns, rows, meta)

    def draw(ax):
        out = [(r[0], r[4]) for r in rows if r[1] != "in_band"]
        if out:
            ax.plot(*zip(*out), ".", ms=3)
        for edge in (lo_edge, hi_edge):
            ax.axvline(edge, color="r", ls="--", lw=0.7)
        ax.set_xlabel(r"$\omega$")
        ax.set_ylabel(r"$\bar W$")

    _maybe_plot(opts, path, draw)
    print(path)
    return 0


def cmd_simulate(opts: dict) -> int:
    params = _chain_params(opts)
    force = _force_spec(opts)
    config = simulate.SimConfig.from_samples(
        params,
        force,
        samples_per_period=int(opts["samples_per_period"]),
        burn_in_periods=int(opts["burn_in"]),
        measure_periods=int(opts["periods"]),
        seed=int(opts["seed"]),
        trajectories=int(opts["trajectories"]),
        method=opts["method"],
    )
    stats = simulate.run(config)
    try:
        w_closed = observables.work_multimode(force, params).W
    except ChainworkError:
        w_closed = math.nan
    if params.total_damping > 0:
        thermal = observables.thermal_state(params)
        temps_ref = thermal.temperatures
    else:
        temps_ref = np.full(params.sites, math.nan)
    rows = [
        ("work", "", stats.mean_work, stats.work_stderr, w_closed),
        ("J_left", "", stats.mean_J_left, stats.J_left_stderr, math.nan),
        ("J_right", "", stats.mean_J_right, stats.J_right_stderr, math.nan),
    ]
    for x in range(params.sites):
        rows.append(
            ("temperature", x, float(stats.temp_profile[x]), float(stats.temp_stderr[x]),
             float(temps_ref[x]))
        )
    columns = ["quantity", "site", "value", "stderr", "reference"]
    path = _out_path(opts, "simulate")
    meta = {"seed": config.seed, "samples_per_period": config.samples_per_period,
            "measure_periods": config.measure_periods, "method": config.method,
            "batches": stats.batches}
    _write_table(path, opts["format"], columns, rows, meta)

    def draw(ax):
        x = np.arange(params.sites)
        ax.errorbar(x, stats.temp_profile, yerr=3 * stats.temp_stderr, fmt="o", ms=3,
                    label="simulation (3 s.e.)")
        ax.plot(x, temps_ref, "r-", lw=0.8, label="stationary covariance")
        ax.set_xlabel("site")
        ax.set_ylabel(r"$T_x$")
        ax.legend(fontsize=8)

    _maybe_plot(opts, path, draw)
    print(path)
    return 0


def _selftest_checks():
    """(name, measured, tolerance) triples for the quick verification suite."""
    rng = np.random.default_rng(20240811)
    checks = []

    # Dual-oracle response agreement and the |Dtilde|^2 = D identity.
    from .greens import endpoint_greens

    worst = 0.0
    for _ in range(40):
        n = int(rng.integers(2, 33))
        params = ChainParams(
            n=n,
            omega0=float(rng.uniform(0.0, 2.0)),
            gamma_minus=float(rng.choice([0.0, 0.1, 1.0, 10.0])),
            gamma_plus=float(rng.choice([0.1, 1.0, 10.0])),
        )
        w = float(rng.uniform(0.1, 4.0))
        try:
            a = response.amplitudes_via_greens(w, 1.0, params)
        except ResonanceError:
            continue
        b = response.amplitudes_via_solve(w, 1.0, params)
        scale = np.abs(b.q_tilde).max()
        worst = max(worst, float(np.abs(a.q_tilde - b.q_tilde).max() / scale))
        ends = endpoint_greens(w, params)
        _, d_real = observables.nd_values(
            w, float(ends.g0[0]), float(ends.g1[0]), float(ends.sq_diff[0]), params
        )
        worst = max(worst, abs(abs(a.d_tilde) ** 2 - d_real) / max(1.0, d_real))
    checks.append(("response dual oracle + |Dtilde|^2 = D", worst, 1e-10))

    p11 = ChainParams(n=8, omega0=1.0, gamma_minus=1.0, gamma_plus=1.0)
    wq = observables.work_quadrature(ForceSpec.single(1.5, 1.0), p11)
    wc = observables.work(1.5, 1.0, p11).W
    checks.append(("closed-form work vs quadrature", abs(wq - wc), 1e-10))

    p50 = ChainParams(n=50, omega0=1.0, gamma_minus=1.0, gamma_plus=1.0)
    grid = np.linspace(0.51, 3.0, 200)
    vals = observables.work_values(grid, 1.0, p50, check_resonance=False)
    margin = float(np.max(vals.W / (grid**2 / 4.0 * 2.0)))
    checks.append(("work bound on grid (margin < 1)", margin, 1.0))

    p20 = ChainParams(n=20, omega0=1.0, gamma_minus=1.0, gamma_plus=1.0)
    wj = spectrum(p20)[5]
    rep = observables.work_resonant(5, 1.0, p20)
    weps = observables.work_values(
        np.array([math.sqrt(wj**2 + 1e-12 / 20)]), 1.0, p20, check_resonance=False
    ).W[0]
    checks.append(("resonance continuity", abs(weps - rep.W) / rep.W, 1e-5))

    p2000 = ChainParams(n=2000, omega0=1.0, gamma_minus=1.0, gamma_plus=1.0)
    werr = abs(
        observables.work(3.0, 1.0, p2000).W - asymptotics.limit_work_outside(3.0, 1.0, p2000)
    )
    checks.append(("outside-band work limit", werr, 1e-2))

    point = asymptotics.scaling_point(0.3, 0.37, 1.0, p50)
    checks.append(
        ("scaling identity 2 Hbar = Gbar0 + Gbar1",
         abs(2 * point.hbar - point.gbar0 - point.gbar1), 1e-12)
    )
    wdiff = abs(
        asymptotics.scaling_point(0.3, 1.37, 1.0, p50).wbar - point.wbar
    )
    checks.append(("Wbar 1-periodicity in u", wdiff, 1e-12))

    pth = ChainParams(n=16, omega0=0.0, gamma_minus=1.0, gamma_plus=1.0, T_minus=1.0, T_plus=0.0)
    jth = observables.thermal_state(pth).J_th
    checks.append(("unpinned thermal current = gamma/(1+4 gamma^2) dT", abs(jth - 0.2), 1e-10))

    p12 = ChainParams(n=12, omega0=1.0, gamma_minus=1.0, gamma_plus=1.0)
    rep_e = observables.mech_energy(1.5, 1.0, p12)
    e_closed = observables.total_mech_energy_closed(1.5, 1.0, p12)
    checks.append(("energy site sum vs closed total", abs(rep_e.E_mech - e_closed), 1e-8))
    return checks


def cmd_selftest(opts: dict) -> int:
    failures = 0
    for name, measured, tol in _selftest_checks():
        ok = measured <= tol
        failures += 0 if ok else 1
        print(f"{'PASS' if ok else 'FAIL'}  {name}: measured={measured:.3e} tol={tol:.0e}")
    print(f"selftest: {'all checks passed' if failures == 0 else f'{failures} check(s) FAILED'}")
    return 0 if failures == 0 else 1


_COMMANDS = {
    "work-scan": cmd_work_scan,
    "energy-scan": cmd_energy_scan,
    "currents": cmd_currents,
    "young": cmd_young,
    "limits": cmd_limits,
    "simulate": cmd_simulate,
    "selftest": cmd_selftest,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chainwork",
        description="Work and energy of a periodically forced, thermostatted harmonic chain.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("work-scan", "energy-scan", "currents", "limits"):
        p = sub.add_parser(name)
        _add_common(p)
    p = sub.add_parser("young")
    _add_common(p)
    p.add_argument("--r", type=float, help="normalized wavenumber in (0,1)")
    p.add_argument("--u-samples", dest="u_samples", type=int)
    p.add_argument("--bins", type=int)
    p = sub.add_parser("simulate")
    _add_common(p)
    p.add_argument("--samples-per-period", dest="samples_per_period", type=int)
    p.add_argument("--burn-in", dest="burn_in", type=int)
    p.add_argument("--periods", type=int)
    p.add_argument("--trajectories", type=int)
    p.add_argument("--method", choices=("exact", "euler"))
    p = sub.add_parser("selftest")
    _add_common(p)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        opts = _resolve(args)
        return _COMMANDS[args.command](opts)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except ChainworkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
