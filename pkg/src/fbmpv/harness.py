"""Command layer: runs samplers, estimators and verification suites.

Every command takes an ExperimentConfig and produces a RunRecord whose JSON
serialization is bit-for-bit reproducible from the embedded config snapshot
(the wall-clock field is excluded from the reproducibility contract).
``threads`` only parallelizes fixed-size path chunks whose boundaries do not
depend on the thread count, so results never depend on it.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import checks
from .config import ExperimentConfig
from .errors import ConfigError
from .functional import from_local_time, pv_time_integral, qcov
from .hilbert import SampledFunction, hilbert_transform
from .ladders import make_ladder
from .model import HurstIndex
from .occupation import local_time, write_field_csv
from .sampling import SamplePath, TimeGrid, sample_ensemble, write_path_csv

__all__ = ["RunRecord", "cmd_sample", "cmd_pv", "cmd_localtime", "cmd_hilbert",
           "cmd_qcov", "cmd_verify", "rerun_record", "record_fingerprint",
           "EXIT_OK", "EXIT_CONFIG", "EXIT_VERIFY", "EXIT_BUDGET"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_VERIFY = 3
EXIT_BUDGET = 4

# Paths are processed in fixed chunks; the constant is part of the
# reproducibility contract (results must not depend on thread count).
CHUNK = 512


@dataclass
class RunRecord:
    """Self-contained result of one command."""

    command: str
    config: dict
    results: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    wall_clock_s: float = 0.0
    schema: int = 1

    def to_json(self) -> str:
        return json.dumps(
            {"schema": self.schema, "command": self.command, "config": self.config,
             "results": self.results, "checks": self.checks,
             "wall_clock_s": self.wall_clock_s},
            sort_keys=True, indent=2)

    def write(self, path) -> None:
        Path(path).write_text(self.to_json() + "\n", encoding="utf-8")

    @property
    def all_passed(self) -> bool:
        return all(c.get("passed", False) for c in self.checks)


def record_fingerprint(record: RunRecord) -> str:
    """Serialization with the wall clock masked; equal strings mean equal runs."""
    data = json.loads(record.to_json())
    data.pop("wall_clock_s", None)
    return json.dumps(data, sort_keys=True)


def _grid(cfg: ExperimentConfig) -> TimeGrid:
    return TimeGrid(horizon=cfg.horizon, steps=cfg.steps, h=HurstIndex(cfg.h))


def _ladder(cfg: ExperimentConfig, grid: TimeGrid) -> tuple[np.ndarray, float]:
    spec = cfg.eps_ladder
    eps0 = spec.get("eps0") or grid.horizon ** grid.h.value / 4.0
    rungs = spec.get("rungs") or 8
    factor = spec.get("factor") or 2.0
    floor_scale = spec.get("floor_scale")
    floor = (1.0 if floor_scale is None else floor_scale) * grid.resolution_floor
    return make_ladder(eps0, rungs=rungs, factor=factor, floor=floor), floor


def _grid_kwargs(cfg: ExperimentConfig) -> dict:
    g = cfg.spatial_grid
    return {k: g.get(k) for k in ("x_min", "x_max", "bandwidth")}


def _chunk_map(total: int, threads: int, fn):
    """Apply fn(start, count) over fixed chunks, in order; threads optional."""
    tasks = [(s, min(CHUNK, total - s)) for s in range(0, total, CHUNK)]
    if threads <= 1 or len(tasks) == 1:
        return [fn(s, c) for s, c in tasks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda t: fn(*t), tasks))


def _mean_se(x: np.ndarray) -> dict:
    return {"mean": float(x.mean()),
            "se": float(x.std(ddof=1) / np.sqrt(x.size)) if x.size > 1 else 0.0}


def cmd_sample(cfg: ExperimentConfig) -> RunRecord:
    """Write one CSV per path plus a manifest with the derived seeds."""
    t0 = time.time()
    grid = _grid(cfg)
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    for start, count in [(s, min(CHUNK, cfg.paths - s)) for s in range(0, cfg.paths, CHUNK)]:
        vals = sample_ensemble(grid, cfg.master_seed, count, method=cfg.method,
                               start=start)
        for j in range(count):
            k = start + j
            p = SamplePath(grid=grid, values=vals[j], seed=cfg.master_seed,
                           method=cfg.method)
            fname = out / f"path_{k:05d}.csv"
            write_path_csv(p, fname)
            files.append({"file": fname.name, "path_index": k})
    manifest = {
        "h": cfg.h, "horizon": cfg.horizon, "steps": cfg.steps,
        "method": cfg.method, "master_seed": cfg.master_seed,
        "seed_rule": "default_rng(SeedSequence(master_seed, spawn_key=(path_index,)))",
        "files": files,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, sort_keys=True, indent=2)
                                       + "\n", encoding="utf-8")
    rec = RunRecord(command="sample", config=cfg.to_dict(),
                    results={"files": len(files)}, wall_clock_s=time.time() - t0)
    return rec


def _pv_one_level(cfg: ExperimentConfig, grid: TimeGrid, ladder: np.ndarray,
                  floor: float, a: float) -> dict:
    route_vals = {route: np.empty(cfg.paths) for route in cfg.routes}

    def work(start: int, count: int):
        vals = sample_ensemble(grid, cfg.master_seed, count, method=cfg.method,
                               start=start)
        block = {route: np.empty(count) for route in cfg.routes}
        for j in range(count):
            p = SamplePath(grid=grid, values=vals[j], seed=cfg.master_seed,
                           method=cfg.method)
            fld = None
            for route in cfg.routes:
                if route == "time_integral":
                    block[route][j] = pv_time_integral(p, a, eps_ladder=ladder,
                										  floor=floor).value
                elif route == "hilbert_of_local_time":
                    if fld is None:
                        fld = local_time(p, kind="weighted", **_grid_kwargs(cfg))
                    block[route][j] = from_local_time(fld, a).value
                else:  # quadratic_covariation
                    eps = cfg.qcov_lag_steps * grid.dt
                    block[route][j] = qcov(p, lambda x: np.log(np.abs(x - a)), eps)
        return start, block

    for start, block in _chunk_map(cfg.paths, cfg.threads, work):
        for route in cfg.routes:
            route_vals[route][start:start + len(block[route])] = block[route]

    level = {"a": a, "routes": {}, "cross_route_delta": {}}
    for route, arr in route_vals.items():
        level["routes"][route] = {**_mean_se(arr), "values": arr.tolist()}
    names = list(cfg.routes)
    for i in range(len(names)):
        for j in range(i + 1, len(names)):
            d = route_vals[names[i]] - route_vals[names[j]]
            level["cross_route_delta"][f"{names[i]}-{names[j]}"] = _mean_se(d)
    return level


def cmd_pv(cfg: ExperimentConfig) -> RunRecord:
    """Ensemble estimates of the functional per level and per route."""
    t0 = time.time()
    grid = _grid(cfg)
    ladder, floor = _ladder(cfg, grid)
    levels = [_pv_one_level(cfg, grid, ladder, floor, float(a)) for a in cfg.levels]
    rec = RunRecord(command="pv", config=cfg.to_dict(),
                    results={"eps_ladder": ladder.tolist(), "levels": levels},
                    wall_clock_s=time.time() - t0)
    return rec


def cmd_localtime(cfg: ExperimentConfig) -> RunRecord:
    """Write local-time fields (CSV plus JSON sidecar) for each path."""
    t0 = time.time()
    grid = _grid(cfg)
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    totals = []
    for start in range(0, cfg.paths, CHUNK):
        count = min(CHUNK, cfg.paths - start)
        vals = sample_ensemble(grid, cfg.master_seed, count, method=cfg.method,
                               start=start)
        for j in range(count):
            k = start + j
            p = SamplePath(grid=grid, values=vals[j], seed=cfg.master_seed,
                           method=cfg.method)
            fld = local_time(p, kind="weighted", **_grid_kwargs(cfg))
            write_field_csv(fld, out / f"localtime_{k:05d}.csv",
                            out / f"localtime_{k:05d}.json")
            totals.append(fld.total_mass)
    rec = RunRecord(command="localtime", config=cfg.to_dict(),
                    results={"fields": len(totals),
                             "total_mass": _mean_se(np.asarray(totals))},
                    wall_clock_s=time.time() - t0)
    return rec


def cmd_hilbert(input_csv: str | None, output_csv: str, engine: str = "auto") -> dict:
    """Transform a sampled function from CSV to CSV.

    Without an input file, transforms the Lorentzian 1/(1+x^2) on the default
    demonstration grid.
    """
    if input_csv is None:
        x = np.linspace(-40.0, 40.0, 8001)
        f = SampledFunction.from_grid(x, 1.0 / (1.0 + x * x))
    else:
        data = np.loadtxt(input_csv, delimiter=",", skiprows=1)
        f = SampledFunction.from_grid(data[:, 0], data[:, 1])
    out = hilbert_transform(f, engine=engine)
    out.write_csv(output_csv)
    return {"nodes": f.size, "input": input_csv or "lorentzian-demo",
            "output": output_csv}


def cmd_qcov(cfg: ExperimentConfig) -> RunRecord:
    """Covariation ensembles: the identity function and log distance per level."""
    if cfg.h >= 0.5:
        raise ConfigError("field 'h': the qcov command requires h < 0.5")
    t0 = time.time()
    grid = _grid(cfg)
    eps = cfg.qcov_lag_steps * grid.dt
    ident = np.empty(cfg.paths)
    logs = {float(a): np.empty(cfg.paths) for a in cfg.levels}

    def work(start: int, count: int):
        vals = sample_ensemble(grid, cfg.master_seed, count, method=cfg.method,
                               start=start)
        block_i = np.empty(count)
        block_l = {a: np.empty(count) for a in logs}
        for j in range(count):
            p = SamplePath(grid=grid, values=vals[j], seed=cfg.master_seed,
                           method=cfg.method)
            block_i[j] = qcov(p, lambda x: x, eps)
            for a in logs:
                block_l[a][j] = qcov(p, lambda x: np.log(np.abs(x - a)), eps)
        return start, block_i, block_l

    for start, block_i, block_l in _chunk_map(cfg.paths, cfg.threads, work):
        ident[start:start + block_i.size] = block_i
        for a in logs:
            logs[a][start:start + block_l[a].size] = block_l[a]

    results = {
        "lag": eps,
        "identity": {**_mean_se(ident),
                     "target": grid.horizon ** grid.h.two_h},
        "log_levels": {str(a): _mean_se(arr) for a, arr in logs.items()},
    }
    return RunRecord(command="qcov", config=cfg.to_dict(), results=results,
                     wall_clock_s=time.time() - t0)


# ---------------------------------------------------------------------------
# verification suites


class BudgetExceeded(Exception):
    pass


def _bounds_checks(cfg: ExperimentConfig):
    yield lambda: checks.check_covariance_sandwich()
    yield lambda: checks.check_ratio_bounds()
    yield lambda: checks.check_strong_bernoulli()
    yield lambda: checks.check_gram_psd()
    yield lambda: checks.check_density_increment_sample()
    yield lambda: checks.check_lambda1_envelope()
    yield lambda: checks.check_lambda34_scaling()
    yield lambda: checks.check_log_weighted_envelope()
    yield lambda: checks.check_mollifier_family()
    yield lambda: checks.check_f_eps_family()


def _identities_checks(cfg: ExperimentConfig):
    paths = cfg.paths
    seed = cfg.master_seed
    if cfg.h > 0.5:
        yield lambda: checks.check_occupation_totals(h=cfg.h, n=cfg.steps, seed=seed)
        yield lambda: checks.check_occupation_refinement(
            h=cfg.h, n=cfg.steps, paths=min(paths, 100), seed=seed)
        yield lambda: checks.check_route_consistency(
            h=cfg.h, n=cfg.steps, paths=paths, seed=seed, a=float(cfg.levels[0]))
        yield lambda: checks.check_one_sided_decomposition(
            h=cfg.h, n=cfg.steps, paths=min(paths, 50), seed=seed,
            a=float(cfg.levels[0]))
        yield lambda: checks.check_antisymmetry(h=cfg.h, seed=seed,
                                                a=float(cfg.levels[0]))
        yield lambda: checks.check_occupation_identity(
            h=cfg.h, n=cfg.steps, paths=paths, seed=seed)
        yield lambda: checks.check_yamada_zero_mean(
            h_values=(cfg.h,), levels=tuple(cfg.levels), n=cfg.steps,
            paths=paths, seed=seed)
    else:
        yield lambda: checks.check_qcov_identity(
            h=cfg.h, n=cfg.steps, paths=paths, seed=seed,
            lag_steps=cfg.qcov_lag_steps)
        yield lambda: checks.check_qcov_corollary(
            h=cfg.h, n=cfg.steps, paths=paths, seed=seed,
            a=float(cfg.levels[0]), lag_steps=cfg.qcov_lag_steps)
        yield lambda: checks.check_bouleau_yor(
            h=cfg.h, n=cfg.steps, paths=paths, seed=seed,
            lag_steps=cfg.qcov_lag_steps)


def cmd_verify(suite: str, cfg: ExperimentConfig) -> tuple[RunRecord, int]:
    """Run a named suite; the exit status encodes the outcome."""
    if suite not in ("bounds", "identities", "all"):
        raise ConfigError(f"unknown suite {suite!r}; use bounds, identities or all")
    t0 = time.time()
    makers = []
    if suite in ("bounds", "all"):
        makers.extend(_bounds_checks(cfg))
    if suite in ("identities", "all"):
        makers.extend(_identities_checks(cfg))
    results = []
    budget_hit = False
    for make in makers:
        if cfg.budget_seconds is not None and time.time() - t0 > cfg.budget_seconds:
            budget_hit = True
            break
        results.append(make())
    rec = RunRecord(command=f"verify:{suite}", config=cfg.to_dict(),
                    checks=results, wall_clock_s=time.time() - t0)
    if budget_hit:
        rec.results["budget_exceeded"] = True
        return rec, EXIT_BUDGET
    return rec, (EXIT_OK if rec.all_passed else EXIT_VERIFY)


def rerun_record(record_json: str) -> RunRecord:
    """Re-execute a run from its embedded config snapshot."""
    data = json.loads(record_json)
    from .config import config_from_dict

    cfg = config_from_dict(data["config"])
    command = data["command"]
    if command == "pv":
        return cmd_pv(cfg)
    if command == "qcov":
        return cmd_qcov(cfg)
    if command == "sample":
        return cmd_sample(cfg)
    if command == "localtime":
        return cmd_localtime(cfg)
    if command.startswith("verify:"):
        rec, _ = cmd_verify(command.split(":", 1)[1], cfg)
        return rec
    raise ConfigError(f"record has unknown command {command!r}")
