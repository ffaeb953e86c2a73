"""Command-line front end: ``simulate``, ``fit``, ``bootstrap`` and ``replicate``.

Every command reads an optional YAML or JSON configuration document,
applies flag overrides, and writes ``result.json`` plus flat CSV tables to
the output directory. Output depends only on the configuration, so re-runs
with the same configuration and seed are byte-identical.

Exit codes: 0 on success, 2 on a configuration or input error, 3 when a fit
or bootstrap fails.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import math
import sys
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from tvsetar import __version__
from tvsetar.bootstrap import bootstrap_model
from tvsetar.diagnostics import acf, difference, ljung_box
from tvsetar.errors import (
    BootstrapUnstable,
    ConfigError,
    DegenerateRegime,
    FitFailed,
    IngestionError,
    TvSetarError,
)
from tvsetar.estimation import (
    PARAM_NAMES,
    FitResult,
    SearchSpace,
    fit_constant,
    fit_fourier,
    fit_wavelet,
    select_resolution,
)
from tvsetar.studies import STUDIES, run_study, sim1_model, sim2_model
from tvsetar.threshold_models import (
    ConstantThreshold,
    FourierThreshold,
    RegimeCoefficients,
    SetarModel,
    TimeSeries,
    WaveletThreshold,
    simulate,
)
from tvsetar.wavelets import WaveletCoefficients, make_basis

__all__ = [
    "RunConfig",
    "load_config",
    "read_series",
    "build_fit",
    "cmd_simulate",
    "cmd_fit",
    "cmd_bootstrap",
    "cmd_replicate",
    "load_bundle",
    "main",
]

LB_LAGS = (20, 30)
FIT_FAMILIES = ("constant", "fourier", "wavelet", "haar", "D", "LA")


@dataclass
class RunConfig:
    """Flat run configuration shared by all commands.

    ``family`` picks the threshold model; ``haar``, ``D`` and ``LA`` are
    shorthands for ``wavelet`` with that wavelet family. ``resolution`` is a
    single level or a list of candidates (selected by in-sample RMSE).
    ``model`` describes the data-generating process for ``simulate``.
    """

    seed: int = 0
    out: str = "out"
    input: str | None = None
    column: str | None = None
    date_column: str | None = None
    delimiter: str = ","
    difference: int = 0
    family: str = "wavelet"
    wavelet: str = "haar"
    vanishing_moments: int = 1
    boundary: str = "periodic"
    resolution: int | list[int] = 2
    fourier_k: list[int] = field(default_factory=lambda: [1, 2, 3, 4, 5])
    bootstrap_b: int = 200
    alpha: float = 0.95
    study: str = "sim1"
    reps: int | None = None
    workers: int = 1
    T: int = 2048
    y0: float = 0.0
    burn_in: int = 0
    model: dict | None = None
    search: dict = field(default_factory=dict)
    acf_lags: int = 30
    fit_bundle: str | None = None

    @classmethod
    def from_dict(cls, data: dict) -> RunConfig:
        if not isinstance(data, dict):
            raise ConfigError("configuration must be a mapping")
        known = {f.name: f for f in dataclasses.fields(cls)}
        kwargs = {}
        for key, val in data.items():
            name = str(key).replace("-", "_")
            if name not in known:
                raise ConfigError("unknown setting", str(key))
            kwargs[name] = val
        cfg = cls(**kwargs)
        cfg.validate()
        return cfg

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def validate(self) -> None:
        def need(ok, name, msg):
            if not ok:
                raise ConfigError(msg, name)

        for name in ("seed", "difference", "vanishing_moments", "bootstrap_b", "workers", "T", "burn_in", "acf_lags"):
            v = getattr(self, name)
            need(isinstance(v, int) and not isinstance(v, bool), name, "must be an integer")
        need(self.seed >= 0, "seed", "must be non-negative")
        need(self.difference >= 0, "difference", "must be non-negative")
        need(self.family in FIT_FAMILIES, "family", f"must be one of {FIT_FAMILIES}")
        need(self.wavelet in ("haar", "D", "LA"), "wavelet", "must be haar, D or LA")
        need(self.boundary in ("periodic", "reflect"), "boundary", "must be periodic or reflect")
        res = self.resolution if isinstance(self.resolution, list) else [self.resolution]
        need(
            len(res) > 0 and all(isinstance(j, int) and not isinstance(j, bool) and j >= 1 for j in res),
            "resolution",
            "must be a positive integer or a list of them",
        )
        ks = self.fourier_k if isinstance(self.fourier_k, list) else [self.fourier_k]
        need(all(isinstance(k, int) and k >= 1 for k in ks) and ks, "fourier_k", "must be positive integers")
        self.fourier_k = list(ks)
        need(self.bootstrap_b >= 50, "bootstrap_b", "must be at least 50")
        need(isinstance(self.alpha, (int, float)) and 0 < self.alpha < 1, "alpha", "must be in (0, 1)")
        need(self.study in STUDIES, "study", f"must be one of {STUDIES}")
        need(self.reps is None or (isinstance(self.reps, int) and self.reps >= 1), "reps", "must be a positive integer")
        need(self.workers >= 1, "workers", "must be at least 1")
        need(self.T >= 2, "T", "must be at least 2")
        need(self.burn_in >= 0, "burn_in", "must be non-negative")
        need(isinstance(self.delimiter, str) and len(self.delimiter) == 1, "delimiter", "must be one character")
        need(isinstance(self.search, dict), "search", "must be a mapping")
        allowed = {f.name for f in dataclasses.fields(SearchSpace)} - {"seed"}
        for key in self.search:
            need(key in allowed, f"search.{key}", "unknown search setting")

    @property
    def wavelet_family(self) -> str:
        return self.family if self.family in ("haar", "D", "LA") else self.wavelet

    @property
    def model_family(self) -> str:
        return "wavelet" if self.family in ("haar", "D", "LA") else self.family

    def search_space(self) -> SearchSpace:
        kw = dict(self.search)
        for key in ("lower", "upper"):
            if kw.get(key) is not None:
                kw[key] = tuple(kw[key])
        try:
            return SearchSpace(seed=self.seed, **kw)
        except (TypeError, TvSetarError) as exc:
            raise ConfigError(str(exc), "search") from exc


def load_config(path: str | None, overrides: dict | None = None) -> RunConfig:
    data = {}
    if path:
        p = Path(path)
        try:
            text = p.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read configuration: {exc}", "config") from exc
        try:
            data = json.loads(text) if p.suffix == ".json" else yaml.safe_load(text)
        except (json.JSONDecodeError, yaml.YAMLError) as exc:
            raise ConfigError(f"cannot parse configuration: {exc}", "config") from exc
        data = data or {}
        if not isinstance(data, dict):
            raise ConfigError("configuration must be a mapping", "config")
    data = dict(data)
    data.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return RunConfig.from_dict(data)


# ---------------------------------------------------------------- ingestion


def read_series(path: str, column: str | None = None, date_column: str | None = None, delimiter: str = ","):
    """Read one numeric column from a delimited file with a header row.

    Returns ``(TimeSeries, dates)`` where ``dates`` is a list of strings or
    ``None``. Row numbers in errors count the header as row 1.
    """
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh, delimiter=delimiter))
    except (OSError, UnicodeDecodeError) as exc:
        raise IngestionError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise IngestionError("file is empty", 1)
    header = [h.strip() for h in rows[0]]
    if column is None:
        candidates = [h for h in header if h != date_column]
        if len(candidates) != 1:
            raise ConfigError(f"file has columns {header}; name the value column", "column")
        column = candidates[0]
    if column not in header:
        raise ConfigError(f"no column {column!r} in header {header}", "column")
    ci = header.index(column)
    di = None
    if date_column is not None:
        if date_column not in header:
            raise ConfigError(f"no column {date_column!r} in header {header}", "date_column")
        di = header.index(date_column)
    values, dates = [], []
    for n, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            raise IngestionError("empty row", n)
        if len(row) <= ci or not row[ci].strip():
            raise IngestionError(f"missing value in column {column!r}", n)
        try:
            v = float(row[ci])
        except ValueError:
            raise IngestionError(f"non-numeric value {row[ci]!r}", n) from None
        if not math.isfinite(v):
            raise IngestionError(f"non-finite value {row[ci]!r}", n)
        values.append(v)
        if di is not None:
            dates.append(row[di].strip() if len(row) > di else "")
    if len(values) < 2:
        raise IngestionError(f"need at least 2 observations, found {len(values)}")
    return TimeSeries(np.array(values)), (dates if di is not None else None)


# ------------------------------------------------------------------ output


def _num(x: float) -> str:
    return repr(float(x))


def _write_table(path: Path, header: list[str], columns: list) -> None:
    cols = [list(c) for c in columns]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in zip(*cols):
            w.writerow(["" if v is None else (_num(v) if isinstance(v, (float, np.floating)) else v) for v in row])


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    return obj


def _write_result(out: Path, doc: dict) -> None:
    out.mkdir(parents=True, exist_ok=True)
    text = json.dumps(_jsonable(doc), indent=2, sort_keys=True, allow_nan=False)
    (out / "result.json").write_text(text + "\n", encoding="utf-8")


def load_bundle(out_dir: str) -> dict:
    """Read ``result.json`` from an output directory."""
    return json.loads((Path(out_dir) / "result.json").read_text(encoding="utf-8"))


# ---------------------------------------------------------------- commands


def _model_from_config(cfg: RunConfig) -> SetarModel:
    spec = cfg.model
    if spec is None or spec in ("sim1", "sim2"):
        return sim2_model() if spec == "sim2" else sim1_model()
    if not isinstance(spec, dict):
        raise ConfigError("must be sim1, sim2 or a mapping", "model")
    try:
        coeffs = RegimeCoefficients(*[float(v) for v in spec["coefficients"]])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError("needs four numbers (phi0_low, phi1_low, phi0_high, phi1_high)", "model.coefficients") from exc
    th = spec.get("threshold", {})
    kind = th.get("type") if isinstance(th, dict) else None
    try:
        if kind == "constant":
            threshold = ConstantThreshold(float(th["gamma"]))
        elif kind == "fourier":
            g = [float(v) for v in th["gamma"]]
            threshold = FourierThreshold(*g, k=int(th.get("k", 1)))
        elif kind == "wavelet":
            basis = make_basis(th.get("wavelet", "haar"), int(th.get("vanishing_moments", 1)), boundary=th.get("boundary", "periodic"))
            theta = np.array([float(v) for v in th["coefficients"]])
            J = int(round(math.log2(theta.size)))
            threshold = WaveletThreshold(basis, WaveletCoefficients.from_vector(theta, J))
        else:
            raise ConfigError("type must be constant, fourier or wavelet", "model.threshold.type")
        return SetarModel(coeffs, threshold, float(spec.get("sigma2", 1.0)))
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError, TvSetarError) as exc:
        raise ConfigError(str(exc), "model.threshold") from exc


def cmd_simulate(cfg: RunConfig) -> dict:
    model = _model_from_config(cfg)
    try:
        y = simulate(model, cfg.T, cfg.y0, cfg.seed, cfg.burn_in)
    except TvSetarError as exc:
        raise ConfigError(str(exc), "model") from exc
    gamma = model.threshold.path(cfg.T)
    out = Path(cfg.out)
    doc = {"command": "simulate", "seed": cfg.seed, "T": cfg.T, "config": cfg.to_dict(), "files": ["series.csv"]}
    _write_result(out, doc)
    _write_table(out / "series.csv", ["t", "y", "gamma"], [range(cfg.T), y.values, gamma])
    return doc


def build_fit(cfg: RunConfig, series) -> FitResult:
    """Dispatch to the estimator named by ``cfg``."""
    search = cfg.search_space()
    fam = cfg.model_family
    if fam == "constant":
        return fit_constant(series)
    if fam == "fourier":
        return fit_fourier(series, cfg.fourier_k, search)
    try:
        basis = make_basis(cfg.wavelet_family, cfg.vanishing_moments, boundary=cfg.boundary)
    except TvSetarError as exc:
        raise ConfigError(str(exc), "vanishing_moments") from exc
    if isinstance(cfg.resolution, list):
        _, fit = select_resolution(series, basis, cfg.resolution, "in_sample", None, search)
        return fit
    return fit_wavelet(series, basis, cfg.resolution, search)


def _load_input(cfg: RunConfig):
    if cfg.input is None:
        raise ConfigError("an input file is required", "input")
    series, dates = read_series(cfg.input, cfg.column, cfg.date_column, cfg.delimiter)
    if cfg.difference:
        try:
            series = difference(series, cfg.difference)
        except TvSetarError as exc:
            raise ConfigError(str(exc), "difference") from exc
        if dates is not None:
            dates = dates[cfg.difference :]
    return series, dates


def _fit_summary(fit: FitResult) -> dict:
    info = {k: v for k, v in fit.info.items() if k not in ("population", "population_ssr", "grid", "grid_ssr")}
    return {
        "family": fit.family.name,
        "estimates": dict(zip(PARAM_NAMES, fit.params())),
        "theta": fit.theta_hat,
        "ssr": fit.ssr,
        "sigma2_hat": fit.sigma2_hat,
        "rmse": fit.rmse,
        "regime_counts": {"low": fit.regime_counts[0], "high": fit.regime_counts[1]},
        "warnings": list(fit.warnings),
        "selection": info,
    }


def cmd_fit(cfg: RunConfig) -> dict:
    series, dates = _load_input(cfg)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        fit = build_fit(cfg, series)
    resid = fit.residuals
    lags = min(cfg.acf_lags, math.ceil(resid.size / 2) - 1)
    diag = {"ljung_box": {}, "acf_lags": lags}
    files = ["fit.csv"]
    if lags >= 1:
        a = acf(resid, lags)
        for h in LB_LAGS:
            if h < resid.size / 2:
                lb = ljung_box(resid, h)
                diag["ljung_box"][str(h)] = {"statistic": lb.statistic, "df": lb.df, "p_value": lb.p_value}
        diag["acf_confidence_limit"] = a.confidence_limit
    out = Path(cfg.out)
    doc = {"command": "fit", "seed": cfg.seed, "T": fit.T, "config": cfg.to_dict(), "fit": _fit_summary(fit), "diagnostics": diag}
    if lags >= 1:
        files.append("acf.csv")
    doc["files"] = files
    _write_result(out, doc)
    T = fit.T
    res_col = [None] + resid.tolist()
    cols = [range(T), dates if dates is not None else [None] * T, fit.series, fit.threshold_path, res_col]
    _write_table(out / "fit.csv", ["t", "date", "y", "gamma_hat", "residual"], cols)
    if lags >= 1:
        lim = a.confidence_limit
        _write_table(out / "acf.csv", ["lag", "rho", "lower", "upper"], [a.lags, a.rho, [-lim] * lags, [lim] * lags])
    return doc


def cmd_bootstrap(cfg: RunConfig) -> dict:
    if cfg.fit_bundle is not None:
        # Re-run the recorded fit configuration; fits are deterministic.
        try:
            prior = load_bundle(cfg.fit_bundle)["config"]
        except (OSError, KeyError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot load fit bundle: {exc}", "fit_bundle") from exc
        keep = {k: getattr(cfg, k) for k in ("out", "bootstrap_b", "alpha", "fit_bundle")}
        prior.update(keep)
        prior["seed"] = cfg.seed
        cfg = RunConfig.from_dict(prior)
    series, dates = _load_input(cfg)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        fit = build_fit(cfg, series)
    res = bootstrap_model(series, fit, cfg.bootstrap_b, cfg.alpha, cfg.seed)
    out = Path(cfg.out)
    doc = {
        "command": "bootstrap",
        "seed": cfg.seed,
        "T": fit.T,
        "config": cfg.to_dict(),
        "fit": _fit_summary(fit),
        "bootstrap": {
            "B": res.B,
            "alpha": res.alpha,
            "dropped": res.dropped,
            "c_crit": res.c_crit,
            "sd_floored_points": res.floored,
            "intervals": {n: {"lower": lo, "upper": hi} for n, (lo, hi) in zip(PARAM_NAMES, res.intervals)},
        },
        "files": ["band.csv", "replicates.csv"],
    }
    _write_result(out, doc)
    _write_table(out / "band.csv", ["t", "gamma_hat", "lower", "upper"], [range(fit.T), res.gamma_hat, res.band[:, 0], res.band[:, 1]])
    _write_table(out / "replicates.csv", list(PARAM_NAMES), res.estimates.T.tolist())
    return doc


def cmd_replicate(cfg: RunConfig) -> dict:
    rep = run_study(cfg.study, cfg.reps, cfg.T, cfg.seed, cfg.bootstrap_b, cfg.alpha, cfg.workers)
    out = Path(cfg.out)
    doc = {"command": "replicate", "study": rep.study, "reps": rep.reps, "seed": cfg.seed, "T": cfg.T, "config": cfg.to_dict()}
    if rep.coverage is not None:
        c = rep.coverage
        doc["coverage"] = {
            "monte_carlo_reps": c.monte_carlo_reps,
            "B": c.B,
            "alpha": c.alpha,
            "dropped": c.dropped,
            "parameters": c.coverage,
            "band": c.band_coverage,
        }
        doc["files"] = []
        _write_result(out, doc)
        return doc
    doc["table"] = rep.table()
    if rep.selected_J and rep.study == "sim2":
        doc["selected_J"] = list(rep.selected_J)
        doc["modal_J"] = rep.modal_J
    doc["files"] = ["table.csv", "replicates.csv"]
    _write_result(out, doc)
    tab = rep.table()
    _write_table(
        out / "table.csv",
        ["parameter", "true", "estimate", "rmse"],
        [[r["parameter"] for r in tab], [r["true"] for r in tab], [r["estimate"] for r in tab], [r["rmse"] for r in tab]],
    )
    cols = [range(rep.reps)] + rep.estimates.T.tolist() + [list(rep.selected_J), rep.threshold_rmse]
    _write_table(out / "replicates.csv", ["rep", *PARAM_NAMES, "J", "threshold_rmse"], cols)
    return doc


COMMANDS = {"simulate": cmd_simulate, "fit": cmd_fit, "bootstrap": cmd_bootstrap, "replicate": cmd_replicate}


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tvsetar", description="Time-varying threshold SETAR(1) models.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--config", help="YAML or JSON configuration file")
        s.add_argument("--seed", type=int)
        s.add_argument("--out")
        s.add_argument("--input")
        s.add_argument("--column")
        s.add_argument("--family", choices=FIT_FAMILIES)
        s.add_argument("--vanishing-moments", type=int, dest="vanishing_moments")
        s.add_argument("--resolution", type=int, nargs="+", help="one level, or several candidates")
        s.add_argument("--fourier-k", type=int, nargs="+", dest="fourier_k")
        s.add_argument("--bootstrap-b", type=int, dest="bootstrap_b")
        s.add_argument("--alpha", type=float)
        s.add_argument("--reps", type=int)
        s.add_argument("--difference", type=int)
        if name == "replicate":
            s.add_argument("--study", choices=STUDIES)
            s.add_argument("--workers", type=int)
        if name == "simulate":
            s.add_argument("-T", type=int, dest="T")
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    over = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    if over.get("resolution") is not None and len(over["resolution"]) == 1:
        over["resolution"] = over["resolution"][0]
    try:
        cfg = load_config(args.config, over)
        COMMANDS[args.command](cfg)
    except (ConfigError, IngestionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BootstrapUnstable as exc:
        print(f"bootstrap failed: {exc} ({exc.dropped} of {exc.requested} refits dropped)", file=sys.stderr)
        return 3
    except (FitFailed, DegenerateRegime) as exc:
        print(f"fit failed: {exc}", file=sys.stderr)
        return 3
    except TvSetarError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
