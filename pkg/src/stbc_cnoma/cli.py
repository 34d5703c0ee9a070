"""Experiment presets and the command-line front end.

Each preset reproduces the data behind one results figure and writes one CSV
per curve.  Outage presets share the column layout

    scenario,k,sweep_var,sweep_value,outage_sim,ci95,outage_exact,
    outage_numeric,outage_asymptotic,trials,seed

with blanks where a column does not apply (no analytic form for the
decode-and-forward scheme, no valid asymptote at the default rate threshold).
PDF presets emit x,pdf_analytic,pdf_empirical instead.  For a fixed
(preset, overrides, seed) the CSV bytes are identical for any worker count.

All CLI-facing powers are dB/dBm; conversion to linear units happens once at
parse time.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from . import complexity
from .config import (ImpairmentSpec, SystemConfig, db_to_linear, dbm_to_watts,
                     default_config, derive_rates, load_config, noise_power_watts,
                     validate, with_snr)
from .distributions import gamma_fit, sum_l
from .harness import empirical_pdf, outage_curve
from .outage import (AsymptoticValidityError, make_query, outage_asymptotic,
                     outage_exact, outage_numeric, timing_gamma_parameters)
from .sinr import Scenario, UnsupportedScenarioError

DEFAULT_SEED = 12345
DEFAULT_UPSILON = 2.0


@dataclass(frozen=True)
class SeriesSpec:
    """One curve: a scheme plus impairment settings and a user index."""

    label: str
    scheme: str = "stbc-cnoma"
    k: int = 4
    K: int = 4
    tau: float = 0.0
    phi_eta_db: float | None = None
    sigma_omega2_db: float | None = None

    def impairments(self) -> ImpairmentSpec:
        return ImpairmentSpec(
            tau=self.tau,
            eta=1 if self.phi_eta_db is not None else 0,
            phi_eta=db_to_linear(self.phi_eta_db) if self.phi_eta_db is not None else 0.0,
            sigma_omega2=(db_to_linear(self.sigma_omega2_db)
                          if self.sigma_omega2_db is not None else 0.0))


@dataclass(frozen=True)
class ExperimentPreset:
    name: str
    figure: str
    description: str
    kind: str                      # pdf | threshold | snr | complexity | asymptote
    series: tuple[SeriesSpec, ...] = ()
    sweep_var: str = ""
    sweep_values: tuple[float, ...] = ()
    upsilon: float = DEFAULT_UPSILON
    trials: int = 200_000
    bins: int = 80


def _snr_grid(lo=0, hi=50, step=5):
    return tuple(float(v) for v in range(lo, hi + 1, step))


def _gamma_db_grid(lo=-10, hi=10, step=2):
    return tuple(float(v) for v in range(lo, hi + 1, step))


_PRESETS: dict[str, ExperimentPreset] = {}


def _register(p: ExperimentPreset) -> None:
    _PRESETS[p.name] = p


_register(ExperimentPreset(
    name="fig4-pdf", figure="fig4",
    description="SINR densities of user 4 for timing offsets 0, 0.3, 0.6, 0.9",
    kind="pdf",
    series=tuple(SeriesSpec(label=f"tau{t:g}", tau=t) for t in (0.0, 0.3, 0.6, 0.9)),
    trials=100_000))

_register(ExperimentPreset(
    name="fig5-outage-vs-threshold", figure="fig5",
    description="Outage of user 4 vs SINR threshold: non-cooperative, "
                "decode-and-forward, and chained-pair schemes",
    kind="threshold",
    series=(SeriesSpec(label="noma", scheme="noma"),
            SeriesSpec(label="ccn", scheme="ccn"),
            SeriesSpec(label="stbc-tau0", tau=0.0),
            SeriesSpec(label="stbc-tau0.5", tau=0.5),
            SeriesSpec(label="stbc-tau0.8", tau=0.8)),
    sweep_var="gamma_th_db", sweep_values=_gamma_db_grid()))

_register(ExperimentPreset(
    name="fig6-outage-users", figure="fig6",
    description="Outage vs threshold for 4, 8, and 16 users with -5 dB residual SIC",
    kind="threshold",
    series=tuple(SeriesSpec(label=f"K{K}", K=K, k=K, phi_eta_db=-5.0)
                 for K in (4, 8, 16)),
    sweep_var="gamma_th_db", sweep_values=_gamma_db_grid()))

_register(ExperimentPreset(
    name="fig7-outage-timing-ipsic", figure="fig7",
    description="Outage vs threshold with -5 dB residual SIC and varying timing offset",
    kind="threshold",
    series=tuple(SeriesSpec(label=f"tau{t:g}", tau=t, phi_eta_db=-5.0)
                 for t in (0.0, 0.3, 0.5, 0.8)),
    sweep_var="gamma_th_db", sweep_values=_gamma_db_grid()))

_register(ExperimentPreset(
    name="fig8-outage-ipsic-levels", figure="fig8",
    description="Outage vs threshold for residual-SIC levels -30..-5 dB, perfect timing",
    kind="threshold",
    series=tuple(SeriesSpec(label=f"ipsic{int(d)}dB", phi_eta_db=d)
                 for d in (-30.0, -20.0, -10.0, -5.0)),
    sweep_var="gamma_th_db", sweep_values=_gamma_db_grid()))

_register(ExperimentPreset(
    name="fig9-rate-outage-timing", figure="fig9",
    description="Rate outage of user 4 vs transmit SNR for timing offsets "
                "0, 0.6, 0.7, 0.8, 0.9 (2 BPCU)",
    kind="snr",
    series=tuple(SeriesSpec(label=f"tau{t:g}", tau=t)
                 for t in (0.0, 0.6, 0.7, 0.8, 0.9)),
    sweep_var="snr_db", sweep_values=_snr_grid()))

_register(ExperimentPreset(
    name="fig10-rate-outage-ipsic", figure="fig10",
    description="Rate outage vs transmit SNR for residual-SIC levels, perfect timing",
    kind="snr",
    series=tuple(SeriesSpec(label=f"ipsic{int(d)}dB", phi_eta_db=d)
                 for d in (-30.0, -20.0, -10.0)),
    sweep_var="snr_db", sweep_values=_snr_grid()))

_register(ExperimentPreset(
    name="fig11-rate-outage-tau05-ipsic", figure="fig11",
    description="Rate outage vs transmit SNR, timing offset 0.5 plus residual SIC",
    kind="snr",
    series=tuple(SeriesSpec(label=f"ipsic{int(d)}dB", tau=0.5, phi_eta_db=d)
                 for d in (-30.0, -20.0, -10.0)),
    sweep_var="snr_db", sweep_values=_snr_grid()))

_register(ExperimentPreset(
    name="fig12-rate-outage-tau07-ipsic", figure="fig12",
    description="Rate outage vs transmit SNR, timing offset 0.7 plus residual SIC",
    kind="snr",
    series=tuple(SeriesSpec(label=f"ipsic{int(d)}dB", tau=0.7, phi_eta_db=d)
                 for d in (-30.0, -20.0, -10.0)),
    sweep_var="snr_db", sweep_values=_snr_grid()))

_register(ExperimentPreset(
    name="fig13-rate-outage-ipcsi", figure="fig13",
    description="Rate outage vs transmit SNR for estimation-error levels, "
                "perfect timing and SIC",
    kind="snr",
    series=tuple(SeriesSpec(label=f"ipcsi{int(d)}dB", sigma_omega2_db=d)
                 for d in (-30.0, -20.0, -10.0)),
    sweep_var="snr_db", sweep_values=_snr_grid()))

_register(ExperimentPreset(
    name="fig14-complexity", figure="fig14",
    description="SIC-count comparison of the five cooperative schemes, K = 2..20",
    kind="complexity",
    sweep_var="K", sweep_values=tuple(float(k) for k in range(2, 21))))

_register(ExperimentPreset(
    name="asymptote-validity", figure="fig9-13 dotted lines",
    description="High-SNR approximations vs exact numeric outage in the "
                "valid-denominator regime (0.5 BPCU)",
    kind="asymptote",
    series=(SeriesSpec(label="perfect"),
            SeriesSpec(label="ipsic-20dB", phi_eta_db=-20.0),
            SeriesSpec(label="tau0.5", tau=0.5),
            SeriesSpec(label="tau0.5-ipsic-20dB", tau=0.5, phi_eta_db=-20.0),
            SeriesSpec(label="ipcsi-10dB", sigma_omega2_db=-10.0)),
    sweep_var="snr_db", sweep_values=(20.0, 30.0, 40.0, 50.0),
    upsilon=0.5))


def list_presets() -> str:
    lines = []
    for p in _PRESETS.values():
        lines.append(f"{p.name:32s} [{p.figure}] {p.description}")
        detail = f"    kind={p.kind} upsilon={p.upsilon:g} trials={p.trials}"
        if p.sweep_var:
            detail += f" sweep {p.sweep_var}={p.sweep_values[0]:g}..{p.sweep_values[-1]:g}"
        if p.series:
            detail += f" series=[{', '.join(s.label for s in p.series)}]"
        lines.append(detail)
    return "\n".join(lines)


def get_preset(name: str) -> ExperimentPreset:
    if name not in _PRESETS:
        raise KeyError(f"unknown preset {name!r}; see --list")
    return _PRESETS[name]


def preset_names() -> tuple[str, ...]:
    return tuple(_PRESETS)


def preset_to_json(p: ExperimentPreset) -> str:
    return json.dumps(asdict(p), indent=2)


def preset_from_json(text: str) -> ExperimentPreset:
    raw = json.loads(text)
    raw["series"] = tuple(SeriesSpec(**s) for s in raw["series"])
    raw["sweep_values"] = tuple(raw["sweep_values"])
    return ExperimentPreset(**raw)


# -- runners -------------------------------------------------------------------

_FMT = ".10g"


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return format(v, _FMT)
    return str(v)


def _write_csv(path: Path, meta: list[str], header: list[str], rows) -> None:
    lines = [f"# {m}" for m in meta]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


_OUTAGE_HEADER = ["scenario", "k", "sweep_var", "sweep_value", "outage_sim",
                  "ci95", "outage_exact", "outage_numeric", "outage_asymptotic",
                  "trials", "seed"]


def _series_config(base: SystemConfig, series: SeriesSpec) -> SystemConfig:
    if series.K == base.K:
        return base
    scaled = default_config(series.K)
    return replace(scaled, p_noma=base.p_noma, p_s=base.p_s, sigma2=base.sigma2,
                   zeta_h=base.zeta_h, zeta_g=base.zeta_g,
                   zeta_eta=base.zeta_eta, zeta_chi=base.zeta_chi)


def _analytic_columns(cfg, imp, k, upsilon, scheme, snr=None):
    if scheme != "stbc-cnoma":
        return None, None, None
    q = make_query(cfg, imp, k, upsilon, snr=snr)
    exact = outage_exact(q)
    numeric = outage_numeric(q)
    asym = None
    if snr is not None:
        try:
            asym = outage_asymptotic(q)
        except AsymptoticValidityError:
            asym = None
    return exact, numeric, asym


def _run_threshold(p: ExperimentPreset, cfg: SystemConfig, seed: int,
                   trials: int, workers: int, out_dir: Path) -> list[Path]:
    paths = []
    gammas = [db_to_linear(d) for d in p.sweep_values]
    for series in p.series:
        scfg = _series_config(cfg, series)
        imp = series.impairments()
        scen = Scenario(scheme=series.scheme, imp=imp)
        sims = outage_curve(scen, series.k, gammas, trials, seed, scfg,
                            workers=workers)
        rows = []
        for db, g, sim in zip(p.sweep_values, gammas, sims):
            upsilon = float(np.log2(1.0 + g))
            exact, numeric, _ = _analytic_columns(scfg, imp, series.k, upsilon,
                                                  series.scheme)
            rows.append([scen.label(), series.k, "gamma_th_db", db,
                         sim.outage_hat, sim.ci95_halfwidth, exact, numeric,
                         None, trials, seed])
        path = out_dir / f"{p.name}__{series.label}.csv"
        _write_csv(path, _meta(p, series, cfg, seed, trials), _OUTAGE_HEADER, rows)
        paths.append(path)
    return paths


def _run_snr(p: ExperimentPreset, cfg: SystemConfig, seed: int,
             trials: int, workers: int, out_dir: Path) -> list[Path]:
    paths = []
    gamma_th = 2.0 ** p.upsilon - 1.0
    for series in p.series:
        imp = series.impairments()
        scen = Scenario(scheme=series.scheme, imp=imp)
        rows = []
        for snr_db in p.sweep_values:
            snr = db_to_linear(snr_db)
            scfg = with_snr(_series_config(cfg, series), snr_db)
            sim = outage_curve(scen, series.k, [gamma_th], trials, seed, scfg,
                               workers=workers)[0]
            exact, numeric, asym = _analytic_columns(scfg, imp, series.k,
                                                     p.upsilon, series.scheme,
                                                     snr=snr)
            rows.append([scen.label(), series.k, "snr_db", snr_db,
                         sim.outage_hat, sim.ci95_halfwidth, exact, numeric,
                         asym, trials, seed])
        path = out_dir / f"{p.name}__{series.label}.csv"
        _write_csv(path, _meta(p, series, cfg, seed, trials), _OUTAGE_HEADER, rows)
        paths.append(path)
    return paths


def _run_asymptote(p: ExperimentPreset, cfg: SystemConfig, seed: int,
                   trials: int, workers: int, out_dir: Path) -> list[Path]:
    paths = []
    for series in p.series:
        imp = series.impairments()
        scen = Scenario(scheme=series.scheme, imp=imp)
        rows = []
        for snr_db in p.sweep_values:
            snr = db_to_linear(snr_db)
            scfg = with_snr(_series_config(cfg, series), snr_db)
            exact, numeric, asym = _analytic_columns(scfg, imp, series.k,
                                                     p.upsilon, series.scheme,
                                                     snr=snr)
            rows.append([scen.label(), series.k, "snr_db", snr_db, None, None,
                         exact, numeric, asym, None, seed])
        path = out_dir / f"{p.name}__{series.label}.csv"
        _write_csv(path, _meta(p, series, cfg, seed, trials), _OUTAGE_HEADER, rows)
        paths.append(path)
    return paths


def _run_pdf(p: ExperimentPreset, cfg: SystemConfig, seed: int,
             trials: int, workers: int, out_dir: Path) -> list[Path]:
    paths = []
    for series in p.series:
        scfg = _series_config(cfg, series)
        imp = series.impairments()
        scen = Scenario(scheme=series.scheme, imp=imp)
        hist = empirical_pdf(scen, series.k, trials, p.bins, seed, scfg,
                             workers=workers)
        mids = 0.5 * (hist.bin_edges[1:] + hist.bin_edges[:-1])
        rp = derive_rates(scfg, imp, series.k, p.upsilon)
        if imp.timing_imperfect:
            shape, scale = timing_gamma_parameters(rp, imp.eps1,
                                                   include_eta=imp.sic_imperfect)
            analytic = gamma_fit(shape, scale).pdf(mids)
        else:
            analytic = sum_l(rp.lambda_h, rp.lambda_i, rp.lambda_g).pdf(mids)
        rows = [[x, a, e] for x, a, e in zip(mids, analytic, hist.density)]
        path = out_dir / f"{p.name}__{series.label}.csv"
        _write_csv(path, _meta(p, series, cfg, seed, trials),
                   ["x", "pdf_analytic", "pdf_empirical"], rows)
        paths.append(path)
    return paths


def _run_complexity(p: ExperimentPreset, out_dir: Path, seed: int) -> list[Path]:
    header = ["K"] + [s.replace("-", "_") for s in complexity.SCHEMES]
    rows = []
    for K in p.sweep_values:
        K = int(K)
        rows.append([K] + [complexity.sic_count(s, K) for s in complexity.SCHEMES])
    path = out_dir / f"{p.name}.csv"
    _write_csv(path, [f"preset: {p.name}", f"figure: {p.figure}", p.description],
               header, rows)
    return [path]


def _meta(p: ExperimentPreset, series: SeriesSpec, cfg: SystemConfig,
          seed: int, trials: int) -> list[str]:
    return [
        f"preset: {p.name}",
        f"figure: {p.figure}",
        f"series: {series.label}",
        p.description,
        f"K={series.K} k={series.k} upsilon={p.upsilon:g}",
        f"p_noma={cfg.p_noma:.6g} W, p_s={cfg.p_s:.6g} W, sigma2={cfg.sigma2:.6g} W",
        f"seed={seed} trials={trials}",
    ]


def run(preset_name: str, overrides: dict | None = None, seed: int = DEFAULT_SEED,
        out_dir="results", trials: int | None = None, workers: int = 1,
        base_config: SystemConfig | None = None) -> list[Path]:
    """Execute a preset and return the written CSV paths."""
    p = get_preset(preset_name)
    cfg = base_config if base_config is not None else default_config()
    p, cfg = _apply_overrides(p, cfg, overrides or {})
    n = trials if trials is not None else p.trials
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for series in p.series:
        scfg = _series_config(cfg, series)
        problems = validate(scfg, series.impairments())
        if problems:
            raise ValueError(f"series {series.label!r} invalid: {problems}")
    if p.kind == "pdf":
        return _run_pdf(p, cfg, seed, n, workers, out)
    if p.kind == "threshold":
        return _run_threshold(p, cfg, seed, n, workers, out)
    if p.kind == "snr":
        return _run_snr(p, cfg, seed, n, workers, out)
    if p.kind == "asymptote":
        return _run_asymptote(p, cfg, seed, n, workers, out)
    if p.kind == "complexity":
        return _run_complexity(p, out, seed)
    raise ValueError(f"unknown preset kind {p.kind!r}")


_OVERRIDE_KEYS = ("p_noma_dbm", "p_s_dbm", "sigma2_dbm", "sigma2",
                  "bandwidth_hz", "snr_db", "upsilon", "trials", "bins")


def _apply_overrides(p: ExperimentPreset, cfg: SystemConfig,
                     overrides: dict) -> tuple[ExperimentPreset, SystemConfig]:
    for key, raw in overrides.items():
        if key not in _OVERRIDE_KEYS:
            raise ValueError(f"unknown override {key!r}; supported: {_OVERRIDE_KEYS}")
        val = float(raw)
        if key == "p_noma_dbm":
            cfg = replace(cfg, p_noma=dbm_to_watts(val))
        elif key == "p_s_dbm":
            cfg = replace(cfg, p_s=dbm_to_watts(val))
        elif key == "sigma2_dbm":
            cfg = replace(cfg, sigma2=dbm_to_watts(val))
        elif key == "sigma2":
            cfg = replace(cfg, sigma2=val)
        elif key == "bandwidth_hz":
            cfg = replace(cfg, sigma2=noise_power_watts(bandwidth_hz=val))
        elif key == "snr_db":
            cfg = with_snr(cfg, val)
        elif key == "upsilon":
            p = replace(p, upsilon=val)
        elif key == "trials":
            p = replace(p, trials=int(val))
        elif key == "bins":
            p = replace(p, bins=int(val))
    return p, cfg


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="stbc-cnoma",
        description="Link-level outage experiments for cooperative NOMA with "
                    "distributed pair coding")
    ap.add_argument("--list", action="store_true", help="list presets and exit")
    ap.add_argument("--preset", help="preset name to run")
    ap.add_argument("--dump-preset", metavar="NAME", help="print a preset as JSON")
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ap.add_argument("--trials", type=int, default=None)
    ap.add_argument("--out-dir", default="results")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--config", default=None,
                    help="base configuration file (key = value format)")
    ap.add_argument("--override", action="append", default=[], metavar="KEY=VALUE",
                    help=f"repeatable; keys: {', '.join(_OVERRIDE_KEYS)}")
    args = ap.parse_args(argv)

    try:
        if args.list:
            print(list_presets())
            return 0
        if args.dump_preset:
            print(preset_to_json(get_preset(args.dump_preset)))
            return 0
        if not args.preset:
            ap.print_usage()
            print("error: --preset, --list, or --dump-preset is required",
                  file=sys.stderr)
            return 2
        overrides = {}
        for item in args.override:
            if "=" not in item:
                raise ValueError(f"override must look like key=value, got {item!r}")
            key, val = item.split("=", 1)
            overrides[key.strip()] = val.strip()
        base = None
        if args.config:
            base, _ = load_config(args.config)
        paths = run(args.preset, overrides=overrides, seed=args.seed,
                    out_dir=args.out_dir, trials=args.trials,
                    workers=args.workers, base_config=base)
        for path in paths:
            print(path)
        return 0
    except (KeyError, ValueError, UnsupportedScenarioError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
