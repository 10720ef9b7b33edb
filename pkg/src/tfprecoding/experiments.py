"""
Named experiment presets and their CSV tables.

Configuration is a flat mapping of dotted keys (``scenario.n_fft=2048``).
Each preset declares its keys with typed defaults; anything else is
rejected. The resolved configuration is echoed at the top of every CSV as
``# key=value`` lines and :func:`read_header` parses it back.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from . import __version__
from .asymptotics import optimize_threshold, rate_inf_tf, rate_inf_tr, threshold_scan
from .channel import PowerDelayProfile, SpatialCorrelationSpec, etu_pdp, exponential_pdp, pdp_from_spec, read_pdp_table
from .dsp import OfdmConfig
from .finite_size import gamma_tf, gamma_tr, rate_approx
from .linksim import LinkScenario, mc_rate, run_link

__all__ = [
    "ConfigError",
    "UnknownPresetError",
    "ExperimentConfig",
    "Table",
    "PRESETS",
    "resolve_config",
    "parse_config_text",
    "run",
    "write_tables",
    "read_header",
    "find_crossing",
    "LINK_SCHEMES",
]


class ConfigError(ValueError):
    """Malformed configuration; ``key`` names the offending entry."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


class UnknownPresetError(LookupError):
    pass


# ----------------------------------------------------------------- values


def _format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, tuple):
        return ",".join(_format_value(x) for x in v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _parse_scalar(text: str, kind, key: str):
    text = text.strip()
    try:
        if kind is bool:
            low = text.lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(text)
        if kind is int:
            return int(text)
        if kind is float:
            return float(text)
        if not text:
            raise ValueError("empty value")
        return text
    except ValueError:
        raise ConfigError(key, f"cannot parse {text!r} as {kind.__name__}") from None


def _parse_value(text: str, default, key: str):
    if isinstance(default, tuple):
        kind = type(default[0]) if default else float
        parts = [p for p in text.split(",") if p.strip()]
        if not parts:
            raise ConfigError(key, "empty list")
        return tuple(_parse_scalar(p, kind, key) for p in parts)
    return _parse_scalar(text, type(default), key)


def parse_config_text(text: str, source: str = "<config>") -> dict[str, str]:
    """``key=value`` lines with ``#`` comments; returns raw strings."""
    out = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{n}", f"expected key=value, got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if not re.fullmatch(r"[A-Za-z_][\w]*(\.[A-Za-z_][\w]*)*", key):
            raise ConfigError(key or f"{source}:{n}", "invalid key")
        out[key] = value
    return out


# ----------------------------------------------------------------- config


@dataclass(frozen=True)
class ExperimentConfig:
    """A fully resolved run: preset, seed, output directory and every key."""

    preset: str
    seed: int
    out: str
    full: bool
    values: tuple = ()

    @property
    def mode(self) -> str:
        return PRESETS[self.preset].mode

    def get(self, key: str):
        return dict(self.values)[key]

    def header_lines(self) -> list[str]:
        lines = [
            f"version={__version__}",
            f"preset={self.preset}",
            f"mode={self.mode}",
            f"seed={self.seed}",
            f"out={self.out}",
            f"full={_format_value(self.full)}",
        ]
        lines += [f"{k}={_format_value(v)}" for k, v in self.values]
        return lines


TOP_LEVEL = ("preset", "seed", "out", "full")


def resolve_config(
    preset: str | None = None,
    seed: int | None = None,
    out: str | None = None,
    full: bool | None = None,
    file_values: dict[str, str] | None = None,
    overrides: dict[str, str] | None = None,
) -> ExperimentConfig:
    """Merge preset defaults, the full-scale profile, a config file and overrides.

    Later sources win: defaults < ``--full`` profile < config file <
    ``overrides`` < explicit ``preset``/``seed``/``out``/``full`` arguments.
    """
    raw = dict(file_values or {})
    raw.update(overrides or {})
    name = preset if preset is not None else raw.get("preset")
    if name is None:
        raise ConfigError("preset", "no preset given")
    if name not in PRESETS:
        raise UnknownPresetError(f"unknown preset {name!r}; available: {', '.join(PRESETS)}")
    p = PRESETS[name]
    if full is None:
        full = _parse_scalar(raw["full"], bool, "full") if "full" in raw else False
    if seed is None:
        seed = _parse_scalar(raw["seed"], int, "seed") if "seed" in raw else 0
    if seed < 0:
        raise ConfigError("seed", "must be non-negative")
    if out is None:
        out = raw.get("out", "results")

    values = dict(p.defaults)
    if full:
        values.update(p.full)
    for key, text in raw.items():
        if key in TOP_LEVEL or key in ("version", "mode"):
            continue
        if key not in values:
            raise ConfigError(key, f"unknown key for preset {name}")
        values[key] = _parse_value(text, p.defaults[key], key)
    cfg = ExperimentConfig(name, int(seed), str(out), bool(full), tuple(sorted(values.items())))
    p.validate(cfg)
    return cfg


def read_header(path) -> ExperimentConfig:
    """Re-parse the ``# key=value`` block of a CSV written by :func:`write_tables`."""
    raw = {}
    with open(path, newline="") as fh:
        for line in fh:
            if not line.startswith("#"):
                break
            body = line[1:].strip()
            if "=" in body:
                k, v = body.split("=", 1)
                raw[k.strip()] = v.strip()
    return resolve_config(file_values=raw)


# ----------------------------------------------------------------- tables


@dataclass
class Table:
    name: str
    columns: list[str]
    rows: list[list] = field(default_factory=list)

    def add(self, *row):
        if len(row) != len(self.columns):
            raise ValueError(f"{self.name}: expected {len(self.columns)} values, got {len(row)}")
        self.rows.append(list(row))


def _cell(v) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (np.integer,)):
        return str(int(v))
    if v is None:
        return ""
    return str(v)


def write_tables(cfg: ExperimentConfig, tables: list[Table]) -> list[Path]:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    header = "".join(f"# {line}\n" for line in cfg.header_lines())
    paths = []
    for t in tables:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(t.columns)
        w.writerows([[_cell(v) for v in row] for row in t.rows])
        path = out / f"{t.name}.csv"
        path.write_text(header + buf.getvalue())
        paths.append(path)
    return paths


# ----------------------------------------------------------------- helpers


def _ofdm(cfg: ExperimentConfig, n_cp: int | None = None) -> OfdmConfig:
    g = cfg.get
    return OfdmConfig(g("scenario.n_fft"), g("scenario.n_cp") if n_cp is None else n_cp, g("scenario.n_sc"), g("scenario.scs_hz"))


def _pdp(cfg: ExperimentConfig, ofdm: OfdmConfig) -> PowerDelayProfile:
    name = cfg.get("scenario.pdp")
    if name == "etu":
        return etu_pdp(ofdm)
    if name == "exponential":
        return exponential_pdp(ofdm.n_fft)
    path = Path(name)
    if not path.is_file():
        raise ConfigError("scenario.pdp", f"expected 'etu', 'exponential' or a PDP table path, got {name!r}")
    delays, powers = read_pdp_table(path)
    return pdp_from_spec(delays, powers, ofdm)


def _db(x):
    return 10.0 ** (np.asarray(x, dtype=float) / 10.0)


def _point_seed(seed: int, *labels: int) -> int:
    return int(np.random.SeedSequence([seed, *labels]).generate_state(1, np.uint64)[0])


def find_crossing(diff: Callable[[int], float], lo: int, hi: int) -> int | None:
    """Smallest integer ``n`` in ``[lo, hi]`` with ``diff(n) <= 0``.

    Assumes ``diff`` changes sign at most once; returns ``None`` when it is
    still positive at ``hi`` and ``lo`` when it is already non-positive there.
    """
    if diff(lo) <= 0:
        return lo
    if diff(hi) > 0:
        return None
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if diff(mid) > 0:
            lo = mid
        else:
            hi = mid
    return hi


# link scheme labels -> (scheme, CP key); TF uses link.tau_tr
LINK_SCHEMES = {
    "F-normal": ("F", "scenario.n_cp"),
    "F-extended": ("F", "scenario.n_cp_extended"),
    "TF": ("TF", "scenario.n_cp"),
    "TR": ("TR", "scenario.n_cp"),
    "TR-noCP": ("TR-noCP", "scenario.n_cp"),
}


def _link_scenario(cfg, label, n_t, qam, snr_db, trials, seed, rho=0.0, tau_tr=None):
    if label not in LINK_SCHEMES:
        raise ConfigError("link.schemes", f"unknown scheme {label!r}; expected one of {', '.join(LINK_SCHEMES)}")
    scheme, cp_key = LINK_SCHEMES[label]
    ofdm = _ofdm(cfg, cfg.get(cp_key))
    pdp = _pdp(cfg, ofdm)
    return LinkScenario(
        ofdm,
        pdp,
        scheme,
        n_t,
        tau_tr=tau_tr if scheme == "TF" else None,
        correlation=SpatialCorrelationSpec(rho) if rho > 0 else None,
        qam_order=qam,
        snr_db=snr_db,
        trials=trials,
        seed=seed,
        bler_unit=cfg.get("link.bler_unit"),
    )


# ----------------------------------------------------------------- presets

ETU_SCENARIO = {
    "scenario.n_fft": 2048,
    "scenario.n_cp": 144,
    "scenario.n_sc": 600,
    "scenario.scs_hz": 60e3,
    "scenario.pdp": "etu",
}


def _run_fig1(cfg: ExperimentConfig) -> list[Table]:
    ofdm = _ofdm(cfg)
    pdp = _pdp(cfg, ofdm)
    sweep = Table("fig1", ["snr_op_db", "tau_tr", "rate_inf_bps_hz", "provenance"])
    best = Table("fig1_argmax", ["snr_op_db", "tau_max", "rate_inf_bps_hz", "provenance"])
    prof = Table("fig1_pdp", ["delay_samples", "energy", "provenance"])
    for db in cfg.get("sweep.snr_op_db"):
        snr = float(_db(db))
        taus, rates = threshold_scan(pdp, snr, ofdm)
        for tau, r in zip(taus, rates):
            sweep.add(db, int(tau), r, "analysis")
        tau_max = optimize_threshold(pdp, snr, ofdm)
        best.add(db, tau_max, rate_inf_tf(pdp, tau_max, snr, ofdm), "analysis")
    for d, e in zip(pdp.delays, pdp.energies):
        prof.add(int(d), e, "analysis")
    return [sweep, best, prof]


def _run_fig2(cfg: ExperimentConfig) -> list[Table]:
    normal = _ofdm(cfg)
    extended = _ofdm(cfg, cfg.get("scenario.n_cp_extended"))
    pdp = _pdp(cfg, normal)
    t = Table("fig2", ["snr_op_db", "scheme", "n_cp", "tau_tr", "rate_inf_bps_hz", "provenance"])
    for db in cfg.get("sweep.snr_op_db"):
        snr = float(_db(db))
        tau_opt = optimize_threshold(pdp, snr, normal)
        t.add(db, "F-normal", normal.n_cp, pdp.L, rate_inf_tf(pdp, pdp.L, snr, normal), "analysis")
        t.add(db, "F-extended", extended.n_cp, pdp.L, rate_inf_tf(pdp, pdp.L, snr, extended), "analysis")
        t.add(db, "TF-cp", normal.n_cp, normal.n_cp + 1, rate_inf_tf(pdp, normal.n_cp + 1, snr, normal), "analysis")
        t.add(db, "TF-opt", normal.n_cp, tau_opt, rate_inf_tf(pdp, tau_opt, snr, normal), "analysis")
        t.add(db, "TR-noCP", 0, None, rate_inf_tr(pdp, snr), "analysis")
    return [t]


def _run_fig3(cfg: ExperimentConfig) -> list[Table]:
    ofdm = _ofdm(cfg)
    pdp = _pdp(cfg, ofdm)
    tau = cfg.get("scenario.tau_tr")
    dbs = cfg.get("sweep.snr_op_db")
    trials = cfg.get("mc.trials")
    t = Table("fig3", ["snr_op_db", "n_t", "scheme", "curve", "rate_bps_hz", "halfwidth", "provenance"])
    for k, n_t in enumerate(cfg.get("sweep.n_t")):
        for s_idx, scheme in enumerate(("TF", "TR")):
            sc = LinkScenario(ofdm, pdp, scheme, n_t, tau_tr=tau, snr_db=dbs, trials=trials,
                              seed=_point_seed(cfg.seed, k, s_idx))
            mc = mc_rate(sc)
            for j, db in enumerate(dbs):
                snr = float(_db(db))
                if scheme == "TF":
                    approx = rate_approx(gamma_tf(pdp, tau, n_t, snr, ofdm), ofdm)
                    asym = rate_inf_tf(pdp, tau, snr, ofdm)
                else:
                    approx = rate_approx(gamma_tr(pdp, n_t, snr, ofdm), ofdm)
                    asym = rate_inf_tr(pdp, snr, ofdm)
                t.add(db, n_t, scheme, "montecarlo", mc.rate_bps_hz[j], mc.halfwidth[j], "montecarlo")
                t.add(db, n_t, scheme, "approximation", approx, None, "analysis")
                t.add(db, n_t, scheme, "asymptote", asym, None, "analysis")
    return [t]


def _fig5_rates(pdp, n_t, snr, normal, tau):
    nocp = normal.with_cp(0)
    return {
        "TF": rate_approx(gamma_tf(pdp, tau, n_t, snr, normal), normal),
        "TR": rate_approx(gamma_tr(pdp, n_t, snr, normal), normal),
        "TR-noCP": rate_approx(gamma_tr(pdp, n_t, snr, nocp), nocp),
    }


def _run_fig5(cfg: ExperimentConfig) -> list[Table]:
    normal = _ofdm(cfg)
    nocp = normal.with_cp(0)
    pdp = _pdp(cfg, normal)
    t = Table("fig5", ["snr_op_db", "n_t", "scheme", "n_cp", "tau_tr", "curve", "rate_bps_hz", "provenance"])
    cross = Table("fig5_crossings", ["snr_op_db", "tau_tr", "n_t_cross", "provenance"])
    n_cp = {"TF": normal.n_cp, "TR": normal.n_cp, "TR-noCP": 0}
    for db in cfg.get("sweep.snr_op_db"):
        snr = float(_db(db))
        tau = optimize_threshold(pdp, snr, normal)
        asym = {"TF": rate_inf_tf(pdp, tau, snr, normal), "TR": rate_inf_tr(pdp, snr, normal), "TR-noCP": rate_inf_tr(pdp, snr)}
        for n_t in cfg.get("sweep.n_t"):
            for scheme, r in _fig5_rates(pdp, n_t, snr, normal, tau).items():
                tt = tau if scheme == "TF" else None
                t.add(db, n_t, scheme, n_cp[scheme], tt, "approximation", r, "analysis")
                t.add(db, n_t, scheme, n_cp[scheme], tt, "asymptote", asym[scheme], "analysis")

        def diff(n_t):
            tf = rate_approx(gamma_tf(pdp, tau, n_t, snr, normal), normal)
            return tf - rate_approx(gamma_tr(pdp, n_t, snr, nocp), nocp)

        cross.add(db, tau, find_crossing(diff, 1, cfg.get("crossing.n_t_max")), "analysis")
    return [t, cross]


def _run_fig6(cfg: ExperimentConfig) -> list[Table]:
    normal = _ofdm(cfg)
    nocp = normal.with_cp(0)
    pdp = _pdp(cfg, normal)
    n_t = cfg.get("scenario.n_t")
    t = Table("fig6", ["snr_op_db", "n_t", "scheme", "n_cp", "tau_tr", "curve", "rate_bps_hz", "provenance"])
    for db in cfg.get("sweep.snr_op_db"):
        snr = float(_db(db))
        tau = optimize_threshold(pdp, snr, normal)
        rows = [
            ("TF", normal.n_cp, tau, rate_approx(gamma_tf(pdp, tau, n_t, snr, normal), normal), rate_inf_tf(pdp, tau, snr, normal)),
            ("F", normal.n_cp, pdp.L, rate_approx(gamma_tf(pdp, pdp.L, n_t, snr, normal), normal), rate_inf_tf(pdp, pdp.L, snr, normal)),
            ("TR", normal.n_cp, None, rate_approx(gamma_tr(pdp, n_t, snr, normal), normal), rate_inf_tr(pdp, snr, normal)),
            ("TR-noCP", 0, None, rate_approx(gamma_tr(pdp, n_t, snr, nocp), nocp), rate_inf_tr(pdp, snr)),
        ]
        for scheme, cp, tau_tr, approx, asym in rows:
            t.add(db, n_t, scheme, cp, tau_tr, "approximation", approx, "analysis")
            t.add(db, n_t, scheme, cp, tau_tr, "asymptote", asym, "analysis")
    return [t]


LINK_COLUMNS = [
    "scheme", "n_cp", "qam", "n_t", "rho", "snr_op_db", "snr_db", "ser", "ser_halfwidth",
    "bler", "bler_halfwidth", "throughput_bps_hz", "n_subframes", "provenance",
]


def _link_rows(table, cfg, labels, n_t, qams, rhos, tag):
    dbs = cfg.get("sweep.snr_op_db")
    points = [(label, qam, rho) for label in labels for qam in qams for rho in rhos]
    for k, (label, qam, rho) in enumerate(points):
        sc = _link_scenario(cfg, label, n_t, qam, dbs, cfg.get("link.trials"), _point_seed(cfg.seed, tag, k),
                            rho=rho, tau_tr=cfg.get("link.tau_tr"))
        res = run_link(sc)
        snr_db = 10.0 * np.log10(sc.snr_per_antenna)
        for j, db in enumerate(dbs):
            table.add(label, sc.link_cfg.n_cp, qam, n_t, rho, db, snr_db[j], res.ser[j], res.ser_halfwidth[j],
                      res.bler[j], res.bler_halfwidth[j], res.throughput_bps_hz[j], sc.trials, "montecarlo")


def _run_fig7(cfg: ExperimentConfig) -> list[Table]:
    t = Table("fig7", LINK_COLUMNS)
    _link_rows(t, cfg, cfg.get("link.schemes"), cfg.get("scenario.n_t"), cfg.get("link.qam"), (0.0,), 7)
    return [t]


def _run_fig8(cfg: ExperimentConfig) -> list[Table]:
    rates = Table("fig8", ["scheme", "n_cp", "tau_tr", "rho", "n_t", "snr_op_db", "rate_bps_hz", "halfwidth", "n_realizations", "provenance"])
    labels = cfg.get("link.schemes")
    dbs = cfg.get("sweep.snr_op_db")
    for s_idx, label in enumerate(labels):
        for r_idx, rho in enumerate(cfg.get("scenario.rho")):
            for k, n_t in enumerate(cfg.get("sweep.n_t")):
                sc = _link_scenario(cfg, label, n_t, 4, dbs, cfg.get("mc.trials"), _point_seed(cfg.seed, 8, s_idx, r_idx, k),
                                    rho=rho, tau_tr=cfg.get("link.tau_tr"))
                mc = mc_rate(sc)
                for j, db in enumerate(dbs):
                    rates.add(label, sc.link_cfg.n_cp, sc.tau_tr, rho, n_t, db, mc.rate_bps_hz[j], mc.halfwidth[j], mc.n_realizations, "montecarlo")
    link = Table("fig8_link", LINK_COLUMNS)
    _link_rows(link, cfg, labels, cfg.get("scenario.n_t"), cfg.get("link.qam"), cfg.get("scenario.rho"), 88)
    return [rates, link]


def _check_positive(cfg: ExperimentConfig, *keys):
    for key in keys:
        v = cfg.get(key)
        vals = v if isinstance(v, tuple) else (v,)
        if any(x <= 0 for x in vals):
            raise ConfigError(key, "must be positive")


def _check_common(cfg: ExperimentConfig):
    _check_positive(cfg, "scenario.n_fft", "scenario.n_sc", "scenario.scs_hz")
    if not 0 <= cfg.get("scenario.n_cp") < cfg.get("scenario.n_fft"):
        raise ConfigError("scenario.n_cp", "must satisfy 0 <= n_cp < n_fft")
    if cfg.get("scenario.n_sc") > cfg.get("scenario.n_fft"):
        raise ConfigError("scenario.n_sc", "must not exceed n_fft")
    try:
        ofdm = _ofdm(cfg)
    except ValueError as exc:
        raise ConfigError("scenario", str(exc)) from None
    try:
        _pdp(cfg, ofdm)
    except ConfigError:
        raise
    except (ValueError, OSError) as exc:
        raise ConfigError("scenario.pdp", str(exc)) from None


@dataclass(frozen=True)
class Preset:
    name: str
    mode: str
    description: str
    runner: Callable[[ExperimentConfig], list[Table]]
    defaults: dict
    full: dict = field(default_factory=dict)
    positive: tuple = ()

    def validate(self, cfg: ExperimentConfig):
        _check_common(cfg)
        _check_positive(cfg, *self.positive)
        values = dict(cfg.values)
        if "link.schemes" in values:
            bad = [s for s in values["link.schemes"] if s not in LINK_SCHEMES]
            if bad:
                raise ConfigError("link.schemes", f"unknown scheme {bad[0]!r}; expected one of {', '.join(LINK_SCHEMES)}")
        if "link.qam" in values and any(q not in (4, 16, 64) for q in values["link.qam"]):
            raise ConfigError("link.qam", "QAM order must be 4, 16 or 64")
        if "scenario.rho" in values and any(not 0 <= r < 1 for r in values["scenario.rho"]):
            raise ConfigError("scenario.rho", "correlation must lie in [0, 1)")
        if values.get("link.bler_unit", "ofdm_symbol") not in ("ofdm_symbol", "subframe"):
            raise ConfigError("link.bler_unit", "expected 'ofdm_symbol' or 'subframe'")
        if "scenario.n_cp_extended" in values and not 0 <= values["scenario.n_cp_extended"] < values["scenario.n_fft"]:
            raise ConfigError("scenario.n_cp_extended", "must satisfy 0 <= n_cp_extended < n_fft")


LINK_DEFAULTS = {
    **ETU_SCENARIO,
    "scenario.n_cp_extended": 512,
    "scenario.n_t": 64,
    "link.tau_tr": 145,
    "link.schemes": ("F-normal", "F-extended", "TF", "TR", "TR-noCP"),
    "link.qam": (64,),
    "link.trials": 4,
    "link.bler_unit": "ofdm_symbol",
    "sweep.snr_op_db": (10.0, 20.0, 30.0, 40.0),
}

PRESETS: dict[str, Preset] = {
    p.name: p
    for p in [
        Preset(
            "fig1", "analysis", "asymptotic TF rate versus truncation threshold on ETU",
            _run_fig1,
            {**ETU_SCENARIO, "sweep.snr_op_db": (5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0)},
        ),
        Preset(
            "fig2", "analysis", "asymptotic rates of F, TF and TR versus SNR_op",
            _run_fig2,
            {**ETU_SCENARIO, "scenario.n_cp_extended": 512, "sweep.snr_op_db": tuple(float(x) for x in range(-10, 45, 5))},
            {"sweep.snr_op_db": tuple(float(x) for x in np.arange(-10.0, 40.5, 1.0))},
        ),
        Preset(
            "fig3", "montecarlo", "finite-size approximations against Monte-Carlo rates",
            _run_fig3,
            {
                "scenario.n_fft": 32, "scenario.n_cp": 2, "scenario.n_sc": 12, "scenario.scs_hz": 60e3,
                "scenario.pdp": "exponential", "scenario.tau_tr": 4,
                "sweep.n_t": (10, 20, 50, 100, 200), "sweep.snr_op_db": (25.0, 30.0, 35.0), "mc.trials": 200,
            },
            {"sweep.n_t": tuple(range(10, 201, 10)), "mc.trials": 2000},
            ("scenario.tau_tr", "sweep.n_t", "mc.trials"),
        ),
        Preset(
            "fig5", "analysis", "rate approximations versus n_t on ETU, with TF/TR-noCP crossings",
            _run_fig5,
            {
                **ETU_SCENARIO,
                "sweep.n_t": (8, 16, 32, 64, 128, 256, 512, 1024),
                "sweep.snr_op_db": (25.0, 30.0, 35.0, 40.0),
                "crossing.n_t_max": 4096,
            },
            {"sweep.n_t": tuple(int(x) for x in np.unique(np.round(np.geomspace(1, 1024, 61))))},
            ("sweep.n_t", "crossing.n_t_max"),
        ),
        Preset(
            "fig6", "analysis", "rate approximations versus SNR_op at fixed n_t on ETU",
            _run_fig6,
            {**ETU_SCENARIO, "scenario.n_t": 64, "sweep.snr_op_db": tuple(float(x) for x in range(-10, 45, 5))},
            {"sweep.snr_op_db": tuple(float(x) for x in np.arange(-10.0, 40.5, 1.0))},
            ("scenario.n_t",),
        ),
        Preset(
            "fig7", "link", "link-level SER, BLER and throughput on ETU",
            _run_fig7,
            dict(LINK_DEFAULTS),
            {"link.qam": (4, 16, 64), "link.trials": 100, "sweep.snr_op_db": tuple(float(x) for x in range(0, 42, 2))},
            ("scenario.n_t", "link.tau_tr", "link.trials"),
        ),
        Preset(
            "fig8", "link", "spatial correlation: Monte-Carlo rates versus n_t and link-level SER",
            _run_fig8,
            {
                **LINK_DEFAULTS,
                "link.schemes": ("F-normal", "TF", "TR", "TR-noCP"),
                "scenario.rho": (0.0, 0.9),
                "sweep.n_t": (16, 64, 128),
                "sweep.snr_op_db": (35.0,),
                "mc.trials": 20,
                "link.trials": 2,
            },
            {"sweep.n_t": (16, 32, 64, 128, 256, 512), "mc.trials": 200, "link.trials": 50,
             "sweep.snr_op_db": tuple(float(x) for x in range(0, 42, 5))},
            ("scenario.n_t", "link.tau_tr", "link.trials", "sweep.n_t", "mc.trials"),
        ),
    ]
}


def run(cfg: ExperimentConfig) -> list[Path]:
    """Run the preset and write its tables under ``cfg.out``."""
    tables = PRESETS[cfg.preset].runner(cfg)
    return write_tables(cfg, tables)
