"""Named scenarios: configuration, runners and table output."""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__
from .core import CHANNELS, Channel, ConfigError, Lattice, PhysicalConstants
from .dynamics import EvolutionLaw, evolve, rms_width, circular_mean, times_on_grid
from .lorentz import boost_state, covariance_two_path, doppler_factor
from .observables import (SNAPSHOT_COLUMNS, field_expectation, fit_kernel_slope,
                          kernel_asymptote, kernel_real_space, single_excitation_spectra)
from .states import PacketSpec, StateVector, build_packet, inner_product, read_samples_csv

log = logging.getLogger(__name__)

SCENARIOS = ("orthogonality", "dispersion-compare", "kernel", "boost", "spectra", "propagate")
MAX_BOOST_BETA = 0.6


@dataclass
class ScenarioConfig:
    n: int = 4096
    length: float = 200.0
    units: str = "natural"
    area: float = 1.0
    packets: list = field(default_factory=list)
    t0: float = 0.0
    t1: float | None = None
    samples: int = 21
    snap: bool = True
    law: str = "blip"
    kind: str = "single"
    beta: float = 0.3
    pad: int = 8
    out: str | None = None
    format: str = "csv"

    def __post_init__(self):
        if self.units not in ("natural", "si"):
            raise ConfigError(f"units must be 'natural' or 'si', got {self.units!r}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be 'csv' or 'json', got {self.format!r}")
        if int(self.samples) != self.samples or self.samples < 1:
            raise ConfigError("samples must be a positive integer")
        if self.kind not in ("single", "coherent"):
            raise ConfigError(f"kind must be 'single' or 'coherent', got {self.kind!r}")
        if self.law not in ("blip", "standard"):
            raise ConfigError(f"law must be 'blip' or 'standard', got {self.law!r}")
        if not (isinstance(self.n, (int, np.integer)) and not isinstance(self.n, bool)):
            raise ConfigError(f"n must be an integer, got {self.n!r}")

    def lattice(self) -> Lattice:
        return Lattice(int(self.n), float(self.length))

    def constants(self) -> PhysicalConstants:
        if self.units == "si":
            return PhysicalConstants.si(area=self.area)
        return PhysicalConstants(area=self.area)

    def resolved(self) -> dict:
        d = asdict(self)
        d["packets"] = [_packet_to_dict(p) for p in self.packets]
        return d


def _packet_to_dict(p: PacketSpec) -> dict:
    return {"shape": p.shape, "center": p.center, "width": p.width, "carrier": p.carrier,
            "phase": p.phase, "channel": p.channel.label(), "amplitude": p.amplitude}


def _packet_from_dict(d: dict, base: Path | None) -> PacketSpec:
    d = dict(d)
    unknown = set(d) - {"shape", "center", "width", "carrier", "phase", "channel",
                        "amplitude", "samples"}
    if unknown:
        raise ConfigError(f"unknown packet keys: {sorted(unknown)}")
    if "channel" in d:
        d["channel"] = Channel.parse(str(d["channel"]))
    if d.get("shape") == "custom":
        src = Path(d.get("samples", ""))
        if base is not None and not src.is_absolute():
            src = base / src
        try:
            d["samples"] = read_samples_csv(src)
        except OSError as exc:
            raise ConfigError(f"cannot read packet samples: {exc}") from exc
        d.setdefault("width", 1.0)
    try:
        return PacketSpec(**d)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def load_config(data: dict | None = None, overrides: dict | None = None,
                base: Path | None = None) -> ScenarioConfig:
    """Build a config from a JSON-like mapping plus flat overrides."""
    data = dict(data or {})
    flat: dict[str, Any] = {}
    lattice = data.pop("lattice", {})
    if not isinstance(lattice, dict):
        raise ConfigError("'lattice' must be an object")
    flat.update({k: lattice[k] for k in ("n", "length") if k in lattice})
    units = data.pop("units", None)
    if isinstance(units, dict):
        flat["units"] = units.get("system", "natural")
        if "area" in units:
            flat["area"] = units["area"]
    elif units is not None:
        flat["units"] = units
    time = data.pop("time", {})
    flat.update({k: time[k] for k in ("t0", "t1", "samples", "snap") if k in time})
    output = data.pop("output", {})
    if "path" in output:
        flat["out"] = output["path"]
    if "format" in output:
        flat["format"] = output["format"]
    packets = data.pop("packets", [])
    flat["packets"] = [_packet_from_dict(p, base) for p in packets]
    known = {f for f in ScenarioConfig.__dataclass_fields__}
    for k, v in data.items():
        if k not in known:
            raise ConfigError(f"unknown config key {k!r}")
        flat[k] = v
    for k, v in (overrides or {}).items():
        if v is not None:
            flat[k] = v
    try:
        return ScenarioConfig(**flat)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


@dataclass
class ScenarioResult:
    columns: list[str]
    rows: list[list]
    summary: dict = field(default_factory=dict)


def _times(cfg: ScenarioConfig, lat: Lattice, consts: PhysicalConstants,
           default_t1: float) -> np.ndarray:
    t1 = default_t1 if cfg.t1 is None else cfg.t1
    if cfg.snap:
        return times_on_grid(cfg.t0, t1, cfg.samples, lat.dx, consts.c)
    return np.linspace(cfg.t0, t1, cfg.samples) if cfg.samples > 1 else np.array([cfg.t0])


def overlap_table(psi1: StateVector, psi2: StateVector, times, law,
                  consts: PhysicalConstants) -> list[list[float]]:
    """Rows ``(t, |<psi1(t)|psi2(t)>|, density overlap)``.

    The density overlap ``dx * sum sqrt(rho1 rho2)`` ignores channel labels;
    it approaches 1 when the packets coincide in space.
    """
    rows = []
    lat = psi1.lattice
    for t in times:
        a = evolve(psi1, t, law, consts).position()
        b = evolve(psi2, t, law, consts).position()
        rho_a = np.sum(np.abs(a.amplitudes) ** 2, axis=0)
        rho_b = np.sum(np.abs(b.amplitudes) ** 2, axis=0)
        dens = float(lat.dx * np.sum(np.sqrt(rho_a * rho_b)))
        rows.append([float(t), abs(inner_product(a, b)), dens])
    return rows


def default_pair(a: float = 50.0, width: float = 4.0, carrier: float = 10.0,
                 phase: float = 0.0) -> list[PacketSpec]:
    return [PacketSpec(center=-a, width=width, carrier=carrier, channel=Channel(1, "H")),
            PacketSpec(center=a, width=width, carrier=carrier, phase=phase,
                       channel=Channel(-1, "H"))]


def default_packets(scenario: str, lattice: Lattice) -> list[PacketSpec]:
    if scenario == "orthogonality":
        return default_pair()
    if scenario == "dispersion-compare":
        return [PacketSpec(center=0.0, width=2.0 * lattice.dx, carrier=0.0)]
    if scenario in ("boost", "propagate"):
        return [PacketSpec(center=0.0, width=4.0, carrier=10.0)]
    return []


def default_t1(scenario: str, cfg: ScenarioConfig) -> float | None:
    c = cfg.constants().c
    if scenario == "orthogonality":
        specs = cfg.packets or default_pair()
        return 2.0 * abs(specs[0].center) / c
    if scenario in ("dispersion-compare", "propagate"):
        return cfg.length / (4.0 * c)
    return None


def run_orthogonality(cfg: ScenarioConfig) -> ScenarioResult:
    lat, consts = cfg.lattice(), cfg.constants()
    specs = cfg.packets or default_packets("orthogonality", lat)
    if len(specs) != 2:
        raise ConfigError("orthogonality needs exactly two packets")
    p1, p2 = specs
    if p1.channel.s == p2.channel.s:
        raise ConfigError("orthogonality needs packets of opposite direction s")
    if not np.isclose(p1.center, -p2.center, rtol=0, atol=1e-12 * lat.length):
        raise ConfigError("orthogonality needs mirrored centres +-a")
    a = abs(p1.center)
    meet = a / consts.c
    times = _times(cfg, lat, consts, 2.0 * meet)
    times = np.unique(np.append(times, meet))
    psi1 = build_packet(p1, lat, "single")
    psi2 = build_packet(p2, lat, "single")
    rows = overlap_table(psi1, psi2, times, cfg.law, consts)
    return ScenarioResult(["t", "overlap", "density_overlap"], rows,
                          {"meeting_time": meet,
                           "max_overlap": max(r[1] for r in rows),
                           "max_density_overlap": max(r[2] for r in rows)})


def spectral_straddle(st: StateVector, channel: Channel, threshold: float = 1e-6) -> bool:
    mom = st.momentum()
    w = np.abs(mom[channel]) ** 2
    total = w.sum()
    ks = mom.lattice.ks
    return bool(w[ks < 0].sum() > threshold * total and w[ks > 0].sum() > threshold * total)


def width_table(st: StateVector, channel: Channel, times,
                consts: PhysicalConstants) -> list[list[float]]:
    """Rows ``(t, width under blip law, width under standard law)``."""
    pos = st.position()
    w0 = np.abs(pos[channel]) ** 2
    centre = circular_mean(w0 / w0.sum(), pos.lattice.xs, pos.lattice.length)
    rows = []
    for t in times:
        wb = rms_width(evolve(pos, t, EvolutionLaw.BLIP, consts), channel)
        ws = rms_width(evolve(pos, t, EvolutionLaw.STANDARD, consts), channel, center=centre)
        rows.append([float(t), wb, ws])
    return rows


def run_dispersion_compare(cfg: ScenarioConfig) -> ScenarioResult:
    lat, consts = cfg.lattice(), cfg.constants()
    specs = cfg.packets or default_packets("dispersion-compare", lat)
    if len(specs) != 1:
        raise ConfigError("dispersion-compare needs exactly one packet")
    spec = specs[0]
    st = build_packet(spec, lat, "single")
    straddles = spectral_straddle(st, spec.channel)
    if not straddles:
        log.warning("packet spectrum does not straddle k=0; both laws will agree")
    times = _times(cfg, lat, consts, lat.length / (4.0 * consts.c))
    rows = width_table(st, spec.channel, times, consts)
    wb = np.array([r[1] for r in rows])
    return ScenarioResult(["t", "width_blip", "width_standard"], rows,
                          {"straddles_zero": straddles,
                           "blip_width_relative_drift": float(np.abs(wb / wb[0] - 1).max()),
                           "standard_width_growth": rows[-1][2] / rows[0][2]})


def run_kernel(cfg: ScenarioConfig) -> ScenarioResult:
    lat, consts = cfg.lattice(), cfg.constants()
    if lat.n < 1024:
        raise ConfigError("kernel scenario needs n >= 1024")
    u, R = kernel_real_space(lat, consts, pad=int(cfg.pad))
    lo, hi = 8.0 * lat.dx, lat.length / 8.0
    slope = fit_kernel_slope(u, R, lo, hi)
    nz = u != 0
    ratio = R.real[nz] / kernel_asymptote(u[nz], consts)
    rows = [[float(x), float(r)] for x, r in zip(u, R.real)]
    return ScenarioResult(["u", "R"], rows, {
        "slope": slope, "fit_window": [lo, hi],
        "imag_residue": float(np.abs(R.imag).max()),
        "max_R_off_origin": float(R.real[nz].max()),
        "max_abs_ratio_to_asymptote_minus_one_in_window":
            float(np.abs(ratio[(np.abs(u[nz]) >= lo) & (np.abs(u[nz]) <= hi)] - 1).max()),
    })


def run_boost(cfg: ScenarioConfig, beta: float | None = None) -> ScenarioResult:
    beta = cfg.beta if beta is None else beta
    if not abs(beta) <= MAX_BOOST_BETA:
        raise ConfigError(f"|beta| must be <= {MAX_BOOST_BETA}, got {beta}")
    lat, consts = cfg.lattice(), cfg.constants()
    specs = cfg.packets or default_packets("boost", lat)
    single = _superpose([build_packet(p, lat, "single") for p in specs])
    if len(specs) > 1:
        single = single.scaled(1.0 / np.sqrt(single.norm_sq()))
    coh = _superpose([build_packet(p, lat, "coherent") for p in specs])
    before = single.norm_sq()
    after = boost_state(single, beta).norm_sq()
    disc = covariance_two_path(coh, beta, consts)
    control = covariance_two_path(coh, beta, consts, exponent=1.0)
    row = [beta, doppler_factor(beta, 1), doppler_factor(beta, -1), before, after,
           abs(after - before), disc, control]
    cols = ["beta", "doppler_right", "doppler_left", "norm_before", "norm_after",
            "norm_drift", "two_path_discrepancy", "two_path_discrepancy_linear_k"]
    return ScenarioResult(cols, [row], dict(zip(cols, row)))


def _superpose(states: list[StateVector]) -> StateVector:
    total = states[0]
    for st in states[1:]:
        total = total + st
    return total


def run_spectra(cfg: ScenarioConfig) -> ScenarioResult:
    lat, consts = cfg.lattice(), cfg.constants()
    sp = single_excitation_spectra(lat, consts)
    rows = []
    for ch in CHANNELS:
        for k, hd, he in zip(sp.ks, sp.hdyn[ch], sp.henergy[ch]):
            rows.append([ch.s, ch.pol, float(k), float(hd), float(he)])
    return ScenarioResult(["s", "pol", "k", "hdyn", "henergy"], rows, {
        "commutator_norm": sp.commutator_norm,
        "hdyn_min": float(min(v.min() for v in sp.hdyn.values())),
        "henergy_min": float(min(v.min() for v in sp.henergy.values())),
    })


def run_propagate(cfg: ScenarioConfig) -> ScenarioResult:
    lat, consts = cfg.lattice(), cfg.constants()
    specs = cfg.packets or default_packets("propagate", lat)
    st = _superpose([build_packet(p, lat, cfg.kind) for p in specs])
    times = _times(cfg, lat, consts, lat.length / (4.0 * consts.c))
    rows = []
    if cfg.kind == "coherent":
        for t in times:
            snap = field_expectation(st, t, consts, law=cfg.law)
            for r in snap.rows():
                rows.append([float(t)] + [float(v) for v in r])
        return ScenarioResult(["t", *SNAPSHOT_COLUMNS], rows, {"times": len(times)})
    occupied = st.occupied()
    for t in times:
        pos = evolve(st, t, cfg.law, consts).position()
        for ch in occupied:
            vals = pos[ch]
            for x, z in zip(lat.xs, vals):
                rows.append([float(t), float(x), ch.s, ch.pol, float(z.real), float(z.imag)])
    return ScenarioResult(["t", "x", "s", "pol", "re", "im"], rows, {"times": len(times)})


RUNNERS = {
    "orthogonality": run_orthogonality,
    "dispersion-compare": run_dispersion_compare,
    "kernel": run_kernel,
    "boost": run_boost,
    "spectra": run_spectra,
    "propagate": run_propagate,
}


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.16e}"
    return str(v)


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.floating):
        return float(v)
    return v


def write_table(result: ScenarioResult, path: Path, fmt: str) -> None:
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(result.columns)
            for row in result.rows:
                w.writerow([_fmt(v) for v in row])
    else:
        records = [dict(zip(result.columns, _jsonable(row))) for row in result.rows]
        path.write_text(json.dumps(records, indent=1) + "\n")


def sidecar_path(path: Path) -> Path:
    return path.with_name(path.name + ".meta.json")


def write_sidecar(scenario: str, cfg: ScenarioConfig, result: ScenarioResult, path: Path) -> None:
    meta = {
        "scenario": scenario,
        "version": __version__,
        "config": _jsonable(cfg.resolved()),
        "constants": cfg.constants().as_dict(),
        "summary": _jsonable(result.summary),
    }
    sidecar_path(path).write_text(json.dumps(meta, indent=1, sort_keys=True) + "\n")


def run_scenario(name: str, cfg: ScenarioConfig) -> tuple[ScenarioResult, Path]:
    if name not in RUNNERS:
        raise ConfigError(f"unknown scenario {name!r}")
    if not cfg.packets:
        cfg = replace(cfg, packets=default_packets(name, cfg.lattice()))
    if cfg.t1 is None:
        cfg = replace(cfg, t1=default_t1(name, cfg))
    result = RUNNERS[name](cfg)
    path = Path(cfg.out or f"{name}.{cfg.format}")
    write_table(result, path, cfg.format)
    write_sidecar(name, replace(cfg, out=str(path)), result, path)
    return result, path
