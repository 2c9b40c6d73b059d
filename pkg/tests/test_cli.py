import csv
import json

import numpy as np
import pytest

from blipfield import Lattice, PacketSpec, PhysicalConstants, __version__, build_packet
from blipfield.cli import main
from blipfield.scenarios import (ScenarioConfig, load_config, overlap_table, run_dispersion_compare,
                                 run_orthogonality)
from blipfield.states import write_samples_csv


def _run(tmp_path, *args, name="out.csv"):
    out = tmp_path / name
    code = main([*args, "--out", str(out)])
    return code, out


def _read_csv(path):
    with open(path) as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def _meta(path):
    return json.loads(path.with_name(path.name + ".meta.json").read_text())


@pytest.mark.parametrize("scenario,columns", [
    ("orthogonality", ["t", "overlap", "density_overlap"]),
    ("dispersion-compare", ["t", "width_blip", "width_standard"]),
    ("kernel", ["u", "R"]),
    ("boost", ["beta", "doppler_right", "doppler_left", "norm_before", "norm_after",
               "norm_drift", "two_path_discrepancy", "two_path_discrepancy_linear_k"]),
    ("spectra", ["s", "pol", "k", "hdyn", "henergy"]),
    ("propagate", ["t", "x", "s", "pol", "re", "im"]),
])
def test_every_scenario_writes_table_and_sidecar(tmp_path, scenario, columns):
    args = [scenario, "--n", "1024"]
    if scenario in ("dispersion-compare", "propagate"):
        args += ["--samples", "3"]
    code, out = _run(tmp_path, *args)
    assert code == 0
    header, rows = _read_csv(out)
    assert header == columns
    assert rows
    meta = _meta(out)
    assert meta["scenario"] == scenario
    assert meta["version"] == __version__
    assert meta["config"]["n"] == 1024
    assert meta["constants"] == {"c": 1.0, "hbar": 1.0, "eps0": 1.0, "area": 1.0}


def test_csv_uses_seventeen_significant_digits(tmp_path):
    code, out = _run(tmp_path, "spectra", "--n", "16", "--length", "2")
    assert code == 0
    _, rows = _read_csv(out)
    k = rows[0][2]
    mantissa = k.split("e")[0].lstrip("-")
    assert len(mantissa.replace(".", "")) == 17
    assert float(k) == pytest.approx(-np.pi * 8)


def test_json_output_is_flat_records(tmp_path):
    code, out = _run(tmp_path, "boost", "--n", "1024", "--format", "json", name="boost.json")
    assert code == 0
    records = json.loads(out.read_text())
    assert isinstance(records, list) and len(records) == 1
    assert records[0]["beta"] == 0.3
    assert records[0]["norm_drift"] < 1e-6


def test_output_is_byte_deterministic(tmp_path):
    a = tmp_path / "a"
    b = tmp_path / "b"
    a.mkdir()
    b.mkdir()
    for d in (a, b):
        assert main(["dispersion-compare", "--n", "1024", "--samples", "4",
                     "--out", str(d / "w.csv")]) == 0
    assert (a / "w.csv").read_bytes() == (b / "w.csv").read_bytes()
    ma = json.loads((a / "w.csv.meta.json").read_text())
    mb = json.loads((b / "w.csv.meta.json").read_text())
    ma["config"].pop("out"), mb["config"].pop("out")
    assert ma == mb


def test_config_file_and_overrides(tmp_path):
    lat = Lattice(1024, 100.0)
    samples = np.exp(-lat.xs ** 2 / 4.0) + 0j
    write_samples_csv(tmp_path / "p.csv", samples)
    cfg = {
        "lattice": {"n": 1024, "length": 100.0},
        "units": {"system": "natural", "area": 2.0},
        "packets": [{"shape": "custom", "samples": "p.csv", "channel": "-1V"}],
        "time": {"t0": 0.0, "t1": 10.0, "samples": 3},
        "output": {"format": "csv"},
    }
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    code, out = _run(tmp_path, "propagate", "--config", str(path), "--samples", "2")
    assert code == 0
    _, rows = _read_csv(out)
    assert len(rows) == 2 * 1024
    assert {r[2] for r in rows} == {"-1"} and {r[3] for r in rows} == {"V"}
    meta = _meta(out)
    assert meta["config"]["samples"] == 2
    assert meta["constants"]["area"] == 2.0


def test_coherent_propagate_writes_field_columns(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"kind": "coherent", "lattice": {"n": 1024, "length": 100.0},
                                "time": {"samples": 2}}))
    code, out = _run(tmp_path, "propagate", "--config", str(path))
    assert code == 0
    header, rows = _read_csv(out)
    assert header[:3] == ["t", "x", "Re Ey"]
    assert len(rows) == 2 * 1024


@pytest.mark.parametrize("args", [
    ["kernel", "--n", "512"],
    ["boost", "--beta", "0.7"],
    ["orthogonality", "--samples", "0"],
])
def test_config_errors_exit_2(tmp_path, args, capsys):
    code, _ = _run(tmp_path, *args)
    assert code == 2
    assert "error" in capsys.readouterr().err


@pytest.mark.parametrize("body", [
    "{not json",
    json.dumps({"frobnicate": 1}),
    json.dumps({"packets": [{"center": 10, "channel": "+1H"}, {"center": -10, "channel": "+1V"}]}),
    json.dumps({"packets": [{"center": 10, "channel": "+1H"}, {"center": -12, "channel": "-1H"}]}),
    json.dumps({"packets": [{"shape": "blob"}]}),
    json.dumps({"lattice": {"n": 1000.5}}),
    json.dumps([1, 2]),
])
def test_bad_config_files_exit_2(tmp_path, body):
    path = tmp_path / "cfg.json"
    path.write_text(body)
    code, _ = _run(tmp_path, "orthogonality", "--config", str(path))
    assert code == 2


def test_edge_leakage_exits_3(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"packets": [{"center": 95.0, "width": 4.0}]}))
    code, _ = _run(tmp_path, "propagate", "--config", str(path))
    assert code == 3


def test_aliasing_exits_3(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"lattice": {"n": 1024, "length": 100.0},
                                "packets": [{"width": 2, "carrier": 20, "channel": "-1H"}]}))
    code, _ = _run(tmp_path, "boost", "--config", str(path), "--beta", "0.6")
    assert code == 3


# scenario behaviour

def test_orthogonality_includes_meeting_time():
    res = run_orthogonality(load_config({}, {"samples": 10}))
    ts = [r[0] for r in res.rows]
    assert 50.0 in ts
    assert max(r[1] for r in res.rows) < 1e-12
    meet = res.rows[ts.index(50.0)]
    assert meet[2] == pytest.approx(1.0, abs=1e-6)


def test_orthogonality_under_standard_law():
    res = run_orthogonality(load_config({"law": "standard"}, {"samples": 11}))
    assert max(r[1] for r in res.rows) < 1e-12


def test_same_packet_overlap_is_one(lat, consts):
    st = build_packet(PacketSpec(center=-50, width=4, carrier=10), lat)
    rows = overlap_table(st, st, np.linspace(0, 100, 7), "blip", consts)
    for _, ov, dens in rows:
        assert ov == pytest.approx(1.0, abs=1e-12)
        assert dens == pytest.approx(1.0, abs=1e-12)


def test_dispersion_compare_default_packet():
    res = run_dispersion_compare(load_config({}, {"samples": 6}))
    t, wb, ws = np.array(res.rows).T
    assert t[0] == 0.0 and wb[0] == pytest.approx(ws[0], rel=1e-12)
    assert np.abs(wb / wb[0] - 1).max() < 1e-6
    assert np.all(np.diff(ws) > 0)
    assert res.summary["straddles_zero"]


def test_dispersion_compare_without_straddle(caplog):
    cfg = load_config({"packets": [{"width": 4.0, "carrier": 10.0}]}, {"samples": 5})
    res = run_dispersion_compare(cfg)
    _, wb, ws = np.array(res.rows).T
    assert np.abs(wb / wb[0] - 1).max() < 1e-6
    assert np.abs(ws / ws[0] - 1).max() < 1e-6
    assert "straddle" in caplog.text


def test_scenario_config_validation():
    with pytest.raises(ValueError):
        ScenarioConfig(format="xml")
    with pytest.raises(ValueError):
        ScenarioConfig(units="cgs")
    with pytest.raises(ValueError):
        ScenarioConfig(law="newton")
    assert ScenarioConfig(units="si").constants() == PhysicalConstants.si()
