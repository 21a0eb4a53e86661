# spectrum/modes/validate runs and the eitsim command line

import csv
import io
import json

import pytest

from eittool import *
from eittool.runner import EXIT_CONFIG, EXIT_NUMERIC, EXIT_OK, EXIT_USAGE
from eittool.scripts.eitsim import main


def preset(name, *overrides):
    return load_config(preset=name, overrides=["scan.points=601"] + list(overrides))


def test_runner_spectrum_counts():
    for name, peaks, windows in [
        ("fig4a", 1, 0),
        ("fig4b", 2, 1),
        ("fig5a", 1, 0),
        ("fig5b", 3, 2),
        ("fig6", 2, 1),
    ]:
        spectrum, p, w = EitRunner(preset(name)).spectrum()
        assert len(spectrum) == 601
        assert len(p) == peaks
        assert len(w) == windows


def test_runner_accepts_dict():
    runner = EitRunner(PRESETS["fig4b"])
    assert runner.config.name == "fig4b"
    assert len(runner.modes()) == 2


def test_run_spectrum_csv():
    out = io.StringIO()
    assert run_spectrum(preset("fig5b"), stream=out) == EXIT_OK
    rows = list(csv.reader(io.StringIO(out.getvalue())))
    assert rows[0] == ["omega", "re_chi", "im_chi", "re_n", "im_n", "vg_over_c"]
    assert len(rows) == 602
    assert float(rows[1][0]) == 0.5
    assert float(rows[-1][0]) == 2.0
    assert "\r" not in out.getvalue()


def test_run_spectrum_is_deterministic():
    a, b = io.StringIO(), io.StringIO()
    run_spectrum(preset("fig5b"), stream=a)
    run_spectrum(preset("fig5b"), stream=b)
    assert a.getvalue() == b.getvalue()


def test_run_spectrum_json():
    cfg = preset("fig5b")
    out = io.StringIO()
    assert run_spectrum(cfg, output_format="json", stream=out) == EXIT_OK
    doc = json.loads(out.getvalue())
    assert doc["digest"] == cfg.digest()
    assert doc["config"] == cfg.to_dict()
    assert len(doc["spectrum"]["omega"]) == 601
    assert len(doc["peaks"]) == 3
    assert len(doc["windows"]) == 2
    assert all(w["normal_dispersion"] for w in doc["windows"])
    assert all(w["vg_over_c"] < 0.2 for w in doc["windows"])


def test_run_spectrum_output_files(tmp_path):
    fn = str(tmp_path / "fig4b.csv")
    assert run_spectrum(preset("fig4b"), output=fn) == EXIT_OK
    with open(fn) as f:
        assert len(f.read().splitlines()) == 602
    with open(fn + ".peaks.csv") as f:
        rows = list(csv.DictReader(f))
    assert [r["kind"] for r in rows] == ["peak", "peak", "window"]
    assert float(rows[2]["location"]) == pytest.approx(1.0, abs=1e-3)
    assert float(rows[2]["re_chi_slope"]) > 0
    assert rows[0]["re_chi_slope"] == ""


def test_run_spectrum_text():
    out = io.StringIO()
    assert run_spectrum(preset("fig6"), output_format="text", stream=out) == EXIT_OK
    text = out.getvalue()
    assert "Peak 2" in text
    assert "Window 1" in text


def test_run_spectrum_errors():
    unstable = preset("fig4b", "resonators.0.coupling=0.3")
    assert run_spectrum(unstable, stream=io.StringIO()) == EXIT_NUMERIC
    corrupted = dict(PRESETS["fig4b"], scan={"omega_min": 2.0, "omega_max": 0.5})
    assert run_spectrum(corrupted, stream=io.StringIO()) == EXIT_CONFIG
    assert run_spectrum(preset("fig4b"), output_format="xml") == EXIT_USAGE


def test_run_modes():
    out = io.StringIO()
    assert run_modes(preset("fig5b"), output_format="json", stream=out) == EXIT_OK
    doc = json.loads(out.getvalue())
    assert doc["frequencies"] == pytest.approx([0.915, 1.051, 1.519], abs=1e-3)
    assert doc["stable"]
    assert doc["interlaced"]

    out = io.StringIO()
    assert run_modes(preset("fig6"), stream=out) == EXIT_OK
    assert "Dark mode" in out.getvalue()


def test_run_modes_reports_unstable():
    out = io.StringIO()
    unstable = preset("fig4b", "resonators.0.coupling=0.3")
    assert run_modes(unstable, output_format="json", stream=out) == EXIT_OK
    doc = json.loads(out.getvalue())
    assert not doc["stable"]
    assert len(doc["frequencies"]) == 1


def test_run_validate_bosonization():
    out = io.StringIO()
    assert run_validate(preset("fig4b"), check="bosonization", stream=out) == EXIT_OK
    report = json.loads(out.getvalue())
    assert report["passed"]
    names = [c["name"] for c in report["checks"]]
    assert names == ["bosonization_n2", "bosonization_monotone", "cutoff_convergence"]


def test_run_validate_timedomain():
    out = io.StringIO()
    assert run_validate(preset("fig4b"), check="timedomain", stream=out) == EXIT_OK
    report = json.loads(out.getvalue())
    assert report["passed"]
    assert len(report["checks"]) == 6
    assert report["digest"] == preset("fig4b").digest()


def test_run_validate_timedomain_fig5b():
    out = io.StringIO()
    assert run_validate(preset("fig5b"), check="timedomain", stream=out) == EXIT_OK
    report = json.loads(out.getvalue())
    assert report["passed"]
    assert len(report["checks"]) == 10
    assert all(c["passed"] for c in report["checks"])


def test_run_validate_unknown_check():
    assert run_validate(preset("fig4b"), check="everything") == EXIT_USAGE


def test_eitsim_spectrum(tmp_path):
    fn = str(tmp_path / "out.csv")
    argv = ["spectrum", "-p", "fig5b", "--set", "scan.points=301", "-o", fn]
    assert main(argv) == EXIT_OK
    with open(fn + ".peaks.csv") as f:
        kinds = [r["kind"] for r in csv.DictReader(f)]
    assert kinds.count("peak") == 3
    assert kinds.count("window") == 2


def test_eitsim_config_file(tmp_path, capsys):
    fn = tmp_path / "run.json"
    doc = {"mode": "single", "resonators": [{"omega": 1.0, "coupling": 0.05}]}
    fn.write_text(json.dumps(doc))
    assert main(["modes", "-c", str(fn), "-f", "csv"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "index,omega,omega_squared"
    assert len(lines) == 3


def test_eitsim_exit_codes():
    assert main([]) == EXIT_USAGE
    assert main(["presets"]) == EXIT_OK
    assert main(["spectrum"]) == EXIT_CONFIG
    assert main(["spectrum", "-p", "fig9"]) == EXIT_CONFIG
    assert main(["spectrum", "-p", "fig4b", "--set", "scan.points=abc"]) == EXIT_CONFIG
    with pytest.raises(SystemExit) as e:
        main(["spectrum", "-f", "xml"])
    assert e.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as e:
        main(["transmogrify"])
    assert e.value.code == EXIT_USAGE
