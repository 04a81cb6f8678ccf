import csv
import hashlib
import io
import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from fermideco import make_state, save_state
from fermideco.cli import ADC_SERIES_HEADER, SERIES_HEADER, main

from conftest import PERSISTENT_TRIPLES, FAMILY_I_A, FAMILY_I_B, persistent_state


def state_file(tmp_path, alpha, name="psi.json", basis="angmom"):
    path = tmp_path / name
    save_state(make_state(alpha), path, basis)
    return str(path)


def read_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], np.array(rows[1:], dtype=float)


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def sha(path):
    return hashlib.sha256(open(path, "rb").read()).hexdigest()


def test_golden_headers():
    assert ",".join(SERIES_HEADER) == "t,Cf,K,SvN,purity"
    assert ",".join(ADC_SERIES_HEADER) == "p,t,Cf,K,SvN,purity"


def test_evolve_family_one(tmp_path, capsys):
    code, out, _ = run(["evolve", "--state", state_file(tmp_path, FAMILY_I_A), "--beta", "10",
                        "--j0", "8", "--count", "300", "--t-max", "30"], capsys)
    assert code == 0
    header, rows = read_csv(out)
    assert header == list(SERIES_HEADER)
    assert rows.shape == (300, 5)
    assert rows[0, 0] == 0 and rows[-1, 0] == 30
    assert np.max(np.abs(rows[:, 1] - 0.7)) <= 1e-9


def test_evolve_persistent_state(tmp_path, capsys):
    code, out, _ = run(["evolve", "--state", state_file(tmp_path, persistent_state(PERSISTENT_TRIPLES[0]).alpha)], capsys)
    assert code == 0
    _, rows = read_csv(out)
    cf = rows[:, 1]
    assert cf[0] == pytest.approx(0.1, abs=1e-6)
    assert cf[-1] == pytest.approx(0.1, abs=1e-4)
    assert np.max(np.abs(cf - 0.1)) > 1e-3


def test_evolve_adc(tmp_path, capsys):
    alpha = (0.5, 0, 0, 0, 0.6, 0.3 + 0.4j)
    out_path = tmp_path / "adc.csv"
    code, _, _ = run(["evolve", "--state", state_file(tmp_path, alpha), "--channel", "adc",
                      "--gamma-rate", "1", "--t-max", "60", "--out", str(out_path)], capsys)
    assert code == 0
    header, rows = read_csv(out_path.read_text())
    assert header == list(ADC_SERIES_HEADER)
    a6 = abs(make_state(alpha).alpha[5])
    assert rows[-1, 0] == pytest.approx(1, abs=1e-15)
    assert rows[-1, 2] == pytest.approx(a6**2, abs=1e-9)
    manifest = json.loads((tmp_path / "adc.csv.manifest.json").read_text())
    assert manifest["command"] == "evolve"
    assert manifest["parameters"]["channel"] == "adc"
    assert manifest["outputs"] == {"adc.csv": sha(out_path)}


def test_evolve_zero_temperature_and_log_grid(tmp_path, capsys):
    code, out, _ = run(["evolve", "--state", state_file(tmp_path, FAMILY_I_B), "--beta", "zero-temperature",
                        "--t-min", "0.01", "--t-max", "100", "--count", "20", "--spacing", "log"], capsys)
    assert code == 0
    _, rows = read_csv(out)
    assert rows[0, 0] == pytest.approx(0.01) and rows[-1, 0] == pytest.approx(100)
    assert np.max(np.abs(rows[:, 1] - 0.89)) <= 1e-9


def test_manifest_reproducible(tmp_path, capsys):
    psi = state_file(tmp_path, FAMILY_I_A)
    digests = []
    for name in ("a.csv", "b.csv"):
        out = tmp_path / name
        assert run(["evolve", "--state", psi, "--count", "50", "--out", str(out)], capsys)[0] == 0
        digests.append(sha(out))
        manifest = json.loads((tmp_path / f"{name}.manifest.json").read_text())
        assert manifest["outputs"][name] == digests[-1]
        assert manifest["parameters"]["beta"] == 10.0
        assert manifest["parameters"]["j0"] == 8.0
        assert manifest["version"]
    assert digests[0] == digests[1]


def test_asymptotic_dfs(tmp_path, capsys):
    code, out, _ = run(["asymptotic", "--state", state_file(tmp_path, (0, 0, 1, 0, 0, 0))], capsys)
    assert code == 0
    assert json.loads(out) == {"K_inf": 1.0, "Cf0": 1.0, "Cf_inf": 1.0, "P": 1.0, "label": "DFS"}


def test_asymptotic_family_one(tmp_path, capsys):
    code, out, _ = run(["asymptotic", "--state", state_file(tmp_path, FAMILY_I_B)], capsys)
    report = json.loads(out)
    assert code == 0
    assert report["Cf_inf"] == pytest.approx(0.89, abs=1e-12)
    assert report["label"] == "FamilyI"


def test_asymptotic_ed15(tmp_path, capsys):
    s = 1 / math.sqrt(2)
    code, out, _ = run(["asymptotic", "--state", state_file(tmp_path, (s, 0, 0, 0, s, 0))], capsys)
    report = json.loads(out)
    assert report["Cf_inf"] == 0 and report["P"] == 0 and report["label"] == "ED15"


def test_asymptotic_undefined_ratio(tmp_path, capsys):
    code, out, _ = run(["asymptotic", "--state", state_file(tmp_path, (1, 0, 0, 0, 0, 0))], capsys)
    assert code == 0 and json.loads(out)["P"] is None


def test_asymptotic_to_file(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert run(["asymptotic", "--state", state_file(tmp_path, FAMILY_I_A), "--out", str(out)], capsys)[0] == 0
    assert json.loads(out.read_text())["Cf_inf"] == pytest.approx(0.7, abs=1e-12)
    assert (tmp_path / "r.json.manifest.json").exists()


@pytest.mark.parametrize(
    "alpha, label",
    [
        ((0, 0, 0.6, 0, 0, 0.8), "DFS"),
        ((0, 1, 0, 1, 0, 0), "ED24"),
        ((1, 0, 0, 0, 2, 0), "ED15"),
        (FAMILY_I_B, "FamilyI"),
        ((1, 2, 3, 4, 5, 6), "Generic"),
    ],
)
def test_classify(tmp_path, capsys, alpha, label):
    code, out, _ = run(["classify", "--state", state_file(tmp_path, alpha)], capsys)
    assert code == 0 and out.strip() == label


def test_slater_state_file(tmp_path, capsys):
    path = state_file(tmp_path, FAMILY_I_B, basis="slater")
    code, out, _ = run(["asymptotic", "--state", path], capsys)
    assert json.loads(out)["Cf_inf"] == pytest.approx(0.89, abs=1e-12)


def test_renormalisation_warning(tmp_path, capsys):
    path = tmp_path / "raw.json"
    path.write_text(json.dumps({"basis": "angmom", "amplitudes": [[0, 0], [0, 0], [2, 0], [0, 0], [0, 0], [0, 0]]}))
    code, out, err = run(["asymptotic", "--state", str(path)], capsys)
    assert code == 0 and "renormalised" in err
    assert json.loads(out)["Cf0"] == pytest.approx(1)


@pytest.mark.parametrize(
    "content",
    [
        "not json",
        json.dumps({"basis": "angmom", "amplitudes": [[1, 0]] * 5}),
        json.dumps({"basis": "polar", "amplitudes": [[1, 0]] * 6}),
        json.dumps({"basis": "angmom", "amplitudes": [[0, 0]] * 6}),
        json.dumps({"basis": "angmom", "amplitudes": [["a", 0]] * 6}),
    ],
)
@pytest.mark.parametrize("command", ["evolve", "asymptotic", "classify"])
def test_malformed_state_exit_code(tmp_path, capsys, content, command):
    path = tmp_path / "bad.json"
    path.write_text(content)
    code, _, err = run([command, "--state", str(path)], capsys)
    assert code == 2 and err.startswith("error:")


def test_missing_state_file(tmp_path, capsys):
    assert run(["classify", "--state", str(tmp_path / "nope.json")], capsys)[0] == 2


def test_bad_arguments_exit_two(tmp_path, capsys):
    with pytest.raises(SystemExit) as info:
        main(["evolve", "--state", "x.json", "--beta", "hot"])
    assert info.value.code == 2
    code, _, _ = run(["evolve", "--state", state_file(tmp_path, FAMILY_I_A), "--count", "0"], capsys)
    assert code == 2


def test_quadrature_failure_exit_three(tmp_path, capsys):
    code, _, err = run(["evolve", "--state", state_file(tmp_path, FAMILY_I_A), "--beta", "1",
                        "--quad-rel-tol", "1e-300", "--count", "3"], capsys)
    assert code == 3 and "quadrature" in err


def test_unwritable_exit_four(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("")
    code, _, err = run(["sample", "--n", "10", "--out", str(blocker / "atlas.csv")], capsys)
    assert code == 4 and err.startswith("error:")
    code, _, _ = run(["evolve", "--state", state_file(tmp_path, FAMILY_I_A), "--count", "3",
                      "--out", str(blocker / "s.csv")], capsys)
    assert code == 4


def test_sample(tmp_path, capsys):
    out = tmp_path / "atlas.csv"
    code, stdout, _ = run(["sample", "--n", "5000", "--seed", "7", "--out", str(out)], capsys)
    assert code == 0
    summary = json.loads(stdout)
    assert summary == json.loads((tmp_path / "atlas.csv.summary.json").read_text())
    assert summary["n_samples"] == 5000 and summary["seed"] == 7
    assert summary["max_tetrahedron_violation"] <= 1e-12
    header, rows = read_csv(out.read_text().replace(",\n", ",nan\n"))
    assert header == ["x", "y", "z", "cf0", "cf_inf", "P"]
    assert rows.shape == (5000, 6)
    assert np.all(rows[:, 4] <= rows[:, 3] + 1e-12)
    manifest = json.loads((tmp_path / "atlas.csv.manifest.json").read_text())
    assert manifest["seed"] == 7
    assert set(manifest["outputs"]) == {"atlas.csv", "atlas.csv.summary.json"}

    first = sha(out)
    assert run(["sample", "--n", "5000", "--seed", "7", "--out", str(out)], capsys)[0] == 0
    assert sha(out) == first


def test_thread_count_does_not_change_output(tmp_path):
    digests = []
    for threads in ("1", "4"):
        out = tmp_path / f"atlas{threads}.csv"
        env = dict(os.environ, FERMIDECO_THREADS=threads)
        subprocess.run([sys.executable, "-m", "fermideco", "sample", "--n", "10000", "--seed", "3",
                        "--out", str(out)], check=True, env=env, capture_output=True)
        digests.append(sha(out))
    assert digests[0] == digests[1]


def test_version(capsys):
    with pytest.raises(SystemExit) as info:
        main(["--version"])
    assert info.value.code == 0
    assert "0.1.0" in capsys.readouterr().out
