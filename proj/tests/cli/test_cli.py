"""End-to-end tests of the vsgsim command-line interface.

The binary under test is taken from the VSGSIM_BIN environment variable
(ctest sets it to the freshly built executable).
"""

import json
import os
import subprocess

import pytest

BIN = os.environ.get("VSGSIM_BIN")

pytestmark = pytest.mark.skipif(BIN is None, reason="VSGSIM_BIN is not set")

EXPECTED_HEADER = "t,delta_f,rocof,dp_m,dp_g,dp_c,dp_w,dp_pv,dp_vi,dp_l,kv,dv,rv"


def vsgsim(*args, timeout=180):
    return subprocess.run(
        [BIN, *map(str, args)], capture_output=True, text=True, timeout=timeout
    )


def test_list_scenarios():
    res = vsgsim("list-scenarios")
    assert res.returncode == 0
    for scenario_id in ("I:", "II-case1:", "II-case2:", "III:"):
        assert scenario_id in res.stdout
    assert "constraints on" in res.stdout  # scenario III


def test_run_default_writes_trace_and_sidecar(tmp_path):
    res = vsgsim("run", "-o", tmp_path)
    assert res.returncode == 0, res.stderr
    assert "wrote" in res.stdout and "I_fixed_42.csv" in res.stdout
    assert "(8001 rows)" in res.stdout

    csv = tmp_path / "I_fixed_42.csv"
    assert csv.is_file()
    lines = csv.read_text().splitlines()
    assert lines[0] == EXPECTED_HEADER
    assert len(lines) == 8002  # header + duration/dt + 1 samples

    meta = json.loads((tmp_path / "I_fixed_42.json").read_text())
    assert meta["controller"] == "fixed"
    assert meta["seed"] == 42
    assert meta["rows"] == 8001
    assert meta["frames_lost"] == 0
    # The sidecar freezes the fully resolved scenario.
    assert meta["custom_scenario"]["id"] == "I"
    assert len(meta["custom_scenario"]["events"]) == 4


def test_runs_are_byte_identical(tmp_path):
    a = tmp_path / "a"
    b = tmp_path / "b"
    assert vsgsim("run", "-s", "II-case1", "-c", "fuzzy", "-o", a).returncode == 0
    assert vsgsim("run", "-s", "II-case1", "-c", "fuzzy", "-o", b).returncode == 0
    name = "II-case1_fuzzy_42.csv"
    assert (a / name).read_bytes() == (b / name).read_bytes()


def test_seed_changes_the_stochastic_stream(tmp_path):
    assert vsgsim("run", "-s", "II-case2", "--seed", 7, "-o", tmp_path).returncode == 0
    assert vsgsim("run", "-s", "II-case2", "--seed", 8, "-o", tmp_path).returncode == 0
    seven = (tmp_path / "II-case2_fixed_7.csv").read_bytes()
    eight = (tmp_path / "II-case2_fixed_8.csv").read_bytes()
    assert seven != eight


def test_sidecar_reproduces_the_run(tmp_path):
    first = tmp_path / "first"
    again = tmp_path / "again"
    assert vsgsim("run", "-s", "II-case1", "--seed", 9, "-o", first).returncode == 0
    res = vsgsim(
        "run", "--config", first / "II-case1_fixed_9.json", "-o", again
    )
    assert res.returncode == 0, res.stderr
    assert (first / "II-case1_fixed_9.csv").read_bytes() == (
        again / "II-case1_fixed_9.csv"
    ).read_bytes()


def test_dt_override(tmp_path):
    res = vsgsim("run", "--dt", 0.02, "-o", tmp_path)
    assert res.returncode == 0
    assert "(4001 rows)" in res.stdout


def test_usage_errors_exit_2(tmp_path):
    assert vsgsim("run", "--no-such-flag").returncode == 2
    assert vsgsim("run", "-c", "quantum").returncode == 2
    assert vsgsim().returncode == 2  # a subcommand is required
    assert vsgsim("run", "--config", tmp_path / "missing.json").returncode == 2
    assert vsgsim("run", "-s", "IV").returncode == 2


def test_compare_writes_report(tmp_path):
    res = vsgsim("compare", "-s", "I", "-o", tmp_path)
    assert res.returncode == 0, res.stderr
    assert "event window" in res.stdout

    csv_lines = (tmp_path / "I_compare_42.csv").read_text().splitlines()
    assert csv_lines[0] == "method,overshoot_mhz,settling_s,peak_rocof"
    methods = {line.split(",")[0] for line in csv_lines[1:]}
    assert methods == {"none", "fixed", "fuzzy-inertia", "fuzzy", "fnnc"}

    text = (tmp_path / "I_compare_42.txt").read_text()
    assert "overshoot_mhz" in text
    for m in methods:
        assert m in text


def test_compare_method_subset(tmp_path):
    res = vsgsim(
        "compare", "-s", "I", "-m", "fixed", "fnnc", "--event", 20, "-o", tmp_path
    )
    assert res.returncode == 0, res.stderr
    csv_lines = (tmp_path / "I_compare_42.csv").read_text().splitlines()
    assert len(csv_lines) == 3  # header + two methods


def test_fnn_save_and_frozen_reload(tmp_path):
    net = tmp_path / "trained.txt"
    res = vsgsim("run", "-c", "fnnc", "--fnn-save", net, "-o", tmp_path / "train")
    assert res.returncode == 0, res.stderr
    assert net.is_file()

    # Two inference-only replays of the saved network are byte-identical.
    frozen = ("--eta-w", 0, "--eta-m", 0, "--eta-sigma", 0)
    a = tmp_path / "replay_a"
    b = tmp_path / "replay_b"
    assert (
        vsgsim("run", "-c", "fnnc", "--fnn-load", net, *frozen, "-o", a).returncode
        == 0
    )
    assert (
        vsgsim("run", "-c", "fnnc", "--fnn-load", net, *frozen, "-o", b).returncode
        == 0
    )
    name = "I_fnnc_42.csv"
    assert (a / name).read_bytes() == (b / name).read_bytes()


def test_serve_and_remote_match_local(tmp_path):
    local_dir = tmp_path / "local"
    assert (
        vsgsim("run", "-c", "fixed", "--dt", 0.02, "-o", local_dir).returncode == 0
    )

    server = subprocess.Popen(
        [BIN, "serve", "-c", "fixed", "-l", "127.0.0.1:0"],
        stdout=subprocess.PIPE,
        stderr=subprocess.PIPE,
        text=True,
    )
    try:
        banner = server.stdout.readline().strip()
        assert banner.startswith("listening on 127.0.0.1:")
        port = int(banner.rsplit(":", 1)[1])
        assert port > 0

        remote_dir = tmp_path / "remote"
        res = vsgsim(
            "run",
            "-c", "remote",
            "--endpoint", f"127.0.0.1:{port}",
            "--timeout-ms", 2000,
            "--dt", 0.02,
            "-o", remote_dir,
        )
        assert res.returncode == 0, res.stderr
        assert "frames lost" not in res.stdout

        local = (local_dir / "I_fixed_42.csv").read_bytes()
        remote = (remote_dir / "I_remote_42.csv").read_bytes()
        assert local == remote

        meta = json.loads((remote_dir / "I_remote_42.json").read_text())
        assert meta["frames_lost"] == 0
    finally:
        server.terminate()
        server.wait(timeout=10)


def test_remote_requires_endpoint():
    res = vsgsim("run", "-c", "remote")
    assert res.returncode == 2
    assert "endpoint" in res.stderr
