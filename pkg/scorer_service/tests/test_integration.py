"""End-to-end: the detection pipeline, driven purely through its CLI and
file formats, scoring against a live instance of this service."""

import json
import socket
import subprocess
import sys
import threading
import time

import pytest
import requests
import uvicorn


def _free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


@pytest.fixture(scope="module")
def live_server(app):
    port = _free_port()
    config = uvicorn.Config(app, host="127.0.0.1", port=port, log_level="warning")
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    endpoint = f"http://127.0.0.1:{port}"
    for _ in range(100):
        try:
            if requests.get(endpoint + "/health", timeout=1).status_code == 200:
                break
        except requests.RequestException:
            time.sleep(0.1)
    else:
        pytest.fail("service did not come up")
    yield endpoint
    server.should_exit = True
    thread.join(timeout=10)


def run_cli(args, cwd):
    return subprocess.run(
        [sys.executable, "-m", "euphrase.cli", *args],
        cwd=cwd,
        capture_output=True,
        text=True,
    )


def test_health_over_the_wire(live_server, tiny_model_dir):
    body = requests.get(live_server + "/health", timeout=5).json()
    assert body["model"] == str(tiny_model_dir)


def test_wire_protocol_shape_over_http(live_server):
    payload = {
        "sentences": [
            {"left": ["my", "dealer", "sold"], "right": ["tonight"]},
            {"left": [], "right": ["on", "the", "corner"]},
        ],
        "candidates": ["black tar", "blue dream", "fresh batch"],
    }
    body = requests.post(live_server + "/score", json=payload, timeout=30).json()
    assert len(body["scores"]) == 2
    assert all(len(row) == 3 for row in body["scores"])


def test_primary_pipeline_completes_against_service(live_server, tmp_path):
    pytest.importorskip("euphrase", reason="primary package not installed")

    data_dir = tmp_path / "data"
    out_dir = tmp_path / "out"
    synth = run_cli(["synth", "--out", str(data_dir), "--seed", "0"], cwd=tmp_path)
    assert synth.returncode == 0, synth.stderr

    config_path = tmp_path / "config.json"
    config_path.write_text(
        json.dumps(
            {
                "corpus_path": str(data_dir / "corpus.txt"),
                "targets_path": str(data_dir / "targets.txt"),
                "ground_truth_path": str(data_dir / "truth.txt"),
                "output_dir": str(out_dir),
                "seed": 0,
                "preselect_k": 45,
                "scorer": "remote",
                "remote_endpoint": live_server,
                "remote_timeout": 120,
            }
        ),
        encoding="utf-8",
    )
    run = run_cli(["all", "--config", str(config_path)], cwd=tmp_path)
    assert run.returncode == 0, run.stderr
    for artifact in ("ranked_epd.tsv", "eval_epd.tsv", "eval_epd.json"):
        assert (out_dir / artifact).exists(), artifact
    ranked = (out_dir / "ranked_epd.tsv").read_text(encoding="utf-8").splitlines()
    assert len(ranked) > 10  # header + a real candidate list
    report = json.loads((out_dir / "eval_epd.json").read_text(encoding="utf-8"))
    assert set(report["precision_at_k"]) == {"10", "20", "30", "50"}


def test_remote_scorer_failure_exit_code(tmp_path):
    pytest.importorskip("euphrase", reason="primary package not installed")

    data_dir = tmp_path / "data"
    out_dir = tmp_path / "out"
    assert run_cli(["synth", "--out", str(data_dir), "--seed", "1", "--docs", "300"], cwd=tmp_path).returncode == 0
    config_path = tmp_path / "config.json"
    config_path.write_text(
        json.dumps(
            {
                "corpus_path": str(data_dir / "corpus.txt"),
                "targets_path": str(data_dir / "targets.txt"),
                "ground_truth_path": str(data_dir / "truth.txt"),
                "output_dir": str(out_dir),
                "scorer": "remote",
                "remote_endpoint": "http://127.0.0.1:1",
                "remote_timeout": 0.5,
            }
        ),
        encoding="utf-8",
    )
    for stage in ("mine", "embed", "preselect", "contexts"):
        assert run_cli([stage, "--config", str(config_path)], cwd=tmp_path).returncode == 0
    rank = run_cli(["rank", "--config", str(config_path)], cwd=tmp_path)
    assert rank.returncode == 3
