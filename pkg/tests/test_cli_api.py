import json

import pytest
from fastapi.testclient import TestClient

from steklovlab.api import app
from steklovlab.cli import main


@pytest.fixture()
def capture(capsys):
    def run(argv):
        code = main(argv)
        out = capsys.readouterr()
        return code, out.out, out.err

    return run


class TestCli:
    def test_spectrum_csv_contract(self, capture):
        code, out, _ = capture(["spectrum", "--dim", "2", "--tau", "1", "--count", "6", "--format", "csv"])
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "index,l,lambda,multiplicity"
        first = lines[1].split(",")
        assert first == ["1", "0", "0", "1"]
        assert lines[2].split(",")[:3] == ["2", "1", "1"]

    def test_byte_identical_reruns(self, capture):
        args = ["spectrum", "--dim", "3", "--tau", "2.5", "--count", "9", "--format", "json"]
        code1, out1, _ = capture(args)
        code2, out2, _ = capture(args)
        assert code1 == code2 == 0
        assert out1 == out2

    def test_modes_roundtrip(self, capture):
        code, out, _ = capture(["modes", "--l", "2", "--samples", "5", "--max-derivative", "3"])
        assert code == 0
        rows = out.strip().split("\n")
        assert rows[0] == "r,R,Rp,Rpp,Rppp"
        last = rows[-1].split(",")
        assert float(last[0]) == 1.0
        assert float(last[1]) == pytest.approx(1.0)  # boundary-unit profile
        assert float(last[3]) == pytest.approx(0.0, abs=1e-12)  # free edge R''(1)=0

    def test_concentrate_monotone_error_column(self, capture):
        code, out, _ = capture(
            ["concentrate", "--l", "1", "--tau", "1", "--mass", "auto", "--eps", "0.08,0.04"]
        )
        assert code == 0
        rows = [line.split(",") for line in out.strip().split("\n")[1:]]
        errs = [float(r[3]) for r in rows]
        assert errs[0] > errs[1]

    def test_iso_flags_true(self, capture, tmp_path):
        poly = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]
        path = tmp_path / "square.json"
        path.write_text(json.dumps(poly))
        code, out, _ = capture(["iso", "--polygons", str(path), "--tau", "1", "--format", "json"])
        assert code == 0
        doc = json.loads(out)
        assert doc["all_hold"] is True
        rep = doc["reports"][0]
        assert rep["upper_bound_below_ball"] is True

    def test_output_file_and_env_dir(self, capture, tmp_path, monkeypatch):
        monkeypatch.setenv("STEKLOVLAB_OUTPUT_DIR", str(tmp_path))
        code, out, _ = capture(["spectrum", "--count", "4", "--output", "runs/spec.csv"])
        assert code == 0
        assert out == ""
        assert (tmp_path / "runs" / "spec.csv").read_text().startswith("index,l,lambda")

    def test_usage_error_exit_code(self, capture):
        code, _, err = capture(["spectrum", "--bogus"])
        assert code == 1

    def test_numerical_failure_exit_code(self, capture):
        # shell density would be negative: typed numerical failure, exit 2
        code, _, err = capture(["concentrate", "--mass", "0.01", "--eps", "0.5"])
        assert code == 2
        record = json.loads(err.strip().split("\n")[-1])
        assert record["error"] == "InvalidArgument"

    def test_rayleigh_annulus(self, capture):
        code, out, _ = capture(["rayleigh", "--experiment", "annulus", "--inner-radii", "0.1,0.3"])
        assert code == 0
        rows = [line.split(",") for line in out.strip().split("\n")[1:]]
        assert all(float(r[4]) < 7.2 for r in rows)

    def test_selftest_quick(self, capture):
        code, out, err = capture(["selftest", "--quick"])
        assert code == 0
        assert "FAIL" not in err


class TestApi:
    @pytest.fixture()
    def client(self):
        return TestClient(app)

    def test_health(self, client):
        r = client.get("/v1/health")
        assert r.status_code == 200
        assert r.json()["status"] == "ok"

    def test_spectrum_endpoint(self, client):
        r = client.post("/v1/spectrum", json={"dim": 2, "tau": 1.0, "count": 5})
        assert r.status_code == 200
        rows = r.json()["rows"]
        assert rows[0] == {"index": 1, "l": 0, "lam": 0.0, "multiplicity": 1}
        assert rows[1]["lam"] == 1.0

    def test_validation_maps_to_422(self, client):
        r = client.post("/v1/spectrum", json={"dim": 1, "tau": 1.0, "count": 5})
        assert r.status_code == 422
        r = client.post("/v1/spectrum", json={"dim": 2, "tau": 1.0, "count": 0})
        assert r.status_code == 422  # pydantic bound

    def test_iso_endpoint(self, client):
        r = client.post(
            "/v1/iso",
            json={"polygons": [[[0, 0], [2, 0], [2, 1], [0, 1]]], "tau": 1.0},
        )
        assert r.status_code == 200
        assert r.json()["all_hold"] is True

    def test_modes_endpoint_matches_cli_handler(self, client):
        from steklovlab import service

        req = {"dim": 2, "tau": 1.0, "l": 1, "samples": 3, "max_derivative": 1}
        api_doc = client.post("/v1/modes", json=req).json()
        local = service.run_modes(service.ModesRequest(**req))
        assert api_doc == json.loads(local.model_dump_json())

    def test_hadamard_endpoint(self, client):
        r = client.post(
            "/v1/hadamard",
            json={"problem": "steklov", "orders": [1], "s_values": [1]},
        )
        assert r.status_code == 200
        row = r.json()["rows"][0]
        assert row["derivative"] == pytest.approx(-2.0, rel=1e-10)
        assert row["rel_difference"] < 1e-6
