import json
import os
import socket
import subprocess
import sys
import time
import urllib.request
from pathlib import Path

import pytest

from stoaviz import features as ft
from stoaviz.cli import main
from stoaviz.ingest import load_snapshot

HEADER = "well_id,date,lat,lon,county,lsd,wl,bt"

SMALL_CSV = "\n".join([
    HEADER,
    "W1,1995-01,34.10,-101.90,Hale,3400,120,3250",
    "W1,1995-02,34.10,-101.90,Hale,3400,125,3250",
    "W1,1995-03,34.10,-101.90,Hale,3400,122,3250",
    "W2,1995-01,34.20,-101.80,Hale,3500,150,3200",
    "W2,1995-02,34.20,-101.80,Hale,3500,149,3200",
    "bogus row",
]) + "\n"


@pytest.fixture
def datadir(tmp_path):
    csv = tmp_path / "wells.csv"
    csv.write_text(SMALL_CSV)
    out = tmp_path / "data"
    assert main(["ingest", str(csv), "--out", str(out)]) == 0
    return out


class TestIngestCommand:
    def test_report_totals(self, tmp_path, capsys):
        csv = tmp_path / "wells.csv"
        csv.write_text(SMALL_CSV)
        code = main(["ingest", str(csv), "--out", str(tmp_path / "d")])
        out = capsys.readouterr().out
        assert code == 0
        n_rows = len(SMALL_CSV.strip().split("\n")) - 1
        assert f"rows read:     {n_rows}" in out
        assert "rows accepted: 5" in out
        assert "rows rejected: 1" in out
        store = load_snapshot(tmp_path / "d")
        assert len(store) == 2

    def test_headerless_file(self, tmp_path, capsys):
        csv = tmp_path / "bad.csv"
        csv.write_text("W1,1995-01,34.1,-101.9,Hale,3400,120,3250\n")
        assert main(["ingest", str(csv), "--out", str(tmp_path / "d")]) == 1
        assert "header" in capsys.readouterr().err

    def test_unwritable_out(self, tmp_path, capsys):
        csv = tmp_path / "wells.csv"
        csv.write_text(SMALL_CSV)
        blocker = tmp_path / "blocked"
        blocker.write_text("a file, not a directory")
        code = main(["ingest", str(csv), "--out", str(blocker / "sub")])
        assert code == 1
        assert "error" in capsys.readouterr().err

    def test_missing_input(self, tmp_path, capsys):
        assert main(["ingest", str(tmp_path / "no.csv"),
                     "--out", str(tmp_path / "d")]) == 1


class TestFeaturesCommand:
    def test_stdout_rows(self, datadir, capsys):
        assert main(["features", str(datadir), "--out", "-"]) == 0
        out = capsys.readouterr().out
        lines = out.strip().split("\n")
        assert lines[0].startswith("well_id,average")
        assert len(lines) == 3  # header + 2 wells

    def test_rerun_byte_identical(self, datadir, tmp_path):
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        assert main(["features", str(datadir), "--out", str(a)]) == 0
        assert main(["features", str(datadir), "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_values_match_module(self, datadir, tmp_path):
        out = tmp_path / "f.csv"
        assert main(["features", str(datadir), "--out", str(out)]) == 0
        store = load_snapshot(datadir)
        assert out.read_text() == ft.feature_table_csv(store)


class TestContoursCommand:
    def test_writes_geojson(self, datadir, tmp_path):
        out = tmp_path / "bands.geojson"
        assert main(["contours", str(datadir), "--month", "1995-02",
                     "--out", str(out), "--cell", "0.02"]) == 0
        geo = json.loads(out.read_text())
        assert geo["type"] == "FeatureCollection"
        for feat in geo["features"]:
            for poly in feat["geometry"]["coordinates"]:
                for ring in poly:
                    assert ring[0] == ring[-1]

    def test_month_without_data_empty(self, datadir, capsys):
        assert main(["contours", str(datadir), "--month", "2001-01",
                     "--out", "-"]) == 0
        geo = json.loads(capsys.readouterr().out)
        assert geo["features"] == []

    def test_bad_month(self, datadir):
        assert main(["contours", str(datadir), "--month", "not-a-month",
                     "--out", "-"]) == 1


class TestRankCommand:
    def test_table_matches_module(self, datadir, capsys):
        assert main(["rank", str(datadir), "--feature", "max_drop",
                     "--order", "desc", "-k", "5"]) == 0
        out = capsys.readouterr().out.strip().split("\n")
        assert out[0] == "well_id,value"
        store = load_snapshot(datadir)
        want = ft.rank_wells(store, ft.RankFeature.MAX_DROP, "desc", 5)
        assert [ln.split(",")[0] for ln in out[1:]] == [w for w, _ in want]

    def test_unknown_feature_is_usage_error(self, datadir):
        with pytest.raises(SystemExit) as exc:
            main(["rank", str(datadir), "--feature", "wetness"])
        assert exc.value.code == 2


class TestServeCommand:
    def test_missing_datadir(self, tmp_path, capsys):
        assert main(["serve", str(tmp_path / "nope")]) == 1

    def test_serves_wells_index(self, datadir):
        port = _free_port()
        proc = _spawn_serve(datadir, port)
        try:
            body = _poll_json(f"http://127.0.0.1:{port}/api/wells")
            assert [w["well_id"] for w in body] == ["W1", "W2"]
        finally:
            proc.terminate()
            proc.wait(timeout=10)

    def test_port_busy(self, datadir):
        port = _free_port()
        blocker = socket.socket()
        blocker.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        blocker.bind(("127.0.0.1", port))
        blocker.listen(1)
        try:
            proc = _spawn_serve(datadir, port)
            assert proc.wait(timeout=30) == 1
        finally:
            blocker.close()


def _free_port():
    s = socket.socket()
    s.bind(("127.0.0.1", 0))
    port = s.getsockname()[1]
    s.close()
    return port


def _spawn_serve(datadir, port):
    return subprocess.Popen(
        [sys.executable, "-m", "stoaviz.cli", "serve", str(datadir),
         "--port", str(port)],
        stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL,
        cwd=str(Path(__file__).parent.parent))


def _poll_json(url, timeout=30.0):
    deadline = time.time() + timeout
    last = None
    while time.time() < deadline:
        try:
            with urllib.request.urlopen(url, timeout=2) as resp:
                return json.loads(resp.read())
        except Exception as exc:
            last = exc
            time.sleep(0.2)
    raise AssertionError(f"server never answered: {last}")
