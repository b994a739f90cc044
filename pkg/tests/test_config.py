import pytest

from stoaviz.config import Config, ConfigError, load_config


def test_defaults():
    cfg = load_config(env={})
    assert cfg.port == 8080
    assert cfg.idw_power == 2.0
    assert cfg.idw_radius_km == 50.0
    assert cfg.cell_size_deg == 0.05
    assert cfg.thresholds[0] == 0 and cfg.thresholds[-1] == 600
    assert cfg.neighbor_radius_km == 10.0


def test_file_values(tmp_path):
    path = tmp_path / "stoaviz.conf"
    path.write_text(
        "# service settings\n"
        "port = 9001\n"
        "data_dir = /srv/wells\n"
        "idw_radius_km = 25\n"
        "thresholds = 0, 100, 200\n"
        "cors_origins = http://localhost:5173\n"
    )
    cfg = load_config(str(path), env={})
    assert cfg.port == 9001
    assert cfg.data_dir == "/srv/wells"
    assert cfg.idw_radius_km == 25.0
    assert cfg.thresholds == [0.0, 100.0, 200.0]
    assert cfg.cors_origins == ["http://localhost:5173"]


def test_env_overrides_file(tmp_path):
    path = tmp_path / "stoaviz.conf"
    path.write_text("port = 9001\ndata_dir = /from/file\n")
    cfg = load_config(str(path), env={
        "STOAVIZ_DATA": "/from/env",
        "STOAVIZ_PORT": "7070",
    })
    assert cfg.data_dir == "/from/env"
    assert cfg.port == 7070


@pytest.mark.parametrize("body", [
    "port = not-a-number\n",
    "nonsense line without equals\n",
    "unknown_key = 5\n",
    "thresholds = 100, 50\n",
])
def test_bad_files(tmp_path, body):
    path = tmp_path / "bad.conf"
    path.write_text(body)
    with pytest.raises(ConfigError):
        load_config(str(path), env={})


def test_bad_env_port():
    with pytest.raises(ConfigError):
        load_config(env={"STOAVIZ_PORT": "eighty"})


def test_missing_file():
    with pytest.raises(ConfigError):
        load_config("/no/such/file.conf", env={})
