"""Config parsing: defaults, env precedence, batched errors, path resolution."""

import dataclasses
import json
import pathlib

import pytest

from terrarank.config import AppConfig, config_to_dict, load_config, load_config_file
from terrarank.errors import ConfigError

MINIMAL = {"dem_path": "/data/dem.asc", "graph_path": "/data/graph.json"}


def load(body: dict, env: dict | None = None, base_dir=None) -> AppConfig:
    return load_config(json.dumps(body), env=env or {}, base_dir=base_dir)


class TestDefaults:
    def test_empty_config_fails_source_invariants_with_defaults_intact(self):
        with pytest.raises(ConfigError) as info:
            load_config("", env={})
        text = str(info.value)
        assert "elevation source" in text
        assert "route source" in text

    def test_defaults_applied(self):
        cfg = load(MINIMAL)
        assert cfg.alpha == 10.0
        assert cfg.k == 3
        assert cfg.resample_interval_m == 30.0
        assert cfg.grade_mode == "absolute"

    def test_blank_text_is_empty_config(self):
        with pytest.raises(ConfigError):
            load_config("   \n", env={})

    def test_host_port_split(self):
        cfg = load({**MINIMAL, "listen_addr": "0.0.0.0:9001"})
        assert cfg.host == "0.0.0.0"
        assert cfg.port == 9001


class TestOverrides:
    def test_env_beats_file(self):
        cfg = load({**MINIMAL, "alpha": 5}, env={"TERRARANK_ALPHA": "7"})
        assert cfg.alpha == 7.0

    def test_env_alone_sets_value(self):
        cfg = load(MINIMAL, env={"TERRARANK_K": "5"})
        assert cfg.k == 5

    def test_empty_env_value_is_unset(self):
        cfg = load({**MINIMAL, "alpha": 5}, env={"TERRARANK_ALPHA": ""})
        assert cfg.alpha == 5.0

    def test_unrelated_env_ignored(self):
        cfg = load(MINIMAL, env={"PATH": "/usr/bin", "TERRA": "x"})
        assert cfg.alpha == 10.0

    def test_env_path_override(self):
        cfg = load(MINIMAL, env={"TERRARANK_DEM_PATH": "/elsewhere/d.asc"})
        assert cfg.dem_path == "/elsewhere/d.asc"


class TestErrors:
    def test_all_problems_reported_at_once(self):
        with pytest.raises(ConfigError) as info:
            load({"alpha": -1, "k": 0, "grade_mode": "sideways", "bogus": 1})
        text = str(info.value)
        assert "alpha" in text
        assert "k" in text
        assert "grade_mode" in text
        assert "bogus" in text

    def test_unknown_key(self):
        with pytest.raises(ConfigError, match="unknown key 'colour'"):
            load({**MINIMAL, "colour": "red"})

    def test_unknown_env_key(self):
        with pytest.raises(ConfigError, match="TERRARANK_COLOUR"):
            load(MINIMAL, env={"TERRARANK_COLOUR": "red"})

    def test_type_mismatch_string_for_number(self):
        with pytest.raises(ConfigError, match="alpha: expected number"):
            load({**MINIMAL, "alpha": "ten"})

    def test_bool_rejected_for_numeric(self):
        with pytest.raises(ConfigError, match="k: expected integer"):
            load({**MINIMAL, "k": True})

    def test_float_rejected_for_k(self):
        with pytest.raises(ConfigError, match="k: expected integer"):
            load({**MINIMAL, "k": 2.5})

    def test_env_type_mismatch(self):
        with pytest.raises(ConfigError, match="expected number"):
            load(MINIMAL, env={"TERRARANK_ALPHA": "fast"})

    def test_not_json(self):
        with pytest.raises(ConfigError, match="not valid JSON"):
            load_config("{nope", env={})

    def test_json_array_rejected(self):
        with pytest.raises(ConfigError, match="JSON object"):
            load_config("[1,2]", env={})

    @pytest.mark.parametrize("addr", ["localhost", ":8080", "host:port", "host:0", "host:70000"])
    def test_listen_addr_rejected(self, addr):
        with pytest.raises(ConfigError, match="listen_addr"):
            load({**MINIMAL, "listen_addr": addr})

    def test_interval_must_be_positive(self):
        with pytest.raises(ConfigError, match="resample_interval_m"):
            load({**MINIMAL, "resample_interval_m": 0})

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read config"):
            load_config_file(str(tmp_path / "absent.json"), env={})


class TestPathResolution:
    def test_relative_paths_resolve_against_config_dir(self, tmp_path):
        (tmp_path / "terrain.asc").write_text("stub")
        (tmp_path / "app.json").write_text(
            json.dumps({"dem_path": "terrain.asc", "graph_path": "net.json"})
        )
        cfg = load_config_file(str(tmp_path / "app.json"), env={})
        assert cfg.dem_path == str((tmp_path / "terrain.asc").resolve())
        assert cfg.graph_path == str((tmp_path / "net.json").resolve())

    def test_relative_file_url_resolves(self, tmp_path):
        cfg = load(
            {"dem_path": "/d.asc", "directions_url": "file://routes.json"},
            base_dir=tmp_path,
        )
        assert cfg.directions_url == "file://" + str((tmp_path / "routes.json").resolve())

    def test_absolute_paths_untouched(self):
        cfg = load({**MINIMAL, "directions_url": "file:///abs/routes.json"})
        assert cfg.dem_path == "/data/dem.asc"
        assert cfg.directions_url == "file:///abs/routes.json"

    def test_http_urls_untouched(self):
        cfg = load({"dem_path": "/d.asc", "directions_url": "https://api.example/v1"})
        assert cfg.directions_url == "https://api.example/v1"


class TestRoundTrip:
    def test_full_config_round_trips(self):
        cfg = load(
            {
                "graph_path": "/data/graph.json",
                "dem_path": "/data/dem.asc",
                "elevation_url": "https://elev.example/lookup",
                "directions_url": "https://dirs.example/route",
                "api_key": "k-test-000",
                "alpha": 12.5,
                "grade_mode": "uphill_only",
                "resample_interval_m": 25,
                "k": 4,
                "listen_addr": "0.0.0.0:9999",
                "cache_path": "/tmp/elev.csv",
                "cors_origin": "http://localhost:5173",
            }
        )
        again = load(config_to_dict(cfg))
        assert again == cfg

    def test_minimal_config_round_trips(self):
        cfg = load(MINIMAL)
        assert load(config_to_dict(cfg)) == cfg

    def test_serialized_form_has_no_nulls(self):
        document = config_to_dict(load(MINIMAL))
        assert None not in document.values()
        assert "api_key" not in document


class TestSecretHygiene:
    def test_api_key_not_in_repr(self):
        cfg = load({**MINIMAL, "api_key": "sk-live-hush"})
        assert "sk-live-hush" not in repr(cfg)
        assert "sk-live-hush" not in str(cfg)

    def test_api_key_still_accessible(self):
        cfg = load({**MINIMAL, "api_key": "sk-live-hush"})
        assert cfg.api_key == "sk-live-hush"

    def test_config_is_frozen(self):
        cfg = load(MINIMAL)
        with pytest.raises(dataclasses.FrozenInstanceError):
            cfg.alpha = 3.0


class TestFixtureConfig:
    FIXTURE = pathlib.Path(__file__).parent / "fixtures" / "config.json"

    def test_checked_in_fixture_loads(self):
        cfg = load_config_file(str(self.FIXTURE), env={})
        assert cfg.alpha == 10.0
        assert cfg.k == 3
        assert cfg.resample_interval_m == 200.0
        assert pathlib.Path(cfg.dem_path).is_file()
        assert pathlib.Path(cfg.graph_path).is_file()
        mock = cfg.directions_url[len("file://"):]
        assert pathlib.Path(mock).is_file()
