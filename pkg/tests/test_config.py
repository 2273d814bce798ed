import json

import pytest

from owisac import config
from owisac.errors import ConfigError


def test_expand_grid_list_and_range():
    assert config.expand_grid([1, 2.5]) == [1.0, 2.5]
    assert config.expand_grid({"start": -10, "stop": 40, "step": 5}) == [float(v) for v in range(-10, 41, 5)]
    # a stop that is not on the grid is excluded
    assert config.expand_grid({"start": 0, "stop": 1, "step": 0.3}) == [0.0, 0.3, 0.6, 0.9]
    # floating steps land exactly on the decimal grid
    assert config.expand_grid({"start": 0.0, "stop": 0.9, "step": 0.1})[-1] == 0.9


def test_resolve_defaults_and_nested_merge():
    cfg = config.resolve({"scenario": {"range_m": 3.0}, "snr_db": [0, 10]})
    assert cfg["scenario"] == {"range_m": 3.0, "velocity_mps": 10.0}
    assert cfg["snr_db"] == [0, 10]
    assert cfg["trials"] == config.DEFAULTS["trials"]
    # defaults are not mutated by a resolve
    assert config.DEFAULTS["scenario"]["range_m"] == 7.5


def test_grid_object_replaces_default_list():
    cfg = config.resolve({"nsp": [0.5]})
    assert cfg["nsp"] == [0.5]


def test_overrides_win_and_none_is_ignored():
    cfg = config.resolve({"seed": 4, "trials": 9}, seed=None, trials=3)
    assert cfg["seed"] == 4
    assert cfg["trials"] == 3


def test_override_is_validated():
    with pytest.raises(ConfigError, match="workers"):
        config.resolve({}, workers=0)


@pytest.mark.parametrize("raw,field", [
    ({"trails": 3}, "<root>"),
    ({"pam_orders": [1]}, "pam_orders/0"),
    ({"constraints": [{"a_min": 0.1}]}, "constraints/0"),
    ({"snr_db": {"start": 0, "stop": 1}}, "snr_db"),
    ({"fmcw": {"carrier_hz": -1}}, "fmcw"),
])
def test_schema_errors_name_the_field(raw, field):
    with pytest.raises(ConfigError, match=field):
        config.resolve(raw)


def test_load_reports_line_and_column(tmp_path):
    path = tmp_path / "c.json"
    path.write_text('{\n  "seed": 1,\n  "trials": ,\n}\n', encoding="utf-8")
    with pytest.raises(ConfigError, match="line 3 column"):
        config.load(path)


def test_load_rejects_non_object_and_missing_file(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps([1, 2]), encoding="utf-8")
    with pytest.raises(ConfigError, match="top level"):
        config.load(path)
    with pytest.raises(ConfigError, match="cannot read"):
        config.load(tmp_path / "missing.json")
