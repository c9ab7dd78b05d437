"""Tests for the settings file and the small helpers."""

import pytest
import yaml
from source import utils


def test_defaults_when_missing(isolated_settings):
    settings = utils.Settings()
    assert settings.path == isolated_settings
    assert settings.get_simulation("subpacket_bytes") == 64
    assert settings.get_simulation("demand") == "worst"
    assert settings.get_oracle("max_k") == 16
    assert settings.get_output("format") == "grid"
    assert not isolated_settings.exists()


def test_set_saves_and_reloads(isolated_settings):
    settings = utils.Settings()
    settings.set_simulation(subpacket_bytes=16, demand="equal")
    settings.set_output(format="json-record")
    assert isolated_settings.exists()
    reloaded = utils.Settings()
    assert reloaded.get_simulation("subpacket_bytes") == 16
    assert reloaded.get_simulation("demand") == "equal"
    assert reloaded.get_output("format") == "json-record"


@pytest.mark.parametrize("data", [
    {"simulation": {"subpacket_bytes": 0, "seed": 0, "demand": "worst"}},
    {"simulation": {"subpacket_bytes": 8, "seed": 0, "demand": "best"},
     "oracle": {"max_k": 16, "max_nodes": 10}, "output": {"format": "grid"}},
    {"simulation": {"subpacket_bytes": True, "seed": 0, "demand": "worst"},
     "oracle": {"max_k": 16, "max_nodes": 10}, "output": {"format": "grid"}},
    {"simulation": {"subpacket_bytes": 8, "seed": 0, "demand": "worst"},
     "oracle": {"max_k": 0, "max_nodes": 10}, "output": {"format": "grid"}},
    ["not", "a", "mapping"],
])
def test_invalid_files_fall_back_to_defaults(isolated_settings, data):
    isolated_settings.write_text(yaml.safe_dump(data), encoding="utf-8")
    settings = utils.Settings()
    assert settings.get_simulation("subpacket_bytes") == 64
    assert settings.get_oracle("max_k") == 16


def test_damaged_yaml_falls_back_to_defaults(isolated_settings):
    isolated_settings.write_text("simulation: [unclosed\n", encoding="utf-8")
    assert utils.Settings().get_simulation("demand") == "worst"


def test_reset_does_not_share_defaults():
    settings = utils.Settings()
    settings.set_oracle(max_k=3)
    assert utils.oracle_settings["max_k"] == 16
    settings.reset()
    assert settings.get_oracle("max_k") == 16


@pytest.mark.parametrize("number, expected", [
    (640, "640 "), (1234, "1.2 k"), (2_500_000, "2.5 M"), (3 * 10 ** 9, "3.0 G"),
])
def test_format_number(number, expected):
    assert utils.format_number(number) == expected


def test_write_output(tmp_path, capsys):
    utils.write_output("a,b")
    assert capsys.readouterr().out == "a,b\n"
    out_path = tmp_path / "out.csv"
    utils.write_output("a,b\n", out_path)
    assert out_path.read_text(encoding="utf-8") == "a,b\n"


def test_propagating_thread():
    def fail():
        raise KeyError("boom")

    thread = utils.PropagatingThread(target=fail)
    thread.start()
    with pytest.raises(KeyError):
        thread.join()
    thread = utils.PropagatingThread(target=lambda: 7)
    thread.start()
    assert thread.join() == 7
