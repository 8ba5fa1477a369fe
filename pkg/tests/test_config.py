import pytest
from pathlib import Path
import yaml
from string_toric.config import Settings, default_settings, load_config, use_settings
from string_toric.exceptions import ConfigurationError, EnumerationCapExceeded
from string_toric.weyl_words import enumerate_reduced_words


def test_load_config_success(tmp_path: Path):
    """Test loading a valid configuration file."""
    config_content = {
        "max_rank": 4,
        "vertex_max_dim": 6,
        "box_max_points": 5000,
        "default_lambda": 3,
        "log_level": "debug",
    }
    config_file = tmp_path / "config.yaml"
    with open(config_file, "w") as f:
        yaml.dump(config_content, f)

    settings = load_config(config_file)
    assert settings.max_rank == 4
    assert settings.vertex_max_dim == 6
    assert settings.box_max_points == 5000
    assert settings.default_lambda == 3
    assert settings.log_level == "DEBUG"


def test_load_config_partial_uses_defaults(tmp_path: Path):
    """Test that omitted fields fall back to their defaults."""
    config_file = tmp_path / "config.yaml"
    with open(config_file, "w") as f:
        yaml.dump({"facet_check_max_dim": 3}, f)

    settings = load_config(config_file)
    assert settings.facet_check_max_dim == 3
    assert settings.max_rank == 5
    assert settings.vertex_max_rows == 30


def test_load_config_out_of_range_raises_error(tmp_path: Path):
    """Test that a value outside its bounds raises ConfigurationError."""
    config_file = tmp_path / "config.yaml"
    with open(config_file, "w") as f:
        yaml.dump({"max_rank": 0}, f)

    with pytest.raises(ConfigurationError, match="Invalid configuration"):
        load_config(config_file)


def test_load_config_unknown_log_level_raises_error(tmp_path: Path):
    """Test that an unknown log level raises ConfigurationError."""
    config_file = tmp_path / "config.yaml"
    with open(config_file, "w") as f:
        yaml.dump({"log_level": "LOUD"}, f)

    with pytest.raises(ConfigurationError, match="log level"):
        load_config(config_file)


def test_load_config_file_not_found():
    """Test that missing file raises ConfigurationError."""
    with pytest.raises(ConfigurationError, match="not found"):
        load_config(Path("/nonexistent/path/config.yaml"))


def test_load_config_empty_file(tmp_path: Path):
    """Test that an empty file raises ConfigurationError."""
    config_file = tmp_path / "config.yaml"
    config_file.write_text("")

    with pytest.raises(ConfigurationError, match="empty"):
        load_config(config_file)


def test_load_config_invalid_yaml(tmp_path: Path):
    """Test that malformed YAML raises ConfigurationError."""
    config_file = tmp_path / "config.yaml"
    config_file.write_text("max_rank: [1, 2\n")

    with pytest.raises(ConfigurationError, match="Invalid YAML"):
        load_config(config_file)


def test_load_config_not_a_mapping(tmp_path: Path):
    """Test that a YAML list is rejected."""
    config_file = tmp_path / "config.yaml"
    with open(config_file, "w") as f:
        yaml.dump([1, 2, 3], f)

    with pytest.raises(ConfigurationError, match="mapping"):
        load_config(config_file)


def test_settings_defaults():
    """Test that Settings has correct defaults."""
    settings = Settings()
    assert settings.max_rank == 5
    assert settings.vertex_max_dim == 10
    assert settings.vertex_max_rows == 30
    assert settings.box_max_points == 10_000_000
    assert settings.facet_check_max_dim == 6
    assert settings.fan_materialize_max_rank == 10
    assert settings.default_lambda == 2
    assert settings.log_level == "WARNING"


def test_use_settings_changes_library_caps():
    """Test that active settings drive the caps of library functions."""
    try:
        use_settings(Settings(max_rank=2))
        assert default_settings().max_rank == 2
        with pytest.raises(EnumerationCapExceeded) as excinfo:
            enumerate_reduced_words(3)
        assert excinfo.value.limit == 2
    finally:
        use_settings(None)
    assert default_settings().max_rank == 5
