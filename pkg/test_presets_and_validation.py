"""
Tests for parameter validation, presets, output envelopes and logging setup

Usage:
    pytest test_presets_and_validation.py
"""

import json
import logging

import numpy as np
import pytest

from cli.output_writer import OutputEnvelope, OutputWriter, format_number, round_number
from core.errors import ToleranceExceeded, ValidationError
from core.logger import log_section, setup_logging
from core.preset_manager import PRESET_KEYS, PresetManager
from core.validator import ParameterValidator


# ============================================================================
# PARAMETER VALIDATION
# ============================================================================

def test_validate_protocol_valid():
    is_valid, errors = ParameterValidator.validate_protocol(
        {'r': 1.0, 'sigma2': 1.0, 'trials': 1000, 'seed': 0})
    assert is_valid
    assert errors == []


def test_validate_protocol_missing_fields():
    is_valid, errors = ParameterValidator.validate_protocol({'r': 1.0})
    assert not is_valid
    assert "Missing required field: sigma2" in errors
    assert len(errors) == 3


def test_validate_protocol_rejects_bool():
    _, errors = ParameterValidator.validate_protocol(
        {'r': True, 'sigma2': 1.0, 'trials': 10, 'seed': 0})
    assert errors == ["r: must be a real number (got True)"]


def test_validate_protocol_accepts_numpy_scalars():
    is_valid, _ = ParameterValidator.validate_protocol(
        {'r': np.float64(0.5), 'sigma2': np.float32(1.0), 'trials': np.int64(10),
         'seed': np.uint64(2 ** 63)})
    assert is_valid


def test_validate_sweep_collects_errors():
    is_valid, errors = ParameterValidator.validate_sweep(3.0, 1.0, 1, 'cubic')
    assert not is_valid
    assert len(errors) == 3


def test_squeezing_limits():
    assert ParameterValidator.check_field('r', 350.0) == []
    assert ParameterValidator.check_field('state_r', 7.0) == []
    assert ParameterValidator.check_field('state_r', 7.5) == ["r: must be at most 7.0 (got 7.5)"]
    with pytest.raises(ValidationError, match="r: must be at most 350.0"):
        ParameterValidator.require('r', 351.0)


def test_protocol_held_to_state_limit():
    _, errors = ParameterValidator.validate_protocol(
        {'r': 8.0, 'sigma2': 1.0, 'trials': 10, 'seed': 0})
    assert errors == ["r: must be at most 7.0 (got 8.0)"]


def test_warnings():
    warnings = ParameterValidator.get_warnings({'r': 6.0, 'sigma2': 0.0, 'trials': 10})
    assert len(warnings) == 3
    assert ParameterValidator.get_warnings({'r': 1.0, 'sigma2': 1.0, 'trials': 1000}) == []


def test_validate_for_estimation_trial_floor():
    config = {'r': 1.0, 'sigma2': 1.0, 'trials': 99, 'seed': 0}
    is_valid, errors = ParameterValidator.validate_for_estimation(config)
    assert not is_valid
    assert "at least 100" in errors[0]


def test_validation_error_joins_messages():
    error = ValidationError(["first", "second"])
    assert str(error) == "first; second"
    assert error.errors == ["first", "second"]
    assert isinstance(error, ValueError)


def test_tolerance_exceeded_message():
    error = ToleranceExceeded(0.5, 0.1)
    assert error.gap == 0.5
    assert "exceeds tolerance 0.1" in str(error)


# ============================================================================
# PRESETS
# ============================================================================

def test_default_presets():
    manager = PresetManager()
    assert set(manager.get_preset_names()) == {
        'vacuum', 'unit-snr', 'optimal-r1', 'break-even-number', 'break-even-squeezed'}
    for preset in manager.get_all_presets().values():
        assert ('sigma2' in preset) != ('nbar' in preset)
        assert ParameterValidator.validate_protocol(
            {'r': 0.0, 'sigma2': 0.0, **manager.extract_parameters(preset)})[0]


def test_presets_by_category():
    breakeven = PresetManager().get_presets_by_category('Break-even')
    assert set(breakeven) == {'break-even-number', 'break-even-squeezed'}


def test_get_preset_returns_copy():
    manager = PresetManager()
    preset = manager.get_preset('vacuum')
    preset['r'] = 9.0
    assert manager.get_preset('vacuum')['r'] == 0.0


def test_unknown_preset():
    with pytest.raises(ValidationError, match="unknown preset"):
        PresetManager().get_preset('squeezed-cat')


def test_custom_preset():
    manager = PresetManager()
    assert manager.add_custom_preset('mine', {'r': 0.3, 'sigma2': 2.0, 'colour': 'red'})
    assert not manager.add_custom_preset('mine', {'r': 0.1, 'sigma2': 1.0})
    preset = manager.get_preset('mine')
    assert preset['category'] == 'Custom'
    assert 'colour' not in preset


@pytest.mark.parametrize("suffix", [".yaml", ".yml", ".toml", ".json"])
def test_preset_file_round_trip(tmp_path, suffix):
    manager = PresetManager()
    path = tmp_path / f"preset{suffix}"
    manager.save_preset_to_file('optimal-r1', str(path))
    loaded = manager.load_preset_from_file(str(path))
    original = manager.get_preset('optimal-r1')
    assert manager.extract_parameters(loaded) == pytest.approx(manager.extract_parameters(original))


def test_preset_file_errors(tmp_path):
    manager = PresetManager()
    with pytest.raises(ValidationError, match="not found"):
        manager.load_preset_from_file(str(tmp_path / "missing.yaml"))

    unsupported = tmp_path / "preset.ini"
    unsupported.write_text("[preset]\n")
    with pytest.raises(ValidationError, match="unsupported"):
        manager.load_preset_from_file(str(unsupported))

    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    with pytest.raises(ValidationError, match="invalid preset file"):
        manager.load_preset_from_file(str(broken))

    listing = tmp_path / "list.yaml"
    listing.write_text("- 1\n- 2\n")
    with pytest.raises(ValidationError, match="mapping"):
        manager.load_preset_from_file(str(listing))


def test_preset_keys():
    assert PRESET_KEYS == ('r', 'sigma2', 'nbar', 'trials', 'seed')


# ============================================================================
# OUTPUT ENVELOPE
# ============================================================================

def test_number_formatting():
    assert format_number(1.0 / 3.0) == "0.333333333333"
    assert format_number(True) == "true"
    assert format_number(7) == "7"
    assert round_number({'a': [np.float64(2.0 / 3.0), np.int64(4)]}) == {'a': [0.666666666667, 4]}


def test_envelope_json_is_parseable():
    envelope = OutputEnvelope('capacity', {'nbar': 1.0}, {'c_dense': 1.0986122886681098})
    payload = json.loads(OutputWriter.render(envelope, 'json'))
    assert payload['schema_version'] == "1.0.0"
    assert payload['results']['c_dense'] == 1.09861228867


def test_envelope_unknown_format():
    with pytest.raises(ValidationError, match="unknown format"):
        OutputWriter.render(OutputEnvelope('x', {}, {}), 'xml')


def test_envelope_refuses_non_finite_results():
    envelope = OutputEnvelope('capacity', {'nbar': 1.0}, {'c_dense': float('inf')})
    for fmt in OutputWriter.FORMATS:
        with pytest.raises(ValidationError, match="not finite"):
            OutputWriter.render(envelope, fmt)


def test_load_envelope_rejects_other_json(tmp_path):
    path = tmp_path / "other.json"
    path.write_text('{"command": "capacity"}')
    with pytest.raises(ValidationError, match="missing"):
        OutputWriter.load_envelope(str(path))


# ============================================================================
# LOGGING
# ============================================================================

def test_setup_logging_does_not_stack_handlers(tmp_path):
    log_file = tmp_path / "logs" / "session.log"
    setup_logging(logging.INFO, str(log_file))
    logger = setup_logging(logging.INFO, str(log_file))
    assert len(logger.handlers) == 2
    assert logging.getLogger("cli").handlers == logger.handlers

    log_section(logging.getLogger("core.test"), "Section title")
    for handler in logger.handlers:
        handler.flush()
    text = log_file.read_text(encoding="utf-8")
    assert "[INFO] Section title" in text
    assert "=" * 70 in text
    setup_logging(logging.WARNING)
