"""
Preset Manager
Handles named simulation presets and preset files (YAML, TOML, JSON)
"""

import json
import logging
import math
from pathlib import Path
from typing import Dict, List

import toml
import yaml

from .errors import ValidationError

logger = logging.getLogger(__name__)

PRESET_KEYS = ('r', 'sigma2', 'nbar', 'trials', 'seed')


class PresetManager:
    """Manages simulation presets"""

    def __init__(self):
        self.presets = self.load_default_presets()

    def load_default_presets(self) -> Dict:
        """Load built-in presets"""
        r1 = 1.0
        return {
            'vacuum': {
                'name': 'vacuum',
                'description': 'No squeezing, no modulation: pure vacuum noise',
                'r': 0.0,
                'sigma2': 0.0,
                'trials': 1000,
                'seed': 0,
                'category': 'Reference'
            },
            'unit-snr': {
                'name': 'unit-snr',
                'description': 'Unsqueezed channel at sigma2 = 1 (MI = ln 2)',
                'r': 0.0,
                'sigma2': 1.0,
                'trials': 100000,
                'seed': 0,
                'category': 'Reference'
            },
            'optimal-r1': {
                'name': 'optimal-r1',
                'description': 'Optimal split at r = 1 (sigma2 = sinh 1 cosh 1)',
                'r': r1,
                'sigma2': math.sinh(r1) * math.cosh(r1),
                'trials': 1000000,
                'seed': 7,
                'category': 'Capacity'
            },
            'break-even-number': {
                'name': 'break-even-number',
                'description': 'Photon budget where dense coding ties number states',
                'nbar': 1.884,
                'trials': 100000,
                'seed': 0,
                'category': 'Break-even'
            },
            'break-even-squeezed': {
                'name': 'break-even-squeezed',
                'description': 'Photon budget where dense coding ties squeezed states',
                'nbar': 1.0,
                'trials': 100000,
                'seed': 0,
                'category': 'Break-even'
            }
        }

    def get_preset(self, name: str) -> Dict:
        """Get a specific preset by name"""
        if name not in self.presets:
            raise ValidationError(
                f"unknown preset {name!r} (available: {', '.join(self.get_preset_names())})"
            )
        return dict(self.presets[name])

    def get_all_presets(self) -> Dict:
        return self.presets

    def get_preset_names(self) -> List[str]:
        return list(self.presets.keys())

    def get_presets_by_category(self, category: str) -> Dict:
        return {
            name: preset
            for name, preset in self.presets.items()
            if preset.get('category') == category
        }

    def add_custom_preset(self, name: str, config: Dict) -> bool:
        """Add a custom preset; False if the name is taken"""
        if name in self.presets:
            return False

        self.presets[name] = {
            'name': name,
            'description': config.get('description', 'Custom preset'),
            **self.extract_parameters(config),
            'category': 'Custom'
        }
        return True

    @staticmethod
    def extract_parameters(config: Dict) -> Dict:
        """Keep only the simulation parameters of a preset"""
        return {key: config[key] for key in PRESET_KEYS if key in config}

    def save_preset_to_file(self, name: str, filepath: str) -> None:
        """Save a preset; the format follows the file extension"""
        preset = self.get_preset(name)
        path = Path(filepath)
        path.parent.mkdir(parents=True, exist_ok=True)
        suffix = path.suffix.lower()

        with open(path, 'w', encoding='utf-8') as f:
            if suffix in ('.yaml', '.yml'):
                yaml.safe_dump(preset, f, sort_keys=False)
            elif suffix == '.toml':
                toml.dump(preset, f)
            elif suffix == '.json':
                json.dump(preset, f, indent=2)
            else:
                raise ValidationError(f"unsupported preset format {suffix!r}")
        logger.info("Preset %s saved to %s", name, path)

    def load_preset_from_file(self, filepath: str) -> Dict:
        """Load a preset file (.yaml/.yml, .toml or .json)"""
        path = Path(filepath)
        if not path.exists():
            raise ValidationError(f"preset file not found: {filepath}")

        suffix = path.suffix.lower()
        try:
            with open(path, 'r', encoding='utf-8') as f:
                if suffix in ('.yaml', '.yml'):
                    preset = yaml.safe_load(f)
                elif suffix == '.toml':
                    preset = toml.load(f)
                elif suffix == '.json':
                    preset = json.load(f)
                else:
                    raise ValidationError(f"unsupported preset format {suffix!r}")
        except (yaml.YAMLError, toml.TomlDecodeError, json.JSONDecodeError) as e:
            raise ValidationError(f"invalid preset file {filepath}: {e}") from e

        if not isinstance(preset, dict):
            raise ValidationError(f"preset file {filepath} must contain a mapping")

        unknown = sorted(set(preset) - set(PRESET_KEYS) - {'name', 'description', 'category'})
        if unknown:
            raise ValidationError(f"unknown preset keys in {filepath}: {', '.join(unknown)}")

        logger.info("Preset loaded from %s", path)
        return preset
