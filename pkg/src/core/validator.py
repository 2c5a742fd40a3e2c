"""
Parameter Validator
Validates simulation and analytics parameters before a run
"""

import math
from numbers import Integral, Real
from typing import Dict, List, Sequence, Tuple

from .errors import ValidationError


class ParameterValidator:
    """Validates protocol, budget and sweep parameters"""

    # None means unbounded on that side; 'label' overrides the field name in messages
    CONSTRAINTS = {
        # e^{2r} and sinh(r)^2 stay inside the double range
        'r': {'min': 0.0, 'max': 350.0, 'unit': '', 'kind': Real},
        # cosh(2r) and sinh(2r) agree to every stored digit from about r = 9 and the
        # EPR covariance turns singular; 7 keeps the uncertainty check reliable
        'state_r': {'min': 0.0, 'max': 7.0, 'unit': '', 'kind': Real, 'label': 'r'},
        # Sample variances of the received quadratures stay finite
        'sigma2': {'min': 0.0, 'max': 1e100, 'unit': ' (quadrature units^2)', 'kind': Real},
        # Optimal r for this budget stays below the r limit
        'nbar': {'min': 0.0, 'max': 5e303, 'unit': ' photons', 'kind': Real},
        'trials': {'min': 1, 'max': None, 'unit': '', 'kind': Integral},
        'seed': {'min': 0, 'max': 2 ** 64 - 1, 'unit': '', 'kind': Integral},
    }

    # Above this the EPR covariance entries reach ~e^{2r}/8 and lose precision
    PRECISION_WARNING_R = 5.0
    MIN_ESTIMATION_TRIALS = 100

    @classmethod
    def check_field(cls, field: str, value) -> List[str]:
        """Check one value against its CONSTRAINTS entry"""
        constraints = cls.CONSTRAINTS[field]
        label = constraints.get('label', field.replace('_', ' '))
        kind = constraints['kind']

        if isinstance(value, bool) or not isinstance(value, kind):
            expected = "an integer" if kind is Integral else "a real number"
            return [f"{label}: must be {expected} (got {value!r})"]
        if kind is Real and not math.isfinite(value):
            return [f"{label}: must be finite (got {value!r})"]

        min_val = constraints['min']
        max_val = constraints['max']
        unit = constraints['unit']
        if min_val is not None and value < min_val:
            return [f"{label}: must be at least {min_val}{unit} (got {value!r})"]
        if max_val is not None and value > max_val:
            return [f"{label}: must be at most {max_val}{unit} (got {value!r})"]
        return []

    @classmethod
    def require(cls, field: str, value):
        """Raise ValidationError unless value satisfies its CONSTRAINTS entry"""
        errors = cls.check_field(field, value)
        if errors:
            raise ValidationError(errors)

    @classmethod
    def validate_protocol(cls, config: Dict) -> Tuple[bool, List[str]]:
        """
        Validate a protocol configuration

        Returns:
            Tuple of (is_valid: bool, errors: List[str])
        """
        errors = []

        required_fields = ['r', 'sigma2', 'trials', 'seed']
        for field in required_fields:
            if field not in config or config[field] is None:
                errors.append(f"Missing required field: {field}")

        if errors:
            return False, errors

        # Protocol runs build the EPR state, so r is held to the state limit
        checks = {'r': 'state_r'}
        for field in required_fields:
            errors.extend(cls.check_field(checks.get(field, field), config[field]))

        return len(errors) == 0, errors

    @classmethod
    def validate_nbar(cls, nbar) -> Tuple[bool, List[str]]:
        errors = cls.check_field('nbar', nbar)
        return len(errors) == 0, errors

    @classmethod
    def validate_grid(cls, nbar_grid: Sequence) -> Tuple[bool, List[str]]:
        """Every grid entry must be a finite nbar >= 0; messages carry the index"""
        errors = []
        for i, value in enumerate(nbar_grid):
            errors.extend(f"nbar_grid[{i}]: {e}" for e in cls.check_field('nbar', value))
        return len(errors) == 0, errors

    @classmethod
    def validate_sweep(cls, nbar_min, nbar_max, points, scale: str) -> Tuple[bool, List[str]]:
        """
        Validate a capacity sweep request

        Returns:
            Tuple of (is_valid: bool, errors: List[str])
        """
        errors = []
        errors.extend(f"nbar min: {e}" for e in cls.check_field('nbar', nbar_min))
        errors.extend(f"nbar max: {e}" for e in cls.check_field('nbar', nbar_max))
        if errors:
            return False, errors

        if not nbar_min < nbar_max:
            errors.append(f"nbar min must be below nbar max (got {nbar_min} >= {nbar_max})")

        if isinstance(points, bool) or not isinstance(points, Integral) or points < 2:
            errors.append(f"points: must be an integer >= 2 (got {points!r})")

        if scale not in ('linear', 'log'):
            errors.append(f"scale: must be 'linear' or 'log' (got {scale!r})")
        elif scale == 'log' and nbar_min <= 0:
            errors.append("log scale needs nbar min > 0")

        return len(errors) == 0, errors

    @classmethod
    def get_warnings(cls, config: Dict) -> List[str]:
        """
        Get non-critical warnings about a configuration

        Returns:
            List of warning messages
        """
        warnings = []

        if config.get('r', 0) > cls.PRECISION_WARNING_R:
            warnings.append(
                f"Warning: r = {config['r']} > {cls.PRECISION_WARNING_R}; "
                "covariance entries grow like e^{2r} and lose relative precision"
            )

        if config.get('sigma2', 1) == 0:
            warnings.append("Warning: sigma2 = 0 carries no signal (mutual information is 0)")

        trials = config.get('trials', cls.MIN_ESTIMATION_TRIALS)
        if trials < cls.MIN_ESTIMATION_TRIALS:
            warnings.append(
                f"Warning: {trials} trials is below the {cls.MIN_ESTIMATION_TRIALS} "
                "needed for mutual information estimation"
            )

        return warnings

    @classmethod
    def validate_for_estimation(cls, config: Dict) -> Tuple[bool, List[str]]:
        """Protocol checks plus the trial floor of the MI estimator"""
        is_valid, errors = cls.validate_protocol(config)
        if is_valid and config['trials'] < cls.MIN_ESTIMATION_TRIALS:
            errors.append(
                f"trials: must be at least {cls.MIN_ESTIMATION_TRIALS} "
                f"for estimation (got {config['trials']})"
            )
        return len(errors) == 0, errors
