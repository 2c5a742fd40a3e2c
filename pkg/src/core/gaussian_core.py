"""
Gaussian states of bosonic modes
First and second quadrature moments plus the symplectic operations
(two-mode squeezing, displacement, 50-50 beam splitter) and homodyne
marginals used by the dense coding protocol.

Units: each quadrature of the vacuum has variance 1/4, so a two-mode
squeezed vacuum with r = 0 has Wigner function ~ exp(-2|a1|^2 - 2|a2|^2).
Many texts use 1/2 (or hbar/2); nothing here does.

Ordering: (x1, p1, x2, p2, ..., xN, pN).
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.stats import multivariate_normal

from .errors import ValidationError
from .validator import ParameterValidator

logger = logging.getLogger(__name__)

VACUUM_VARIANCE = 0.25
SYMMETRY_RTOL = 1e-12
ADMISSIBILITY_SLACK = 1e-9


class Quadrature(str, Enum):
    """Quadrature selected by a homodyne detector"""
    X = "x"
    P = "p"

    @classmethod
    def coerce(cls, value: Union["Quadrature", str]) -> "Quadrature":
        try:
            return cls(value.value if isinstance(value, cls) else str(value).lower())
        except ValueError:
            raise ValidationError(f"quadrature must be 'x' or 'p' (got {value!r})")

    @property
    def offset(self) -> int:
        return 0 if self is Quadrature.X else 1


@dataclass(frozen=True)
class ComplexAmplitude:
    """Classical phase-space point alpha = re + i*im (quadrature units)"""
    re: float
    im: float

    def __post_init__(self):
        if not (math.isfinite(self.re) and math.isfinite(self.im)):
            raise ValidationError(
                f"amplitude components must be finite (got {self.re!r}, {self.im!r})"
            )
        object.__setattr__(self, "re", float(self.re))
        object.__setattr__(self, "im", float(self.im))

    @classmethod
    def from_complex(cls, value: complex) -> "ComplexAmplitude":
        value = complex(value)
        return cls(value.real, value.imag)

    def to_complex(self) -> complex:
        return complex(self.re, self.im)

    def __neg__(self) -> "ComplexAmplitude":
        return ComplexAmplitude(-self.re, -self.im)

    def __add__(self, other: "ComplexAmplitude") -> "ComplexAmplitude":
        return ComplexAmplitude(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "ComplexAmplitude") -> "ComplexAmplitude":
        return ComplexAmplitude(self.re - other.re, self.im - other.im)

    def scaled(self, factor: float) -> "ComplexAmplitude":
        return ComplexAmplitude(self.re * factor, self.im * factor)

    def abs2(self) -> float:
        return self.re ** 2 + self.im ** 2


@dataclass(frozen=True)
class ScalarGaussian:
    """Mean and variance of one real Gaussian variable"""
    mean: float
    variance: float

    def __post_init__(self):
        if not self.variance > 0:
            raise ValidationError(f"variance must be positive (got {self.variance!r})")

    @property
    def std(self) -> float:
        return math.sqrt(self.variance)


def symplectic_form(num_modes: int) -> np.ndarray:
    """Omega for the (x1, p1, ..., xN, pN) ordering"""
    return np.kron(np.eye(num_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def symplectic_eigenvalues(cov: np.ndarray) -> np.ndarray:
    """
    Symplectic spectrum of a covariance matrix, ascending

    Uses the Hermitian form i V^1/2 Omega V^1/2 so the eigenvalues come from
    eigvalsh rather than a non-normal eigensolve.
    """
    cov = np.asarray(cov, dtype=float)
    num_modes = cov.shape[0] // 2
    w, v = np.linalg.eigh(cov)
    root = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.T
    herm = 1j * root @ symplectic_form(num_modes) @ root
    nu = np.linalg.eigvalsh(herm)
    # eigenvalues come in +/- pairs
    return np.sort(np.abs(nu))[::2]


def _symmetrize(matrix: np.ndarray) -> np.ndarray:
    return 0.5 * (matrix + matrix.T)


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class GaussianState:
    """
    Gaussian state of N modes

    Attributes:
        num_modes: number of bosonic modes N
        mean: length-2N quadrature mean vector
        cov: 2N x 2N covariance matrix

    Construction checks symmetry, positive definiteness and the
    uncertainty principle (all symplectic eigenvalues >= 1/4).
    """
    num_modes: int
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        errors = []
        if not isinstance(self.num_modes, (int, np.integer)) or self.num_modes < 1:
            raise ValidationError(f"num_modes must be a positive integer (got {self.num_modes!r})")

        dim = 2 * int(self.num_modes)
        mean = np.asarray(self.mean, dtype=float)
        cov = np.asarray(self.cov, dtype=float)

        if mean.shape != (dim,):
            errors.append(f"mean must have shape ({dim},), got {mean.shape}")
        if cov.shape != (dim, dim):
            errors.append(f"cov must have shape ({dim}, {dim}), got {cov.shape}")
        if errors:
            raise ValidationError(errors)

        if not (np.all(np.isfinite(mean)) and np.all(np.isfinite(cov))):
            raise ValidationError("state moments must be finite")

        scale = max(1.0, float(np.max(np.abs(cov))))
        if np.max(np.abs(cov - cov.T)) > SYMMETRY_RTOL * scale:
            raise ValidationError("covariance matrix is not symmetric")

        try:
            np.linalg.cholesky(cov)
        except np.linalg.LinAlgError:
            raise ValidationError("covariance matrix is not positive definite")

        nu_min = float(symplectic_eigenvalues(cov)[0])
        if nu_min < VACUUM_VARIANCE - ADMISSIBILITY_SLACK * scale:
            raise ValidationError(
                f"covariance violates the uncertainty principle "
                f"(smallest symplectic eigenvalue {nu_min:.6g} < {VACUUM_VARIANCE})"
            )

        object.__setattr__(self, "num_modes", int(self.num_modes))
        object.__setattr__(self, "mean", _frozen(mean))
        object.__setattr__(self, "cov", _frozen(cov))

    @property
    def purity(self) -> float:
        """Tr(rho^2) = (1/4)^N / sqrt(det cov)"""
        return VACUUM_VARIANCE ** self.num_modes / math.sqrt(np.linalg.det(self.cov))

    def is_pure(self, rtol: float = 1e-9) -> bool:
        target = VACUUM_VARIANCE ** (2 * self.num_modes)
        return abs(np.linalg.det(self.cov) - target) <= rtol * target

    def index(self, mode: int, which: Union[Quadrature, str]) -> int:
        """Position of a quadrature in the mean vector"""
        _check_mode(self, mode)
        return 2 * mode + Quadrature.coerce(which).offset


def _check_mode(state: GaussianState, mode: int, name: str = "mode"):
    if not isinstance(mode, (int, np.integer)) or not 0 <= mode < state.num_modes:
        raise ValidationError(
            f"{name} index {mode!r} out of range for a {state.num_modes}-mode state"
        )


def _apply_symplectic(state: GaussianState, S: np.ndarray) -> GaussianState:
    """Congruence V -> S V S^T and d -> S d, re-symmetrised"""
    return GaussianState(
        state.num_modes,
        S @ state.mean,
        _symmetrize(S @ state.cov @ S.T),
    )


def vacuum(num_modes: int) -> GaussianState:
    """Vacuum state of num_modes modes"""
    if not isinstance(num_modes, (int, np.integer)) or num_modes < 1:
        raise ValidationError(f"num_modes must be >= 1 (got {num_modes!r})")
    dim = 2 * int(num_modes)
    return GaussianState(int(num_modes), np.zeros(dim), VACUUM_VARIANCE * np.eye(dim))


def two_mode_squeezed(r: float) -> GaussianState:
    """
    Two-mode squeezed vacuum (EPR source)

    Squeezes x1 + x2 and p1 - p2:
        var(x_i) = var(p_i) = cosh(2r)/4
        cov(x1, x2) = -sinh(2r)/4,  cov(p1, p2) = +sinh(2r)/4

    r is capped (CONSTRAINTS["state_r"]); past the cap the covariance is
    singular in double precision.
    """
    ParameterValidator.require('state_r', r)
    c = math.cosh(2.0 * r) * VACUUM_VARIANCE
    s = math.sinh(2.0 * r) * VACUUM_VARIANCE
    cov = np.array([
        [c, 0.0, -s, 0.0],
        [0.0, c, 0.0, s],
        [-s, 0.0, c, 0.0],
        [0.0, s, 0.0, c],
    ])
    logger.debug("two-mode squeezed state r=%.6g", r)
    return GaussianState(2, np.zeros(4), cov)


def displace(state: GaussianState, mode: int, amount: ComplexAmplitude) -> GaussianState:
    """Shift the mean of one mode; covariance untouched"""
    _check_mode(state, mode)
    if not isinstance(amount, ComplexAmplitude):
        amount = ComplexAmplitude.from_complex(amount)
    mean = np.array(state.mean)
    mean[2 * mode] += amount.re
    mean[2 * mode + 1] += amount.im
    return GaussianState(state.num_modes, mean, state.cov)


def beamsplitter_matrix(num_modes: int, mode_a: int, mode_b: int) -> np.ndarray:
    """
    Symplectic matrix of the 50-50 beam splitter
    a -> (a + b)/sqrt(2), b -> (a - b)/sqrt(2) on both quadratures
    """
    h = 1.0 / math.sqrt(2.0)
    S = np.eye(2 * num_modes)
    for q in (0, 1):
        ia, ib = 2 * mode_a + q, 2 * mode_b + q
        S[ia, ia], S[ia, ib] = h, h
        S[ib, ia], S[ib, ib] = h, -h
    return S


def beamsplitter_5050(state: GaussianState, mode_a: int, mode_b: int) -> GaussianState:
    """
    50-50 beam splitter; output mode_a is the sum port (beta1),
    output mode_b the difference port (beta2)
    """
    _check_mode(state, mode_a, "mode_a")
    _check_mode(state, mode_b, "mode_b")
    if mode_a == mode_b:
        raise ValidationError(f"beam splitter needs two distinct modes (got {mode_a} twice)")
    return _apply_symplectic(state, beamsplitter_matrix(state.num_modes, mode_a, mode_b))


def reduced_state(state: GaussianState, modes: Sequence[int]) -> GaussianState:
    """Marginal state of the listed modes, in the listed order"""
    modes = list(modes)
    if not modes or len(set(modes)) != len(modes):
        raise ValidationError("reduced_state needs a non-empty list of distinct modes")
    for mode in modes:
        _check_mode(state, mode)
    idx = np.array([2 * m + q for m in modes for q in (0, 1)])
    return GaussianState(len(modes), state.mean[idx], state.cov[np.ix_(idx, idx)])


def quadrature_marginal(state: GaussianState, mode: int,
                        which: Union[Quadrature, str]) -> ScalarGaussian:
    """Exact mean and variance of one quadrature"""
    i = state.index(mode, which)
    return ScalarGaussian(float(state.mean[i]), float(state.cov[i, i]))


def _factor(cov: np.ndarray) -> np.ndarray:
    """Cholesky factor, eigenvalue-clipped fallback for semidefinite input"""
    try:
        return np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        logger.debug("Cholesky failed, using clipped eigen-factorisation")
        w, v = np.linalg.eigh(_symmetrize(cov))
        return v * np.sqrt(np.clip(w, 0.0, None))


def selection_indices(state: GaussianState,
                      selections: Iterable[Tuple[int, Union[Quadrature, str]]]) -> List[int]:
    """Vector indices of commuting homodyne selections"""
    selections = list(selections)
    if not selections:
        raise ValidationError("at least one homodyne selection is required")
    modes = [mode for mode, _ in selections]
    if len(set(modes)) != len(modes):
        raise ValidationError(
            "homodyne selections must use distinct modes "
            "(x and p of one mode do not commute)"
        )
    return [state.index(mode, which) for mode, which in selections]


def joint_homodyne_sample(state: GaussianState,
                          selections: Iterable[Tuple[int, Union[Quadrature, str]]],
                          rng: np.random.Generator,
                          shots: Optional[int] = None) -> np.ndarray:
    """
    Draw ideal homodyne outcomes from the joint Gaussian marginal

    Args:
        state: state to measure
        selections: (mode, quadrature) pairs, at most one per mode
        rng: seeded generator, the only thing mutated
        shots: number of independent draws; None returns one vector

    Returns:
        array of shape (k,) or (shots, k)
    """
    idx = selection_indices(state, selections)
    mu = state.mean[idx]
    L = _factor(state.cov[np.ix_(idx, idx)])
    n = 1 if shots is None else int(shots)
    if n < 1:
        raise ValidationError(f"shots must be >= 1 (got {shots!r})")
    z = rng.standard_normal((n, len(idx)))
    samples = mu + z @ L.T
    return samples[0] if shots is None else samples


def mean_photon(state: GaussianState, mode: int) -> float:
    """<n> = var(x) + var(p) + <x>^2 + <p>^2 - 1/2"""
    _check_mode(state, mode)
    ix, ip = 2 * mode, 2 * mode + 1
    n = (state.cov[ix, ix] + state.cov[ip, ip]
         + state.mean[ix] ** 2 + state.mean[ip] ** 2 - 2 * VACUUM_VARIANCE)
    return max(float(n), 0.0)


def wigner(state: GaussianState, points: np.ndarray) -> np.ndarray:
    """
    Wigner density of the state at phase-space points

    Args:
        points: array (..., 2N) in the state's ordering
    """
    return multivariate_normal(mean=state.mean, cov=state.cov).pdf(points)
