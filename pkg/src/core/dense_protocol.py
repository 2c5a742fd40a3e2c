"""
Dense coding protocol
Alice displaces EPR mode 1 by alpha_in; Bob mixes it with mode 2 on a
50-50 beam splitter, reads x on the sum port and p on the difference
port, and rescales the pair by sqrt(2) to get alpha_out.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import Iterable, Iterator, List, Optional, Tuple, Union

import numpy as np

from .errors import SimulationError, ValidationError
from .gaussian_core import (
    ComplexAmplitude,
    GaussianState,
    Quadrature,
    beamsplitter_5050,
    beamsplitter_matrix,
    displace,
    joint_homodyne_sample,
    selection_indices,
    two_mode_squeezed,
)
from .validator import ParameterValidator

logger = logging.getLogger(__name__)

RECEIVER_GAIN = math.sqrt(2.0)
SIGNAL_MODE = 0
IDLER_MODE = 1
# x on the sum port, p on the difference port
DECODER_SELECTIONS = ((SIGNAL_MODE, Quadrature.X), (IDLER_MODE, Quadrature.P))
DEFAULT_CHUNK_SIZE = 65536


@dataclass(frozen=True)
class ProtocolConfig:
    """Parameters of one simulated run"""
    r: float
    sigma2: float
    trials: int = 100000
    seed: int = 0

    def __post_init__(self):
        is_valid, errors = ParameterValidator.validate_protocol(
            {"r": self.r, "sigma2": self.sigma2, "trials": self.trials, "seed": self.seed}
        )
        if not is_valid:
            raise ValidationError(errors)
        for warning in ParameterValidator.get_warnings(
                {"r": self.r, "sigma2": self.sigma2, "trials": self.trials}):
            logger.warning(warning)


@dataclass(frozen=True)
class TrialRecord:
    """One protocol round"""
    alpha_in: ComplexAmplitude
    beta: ComplexAmplitude
    alpha_out: ComplexAmplitude


@dataclass(frozen=True)
class BivariateGaussian:
    """Complex Gaussian with independent real and imaginary parts"""
    mean: ComplexAmplitude
    var_re: float
    var_im: float

    def __post_init__(self):
        if not (self.var_re > 0 and self.var_im > 0):
            raise ValidationError(
                f"variances must be positive (got {self.var_re!r}, {self.var_im!r})"
            )

    def logpdf(self, re, im):
        re = np.asarray(re, dtype=float)
        im = np.asarray(im, dtype=float)
        return (-0.5 * (re - self.mean.re) ** 2 / self.var_re
                - 0.5 * (im - self.mean.im) ** 2 / self.var_im
                - 0.5 * np.log(4.0 * math.pi ** 2 * self.var_re * self.var_im))

    def pdf(self, re, im):
        return np.exp(self.logpdf(re, im))


@dataclass(frozen=True, eq=False)
class TrialBatch(Sequence):
    """
    Columnar store of trial records

    Each array has shape (n, 2) holding (re, im). Indexing yields
    TrialRecord objects; estimators work on the arrays directly.
    """
    alpha_in: np.ndarray
    beta: np.ndarray
    seed: int = 0
    alpha_out: np.ndarray = field(init=False)

    def __post_init__(self):
        alpha_in = np.asarray(self.alpha_in, dtype=float).reshape(-1, 2)
        beta = np.asarray(self.beta, dtype=float).reshape(-1, 2)
        if alpha_in.shape != beta.shape:
            raise ValidationError("alpha_in and beta must have the same number of rows")
        object.__setattr__(self, "alpha_in", alpha_in)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "alpha_out", RECEIVER_GAIN * beta)

    def __len__(self) -> int:
        return self.beta.shape[0]

    def __getitem__(self, i):
        if isinstance(i, slice):
            return TrialBatch(self.alpha_in[i], self.beta[i], self.seed)
        return TrialRecord(
            ComplexAmplitude(*self.alpha_in[i]),
            ComplexAmplitude(*self.beta[i]),
            ComplexAmplitude(*self.alpha_out[i]),
        )

    def __iter__(self) -> Iterator[TrialRecord]:
        for i in range(len(self)):
            yield self[i]

    @classmethod
    def from_records(cls, records: Iterable[TrialRecord], seed: int = 0) -> "TrialBatch":
        if isinstance(records, TrialBatch):
            return records
        records = list(records)
        alpha_in = np.array([[t.alpha_in.re, t.alpha_in.im] for t in records], dtype=float)
        beta = np.array([[t.beta.re, t.beta.im] for t in records], dtype=float)
        return cls(alpha_in.reshape(-1, 2), beta.reshape(-1, 2), seed)

    def to_array(self) -> np.ndarray:
        """(n, 6): alpha_in re/im, beta re/im, alpha_out re/im"""
        return np.hstack([self.alpha_in, self.beta, self.alpha_out])

    def concat(self, others: Sequence["TrialBatch"]) -> "TrialBatch":
        parts = [self, *others]
        return TrialBatch(
            np.vstack([p.alpha_in for p in parts]),
            np.vstack([p.beta for p in parts]),
            self.seed,
        )


def photon_budget(r: float, sigma2: float) -> float:
    """Mean photons in the transmitted mode: sigma2 + sinh(r)^2"""
    ParameterValidator.require('r', r)
    ParameterValidator.require('sigma2', sigma2)
    return sigma2 + math.sinh(r) ** 2


def sample_signal(sigma2: float, rng: np.random.Generator,
                  size: Optional[int] = None) -> Union[ComplexAmplitude, np.ndarray]:
    """
    Draw alpha from the Gaussian prior with E|alpha|^2 = sigma2
    (each part has variance sigma2/2)

    Returns a ComplexAmplitude, or an (size, 2) array when size is given.
    """
    ParameterValidator.require('sigma2', sigma2)
    n = 1 if size is None else int(size)
    draws = rng.normal(0.0, math.sqrt(sigma2 / 2.0), size=(n, 2))
    if size is None:
        return ComplexAmplitude(draws[0, 0], draws[0, 1])
    return draws


def encode(r: float, alpha_in: ComplexAmplitude) -> GaussianState:
    """EPR pair with mode 1 displaced by alpha_in; mode 2 untouched"""
    return displace(two_mode_squeezed(r), SIGNAL_MODE, alpha_in)


def decode(state: GaussianState, rng: np.random.Generator) -> Tuple[ComplexAmplitude, ComplexAmplitude]:
    """
    Bob's receiver: beam splitter, then x on the sum port and p on the
    difference port

    Returns:
        (beta, alpha_out) with alpha_out = sqrt(2) * beta
    """
    if state.num_modes != 2:
        raise ValidationError(f"decode needs a 2-mode state (got {state.num_modes})")
    mixed = beamsplitter_5050(state, SIGNAL_MODE, IDLER_MODE)
    x_sum, p_diff = joint_homodyne_sample(mixed, DECODER_SELECTIONS, rng)
    beta = ComplexAmplitude(x_sum, p_diff)
    return beta, beta.scaled(RECEIVER_GAIN)


def decode_batch(r: float, alpha_in: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """
    Vectorised encode + decode for many rounds sharing the same r

    Displacement only moves first moments, so the homodyne noise is drawn
    from the undisplaced post-beam-splitter covariance and the signal
    enters through the beam splitter's action on the mean.

    Returns:
        beta array of shape (n, 2)
    """
    alpha_in = np.asarray(alpha_in, dtype=float).reshape(-1, 2)
    mixed = beamsplitter_5050(two_mode_squeezed(r), SIGNAL_MODE, IDLER_MODE)
    noise = joint_homodyne_sample(mixed, DECODER_SELECTIONS, rng, shots=alpha_in.shape[0])

    means = np.zeros((alpha_in.shape[0], 4))
    means[:, 2 * SIGNAL_MODE:2 * SIGNAL_MODE + 2] = alpha_in
    S = beamsplitter_matrix(2, SIGNAL_MODE, IDLER_MODE)
    idx = selection_indices(mixed, DECODER_SELECTIONS)
    return (means @ S.T)[:, idx] + noise


def conditional_beta_distribution(r: float, alpha_in: ComplexAmplitude) -> BivariateGaussian:
    """P(beta | alpha): mean alpha/sqrt(2), variance e^{-2r}/4 per part"""
    ParameterValidator.require('r', r)
    var = math.exp(-2.0 * r) / 4.0
    return BivariateGaussian(alpha_in.scaled(1.0 / RECEIVER_GAIN), var, var)


def marginal_beta_distribution(r: float, sigma2: float) -> BivariateGaussian:
    """P(beta) under the Gaussian prior: variance (sigma2 + e^{-2r})/4 per part"""
    ParameterValidator.require('r', r)
    ParameterValidator.require('sigma2', sigma2)
    var = (sigma2 + math.exp(-2.0 * r)) / 4.0
    return BivariateGaussian(ComplexAmplitude(0.0, 0.0), var, var)


def chunk_generator(seed: int, chunk_index: int) -> np.random.Generator:
    """Independent stream for one chunk, fixed by (seed, chunk index)"""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(chunk_index,)))


def _run_chunk(task: Tuple[float, float, int, int, int]) -> Tuple[np.ndarray, np.ndarray]:
    r, sigma2, seed, chunk_index, size = task
    rng = chunk_generator(seed, chunk_index)
    alpha_in = sample_signal(sigma2, rng, size=size)
    beta = decode_batch(r, alpha_in, rng)
    return alpha_in, beta


def chunk_sizes(trials: int, chunk_size: int) -> List[int]:
    full, rest = divmod(trials, chunk_size)
    return [chunk_size] * full + ([rest] if rest else [])


def run_trials(config: ProtocolConfig, workers: int = 1,
               chunk_size: int = DEFAULT_CHUNK_SIZE) -> TrialBatch:
    """
    Generate config.trials independent rounds

    Output depends only on (seed, chunk_size); the worker count changes
    how chunks are scheduled, never what they contain.
    """
    if chunk_size < 1:
        raise ValidationError(f"chunk_size must be >= 1 (got {chunk_size!r})")
    if workers < 1:
        raise ValidationError(f"workers must be >= 1 (got {workers!r})")

    sizes = chunk_sizes(config.trials, chunk_size)
    tasks = [(config.r, config.sigma2, config.seed, i, n) for i, n in enumerate(sizes)]
    logger.info("Running %d trials in %d chunk(s) on %d worker(s)",
                config.trials, len(tasks), workers)

    try:
        if workers == 1 or len(tasks) == 1:
            results = [_run_chunk(task) for task in tasks]
        else:
            with Pool(processes=min(workers, len(tasks))) as pool:
                results = pool.map(_run_chunk, tasks)
        alpha_in = np.vstack([a for a, _ in results])
        beta = np.vstack([b for _, b in results])
    except MemoryError as e:
        raise SimulationError(
            f"cannot allocate {config.trials} trials ({e.__class__.__name__})"
        ) from e

    return TrialBatch(alpha_in, beta, config.seed)
