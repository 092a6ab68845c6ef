"""
   The MIT License (MIT)

   Copyright (C) 2026 The dyncal developers

   Permission is hereby granted, free of charge, to any person obtaining a copy
   of this software and associated documentation files (the "Software"), to deal
   in the Software without restriction, including without limitation the rights
   to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
   copies of the Software, and to permit persons to whom the Software is
   furnished to do so, subject to the following conditions:

   The above copyright notice and this permission notice shall be included in
   all copies or substantial portions of the Software.

   THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
   IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
   FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
   AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
   LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
   OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN
   THE SOFTWARE.
"""
import math

import numpy as np

# pylint: disable=unused-import
from typing import Dict, List, Set, Sequence, Tuple, Iterable  # noqa: F401
from typing import Callable, Optional, Union, Any  # noqa: F401

from dyncal.calibrationsample import CalibrationSample
from dyncal.errors import InvalidInputError
from dyncal.gaussianprocess import GaussianProcess, PosteriorEstimate
from dyncal.globals import DEFAULT_TARGET_SCALE
from dyncal.hyperparameters import Hyperparameters
from dyncal.outputbuffer import OutputBuffer


class FeatureScaler:
    '''Per-dimension z-scoring of feature vectors with statistics frozen at training time.'''

    def __init__(self, mean: Sequence[float], std: Sequence[float], enabled: bool = True) -> None:
        self.mean = np.asarray(mean, dtype=float).ravel()
        self.std = np.asarray(std, dtype=float).ravel()
        self.enabled = bool(enabled)
        if self.mean.shape != self.std.shape:
            raise InvalidInputError('feature statistics have mismatched lengths')
        if np.any(self.std <= 0.0) or not np.all(np.isfinite(self.std)):
            raise InvalidInputError('feature standard deviations must be positive and finite')

    @classmethod
    def fit(cls, Z: np.ndarray, enabled: bool = True) -> 'FeatureScaler':
        Z = np.atleast_2d(np.asarray(Z, dtype=float))
        mean = Z.mean(axis=0)
        std = Z.std(axis=0)

        # Constant dimensions are only centered.
        std = np.where(std > 0.0, std, 1.0)
        return cls(mean, std, enabled)

    @property
    def dimension(self) -> int:
        return int(self.mean.size)

    def transform(self, Z: np.ndarray) -> np.ndarray:
        Z = np.atleast_2d(np.asarray(Z, dtype=float))
        if Z.shape[1] != self.dimension:
            raise InvalidInputError('feature dimension %d does not match the model dimension %d' % (Z.shape[1], self.dimension))
        if not self.enabled:
            return Z.copy()
        return (Z - self.mean) / self.std

    def to_dict(self) -> Dict[str, Any]:
        return {'mean': self.mean.tolist(), 'std': self.std.tolist(), 'enabled': self.enabled}

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> 'FeatureScaler':
        return cls(d['mean'], d['std'], d.get('enabled', True))


class SdcmModel:
    '''A trained statistical dynamic calibration map.

    Holds the calibration dataset (physical units), the hyperparameters, the frozen feature/target normalization and the factorized GP built from them.  Instances are never mutated; online updates build new ones via with_samples().'''

    def __init__(self, samples: Sequence[CalibrationSample], theta: Hyperparameters, scaler: FeatureScaler, target_scale: float = DEFAULT_TARGET_SCALE, lifespan_s: Optional[float] = None, out: Optional[OutputBuffer] = None) -> None:
        if not (math.isfinite(target_scale) and target_scale > 0.0):
            raise InvalidInputError('target scale must be positive: %r' % target_scale)

        Z, u = CalibrationSample.stack(samples)
        self.samples: Tuple[CalibrationSample, ...] = tuple(samples)
        self.theta = theta
        self.scaler = scaler
        self.target_scale = float(target_scale)
        self.lifespan_s = lifespan_s
        self.gp = GaussianProcess(scaler.transform(Z), u / self.target_scale, theta, out=out)

    @classmethod
    def build(cls, samples: Sequence[CalibrationSample], theta: Hyperparameters, normalize_features: bool = True, target_scale: float = DEFAULT_TARGET_SCALE, lifespan_s: Optional[float] = None, out: Optional[OutputBuffer] = None) -> 'SdcmModel':
        '''Trains a model: fits the feature normalization on the samples, assembles and factorizes Sigma_11.'''
        if len(samples) < 2:
            raise InvalidInputError('at least 2 calibration samples are required, got %d' % len(samples))

        Z, _ = CalibrationSample.stack(samples)
        scaler = FeatureScaler.fit(Z, enabled=normalize_features)
        return cls(samples, theta, scaler, target_scale=target_scale, lifespan_s=lifespan_s, out=out)

    def with_samples(self, samples: Sequence[CalibrationSample], out: Optional[OutputBuffer] = None) -> 'SdcmModel':
        '''Returns a model over a new dataset, keeping theta, the feature normalization and the target scale.'''
        return SdcmModel(samples, self.theta, self.scaler, target_scale=self.target_scale, lifespan_s=self.lifespan_s, out=out)

    @property
    def n_samples(self) -> int:
        return len(self.samples)

    @property
    def dimension(self) -> int:
        return self.gp.dimension

    @property
    def mu(self) -> float:
        '''Prior mean, in normalized target units.'''
        return self.gp.mu

    def normalize_features(self, Z: np.ndarray) -> np.ndarray:
        return self.scaler.transform(Z)

    def normalize_target(self, u: Union[float, np.ndarray]) -> Any:
        return np.asarray(u, dtype=float) / self.target_scale

    def augmented(self) -> np.ndarray:
        '''Returns the N x (D + 1) matrix of augmented vectors [z_i, u_i] in normalized units.'''
        return np.hstack([self.gp.Z, self.gp.u[:, None]])

    def _check_lifespan(self, Z: np.ndarray, out: Optional[OutputBuffer]) -> None:
        if out is None or self.lifespan_s is None:
            return
        late = int(np.sum(Z[:, -1] > self.lifespan_s))
        if late > 0:
            out.warn('%d query feature vector(s) have an elapsed time beyond the sensor lifespan of %g s.' % (late, self.lifespan_s))

    def predict_normalized(self, Z: np.ndarray, out: Optional[OutputBuffer] = None) -> Tuple[np.ndarray, np.ndarray]:
        '''Posterior means and variances in normalized units for raw feature rows.'''
        Z = np.atleast_2d(np.asarray(Z, dtype=float))
        self._check_lifespan(Z, out)
        return self.gp.posterior(self.scaler.transform(Z), out=out)

    def predict_many(self, Z: np.ndarray, out: Optional[OutputBuffer] = None) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        '''Returns (mean, variance, confidence) arrays; mean and variance in physical units, confidence from the normalized variance.'''
        mean_n, var_n = self.predict_normalized(Z, out=out)
        return mean_n * self.target_scale, var_n * self.target_scale ** 2, GaussianProcess.confidence(var_n)

    def predict(self, z: Sequence[float], out: Optional[OutputBuffer] = None) -> PosteriorEstimate:
        z_arr = np.asarray(z, dtype=float).ravel()
        if z_arr.size != self.dimension:
            raise InvalidInputError('feature dimension %d does not match the model dimension %d' % (z_arr.size, self.dimension))
        mean, var, gamma = self.predict_many(z_arr[None, :], out=out)
        return PosteriorEstimate(mean[0], var[0], gamma[0])
