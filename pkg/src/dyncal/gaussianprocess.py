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
from scipy import linalg

# pylint: disable=unused-import
from typing import Dict, List, Set, Sequence, Tuple, Iterable  # noqa: F401
from typing import Callable, Optional, Union, Any  # noqa: F401

from dyncal.errors import InvalidInputError, NumericalError
from dyncal.globals import JITTER_FACTOR, JITTER_MAX, JITTER_START, VARIANCE_TOLERANCE
from dyncal.hyperparameters import Hyperparameters
from dyncal.kernel import Kernel
from dyncal.outputbuffer import OutputBuffer


# Posterior of the sensed value at one feature vector.
class PosteriorEstimate:
    __slots__ = ('mean', 'variance', 'confidence')

    def __init__(self, mean: float, variance: float, confidence: float) -> None:
        self.mean = float(mean)
        self.variance = float(variance)
        self.confidence = float(confidence)

    def __repr__(self) -> str:
        return '<PosteriorEstimate(mean=%g, variance=%g, confidence=%g)>' % (self.mean, self.variance, self.confidence)


class GaussianProcess:
    '''GP posterior over normalized features and normalized references.

    The prior mean is the arithmetic mean of the references; Sigma_11 = K(Z, Z) + sigma_u_tilde^2 * I is kept as its lower Cholesky factor.'''

    def __init__(self, Z: np.ndarray, u: np.ndarray, theta: Hyperparameters, out: Optional[OutputBuffer] = None) -> None:
        Z = np.atleast_2d(np.asarray(Z, dtype=float))
        u = np.asarray(u, dtype=float).ravel()
        if Z.shape[0] < 1:
            raise InvalidInputError('a Gaussian process needs at least one sample')
        if Z.shape[0] != u.size:
            raise InvalidInputError('%d feature vectors but %d references' % (Z.shape[0], u.size))

        self.Z = Z
        self.u = u
        self.theta = theta
        self.mu = float(np.mean(u))

        self.sigma11 = self.covariance(Z, theta)
        self.L, self.jitter = self.factorize(self.sigma11, out)
        self.alpha = linalg.cho_solve((self.L, True), u - self.mu, check_finite=False)

    @property
    def n_samples(self) -> int:
        return int(self.Z.shape[0])

    @property
    def dimension(self) -> int:
        return int(self.Z.shape[1])

    @staticmethod
    def covariance(Z: np.ndarray, theta: Hyperparameters) -> np.ndarray:
        '''Assembles Sigma_11 = Sigma_u(Z) + sigma_u_tilde^2 * I.'''
        K = Kernel.matrix(Z, Z, theta.delta, theta.sigma)
        K[np.diag_indices_from(K)] += theta.sigma_u_tilde ** 2
        return K

    @staticmethod
    def factorize(K: np.ndarray, out: Optional[OutputBuffer] = None) -> Tuple[np.ndarray, float]:
        '''Returns the lower Cholesky factor of K and the diagonal jitter that was needed (0.0 if none).

        Jitter starts at JITTER_START and grows by JITTER_FACTOR up to JITTER_MAX; beyond that a NumericalError is raised.'''
        try:
            return linalg.cholesky(K, lower=True, check_finite=False), 0.0
        except linalg.LinAlgError:
            pass

        n = K.shape[0]
        jitter = JITTER_START
        while jitter <= JITTER_MAX * (1.0 + 1e-9):
            try:
                L = linalg.cholesky(K + jitter * np.eye(n), lower=True, check_finite=False)
                if out is not None:
                    out.d('Covariance factorization needed a diagonal jitter of %g.' % jitter)
                return L, jitter
            except linalg.LinAlgError:
                jitter *= JITTER_FACTOR

        try:
            cond = float(np.linalg.cond(K))
        except np.linalg.LinAlgError:
            cond = math.inf
        raise NumericalError('covariance matrix (%dx%d) is not positive definite even with a diagonal jitter of %g; condition number ~ %.3g' % (n, n, JITTER_MAX, cond))

    def cross_covariance(self, Zq: np.ndarray) -> np.ndarray:
        '''Returns Sigma_12 for each query row, as an N x M matrix.'''
        Zq = np.atleast_2d(np.asarray(Zq, dtype=float))
        if Zq.shape[1] != self.dimension:
            raise InvalidInputError('query dimension %d does not match the model dimension %d' % (Zq.shape[1], self.dimension))
        return Kernel.matrix(self.Z, Zq, self.theta.delta, self.theta.sigma)

    def posterior(self, Zq: np.ndarray, out: Optional[OutputBuffer] = None) -> Tuple[np.ndarray, np.ndarray]:
        '''Returns the posterior means and variances at the query rows (normalized units).'''
        K12 = self.cross_covariance(Zq)
        mean = K12.T @ self.alpha + self.mu

        v = linalg.solve_triangular(self.L, K12, lower=True, check_finite=False)
        var = self.theta.sigma ** 2 - np.einsum('ij,ij->j', v, v)

        negative = var < 0.0
        if np.any(negative):
            worst = float(np.min(var))
            if worst < -VARIANCE_TOLERANCE:
                raise NumericalError('posterior variance %g is below the round-off tolerance of -%g' % (worst, VARIANCE_TOLERANCE))
            if out is not None:
                out.warn('Clamped %d slightly negative posterior variance(s) (min %g) to zero.' % (int(np.sum(negative)), worst))
            var = np.where(negative, 0.0, var)

        return mean, var

    @staticmethod
    def confidence(variance: np.ndarray) -> np.ndarray:
        '''gamma = 1 / sqrt(variance), in normalized units; infinite at zero variance.'''
        variance = np.asarray(variance, dtype=float)
        with np.errstate(divide='ignore'):
            return np.where(variance > 0.0, 1.0 / np.sqrt(np.where(variance > 0.0, variance, 1.0)), math.inf)
