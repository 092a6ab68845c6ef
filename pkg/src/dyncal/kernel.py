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
import numpy as np
from scipy.spatial.distance import cdist

# pylint: disable=unused-import
from typing import Dict, List, Set, Sequence, Tuple, Iterable  # noqa: F401
from typing import Callable, Optional, Union, Any  # noqa: F401

from dyncal.errors import InvalidInputError


# Isotropic radial basis function kernel: k(zi, zj) = sigma^2 * exp(-||zi - zj||^2 / (2 * delta^2)).
class Kernel:

    @staticmethod
    def _check_scale(delta: float, sigma: float) -> None:
        if not delta > 0.0 or not sigma > 0.0:
            raise InvalidInputError('kernel length scale and amplitude must be positive: delta=%r, sigma=%r' % (delta, sigma))

    @classmethod
    def eval(cls, zi: Sequence[float], zj: Sequence[float], delta: float, sigma: float) -> float:
        '''Evaluates the kernel between two (normalized) feature vectors.'''
        cls._check_scale(delta, sigma)
        a = np.asarray(zi, dtype=float).ravel()
        b = np.asarray(zj, dtype=float).ravel()
        if a.shape != b.shape:
            raise InvalidInputError('feature dimension mismatch: %d != %d' % (a.size, b.size))

        d2 = float(np.sum((a - b) ** 2))
        return float(sigma ** 2 * np.exp(-d2 / (2.0 * delta ** 2)))

    @staticmethod
    def sq_dists(A: np.ndarray, B: np.ndarray) -> np.ndarray:
        '''Returns the |A| x |B| matrix of squared euclidean distances between rows.'''
        A = np.atleast_2d(np.asarray(A, dtype=float))
        B = np.atleast_2d(np.asarray(B, dtype=float))
        if A.shape[1] != B.shape[1]:
            raise InvalidInputError('feature dimension mismatch: %d != %d' % (A.shape[1], B.shape[1]))
        return np.asarray(cdist(A, B, metric='sqeuclidean'))

    @classmethod
    def from_sq_dists(cls, d2: np.ndarray, delta: float, sigma: float) -> np.ndarray:
        cls._check_scale(delta, sigma)
        return np.asarray(sigma ** 2 * np.exp(-d2 / (2.0 * delta ** 2)))

    @classmethod
    def matrix(cls, A: np.ndarray, B: np.ndarray, delta: float, sigma: float) -> np.ndarray:
        '''Returns the kernel block between the rows of A and the rows of B.'''
        return cls.from_sq_dists(cls.sq_dists(A, B), delta, sigma)
