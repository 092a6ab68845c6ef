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

# pylint: disable=unused-import
from typing import Dict, List, Set, Sequence, Tuple, Iterable  # noqa: F401
from typing import Callable, Optional, Union, Any  # noqa: F401

from dyncal.errors import InvalidInputError


# One calibration pair: the feature vector [y_{k-p}, ..., y_k, ..., y_{k+ell}, t_k] and its (noisy) reference value.
class CalibrationSample:
    __slots__ = ('features', 'reference', 'series_id', 'k', 'truth')

    def __init__(self, features: Sequence[float], reference: float, series_id: str = '', k: int = 0, truth: Optional[float] = None) -> None:
        arr = np.array(features, dtype=float).ravel()
        if arr.size < 2:
            raise InvalidInputError('a feature vector needs at least one sensor output and the elapsed time: %r' % (features,))
        if not np.all(np.isfinite(arr)):
            raise InvalidInputError('feature vector contains non-finite values: %r' % (features,))
        arr.setflags(write=False)

        self.features = arr
        self.reference = float(reference)
        self.series_id = str(series_id)
        self.k = int(k)
        self.truth = None if truth is None else float(truth)

    @property
    def window(self) -> np.ndarray:
        return self.features[:-1]

    @property
    def elapsed_time(self) -> float:
        return float(self.features[-1])

    @property
    def dimension(self) -> int:
        return int(self.features.size)

    @property
    def target(self) -> float:
        '''The value errors are measured against: the noiseless truth when known, otherwise the reference.'''
        return self.reference if self.truth is None else self.truth

    def to_dict(self) -> Dict[str, Any]:
        d: Dict[str, Any] = {'features': self.features.tolist(), 'reference': self.reference, 'series_id': self.series_id, 'k': self.k}
        if self.truth is not None:
            d['truth'] = self.truth
        return d

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> 'CalibrationSample':
        try:
            return cls(d['features'], d['reference'], d.get('series_id', ''), d.get('k', 0), d.get('truth'))
        except (KeyError, TypeError) as e:
            raise InvalidInputError('malformed calibration sample: %r' % (d,)) from e

    def __repr__(self) -> str:
        return '<CalibrationSample(series=%s, k=%d, t=%g, reference=%g)>' % (self.series_id, self.k, self.elapsed_time, self.reference)

    @staticmethod
    def stack(samples: Sequence['CalibrationSample']) -> Tuple[np.ndarray, np.ndarray]:
        '''Returns the N x D feature matrix and the N reference values of a list of samples.'''
        if len(samples) == 0:
            raise InvalidInputError('empty calibration dataset')
        dims = {s.dimension for s in samples}
        if len(dims) != 1:
            raise InvalidInputError('calibration samples have mixed feature dimensions: %s' % sorted(dims))
        Z = np.vstack([s.features for s in samples])
        u = np.array([s.reference for s in samples], dtype=float)
        return Z, u
