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

from dyncal.errors import InvalidInputError


class Hyperparameters:
    '''GP prior parameters: kernel length scale (delta), kernel amplitude (sigma) and reference noise std (sigma_u_tilde), all in normalized units.'''

    NAMES: Sequence[str] = ('delta', 'sigma', 'sigma_u_tilde')

    def __init__(self, delta: float, sigma: float, sigma_u_tilde: float) -> None:
        for name, value in zip(self.NAMES, (delta, sigma, sigma_u_tilde)):
            if not (math.isfinite(value) and value > 0.0):
                raise InvalidInputError('%s must be strictly positive and finite: %r' % (name, value))

        self.__delta = float(delta)
        self.__sigma = float(sigma)
        self.__sigma_u_tilde = float(sigma_u_tilde)

    @property
    def delta(self) -> float:
        return self.__delta

    @property
    def sigma(self) -> float:
        return self.__sigma

    @property
    def sigma_u_tilde(self) -> float:
        return self.__sigma_u_tilde

    @classmethod
    def from_log(cls, log_theta: Sequence[float]) -> 'Hyperparameters':
        values = np.exp(np.asarray(log_theta, dtype=float))
        return cls(float(values[0]), float(values[1]), float(values[2]))

    def to_log(self) -> np.ndarray:
        return np.log(np.array([self.__delta, self.__sigma, self.__sigma_u_tilde]))

    def to_dict(self) -> Dict[str, float]:
        return {'delta': self.__delta, 'sigma': self.__sigma, 'sigma_u_tilde': self.__sigma_u_tilde}

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> 'Hyperparameters':
        try:
            return cls(float(d['delta']), float(d['sigma']), float(d['sigma_u_tilde']))
        except (KeyError, TypeError) as e:
            raise InvalidInputError('incomplete hyperparameters: %r' % d) from e

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Hyperparameters):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def __hash__(self) -> int:
        return hash((self.__delta, self.__sigma, self.__sigma_u_tilde))

    def __str__(self) -> str:
        return 'delta=%.6g, sigma=%.6g, sigma_u_tilde=%.6g' % (self.__delta, self.__sigma, self.__sigma_u_tilde)

    def __repr__(self) -> str:
        return '<Hyperparameters(%s)>' % self.__str__()


class ParameterRange:
    '''Initial guess and search bounds of one hyperparameter.'''

    def __init__(self, initial_guess: float, lo: float, hi: float) -> None:
        if not 0.0 < lo < hi:
            raise InvalidInputError('invalid range [%r, %r]: bounds must satisfy 0 < lo < hi' % (lo, hi))
        if not lo <= initial_guess <= hi:
            raise InvalidInputError('initial guess %r outside of [%r, %r]' % (initial_guess, lo, hi))

        self.initial_guess = float(initial_guess)
        self.lo = float(lo)
        self.hi = float(hi)

    def contains(self, value: float) -> bool:
        return self.lo <= value <= self.hi

    def log_bounds(self) -> Tuple[float, float]:
        return math.log(self.lo), math.log(self.hi)

    def to_list(self) -> List[float]:
        return [self.initial_guess, self.lo, self.hi]

    def __repr__(self) -> str:
        return '<ParameterRange(init=%g, lo=%g, hi=%g)>' % (self.initial_guess, self.lo, self.hi)
