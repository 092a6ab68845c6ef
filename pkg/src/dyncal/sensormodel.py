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
import copy
import math

import numpy as np
import pandas as pd
from scipy.special import expit

# pylint: disable=unused-import
from typing import Dict, List, Set, Sequence, Tuple, Iterable  # noqa: F401
from typing import Callable, Optional, Union, Any  # noqa: F401

from dyncal.errors import InvalidInputError
from dyncal.timeseries import TimeSeries


TIME_UNIT_SECONDS = 'seconds'
TIME_UNIT_MINUTES = 'minutes'
TIME_UNITS = (TIME_UNIT_SECONDS, TIME_UNIT_MINUTES)


class SensorModel:
    '''First-order sensor with a power-law output map whose sensitivity drifts over the deployment.

        x_{k+1} = a x_k + b u_k
        y_k = gain * x_k^exponent * (offset + tanh(tau - onset) * s(tau - onset) * (floor + s(rolloff - tau)))

    with s the logistic sigmoid and tau = t_k / (3 T).  With time_unit "seconds" (default) t_k is used as is and
    T as the bare number 1140, so tau sweeps 0 to 20 over 19 hours.  With "minutes", t_k is converted first.'''

    PARAMETERS = ('a', 'b', 'lifespan', 'gain', 'exponent', 'offset', 'onset', 'floor', 'rolloff', 'divisor')

    def __init__(self, a: float = 0.8187, b: float = 163.1, lifespan: float = 1140.0, gain: float = 0.2, exponent: float = 0.1, offset: float = 0.8, onset: float = 5.0, floor: float = 0.6, rolloff: float = 17.0, divisor: float = 3.0, time_unit: str = TIME_UNIT_SECONDS) -> None:
        if not abs(a) < 1.0:
            raise InvalidInputError('state decay must satisfy |a| < 1: %r' % a)
        if not lifespan > 0.0 or not divisor > 0.0:
            raise InvalidInputError('lifespan and divisor must be positive')
        if time_unit not in TIME_UNITS:
            raise InvalidInputError('unknown time unit: %s' % time_unit)
        self.a = float(a)
        self.b = float(b)
        self.lifespan = float(lifespan)
        self.gain = float(gain)
        self.exponent = float(exponent)
        self.offset = float(offset)
        self.onset = float(onset)
        self.floor = float(floor)
        self.rolloff = float(rolloff)
        self.divisor = float(divisor)
        self.time_unit = time_unit
        self.x = 0.0

    @classmethod
    def from_continuous(cls, time_constant: float, dc_gain: float, sample_interval: float, **kwargs: Any) -> 'SensorModel':
        '''Zero-order-hold discretization of the first-order lag dc_gain / (time_constant s + 1).'''
        if not time_constant > 0.0 or not sample_interval > 0.0:
            raise InvalidInputError('time constant and sample interval must be positive')
        a = math.exp(-sample_interval / time_constant)
        return cls(a=a, b=dc_gain * (1.0 - a), **kwargs)

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> 'SensorModel':
        unknown = set(d) - set(cls.PARAMETERS) - {'time_unit'}
        if unknown:
            raise InvalidInputError('unknown sensor model parameter(s): %s' % ', '.join(sorted(unknown)))
        return cls(**d)

    def to_dict(self) -> Dict[str, Any]:
        d: Dict[str, Any] = {name: getattr(self, name) for name in self.PARAMETERS}
        d['time_unit'] = self.time_unit
        return d

    def copy(self) -> 'SensorModel':
        return copy.copy(self)

    @property
    def dc_gain(self) -> float:
        return self.b / (1.0 - self.a)

    @property
    def lifespan_s(self) -> float:
        # T is the lifespan in minutes under both time units.
        return self.lifespan * 60.0

    def reset(self) -> None:
        self.x = 0.0

    def _tau(self, t: Any) -> Any:
        t = np.asarray(t, dtype=float)
        if self.time_unit == TIME_UNIT_MINUTES:
            t = t / 60.0
        return t / (self.divisor * self.lifespan)

    def drift_bracket(self, t: Any) -> Any:
        '''The time-varying sensitivity factor of the output map (t in seconds).'''
        tau = self._tau(t)
        return self.offset + np.tanh(tau - self.onset) * expit(tau - self.onset) * (self.floor + expit(self.rolloff - tau))

    def output(self, x: Any, t: Any) -> Any:
        x = np.asarray(x, dtype=float)
        if np.any(x < 0.0):
            raise InvalidInputError('the output map is undefined for negative states')
        return self.gain * np.power(x, self.exponent) * self.drift_bracket(t)

    def step(self, u: float, t: float) -> float:
        '''Emits y_k from the current state, then advances the state with input u_k.'''
        if u < 0.0:
            raise InvalidInputError('negative input %r: the output map has a fractional power' % u)
        y = float(self.output(self.x, t))
        self.x = self.a * self.x + self.b * u
        return y


def sensor_step(model: SensorModel, u: float, t: float) -> float:
    return model.step(u, t)


def simulate_series(model: SensorModel, u: Sequence[float], sample_interval: float, series_id: str = '') -> TimeSeries:
    '''Runs a freshly reset copy of the model over an input profile and returns the sensor outputs with the profile as reference.'''
    sim = model.copy()
    sim.reset()
    u_arr = np.asarray(u, dtype=float).ravel()
    t = np.arange(u_arr.size) * float(sample_interval)
    y = np.array([sim.step(float(uk), float(tk)) for uk, tk in zip(u_arr, t)])
    return TimeSeries(t, y, u_ref=u_arr, series_id=series_id, sample_interval=sample_interval)


def sensor_characteristics(model: SensorModel, u_max: float = 400.0, x_max: float = 3.6e5, t_max_s: float = 19 * 3600.0, t_fixed_s: float = 50 * 60.0, x_fixed: float = 180.0, n_points: int = 101) -> Dict[str, pd.DataFrame]:
    '''Sweeps of the sensor characteristics:

    state_vs_input: one-step and steady-state x for a constant input u;
    output_vs_state: y against x at a fixed elapsed time;
    output_vs_time: y against elapsed time at a fixed state.'''
    u = np.linspace(0.0, u_max, n_points)
    x = np.linspace(0.0, x_max, n_points)
    t = np.linspace(0.0, t_max_s, n_points)
    return {
        'state_vs_input': pd.DataFrame({'u': u, 'x_one_step': model.b * u, 'x_steady': model.dc_gain * u}),
        'output_vs_state': pd.DataFrame({'x': x, 'y': model.output(x, t_fixed_s)}),
        'output_vs_time': pd.DataFrame({'t_s': t, 'y': model.output(np.full_like(t, x_fixed), t), 'drift': model.drift_bracket(t)}),
    }
