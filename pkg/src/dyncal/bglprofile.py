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
import json
import math

import numpy as np

# pylint: disable=unused-import
from typing import Dict, List, Set, Sequence, Tuple, Iterable  # noqa: F401
from typing import Callable, Optional, Union, Any  # noqa: F401

from dyncal.errors import DataIOError, InvalidInputError
from dyncal.globals import DEFAULT_DURATION_S, DEFAULT_SAMPLE_INTERVAL_S
from dyncal.outputbuffer import OutputBuffer
from dyncal.utils import Utils


# Generated BGL values are clipped into this range (mg/dL).
BGL_MIN = 20.0
BGL_MAX = 600.0


class ExcursionEvent:
    '''A smooth excursion starting at time_s: a bi-exponential with a lagged rise and a slower decay, scaled to peak at magnitude (mg/dL).'''

    def __init__(self, time_s: float, magnitude: float, rise_s: float = 1800.0, decay_s: float = 5400.0) -> None:
        if not (rise_s > 0.0 and decay_s > rise_s):
            raise InvalidInputError('excursion needs 0 < rise < decay, got rise=%r, decay=%r' % (rise_s, decay_s))
        if magnitude < 0.0:
            raise InvalidInputError('excursion magnitude must be non-negative: %r' % magnitude)
        self.time_s = float(time_s)
        self.magnitude = float(magnitude)
        self.rise_s = float(rise_s)
        self.decay_s = float(decay_s)

    def _peak(self) -> float:
        t_peak = math.log(self.decay_s / self.rise_s) * self.rise_s * self.decay_s / (self.decay_s - self.rise_s)
        return math.exp(-t_peak / self.decay_s) - math.exp(-t_peak / self.rise_s)

    def evaluate(self, t: np.ndarray) -> np.ndarray:
        dt = np.maximum(np.asarray(t, dtype=float) - self.time_s, 0.0)
        shape = np.exp(-dt / self.decay_s) - np.exp(-dt / self.rise_s)
        return self.magnitude * shape / self._peak()

    def to_dict(self) -> Dict[str, float]:
        return {'time_s': self.time_s, 'magnitude': self.magnitude, 'rise_s': self.rise_s, 'decay_s': self.decay_s}

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> 'ExcursionEvent':
        return cls(**d)

    def __repr__(self) -> str:
        return '<%s(t=%gs, magnitude=%g)>' % (self.__class__.__name__, self.time_s, self.magnitude)


class MealEvent(ExcursionEvent):
    pass


class InsulinEvent(ExcursionEvent):
    pass


class BglProfile:
    '''Parameters of one synthetic blood glucose profile.  Meal excursions add to the baseline, insulin responses subtract from it, and an optional slow sinusoidal wander with random phase is superposed.'''

    def __init__(self, baseline: float = 120.0, meals: Optional[Sequence[MealEvent]] = None, insulin: Optional[Sequence[InsulinEvent]] = None, duration_s: float = DEFAULT_DURATION_S, sample_interval_s: float = DEFAULT_SAMPLE_INTERVAL_S, wander_amplitude: float = 0.0, wander_period_s: float = 4 * 3600.0) -> None:
        if not duration_s > 0.0:
            raise InvalidInputError('profile duration must be positive: %r' % duration_s)
        if not 0.0 < sample_interval_s <= duration_s:
            raise InvalidInputError('sample interval must lie in (0, duration]: %r' % sample_interval_s)
        if wander_amplitude < 0.0 or not wander_period_s > 0.0:
            raise InvalidInputError('invalid wander parameters')
        self.baseline = float(baseline)
        self.meals: List[MealEvent] = list(meals or [])
        self.insulin: List[InsulinEvent] = list(insulin or [])
        self.duration_s = float(duration_s)
        self.sample_interval_s = float(sample_interval_s)
        self.wander_amplitude = float(wander_amplitude)
        self.wander_period_s = float(wander_period_s)

    @property
    def n_samples(self) -> int:
        return int(round(self.duration_s / self.sample_interval_s))

    def times(self) -> np.ndarray:
        return np.arange(self.n_samples) * self.sample_interval_s

    def to_dict(self) -> Dict[str, Any]:
        return {
            'baseline': self.baseline,
            'meals': [m.to_dict() for m in self.meals],
            'insulin': [i.to_dict() for i in self.insulin],
            'duration_s': self.duration_s,
            'sample_interval_s': self.sample_interval_s,
            'wander_amplitude': self.wander_amplitude,
            'wander_period_s': self.wander_period_s,
        }

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> 'BglProfile':
        d = dict(d)
        try:
            meals = [MealEvent.from_dict(m) for m in d.pop('meals', [])]
            insulin = [InsulinEvent.from_dict(i) for i in d.pop('insulin', [])]
            return cls(meals=meals, insulin=insulin, **d)
        except TypeError as e:
            raise InvalidInputError('malformed profile: %s' % e) from e


def generate_profile(spec: BglProfile, rng_seed: int, out: Optional[OutputBuffer] = None) -> Tuple[np.ndarray, np.ndarray]:
    '''Returns the sample times (s) and BGL values (mg/dL) of a profile.'''
    t = spec.times()
    u = np.full(t.size, spec.baseline)
    for meal in spec.meals:
        u += meal.evaluate(t)
    for dose in spec.insulin:
        u -= dose.evaluate(t)
    if spec.wander_amplitude > 0.0:
        phase = np.random.default_rng(rng_seed).uniform(0.0, 2.0 * math.pi)
        u += spec.wander_amplitude * np.sin(2.0 * math.pi * t / spec.wander_period_s + phase)

    clipped = int(np.sum((u < BGL_MIN) | (u > BGL_MAX)))
    if clipped > 0:
        if out is not None:
            out.warn('Clipped %d BGL value(s) into [%g, %g] mg/dL.' % (clipped, BGL_MIN, BGL_MAX))
        u = np.clip(u, BGL_MIN, BGL_MAX)
    return t, u


class PopulationSpec:
    '''Distributions the per-profile parameters of a virtual population are drawn from.

    Each (mean, std) pair is a normal distribution truncated at a floor; meal times jitter around the nominal schedule.'''

    FIELDS = ('baseline', 'meal_times_s', 'meal_time_jitter_s', 'meal_magnitude', 'meal_rise_s', 'meal_decay_s', 'insulin_ratio', 'insulin_delay_s', 'insulin_rise_s', 'insulin_decay_s', 'wander_amplitude', 'wander_period_s', 'duration_s', 'sample_interval_s')

    def __init__(self, **kwargs: Any) -> None:
        self.baseline = (120.0, 20.0)
        self.meal_times_s = [1.0 * 3600, 6.0 * 3600, 12.0 * 3600]
        self.meal_time_jitter_s = 1800.0
        self.meal_magnitude = (90.0, 30.0)
        self.meal_rise_s = (1800.0, 300.0)
        self.meal_decay_s = (5400.0, 1200.0)
        self.insulin_ratio = (0.5, 0.15)
        self.insulin_delay_s = (1800.0, 600.0)
        self.insulin_rise_s = (2400.0, 400.0)
        self.insulin_decay_s = (7200.0, 1200.0)
        self.wander_amplitude = (10.0, 5.0)
        self.wander_period_s = 4 * 3600.0
        self.duration_s = DEFAULT_DURATION_S
        self.sample_interval_s = DEFAULT_SAMPLE_INTERVAL_S

        for key, value in kwargs.items():
            if key not in self.FIELDS:
                raise InvalidInputError('unknown population parameter: %s' % key)
            if isinstance(getattr(self, key), tuple):
                if not (isinstance(value, (list, tuple)) and len(value) == 2):
                    raise InvalidInputError('%s must be a (mean, std) pair: %r' % (key, value))
                value = (float(value[0]), float(value[1]))
            elif key == 'meal_times_s':
                value = [float(v) for v in value]
            else:
                value = float(value)
            setattr(self, key, value)

    def to_dict(self) -> Dict[str, Any]:
        return {k: list(v) if isinstance(v, (tuple, list)) else v for k, v in ((k, getattr(self, k)) for k in self.FIELDS)}

    def draw(self, rng: np.random.Generator) -> BglProfile:
        def normal(dist: Tuple[float, float], floor: float) -> float:
            return max(float(rng.normal(dist[0], dist[1])), floor)

        meals: List[MealEvent] = []
        insulin: List[InsulinEvent] = []
        for nominal in self.meal_times_s:
            start = max(nominal + float(rng.normal(0.0, self.meal_time_jitter_s)), 0.0)
            magnitude = normal(self.meal_magnitude, 0.0)
            rise = normal(self.meal_rise_s, 300.0)
            decay = max(normal(self.meal_decay_s, 600.0), 2.0 * rise)
            meals.append(MealEvent(start, magnitude, rise, decay))

            dose = magnitude * min(normal(self.insulin_ratio, 0.0), 1.0)
            i_rise = normal(self.insulin_rise_s, 300.0)
            i_decay = max(normal(self.insulin_decay_s, 600.0), 2.0 * i_rise)
            insulin.append(InsulinEvent(start + normal(self.insulin_delay_s, 0.0), dose, i_rise, i_decay))

        return BglProfile(
            baseline=normal(self.baseline, 60.0),
            meals=meals,
            insulin=insulin,
            duration_s=self.duration_s,
            sample_interval_s=self.sample_interval_s,
            wander_amplitude=normal(self.wander_amplitude, 0.0),
            wander_period_s=self.wander_period_s,
        )


def profile_id(i: int) -> str:
    return 'patient-%03d' % (i + 1)


def generate_population(spec: PopulationSpec, n: int, rng_seed: int) -> List[Tuple[str, BglProfile]]:
    '''Draws n profiles; profile i depends only on the seed and i.'''
    if n < 0:
        raise InvalidInputError('population size must be non-negative: %d' % n)
    return [(profile_id(i), spec.draw(np.random.default_rng(Utils.derive_seed(rng_seed, 'profile', i)))) for i in range(n)]


def load_profiles(path: str) -> List[Tuple[str, BglProfile]]:
    '''Reads explicit profiles from a JSON file: {"profiles": [{"series_id": ..., "baseline": ..., "meals": [...], ...}, ...]}.'''
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except OSError as e:
        raise DataIOError('cannot read %s: %s' % (path, e)) from e
    except ValueError as e:
        raise InvalidInputError('%s: invalid JSON: %s' % (path, e)) from e

    profiles = []
    for i, entry in enumerate(data.get('profiles', []) if isinstance(data, dict) else []):
        entry = dict(entry)
        sid = str(entry.pop('series_id', profile_id(i)))
        profiles.append((sid, BglProfile.from_dict(entry)))
    return profiles
