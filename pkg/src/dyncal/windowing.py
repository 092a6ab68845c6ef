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
from dyncal.outputbuffer import OutputBuffer
from dyncal.timeseries import TimeSeries


NOISE_AFTER_DOWNSAMPLE = 'after-downsample'
NOISE_BEFORE_DOWNSAMPLE = 'before-downsample'
NOISE_ORDERS = (NOISE_AFTER_DOWNSAMPLE, NOISE_BEFORE_DOWNSAMPLE)


class WindowSpec:
    '''Number of past (p) and future (ell) sensor outputs stacked around the center sample.'''

    def __init__(self, p: int, ell: int) -> None:
        if isinstance(p, bool) or isinstance(ell, bool) or int(p) != p or int(ell) != ell:
            raise InvalidInputError('window sizes must be integers: p=%r, ell=%r' % (p, ell))
        if p < 0 or ell < 0:
            raise InvalidInputError('window sizes must be non-negative: p=%d, ell=%d' % (p, ell))
        self.p = int(p)
        self.ell = int(ell)

    @property
    def length(self) -> int:
        '''Minimum series length that yields one sample.'''
        return self.p + self.ell + 1

    @property
    def dimension(self) -> int:
        return self.p + self.ell + 2

    def __eq__(self, other: object) -> bool:
        return isinstance(other, WindowSpec) and (self.p, self.ell) == (other.p, other.ell)

    def __hash__(self) -> int:
        return hash((self.p, self.ell))

    def __repr__(self) -> str:
        return '<WindowSpec(p=%d, ell=%d)>' % (self.p, self.ell)

    def to_dict(self) -> Dict[str, int]:
        return {'p': self.p, 'ell': self.ell}

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> 'WindowSpec':
        return cls(d['p'], d['ell'])


def downsample(series: TimeSeries, factor: int) -> TimeSeries:
    if isinstance(factor, bool) or int(factor) != factor or factor < 1:
        raise InvalidInputError('downsampling factor must be a positive integer: %r' % (factor,))
    factor = int(factor)
    if factor == 1:
        return series

    idx = slice(0, None, factor)
    return series.replace(
        t=series.t[idx],
        y=series.y[idx],
        u_ref=None if series.u_ref is None else series.u_ref[idx],
        u_true=None if series.u_true is None else series.u_true[idx],
        sample_interval=series.sample_interval * factor,
    )


def add_reference_noise(series: TimeSeries, snr_db: float, rng_seed: int) -> TimeSeries:
    '''Corrupts u_ref with white Gaussian noise at the given signal-to-noise ratio (dB) of the series' own mean power.

    snr_db = inf disables the noise.  The noiseless values are kept as u_true.'''
    if series.u_ref is None:
        raise InvalidInputError('series %s has no reference values to corrupt' % series.series_id)
    if math.isnan(snr_db) or snr_db == -math.inf:
        raise InvalidInputError('invalid SNR: %r' % snr_db)
    if snr_db == math.inf:
        return series

    clean = series.truth()
    power = float(np.mean(series.u_ref ** 2)) if len(series) > 0 else 0.0
    std = math.sqrt(power / 10.0 ** (snr_db / 10.0))
    rng = np.random.default_rng(rng_seed)
    noisy = series.u_ref + rng.normal(0.0, std, size=len(series))
    return series.replace(u_ref=noisy, u_true=clean)


def extract_features(series: TimeSeries, spec: WindowSpec) -> Tuple[np.ndarray, np.ndarray]:
    '''Returns the center indices k and the feature matrix of all complete windows of a series.

    Rows are [y_{k-p}, ..., y_k, y_{k+1}, ..., y_{k+ell}, t_k].  Series shorter than the window give empty arrays.'''
    n = len(series)
    count = n - spec.p - spec.ell
    if count <= 0:
        return np.zeros(0, dtype=int), np.zeros((0, spec.dimension))

    ks = np.arange(spec.p, spec.p + count)
    offsets = np.arange(-spec.p, spec.ell + 1)
    Z = np.empty((count, spec.dimension))
    Z[:, :-1] = series.y[ks[:, None] + offsets[None, :]]
    Z[:, -1] = series.t[ks]
    return ks, Z


def extract_samples(series: TimeSeries, spec: WindowSpec, lifespan_s: Optional[float] = None, out: Optional[OutputBuffer] = None) -> List[CalibrationSample]:
    if series.u_ref is None:
        raise InvalidInputError('series %s has no reference values' % series.series_id)
    if len(series) < spec.length:
        raise InvalidInputError('series %s is too short for the window: %d samples, at least %d needed' % (series.series_id, len(series), spec.length))

    ks, Z = extract_features(series, spec)
    if lifespan_s is not None and out is not None:
        late = int(np.sum(Z[:, -1] > lifespan_s))
        if late > 0:
            out.warn('series %s: %d sample(s) lie beyond the sensor lifespan of %g s.' % (series.series_id, late, lifespan_s))

    truth = series.u_true
    return [
        CalibrationSample(Z[i], series.u_ref[k], series.series_id, int(k), None if truth is None else truth[k])
        for i, k in enumerate(ks)
    ]


def prepare_series(series: TimeSeries, factor: int, snr_db: float, rng_seed: int, noise_order: str = NOISE_AFTER_DOWNSAMPLE) -> TimeSeries:
    '''Downsamples a series and injects reference noise, in the configured order.'''
    if noise_order not in NOISE_ORDERS:
        raise InvalidInputError('unknown noise order: %s' % noise_order)
    if noise_order == NOISE_BEFORE_DOWNSAMPLE:
        return downsample(add_reference_noise(series, snr_db, rng_seed), factor)
    return add_reference_noise(downsample(series, factor), snr_db, rng_seed)


def _check_fraction(test_fraction: float) -> None:
    if not 0.0 < test_fraction < 1.0:
        raise InvalidInputError('test fraction must lie in (0, 1): %r' % test_fraction)


def _n_test(n: int, test_fraction: float) -> int:
    return min(max(int(round(n * test_fraction)), 1), n - 1)


def split_by_series(datasets: Dict[str, Any], test_fraction: float, rng_seed: int) -> Tuple[Dict[str, Any], Dict[str, Any]]:
    '''Randomly assigns whole series to the training or the test side.

    The assignment depends only on the set of series ids and the seed, never on dict ordering.'''
    _check_fraction(test_fraction)
    if len(datasets) < 2:
        raise InvalidInputError('at least 2 series are required for a split, got %d' % len(datasets))

    ids = sorted(datasets)
    order = np.random.default_rng(rng_seed).permutation(len(ids))
    n_test = _n_test(len(ids), test_fraction)
    test_ids = {ids[i] for i in order[:n_test]}

    train = {sid: datasets[sid] for sid in ids if sid not in test_ids}
    test = {sid: datasets[sid] for sid in ids if sid in test_ids}
    return train, test


def split_by_sample(samples: Sequence[CalibrationSample], test_fraction: float, rng_seed: int) -> Tuple[List[CalibrationSample], List[CalibrationSample]]:
    '''Random sample-level split; both sides keep the original sample order.'''
    _check_fraction(test_fraction)
    if len(samples) < 2:
        raise InvalidInputError('at least 2 samples are required for a split, got %d' % len(samples))

    order = np.random.default_rng(rng_seed).permutation(len(samples))
    n_test = _n_test(len(samples), test_fraction)
    test_idx = set(int(i) for i in order[:n_test])
    train = [s for i, s in enumerate(samples) if i not in test_idx]
    test = [s for i, s in enumerate(samples) if i in test_idx]
    return train, test


def subsample(samples: Sequence[CalibrationSample], max_samples: Optional[int], rng_seed: int) -> List[CalibrationSample]:
    '''Caps a dataset at max_samples by seeded uniform sampling without replacement (order preserved).'''
    if max_samples is None or len(samples) <= max_samples:
        return list(samples)
    if max_samples < 2:
        raise InvalidInputError('sample cap must be at least 2: %d' % max_samples)
    keep = np.sort(np.random.default_rng(rng_seed).choice(len(samples), size=max_samples, replace=False))
    return [samples[int(i)] for i in keep]
