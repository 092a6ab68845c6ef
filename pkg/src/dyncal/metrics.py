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
from dyncal.globals import ISO_ABS_LIMIT, ISO_PAE_LIMIT, ISO_PASS_FRACTION, ISO_THRESHOLD


def pae(true_u: float, est_u: float) -> float:
    '''Percent absolute error of an estimate.'''
    if not true_u > 0.0:
        raise InvalidInputError('percent absolute error needs a positive true value, got %r' % true_u)
    return 100.0 * abs(est_u - true_u) / true_u


class ErrorRecord:
    CSV_COLUMNS = ('series_id', 'k', 'true_u', 'est_u', 'abs_err', 'pae')

    def __init__(self, true_u: float, est_u: float, series_id: str = '', k: int = 0) -> None:
        self.true_u = float(true_u)
        self.est_u = float(est_u)
        self.pae = pae(self.true_u, self.est_u)
        self.abs_err = abs(self.est_u - self.true_u)
        self.series_id = str(series_id)
        self.k = int(k)

    def iso_pass(self) -> bool:
        '''ISO 15197 per-estimate criterion: within 15% above 100 mg/dL, within 15 mg/dL otherwise.'''
        if self.true_u > ISO_THRESHOLD:
            return self.pae <= ISO_PAE_LIMIT
        return self.abs_err <= ISO_ABS_LIMIT

    def to_dict(self) -> Dict[str, Any]:
        return {'series_id': self.series_id, 'k': self.k, 'true_u': self.true_u, 'est_u': self.est_u, 'abs_err': self.abs_err, 'pae': self.pae}

    def __repr__(self) -> str:
        return '<ErrorRecord(series=%s, k=%d, true=%g, est=%g, pae=%.2f%%)>' % (self.series_id, self.k, self.true_u, self.est_u, self.pae)


def records_from_predictions(samples: Sequence[CalibrationSample], estimates: Sequence[float]) -> List[ErrorRecord]:
    '''Pairs estimates with the truth of their samples (noiseless values when known).'''
    if len(samples) != len(estimates):
        raise InvalidInputError('%d samples but %d estimates' % (len(samples), len(estimates)))
    return [ErrorRecord(s.target, float(e), s.series_id, s.k) for s, e in zip(samples, estimates)]


def iso15197_check(records: Sequence[ErrorRecord]) -> Tuple[float, bool]:
    '''Returns the fraction of passing estimates and whether it reaches the 95% requirement.'''
    if len(records) == 0:
        raise InvalidInputError('no error records to check')
    passed = sum(1 for r in records if r.iso_pass())
    fraction = passed / len(records)
    return fraction, fraction >= ISO_PASS_FRACTION


class BoxplotStats:
    def __init__(self, median: float, q1: float, q3: float, whisker_low: float, whisker_high: float, outliers: List[float], count: int) -> None:
        self.median = median
        self.q1 = q1
        self.q3 = q3
        self.iqr = q3 - q1
        self.whisker_low = whisker_low
        self.whisker_high = whisker_high
        self.outliers = outliers
        self.count = count

    def to_dict(self) -> Dict[str, Any]:
        return {
            'count': self.count,
            'median': self.median,
            'q1': self.q1,
            'q3': self.q3,
            'iqr': self.iqr,
            'whisker_low': self.whisker_low,
            'whisker_high': self.whisker_high,
            'outliers': list(self.outliers),
        }

    def __repr__(self) -> str:
        return '<BoxplotStats(median=%g, iqr=%g, outliers=%d)>' % (self.median, self.iqr, len(self.outliers))


# Whiskers extend this many inter-quartile ranges to either side of the median.
WHISKER_IQR_FACTOR = 2.0


def boxplot_stats(values: Iterable[float]) -> BoxplotStats:
    '''Quartiles by linear interpolation; values strictly beyond median +/- 2 IQR are outliers.'''
    arr = np.asarray(list(values), dtype=float)
    if arr.size == 0:
        raise InvalidInputError('no values to summarize')
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError('cannot summarize non-finite values')

    q1, median, q3 = (float(q) for q in np.percentile(arr, [25.0, 50.0, 75.0]))
    iqr = q3 - q1
    low = median - WHISKER_IQR_FACTOR * iqr
    high = median + WHISKER_IQR_FACTOR * iqr
    outliers = sorted(float(v) for v in arr if v < low or v > high)
    return BoxplotStats(median, q1, q3, low, high, outliers, int(arr.size))


def summarize(records: Sequence[ErrorRecord]) -> Dict[str, Any]:
    '''Aggregate statistics of a set of error records: PAE boxplot, mean/max PAE and the ISO 15197 verdict.'''
    fraction, passed = iso15197_check(records)
    paes = [r.pae for r in records]
    return {
        'n_records': len(records),
        'mean_pae': float(np.mean(paes)),
        'max_pae': float(np.max(paes)),
        'pae_boxplot': boxplot_stats(paes).to_dict(),
        'iso15197_pass_fraction': fraction,
        'iso15197_pass': passed,
    }


def mean_pae(records: Sequence[ErrorRecord]) -> float:
    if len(records) == 0:
        return math.nan
    return float(np.mean([r.pae for r in records]))
