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
import io
import json
import os

import numpy as np
import pandas as pd

# pylint: disable=unused-import
from typing import Dict, List, Set, Sequence, Tuple, Iterable  # noqa: F401
from typing import Callable, Optional, Union, Any  # noqa: F401

from dyncal.errors import DataIOError, InvalidInputError


# Relative tolerance on the spacing of sample times.
SPACING_TOLERANCE = 1e-6


class TimeSeries:
    '''Uniformly sampled sensor outputs of one sensor deployment, with optional reference values.

    Times are elapsed seconds since deployment.  u_true, when present, holds the noiseless reference from before noise injection.'''

    CSV_COLUMNS: Sequence[str] = ('t_s', 'y', 'u_ref', 'u_true')

    def __init__(self, t: Sequence[float], y: Sequence[float], u_ref: Optional[Sequence[float]] = None, series_id: str = '', sample_interval: Optional[float] = None, u_true: Optional[Sequence[float]] = None) -> None:
        self.t = np.array(t, dtype=float).ravel()
        self.y = np.array(y, dtype=float).ravel()
        self.u_ref = None if u_ref is None else np.array(u_ref, dtype=float).ravel()
        self.u_true = None if u_true is None else np.array(u_true, dtype=float).ravel()
        self.series_id = str(series_id)

        n = self.t.size
        if self.y.size != n:
            raise InvalidInputError('series %s: %d times but %d sensor outputs' % (self.series_id, n, self.y.size))
        for name, col in (('u_ref', self.u_ref), ('u_true', self.u_true)):
            if col is not None and col.size != n:
                raise InvalidInputError('series %s: %d times but %d %s values' % (self.series_id, n, col.size, name))
        for name, col in (('t', self.t), ('y', self.y), ('u_ref', self.u_ref), ('u_true', self.u_true)):
            if col is not None and not np.all(np.isfinite(col)):
                raise InvalidInputError('series %s: column %s has missing or non-finite values' % (self.series_id, name))

        if sample_interval is None:
            sample_interval = float(self.t[1] - self.t[0]) if n >= 2 else 0.0
        self.sample_interval = float(sample_interval)

        if n >= 2:
            if not self.sample_interval > 0.0:
                raise InvalidInputError('series %s: the sample interval must be positive' % self.series_id)
            steps = np.diff(self.t)
            if np.any(np.abs(steps - self.sample_interval) > SPACING_TOLERANCE * self.sample_interval):
                raise InvalidInputError('series %s: sample times are not uniformly spaced at %g s' % (self.series_id, self.sample_interval))

        for a in (self.t, self.y, self.u_ref, self.u_true):
            if a is not None:
                a.setflags(write=False)

    def __len__(self) -> int:
        return int(self.t.size)

    def __repr__(self) -> str:
        return '<TimeSeries(id=%s, n=%d, interval=%gs, reference=%s)>' % (self.series_id, len(self), self.sample_interval, self.u_ref is not None)

    @property
    def has_reference(self) -> bool:
        return self.u_ref is not None

    def replace(self, **kwargs: Any) -> 'TimeSeries':
        '''Returns a copy with some columns or attributes replaced.'''
        fields: Dict[str, Any] = {'t': self.t, 'y': self.y, 'u_ref': self.u_ref, 'series_id': self.series_id, 'sample_interval': self.sample_interval, 'u_true': self.u_true}
        fields.update(kwargs)
        return TimeSeries(**fields)

    def truth(self) -> Optional[np.ndarray]:
        '''The values estimates are scored against: u_true if known, else u_ref.'''
        return self.u_true if self.u_true is not None else self.u_ref

    def to_frame(self) -> pd.DataFrame:
        data: Dict[str, Any] = {'t_s': self.t, 'y': self.y}
        if self.u_ref is not None:
            data['u_ref'] = self.u_ref
        if self.u_true is not None:
            data['u_true'] = self.u_true
        return pd.DataFrame(data)

    def write_csv(self, path: str, metadata: Optional[Dict[str, Any]] = None) -> None:
        '''Writes the series as CSV; metadata becomes leading "# key = value" comment lines.'''
        meta: Dict[str, Any] = {'series_id': self.series_id, 'sample_interval_s': self.sample_interval}
        meta.update(metadata or {})
        write_csv(path, self.to_frame(), meta)

    @classmethod
    def read_csv(cls, path: str, series_id: Optional[str] = None) -> 'TimeSeries':
        df, meta = read_csv(path, required=('t_s', 'y'))
        unknown = [c for c in df.columns if c not in cls.CSV_COLUMNS]
        if unknown:
            raise InvalidInputError('%s: unexpected column(s): %s' % (path, ', '.join(unknown)))

        if series_id is None:
            series_id = meta.get('series_id') or os.path.splitext(os.path.basename(path))[0]
        interval = meta.get('sample_interval_s')
        return cls(
            df['t_s'].to_numpy(dtype=float),
            df['y'].to_numpy(dtype=float),
            u_ref=df['u_ref'].to_numpy(dtype=float) if 'u_ref' in df.columns else None,
            series_id=series_id,
            sample_interval=None if interval is None else float(interval),
            u_true=df['u_true'].to_numpy(dtype=float) if 'u_true' in df.columns else None,
        )


def write_csv(path: str, df: pd.DataFrame, metadata: Optional[Dict[str, Any]] = None) -> None:
    '''Writes a data frame as UTF-8 CSV, preceded by "# key = value" metadata lines.'''
    buf = io.StringIO()
    for key in sorted(metadata or {}):
        buf.write('# %s = %s\n' % (key, (metadata or {})[key]))
    df.to_csv(buf, index=False, float_format='%.17g', lineterminator='\n')

    try:
        with open(path, 'w', encoding='utf-8', newline='') as f:
            f.write(buf.getvalue())
    except OSError as e:
        raise DataIOError('cannot write %s: %s' % (path, e)) from e


def read_csv(path: str, required: Sequence[str] = ()) -> Tuple[pd.DataFrame, Dict[str, str]]:
    '''Reads a CSV file written by write_csv() (or any plain CSV) and returns the frame and its metadata lines.'''
    meta: Dict[str, str] = {}
    try:
        with open(path, 'r', encoding='utf-8') as f:
            lines = f.read().split('\n')
    except OSError as e:
        raise DataIOError('cannot read %s: %s' % (path, e)) from e

    body_start = 0
    for line in lines:
        if not line.startswith('#'):
            break
        body_start += 1
        if '=' in line:
            key, val = line[1:].split('=', 1)
            meta[key.strip()] = val.strip()

    body = '\n'.join(lines[body_start:])
    if len(body.strip()) == 0:
        raise InvalidInputError('%s: no CSV header found' % path)
    try:
        df = pd.read_csv(io.StringIO(body), sep=',', decimal='.', float_precision='round_trip')
    except (ValueError, pd.errors.ParserError) as e:
        raise InvalidInputError('%s: malformed CSV: %s' % (path, e)) from e

    missing = [c for c in required if c not in df.columns]
    if missing:
        raise InvalidInputError('%s: missing column(s): %s' % (path, ', '.join(missing)))
    for c in df.columns:
        if not pd.api.types.is_numeric_dtype(df[c]):
            raise InvalidInputError('%s: column %s is not numeric' % (path, c))
    return df, meta


def read_series_dir(path: str) -> List[TimeSeries]:
    '''Reads every series of a data directory: the files listed in manifest.json, otherwise all *.csv files sorted by name.'''
    if not os.path.isdir(path):
        raise DataIOError('not a directory: %s' % path)

    manifest_path = os.path.join(path, 'manifest.json')
    if os.path.isfile(manifest_path):
        try:
            with open(manifest_path, 'r', encoding='utf-8') as f:
                manifest = json.load(f)
        except (OSError, ValueError) as e:
            raise DataIOError('cannot read %s: %s' % (manifest_path, e)) from e
        entries = manifest.get('series', [])
        return [TimeSeries.read_csv(os.path.join(path, e['file']), series_id=e.get('series_id')) for e in entries]

    files = sorted(f for f in os.listdir(path) if f.endswith('.csv'))
    return [TimeSeries.read_csv(os.path.join(path, f)) for f in files]
