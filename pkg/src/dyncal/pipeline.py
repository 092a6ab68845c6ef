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
import pandas as pd

# pylint: disable=unused-import
from typing import Dict, List, Set, Sequence, Tuple, Iterable  # noqa: F401
from typing import Callable, Optional, Union, Any  # noqa: F401

from dyncal import hyperopt
from dyncal.calibrationsample import CalibrationSample
from dyncal.errors import InvalidInputError
from dyncal.experimentconf import ExperimentConfig
from dyncal.outputbuffer import OutputBuffer
from dyncal.sdcm import FeatureScaler, SdcmModel
from dyncal.timeseries import TimeSeries
from dyncal.utils import Utils
from dyncal.windowing import WindowSpec, extract_features, extract_samples, prepare_series, subsample


def build_samples(series_list: Sequence[TimeSeries], conf: ExperimentConfig, snr_db: float, out: Optional[OutputBuffer] = None) -> Dict[str, List[CalibrationSample]]:
    '''Downsamples, corrupts and windows every series.  Noise seeds derive from the experiment seed and the series id, so every SNR level scales the same draws.

    Series too short for the window are skipped with a warning.'''
    spec = conf.window_spec()
    lifespan_s = conf.effective_lifespan_s()
    datasets: Dict[str, List[CalibrationSample]] = {}
    for series in series_list:
        if series.series_id in datasets:
            raise InvalidInputError('duplicate series id: %s' % series.series_id)
        seed = Utils.derive_seed(conf.seed, 'noise', series.series_id)
        prepared = prepare_series(series, conf.downsample, snr_db, seed, conf.noise_order)
        if len(prepared) < spec.length:
            if out is not None:
                out.warn('Skipping series %s: %d sample(s) after downsampling, the window needs %d.' % (series.series_id, len(prepared), spec.length))
            continue
        datasets[series.series_id] = extract_samples(prepared, spec, lifespan_s=lifespan_s, out=out)
    return datasets


def flatten(datasets: Dict[str, List[CalibrationSample]]) -> List[CalibrationSample]:
    return [s for sid in sorted(datasets) for s in datasets[sid]]


def train_model(samples: Sequence[CalibrationSample], conf: ExperimentConfig, label: Any = 'train', search: Optional[hyperopt.SearchConfig] = None, out: Optional[OutputBuffer] = None) -> Tuple[SdcmModel, hyperopt.FitResult]:
    '''Fits hyperparameters on the (capped) training samples and builds the model from them.'''
    capped = subsample(samples, conf.sample_cap(), Utils.derive_seed(conf.seed, 'subsample', label))
    if len(capped) < 2:
        raise InvalidInputError('at least 2 training samples are required, got %d' % len(capped))
    if out is not None and len(capped) < len(samples):
        out.v('Subsampled the training set from %d to %d samples.' % (len(samples), len(capped)))

    Z, u = CalibrationSample.stack(capped)
    scaler = FeatureScaler.fit(Z, enabled=conf.normalize_features)
    result = hyperopt.fit(scaler.transform(Z), u / conf.target_scale, search or conf.search_config(), out=out)
    model = SdcmModel(capped, result.theta, scaler, target_scale=conf.target_scale, lifespan_s=conf.effective_lifespan_s(), out=out)
    return model, result


def predict_samples(model: SdcmModel, samples: Sequence[CalibrationSample], out: Optional[OutputBuffer] = None) -> np.ndarray:
    if len(samples) == 0:
        return np.zeros(0)
    Z, _ = CalibrationSample.stack(samples)
    return model.predict_many(Z, out=out)[0]


def predict_series(model: SdcmModel, series: TimeSeries, spec: WindowSpec, out: Optional[OutputBuffer] = None) -> pd.DataFrame:
    '''Estimates for every center index with a complete window.  Rows near the series edges are skipped.'''
    ks, Z = extract_features(series, spec)
    skipped = len(series) - ks.size
    if out is not None and skipped > 0:
        out.v('Series %s: %d edge sample(s) without a complete window were skipped.' % (series.series_id, skipped))

    columns: Dict[str, Any] = {'k': ks, 't_s': Z[:, -1]}
    if ks.size > 0:
        mean, var, gamma = model.predict_many(Z, out=out)
    else:
        mean = var = gamma = np.zeros(0)
    columns.update({'mean': mean, 'variance': var, 'confidence': gamma})
    if series.u_ref is not None:
        columns['u_ref'] = series.u_ref[ks]
    return pd.DataFrame(columns)
