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
import concurrent.futures
import json
import math

import pandas as pd

# pylint: disable=unused-import
from typing import Dict, List, Set, Sequence, Tuple, Iterable  # noqa: F401
from typing import Callable, Optional, Union, Any  # noqa: F401

from dyncal.calibrationsample import CalibrationSample
from dyncal.errors import DataIOError, InvalidInputError
from dyncal.experimentconf import ExperimentConfig
from dyncal.hyperparameters import Hyperparameters
from dyncal.metrics import ErrorRecord, records_from_predictions, summarize
from dyncal.online_update import UpdateConfig, score_with_updates
from dyncal.outputbuffer import OutputBuffer
from dyncal.pipeline import build_samples, flatten, predict_samples, train_model
from dyncal.sdcm import SdcmModel
from dyncal.timeseries import TimeSeries, write_csv
from dyncal.utils import Utils
from dyncal.windowing import split_by_sample, split_by_series


class FoldResult:
    def __init__(self, snr_db: float, fold: int, theta: Hyperparameters, log_likelihood: float, n_train: int, records: List[ErrorRecord]) -> None:
        self.snr_db = snr_db
        self.fold = fold
        self.theta = theta
        self.log_likelihood = log_likelihood
        self.n_train = n_train
        self.records = records

    @property
    def n_test(self) -> int:
        return len(self.records)

    def summary(self) -> Dict[str, Any]:
        d = {'fold': self.fold, 'theta': self.theta.to_dict(), 'log_likelihood': self.log_likelihood, 'n_train': self.n_train, 'n_test': self.n_test}
        d.update(summarize(self.records))
        return d


class CrossValidationResult:
    def __init__(self, folds: List[FoldResult]) -> None:
        self.folds = folds

    @property
    def snr_levels(self) -> List[float]:
        levels: List[float] = []
        for f in self.folds:
            if f.snr_db not in levels:
                levels.append(f.snr_db)
        return levels

    def records(self, snr_db: float) -> List[ErrorRecord]:
        return [r for f in self.folds if f.snr_db == snr_db for r in f.records]

    def aggregate(self) -> Dict[str, Dict[str, Any]]:
        '''Per SNR level: statistics over the records of all folds.'''
        return {snr_label(snr): summarize(self.records(snr)) for snr in self.snr_levels}

    def summary(self) -> Dict[str, Any]:
        return {
            'aggregate': self.aggregate(),
            'folds': {snr_label(snr): [f.summary() for f in self.folds if f.snr_db == snr] for snr in self.snr_levels},
        }


def snr_label(snr_db: float) -> str:
    return 'inf' if math.isinf(snr_db) else '%g' % snr_db


def _run_fold(datasets: Dict[str, List[CalibrationSample]], conf: ExperimentConfig, snr_db: float, fold: int, out: Optional[OutputBuffer]) -> FoldResult:
    seed = Utils.derive_seed(conf.seed, 'fold', fold)
    if conf.split_mode == 'series':
        train_sets, test_sets = split_by_series(datasets, conf.test_fraction, seed)
        train, test = flatten(train_sets), flatten(test_sets)
    else:
        train, test = split_by_sample(flatten(datasets), conf.test_fraction, seed)

    search = conf.search_config()
    search.threads = 1
    model, result = train_model(train, conf, label=('fold', fold), search=search, out=out)
    records = records_from_predictions(test, predict_samples(model, test))
    return FoldResult(snr_db, fold, result.theta, result.log_likelihood, model.n_samples, records)


def cross_validate(series_list: Sequence[TimeSeries], conf: ExperimentConfig, out: Optional[OutputBuffer] = None) -> CrossValidationResult:
    '''Randomized cross-validation for every configured SNR level.

    Series mode resplits whole series into train/test per fold; sample mode splits the pooled samples.  Folds run on conf.threads threads (each with a single-threaded hyperparameter search); results are ordered by SNR and fold regardless.'''
    folds: List[FoldResult] = []
    for snr_db in conf.snr_db:
        datasets = build_samples(series_list, conf, snr_db, out=out)
        if conf.split_mode == 'series' and len(datasets) < 2:
            raise InvalidInputError('series-level cross-validation needs at least 2 usable series, got %d' % len(datasets))
        if conf.split_mode == 'sample' and len(flatten(datasets)) < 3:
            raise InvalidInputError('sample-level cross-validation needs at least 3 samples')

        results: List[Optional[FoldResult]] = [None] * conf.n_folds
        if conf.threads > 1:
            with concurrent.futures.ThreadPoolExecutor(max_workers=conf.threads) as executor:
                future_to_fold = {executor.submit(_run_fold, datasets, conf, snr_db, fold, None): fold for fold in range(conf.n_folds)}
                for future in concurrent.futures.as_completed(future_to_fold):
                    results[future_to_fold[future]] = future.result()
        else:
            for fold in range(conf.n_folds):
                results[fold] = _run_fold(datasets, conf, snr_db, fold, out)

        for r in results:
            assert r is not None
            if out is not None:
                out.v('SNR %s dB, fold %d: %d train / %d test samples, %s' % (snr_label(snr_db), r.fold, r.n_train, r.n_test, r.theta))
            folds.append(r)
    return CrossValidationResult(folds)


def evaluate_holdout(model: SdcmModel, datasets: Dict[str, List[CalibrationSample]]) -> List[ErrorRecord]:
    test = flatten(datasets)
    if len(test) == 0:
        raise InvalidInputError('empty test set')
    return records_from_predictions(test, predict_samples(model, test))


def compare_update(model: SdcmModel, datasets: Dict[str, List[CalibrationSample]], config: UpdateConfig, split_s: float, out: Optional[OutputBuffer] = None) -> Dict[str, List[ErrorRecord]]:
    '''Scores every series after its update segment, with ("w") and without ("wo") online updates.  Each series starts from the trained model.'''
    labeled: Dict[str, List[ErrorRecord]] = {'w': [], 'wo': []}
    for sid in sorted(datasets):
        labeled['w'].extend(score_with_updates(model, datasets[sid], config, split_s, out=out)[1])
        labeled['wo'].extend(score_with_updates(model, datasets[sid], None, split_s)[1])
    if len(labeled['wo']) == 0:
        raise InvalidInputError('no samples beyond the update segment at %g s' % split_s)
    return labeled


def records_frame(records: Sequence[ErrorRecord], **labels: Any) -> pd.DataFrame:
    df = pd.DataFrame([r.to_dict() for r in records], columns=list(ErrorRecord.CSV_COLUMNS))
    for i, (key, value) in enumerate(sorted(labels.items())):
        df.insert(i, key, value)
    return df


def write_records_csv(path: str, frames: Sequence[pd.DataFrame], metadata: Optional[Dict[str, Any]] = None) -> None:
    write_csv(path, pd.concat(list(frames), ignore_index=True), metadata)


def write_summary_json(path: str, summary: Dict[str, Any]) -> None:
    try:
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(summary, f, sort_keys=True, indent=2)
            f.write('\n')
    except OSError as e:
        raise DataIOError('cannot write %s: %s' % (path, e)) from e
