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
import threading

import numpy as np
from scipy.spatial.distance import cdist

# pylint: disable=unused-import
from typing import Dict, List, Set, Sequence, Tuple, Iterable  # noqa: F401
from typing import Callable, Optional, Union, Any  # noqa: F401

from dyncal.calibrationsample import CalibrationSample
from dyncal.errors import DataIOError, InvalidInputError, InvalidStateError, NumericalError
from dyncal.globals import DEFAULT_UPDATE_PARAMS, UPDATE_TUNING_CANDIDATES, UPDATE_TUNING_RANGES, UPDATE_TUNING_SPLIT_S
from dyncal.metrics import ErrorRecord, mean_pae, records_from_predictions
from dyncal.outputbuffer import OutputBuffer
from dyncal.sdcm import SdcmModel
from dyncal.utils import Utils


DECISION_OUTLIER = 'outlier'
DECISION_NEAREST = 'replace-nearest'
DECISION_REDUNDANT = 'replace-redundant'
DECISION_FAILED = 'numerical-failure'


class UpdateConfig:
    '''Online update parameters: outlier threshold eps_u (normalized target units), similarity decay c and confidence threshold eps_gamma.'''

    def __init__(self, eps_u: float = DEFAULT_UPDATE_PARAMS[0], c: float = DEFAULT_UPDATE_PARAMS[1], eps_gamma: float = DEFAULT_UPDATE_PARAMS[2]) -> None:
        for name, value in (('eps_u', eps_u), ('c', c), ('eps_gamma', eps_gamma)):
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value >= 0.0):
                raise InvalidInputError('%s must be a non-negative number: %r' % (name, value))
        self.eps_u = float(eps_u)
        self.c = float(c)
        self.eps_gamma = float(eps_gamma)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, UpdateConfig) and self.to_list() == other.to_list()

    def __hash__(self) -> int:
        return hash(tuple(self.to_list()))

    def __repr__(self) -> str:
        return '<UpdateConfig(eps_u=%g, c=%g, eps_gamma=%g)>' % (self.eps_u, self.c, self.eps_gamma)

    def to_list(self) -> List[float]:
        return [self.eps_u, self.c, self.eps_gamma]

    def to_dict(self) -> Dict[str, float]:
        return {'eps_u': self.eps_u, 'c': self.c, 'eps_gamma': self.eps_gamma}

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> 'UpdateConfig':
        return cls(d['eps_u'], d['c'], d['eps_gamma'])


class UpdateEvent:
    '''Audit record of one observed sample.  The sample itself is kept so that an event log can be replayed.'''

    def __init__(self, seq: int, sample: CalibrationSample, decision: str, residual: float, gamma: float, index: Optional[int], config: UpdateConfig) -> None:
        self.seq = seq
        self.sample = sample
        self.decision = decision
        self.residual = residual
        self.gamma = gamma
        self.index = index
        self.config = config

    @property
    def is_outlier(self) -> bool:
        return self.decision == DECISION_OUTLIER

    def to_dict(self) -> Dict[str, Any]:
        return {
            'seq': self.seq,
            't_s': self.sample.elapsed_time,
            'series_id': self.sample.series_id,
            'k': self.sample.k,
            'decision': self.decision,
            'residual': self.residual,
            # JSON has no infinity.
            'gamma': self.gamma if math.isfinite(self.gamma) else None,
            'index': self.index,
            'config': self.config.to_dict(),
            'sample': self.sample.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> 'UpdateEvent':
        try:
            gamma = math.inf if d['gamma'] is None else float(d['gamma'])
            return cls(int(d['seq']), CalibrationSample.from_dict(d['sample']), str(d['decision']), float(d['residual']), gamma, d.get('index'), UpdateConfig.from_dict(d['config']))
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidInputError('malformed update event: %s' % e) from e

    def __repr__(self) -> str:
        return '<UpdateEvent(seq=%d, decision=%s, residual=%g, gamma=%g, index=%s)>' % (self.seq, self.decision, self.residual, self.gamma, self.index)


def write_event_log(path: str, events: Sequence[UpdateEvent]) -> None:
    try:
        with open(path, 'w', encoding='utf-8') as f:
            for event in events:
                f.write(Utils.canonical_json(event.to_dict()) + '\n')
    except OSError as e:
        raise DataIOError('cannot write %s: %s' % (path, e)) from e


def read_event_log(path: str) -> List[UpdateEvent]:
    events = []
    try:
        with open(path, 'r', encoding='utf-8') as f:
            for lineno, line in enumerate(f, 1):
                if len(line.strip()) == 0:
                    continue
                try:
                    events.append(UpdateEvent.from_dict(json.loads(line)))
                except ValueError as e:
                    raise InvalidInputError('%s:%d: %s' % (path, lineno, e)) from e
    except OSError as e:
        raise DataIOError('cannot read %s: %s' % (path, e)) from e
    return events


def augment(model: SdcmModel, sample: CalibrationSample) -> np.ndarray:
    '''Returns the augmented vector [z, u] of a sample in the model's normalized units.'''
    z = model.normalize_features(sample.features)[0]
    return np.append(z, model.normalize_target(sample.reference))


def is_outlier(model: SdcmModel, sample: CalibrationSample, eps_u: float) -> bool:
    return _residual(model, sample)[0] > eps_u


def _residual(model: SdcmModel, sample: CalibrationSample) -> Tuple[float, float]:
    mean_n, var_n = model.predict_normalized(sample.features[None, :])
    residual = abs(float(mean_n[0]) - float(model.normalize_target(sample.reference)))
    gamma = float(model.gp.confidence(var_n)[0])
    return residual, gamma


def similarity_matrix(V: np.ndarray, c: float) -> np.ndarray:
    '''S_ij = exp(-c * ||v_i - v_j||) over the rows of V.'''
    if not c >= 0.0:
        raise InvalidInputError('similarity decay must be non-negative: %r' % c)
    V = np.atleast_2d(np.asarray(V, dtype=float))
    return np.exp(-c * cdist(V, V, 'euclidean'))


def choose_replacement(V: np.ndarray, v_new: np.ndarray, gamma: float, config: UpdateConfig) -> Tuple[int, str]:
    '''Picks the dataset row to replace with v_new.

    Confident predictions (gamma >= eps_gamma) replace the nearest row; otherwise the most redundant row (largest similarity row sum) goes.  Ties go to the lowest index.'''
    V = np.asarray(V, dtype=float)
    if V.ndim != 2 or V.shape[0] == 0:
        raise InvalidStateError('cannot choose a replacement in an empty dataset')

    if gamma >= config.eps_gamma:
        dist = np.linalg.norm(V - np.asarray(v_new, dtype=float)[None, :], axis=1)
        return int(np.argmin(dist)), DECISION_NEAREST

    redundancy = similarity_matrix(V, config.c).sum(axis=1)
    return int(np.argmax(redundancy)), DECISION_REDUNDANT


def update_step(model: SdcmModel, sample: CalibrationSample, config: UpdateConfig, seq: int = 0, out: Optional[OutputBuffer] = None) -> Tuple[SdcmModel, UpdateEvent]:
    '''Applies one online update to a model.

    Outliers leave the model as is.  Otherwise the chosen sample is swapped for the new one and the GP is refactorized with the same hyperparameters and normalization.  A failed refactorization raises NumericalError; the input model is never modified.'''
    if sample.dimension != model.dimension:
        raise InvalidInputError('sample dimension %d does not match the model dimension %d' % (sample.dimension, model.dimension))

    residual, gamma = _residual(model, sample)
    if residual > config.eps_u:
        event = UpdateEvent(seq, sample, DECISION_OUTLIER, residual, gamma, None, config)
        if out is not None:
            out.v('Outlier alert: series %s, t=%gs, residual %.4g > %.4g.' % (sample.series_id, sample.elapsed_time, residual, config.eps_u))
        return model, event

    index, decision = choose_replacement(model.augmented(), augment(model, sample), gamma, config)
    samples = list(model.samples)
    samples[index] = sample
    new_model = model.with_samples(samples, out=out)
    event = UpdateEvent(seq, sample, decision, residual, gamma, index, config)
    if out is not None:
        out.d('Update %d: %s of sample %d (residual %.4g, gamma %.4g).' % (seq, decision, index, residual, gamma))
    return new_model, event


class OnlineUpdater:
    '''Feeds a stream of samples through update_step.

    Readers call the model property at any time and see either the model before or after a step; the reference is swapped only when a step succeeded.'''

    def __init__(self, model: SdcmModel, config: UpdateConfig, out: Optional[OutputBuffer] = None) -> None:
        self._model = model
        self._lock = threading.Lock()
        self.config = config
        self.events: List[UpdateEvent] = []
        self.out = out

    @property
    def model(self) -> SdcmModel:
        with self._lock:
            return self._model

    def observe(self, sample: CalibrationSample) -> UpdateEvent:
        seq = len(self.events)
        current = self.model
        try:
            new_model, event = update_step(current, sample, self.config, seq=seq, out=self.out)
        except NumericalError:
            self.events.append(UpdateEvent(seq, sample, DECISION_FAILED, math.nan, math.nan, None, self.config))
            raise

        with self._lock:
            self._model = new_model
        self.events.append(event)
        return event

    def run(self, samples: Iterable[CalibrationSample]) -> List[UpdateEvent]:
        return [self.observe(s) for s in samples]

    @property
    def n_outliers(self) -> int:
        return sum(1 for e in self.events if e.is_outlier)

    @classmethod
    def replay(cls, model: SdcmModel, events: Sequence[UpdateEvent], config: Optional[UpdateConfig] = None, out: Optional[OutputBuffer] = None) -> 'OnlineUpdater':
        '''Re-applies the samples of a recorded event log, by default with the configuration recorded in its first event.'''
        if config is None:
            config = events[0].config if len(events) > 0 else UpdateConfig()
        updater = cls(model, config, out=out)
        updater.run(e.sample for e in events if e.decision != DECISION_FAILED)
        return updater


def latin_hypercube(ranges: Sequence[Tuple[float, float]], n_points: int, rng: np.random.Generator) -> np.ndarray:
    '''Returns an n_points x len(ranges) latin hypercube: each range is cut into n_points equal subintervals, each holding exactly one coordinate.'''
    if n_points < 1:
        raise InvalidInputError('latin hypercube needs at least one point')
    points = np.empty((n_points, len(ranges)))
    for j, (lo, hi) in enumerate(ranges):
        if not lo < hi:
            raise InvalidInputError('invalid range (%g, %g)' % (lo, hi))
        width = (hi - lo) / n_points
        values = lo + width * (np.arange(n_points) + rng.uniform(0.0, 1.0, n_points))
        points[:, j] = rng.permutation(values)
    return points


def split_segments(samples: Sequence[CalibrationSample], split_s: float) -> Tuple[List[CalibrationSample], List[CalibrationSample]]:
    '''Splits a sample stream at an elapsed time: the update segment (t < split_s) and the scoring segment.'''
    update = [s for s in samples if s.elapsed_time < split_s]
    score = [s for s in samples if s.elapsed_time >= split_s]
    return update, score


def score_with_updates(model: SdcmModel, samples: Sequence[CalibrationSample], config: Optional[UpdateConfig], split_s: float, out: Optional[OutputBuffer] = None) -> Tuple[SdcmModel, List[ErrorRecord]]:
    '''Updates a model with the first part of a sample stream and scores it on the rest.

    config None skips the updates and scores the model as trained.'''
    update, score = split_segments(samples, split_s)
    if config is not None:
        updater = OnlineUpdater(model, config, out=out)
        updater.run(update)
        model = updater.model
    if len(score) == 0:
        return model, []
    Z = np.vstack([s.features for s in score])
    mean, _, _ = model.predict_many(Z)
    return model, records_from_predictions(score, mean)


class TuningResult:
    def __init__(self, config: UpdateConfig, candidates: List[Tuple[UpdateConfig, float]]) -> None:
        self.config = config
        self.candidates = candidates

    @property
    def best_score(self) -> float:
        return min(score for _, score in self.candidates)


def tune_update_params(model: SdcmModel, tuning: Sequence[Sequence[CalibrationSample]], rng_seed: int, ranges: Sequence[Tuple[float, float]] = UPDATE_TUNING_RANGES, n_candidates: int = UPDATE_TUNING_CANDIDATES, split_s: float = UPDATE_TUNING_SPLIT_S, out: Optional[OutputBuffer] = None) -> TuningResult:
    '''Selects (eps_u, c, eps_gamma) from a latin hypercube by the least mean PAE on the scoring segments.

    Each tuning series starts from the trained model.  Ties go to the earliest candidate.'''
    if len(tuning) == 0:
        raise InvalidInputError('no tuning series')
    for samples in tuning:
        update, score = split_segments(samples, split_s)
        if len(update) == 0 or len(score) == 0:
            sid = samples[0].series_id if len(samples) > 0 else '?'
            raise InvalidInputError('tuning series %s does not extend past the split at %g s' % (sid, split_s))

    points = latin_hypercube(ranges, n_candidates, np.random.default_rng(rng_seed))
    candidates: List[Tuple[UpdateConfig, float]] = []
    best: Optional[Tuple[UpdateConfig, float]] = None
    for row in points:
        config = UpdateConfig(*row)
        records: List[ErrorRecord] = []
        for samples in tuning:
            records.extend(score_with_updates(model, samples, config, split_s)[1])
        score = mean_pae(records)
        candidates.append((config, score))
        if out is not None:
            out.v('Candidate eps_u=%.4f, c=%.4f, eps_gamma=%.4f: mean PAE %.3f%%' % (config.eps_u, config.c, config.eps_gamma, score))
        if best is None or score < best[1]:
            best = (config, score)

    assert best is not None
    return TuningResult(best[0], candidates)
