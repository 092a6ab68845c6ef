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

# pylint: disable=unused-import
from typing import Dict, List, Set, Sequence, Tuple, Iterable  # noqa: F401
from typing import Callable, Optional, Union, Any  # noqa: F401

from dyncal.bglprofile import PopulationSpec
from dyncal.errors import DataIOError, InvalidInputError
from dyncal.globals import DELTA_RANGE, SIGMA_RANGE, SIGMA_U_TILDE_RANGE, DESK_N_TRIALS, FULL_N_TRIALS
from dyncal.globals import DEFAULT_UPDATE_PARAMS, UPDATE_TUNING_RANGES, UPDATE_TUNING_CANDIDATES, UPDATE_TUNING_SPLIT_S
from dyncal.globals import DEFAULT_TARGET_SCALE, DEFAULT_THREADS, DESK_MAX_TRAINING_SAMPLES, GRADIENT_TOLERANCE, LIKELIHOOD_TOLERANCE, MAX_GRADIENT_ITERATIONS
from dyncal.hyperopt import SearchConfig
from dyncal.hyperparameters import ParameterRange
from dyncal.online_update import UpdateConfig
from dyncal.sensormodel import SensorModel, TIME_UNITS
from dyncal.utils import Utils
from dyncal.windowing import NOISE_ORDERS, WindowSpec


SPLIT_MODES = ('series', 'sample')


class ExperimentConfig:
    '''Every setting of an experiment run.

    Assignments are validated and coerced, so values may come from command-line strings or experiment files alike.  Experiment files hold "key = value" lines; lists are comma-separated and the structured fields (population, sensor) take JSON.'''

    # pylint: disable=too-many-instance-attributes

    # Fields that do not change the numbers an experiment produces; left out of the provenance hash.
    UNHASHED = ('output_dir', 'threads')

    def __init__(self) -> None:
        self.scenario = 'default'
        self.output_dir = '.'
        self.data_dir: Optional[str] = None
        self.profiles_file: Optional[str] = None
        self.n_profiles = 20
        self.population: Dict[str, Any] = {}
        self.sensor: Dict[str, Any] = {}
        self.time_unit = 'seconds'
        self.lifespan_s: Optional[float] = None
        self.downsample = 3
        self.p = 6
        self.ell = 1
        self.snr_db: List[float] = [55.0]
        self.noise_order = 'after-downsample'
        self.seed = 0
        self.n_trials = DESK_N_TRIALS
        self.max_iterations = MAX_GRADIENT_ITERATIONS
        self.tolerance = GRADIENT_TOLERANCE
        self.likelihood_tolerance = LIKELIHOOD_TOLERANCE
        self.delta_range: List[float] = list(DELTA_RANGE)
        self.sigma_range: List[float] = list(SIGMA_RANGE)
        self.sigma_u_tilde_range: List[float] = list(SIGMA_U_TILDE_RANGE)
        self.centered = True
        self.threads = DEFAULT_THREADS
        self.normalize_features = True
        self.target_scale = DEFAULT_TARGET_SCALE
        self.max_samples = DESK_MAX_TRAINING_SAMPLES  # 0: no cap.
        self.split_mode = 'series'
        self.test_fraction = 0.2
        self.n_folds = 10
        self.eps_u = DEFAULT_UPDATE_PARAMS[0]
        self.c = DEFAULT_UPDATE_PARAMS[1]
        self.eps_gamma = DEFAULT_UPDATE_PARAMS[2]
        self.eps_u_range: List[float] = list(UPDATE_TUNING_RANGES[0])
        self.c_range: List[float] = list(UPDATE_TUNING_RANGES[1])
        self.eps_gamma_range: List[float] = list(UPDATE_TUNING_RANGES[2])
        self.tuning_candidates = UPDATE_TUNING_CANDIDATES
        self.tuning_split_s = UPDATE_TUNING_SPLIT_S

    def __setattr__(self, name: str, value: Any) -> None:
        valid = False
        if name in ['centered', 'normalize_features']:
            valid, value = True, Utils.parse_bool(value)
        elif name in ['scenario', 'output_dir']:
            valid, value = True, str(value)
        elif name in ['data_dir', 'profiles_file']:
            valid = True
            value = None if value is None or str(value) == '' else str(value)
        elif name in ['n_profiles', 'seed', 'max_samples']:
            valid, value = True, self._parse_int(name, value, 0)
        elif name in ['n_trials', 'max_iterations', 'threads', 'downsample', 'n_folds', 'tuning_candidates']:
            valid, value = True, self._parse_int(name, value, 1)
        elif name in ['p', 'ell']:
            valid, value = True, self._parse_int(name, value, 0)
        elif name in ['tolerance', 'target_scale']:
            valid, value = True, self._parse_float(name, value)
            if not value > 0.0:
                raise ValueError('{} must be positive: {}'.format(name, value))
        elif name in ['eps_u', 'c', 'eps_gamma', 'tuning_split_s', 'likelihood_tolerance']:
            valid, value = True, self._parse_float(name, value)
            if not value >= 0.0:
                raise ValueError('{} must be non-negative: {}'.format(name, value))
        elif name == 'lifespan_s':
            valid = True
            if value is not None and str(value) != '':
                value = self._parse_float(name, value)
                if not value > 0.0:
                    raise ValueError('lifespan_s must be positive: {}'.format(value))
            else:
                value = None
        elif name == 'test_fraction':
            valid, value = True, self._parse_float(name, value)
            if not 0.0 < value < 1.0:
                raise ValueError('test_fraction must lie in (0, 1): {}'.format(value))
        elif name == 'snr_db':
            valid, value = True, Utils.parse_float_list(value)
            if len(value) == 0 or any(math.isnan(v) or v == -math.inf for v in value):
                raise ValueError('snr_db needs at least one finite value or "inf": {}'.format(value))
        elif name in ['delta_range', 'sigma_range', 'sigma_u_tilde_range']:
            valid, value = True, Utils.parse_float_list(value)
            if len(value) != 3:
                raise ValueError('{} takes "initial_guess, lower, upper": {}'.format(name, value))
            ParameterRange(*value)
        elif name in ['eps_u_range', 'c_range', 'eps_gamma_range']:
            valid, value = True, Utils.parse_float_list(value)
            if len(value) != 2 or not 0.0 <= value[0] < value[1]:
                raise ValueError('{} takes "lower, upper" with 0 <= lower < upper: {}'.format(name, value))
        elif name in ['population', 'sensor']:
            valid, value = True, self._parse_json(name, value)
            if name == 'population':
                PopulationSpec(**value)
            else:
                SensorModel.from_dict(value)
        elif name == 'time_unit':
            if value not in TIME_UNITS:
                raise ValueError('invalid time unit: {}'.format(value))
            valid = True
        elif name == 'noise_order':
            if value not in NOISE_ORDERS:
                raise ValueError('invalid noise order: {}'.format(value))
            valid = True
        elif name == 'split_mode':
            if value not in SPLIT_MODES:
                raise ValueError('invalid split mode: {}'.format(value))
            valid = True

        if not valid:
            raise ValueError('unknown setting: {}'.format(name))
        object.__setattr__(self, name, value)

    @staticmethod
    def _parse_int(name: str, value: Any, minimum: int) -> int:
        if isinstance(value, float) and not value.is_integer():
            raise ValueError('{} must be an integer: {}'.format(name, value))
        try:
            i = int(value)
        except (TypeError, ValueError) as e:
            raise ValueError('{} must be an integer: {}'.format(name, value)) from e
        if i < minimum:
            raise ValueError('{} must be {} or greater: {}'.format(name, minimum, value))
        return i

    @staticmethod
    def _parse_float(name: str, value: Any) -> float:
        f = Utils.parse_float(value)
        if not math.isfinite(f):
            raise ValueError('{} must be a finite number: {}'.format(name, value))
        return f

    @staticmethod
    def _parse_json(name: str, value: Any) -> Dict[str, Any]:
        if isinstance(value, str):
            try:
                value = json.loads(value) if len(value.strip()) > 0 else {}
            except ValueError as e:
                raise ValueError('{} must be a JSON object: {}'.format(name, e)) from e
        if not isinstance(value, dict):
            raise ValueError('{} must be a JSON object'.format(name))
        return value

    @classmethod
    def fields(cls) -> List[str]:
        return list(vars(cls()).keys())

    def set_full_scale(self) -> None:
        '''Restarts and sample cap as used for the published synthetic experiment.'''
        self.n_trials = FULL_N_TRIALS
        self.max_samples = 0

    def load_data(self, data: str, source: str = '<string>') -> None:
        '''Applies the settings of an experiment file's contents.  Unknown keys are rejected.'''
        known = self.fields()
        for lineno, line in enumerate(data.split('\n'), 1):
            line = line.strip()
            if (len(line) == 0) or line.startswith('#'):
                continue

            if '=' not in line:
                raise InvalidInputError('%s:%d: could not parse line: %s' % (source, lineno, line))
            key, val = line.split('=', 1)
            key = key.strip()
            val = val.strip()
            if key not in known:
                raise InvalidInputError('%s:%d: invalid field: %s' % (source, lineno, key))

            try:
                setattr(self, key, val)
            except ValueError as e:
                raise InvalidInputError('%s:%d: %s' % (source, lineno, e)) from e

    def load_file(self, path: str) -> None:
        try:
            with open(path, 'r', encoding='utf-8') as f:
                data = f.read()
        except OSError as e:
            raise DataIOError('cannot read experiment file %s: %s' % (path, e)) from e
        self.load_data(data, source=path)

    def to_dict(self) -> Dict[str, Any]:
        return dict(vars(self))

    def config_hash(self) -> str:
        '''SHA256 digest over every setting that influences the results.'''
        d = {k: v for k, v in self.to_dict().items() if k not in self.UNHASHED}
        # JSON has no infinity.
        d['snr_db'] = [repr(v) for v in d['snr_db']]
        return Utils.sha256(Utils.canonical_json(d))

    @staticmethod
    def format_lines(values: Dict[str, Any]) -> str:
        '''Formats settings in experiment file syntax.'''
        lines = []
        for key, value in values.items():
            if value is None:
                value = ''
            elif isinstance(value, dict):
                value = json.dumps(value, sort_keys=True)
            elif isinstance(value, (list, tuple)):
                value = ', '.join(repr(v) if isinstance(v, float) else str(v) for v in value)
            elif isinstance(value, float):
                value = repr(value)
            lines.append('%s = %s' % (key, value))
        return '\n'.join(lines) + '\n'

    def window_spec(self) -> WindowSpec:
        return WindowSpec(self.p, self.ell)

    def search_config(self) -> SearchConfig:
        config = SearchConfig(self.n_trials, Utils.derive_seed(self.seed, 'hyperopt'))
        config.delta = ParameterRange(*self.delta_range)
        config.sigma = ParameterRange(*self.sigma_range)
        config.sigma_u_tilde = ParameterRange(*self.sigma_u_tilde_range)
        config.max_iterations = self.max_iterations
        config.tolerance = self.tolerance
        config.likelihood_tolerance = self.likelihood_tolerance
        config.centered = self.centered
        config.threads = self.threads
        return config

    def update_config(self) -> UpdateConfig:
        return UpdateConfig(self.eps_u, self.c, self.eps_gamma)

    def tuning_ranges(self) -> List[Tuple[float, float]]:
        return [(r[0], r[1]) for r in (self.eps_u_range, self.c_range, self.eps_gamma_range)]

    def sensor_model(self) -> SensorModel:
        d = dict(self.sensor)
        d.setdefault('time_unit', self.time_unit)
        return SensorModel.from_dict(d)

    def population_spec(self) -> PopulationSpec:
        return PopulationSpec(**self.population)

    def sample_cap(self) -> Optional[int]:
        return None if self.max_samples == 0 else self.max_samples

    def effective_lifespan_s(self) -> float:
        return self.lifespan_s if self.lifespan_s is not None else self.sensor_model().lifespan_s

    def __str__(self) -> str:
        return self.format_lines(self.to_dict())
