import io
import sys

import numpy as np
import pytest


@pytest.fixture(scope='module')
def dyncal():
    import dyncal.dyncal
    return dyncal.dyncal


# pylint: disable=attribute-defined-outside-init
class _OutputSpy(list):
    def begin(self):
        self.__out = io.StringIO()
        self.__old_stdout = sys.stdout
        sys.stdout = self.__out

    def flush(self):
        lines = self.__out.getvalue().splitlines()
        sys.stdout = self.__old_stdout
        self.__out = None
        return lines


@pytest.fixture(scope='module')
def output_spy():
    return _OutputSpy()


def _random_dataset(n, d, seed=0, noise=0.0):
    '''Smooth target over random features: u = sin(z0) + 0.5 cos(2 z1) + 0.1 sum(z), with optional noise.'''
    rng = np.random.default_rng(seed)
    Z = rng.uniform(-2.0, 2.0, size=(n, d))
    u = np.sin(Z[:, 0]) + 0.1 * Z.sum(axis=1)
    if d > 1:
        u = u + 0.5 * np.cos(2.0 * Z[:, 1])
    if noise > 0.0:
        u = u + rng.normal(0.0, noise, size=n)
    return Z, u


@pytest.fixture()
def random_dataset():
    return _random_dataset


def _calibration_samples(n, d=3, seed=0, series_id='s', scale=100.0):
    '''Calibration samples with positive references (mg/dL-like magnitudes) and increasing elapsed time.'''
    from dyncal.calibrationsample import CalibrationSample
    rng = np.random.default_rng(seed)
    samples = []
    for k in range(n):
        window = rng.uniform(0.5, 1.5, size=d - 1)
        t = 540.0 * k
        reference = scale * (1.0 + window.mean()) + 5.0 * np.sin(t / 3600.0)
        samples.append(CalibrationSample(list(window) + [t], reference, series_id, k))
    return samples


@pytest.fixture()
def calibration_samples():
    return _calibration_samples


def _simulated_series(n_series=4, duration_s=4 * 3600.0, seed=0):
    '''Sensor series of a small virtual population (3-minute sampling).'''
    from dyncal.bglprofile import PopulationSpec, generate_population, generate_profile
    from dyncal.sensormodel import SensorModel, simulate_series
    spec = PopulationSpec(duration_s=duration_s, meal_times_s=[1800.0, 2 * 3600.0])
    series = []
    for i, (sid, profile) in enumerate(generate_population(spec, n_series, seed)):
        _, u = generate_profile(profile, seed + i)
        series.append(simulate_series(SensorModel(), u, profile.sample_interval_s, series_id=sid))
    return series


@pytest.fixture()
def simulated_series():
    return _simulated_series


def _fast_config(**overrides):
    '''An experiment configuration small enough for unit tests.'''
    from dyncal.experimentconf import ExperimentConfig
    conf = ExperimentConfig()
    conf.n_trials = 2
    conf.max_iterations = 15
    conf.n_folds = 2
    for key, value in overrides.items():
        setattr(conf, key, value)
    return conf


@pytest.fixture()
def fast_config():
    return _fast_config
