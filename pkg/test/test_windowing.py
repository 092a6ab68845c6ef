import math

import numpy as np
import pytest

from dyncal import windowing
from dyncal.errors import InvalidInputError
from dyncal.outputbuffer import OutputBuffer
from dyncal.timeseries import TimeSeries


def _series(n, interval=60.0, series_id='s', u=None):
    t = np.arange(n) * interval
    y = 10.0 + np.arange(n, dtype=float)
    if u is None:
        u = 100.0 + 10.0 * np.sin(np.arange(n) / 7.0)
    return TimeSeries(t, y, u, series_id=series_id)


# pylint: disable=attribute-defined-outside-init
class TestWindowSpec:
    @pytest.fixture(autouse=True)
    def init(self):
        self.WindowSpec = windowing.WindowSpec

    def test_dimension(self):
        spec = self.WindowSpec(6, 1)
        assert spec.dimension == 9
        assert spec.length == 8

    def test_invalid(self):
        for p, ell in [(-1, 0), (0, -1), (1.5, 0), (True, 1)]:
            with pytest.raises(InvalidInputError):
                self.WindowSpec(p, ell)

    def test_equality(self):
        assert self.WindowSpec(2, 1) == self.WindowSpec.from_dict({'p': 2, 'ell': 1})
        assert self.WindowSpec(2, 1) != self.WindowSpec(1, 2)
        assert len({self.WindowSpec(2, 1), self.WindowSpec(2, 1)}) == 1


# pylint: disable=attribute-defined-outside-init
class TestWindowing:
    @pytest.fixture(autouse=True)
    def init(self):
        self.windowing = windowing

    def test_downsample(self):
        s = _series(10)
        d = self.windowing.downsample(s, 3)
        assert len(d) == 4
        assert np.array_equal(d.y, s.y[[0, 3, 6, 9]])
        assert d.sample_interval == 180.0
        assert self.windowing.downsample(s, 1) is s

    def test_downsample_invalid_factor(self):
        for factor in (0, -2, 1.5):
            with pytest.raises(InvalidInputError):
                self.windowing.downsample(_series(5), factor)

    def test_noise_standard_deviation(self):
        s = _series(10000, u=np.full(10000, 100.0))
        noisy = self.windowing.add_reference_noise(s, 20.0, rng_seed=1)
        assert np.std(noisy.u_ref - 100.0) == pytest.approx(10.0, rel=0.05)
        assert np.array_equal(noisy.u_true, s.u_ref)

    def test_noise_empirical_snr(self):
        s = _series(10000)
        noisy = self.windowing.add_reference_noise(s, 55.0, rng_seed=2)
        noise = noisy.u_ref - s.u_ref
        snr = 10.0 * math.log10(np.mean(s.u_ref ** 2) / np.mean(noise ** 2))
        assert abs(snr - 55.0) < 0.5

    def test_noise_infinite_snr(self):
        s = _series(20)
        assert self.windowing.add_reference_noise(s, math.inf, rng_seed=0) is s

    def test_noise_is_seeded(self):
        s = _series(50)
        a = self.windowing.add_reference_noise(s, 30.0, rng_seed=5)
        b = self.windowing.add_reference_noise(s, 30.0, rng_seed=5)
        c = self.windowing.add_reference_noise(s, 30.0, rng_seed=6)
        assert np.array_equal(a.u_ref, b.u_ref)
        assert not np.array_equal(a.u_ref, c.u_ref)

    def test_noise_needs_reference(self):
        s = TimeSeries([0.0, 1.0], [1.0, 2.0])
        with pytest.raises(InvalidInputError):
            self.windowing.add_reference_noise(s, 30.0, rng_seed=0)

    def test_feature_ordering(self):
        s = _series(6)
        samples = self.windowing.extract_samples(s, self.windowing.WindowSpec(2, 1))
        assert len(samples) == 3
        first = samples[0]
        assert first.k == 2
        assert list(first.features) == [10.0, 11.0, 12.0, 13.0, 120.0]
        assert first.reference == s.u_ref[2]
        assert [x.k for x in samples] == [2, 3, 4]

    def test_minimal_window(self):
        s = _series(5)
        samples = self.windowing.extract_samples(s, self.windowing.WindowSpec(0, 0))
        assert len(samples) == 5
        assert list(samples[3].features) == [13.0, 180.0]

    def test_sample_count(self):
        samples = self.windowing.extract_samples(_series(127), self.windowing.WindowSpec(6, 1))
        assert len(samples) == 120
        assert all(x.dimension == 9 for x in samples)

    def test_series_too_short(self):
        spec = self.windowing.WindowSpec(6, 1)
        ks, Z = self.windowing.extract_features(_series(7), spec)
        assert ks.size == 0
        assert Z.shape == (0, 9)
        with pytest.raises(InvalidInputError):
            self.windowing.extract_samples(_series(7), spec)
        assert len(self.windowing.extract_samples(_series(8), spec)) == 1

    def test_lifespan_warning(self):
        out = OutputBuffer()
        out.use_colors = False
        self.windowing.extract_samples(_series(20, interval=600.0), self.windowing.WindowSpec(1, 1), lifespan_s=6000.0, out=out)
        assert out.warnings_emitted == 1
        assert 'lifespan' in out.get_buffer()

    def test_prepare_series_order(self):
        s = _series(30)
        after = self.windowing.prepare_series(s, 3, 40.0, 9)
        before = self.windowing.prepare_series(s, 3, 40.0, 9, noise_order=self.windowing.NOISE_BEFORE_DOWNSAMPLE)
        assert len(after) == len(before) == 10
        assert np.array_equal(after.u_true, before.u_true)
        with pytest.raises(InvalidInputError):
            self.windowing.prepare_series(s, 3, 40.0, 9, noise_order='sideways')

    def test_split_by_series(self):
        datasets = {'patient-%03d' % i: i for i in range(20)}
        train, test = self.windowing.split_by_series(datasets, 0.2, rng_seed=3)
        assert len(train) == 16
        assert len(test) == 4
        assert set(train) | set(test) == set(datasets)
        assert not set(train) & set(test)
        again, _ = self.windowing.split_by_series(dict(reversed(list(datasets.items()))), 0.2, rng_seed=3)
        assert list(again) == list(train)

    def test_split_keeps_both_sides(self):
        train, test = self.windowing.split_by_series({'a': 1, 'b': 2}, 0.01, rng_seed=0)
        assert len(train) == len(test) == 1
        with pytest.raises(InvalidInputError):
            self.windowing.split_by_series({'a': 1}, 0.5, rng_seed=0)
        with pytest.raises(InvalidInputError):
            self.windowing.split_by_series({'a': 1, 'b': 2}, 1.0, rng_seed=0)

    def test_split_by_sample(self, calibration_samples):
        samples = calibration_samples(30)
        train, test = self.windowing.split_by_sample(samples, 0.2, rng_seed=4)
        assert len(train) == 24 and len(test) == 6
        assert [s.k for s in train] == sorted(s.k for s in train)
        assert {s.k for s in train} | {s.k for s in test} == set(range(30))

    def test_subsample(self, calibration_samples):
        samples = calibration_samples(50)
        assert self.windowing.subsample(samples, None, 0) == samples
        assert self.windowing.subsample(samples, 100, 0) == samples
        capped = self.windowing.subsample(samples, 10, 0)
        assert len(capped) == 10
        assert [s.k for s in capped] == sorted(s.k for s in capped)
        assert [s.k for s in capped] == [s.k for s in self.windowing.subsample(samples, 10, 0)]
