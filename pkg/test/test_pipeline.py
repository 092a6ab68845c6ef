import numpy as np
import pytest

from dyncal import pipeline
from dyncal.errors import InvalidInputError
from dyncal.outputbuffer import OutputBuffer
from dyncal.timeseries import TimeSeries


# pylint: disable=attribute-defined-outside-init
class TestPipeline:
    @pytest.fixture(autouse=True)
    def init(self, simulated_series, fast_config):
        self.pipeline = pipeline
        self.series = simulated_series(4)
        self.conf = fast_config()

    def test_build_samples(self):
        datasets = self.pipeline.build_samples(self.series, self.conf, 55.0)
        assert sorted(datasets) == ['patient-001', 'patient-002', 'patient-003', 'patient-004']
        # 80 samples, every third kept, windows of 8.
        assert all(len(samples) == 20 for samples in datasets.values())
        first = datasets['patient-001'][0]
        assert first.dimension == 9
        assert first.truth is not None and first.truth != first.reference

    def test_build_samples_is_seeded(self):
        a = self.pipeline.build_samples(self.series, self.conf, 40.0)
        b = self.pipeline.build_samples(self.series, self.conf, 40.0)
        c = self.pipeline.build_samples(self.series, self.conf, 30.0)
        refs = [s.reference for s in self.pipeline.flatten(a)]
        assert refs == [s.reference for s in self.pipeline.flatten(b)]
        assert refs != [s.reference for s in self.pipeline.flatten(c)]

    def test_build_samples_infinite_snr(self):
        datasets = self.pipeline.build_samples(self.series, self.conf, float('inf'))
        assert all(s.reference == s.target for s in self.pipeline.flatten(datasets))

    def test_short_series_skipped(self):
        short = TimeSeries(np.arange(10) * 180.0, np.ones(10), np.full(10, 100.0), series_id='short')
        out = OutputBuffer()
        datasets = self.pipeline.build_samples(self.series + [short], self.conf, 55.0, out=out)
        assert 'short' not in datasets
        assert out.warnings_emitted == 1

    def test_duplicate_series(self):
        with pytest.raises(InvalidInputError):
            self.pipeline.build_samples(self.series + self.series[:1], self.conf, 55.0)

    def test_flatten_order(self):
        datasets = self.pipeline.build_samples(self.series, self.conf, 55.0)
        reordered = {sid: datasets[sid] for sid in reversed(sorted(datasets))}
        flat = self.pipeline.flatten(reordered)
        assert [s.series_id for s in flat] == sorted(s.series_id for s in flat)

    def test_train_model(self):
        samples = self.pipeline.flatten(self.pipeline.build_samples(self.series, self.conf, 55.0))
        model, result = self.pipeline.train_model(samples, self.conf)
        assert model.n_samples == 80
        assert model.theta == result.theta
        assert len(result.trials) == 2
        assert model.lifespan_s == 68400.0
        estimates = self.pipeline.predict_samples(model, samples)
        truth = np.array([s.target for s in samples])
        assert float(np.mean(np.abs(estimates - truth) / truth)) < 0.2

    def test_train_model_cap(self):
        samples = self.pipeline.flatten(self.pipeline.build_samples(self.series, self.conf, 55.0))
        self.conf.max_samples = 30
        model, _ = self.pipeline.train_model(samples, self.conf)
        assert model.n_samples == 30
        with pytest.raises(InvalidInputError):
            self.pipeline.train_model(samples[:1], self.conf)

    def test_predict_series(self):
        samples = self.pipeline.flatten(self.pipeline.build_samples(self.series, self.conf, 55.0))
        model, _ = self.pipeline.train_model(samples, self.conf)
        frame = self.pipeline.predict_series(model, self.series[0], self.conf.window_spec())
        assert list(frame.columns) == ['k', 't_s', 'mean', 'variance', 'confidence', 'u_ref']
        assert len(frame) == 80 - 7
        assert frame['k'].iloc[0] == 6
        assert np.all(frame['variance'] >= 0.0)
        empty = self.pipeline.predict_series(model, TimeSeries([0.0, 180.0], [1.0, 1.0]), self.conf.window_spec())
        assert len(empty) == 0
        assert 'u_ref' not in empty.columns
        assert len(self.pipeline.predict_samples(model, [])) == 0
