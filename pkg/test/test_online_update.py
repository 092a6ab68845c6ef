import math

import numpy as np
import pytest

from dyncal import online_update
from dyncal.calibrationsample import CalibrationSample
from dyncal.errors import InvalidInputError, InvalidStateError
from dyncal.hyperparameters import Hyperparameters
from dyncal.sdcm import SdcmModel


# pylint: disable=attribute-defined-outside-init
class TestOnlineUpdate:
    @pytest.fixture(autouse=True)
    def init(self, calibration_samples):
        self.ou = online_update
        self.samples = calibration_samples(20)
        self.stream = calibration_samples(15, seed=1, series_id='stream')
        self.model = SdcmModel.build(self.samples, Hyperparameters(1.0, 1.0, 0.05))

    def test_config_validation(self):
        assert self.ou.UpdateConfig().to_list() == [0.0684, 0.7346, 6.3445]
        for args in [(-0.1, 1.0, 1.0), (0.1, -1.0, 1.0), (0.1, 1.0, math.inf), (0.1, math.nan, 1.0)]:
            with pytest.raises(InvalidInputError):
                self.ou.UpdateConfig(*args)

    def test_similarity_matrix(self):
        rng = np.random.default_rng(0)
        V = rng.normal(size=(6, 4))
        S = self.ou.similarity_matrix(V, 0.7)
        for i in range(6):
            assert S[i, i] == 1.0
            for j in range(6):
                assert S[i, j] == pytest.approx(math.exp(-0.7 * math.sqrt(np.sum((V[i] - V[j]) ** 2))), rel=1e-12)
        assert np.array_equal(self.ou.similarity_matrix(V, 0.0), np.ones((6, 6)))

    def test_replacement_in_empty_dataset(self):
        with pytest.raises(InvalidStateError):
            self.ou.choose_replacement(np.zeros((0, 3)), np.zeros(3), 1.0, self.ou.UpdateConfig())

    def test_replace_nearest(self):
        V = np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [3.0, 0.0]])
        config = self.ou.UpdateConfig(0.1, 1.0, 2.0)
        assert self.ou.choose_replacement(V, np.array([3.0, 0.0]), 5.0, config) == (3, self.ou.DECISION_NEAREST)
        assert self.ou.choose_replacement(V, np.array([1.4, 0.1]), 2.0, config) == (1, self.ou.DECISION_NEAREST)

    def test_replace_redundant(self):
        V = np.array([[0.0, 0.0], [0.0, 0.0], [5.0, 5.0], [10.0, 10.0]])
        config = self.ou.UpdateConfig(0.1, 1.0, 2.0)
        # Rows 0 and 1 tie; the lowest index wins.
        assert self.ou.choose_replacement(V, np.array([10.0, 10.0]), 1.0, config) == (0, self.ou.DECISION_REDUNDANT)

    def test_redundant_ties_with_zero_decay(self):
        V = np.array([[0.0, 0.0], [1.0, 0.0], [7.0, 3.0]])
        config = self.ou.UpdateConfig(0.1, 0.0, 2.0)
        assert self.ou.choose_replacement(V, np.zeros(2), 0.5, config) == (0, self.ou.DECISION_REDUNDANT)

    def test_outlier_threshold_is_strict(self):
        sample = self.stream[0]
        residual, _ = self.ou._residual(self.model, sample)  # pylint: disable=protected-access
        assert not self.ou.is_outlier(self.model, sample, residual)
        assert self.ou.is_outlier(self.model, sample, float(np.nextafter(residual, 0.0)))

    def test_outlier_leaves_model_unchanged(self):
        config = self.ou.UpdateConfig(0.0, 0.5, 3.0)
        sample = CalibrationSample(self.stream[0].features, 390.0, 'stream', 0)
        model, event = self.ou.update_step(self.model, sample, config)
        assert model is self.model
        assert event.is_outlier
        assert event.index is None

    def test_cardinality_is_preserved(self):
        updater = self.ou.OnlineUpdater(self.model, self.ou.UpdateConfig(1e9, 0.5, 3.0))
        events = updater.run(self.stream)
        assert len(events) == 15
        assert updater.n_outliers == 0
        assert updater.model.n_samples == 20
        assert updater.model.theta == self.model.theta
        assert updater.model.scaler is self.model.scaler
        assert self.model.n_samples == 20
        assert self.model.samples == tuple(self.samples)

    def test_replaced_sample_enters_dataset(self):
        config = self.ou.UpdateConfig(1e9, 0.5, 0.0)
        model, event = self.ou.update_step(self.model, self.stream[3], config, seq=7)
        assert event.decision == self.ou.DECISION_NEAREST
        assert event.seq == 7
        assert model.samples[event.index] is self.stream[3]
        assert model is not self.model
        expected = self.ou.choose_replacement(self.model.augmented(), self.ou.augment(self.model, self.stream[3]), event.gamma, config)
        assert expected == (event.index, event.decision)

    def test_low_confidence_replaces_redundant(self):
        config = self.ou.UpdateConfig(1e9, 0.5, 1e12)
        _, event = self.ou.update_step(self.model, self.stream[0], config)
        assert event.decision == self.ou.DECISION_REDUNDANT
        S = self.ou.similarity_matrix(self.model.augmented(), 0.5)
        assert event.index == int(np.argmax(S.sum(axis=1)))

    def test_dimension_mismatch(self, calibration_samples):
        with pytest.raises(InvalidInputError):
            self.ou.update_step(self.model, calibration_samples(1, d=5)[0], self.ou.UpdateConfig())

    def test_replay_is_deterministic(self):
        config = self.ou.UpdateConfig(0.05, 0.7, 4.0)
        first = self.ou.OnlineUpdater(self.model, config)
        first.run(self.stream)
        replayed = self.ou.OnlineUpdater.replay(self.model, first.events)
        assert replayed.config == config
        assert [(e.decision, e.index) for e in replayed.events] == [(e.decision, e.index) for e in first.events]
        assert [s.k for s in replayed.model.samples] == [s.k for s in first.model.samples]

    def test_event_log(self, tmp_path):
        updater = self.ou.OnlineUpdater(self.model, self.ou.UpdateConfig(0.05, 0.7, 4.0))
        updater.run(self.stream[:5])
        path = str(tmp_path / 'events.jsonl')
        self.ou.write_event_log(path, updater.events)
        loaded = self.ou.read_event_log(path)
        assert [e.decision for e in loaded] == [e.decision for e in updater.events]
        assert [e.index for e in loaded] == [e.index for e in updater.events]
        assert np.array_equal(loaded[2].sample.features, updater.events[2].sample.features)
        with open(path, 'a', encoding='utf-8') as f:
            f.write('{"seq": 1}\n')
        with pytest.raises(InvalidInputError):
            self.ou.read_event_log(path)

    def test_latin_hypercube(self):
        ranges = [(0.0, 0.1), (0.2, 1.0), (2.0, 7.0)]
        points = self.ou.latin_hypercube(ranges, 6, np.random.default_rng(1))
        assert points.shape == (6, 3)
        for j, (lo, hi) in enumerate(ranges):
            strata = np.floor((points[:, j] - lo) / ((hi - lo) / 6)).astype(int)
            assert sorted(strata) == list(range(6))

    def test_split_segments(self):
        update, score = self.ou.split_segments(self.stream, 540.0 * 5)
        assert [s.k for s in update] == [0, 1, 2, 3, 4]
        assert [s.k for s in score] == list(range(5, 15))

    def test_score_without_updates(self):
        model, records = self.ou.score_with_updates(self.model, self.stream, None, 540.0 * 5)
        assert model is self.model
        assert len(records) == 10

    def test_tuning_selects_lowest_score(self, calibration_samples):
        tuning = [calibration_samples(20, seed=2, series_id='t1'), calibration_samples(20, seed=3, series_id='t2')]
        result = self.ou.tune_update_params(self.model, tuning, rng_seed=5, split_s=5000.0)
        assert len(result.candidates) == 6
        scores = [score for _, score in result.candidates]
        assert result.best_score == min(scores)
        assert result.config == result.candidates[scores.index(min(scores))][0]
        again = self.ou.tune_update_params(self.model, tuning, rng_seed=5, split_s=5000.0)
        assert again.config == result.config

    def test_tuning_needs_both_segments(self, calibration_samples):
        with pytest.raises(InvalidInputError):
            self.ou.tune_update_params(self.model, [calibration_samples(5)], rng_seed=0, split_s=1e6)
        with pytest.raises(InvalidInputError):
            self.ou.tune_update_params(self.model, [], rng_seed=0)

    @staticmethod
    def _mixed_stream(n, seed):
        '''Samples over the training time range; roughly a third carry a reference 150 mg/dL off.'''
        rng = np.random.default_rng(seed)
        stream = []
        for k in range(n):
            window = rng.uniform(0.5, 1.5, size=2)
            t = rng.uniform(0.0, 540.0 * 19)
            reference = 100.0 * (1.0 + window.mean()) + 5.0 * np.sin(t / 3600.0)
            if rng.uniform() < 1.0 / 3.0:
                reference += rng.choice([-150.0, 150.0])
            stream.append(CalibrationSample(list(window) + [t], max(reference, 1.0), 'mixed', k))
        return stream

    def test_long_mixed_stream(self):
        stream = self._mixed_stream(1000, seed=11)
        gammas = [self.ou._residual(self.model, s)[1] for s in stream]  # pylint: disable=protected-access
        config = self.ou.UpdateConfig(0.1, 0.5, float(np.median(gammas)))
        updater = self.ou.OnlineUpdater(self.model, config)
        rejected = set()
        counts = {self.ou.DECISION_OUTLIER: 0, self.ou.DECISION_NEAREST: 0, self.ou.DECISION_REDUNDANT: 0}

        for sample in stream:
            before = updater.model
            Zn = before.normalize_features(np.array([s.features for s in before.samples]))
            V = np.column_stack([Zn, [before.normalize_target(s.reference) for s in before.samples]])
            v_new = np.append(before.normalize_features(sample.features)[0], before.normalize_target(sample.reference))
            mean_n, var_n = before.predict_normalized(sample.features[None, :])
            residual = abs(float(mean_n[0]) - float(v_new[-1]))
            gamma = 1.0 / math.sqrt(float(var_n[0])) if var_n[0] > 0.0 else math.inf

            event = updater.observe(sample)
            counts[event.decision] += 1
            if residual > config.eps_u:
                assert event.decision == self.ou.DECISION_OUTLIER
                assert updater.model is before
                rejected.add(id(sample))
            elif gamma >= config.eps_gamma:
                dist = [math.sqrt(float(np.sum((V[i] - v_new) ** 2))) for i in range(V.shape[0])]
                assert (event.decision, event.index) == (self.ou.DECISION_NEAREST, dist.index(min(dist)))
            else:
                sums = [sum(math.exp(-config.c * math.sqrt(float(np.sum((V[i] - V[j]) ** 2)))) for j in range(V.shape[0])) for i in range(V.shape[0])]
                assert (event.decision, event.index) == (self.ou.DECISION_REDUNDANT, sums.index(max(sums)))

            assert updater.model.n_samples == 20
            assert not any(id(s) in rejected for s in updater.model.samples)
            if event.index is not None:
                assert updater.model.samples[event.index] is sample

        assert len(updater.events) == 1000
        assert counts[self.ou.DECISION_OUTLIER] >= 250
        assert counts[self.ou.DECISION_NEAREST] > 0
        assert counts[self.ou.DECISION_REDUNDANT] > 0
