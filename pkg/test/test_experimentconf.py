import math

import pytest

from dyncal.errors import DataIOError, InvalidInputError
from dyncal.experimentconf import ExperimentConfig


# pylint: disable=attribute-defined-outside-init
class TestExperimentConfig:
    @pytest.fixture(autouse=True)
    def init(self):
        self.ExperimentConfig = ExperimentConfig

    def test_defaults(self):
        conf = self.ExperimentConfig()
        assert conf.p == 6
        assert conf.ell == 1
        assert conf.downsample == 3
        assert conf.snr_db == [55.0]
        assert conf.n_trials == 20
        assert conf.max_samples == 2000
        assert conf.split_mode == 'series'
        assert conf.time_unit == 'seconds'
        assert conf.window_spec().dimension == 9
        assert conf.update_config().to_list() == [0.0684, 0.7346, 6.3445]
        assert conf.effective_lifespan_s() == 68400.0

    def test_full_scale(self):
        conf = self.ExperimentConfig()
        conf.set_full_scale()
        assert conf.n_trials == 100
        assert conf.sample_cap() is None

    def test_coercion(self):
        conf = self.ExperimentConfig()
        conf.p = '4'
        conf.snr_db = '55, 40, inf'
        conf.centered = 'no'
        conf.lifespan_s = ''
        conf.delta_range = '2, 0.1, 10'
        assert conf.p == 4
        assert conf.snr_db == [55.0, 40.0, math.inf]
        assert conf.centered is False
        assert conf.lifespan_s is None
        assert conf.search_config().delta.initial_guess == 2.0

    def test_validation(self):
        conf = self.ExperimentConfig()
        bad = [
            ('p', '-1'), ('downsample', '0'), ('n_trials', '2.5'), ('test_fraction', '1.0'),
            ('snr_db', 'nan'), ('snr_db', ''), ('eps_u', '-0.1'), ('delta_range', '1, 2'),
            ('delta_range', '5, 0.1, 1'), ('c_range', '1, 0.5'), ('time_unit', 'hours'),
            ('split_mode', 'random'), ('noise_order', 'sideways'), ('sensor', '{"zeta": 1}'),
            ('population', '[1, 2]'), ('target_scale', '0'), ('tolerance', 'inf'),
        ]
        for name, value in bad:
            with pytest.raises(ValueError):
                setattr(conf, name, value)
        with pytest.raises(ValueError):
            conf.unknown_setting = 1

    def test_load_data(self):
        conf = self.ExperimentConfig()
        conf.load_data('''
            # comment
            scenario = desk
            p = 3
            snr_db = 55, 40
            sensor = {"b": 150.0}
        ''')
        assert conf.scenario == 'desk'
        assert conf.p == 3
        assert conf.snr_db == [55.0, 40.0]
        assert conf.sensor_model().b == 150.0

    def test_load_data_errors(self):
        conf = self.ExperimentConfig()
        with pytest.raises(InvalidInputError) as excinfo:
            conf.load_data('p = 3\nbogus = 1\n', source='exp.conf')
        assert 'exp.conf:2' in str(excinfo.value)
        with pytest.raises(InvalidInputError):
            conf.load_data('p 3')
        with pytest.raises(InvalidInputError):
            conf.load_data('p = -3')

    def test_load_file(self, tmp_path):
        path = tmp_path / 'exp.conf'
        path.write_text('seed = 42\n', encoding='utf-8')
        conf = self.ExperimentConfig()
        conf.load_file(str(path))
        assert conf.seed == 42
        with pytest.raises(DataIOError):
            conf.load_file(str(tmp_path / 'missing.conf'))

    def test_config_hash(self):
        a, b = self.ExperimentConfig(), self.ExperimentConfig()
        assert a.config_hash() == b.config_hash()
        assert a.config_hash().startswith('SHA256:')
        b.output_dir = '/elsewhere'
        b.threads = 8
        assert a.config_hash() == b.config_hash()
        b.seed = 1
        assert a.config_hash() != b.config_hash()
        b.seed = 0
        b.snr_db = 'inf'
        assert a.config_hash() != b.config_hash()

    def test_format_lines(self):
        text = self.ExperimentConfig.format_lines({'eps_u': 0.1, 'snr_db': [55.0, math.inf], 'data_dir': None, 'sensor': {'b': 1.0}})
        assert text == 'eps_u = 0.1\nsnr_db = 55.0, inf\ndata_dir = \nsensor = {"b": 1.0}\n'
        conf = self.ExperimentConfig()
        conf.load_data(text)
        assert conf.eps_u == 0.1
        assert conf.snr_db == [55.0, math.inf]

    def test_str_reloads(self):
        conf = self.ExperimentConfig()
        conf.seed = 7
        conf.snr_db = '55, inf'
        other = self.ExperimentConfig()
        other.load_data(str(conf))
        assert other.config_hash() == conf.config_hash()

    def test_search_config(self):
        conf = self.ExperimentConfig()
        conf.n_trials = 5
        conf.threads = 2
        search = conf.search_config()
        assert search.n_trials == 5
        assert search.threads == 2
        assert search.rng_seed != conf.seed
        assert search.likelihood_tolerance == conf.likelihood_tolerance
        conf.likelihood_tolerance = 0
        assert conf.search_config().likelihood_tolerance == 0.0
        with pytest.raises(ValueError):
            conf.likelihood_tolerance = -1e-3
