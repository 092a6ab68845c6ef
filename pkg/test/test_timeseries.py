import json
import os

import numpy as np
import pytest

from dyncal.errors import DataIOError, InvalidInputError
from dyncal.timeseries import TimeSeries, read_csv, read_series_dir, write_csv


# pylint: disable=attribute-defined-outside-init
class TestTimeSeries:
    @pytest.fixture(autouse=True)
    def init(self):
        self.TimeSeries = TimeSeries

    def _series(self, n=10, series_id='a', reference=True):
        t = np.arange(n) * 60.0
        y = 0.1 * np.arange(n) + 1.0 / 3.0
        u = 100.0 + np.arange(n) if reference else None
        return self.TimeSeries(t, y, u, series_id=series_id)

    def test_sample_interval(self):
        s = self._series()
        assert s.sample_interval == 60.0
        assert len(s) == 10
        assert s.has_reference

    def test_length_mismatch(self):
        with pytest.raises(InvalidInputError):
            self.TimeSeries([0.0, 1.0, 2.0], [1.0, 2.0])
        with pytest.raises(InvalidInputError):
            self.TimeSeries([0.0, 1.0], [1.0, 2.0], u_ref=[1.0])

    def test_non_uniform_spacing(self):
        with pytest.raises(InvalidInputError):
            self.TimeSeries([0.0, 1.0, 3.0], [1.0, 2.0, 3.0])

    def test_non_increasing_times(self):
        with pytest.raises(InvalidInputError):
            self.TimeSeries([2.0, 1.0, 0.0], [1.0, 2.0, 3.0])

    def test_non_finite_values(self):
        with pytest.raises(InvalidInputError):
            self.TimeSeries([0.0, 1.0], [1.0, float('nan')])
        with pytest.raises(InvalidInputError):
            self.TimeSeries([0.0, 1.0], [1.0, 2.0], u_ref=[100.0, float('inf')])

    def test_arrays_are_read_only(self):
        s = self._series()
        with pytest.raises(ValueError):
            s.y[0] = 5.0

    def test_truth(self):
        s = self._series()
        assert s.truth() is s.u_ref
        noisy = s.replace(u_ref=s.u_ref + 1.0, u_true=s.u_ref)
        assert np.array_equal(noisy.truth(), s.u_ref)
        assert self._series(reference=False).truth() is None

    def test_csv_preserves_values(self, tmp_path):
        s = self._series(series_id='patient-001')
        path = str(tmp_path / 'series.csv')
        s.write_csv(path, {'seed': 4})
        loaded = self.TimeSeries.read_csv(path)
        assert loaded.series_id == 'patient-001'
        assert loaded.sample_interval == 60.0
        assert np.array_equal(loaded.y, s.y)
        assert np.array_equal(loaded.u_ref, s.u_ref)
        assert loaded.u_true is None

    def test_csv_metadata_lines(self, tmp_path):
        path = str(tmp_path / 'series.csv')
        self._series(n=3).write_csv(path, {'seed': 4})
        with open(path, 'r', encoding='utf-8') as f:
            lines = f.read().splitlines()
        assert lines[0] == '# sample_interval_s = 60.0'
        assert lines[1] == '# seed = 4'
        assert lines[2] == '# series_id = a'
        assert lines[3] == 't_s,y,u_ref'

    def test_csv_unknown_column(self, tmp_path):
        path = str(tmp_path / 'bad.csv')
        with open(path, 'w', encoding='utf-8') as f:
            f.write('t_s,y,extra\n0,1,2\n1,2,3\n')
        with pytest.raises(InvalidInputError):
            self.TimeSeries.read_csv(path)

    def test_csv_missing_column(self, tmp_path):
        path = str(tmp_path / 'bad.csv')
        with open(path, 'w', encoding='utf-8') as f:
            f.write('t_s,u_ref\n0,1\n1,2\n')
        with pytest.raises(InvalidInputError):
            read_csv(path, required=('t_s', 'y'))

    def test_csv_non_numeric(self, tmp_path):
        path = str(tmp_path / 'bad.csv')
        with open(path, 'w', encoding='utf-8') as f:
            f.write('t_s,y\n0,abc\n1,2\n')
        with pytest.raises(InvalidInputError):
            self.TimeSeries.read_csv(path)

    def test_csv_missing_file(self, tmp_path):
        with pytest.raises(DataIOError):
            self.TimeSeries.read_csv(str(tmp_path / 'missing.csv'))

    def test_series_dir_sorted(self, tmp_path):
        self._series(series_id='b').write_csv(str(tmp_path / 'b.csv'))
        self._series(series_id='a').write_csv(str(tmp_path / 'a.csv'))
        assert [s.series_id for s in read_series_dir(str(tmp_path))] == ['a', 'b']

    def test_series_dir_manifest(self, tmp_path):
        self._series(series_id='x').write_csv(str(tmp_path / 'one.csv'))
        self._series(series_id='y').write_csv(str(tmp_path / 'two.csv'))
        with open(os.path.join(str(tmp_path), 'manifest.json'), 'w', encoding='utf-8') as f:
            json.dump({'series': [{'file': 'two.csv', 'series_id': 'second'}, {'file': 'one.csv', 'series_id': 'first'}]}, f)
        assert [s.series_id for s in read_series_dir(str(tmp_path))] == ['second', 'first']

    def test_series_dir_missing(self, tmp_path):
        with pytest.raises(DataIOError):
            read_series_dir(str(tmp_path / 'nope'))

    def test_write_is_deterministic(self, tmp_path):
        s = self._series()
        paths = [str(tmp_path / 'a.csv'), str(tmp_path / 'b.csv')]
        for path in paths:
            write_csv(path, s.to_frame(), {'k': 1})
        with open(paths[0], 'rb') as fa, open(paths[1], 'rb') as fb:
            assert fa.read() == fb.read()
