import math

import pytest

from dyncal.utils import Utils


# pylint: disable=attribute-defined-outside-init
class TestUtils:
    @pytest.fixture(autouse=True)
    def init(self):
        self.utils = Utils

    def test_parse_float(self):
        assert self.utils.parse_float('55') == 55.0
        assert self.utils.parse_float(' 1e-3 ') == 0.001
        assert self.utils.parse_float('inf') == math.inf
        assert math.isnan(self.utils.parse_float('abc'))
        assert math.isnan(self.utils.parse_float(None))

    def test_parse_float_list(self):
        assert self.utils.parse_float_list('55, 40,inf') == [55.0, 40.0, math.inf]
        assert self.utils.parse_float_list('1.0, ') == [1.0]
        assert self.utils.parse_float_list([1, '2']) == [1.0, 2.0]
        with pytest.raises(ValueError):
            self.utils.parse_float_list('1, two')

    def test_parse_bool(self):
        for v in ('true', 'Yes', ' on ', '1'):
            assert self.utils.parse_bool(v) is True
        for v in ('false', 'NO', 'off', '0'):
            assert self.utils.parse_bool(v) is False
        assert self.utils.parse_bool(0) is False
        with pytest.raises(ValueError):
            self.utils.parse_bool('maybe')

    def test_canonical_json(self):
        assert self.utils.canonical_json({'b': 1, 'a': [1.5, None]}) == '{"a":[1.5,null],"b":1}'

    def test_sha256(self):
        assert self.utils.sha256('') == 'SHA256:47DEQpj8HBSa+/TImW+5JCeuQeRkm5NMpJWZG3hSuFU'
        assert self.utils.sha256(b'abc') == self.utils.sha256('abc')

    def test_derive_seed(self):
        seed = self.utils.derive_seed(0, 'noise', 'patient-001')
        assert seed == self.utils.derive_seed(0, 'noise', 'patient-001')
        assert 0 <= seed < 2 ** 63
        assert seed != self.utils.derive_seed(1, 'noise', 'patient-001')
        assert seed != self.utils.derive_seed(0, 'noise', 'patient-002')
        # Labels are typed: the fold number 1 and the string '1' differ.
        assert self.utils.derive_seed(0, 'fold', 1) != self.utils.derive_seed(0, 'fold', '1')
