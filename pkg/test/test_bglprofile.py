import json

import numpy as np
import pytest

from dyncal import bglprofile
from dyncal.errors import InvalidInputError
from dyncal.outputbuffer import OutputBuffer


# pylint: disable=attribute-defined-outside-init
class TestBglProfile:
    @pytest.fixture(autouse=True)
    def init(self):
        self.bgl = bglprofile

    def test_constant_baseline(self):
        t, u = self.bgl.generate_profile(self.bgl.BglProfile(), rng_seed=0)
        assert t.size == 380
        assert t[1] - t[0] == 180.0
        assert np.all(u == 120.0)

    def test_excursion_peak(self):
        event = self.bgl.MealEvent(3600.0, 80.0, rise_s=1200.0, decay_s=4800.0)
        values = event.evaluate(np.linspace(0.0, 30000.0, 300001))
        assert float(np.max(values)) == pytest.approx(80.0, rel=1e-6)
        assert np.all(event.evaluate(np.array([0.0, 3600.0])) == 0.0)

    def test_excursion_invalid(self):
        with pytest.raises(InvalidInputError):
            self.bgl.ExcursionEvent(0.0, 10.0, rise_s=3600.0, decay_s=1800.0)
        with pytest.raises(InvalidInputError):
            self.bgl.ExcursionEvent(0.0, -10.0)

    def test_meal_and_insulin(self):
        profile = self.bgl.BglProfile(meals=[self.bgl.MealEvent(3600.0, 60.0)], insulin=[self.bgl.InsulinEvent(3600.0, 60.0)])
        _, u = self.bgl.generate_profile(profile, rng_seed=0)
        assert np.allclose(u, 120.0)
        _, u = self.bgl.generate_profile(self.bgl.BglProfile(meals=[self.bgl.MealEvent(3600.0, 60.0)]), rng_seed=0)
        assert float(np.max(u)) == pytest.approx(180.0, rel=5e-3)

    def test_wander_is_seeded(self):
        profile = self.bgl.BglProfile(wander_amplitude=10.0)
        _, a = self.bgl.generate_profile(profile, rng_seed=1)
        _, b = self.bgl.generate_profile(profile, rng_seed=1)
        _, c = self.bgl.generate_profile(profile, rng_seed=2)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)
        assert np.all(np.abs(a - 120.0) <= 10.0 + 1e-9)

    def test_clipping(self):
        out = OutputBuffer()
        out.use_colors = False
        profile = self.bgl.BglProfile(baseline=590.0, meals=[self.bgl.MealEvent(0.0, 100.0)])
        _, u = self.bgl.generate_profile(profile, rng_seed=0, out=out)
        assert float(np.max(u)) == 600.0
        assert out.warnings_emitted == 1

    def test_invalid_profile(self):
        with pytest.raises(InvalidInputError):
            self.bgl.BglProfile(duration_s=0.0)
        with pytest.raises(InvalidInputError):
            self.bgl.BglProfile(duration_s=600.0, sample_interval_s=900.0)
        with pytest.raises(InvalidInputError):
            self.bgl.BglProfile.from_dict({'baseline': 100.0, 'colour': 'red'})

    def test_population(self):
        population = self.bgl.generate_population(self.bgl.PopulationSpec(), 5, rng_seed=0)
        assert [sid for sid, _ in population] == ['patient-001', 'patient-002', 'patient-003', 'patient-004', 'patient-005']
        assert len({p.baseline for _, p in population}) == 5
        prefix = self.bgl.generate_population(self.bgl.PopulationSpec(), 3, rng_seed=0)
        assert [p.to_dict() for _, p in prefix] == [p.to_dict() for _, p in population[:3]]
        other = self.bgl.generate_population(self.bgl.PopulationSpec(), 3, rng_seed=1)
        assert [p.to_dict() for _, p in other] != [p.to_dict() for _, p in prefix]

    def test_population_profiles_are_valid(self):
        for _, profile in self.bgl.generate_population(self.bgl.PopulationSpec(), 10, rng_seed=4):
            assert len(profile.meals) == 3
            assert len(profile.insulin) == 3
            for event in profile.meals + profile.insulin:
                assert event.decay_s > event.rise_s

    def test_population_spec(self):
        spec = self.bgl.PopulationSpec(duration_s=7200, baseline=[100, 5])
        assert spec.duration_s == 7200.0
        assert spec.baseline == (100.0, 5.0)
        with pytest.raises(InvalidInputError):
            self.bgl.PopulationSpec(height=180)
        with pytest.raises(InvalidInputError):
            self.bgl.PopulationSpec(baseline=100)
        with pytest.raises(InvalidInputError):
            self.bgl.generate_population(spec, -1, rng_seed=0)

    def test_load_profiles(self, tmp_path):
        path = tmp_path / 'profiles.json'
        path.write_text(json.dumps({'profiles': [
            {'series_id': 'alice', 'baseline': 100.0, 'duration_s': 3600.0},
            {'baseline': 140.0, 'meals': [{'time_s': 600.0, 'magnitude': 50.0}]},
        ]}), encoding='utf-8')
        profiles = self.bgl.load_profiles(str(path))
        assert [sid for sid, _ in profiles] == ['alice', 'patient-002']
        assert profiles[0][1].n_samples == 20
        assert profiles[1][1].meals[0].magnitude == 50.0

    def test_load_profiles_invalid_json(self, tmp_path):
        path = tmp_path / 'profiles.json'
        path.write_text('{"profiles": [', encoding='utf-8')
        with pytest.raises(InvalidInputError):
            self.bgl.load_profiles(str(path))
