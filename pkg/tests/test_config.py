import json

import pytest

from modules.core.errors import ConfigError
from modules.utils.config import DEFAULT_SETTINGS, deep_merge, lens_entries, load_settings


def write_settings(path, data):
    path.write_text(json.dumps(data), encoding='utf-8')
    return path


class TestLoadSettings:
    def test_missing_file_is_created(self, tmp_path):
        path = tmp_path / 'config' / 'settings.json'
        settings = load_settings(path)
        assert settings == DEFAULT_SETTINGS
        assert json.loads(path.read_text()) == DEFAULT_SETTINGS

    def test_partial_file_keeps_defaults(self, tmp_path):
        path = write_settings(tmp_path / 'settings.json', {'verification': {'seed': 7}})
        settings = load_settings(path)
        assert settings['verification']['seed'] == 7
        assert settings['verification']['workers'] == DEFAULT_SETTINGS['verification']['workers']
        assert settings['lens'] == DEFAULT_SETTINGS['lens']

    def test_defaults_are_not_shared(self, tmp_path):
        settings = load_settings(tmp_path / 'settings.json')
        settings['verification']['seed'] = -1
        assert DEFAULT_SETTINGS['verification']['seed'] != -1

    def test_malformed_json(self, tmp_path):
        path = tmp_path / 'settings.json'
        path.write_text('{"verification": ', encoding='utf-8')
        with pytest.raises(ConfigError):
            load_settings(path)

    def test_not_an_object(self, tmp_path):
        with pytest.raises(ConfigError):
            load_settings(write_settings(tmp_path / 'settings.json', [1, 2]))

    @pytest.mark.parametrize('override', [
        {'verification': {'workers': 0}},
        {'verification': {'seed': 'abc'}},
        {'verification': {'random_samples': True}},
        {'verification': []},
        {'lens': {'entries': {}}},
        {'lens': {'labelling': 3}},
        {'lens': {'alpha': 'x'}},
        {'lens': {'alpha': True}},
        {'lens': {'alpha': 0.5}},
    ])
    def test_ill_typed_values(self, tmp_path, override):
        with pytest.raises(ConfigError):
            load_settings(write_settings(tmp_path / 'settings.json', override))


class TestHelpers:
    def test_deep_merge_replaces_lists(self):
        merged = deep_merge({'a': {'b': 1, 'c': [1, 2]}}, {'a': {'c': [3]}})
        assert merged == {'a': {'b': 1, 'c': [3]}}

    def test_lens_entries(self):
        rows = lens_entries({'lens': {'entries': [{'p': 5, 'q': 2, 'n': 1, 'zeta': [1, 2, 3, 4], 'value': 9}]}})
        assert rows == [(5, 2, 1, (1, 2, 3, 4), 9)]

    def test_lens_entries_malformed(self):
        with pytest.raises(ConfigError):
            lens_entries({'lens': {'entries': [{'p': 5, 'q': 2}]}})

    def test_default_entries_match_published_table(self):
        assert len(lens_entries(DEFAULT_SETTINGS)) == len(DEFAULT_SETTINGS['lens']['entries'])
