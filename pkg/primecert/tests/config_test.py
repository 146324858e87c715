"""Tests for configuration sources."""

import pytest

from primecert import config
from primecert import errors


def test_load_key_values(tmpdir):
    path = tmpdir.join('settings.txt')
    path.write('# search settings\n\nm_min = 55\n  delta_max=5e-9  \nsigma0=0.92,0.93\n')

    values = config.load_key_values(str(path))
    assert list(values.items()) == [('m_min', '55'), ('delta_max', '5e-9'),
                                    ('sigma0', '0.92,0.93')]


@pytest.mark.parametrize('content,line_number', [
    ('m_min=5\nnot a pair\n', 2),
    ('=5\n', 1),
    ('m_min=5\n# comment\nm_min=6\n', 3),
])
def test_load_key_values_errors(tmpdir, content, line_number):
    path = tmpdir.join('bad.txt')
    path.write(content)

    with pytest.raises(errors.ConfigFileError) as excinfo:
        config.load_key_values(str(path))
    assert excinfo.value.line_number == line_number
    assert str(excinfo.value).startswith('line %d:' % line_number)


@pytest.mark.parametrize('explicit,environ,expected', [
    (None, {}, config.DEFAULT_PRECISION),
    (None, {config.PRECISION_ENV_VAR: ''}, config.DEFAULT_PRECISION),
    (None, {config.PRECISION_ENV_VAR: '256'}, 256),
    (128, {config.PRECISION_ENV_VAR: '256'}, 128),
])
def test_resolve_precision(explicit, environ, expected):
    assert config.resolve_precision(explicit, environ) == expected


def test_resolve_precision_reads_os_environ(monkeypatch):
    monkeypatch.setenv(config.PRECISION_ENV_VAR, '320')
    assert config.resolve_precision() == 320


@pytest.mark.parametrize('explicit,environ', [
    (32, {}),
    (None, {config.PRECISION_ENV_VAR: 'lots'}),
    (None, {config.PRECISION_ENV_VAR: '12'}),
    ('192', {}),
    (True, {}),
])
def test_resolve_precision_errors(explicit, environ):
    with pytest.raises(errors.PrecisionError):
        config.resolve_precision(explicit, environ)


def test_check_q_variant():
    for variant in config.Q_VARIANTS:
        assert config.check_q_variant(variant) == variant
    with pytest.raises(errors.ConfigFileError):
        config.check_q_variant('sqrt')
