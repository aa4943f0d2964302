"""
Test BaseParameters
"""
import pytest

from MDCON.params.base import BaseParameters
from MDCON.params import RunConfig


def test_base_parameters_from_dict():
    params_dict = {'param1': 1, 'param2': 2}
    params = BaseParameters.from_dict(params_dict)
    assert params.param1 == 1
    assert params.param2 == 2


def test_base_parameters_no_preset():
    with pytest.raises(NotImplementedError):
        BaseParameters.from_preset('anything')
    with pytest.raises(NotImplementedError):
        BaseParameters.from_dict({'preset': 'anything'})


def test_preset_override():
    """
    Keys next to ``preset`` override the preset values.
    """
    cfg = RunConfig.from_dict({'preset': 'adaptive_default', 'command': 'solve', 'epsilon': 0.3})
    assert cfg.algorithm == 'adaptive'
    assert cfg.epsilon == 0.3
    with pytest.raises(KeyError, match='Available'):
        RunConfig.from_preset('missing')
