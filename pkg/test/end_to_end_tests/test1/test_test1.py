"""
End-to-end test 1

The most basic test.
"""

from pathlib import Path
import numpy as np
from astropy.table import Table
import pytest

from MDCON.cli import main
from MDCON.instances import make_known_solution_instance

CFG_PATH = Path(__file__).parent / 'test1.yaml'


@pytest.fixture
def instance_path(tmp_path: Path) -> Path:
    """
    The ``active_linear`` fixture written by ``mdcon generate``.
    """
    path = tmp_path / 'active_linear.json'
    assert main(['generate', '--kind', 'active_linear', '--out', str(path)]) == 0
    return path


def run(instance_path: Path, trace_path: Path, *extra: str) -> int:
    """
    Solve with the settings of this test.
    """
    return main(['solve', '--config', str(CFG_PATH), '--instance', str(instance_path),
                 '--trace', str(trace_path), *extra])


def test_trace(instance_path: Path, tmp_path: Path):
    """
    The trace has one row per iteration and a feasible output.
    """
    trace_path = tmp_path / 'trace.csv'
    assert run(instance_path, trace_path) == 0
    table = Table.read(trace_path, format='ascii.csv')
    assert len(table) == 100
    assert set(table['kind']) <= {'productive', 'nonproductive'}
    productive = table['kind'] == 'productive'
    assert np.sum(productive) >= 1
    inst = make_known_solution_instance('active_linear')
    assert np.min(table['f'][productive]) - inst.known_value <= 0.0525
    assert np.all(table['g'][productive] <= 0.1)
    assert np.min(table['vf_if_known'][productive]) < 0.1/np.sqrt(2)


def test_reproducible(instance_path: Path, tmp_path: Path):
    """
    The same settings give the same bytes.
    """
    a, b = tmp_path / 'a.csv', tmp_path / 'b.csv'
    assert run(instance_path, a) == 0
    assert run(instance_path, b) == 0
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize('algorithm', ['partial', 'adaptive'])
def test_verify(instance_path: Path, algorithm: str):
    """
    Every check passes.
    """
    code = main(['verify', '--config', str(CFG_PATH), '--instance', str(instance_path),
                 '--algorithm', algorithm])
    assert code == 0


if __name__ in '__main__':
    pytest.main(args=[Path(__file__)])
