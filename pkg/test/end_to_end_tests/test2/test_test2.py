"""
End-to-end test 2

Restarts on a strongly convex problem.
"""

from pathlib import Path
import numpy as np
from astropy.table import Table
import pytest

from MDCON.cli import main

CFG_PATH = Path(__file__).parent / 'test2.yaml'


@pytest.fixture
def instance_path(tmp_path: Path) -> Path:
    """
    The ``strongly_convex_ball`` fixture written by ``mdcon generate``.
    """
    path = tmp_path / 'scb.json'
    assert main(['generate', '--kind', 'strongly_convex_ball', '--out', str(path)]) == 0
    return path


@pytest.mark.slow
def test_restarts(instance_path: Path, tmp_path: Path):
    """
    Radii halve and every restart stays inside its ball.
    """
    trace_path = tmp_path / 'restarts.csv'
    code = main(['solve', '--config', str(CFG_PATH), '--instance', str(instance_path),
                 '--trace', str(trace_path)])
    assert code == 0
    table = Table.read(trace_path, format='ascii.csv')
    assert list(table['p']) == list(range(1, 9))
    assert np.all(table['R_p_sq'] == 0.5*0.5**table['p'])
    assert np.all(table['dist_sq_if_known'] <= table['R_p_sq'] + 1e-9)


@pytest.mark.slow
def test_verify(instance_path: Path):
    """
    Every restart check passes.
    """
    code = main(['verify', '--config', str(CFG_PATH), '--instance', str(instance_path)])
    assert code == 0


if __name__ in '__main__':
    pytest.main(args=[Path(__file__)])
