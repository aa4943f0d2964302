"""
End-to-end test 3

Accuracy sweep
"""

from pathlib import Path
import numpy as np
from astropy.table import Table
import pytest

from MDCON.cli import main
from MDCON.instances import make_known_solution_instance

CFG_PATH = Path(__file__).parent / 'test3.yaml'


def test_rates(tmp_path: Path):
    """
    Iterations grow as 1/eps^2 and the objective gap stays within its bound.
    """
    instance_path = tmp_path / 'mqa.json'
    assert main(['generate', '--kind', 'max_quadratic_active', '--out', str(instance_path)]) == 0
    stem = tmp_path / 'rates'
    assert main(['bench', '--config', str(CFG_PATH), '--instance', str(instance_path), '--out', str(stem)]) == 0
    table = Table.read(tmp_path / 'rates.csv', format='ascii.csv')
    assert list(table['epsilon']) == [0.2, 0.1, 0.05, 0.025]
    assert list(table['N_theory']) == [25, 100, 400, 1600]
    assert np.all(table['N_actual'] == table['N_theory'])
    inst = make_known_solution_instance('max_quadratic_active')
    delta = table['epsilon']/inst.M_g
    bound = inst.grad_at_solution_norm*delta + 0.5*inst.L*delta**2
    assert np.all(table['f_gap'] <= bound + 1e-9)
    assert np.all(table['g_violation'] <= table['epsilon'])
    dat = Table.read(tmp_path / 'rates.dat', format='ascii.commented_header')
    assert list(dat['N_theory']) == [25, 100, 400, 1600]


if __name__ in '__main__':
    pytest.main(args=[Path(__file__)])
