#!/usr/bin/env python

"""
Tests for `MDCON.helpers.tables` module
"""

from pathlib import Path
import numpy as np
from astropy.table import Table, MaskedColumn

from MDCON import helpers


def make_table() -> Table:
    return Table(
        [
            np.array([0, 1]),
            np.array([0.1, 1/3]),
            MaskedColumn([0.5, 0.], mask=[False, True]),
        ],
        names=('k', 'x', 'y')
    )


def test_write_csv(tmp_path: Path):
    """
    CSV output uses LF endings and leaves masked entries empty.
    """
    path = tmp_path / 't.csv'
    helpers.write_table(make_table(), path, formats={'x': '%.17g'})
    data = path.read_bytes()
    assert b'\r\n' not in data
    lines = data.decode('UTF-8').splitlines()
    assert lines[0] == 'k,x,y'
    assert lines[1] == '0,0.10000000000000001,0.5'
    assert lines[2].endswith(',')
    new = Table.read(path, format='ascii.csv')
    assert new['x'][1] == 1/3


def test_write_commented_header(tmp_path: Path):
    """
    Test `write_table()` with the commented header format.
    """
    path = tmp_path / 't.dat'
    helpers.write_table(make_table(), path, fmt='commented_header')
    text = path.read_text(encoding='UTF-8')
    assert text.startswith('# k x y')
    # overwrites
    helpers.write_table(make_table()[:1], path, fmt='commented_header')
    assert len(path.read_text(encoding='UTF-8').splitlines()) == 2
