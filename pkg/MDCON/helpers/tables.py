"""
Table helpers
"""
from io import StringIO
import os
from pathlib import Path
from typing import Dict, Union

from astropy.table import Table
from astropy.io import ascii as asciitable


def write_table(
    table: Table,
    path: Union[Path, str],
    fmt: str = 'csv',
    formats: Dict[str, str] = None
) -> None:
    """
    Write an astropy table with LF line endings.

    Parameters
    ----------
    table : astropy.table.Table
        The table to write. Masked entries are written empty.
    path : pathlib.Path or str
        The destination, overwritten if it exists.
    fmt : str, default='csv'
        An ``astropy.io.ascii`` format such as ``'csv'`` or
        ``'commented_header'``.
    formats : dict, optional
        Column formats passed to the writer.
    """
    buffer = StringIO()
    asciitable.write(table, buffer, format=fmt, formats=formats or {}, overwrite=True)
    text = buffer.getvalue().replace(os.linesep, '\n')
    Path(path).write_text(text, encoding='UTF-8', newline='\n')
