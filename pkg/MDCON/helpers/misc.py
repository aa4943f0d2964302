"""
Misc helpers
"""
from typing import Iterable, List

from tqdm.auto import tqdm

from MDCON import config


def format_real(value: float) -> str:
    """
    Format a real with the precision used for every file MDCON writes.

    Parameters
    ----------
    value : float
        The number to format.

    Returns
    -------
    str
        The decimal representation, which round-trips to the same double.

    Examples
    --------
    >>> format_real(0.1)
    '0.10000000000000001'
    """
    return format(float(value), config.REAL_FORMAT)


def parse_real_list(text: str) -> List[float]:
    """
    Parse a comma-separated list of reals, such as ``'0.2,0.1,0.05'``.

    Parameters
    ----------
    text : str
        The list. Blank entries are ignored.

    Returns
    -------
    list of float
        The parsed values, in input order.

    Raises
    ------
    ValueError
        If an entry is not a number.
    """
    values = []
    for item in text.split(','):
        item = item.strip()
        if item:
            values.append(float(item))
    return values


def wrap_iterator(iterator: Iterable, verbose: bool, **kwargs) -> Iterable:
    """
    Wrapper for iterators so that `tqdm` can be used
    only if `verbose` is set.

    Parameters
    ----------
    iterator : iterable
        Iterator to be passed to `tqdm`
    verbose : bool
        Whether to show a progress bar.
    **kwargs : dict
        The keywords to pass to `tqdm`

    Returns
    -------
    iterable
        The iterator wrapped appropriately.
    """
    if verbose:
        return tqdm(iterator, **kwargs)
    else:
        return iterator
