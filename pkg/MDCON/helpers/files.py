"""
File Helpers
"""
from pathlib import Path
from typing import Union


def check_and_build_dir(path: Union[Path, str]) -> None:
    """
    Check and build directory.

    Check if a path exists, if not, create it.

    Parameters
    ----------
    path : pathlib.Path or str
        Path to check and create
    """
    path = Path(path)
    if not path.exists():
        path.mkdir(parents=True)


def get_output_paths(out: Union[Path, str], *extensions: str) -> tuple[Path, ...]:
    """
    Get the files that a command writes for an output stem.

    A suffix already present on ``out`` is dropped, so ``rates.csv`` and
    ``rates`` both give ``rates.csv`` and ``rates.dat``. Parent directories
    are created.

    Parameters
    ----------
    out : pathlib.Path or str
        The output stem given on the command line.
    *extensions : str
        The extensions, without a leading dot.

    Returns
    -------
    tuple of pathlib.Path
        One path per extension.

    Raises
    ------
    ValueError
        If no extension is given.
    """
    if len(extensions) == 0:
        raise ValueError('At least one extension is required.')
    out = Path(out)
    stem = out.with_suffix('') if out.suffix else out
    check_and_build_dir(stem.parent)
    return tuple(stem.parent / f'{stem.name}.{ext}' for ext in extensions)
