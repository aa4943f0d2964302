"""
Run configuration
"""
from pathlib import Path
from typing import List, Union
import math

from MDCON import config
from MDCON.params.base import BaseParameters
from MDCON.helpers import check_and_build_dir

COMMANDS = ('generate', 'solve', 'verify', 'bench')
ALGORITHMS = ('adaptive', 'partial', 'restart')
GENERATE_KINDS = (
    'max_quadratic', 'strongly_convex', 'active_linear',
    'strongly_convex_ball', 'max_quadratic_active', 'interior_optimum'
)
INNER_ACCURACIES = ('phi', 'scaled')


class RunConfig(BaseParameters):
    """
    The settings of one command line invocation.

    Parameters
    ----------
    command : str
        One of ``'generate'``, ``'solve'``, ``'verify'`` or ``'bench'``.
    instance_path : pathlib.Path or str, optional
        The instance file to read.
    algorithm : str, default='partial'
        One of ``'adaptive'``, ``'partial'`` or ``'restart'``.
    epsilon : float, optional
        The accuracy for ``solve`` and ``verify``.
    epsilon_list : list of float, optional
        The accuracies swept by ``bench``.
    seed : int, default=0
        The only source of randomness.
    out : pathlib.Path or str, optional
        Output file (``generate``), summary (``solve``) or stem (``bench``).
    trace : pathlib.Path or str, optional
        The trace CSV written by ``solve``.
    cap_multiplier : float, default=config.DEFAULT_CAP_MULTIPLIER
        Iteration cap of the adaptive method, as a multiple of its bound.
    r0_sq : float, optional
        :math:`R_0^2` for restarts.
    inner_accuracy : str, default='phi'
        Inner accuracy rule of restarts.
    kind : str, default='max_quadratic'
        The instance generated by ``generate``.
    dim : int, default=2
        Dimension of generated instances.
    pieces : int, default=2
        Pieces of generated instances.
    mu : float, default=1.0
        Strong convexity of generated ``strongly_convex`` instances.
    """
    _PRESET_PATH = config.PRESET_PATH / 'runs.yaml'
    """
    The path to the preset file.
    """

    def __init__(
        self,
        command: str,
        instance_path: Union[Path, str] = None,
        algorithm: str = 'partial',
        epsilon: float = None,
        epsilon_list: List[float] = None,
        seed: int = 0,
        out: Union[Path, str] = None,
        trace: Union[Path, str] = None,
        cap_multiplier: float = config.DEFAULT_CAP_MULTIPLIER,
        r0_sq: float = None,
        inner_accuracy: str = 'phi',
        kind: str = 'max_quadratic',
        dim: int = 2,
        pieces: int = 2,
        mu: float = 1.0,
    ):
        self.command = command
        self.instance_path = None if instance_path is None else Path(instance_path)
        self.algorithm = algorithm
        self.epsilon = None if epsilon is None else float(epsilon)
        self.epsilon_list = None if epsilon_list is None else [float(e) for e in epsilon_list]
        self.seed = int(seed)
        self.out = None if out is None else Path(out)
        self.trace = None if trace is None else Path(trace)
        self.cap_multiplier = float(cap_multiplier)
        self.r0_sq = None if r0_sq is None else float(r0_sq)
        self.inner_accuracy = inner_accuracy
        self.kind = kind
        self.dim = int(dim)
        self.pieces = int(pieces)
        self.mu = float(mu)

    @classmethod
    def _from_dict(cls, d: dict) -> 'RunConfig':
        return cls(**{key: value for key, value in d.items() if value is not None})

    @staticmethod
    def _check_positive(value: float, name: str):
        if value is None:
            raise ValueError(f'{name} is required')
        if not (math.isfinite(value) and value > 0):
            raise ValueError(f'{name} must be positive, got {value}')

    def validate(self) -> None:
        """
        Check the configuration before any computation.

        Output directories are created.

        Raises
        ------
        ValueError
            If a value is missing or out of range.
        FileNotFoundError
            If the instance file does not exist.
        """
        if self.command not in COMMANDS:
            raise ValueError(f'Unknown command {self.command}. Expected one of {COMMANDS}')
        if self.command == 'generate':
            if self.kind not in GENERATE_KINDS:
                raise ValueError(f'Unknown instance kind {self.kind}. Expected one of {GENERATE_KINDS}')
            if self.dim < 1 or self.pieces < 1:
                raise ValueError('dim and pieces must be at least 1')
            if self.kind == 'strongly_convex':
                self._check_positive(self.mu, 'mu')
            if self.out is None:
                raise ValueError('generate requires --out')
        else:
            if self.instance_path is None:
                raise ValueError(f'{self.command} requires --instance')
            if not self.instance_path.is_file():
                raise FileNotFoundError(f'Instance file {self.instance_path} not found')
            if self.algorithm not in ALGORITHMS:
                raise ValueError(f'Unknown algorithm {self.algorithm}. Expected one of {ALGORITHMS}')
            if self.command == 'bench':
                if not self.epsilon_list:
                    raise ValueError('bench requires a non-empty --epsilon-list')
                for eps in self.epsilon_list:
                    self._check_positive(eps, 'epsilon')
                if self.out is None:
                    raise ValueError('bench requires --out')
            else:
                self._check_positive(self.epsilon, 'epsilon')
        if not (math.isfinite(self.cap_multiplier) and self.cap_multiplier >= 1):
            raise ValueError(f'cap_multiplier must be at least 1, got {self.cap_multiplier}')
        if self.r0_sq is not None:
            self._check_positive(self.r0_sq, 'r0_sq')
        if self.inner_accuracy not in INNER_ACCURACIES:
            raise ValueError(f'inner_accuracy must be one of {INNER_ACCURACIES}, got {self.inner_accuracy}')
        for path in (self.out, self.trace):
            if path is not None:
                check_and_build_dir(path.parent)
