"""
Base parameter class
"""
from pathlib import Path
from typing import Union
import yaml


class BaseParameters:
    """
    Base class for Parameters
    """
    _PRESET_PATH: Path = None
    """
    YAML file holding named presets, or ``None`` if the class has none.
    """

    def __init__(self, **kwargs):
        for key, value in kwargs.items():
            self.__setattr__(key, value)

    @classmethod
    def _from_dict(cls, d: dict):
        return cls(**d)

    @classmethod
    def from_dict(cls, d: dict, *args):
        """
        Construct a BaseParameters (or subclass) instance from a dictionary.

        Parameters
        ----------
        d : dict
            The dictionary containing the parameters.

        Returns
        -------
        BaseParameters or subclass
            An instance of `BaseParameters` initialized with the provided parameters.

        Notes
        -----
        If the dictionary contains a key named 'preset', the named preset is
        loaded first and the remaining keys of ``d`` override its values.
        If 'preset' key is not present, the dictionary is expected to contain the values
        needed by the constructor.
        """
        if 'preset' in d.keys():
            d = dict(d)
            data = cls._load_preset(d.pop('preset'))
            data.update(d)
            return cls._from_dict(data, *args)
        else:
            return cls._from_dict(d, *args)

    @classmethod
    def _load_preset(cls, name: str) -> dict:
        if cls._PRESET_PATH is None:
            raise NotImplementedError('This class does not have a ``_PRESET_PATH`` attribute.')
        with open(cls._PRESET_PATH, 'r', encoding='UTF-8') as file:
            data = yaml.safe_load(file)
        key = name.replace('-', '_')
        if key not in data:
            raise KeyError(f'Unknown preset {name}. Available: {", ".join(sorted(data))}')
        return dict(data[key])

    @classmethod
    def from_preset(cls, name: str):
        """
        Load a ``BaseParameters`` instance from a preset file.

        Parameters
        ----------
        name : str
            The name of the preset to load. Hyphens and underscores are
            interchangeable.

        Returns
        -------
        BaseParameters
            The class instance loaded from a preset.

        Raises
        ------
        NotImplementedError
            If the class has no preset file.
        KeyError
            If the preset does not exist.
        """
        return cls._from_dict(cls._load_preset(name))

    @classmethod
    def from_yaml(cls, path: Union[Path, str]):
        """
        Create an instance from a YAML file.

        Parameters
        ----------
        path : pathlib.Path or str
            The path to the YAML file.

        Returns
        -------
        BaseParameters
            The class instance.
        """
        with open(path, 'r', encoding='UTF-8') as file:
            data = yaml.safe_load(file)
        return cls.from_dict(data)
