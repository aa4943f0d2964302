"""
The ``MDCON`` parameters module.

These classes instruct the behavior of the
command line interface.
"""
from MDCON.params.base import BaseParameters
from MDCON.params.run import RunConfig
