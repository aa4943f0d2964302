"""
MDCON helpers module

This module contains functions that may be shared
throughout the rest of the package.
"""
from MDCON.helpers.files import check_and_build_dir, get_output_paths
from MDCON.helpers.misc import format_real, parse_real_list, wrap_iterator
from MDCON.helpers.tables import write_table
