"""
Run ``python -m MDCON``.
"""
import sys

from MDCON.cli import main

sys.exit(main())
