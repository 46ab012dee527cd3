"""Entry point for python -m corput."""

import sys

from .cli import main

sys.exit(main())
