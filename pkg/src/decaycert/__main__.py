"""Run the decay-cert command line with `python -m decaycert`."""

import sys

from decaycert.cli import main

sys.exit(main())
