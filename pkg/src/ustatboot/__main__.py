"""Entry point for ``python -m ustatboot``."""

import sys

from ustatboot.cli import main

if __name__ == "__main__":
    sys.exit(main())
