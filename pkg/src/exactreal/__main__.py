"""python -m exactreal delegates to the command-line interface."""

import sys

from exactreal.cli import main

if __name__ == "__main__":
    sys.exit(main())
