"""Console entry point for the ``rainbow`` command."""

import sys
from typing import List, Optional

from rainbow_decomp.cli import main as cli_main


def main(argv: Optional[List[str]] = None) -> int:
    return cli_main(argv)


if __name__ == "__main__":
    sys.exit(main())
