"""Main entry point for the command line."""

import sys
from typing import List, Optional

from cli.router import create_parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = create_parser()
    args = parser.parse_args(argv)
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
