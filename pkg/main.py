"""Command-line entry point for the knot invariant toolkit."""

import sys

from src.cli import run
from src.logger_config import logger


def main() -> int:
    """Run one CLI command; the JSON result goes to stdout, logs to stderr."""
    logger.debug("=" * 80)
    logger.debug(f"knotyy {' '.join(sys.argv[1:])}")
    logger.debug("=" * 80)
    code = run(sys.argv[1:])
    logger.debug(f"exit code {code}")
    return code


if __name__ == "__main__":
    sys.exit(main())
