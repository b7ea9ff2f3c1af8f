import json
import logging
import sys
from typing import Optional, Sequence

from pydantic import ValidationError

from app.cli.routes import build_parser
from app.core.errors import SpdmdError
from app.utils import configure_logging

logger = logging.getLogger(__name__)


def _report(error: dict) -> int:
    sys.stderr.write(json.dumps(error) + "\n")
    return error["exit_code"]


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one CLI command and return its exit code"""
    args = build_parser().parse_args(argv)
    try:
        configure_logging(args.log_level)
        return args.handler(args)
    except SpdmdError as exc:
        logger.debug("command failed", exc_info=True)
        return _report(exc.to_dict())
    except ValidationError as exc:
        return _report({"error": "validation", "message": str(exc), "exit_code": 2})
    except OSError as exc:
        return _report({"error": "io", "message": str(exc), "exit_code": 2})


if __name__ == "__main__":
    sys.exit(main())
