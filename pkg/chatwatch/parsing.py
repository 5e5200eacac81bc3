from typing import List, Optional

from chatwatch.cwlogger import enable_file_logging, logger, set_verbosity
from chatwatch.modules.chat import SessionError
from chatwatch.modules.services import ConfigError, StreamOrderError

from .parser_factory import new_parser

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_STREAM_ORDER = 3
EXIT_IO = 4


def process_command(argv: Optional[List[str]] = None) -> int:
    """
    Parse ``argv`` (default ``sys.argv[1:]``), run the chosen subcommand and
    map its outcome to an exit code.

    Returns
    -------
    int
        0 on success, 2 for configuration errors and invalid match
        sessions, 3 for an out-of-order
        prediction stream, 4 for I/O errors and 1 for anything else.
    """
    parser = new_parser()
    _args = vars(parser.parse_args(argv))

    set_verbosity(_args.pop("verbose", False))
    if _args.pop("log_file", False):
        logger.debug(f"Logging to {enable_file_logging()}")

    func = _args.pop("func", None)
    if func is None:
        parser.print_help()
        return EXIT_CONFIG

    try:
        ret = func(_args)
    except ConfigError as e:
        logger.error(f"Configuration error! {e}")
        return EXIT_CONFIG
    except SessionError as e:
        logger.error(f"Invalid corpus! {e}")
        return EXIT_CONFIG
    except StreamOrderError as e:
        logger.error(f"Stream error! {e}")
        return EXIT_STREAM_ORDER
    except OSError as e:
        logger.error(f"I/O error! {e}")
        return EXIT_IO
    except Exception as e:
        logger.error(f"Error! {e}")
        logger.debug("Traceback", exc_info=True)
        return EXIT_FAILURE

    logger.debug(f"Command return: {ret}")
    return ret
