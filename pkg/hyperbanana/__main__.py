#!/usr/bin/env python
import logging
import logging.config
import os

# Configure logging before loading the command modules


def configure_logging() -> None:
    config_file = os.getenv('LOGGING_FILE_CONFIG')
    if config_file:
        logging.config.fileConfig(config_file, disable_existing_loggers=False)
    else:
        logging.basicConfig(level=os.getenv('LOGGING_ROOT_LEVEL', 'WARNING'),
                            format='%(asctime)s %(levelname)s %(name)s: %(message)s')


def main() -> None:
    configure_logging()
    from hyperbanana.cli import main as cli_main
    cli_main()


if __name__ == '__main__':
    main()
