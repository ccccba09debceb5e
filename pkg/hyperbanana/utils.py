import os
from datetime import datetime
from os import getenv, makedirs, path
from tempfile import mkstemp
from typing import Optional
from uuid import uuid4


def create_ticket() -> str:
    ticket = str(uuid4())
    return ticket


def mkdir(folder_path: str) -> None:
    """Creates recursively the path, ignoring warnings for existing directories."""
    try:
        makedirs(folder_path)
    except OSError:
        pass


def get_output_dir() -> Optional[str]:
    """Return the directory reports are stored under, if configured"""
    return getenv('OUTPUT_DIR') or None


def check_directory_writable(d):
    fd, file_name = mkstemp(None, None, d)
    os.close(fd)
    os.unlink(file_name)


def save_report(content: str, ticket: str, output_dir: Optional[str] = None,
                filename: str = 'report.json') -> Optional[str]:
    """Store a report under <output_dir>/<yymmdd>/<ticket>/ and return its path."""
    output_dir = output_dir or get_output_dir()
    if output_dir is None:
        return None
    rel_path = path.join(datetime.now().strftime("%y%m%d"), ticket)
    output_path = path.join(output_dir, rel_path)
    mkdir(output_path)
    filepath = path.join(output_path, filename)
    with open(filepath, 'w') as fp:
        fp.write(content)
    return filepath
