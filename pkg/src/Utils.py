import os
import sys
from typing import Optional

from errors import InputEncodingError

MATRIX_SUFFIX = ".matrix.csv"


def read_text_file(file_path: str) -> str:
    """UTF-8 file contents; undecodable bytes raise InputEncodingError naming the file."""
    try:
        with open(file_path, "r", encoding="utf-8") as file:
            return file.read()
    except UnicodeDecodeError as e:
        raise InputEncodingError(file_path, e) from None


def save_string_to_file(content: str, file_path: str):
    directory = os.path.dirname(os.path.abspath(file_path))
    os.makedirs(directory, exist_ok=True)
    # Open the file in write mode and save the string
    with open(file_path, 'w', encoding='utf-8') as file:
        file.write(content)


def write_output(content: str, file_path: Optional[str] = None):
    """Write to `file_path`, or to stdout when no path is given."""
    if file_path:
        save_string_to_file(content, file_path)
    else:
        sys.stdout.write(content)
        if content and not content.endswith("\n"):
            sys.stdout.write("\n")


def matrix_csv_path(file_path: str) -> str:
    """Companion path for the category matrix: report.csv -> report.matrix.csv"""
    root, _ = os.path.splitext(file_path)
    return root + MATRIX_SUFFIX
