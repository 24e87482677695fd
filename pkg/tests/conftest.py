import os
import sys

import pytest

# File logging off before any project module creates its logger
os.environ["PRON_LOG_TO_FILE"] = "false"

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from Lexicon import parse_lexicon
from PhoneSet import default_phone_set

PROJECT_ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), '..'))
SAMPLE_DIR = os.path.join(PROJECT_ROOT, 'data', 'sample')

SMALL_LEXICON = """\
;;; test dictionary
AN  AE1 N
AND  AE1 N D
AND(2)  AH0 N D
DREAM  D R IY1 M
I  AY1
LOVE  L AH1 V
MAKER  M EY1 K ER0
OCEANS  OW1 SH AH0 N Z
SUN  S AH1 N
YOU  Y UW1
"""


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in ("PRON_TOPN", "PRON_WORKERS", "PRON_PHONESET"):
        monkeypatch.delenv(name, raising=False)


@pytest.fixture
def phone_set():
    return default_phone_set()


@pytest.fixture
def small_lexicon():
    return parse_lexicon(SMALL_LEXICON)


@pytest.fixture
def sample_dir():
    return SAMPLE_DIR


@pytest.fixture
def write_file(tmp_path):
    """Write `content` to tmp_path/name and return the path as a string."""
    def _write(name: str, content: str) -> str:
        path = tmp_path / name
        path.write_text(content, encoding="utf-8")
        return str(path)
    return _write
