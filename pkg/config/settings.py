# config/settings.py
import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

PROJECT_ROOT = Path(__file__).resolve().parent.parent


def _flag(name: str, default: str = "false") -> bool:
    return os.getenv(name, default).strip().lower() in ("1", "true", "yes", "on")


class Settings:
    CACHE_DIR = os.getenv(
        'TURANCERT_CACHE_DIR',
        str(Path(os.getenv('XDG_CACHE_HOME', str(Path.home() / '.cache'))) / 'turancert'),
    )
    ALLOW_NETWORK = _flag('TURANCERT_ALLOW_NETWORK')
    START_PRECISION = int(os.getenv('TURANCERT_START_PRECISION', '64'))
    PRECISION_CAP = int(os.getenv('TURANCERT_PRECISION_CAP', '4096'))
    EVAL_BUDGET = int(os.getenv('TURANCERT_EVAL_BUDGET', '24'))
    LOG_LEVEL = os.getenv('TURANCERT_LOG_LEVEL', 'INFO')
    OEIS_URL = os.getenv('TURANCERT_OEIS_URL', 'https://oeis.org')
    HTTP_TIMEOUT = float(os.getenv('TURANCERT_HTTP_TIMEOUT', '30'))
    SPEC_DIR = os.getenv('TURANCERT_SPEC_DIR', str(PROJECT_ROOT / 'data' / 'specs'))
    BFILE_DIR = os.getenv('TURANCERT_BFILE_DIR', str(PROJECT_ROOT / 'data' / 'bfiles'))
    API_HOST = os.getenv('TURANCERT_API_HOST', '127.0.0.1')
    API_PORT = int(os.getenv('TURANCERT_API_PORT', '8000'))
