# services/oeis_service.py
import logging
import re
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import requests

from algebra.errors import InvalidOeisIdError, NetworkUnavailableError, OeisError
from config.settings import Settings
from services.sequence_service import PRecursiveSequence

logger = logging.getLogger(__name__)

OEIS_ID = re.compile(r"^A\d{6}$")

LOCAL = "local"
CACHE = "cache"
NETWORK = "network"


@dataclass(frozen=True)
class BFile:
    oeis_id: Optional[str]
    entries: Tuple[Tuple[int, int], ...]
    source: str = LOCAL

    def as_dict(self) -> Dict[int, int]:
        return dict(self.entries)

    def serialize(self) -> str:
        header = f"# {self.oeis_id}\n" if self.oeis_id else ""
        return header + "".join(f"{i} {v}\n" for i, v in self.entries)


@dataclass
class CrossValidationReport:
    oeis_id: Optional[str]
    confirmed: int
    mismatches: List[Dict[str, str]] = field(default_factory=list)
    lower: int = 0
    limit: Optional[int] = None

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_dict(self) -> Dict:
        return {
            "oeis_id": self.oeis_id,
            "confirmed": self.confirmed,
            "mismatches": self.mismatches,
            "lower": self.lower,
            "limit": self.limit,
            "ok": self.ok,
        }


def normalize_oeis_id(oeis_id: str) -> str:
    candidate = oeis_id.strip().upper()
    if candidate.startswith("B") and candidate[1:].isdigit():
        candidate = "A" + candidate[1:]
    if not OEIS_ID.match(candidate):
        raise InvalidOeisIdError(f"invalid OEIS id {oeis_id!r} (expected A followed by six digits)")
    return candidate


def parse_bfile(text: str, oeis_id: Optional[str] = None, source: str = LOCAL) -> BFile:
    entries: List[Tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) < 2:
            raise OeisError(f"line {lineno}: expected 'index value', got {raw!r}")
        try:
            index, value = int(parts[0]), int(parts[1])
        except ValueError:
            raise OeisError(f"line {lineno}: malformed entry {raw!r}") from None
        if entries and index <= entries[-1][0]:
            raise OeisError(f"line {lineno}: index {index} does not increase")
        entries.append((index, value))
    return BFile(oeis_id, tuple(entries), source)


def cross_validate(seq: PRecursiveSequence, bfile: BFile, limit: Optional[int] = None, lower: Optional[int] = None) -> CrossValidationReport:
    """Compare computed terms with the b-file on every shared index in [lower, limit]."""
    lower = seq.start if lower is None else max(lower, seq.start)
    report = CrossValidationReport(bfile.oeis_id, 0, lower=lower, limit=limit)
    for index, value in bfile.entries:
        if index < lower or (limit is not None and index > limit):
            continue
        computed = seq.term(index)
        if computed == value:
            report.confirmed += 1
        else:
            report.mismatches.append({"index": str(index), "expected": str(value), "actual": str(computed)})
    logger.info(
        "%s vs %s: %d confirmed, %d mismatches", seq.name, bfile.oeis_id, report.confirmed, len(report.mismatches)
    )
    return report


class OeisClient:
    """b-file access: local fixtures, then the on-disk cache, then (opt-in) the network."""

    _locks: Dict[str, threading.Lock] = {}
    _locks_guard = threading.Lock()

    def __init__(self, cache_dir: Optional[str] = None, allow_network: Optional[bool] = None,
                 base_url: Optional[str] = None, timeout: Optional[float] = None,
                 fixture_dir: Optional[str] = None):
        self.cache_dir = Path(cache_dir or Settings.CACHE_DIR)
        self.allow_network = Settings.ALLOW_NETWORK if allow_network is None else allow_network
        self.base_url = (base_url or Settings.OEIS_URL).rstrip("/")
        self.timeout = timeout or Settings.HTTP_TIMEOUT
        self.fixture_dir = Path(fixture_dir or Settings.BFILE_DIR)

    @classmethod
    def _lock_for(cls, oeis_id: str) -> threading.Lock:
        with cls._locks_guard:
            return cls._locks.setdefault(oeis_id, threading.Lock())

    @staticmethod
    def _filename(oeis_id: str) -> str:
        return f"b{oeis_id[1:]}.txt"

    def cache_path(self, oeis_id: str) -> Path:
        return self.cache_dir / self._filename(normalize_oeis_id(oeis_id))

    def local_bfile(self, oeis_id: str) -> Optional[BFile]:
        oeis_id = normalize_oeis_id(oeis_id)
        path = self.fixture_dir / self._filename(oeis_id)
        if not path.exists():
            return None
        return parse_bfile(path.read_text(), oeis_id, LOCAL)

    def fetch_bfile(self, oeis_id: str) -> BFile:
        oeis_id = normalize_oeis_id(oeis_id)
        path = self.cache_path(oeis_id)
        with self._lock_for(oeis_id):
            if path.exists():
                logger.debug("b-file %s served from cache %s", oeis_id, path)
                return parse_bfile(path.read_text(), oeis_id, CACHE)
            if not self.allow_network:
                raise NetworkUnavailableError(
                    f"{oeis_id} is not in the cache at {self.cache_dir} and network access is disabled"
                )
            url = f"{self.base_url}/{oeis_id}/{self._filename(oeis_id)}"
            logger.info("downloading %s", url)
            try:
                response = requests.get(url, timeout=self.timeout)
                response.raise_for_status()
            except requests.RequestException as exc:
                raise NetworkUnavailableError(f"cache miss for {oeis_id} and download failed: {exc}") from exc
            bfile = parse_bfile(response.text, oeis_id, NETWORK)
            path.parent.mkdir(parents=True, exist_ok=True)
            tmp = path.with_suffix(".part")
            tmp.write_text(response.text)
            tmp.replace(path)
            return bfile

    def resolve(self, oeis_id: str) -> BFile:
        return self.local_bfile(oeis_id) or self.fetch_bfile(oeis_id)


def fetch_bfile(oeis_id: str, cache_dir: Optional[str] = None, allow_network: Optional[bool] = None) -> BFile:
    return OeisClient(cache_dir=cache_dir, allow_network=allow_network).fetch_bfile(oeis_id)
