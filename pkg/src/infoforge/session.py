"""File-backed session persistence with single-writer-per-session locking.

One JSON file per session under the store directory. Writers serialize on a
per-id lock; readers get whatever was last committed (last write wins).
Session ids are ULIDs, so listings sort by creation time.
"""

from __future__ import annotations

import errno
import json
import os
import threading
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .errors import NotFound, StorageFull

_CROCKFORD = "0123456789ABCDEFGHJKMNPQRSTVWXYZ"


def new_ulid() -> str:
    ts = int(time.time() * 1000) & (2**48 - 1)
    rand = int.from_bytes(os.urandom(10), "big")
    value = (ts << 80) | rand
    chars = []
    for _ in range(26):
        chars.append(_CROCKFORD[value & 31])
        value >>= 5
    return "".join(reversed(chars))


@dataclass
class Selections:
    layout_id: str | None = None
    vg_design_id: str | None = None
    connection_style: str | None = None
    connection_design_id: str | None = None
    palette_id: str | None = None


@dataclass
class Session:
    id: str
    markdown: str
    canvas: dict
    alpha: float = 0.5
    seed: int = 0
    pivot: dict | None = None
    sketch: dict | None = None
    selections: Selections = field(default_factory=Selections)
    created_at: str = ""
    updated_at: str = ""

    def as_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "Session":
        data = dict(data)
        data["selections"] = Selections(**data.get("selections", {}))
        return cls(**data)


def _now_iso(after: str = "") -> str:
    """Current UTC timestamp, strictly later than ``after``."""
    stamp = time.strftime("%Y-%m-%dT%H:%M:%S", time.gmtime()) + f".{time.time_ns() % 1_000_000_000:09d}Z"
    if after and stamp <= after:
        stamp = after[:-1] + "0Z"  # extend to sort strictly later
    return stamp


class SessionStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def _lock(self, session_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(session_id, threading.Lock())

    def _path(self, session_id: str) -> Path:
        return self.root / f"{session_id}.json"

    def create(self, session: Session) -> Session:
        session.created_at = session.updated_at = _now_iso()
        self._write(session)
        return session

    def load(self, session_id: str) -> Session:
        path = self._path(session_id)
        if not path.exists():
            raise NotFound(f"unknown session {session_id!r}")
        return Session.from_dict(json.loads(path.read_text(encoding="utf-8")))

    def update(self, session_id: str, mutate) -> Session:
        """Read-modify-write under the session's lock; ``mutate`` edits in place."""
        with self._lock(session_id):
            session = self.load(session_id)
            mutate(session)
            session.updated_at = _now_iso(after=session.updated_at)
            self._write(session)
            return session

    def _write(self, session: Session):
        payload = json.dumps(session.as_dict(), sort_keys=True, indent=1)
        tmp = self._path(session.id).with_suffix(".tmp")
        try:
            tmp.write_text(payload, encoding="utf-8")
            tmp.replace(self._path(session.id))
        except OSError as exc:
            if exc.errno == errno.ENOSPC:
                raise StorageFull("session store disk full") from exc
            raise
