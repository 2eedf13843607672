"""Per-session UI preference documents, stored byte-exact on disk.

The service treats the payload as opaque bytes; whatever schema the
client uses is its own business.  Writes are atomic (temp file + rename)
so a concurrent reader sees either the old or the new document, never a
torn one.
"""

from __future__ import annotations

import os
import re
import tempfile
from pathlib import Path

SESSION_PATTERN = re.compile(r"[A-Za-z0-9_-]{1,64}\Z")
MAX_PREFS_BYTES = 16384


class PreferencesStore:
    def __init__(self, data_dir: str | os.PathLike):
        self._dir = Path(data_dir) / "prefs"
        self._dir.mkdir(parents=True, exist_ok=True)

    @staticmethod
    def valid_session(session: str) -> bool:
        return bool(SESSION_PATTERN.match(session))

    def _path(self, session: str) -> Path:
        if not self.valid_session(session):
            raise ValueError(f"invalid session identifier {session!r}")
        return self._dir / f"{session}.json"

    def get(self, session: str) -> bytes | None:
        """Stored payload bytes, or None when the session has none."""
        path = self._path(session)
        try:
            return path.read_bytes()
        except FileNotFoundError:
            return None

    def put(self, session: str, payload: bytes) -> bool:
        """Store the payload byte-exact; True when this created the entry,
        False when it overwrote an existing one."""
        if len(payload) > MAX_PREFS_BYTES:
            raise ValueError(
                f"preferences payload exceeds {MAX_PREFS_BYTES} bytes"
            )
        path = self._path(session)
        created = not path.exists()
        fd, tmp_name = tempfile.mkstemp(dir=self._dir, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(payload)
            os.replace(tmp_name, path)
        except BaseException:
            try:
                os.unlink(tmp_name)
            except FileNotFoundError:
                pass
            raise
        return created
