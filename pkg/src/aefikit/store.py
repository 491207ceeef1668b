"""Append-only record store backed by a JSON-lines file.

One line per stored record, ids strictly increasing in file order.
Appends are serialized through a lock and flushed to disk before the new
id is returned; existing lines are never rewritten.
"""

import json
import os
import threading
from dataclasses import dataclass
from datetime import datetime, timezone

from .errors import StoreError


@dataclass(frozen=True)
class StoredRecord:
    id: int
    received_at: str
    features: dict
    outcome: str | None

    def to_json_dict(self) -> dict:
        return {
            "id": self.id,
            "received_at": self.received_at,
            "features": self.features,
            "outcome": self.outcome,
        }


class RecordStore:
    def __init__(self, path):
        self.path = str(path)
        self._lock = threading.Lock()
        self._records: list[StoredRecord] = []
        self._load()

    def _load(self):
        if not os.path.exists(self.path):
            return
        last_id = 0
        with open(self.path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    doc = json.loads(line)
                    record = StoredRecord(
                        id=int(doc["id"]),
                        received_at=doc["received_at"],
                        features=dict(doc["features"]),
                        outcome=doc.get("outcome"),
                    )
                except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                    raise StoreError(f"{self.path}:{lineno}: corrupt record line: {exc}") from exc
                if record.id <= last_id:
                    raise StoreError(
                        f"{self.path}:{lineno}: ids must be strictly increasing"
                    )
                last_id = record.id
                self._records.append(record)

    def append(self, features: dict, outcome: str | None = None) -> int:
        """Durably append one record; returns its id (previous max + 1)."""
        with self._lock:
            new_id = (self._records[-1].id + 1) if self._records else 1
            record = StoredRecord(
                id=new_id,
                received_at=datetime.now(timezone.utc).isoformat(),
                features=dict(features),
                outcome=outcome,
            )
            line = json.dumps(record.to_json_dict(), sort_keys=True, allow_nan=False)
            try:
                with open(self.path, "a", encoding="utf-8") as fh:
                    fh.write(line + "\n")
                    fh.flush()
                    os.fsync(fh.fileno())
            except OSError as exc:
                raise StoreError(f"cannot append to {self.path}: {exc}") from exc
            self._records.append(record)
            return new_id

    def list(self, limit: int = 50, offset: int = 0) -> tuple[list[StoredRecord], int]:
        """Newest-first page of records plus the total count."""
        if limit < 0 or offset < 0:
            raise StoreError("limit and offset must be nonnegative")
        with self._lock:
            newest_first = list(reversed(self._records))
            return newest_first[offset : offset + limit], len(self._records)

    @property
    def count(self) -> int:
        with self._lock:
            return len(self._records)
