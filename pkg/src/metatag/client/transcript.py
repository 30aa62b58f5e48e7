"""On-disk transcript store: content-addressed responses plus a manifest.

Every recorded response lives in its own file named by the request
fingerprint; the manifest maps fingerprints to relative paths.  Writes are
serialized by an internal lock so concurrent workers can record safely.
"""

from __future__ import annotations

import json
import threading
from pathlib import Path

from .model import ChatResponse

MANIFEST_NAME = "manifest.json"


class TranscriptStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._manifest: dict[str, str] = {}
        manifest_path = self.root / MANIFEST_NAME
        if manifest_path.exists():
            self._manifest = json.loads(manifest_path.read_text(encoding="utf-8"))

    def __len__(self) -> int:
        return len(self._manifest)

    def __contains__(self, fingerprint: str) -> bool:
        return fingerprint in self._manifest

    def get(self, fingerprint: str) -> ChatResponse | None:
        rel = self._manifest.get(fingerprint)
        if rel is None:
            return None
        data = json.loads((self.root / rel).read_text(encoding="utf-8"))
        return ChatResponse.from_json(data)

    def put(self, fingerprint: str, response: ChatResponse) -> None:
        with self._lock:
            rel = f"{fingerprint}.json"
            (self.root / rel).write_text(
                json.dumps(response.to_json(), sort_keys=True, ensure_ascii=False),
                encoding="utf-8",
            )
            self._manifest[fingerprint] = rel
            self._write_manifest()

    def _write_manifest(self) -> None:
        tmp = self.root / (MANIFEST_NAME + ".tmp")
        tmp.write_text(
            json.dumps(self._manifest, sort_keys=True, indent=1), encoding="utf-8"
        )
        tmp.replace(self.root / MANIFEST_NAME)
