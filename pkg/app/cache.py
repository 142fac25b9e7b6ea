import hashlib
import json
import logging
from pathlib import Path
from typing import Optional

from pydantic import ValidationError

from app.config import get_settings
from app.schemas.moments import MomentSeq

logger = logging.getLogger(__name__)


class MomentStore:
    """Noiseless moment sequences on disk, one JSON file per key."""

    def __init__(self, root: str):
        self.root = Path(root) if root else None
        if self.root is not None:
            self.root.mkdir(parents=True, exist_ok=True)

    @property
    def enabled(self) -> bool:
        return self.root is not None

    @staticmethod
    def key(model: str, initial_state: str, d: int) -> str:
        payload = json.dumps({"model": model, "initial_state": initial_state, "d": d}, sort_keys=True)
        return hashlib.sha256(payload.encode()).hexdigest()

    def get(self, key: str) -> Optional[MomentSeq]:
        if not self.enabled:
            return None
        path = self.root / f"{key}.json"
        if not path.exists():
            return None
        try:
            return MomentSeq.model_validate_json(path.read_text())
        except ValidationError:
            logger.warning(f"[Cache] ignoring unreadable entry {path.name}")
            return None

    def put(self, key: str, moments: MomentSeq):
        if not self.enabled:
            return
        path = self.root / f"{key}.json"
        tmp = path.with_suffix(".tmp")
        tmp.write_text(moments.model_dump_json())
        tmp.replace(path)
        logger.debug(f"[Cache] stored {path.name}")


_moment_store: MomentStore = None


def get_moment_store() -> MomentStore:
    global _moment_store
    if _moment_store is None:
        settings = get_settings()
        _moment_store = MomentStore(settings.cache_dir)
    return _moment_store
