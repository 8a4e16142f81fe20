"""On-disk cache of seed expansions.

Each artifact is a JSON file ``{name}_N{prec}.json`` holding the payload and
a SHA-256 checksum of its canonical serialization.  Writes go to a temporary
file that is renamed into place; a ``.lock`` file serializes writers.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import time
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path

ENV_VAR = "SIEGELCOV_CACHE"


class CacheError(RuntimeError):
    pass


class ChecksumMismatch(CacheError):
    pass


def default_dir():
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "siegelcov"


def _canonical(payload):
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def checksum(payload):
    return hashlib.sha256(_canonical(payload).encode()).hexdigest()


@dataclass(frozen=True)
class CacheEntry:
    name: str
    prec: int
    checksum: str
    path: Path


class Cache:
    def __init__(self, root=None, lock_timeout=60.0):
        self.root = Path(root) if root is not None else default_dir()
        self.lock_timeout = lock_timeout

    def path(self, name, prec):
        return self.root / f"{name}_N{prec}.json"

    @contextmanager
    def lock(self):
        self.root.mkdir(parents=True, exist_ok=True)
        lock = self.root / ".lock"
        deadline = time.monotonic() + self.lock_timeout
        while True:
            try:
                fd = os.open(lock, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
                break
            except FileExistsError:
                if time.monotonic() > deadline:
                    raise CacheError(f"cache lock {lock} held for more than {self.lock_timeout}s")
                time.sleep(0.05)
        try:
            os.write(fd, str(os.getpid()).encode())
            yield
        finally:
            os.close(fd)
            try:
                os.unlink(lock)
            except FileNotFoundError:
                pass

    def write(self, name, prec, payload):
        doc = {"artifact": name, "prec": int(prec), "checksum": checksum(payload),
               "payload": payload}
        target = self.path(name, prec)
        with self.lock():
            fd, tmp = tempfile.mkstemp(dir=self.root, prefix=f".{name}_", suffix=".tmp")
            try:
                with os.fdopen(fd, "w") as fh:
                    json.dump(doc, fh, sort_keys=True, separators=(",", ":"))
                    fh.flush()
                    os.fsync(fh.fileno())
                os.replace(tmp, target)
            except BaseException:
                if os.path.exists(tmp):
                    os.unlink(tmp)
                raise
        return CacheEntry(name, int(prec), doc["checksum"], target)

    def entries(self, name):
        if not self.root.is_dir():
            return []
        out = []
        for p in self.root.glob(f"{name}_N*.json"):
            try:
                prec = int(p.stem.rsplit("_N", 1)[1])
            except (IndexError, ValueError):
                continue
            out.append((prec, p))
        return sorted(out)

    def read(self, name, prec):
        """Payload of the smallest cached artifact with precision ``>= prec`` (or ``None``)."""
        for have, p in self.entries(name):
            if have < prec:
                continue
            with open(p) as fh:
                doc = json.load(fh)
            if doc.get("artifact") != name or int(doc.get("prec", -1)) != have:
                raise CacheError(f"{p} does not describe {name} at precision {have}")
            if checksum(doc["payload"]) != doc.get("checksum"):
                raise ChecksumMismatch(f"checksum mismatch in {p}")
            return have, doc["payload"]
        return None
