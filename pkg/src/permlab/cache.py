"""Persistent count tables.

One JSON document per line in ``<cache_dir>/<pattern>.jsonl``::

    {"q": "231", "n": 6, "r": 0, "count": "132"}
    {"q": "231", "n": 6, "r": "overflow", "count": "0"}

A row for ``n`` is the buckets ``r = 0..R`` plus one overflow line.  Counts
are decimal strings.  Writers hold a lock file and replace the table file
atomically, so concurrent processes never observe a partial table.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

from filelock import FileLock

from .enumeration import DEFAULT_BUDGET, Distribution, occurrence_distribution
from .perm import Permutation, as_permutation

log = logging.getLogger(__name__)

OVERFLOW = "overflow"


@dataclass
class CountTable:
    pattern: Permutation
    r_max: int
    rows: dict[int, Distribution] = field(default_factory=dict)
    computed: list[int] = field(default_factory=list)

    def entry(self, n: int, r: int | str) -> int:
        row = self.rows[n]
        if r == OVERFLOW:
            return row.overflow
        return row[int(r)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "r", "count"])
        for n in sorted(self.rows):
            row = self.rows[n]
            for r in range(self.r_max + 1):
                writer.writerow([n, r, row[r]])
            writer.writerow([n, OVERFLOW, row.overflow])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "pattern": str(self.pattern),
            "r_max": self.r_max,
            "rows": {
                str(n): {**{str(r): str(self.rows[n][r]) for r in range(self.r_max + 1)},
                         OVERFLOW: str(self.rows[n].overflow)}
                for n in sorted(self.rows)
            },
        }


def cache_path(cache_dir: str | os.PathLike, q: Permutation) -> Path:
    return Path(cache_dir) / f"{q}.jsonl"


def _read(path: Path, q: Permutation) -> dict[int, Distribution]:
    """Parse cached rows; rows that are malformed or fail ``sum == n!`` are dropped."""
    if not path.exists():
        return {}
    raw: dict[int, dict] = {}
    bad: set[int] = set()
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        log.warning("cannot read cache %s: %s; recomputing", path, exc)
        return {}
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            doc = json.loads(line)
        except ValueError:
            # the affected row loses a bucket and fails the consistency check below
            log.warning("unparseable line %d in %s; skipped", lineno, path)
            continue
        try:
            n = int(doc["n"])
            if doc["q"] != str(q):
                raise ValueError(f"pattern {doc['q']!r} in table for {q}")
            count = int(doc["count"])
            r = doc["r"]
            bucket = raw.setdefault(n, {})
            if r == OVERFLOW:
                bucket[OVERFLOW] = count
            else:
                bucket[int(r)] = count
        except (ValueError, KeyError, TypeError) as exc:
            log.warning("corrupt line %d in %s (%s); affected rows will be recomputed", lineno, path, exc)
            try:
                bad.add(int(doc["n"]))
            except (ValueError, KeyError, TypeError):
                continue
    rows = {}
    for n, bucket in raw.items():
        if n in bad or OVERFLOW not in bucket:
            continue
        overflow = bucket.pop(OVERFLOW)
        r_cap = max(bucket) if bucket else -1
        if sorted(bucket) != list(range(r_cap + 1)) or sum(bucket.values()) + overflow != math.factorial(n):
            log.warning("inconsistent row n=%d in %s; recomputing", n, path)
            continue
        counts = {r: c for r, c in bucket.items() if c}
        rows[n] = Distribution(q, n, r_cap, counts, overflow)
    return rows


def _lines(q: Permutation, row: Distribution) -> list[str]:
    out = []
    for r in range(row.r_cap + 1):
        out.append(json.dumps({"q": str(q), "n": row.n, "r": r, "count": str(row[r])}))
    out.append(json.dumps({"q": str(q), "n": row.n, "r": OVERFLOW, "count": str(row.overflow)}))
    return out


def _write(path: Path, q: Permutation, fresh: dict[int, Distribution]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with FileLock(str(path) + ".lock"):
        rows = _read(path, q)
        for n, row in fresh.items():
            old = rows.get(n)
            if old is None or (old.overflow and old.r_cap < row.r_cap):
                rows[n] = row
        lines = [line for n in sorted(rows) for line in _lines(q, rows[n])]
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write("\n".join(lines) + "\n")
            os.replace(tmp, path)
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise


def _usable(row: Distribution | None, r_max: int) -> bool:
    return row is not None and (row.overflow == 0 or row.r_cap >= r_max)


def _normalize(row: Distribution, r_max: int) -> Distribution:
    if row.r_cap is None or row.r_cap >= r_max or row.overflow == 0:
        counts = {r: c for r, c in row.counts.items() if r <= r_max}
        overflow = row.overflow + sum(c for r, c in row.counts.items() if r > r_max)
        return Distribution(row.pattern, row.n, r_max, counts, overflow)
    raise ValueError("row too narrow")


def table_build(
    q: Permutation | str,
    n_max: int,
    r_max: int,
    cache_dir: str | os.PathLike | None = None,
    *,
    n_min: int = 1,
    threads: int = 1,
    budget: int = DEFAULT_BUDGET,
) -> CountTable:
    """Counts ``|S_{n,r}(q)|`` for ``n_min <= n <= n_max`` and ``r <= r_max``
    (plus an overflow bucket), reusing and extending the on-disk cache."""
    q = as_permutation(q)
    if r_max < 0 or n_max < 0:
        raise ValueError("n_max and r_max must be nonnegative")
    cached = _read(cache_path(cache_dir, q), q) if cache_dir is not None else {}
    table = CountTable(q, r_max)
    fresh = {}
    for n in range(n_min, n_max + 1):
        row = cached.get(n)
        if not _usable(row, r_max):
            row = occurrence_distribution(q, n, r_max, threads=threads, budget=budget)
            fresh[n] = row
            table.computed.append(n)
        table.rows[n] = _normalize(row, r_max)
    if fresh and cache_dir is not None:
        _write(cache_path(cache_dir, q), q, fresh)
    return table
