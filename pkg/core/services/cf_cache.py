"""
Central Function Caching Functions

Persists the recurrence engine's memo cache as a versioned binary file:
magic b"CFN1", a u32 record count, then per record a u8 kind, a u8 label
length, u16 label entries, a u32 payload length and the JSON polynomial.
"""

import logging
import struct
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

from core.algebra.exactmath import Polynomial, PolynomialParseError, poly_parse, poly_serialize
from core.config import get_settings
from core.services.recurrence_service import RecurrenceEngine, get_default_engine

logger = logging.getLogger(__name__)

MAGIC = b"CFN1"
CACHE_FILENAME = "central_functions.cfn"

KIND_CODES = {"rank3": 3, "barbell": 2}
KIND_NAMES = {code: name for name, code in KIND_CODES.items()}

CacheKey = Tuple[str, Tuple[int, ...]]


class CacheFormatError(ValueError):
    """Raised internally when a cache file is truncated or malformed"""
    pass


def get_cache_key(kind: str, label: Tuple[int, ...]) -> CacheKey:
    """Generate a unique cache key for a computed function"""
    if kind not in KIND_CODES:
        raise ValueError(f"Unknown cache kind: {kind}")
    return (kind, tuple(int(v) for v in label))


def get_cache_path(cache_dir: Optional[Path] = None) -> Optional[Path]:
    cache_dir = cache_dir if cache_dir is not None else get_settings().cache_dir
    if cache_dir is None:
        return None
    return Path(cache_dir) / CACHE_FILENAME


def get_cached_function(kind: str, label: Tuple[int, ...], engine: Optional[RecurrenceEngine] = None) -> Optional[Polynomial]:
    """Retrieve a memoized function from the engine cache"""
    engine = engine or get_default_engine()
    try:
        poly = engine.export_cache().get(get_cache_key(kind, label))
        if poly is not None:
            logger.debug(f"Cache hit for {kind} {label}")
        return poly
    except Exception as e:
        logger.error(f"Error retrieving cached function: {e}")
        return None


def cache_function(kind: str, label: Tuple[int, ...], poly: Polynomial, engine: Optional[RecurrenceEngine] = None) -> bool:
    """Store a function in the engine cache"""
    engine = engine or get_default_engine()
    try:
        return engine.import_cache({get_cache_key(kind, label): poly}) == 1
    except Exception as e:
        logger.error(f"Error caching function: {e}")
        return False


# ============================================================================
# Binary file format
# ============================================================================

def encode_records(entries: Dict[CacheKey, Polynomial]) -> bytes:
    chunks = [MAGIC, struct.pack("<I", len(entries))]
    for (kind, label), poly in sorted(entries.items()):
        payload = poly_serialize(poly, "json")
        chunks.append(struct.pack("<BB", KIND_CODES[kind], len(label)))
        chunks.append(struct.pack(f"<{len(label)}H", *label))
        chunks.append(struct.pack("<I", len(payload)))
        chunks.append(payload)
    return b"".join(chunks)


def decode_records(data: bytes) -> Dict[CacheKey, Polynomial]:
    if data[:4] != MAGIC:
        raise CacheFormatError("Bad magic bytes")
    try:
        (count,) = struct.unpack_from("<I", data, 4)
        offset = 8
        entries: Dict[CacheKey, Polynomial] = {}
        for _ in range(count):
            kind_code, length = struct.unpack_from("<BB", data, offset)
            offset += 2
            label = struct.unpack_from(f"<{length}H", data, offset)
            offset += 2 * length
            (size,) = struct.unpack_from("<I", data, offset)
            offset += 4
            payload = data[offset:offset + size]
            if len(payload) != size:
                raise CacheFormatError("Truncated payload")
            offset += size
            if kind_code not in KIND_NAMES:
                raise CacheFormatError(f"Unknown record kind {kind_code}")
            entries[(KIND_NAMES[kind_code], tuple(label))] = poly_parse(payload)
    except (struct.error, UnicodeDecodeError, PolynomialParseError) as e:
        raise CacheFormatError(str(e)) from e
    return entries


def load_cache_file(engine: Optional[RecurrenceEngine] = None, cache_dir: Optional[Path] = None) -> int:
    """Load persisted functions into the engine; returns the number loaded"""
    engine = engine or get_default_engine()
    path = get_cache_path(cache_dir)
    if path is None or not path.exists():
        return 0
    try:
        entries = decode_records(path.read_bytes())
        count = engine.import_cache(entries)
        logger.info(f"Loaded {count} cached functions from {path}")
        return count
    except CacheFormatError as e:
        logger.warning(f"Ignoring corrupt cache file {path}: {e}")
        return 0
    except OSError as e:
        logger.error(f"Error reading cache file: {e}")
        return 0


def save_cache_file(engine: Optional[RecurrenceEngine] = None, cache_dir: Optional[Path] = None) -> bool:
    """Write the engine cache to disk atomically"""
    engine = engine or get_default_engine()
    path = get_cache_path(cache_dir)
    if path is None:
        return False
    try:
        entries = engine.export_cache()
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_bytes(encode_records(entries))
        tmp.replace(path)
        logger.info(f"Saved {len(entries)} cached functions to {path}")
        return True
    except Exception as e:
        logger.error(f"Error saving cache file: {e}")
        return False


def clear_cache(engine: Optional[RecurrenceEngine] = None, cache_dir: Optional[Path] = None) -> int:
    """Empty the engine cache and remove the cache file; returns entries dropped"""
    engine = engine or get_default_engine()
    try:
        count = engine.cache_size()
        engine.clear()
        path = get_cache_path(cache_dir)
        if path is not None and path.exists():
            path.unlink()
        logger.info(f"Cleared {count} cached functions")
        return count
    except Exception as e:
        logger.error(f"Error clearing cache: {e}")
        return 0


def get_cache_statistics(engine: Optional[RecurrenceEngine] = None, cache_dir: Optional[Path] = None) -> Dict[str, Any]:
    """Get statistics about the function cache"""
    engine = engine or get_default_engine()
    try:
        entries = engine.export_cache()
        by_kind: Dict[str, int] = {}
        by_order: Dict[int, int] = {}
        for kind, label in entries:
            by_kind[kind] = by_kind.get(kind, 0) + 1
            if kind == "rank3":
                order = sum(label[:3])
                by_order[order] = by_order.get(order, 0) + 1
        path = get_cache_path(cache_dir)
        return {
            "total_entries": len(entries),
            "by_kind": by_kind,
            "rank3_by_order": dict(sorted(by_order.items())),
            "total_terms": sum(len(poly) for poly in entries.values()),
            "file": str(path) if path else None,
            "file_bytes": path.stat().st_size if path and path.exists() else 0,
        }
    except Exception as e:
        logger.error(f"Error getting cache statistics: {e}")
        return {"error": str(e)}
