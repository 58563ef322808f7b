"""
Cache Manager for the terrain analysis engine.

This module provides the least-recently-used cache that the separation
solver uses to remember evaluations of assignments. Keys are the sorted tuples
of selected candidate ids; values are immutable evaluation records.

Requirements addressed:
- Repeated evaluations of the same assignment are served from memory
- Hit/miss statistics are reported with the solver statistics
"""

import logging
from collections import OrderedDict
from typing import Any, Callable, Dict, Hashable, Optional

logger = logging.getLogger(__name__)


class CacheEntry:
    """
    Represents a single cache entry with data and access metadata.
    """

    __slots__ = ("data", "access_count")

    def __init__(self, data: Any):
        self.data = data
        self.access_count = 0

    def access(self) -> Any:
        """
        Access the cached data and update access metadata.

        Returns:
            The cached data
        """
        self.access_count += 1
        return self.data


class LRUCache:
    """
    Least Recently Used (LRU) cache implementation.

    Automatically evicts least recently used entries when capacity is reached.
    """

    def __init__(self, capacity: int = 100):
        """
        Initialize LRU cache.

        Args:
            capacity: Maximum number of entries to store
        """
        if capacity < 1:
            raise ValueError("Cache capacity must be positive")
        self.capacity = capacity
        self.cache: "OrderedDict[Hashable, CacheEntry]" = OrderedDict()
        self._hits = 0
        self._misses = 0
        self._evictions = 0

    def __len__(self) -> int:
        return len(self.cache)

    def __contains__(self, key: Hashable) -> bool:
        return key in self.cache

    def get(self, key: Hashable) -> Optional[Any]:
        """
        Get value from cache.

        Args:
            key: Cache key

        Returns:
            Cached value or None if not found
        """
        entry = self.cache.get(key)
        if entry is None:
            self._misses += 1
            return None

        # Move to end (most recently used)
        self.cache.move_to_end(key)
        self._hits += 1
        return entry.access()

    def set(self, key: Hashable, value: Any) -> None:
        """
        Set value in cache.

        Args:
            key: Cache key
            value: Value to cache
        """
        if key in self.cache:
            del self.cache[key]

        if len(self.cache) >= self.capacity:
            self.cache.popitem(last=False)
            self._evictions += 1

        self.cache[key] = CacheEntry(value)

    def get_or_compute(self, key: Hashable, compute: Callable[[], Any]) -> Any:
        """
        Return the cached value for key, computing and storing it on a miss.

        Args:
            key: Cache key
            compute: Zero-argument function producing the value

        Returns:
            Cached or freshly computed value
        """
        value = self.get(key)
        if value is None:
            value = compute()
            self.set(key, value)
        return value

    def delete(self, key: Hashable) -> bool:
        """
        Delete entry from cache.

        Returns:
            True if entry was deleted, False if not found
        """
        if key in self.cache:
            del self.cache[key]
            return True
        return False

    def clear(self) -> None:
        """Clear all entries and statistics."""
        count = len(self.cache)
        self.cache.clear()
        self._hits = 0
        self._misses = 0
        self._evictions = 0
        logger.debug(f"Cache cleared ({count} entries removed)")

    @property
    def hit_rate(self) -> float:
        """Fraction of lookups served from the cache (0.0 before any lookup)."""
        total = self._hits + self._misses
        return self._hits / total if total else 0.0

    def get_stats(self) -> Dict[str, Any]:
        """
        Get cache statistics.

        Returns:
            Dictionary with cache statistics
        """
        return {
            "size": len(self.cache),
            "capacity": self.capacity,
            "hits": self._hits,
            "misses": self._misses,
            "evictions": self._evictions,
            "hit_rate": round(self.hit_rate * 100, 2),
        }
