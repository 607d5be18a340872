"""
Union-Find Module
Disjoint-set forest that remembers the elder (smallest-index) member of every set
"""
from typing import Optional, Tuple

import numpy as np


class UnionFind:
    """
    Union-find with union by rank and path compression over the integers 0..n-1.

    Besides the usual leader, each set tracks its elder: the smallest index it
    contains. Merging two sets reports which elder survives and which dies.
    """

    def __init__(self, size: int):
        """
        Initialize a forest of singleton sets.

        Args:
            size: Number of elements
        """
        self._leader = np.arange(size, dtype=np.int64)
        self._rank = np.zeros(size, dtype=np.int64)
        self._elder = np.arange(size, dtype=np.int64)
        self.n_clusters = size

    def __repr__(self) -> str:
        return f"UnionFind: contains {self.n_clusters} clusters."

    def __len__(self) -> int:
        return int(self._leader.shape[0])

    def find(self, element: int) -> int:
        """
        Locate the leader of the set containing element.

        Args:
            element: Element index

        Returns:
            Leader index
        """
        leader = self._leader
        root = int(element)
        while leader[root] != root:
            root = int(leader[root])
        # path compression
        node = int(element)
        while leader[node] != root:
            leader[node], node = root, int(leader[node])
        return root

    def union(self, a: int, b: int) -> Optional[Tuple[int, int]]:
        """
        Merge the sets containing a and b.

        Args:
            a: First element
            b: Second element

        Returns:
            Tuple of (surviving elder, dying elder), or None if already joined
        """
        root_a, root_b = self.find(a), self.find(b)
        if root_a == root_b:
            return None
        elder_a, elder_b = int(self._elder[root_a]), int(self._elder[root_b])
        survivor, dying = (elder_a, elder_b) if elder_a < elder_b else (elder_b, elder_a)

        if self._rank[root_b] > self._rank[root_a]:
            root_a, root_b = root_b, root_a
        if self._rank[root_a] == self._rank[root_b]:
            self._rank[root_a] += 1
        self._leader[root_b] = root_a
        self._elder[root_a] = survivor
        self.n_clusters -= 1
        return survivor, dying
