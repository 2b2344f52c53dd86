"""Implicit d-ary min-heap with stable handles and node-visit accounting.

A *visit* is one node whose priority takes part in a comparison. Every
operation costs one visit for the node it starts from; sifting up adds one
per parent compared and sifting down adds one per child scanned. Reading the
root counts as a single visit.
"""

from __future__ import annotations


class HeapError(Exception):
    pass


class HeapNode:
    __slots__ = ("priority", "payload", "slot")

    def __init__(self, priority, payload, slot):
        self.priority = priority
        self.payload = payload
        self.slot = slot

    def __repr__(self):
        return f"HeapNode({self.priority!r}, {self.payload!r}, slot={self.slot})"


class DaryHeap:
    """Array-backed min-heap with branching factor ``arity``.

    ``push`` returns the node itself as a handle; it stays valid until the
    node is popped or removed. Payloads must be unique and hashable.
    Equal priorities are not reordered, so ties resolve by array position.
    """

    def __init__(self, arity=8):
        if arity < 2:
            raise ValueError("arity must be >= 2")
        self.arity = arity
        self.nodes: list[HeapNode] = []
        self.registry: dict = {}
        self.visits = 0

    def __len__(self):
        return len(self.nodes)

    def __bool__(self):
        return bool(self.nodes)

    def __contains__(self, payload):
        return payload in self.registry

    def handle(self, payload) -> HeapNode:
        return self.registry[payload]

    def push(self, priority, payload) -> HeapNode:
        if payload in self.registry:
            raise HeapError(f"duplicate payload {payload!r}")
        node = HeapNode(priority, payload, len(self.nodes))
        self.nodes.append(node)
        self.registry[payload] = node
        self.visits += 1
        self._sift_up(node)
        return node

    def peek_min(self):
        if not self.nodes:
            raise HeapError("peek on empty heap")
        self.visits += 1
        root = self.nodes[0]
        return root.priority, root.payload

    def pop_min(self):
        if not self.nodes:
            raise HeapError("pop from empty heap")
        root = self.nodes[0]
        self.visits += 1
        self._detach(root)
        return root.priority, root.payload

    def update_priority(self, handle: HeapNode, priority):
        self._check(handle)
        old = handle.priority
        handle.priority = priority
        self.visits += 1
        if priority < old:
            self._sift_up(handle)
        else:
            self._sift_down(handle)

    def remove(self, handle: HeapNode):
        self._check(handle)
        self.visits += 1
        self._detach(handle)

    def _check(self, handle):
        slot = handle.slot
        if slot < 0 or slot >= len(self.nodes) or self.nodes[slot] is not handle:
            raise HeapError(f"stale handle {handle!r}")

    def _detach(self, node):
        nodes = self.nodes
        last = nodes.pop()
        del self.registry[node.payload]
        slot = node.slot
        node.slot = -1
        if last is node:
            return
        last.slot = slot
        nodes[slot] = last
        if slot and last.priority < nodes[(slot - 1) // self.arity].priority:
            self.visits += 1
            self._sift_up(last)
        else:
            self._sift_down(last)

    def _sift_up(self, node):
        nodes = self.nodes
        d = self.arity
        prio = node.priority
        i = node.slot
        visits = 0
        while i > 0:
            parent = (i - 1) // d
            p = nodes[parent]
            visits += 1
            if prio < p.priority:
                nodes[i] = p
                p.slot = i
                i = parent
            else:
                break
        nodes[i] = node
        node.slot = i
        self.visits += visits

    def _sift_down(self, node):
        nodes = self.nodes
        n = len(nodes)
        d = self.arity
        prio = node.priority
        i = node.slot
        visits = 0
        while True:
            first = i * d + 1
            if first >= n:
                break
            last = first + d
            if last > n:
                last = n
            best = first
            best_prio = nodes[first].priority
            for j in range(first + 1, last):
                q = nodes[j].priority
                if q < best_prio:
                    best = j
                    best_prio = q
            visits += last - first
            if best_prio < prio:
                child = nodes[best]
                nodes[i] = child
                child.slot = i
                i = best
            else:
                break
        nodes[i] = node
        node.slot = i
        self.visits += visits

    def check_invariants(self):
        """Full scan of heap order and the handle registry; raises AssertionError."""
        nodes = self.nodes
        d = self.arity
        assert len(self.registry) == len(nodes)
        for i, node in enumerate(nodes):
            assert node.slot == i, f"slot mismatch at {i}"
            assert self.registry.get(node.payload) is node
            if i:
                parent = nodes[(i - 1) // d]
                assert not node.priority < parent.priority, f"heap order broken at {i}"
