import math
import random

import pytest

from campcache import DaryHeap, HeapError


def bound(n, d):
    return 1 + d * math.ceil(math.log(n, d) - 1e-12) if n > 1 else 1


def test_push_into_empty():
    h = DaryHeap()
    node = h.push(5, "a")
    assert node.slot == 0
    assert h.peek_min() == (5, "a")


def test_nine_increasing_pushes_fill_first_level():
    h = DaryHeap(8)
    for i in range(9):
        h.push(i, f"p{i}")
    assert h.nodes[0].payload == "p0"
    assert [n.payload for n in h.nodes[1:9]] == [f"p{i}" for i in range(1, 9)]


def test_duplicate_payload_rejected():
    h = DaryHeap()
    h.push(1, "a")
    with pytest.raises(HeapError):
        h.push(2, "a")


def test_pop_and_peek_small():
    h = DaryHeap()
    h.push(7, "x")
    assert h.pop_min() == (7, "x")
    assert len(h) == 0
    for p in (5, 3, 9):
        h.push(p, p)
    assert h.peek_min() == (3, 3)
    assert len(h) == 3
    assert h.pop_min() == (3, 3)


def test_empty_errors():
    h = DaryHeap()
    with pytest.raises(HeapError):
        h.pop_min()
    with pytest.raises(HeapError):
        h.peek_min()


@pytest.mark.parametrize("arity", [2, 3, 8])
def test_pop_all_is_sorted(arity):
    rng = random.Random(arity)
    values = [rng.random() for _ in range(5000)]
    h = DaryHeap(arity)
    for i, v in enumerate(values):
        h.push(v, i)
    h.check_invariants()
    assert [h.pop_min()[0] for _ in range(len(values))] == sorted(values)


def test_peek_matches_sort_without_mutation():
    rng = random.Random(1)
    values = [rng.randint(0, 10**6) for _ in range(2000)]
    h = DaryHeap()
    for i, v in enumerate(values):
        h.push((v, i), i)
    before = [n.payload for n in h.nodes]
    assert h.peek_min()[0] == min((v, i) for i, v in enumerate(values))
    assert [n.payload for n in h.nodes] == before


def test_raise_root_swaps_with_min_child():
    h = DaryHeap(8)
    nodes = [h.push(i, i) for i in range(9)]
    h.update_priority(nodes[0], 100)
    assert h.nodes[0].payload == 1
    assert h.nodes[1].payload == 0
    h.check_invariants()


def test_update_same_priority_is_structural_noop():
    h = DaryHeap(8)
    nodes = [h.push(i, i) for i in range(9)]
    layout = [n.payload for n in h.nodes]
    v0 = h.visits
    h.update_priority(nodes[0], 0)
    assert [n.payload for n in h.nodes] == layout
    assert h.visits - v0 == 1 + 8


def test_remove_cases():
    h = DaryHeap()
    a = h.push(1, "a")
    h.remove(a)
    assert len(h) == 0
    with pytest.raises(HeapError):
        h.remove(a)
    n3 = h.push(3, 3)
    h.push(5, 5)
    h.push(9, 9)
    h.remove(n3)
    assert h.peek_min() == (5, 5)


def test_stale_handle_update():
    h = DaryHeap()
    a = h.push(1, "a")
    h.pop_min()
    with pytest.raises(HeapError):
        h.update_priority(a, 4)


@pytest.mark.parametrize("arity", [2, 8])
def test_random_mixed_ops_keep_invariants_and_visit_bound(arity):
    rng = random.Random(100 + arity)
    h = DaryHeap(arity)
    live = {}
    shadow = {}
    next_id = 0
    for step in range(20_000):
        op = rng.random()
        n = len(h)
        before = h.visits
        if op < 0.4 or not live:
            live[next_id] = h.push(rng.randint(0, 1000), next_id)
            shadow[next_id] = live[next_id].priority
            next_id += 1
            n += 1
        elif op < 0.6:
            pr, payload = h.pop_min()
            assert pr == min(shadow.values())
            del live[payload], shadow[payload]
        elif op < 0.85:
            k = rng.choice(list(live))
            v = rng.randint(0, 1000)
            h.update_priority(live[k], v)
            shadow[k] = v
        else:
            k = rng.choice(list(live))
            h.remove(live.pop(k))
            del shadow[k]
        assert h.visits - before <= bound(max(n, 1), arity)
        if step % 50 == 0:
            h.check_invariants()
    h.check_invariants()
    assert sorted(shadow.values()) == sorted(node.priority for node in h.nodes)
