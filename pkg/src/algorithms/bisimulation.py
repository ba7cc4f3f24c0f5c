"""
Bisimulation of regular threads by partition refinement

Level d of the refinement groups the states whose depth-d projections are
equal; the refinement stops when a level no longer splits any block, which
gives bisimilarity.
"""

import logging
from collections import deque
from typing import Dict, Hashable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from ..core.alphabet import DEFAULT_ALPHABET
from ..core.thread import (DEAD, STOP, Node, NodeKind, RegularThread,
                           ThreadTerm, post)

logger = logging.getLogger(__name__)

_KIND_CODES = {NodeKind.DEAD: 0, NodeKind.TERM: 1, NodeKind.ACT: 2}

# Canonical description of a thread up to bisimilarity
ThreadKey = Tuple[Node, ...]


def refinement_levels(nodes: Sequence[Node], alphabet=None) -> Iterator[np.ndarray]:
    """
    Yield the block id of every state, level by level

    Level 0 is the single block; each further level splits blocks by node
    kind, alphabet signature of the action and the blocks of the successors.
    The last level yielded is the bisimulation partition.
    """
    alphabet = alphabet or DEFAULT_ALPHABET
    count = len(nodes)
    blocks = np.zeros(count, dtype=np.int64)
    block_count = 1
    yield blocks
    labels: Dict[Hashable, int] = {}
    rows = np.full((count, 4), -1, dtype=np.int64)
    for round_index in range(1, count + 2):
        for state, node in enumerate(nodes):
            rows[state, 0] = _KIND_CODES[node.kind]
            if node.kind is NodeKind.ACT:
                label, t_block, f_block = alphabet.node_signature(
                    node.action, int(blocks[node.t_succ]), int(blocks[node.f_succ]))
                rows[state, 1] = labels.setdefault(label, len(labels))
                rows[state, 2] = t_block
                rows[state, 3] = f_block
        _, inverse = np.unique(rows, axis=0, return_inverse=True)
        refined = inverse.reshape(-1).astype(np.int64)
        refined_count = int(refined.max()) + 1
        if refined_count == block_count:
            logger.debug(f"Refinement of {count} states stable after {round_index} rounds")
            return
        blocks, block_count = refined, refined_count
        yield blocks
    raise RuntimeError(f"Partition refinement of {count} states did not stabilize")


def stable_partition(nodes: Sequence[Node], alphabet=None) -> np.ndarray:
    """Block id of every state under bisimilarity"""
    blocks = None
    for blocks in refinement_levels(nodes, alphabet):
        pass
    return blocks


def disjoint_union(*threads) -> Tuple[List[Node], List[int]]:
    """All nodes of the graphs side by side, with the offset of each; any object with nodes will do"""
    nodes: List[Node] = []
    offsets: List[int] = []
    for thread in threads:
        offset = len(nodes)
        offsets.append(offset)
        for node in thread.nodes:
            if node.kind is NodeKind.ACT:
                node = Node.act(node.action, node.t_succ + offset, node.f_succ + offset)
            nodes.append(node)
    return nodes, offsets


def bisimilar(r1: RegularThread, r2: RegularThread, alphabet=None) -> bool:
    """True iff the two behaviour graphs are bisimilar"""
    nodes, (o1, o2) = disjoint_union(r1, r2)
    blocks = stable_partition(nodes, alphabet)
    return bool(blocks[o1 + r1.root] == blocks[o2 + r2.root])


def distinguishing_depth(r1: RegularThread, r2: RegularThread,
                         alphabet=None) -> Optional[int]:
    """Smallest n with different depth-n projections, None when bisimilar"""
    nodes, (o1, o2) = disjoint_union(r1, r2)
    for depth, blocks in enumerate(refinement_levels(nodes, alphabet)):
        if blocks[o1 + r1.root] != blocks[o2 + r2.root]:
            return depth
    return None


def quotient_key(nodes: Sequence[Node], blocks: np.ndarray, entry: int,
                 alphabet=None) -> ThreadKey:
    """Quotient graph reachable from entry, numbered breadth-first with the true branch first"""
    alphabet = alphabet or DEFAULT_ALPHABET
    representative: Dict[int, int] = {}
    for state in range(len(nodes)):
        representative.setdefault(int(blocks[state]), state)
    order = {int(blocks[entry]): 0}
    queue = deque([int(blocks[entry])])
    result: List[Node] = []
    while queue:
        block = queue.popleft()
        node = nodes[representative[block]]
        if node.kind is not NodeKind.ACT:
            result.append(node)
            continue
        action, t_block, f_block = alphabet.canonical_node(
            node.action, int(blocks[node.t_succ]), int(blocks[node.f_succ]))
        for succ in (t_block, f_block):
            if succ not in order:
                order[succ] = len(order)
                queue.append(succ)
        result.append(Node.act(action, order[t_block], order[f_block]))
    return tuple(result)


def minimize(r: RegularThread, alphabet=None) -> RegularThread:
    """Quotient by bisimilarity; bisimilar threads minimize to identical graphs"""
    blocks = stable_partition(r.nodes, alphabet)
    return RegularThread(quotient_key(r.nodes, blocks, r.root, alphabet), 0)


def canonical_key(r: RegularThread, alphabet=None) -> ThreadKey:
    """Hashable key equal for two threads iff they are bisimilar"""
    return minimize(r, alphabet).nodes


def project(n: int, r: RegularThread) -> ThreadTerm:
    """Depth-n approximation of a regular thread"""
    if n < 0:
        raise ValueError(f"Projection depth must be non-negative, got {n}")
    level: List[ThreadTerm] = [DEAD] * len(r.nodes)
    for _ in range(n):
        next_level: List[ThreadTerm] = []
        for node in r.nodes:
            if node.kind is NodeKind.DEAD:
                next_level.append(DEAD)
            elif node.kind is NodeKind.TERM:
                next_level.append(STOP)
            else:
                next_level.append(post(node.action, level[node.t_succ], level[node.f_succ]))
        level = next_level
    return level[r.root]
