"""
Thread extraction: the behaviour of an instruction sequence as a regular thread

Every action position becomes one state. Jumps are not states: a jump is
followed to the position it lands on, and a position that leads nowhere
(a #0, a fall off the end of a finite sequence or an infinite chain of
jumps) is the inaction state.
"""

import logging
from typing import Dict, List, Optional

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from ..core.instruction import Halt, Jump, NegTest, Plain, PosTest
from ..core.term import InstrSeq, Term
from ..core.thread import Node, RegularThread
from .canonical import first_canonical

logger = logging.getLogger(__name__)

DEAD_STATE = 0
TERM_STATE = 1


def jump_cycle_positions(seq: InstrSeq) -> np.ndarray:
    """
    Positions of jumps that lie on a cycle of jumps

    Each positive jump landing on a jump is an edge between positions in
    range(size); a jump is on a cycle when its strongly connected component
    has more than one position or it lands on itself.
    """
    size = seq.size
    sources: List[int] = []
    targets: List[int] = []
    for pos in range(size):
        u = seq.at(pos)
        if not isinstance(u, Jump) or u.length == 0 or not seq.contains(pos + u.length):
            continue
        target = seq.canonical_position(pos + u.length)
        if isinstance(seq.at(target), Jump):
            sources.append(pos)
            targets.append(target)
    cyclic = np.zeros(size, dtype=bool)
    if not sources:
        return cyclic
    graph = csr_matrix((np.ones(len(sources), dtype=np.int8), (sources, targets)),
                       shape=(size, size))
    _, labels = connected_components(graph, directed=True, connection='strong')
    component_sizes = np.bincount(labels, minlength=labels.max() + 1)
    cyclic |= component_sizes[labels] > 1
    for source, target in zip(sources, targets):
        if source == target:
            cyclic[source] = True
    return cyclic


class ExtractionGraph:
    """Behaviour graph of every position of an instruction sequence at once"""

    def __init__(self, seq: InstrSeq):
        self.seq = seq
        self._cyclic = jump_cycle_positions(seq)
        self._effective: Dict[int, int] = {}
        self._state_of: Dict[int, int] = {}
        action_positions = [pos for pos in range(seq.size)
                            if isinstance(seq.at(pos), (Plain, PosTest, NegTest))]
        for index, pos in enumerate(action_positions):
            self._state_of[pos] = TERM_STATE + 1 + index
        nodes: List[Node] = [Node.dead(), Node.term()]
        for pos in action_positions:
            u = seq.at(pos)
            after, skip = self.entry(pos + 1), self.entry(pos + 2)
            if isinstance(u, Plain):
                nodes.append(Node.act(u.action, after, after))
            elif isinstance(u, PosTest):
                nodes.append(Node.act(u.action, after, skip))
            else:
                nodes.append(Node.act(u.action, skip, after))
        self.nodes = tuple(nodes)

    def entry(self, position: int) -> int:
        """State reached by starting execution at a 0-based position"""
        if not self.seq.contains(position):
            return DEAD_STATE
        position = self.seq.canonical_position(position)
        visited: List[int] = []
        state: Optional[int] = None
        while state is None:
            if position in self._effective:
                state = self._effective[position]
                break
            u = self.seq.at(position)
            if isinstance(u, Halt):
                state = TERM_STATE
            elif not isinstance(u, Jump):
                state = self._state_of[position]
            elif u.length == 0 or self._cyclic[position]:
                state = DEAD_STATE
            elif not self.seq.contains(position + u.length):
                visited.append(position)
                state = DEAD_STATE
            else:
                visited.append(position)
                position = self.seq.canonical_position(position + u.length)
                continue
            self._effective[position] = state
        for jump_position in visited:
            self._effective[jump_position] = state
        return state

    def context_entry(self, jump: int) -> int:
        """State reached by a context jump #jump placed in front of the sequence"""
        return DEAD_STATE if jump == 0 else self.entry(jump - 1)

    def thread(self, position: int = 0) -> RegularThread:
        """Regular thread starting at a position, restricted to reachable states"""
        return RegularThread.build(self.nodes, self.entry(position))

    def context_thread(self, jump: int) -> RegularThread:
        return RegularThread.build(self.nodes, self.context_entry(jump))


def extract(seq: InstrSeq) -> RegularThread:
    """Regular thread produced by an instruction sequence"""
    thread = ExtractionGraph(seq).thread(0)
    logger.debug(f"Extracted {len(thread)} states from {seq}")
    return thread


def extract_term(t: Term) -> RegularThread:
    """Regular thread produced by a term, through its first canonical form"""
    return extract(first_canonical(t))
