"""
Threads: finite thread terms (projections) and regular threads as behaviour graphs
"""

import weakref
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .instruction import Action


@dataclass(frozen=True)
class Inaction:
    """The inaction constant D"""

    def __str__(self) -> str:
        return "D"


@dataclass(frozen=True)
class Termination:
    """The termination constant S"""

    def __str__(self) -> str:
        return "S"


DEAD = Inaction()
STOP = Termination()


@dataclass(frozen=True, eq=False)
class Post:
    """Postconditional composition (on_true <| action |> on_false)"""
    action: Action
    on_true: 'ThreadTerm'
    on_false: 'ThreadTerm'

    def __post_init__(self):
        object.__setattr__(self, '_hash', hash((self.action, self.on_true, self.on_false)))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, Post) or self._hash != other._hash:
            return False
        return (self.action == other.action and self.on_true == other.on_true
                and self.on_false == other.on_false)

    def __str__(self) -> str:
        return f"({self.on_true} <| {self.action} |> {self.on_false})"


ThreadTerm = Union[Inaction, Termination, Post]

# Structurally equal posts built through post() are the same object, which
# keeps equality of deep projections linear in their depth.
_INTERNED: 'weakref.WeakValueDictionary' = weakref.WeakValueDictionary()


def post(action: Action, on_true: ThreadTerm, on_false: ThreadTerm) -> Post:
    """Interned postconditional composition"""
    key = (action, on_true, on_false)
    existing = _INTERNED.get(key)
    if existing is not None:
        return existing
    node = Post(action, on_true, on_false)
    _INTERNED[key] = node
    return node


class NodeKind(Enum):
    DEAD = 'D'
    TERM = 'S'
    ACT = 'act'


@dataclass(frozen=True)
class Node:
    """One state of a regular thread"""
    kind: NodeKind
    action: Optional[Action] = None
    t_succ: int = -1
    f_succ: int = -1

    @classmethod
    def dead(cls) -> 'Node':
        return cls(NodeKind.DEAD)

    @classmethod
    def term(cls) -> 'Node':
        return cls(NodeKind.TERM)

    @classmethod
    def act(cls, action: Action, t_succ: int, f_succ: int) -> 'Node':
        return cls(NodeKind.ACT, action, t_succ, f_succ)

    def successors(self) -> Tuple[int, ...]:
        if self.kind is NodeKind.ACT:
            return (self.t_succ, self.f_succ)
        return ()


@dataclass(frozen=True)
class RegularThread:
    """Rooted deterministic behaviour graph; build() keeps only states reachable from the root"""
    nodes: Tuple[Node, ...]
    root: int = 0

    def __post_init__(self):
        object.__setattr__(self, 'nodes', tuple(self.nodes))
        if not 0 <= self.root < len(self.nodes):
            raise ValueError(f"Root {self.root} out of range for {len(self.nodes)} states")
        for index, node in enumerate(self.nodes):
            for succ in node.successors():
                if not 0 <= succ < len(self.nodes):
                    raise ValueError(f"State {index} has successor {succ} out of range")

    @classmethod
    def build(cls, nodes: Sequence[Node], root: int) -> 'RegularThread':
        """Restrict to the states reachable from root, numbered breadth-first (true branch first)"""
        order = {root: 0}
        queue = deque([root])
        visit: List[int] = []
        while queue:
            state = queue.popleft()
            visit.append(state)
            for succ in nodes[state].successors():
                if succ not in order:
                    order[succ] = len(order)
                    queue.append(succ)
        renumbered = []
        for state in visit:
            node = nodes[state]
            if node.kind is NodeKind.ACT:
                node = Node.act(node.action, order[node.t_succ], order[node.f_succ])
            renumbered.append(node)
        return cls(tuple(renumbered), 0)

    @classmethod
    def single(cls, node: Node) -> 'RegularThread':
        """Thread of a single Dead or Term state"""
        if node.kind is NodeKind.ACT:
            raise ValueError("A single-state action node needs successors")
        return cls((node,), 0)

    def __len__(self) -> int:
        return len(self.nodes)

    def node(self, state: int) -> Node:
        """Get node of a state"""
        return self.nodes[state]

    def to_text(self) -> str:
        """One line per state, root first"""
        lines = []
        for index, node in enumerate(self.nodes):
            marker = '>' if index == self.root else ' '
            if node.kind is NodeKind.ACT:
                lines.append(f"{marker}s{index}: {node.action} -> s{node.t_succ}, s{node.f_succ}")
            else:
                lines.append(f"{marker}s{index}: {node.kind.value}")
        return '\n'.join(lines)

    def to_dict(self) -> Dict:
        """Serialize to dictionary"""
        return {
            'root': self.root,
            'states': [
                {'kind': n.kind.value, 'action': str(n.action) if n.action is not None else None,
                 't_succ': n.t_succ, 'f_succ': n.f_succ}
                for n in self.nodes
            ],
        }


def compose_post(action: Action, on_true: RegularThread,
                 on_false: RegularThread) -> RegularThread:
    """Regular thread (on_true <| action |> on_false)"""
    t_offset = 1
    f_offset = 1 + len(on_true)
    nodes = [Node.act(action, t_offset + on_true.root, f_offset + on_false.root)]
    for offset, thread in ((t_offset, on_true), (f_offset, on_false)):
        for node in thread.nodes:
            if node.kind is NodeKind.ACT:
                node = Node.act(node.action, node.t_succ + offset, node.f_succ + offset)
            nodes.append(node)
    return RegularThread.build(nodes, 0)
