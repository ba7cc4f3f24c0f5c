"""
Closed PGA terms and the eventually periodic instruction sequences they denote
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .instruction import Jump, PrimitiveInstruction


@dataclass(frozen=True)
class Instr:
    """A single primitive instruction as a term"""
    instruction: PrimitiveInstruction


@dataclass(frozen=True)
class Concat:
    """Concatenation of two terms"""
    left: 'Term'
    right: 'Term'


@dataclass(frozen=True)
class Repeat:
    """Repetition of a term, the infinite concatenation body;body;..."""
    body: 'Term'


Term = Union[Instr, Concat, Repeat]


def concat(*parts: Term) -> Term:
    """Right-nested concatenation of one or more terms"""
    if not parts:
        raise ValueError("Cannot concatenate an empty list of terms")
    result = parts[-1]
    for part in reversed(parts[:-1]):
        result = Concat(part, result)
    return result


def sequence_term(instructions: Sequence[PrimitiveInstruction]) -> Term:
    """Right-nested term of the given instructions"""
    return concat(*(Instr(u) for u in instructions))


def is_repetition_free(t: Term) -> bool:
    """True if no repetition occurs in t"""
    stack = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, Repeat):
            return False
        if isinstance(node, Concat):
            stack.append(node.left)
            stack.append(node.right)
    return True


@dataclass(frozen=True)
class InstrSeq:
    """Finite or eventually periodic sequence: prefix followed by period repeated forever"""
    prefix: Tuple[PrimitiveInstruction, ...] = ()
    period: Optional[Tuple[PrimitiveInstruction, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, 'prefix', tuple(self.prefix))
        if self.period is not None:
            object.__setattr__(self, 'period', tuple(self.period))
            if not self.period:
                raise ValueError("Period must be nonempty when present")
        elif not self.prefix:
            raise ValueError("Instruction sequence must be nonempty")

    @property
    def is_finite(self) -> bool:
        return self.period is None

    @property
    def size(self) -> int:
        """Number of distinct positions: |prefix| + |period|"""
        return len(self.prefix) + (len(self.period) if self.period else 0)

    def at(self, position: int) -> Optional[PrimitiveInstruction]:
        """Instruction at a 0-based position, None past the end of a finite sequence"""
        m = len(self.prefix)
        if position < m:
            return self.prefix[position]
        if self.period is None:
            return None
        return self.period[(position - m) % len(self.period)]

    def contains(self, position: int) -> bool:
        return self.period is not None or position < len(self.prefix)

    def canonical_position(self, position: int) -> int:
        """Map a position into range(size), wrapping positions inside the period"""
        m = len(self.prefix)
        if position < m or self.period is None:
            return position
        return m + (position - m) % len(self.period)

    def window(self, length: int) -> List[Optional[PrimitiveInstruction]]:
        return [self.at(i) for i in range(length)]

    def unfold(self, count: int = 1) -> 'InstrSeq':
        """Move count copies of the period into the prefix"""
        if self.period is None or count <= 0:
            return self
        return InstrSeq(self.prefix + self.period * count, self.period)

    def replace_at(self, position: int, instruction: PrimitiveInstruction,
                   span: int = 1) -> 'InstrSeq':
        """
        Replace the instruction at a position

        A position inside the period is rewritten in every copy when the
        matched window of the given span fits in one rotation of the period;
        otherwise the period is unfolded until the position is in the prefix.
        """
        m = len(self.prefix)
        if position < m:
            prefix = list(self.prefix)
            prefix[position] = instruction
            return InstrSeq(tuple(prefix), self.period)
        if self.period is None:
            raise IndexError(f"Position {position} is past the end of the sequence")
        k = len(self.period)
        if span <= k:
            period = list(self.period)
            period[(position - m) % k] = instruction
            return InstrSeq(self.prefix, tuple(period))
        return self.unfold((position - m) // k + 1).replace_at(position, instruction, span)

    def max_jump(self) -> int:
        jumps = [u.length for u in self.prefix + (self.period or ()) if isinstance(u, Jump)]
        return max(jumps, default=0)

    def to_term(self) -> Term:
        """Read back as u1;...;um;(v1;...;vk)*"""
        parts: List[Term] = [Instr(u) for u in self.prefix]
        if self.period is not None:
            parts.append(Repeat(sequence_term(self.period)))
        return concat(*parts)

    def __str__(self) -> str:
        parts = [str(u) for u in self.prefix]
        if self.period is not None:
            parts.append('(' + ';'.join(str(u) for u in self.period) + ')*')
        return ';'.join(parts)

    def to_dict(self) -> Dict:
        """Serialize to dictionary"""
        return {
            'prefix': [str(u) for u in self.prefix],
            'period': [str(u) for u in self.period] if self.period is not None else None,
            'text': str(self),
        }
