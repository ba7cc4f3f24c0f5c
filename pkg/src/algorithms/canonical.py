"""
Canonical forms of instruction sequences

First canonical form flattens a term to prefix + optional period (PGA1-PGA4),
second canonical form composes jump chains and shortens jumps into the
repeating part (PGA5-PGA8), third canonical form removes every left-hand side
of PGA9-PGA30.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, List, Optional, Tuple

from ..core.errors import StepBudgetExceeded, TraceReplayError
from ..core.instruction import Jump, PrimitiveInstruction
from ..core.term import Concat, Instr, InstrSeq, Repeat, Term
from .rules import THIRD_CANONICAL_PRIORITY, apply_rule, find_redex

logger = logging.getLogger(__name__)

# Returns the chain of (axiom id, rewritten instruction) steps normalizing one instruction
InstructionNormalizer = Callable[[PrimitiveInstruction], List[Tuple[str, PrimitiveInstruction]]]


@dataclass
class RewriteTrace:
    """
    Ordered record of the axiom applications that produced a canonical form

    steps are rewrites of instruction sequences and replay from the first
    canonical form; flattening holds the term-level PGA1, PGA3 and unfold
    steps that led to it.
    """
    steps: List[Tuple[str, int]] = field(default_factory=list)
    flattening: List[Tuple[str, int]] = field(default_factory=list)

    def append(self, axiom_id: str, position: int):
        self.steps.append((axiom_id, position))

    def append_flattening(self, axiom_id: str, position: int):
        self.flattening.append((axiom_id, position))

    def extend(self, other: 'RewriteTrace'):
        self.flattening.extend(other.flattening)
        self.steps.extend(other.steps)

    def axioms(self) -> List[str]:
        return [axiom_id for axiom_id, _ in self.flattening + self.steps]

    def reversed(self) -> 'RewriteTrace':
        """The same steps read as equations from right to left"""
        return RewriteTrace(list(reversed(self.steps)), list(reversed(self.flattening)))

    def __len__(self) -> int:
        return len(self.flattening) + len(self.steps)

    def to_text(self) -> str:
        lines = [f"{axiom_id} @ {position} (flatten)" for axiom_id, position in self.flattening]
        lines.extend(f"{axiom_id} @ {position}" for axiom_id, position in self.steps)
        return '\n'.join(lines)

    def to_list(self) -> List[Dict]:
        data = [{'axiom': axiom_id, 'position': position, 'stage': 'flatten'}
                for axiom_id, position in self.flattening]
        data.extend({'axiom': axiom_id, 'position': position} for axiom_id, position in self.steps)
        return data

    @classmethod
    def from_list(cls, data: List[Dict]) -> 'RewriteTrace':
        trace = cls()
        for item in data:
            if item.get('stage') == 'flatten':
                trace.append_flattening(item['axiom'], int(item['position']))
            else:
                trace.append(item['axiom'], int(item['position']))
        return trace


# First canonical form

def _flatten(t: Term, trace: RewriteTrace,
             offset: int) -> Tuple[List[PrimitiveInstruction], Optional[List[PrimitiveInstruction]]]:
    if isinstance(t, Instr):
        return [t.instruction], None
    if isinstance(t, Repeat):
        prefix, period = _flatten(t.body, trace, offset)
        if period is None:
            return [], prefix
        # (P;Q*)* unfolds to P;Q*;(P;Q*)* and the tail after Q* is dropped
        trace.append_flattening('unfold', offset)
        trace.append_flattening('PGA3', offset + len(prefix) + len(period))
        return prefix, period
    items: List[PrimitiveInstruction] = []
    node: Term = t
    while isinstance(node, Concat):
        if isinstance(node.left, Concat):
            trace.append_flattening('PGA1', offset + len(items))
        prefix, period = _flatten(node.left, trace, offset + len(items))
        items.extend(prefix)
        if period is not None:
            trace.append_flattening('PGA3', offset + len(items) + len(period))
            return items, period
        node = node.right
    prefix, period = _flatten(node, trace, offset + len(items))
    items.extend(prefix)
    return items, period


def to_first_canonical(t: Term) -> Tuple[InstrSeq, RewriteTrace]:
    """
    Flatten a term to prefix + optional period

    Everything after a repetition is discarded (PGA3) and nested repetitions
    collapse. Trace positions are offsets into the flattened sequence.
    """
    trace = RewriteTrace()
    prefix, period = _flatten(t, trace, 0)
    return InstrSeq(tuple(prefix), tuple(period) if period is not None else None), trace


def minimize_periodic(seq: InstrSeq) -> InstrSeq:
    """Shortest period and shortest prefix denoting the same infinite sequence"""
    if seq.period is None:
        return seq
    period = list(seq.period)
    k = len(period)
    for d in range(1, k + 1):
        if k % d == 0 and period == period[:d] * (k // d):
            period = period[:d]
            break
    prefix = list(seq.prefix)
    while prefix and prefix[-1] == period[-1]:
        period = [prefix.pop()] + period[:-1]
    return InstrSeq(tuple(prefix), tuple(period))


def first_canonical(t: Term) -> InstrSeq:
    """Minimized first canonical form; the key for instruction sequence congruence"""
    return minimize_periodic(to_first_canonical(t)[0])


# Second canonical form

def _minimize_step(seq: InstrSeq, trace: RewriteTrace) -> InstrSeq:
    minimized = minimize_periodic(seq)
    if minimized != seq:
        trace.append('minimize', 0)
    return minimized


def _shorten_at(seq: InstrSeq, pos: int, trace: RewriteTrace) -> InstrSeq:
    while True:
        for axiom_id in ('PGA7', 'PGA8'):
            shortened = apply_rule(axiom_id, seq, pos)
            if shortened is not None:
                trace.append(axiom_id, pos)
                seq = shortened
                break
        else:
            return seq


def _resolve_chain(seq: InstrSeq, pos: int, trace: RewriteTrace,
                   active: FrozenSet[int]) -> InstrSeq:
    """Compose the jump at pos with the jumps it lands on until it lands on a non-jump"""
    for _ in range(4 * seq.size * seq.size + 4):
        seq = _shorten_at(seq, pos, trace)
        u = seq.at(pos)
        if not isinstance(u, Jump) or u.length == 0:
            return seq
        target = pos + u.length
        landing = seq.at(target)
        if not isinstance(landing, Jump):
            return seq
        landing_pos = seq.canonical_position(target)
        if landing.length > 0 and landing_pos not in active and landing_pos != pos:
            # resolve the rest of the chain first; a cycle is closed at its entry
            seq = _resolve_chain(seq, landing_pos, trace, active | {pos})
            landing = seq.at(target)
        axiom_id = 'PGA5' if landing.length == 0 else 'PGA6'
        seq = apply_rule(axiom_id, seq, pos)
        trace.append(axiom_id, pos)
    raise RuntimeError(f"Jump chain at position {pos} did not resolve in {seq}")


def to_second_canonical(seq: InstrSeq) -> Tuple[InstrSeq, RewriteTrace]:
    """
    No chained jumps and shortest possible jumps into the repeating part

    Infinite jump chains become #0. Jumps past the end of a finite sequence
    are left as they are.
    """
    trace = RewriteTrace()
    current = _minimize_step(seq, trace)
    while True:
        before = current
        for pos in range(current.size):
            current = _shorten_at(current, pos, trace)
        for pos in range(current.size):
            current = _resolve_chain(current, pos, trace, frozenset())
        current = _minimize_step(current, trace)
        if current == before:
            return current, trace


def has_chained_jumps(seq: InstrSeq) -> bool:
    """True if some jump lands on a jump"""
    for pos in range(seq.size):
        u = seq.at(pos)
        if isinstance(u, Jump) and u.length > 0 and isinstance(seq.at(pos + u.length), Jump):
            return True
    return False


def jump_bounds_hold(seq: InstrSeq) -> bool:
    """Prefix jumps land in the first copy of the period, period jumps stay inside one period"""
    if seq.period is None:
        return True
    m, k = len(seq.prefix), len(seq.period)
    for i, u in enumerate(seq.prefix, start=1):
        if isinstance(u, Jump) and u.length > k + m - i:
            return False
    return all(u.length <= k - 1 for u in seq.period if isinstance(u, Jump))


# Third canonical form

def _normalize_instructions(seq: InstrSeq, normalizer: InstructionNormalizer,
                            trace: RewriteTrace) -> InstrSeq:
    for pos in range(seq.size):
        for axiom_id, rewritten in normalizer(seq.at(pos)):
            seq = seq.replace_at(pos, rewritten)
            trace.append(axiom_id, pos)
    return seq


class ThirdCanonicalizer:
    """Rewrites instruction sequences until no PGA9-PGA30 left-hand side remains"""

    def __init__(self, instr_normalizer: Optional[InstructionNormalizer] = None,
                 budget_factor: int = 10,
                 priority: Tuple[str, ...] = THIRD_CANONICAL_PRIORITY):
        self.logger = logging.getLogger(__name__)
        self.instr_normalizer = instr_normalizer
        self.budget_factor = budget_factor
        self.priority = priority

    def renormalize(self, seq: InstrSeq, trace: RewriteTrace) -> InstrSeq:
        """Normalized instructions, then second canonical form"""
        if self.instr_normalizer is not None:
            seq = _normalize_instructions(seq, self.instr_normalizer, trace)
        seq, second = to_second_canonical(seq)
        trace.extend(second)
        return seq

    def canonicalize(self, seq: InstrSeq) -> Tuple[InstrSeq, RewriteTrace]:
        """
        Rewrite to third canonical form

        Args:
            seq: Any instruction sequence

        Returns:
            The canonical sequence and the trace of every step taken
        """
        trace = RewriteTrace()
        budget = self.budget_factor * max(1, seq.size) ** 2
        seen = set()
        steps = 0
        current = seq
        while True:
            current = self.renormalize(current, trace)
            if current in seen:
                self.logger.warning(f"Rewriting of {seq} revisited {current}")
                raise StepBudgetExceeded(f"Rewriting of {seq} entered a cycle at {current}")
            seen.add(current)
            redex = find_redex(current, self.priority)
            if redex is None:
                break
            axiom_id, pos = redex
            self.logger.debug(f"{axiom_id} @ {pos}: {current}")
            current = apply_rule(axiom_id, current, pos)
            trace.append(axiom_id, pos)
            steps += 1
            if steps > budget:
                raise StepBudgetExceeded(
                    f"Third canonicalization of {seq} exceeded {budget} steps")
        self.logger.debug(f"Third canonical form of {seq} is {current} after {steps} steps")
        return current, trace


def to_third_canonical(seq: InstrSeq, instr_normalizer: Optional[InstructionNormalizer] = None
                       ) -> Tuple[InstrSeq, RewriteTrace]:
    """Third canonical form with the default priority and budget"""
    return ThirdCanonicalizer(instr_normalizer).canonicalize(seq)


def canonicalize_term(t: Term, level: int,
                      instr_normalizer: Optional[InstructionNormalizer] = None
                      ) -> Tuple[InstrSeq, RewriteTrace]:
    """
    Canonical form of a term at level 1, 2 or 3, with the full trace from flattening on

    replay_trace(to_first_canonical(t)[0], trace) reproduces the result.
    """
    if level not in (1, 2, 3):
        raise ValueError(f"Canonical form level must be 1, 2 or 3, got {level}")
    seq, trace = to_first_canonical(t)
    if level == 1:
        seq = _minimize_step(seq, trace)
    elif level == 2:
        seq, second = to_second_canonical(seq)
        trace.extend(second)
    else:
        seq, third = to_third_canonical(seq, instr_normalizer)
        trace.extend(third)
    return seq, trace


def replay_trace(seq: InstrSeq, trace: RewriteTrace,
                 instr_normalizer: Optional[InstructionNormalizer] = None) -> InstrSeq:
    """
    Re-apply the sequence steps of a canonicalization trace

    seq is the first canonical form the trace starts from; flattening steps
    are term-level and are skipped.
    """
    for index, (axiom_id, pos) in enumerate(trace.steps):
        if axiom_id == 'minimize':
            seq = minimize_periodic(seq)
        elif axiom_id == 'unfold':
            seq = seq.unfold()
        elif axiom_id.startswith('PGAbr'):
            path = instr_normalizer(seq.at(pos)) if instr_normalizer else []
            if not path or path[0][0] != axiom_id:
                raise TraceReplayError(f"Step {index}: {axiom_id} does not apply at {pos} in {seq}")
            seq = seq.replace_at(pos, path[0][1])
        else:
            rewritten = apply_rule(axiom_id, seq, pos)
            if rewritten is None:
                raise TraceReplayError(f"Step {index}: {axiom_id} does not apply at {pos} in {seq}")
            seq = rewritten
    return seq
