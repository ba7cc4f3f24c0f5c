"""
The axioms PGA5-PGA30 as left-to-right rewrite rules on instruction sequences

A rule is applied at a position of an InstrSeq: it reads the instructions
from that position onwards (through the period if needed) and returns the
rewritten sequence, or None when its left-hand side does not match there.
Rules that change a single instruction use InstrSeq.replace_at, so a match
inside the period rewrites every copy of it.
"""

import logging
from typing import Callable, Dict, List, Optional, Tuple, Type

from ..core.instruction import (HALT, Jump, NegTest, Plain, PosTest,
                                PrimitiveInstruction, carries_action)
from ..core.term import InstrSeq

logger = logging.getLogger(__name__)

Rule = Callable[[InstrSeq, int], Optional[InstrSeq]]


def _jump(u: Optional[PrimitiveInstruction]) -> Optional[int]:
    return u.length if isinstance(u, Jump) else None


def _period_length(seq: InstrSeq) -> int:
    return len(seq.period) if seq.period is not None else 0


# Second canonical form: jump chains and jumps into the repeating part

def pga5(seq: InstrSeq, pos: int) -> Optional[InstrSeq]:
    """#k+1;u1..uk;#0 = #0;u1..uk;#0"""
    jump = _jump(seq.at(pos))
    if not jump or _jump(seq.at(pos + jump)) != 0:
        return None
    return seq.replace_at(pos, Jump(0), jump + 1)


def pga6(seq: InstrSeq, pos: int) -> Optional[InstrSeq]:
    """#k+1;u1..uk;#l = #l+k+1;u1..uk;#l"""
    jump = _jump(seq.at(pos))
    if not jump:
        return None
    target = _jump(seq.at(pos + jump))
    if not target:
        return None
    return seq.replace_at(pos, Jump(jump + target), jump + 1)


def pga7(seq: InstrSeq, pos: int) -> Optional[InstrSeq]:
    """(#l+k+1;u1..uk)* = (#l;u1..uk)*"""
    k = _period_length(seq)
    jump = _jump(seq.at(pos))
    if not k or pos < len(seq.prefix) or jump is None or jump < k:
        return None
    return seq.replace_at(pos, Jump(jump - k), k)


def pga8(seq: InstrSeq, pos: int) -> Optional[InstrSeq]:
    """#l+k+k'+2;u1..uk;(v1..vk'+1)* = #l+k+1;u1..uk;(v1..vk'+1)*"""
    k = _period_length(seq)
    m = len(seq.prefix)
    jump = _jump(seq.at(pos))
    if not k or pos >= m or jump is None or jump < m - pos + k:
        return None
    return seq.replace_at(pos, Jump(jump - k))


# Simplification of tests

def _tail_two_zero_jumps(seq: InstrSeq, pos: int) -> Optional[int]:
    if _jump(seq.at(pos + 1)) == 0 and _jump(seq.at(pos + 2)) == 0:
        return 3
    return None


def _tail_unit_jump(seq: InstrSeq, pos: int) -> Optional[int]:
    return 2 if _jump(seq.at(pos + 1)) == 1 else None


def _tail_converging_jumps(seq: InstrSeq, pos: int) -> Optional[int]:
    first = _jump(seq.at(pos + 1))
    second = _jump(seq.at(pos + 2))
    if first is not None and first >= 2 and second == first - 1:
        return 3
    return None


def _tail_two_halts(seq: InstrSeq, pos: int) -> Optional[int]:
    if seq.at(pos + 1) == HALT and seq.at(pos + 2) == HALT:
        return 3
    return None


def _constant_tail(seq: InstrSeq, start: int) -> bool:
    """True if every instruction from start onwards is the same"""
    if seq.period is None:
        return False
    first = seq.at(start)
    end = max(start, len(seq.prefix)) + len(seq.period)
    return all(seq.at(i) == first for i in range(start, end))


def _tail_repeated_instruction(seq: InstrSeq, pos: int) -> Optional[int]:
    # the whole tail is read, so only prefix positions are rewritten
    if pos < len(seq.prefix) and _constant_tail(seq, pos + 1):
        return 1
    return None


def _test_rule(test_type: Type, tail: Callable[[InstrSeq, int], Optional[int]]) -> Rule:
    def rule(seq: InstrSeq, pos: int) -> Optional[InstrSeq]:
        u = seq.at(pos)
        if not isinstance(u, test_type):
            return None
        span = tail(seq, pos)
        if span is None:
            return None
        return seq.replace_at(pos, Plain(u.action), span)
    return rule


# Jump blocks in front of a test or plain instruction

def _leading_jump_block(test_type: Type) -> Rule:
    """#k+3;#k+3;#k+3;u1..uk;+a = +a;#k+3;#k+3;u1..uk;+a (and -a)"""
    def rule(seq: InstrSeq, pos: int) -> Optional[InstrSeq]:
        jump = _jump(seq.at(pos))
        if jump is None or jump < 3:
            return None
        if _jump(seq.at(pos + 1)) != jump or _jump(seq.at(pos + 2)) != jump:
            return None
        last = seq.at(pos + jump)
        if not isinstance(last, test_type):
            return None
        return seq.replace_at(pos, test_type(last.action), jump + 1)
    return rule


def pga21(seq: InstrSeq, pos: int) -> Optional[InstrSeq]:
    """#k+2;#k+2;u1..uk;a = a;#k+2;u1..uk;a"""
    jump = _jump(seq.at(pos))
    if jump is None or jump < 2 or _jump(seq.at(pos + 1)) != jump:
        return None
    last = seq.at(pos + jump)
    if not isinstance(last, Plain):
        return None
    return seq.replace_at(pos, Plain(last.action), jump + 1)


def _shortened_double_jump(test_type: Type) -> Rule:
    """#k+k'+4;u1..uk;+a;#k'+3;#k'+3;v1..vk';+a = #k+1;u1..uk;+a;#k'+3;#k'+3;v1..vk';+a"""
    def rule(seq: InstrSeq, pos: int) -> Optional[InstrSeq]:
        jump = _jump(seq.at(pos))
        if jump is None or jump < 4:
            return None
        last = seq.at(pos + jump)
        if not isinstance(last, test_type):
            return None
        for k in range(jump - 3):
            inner = jump - 1 - k
            middle = seq.at(pos + k + 1)
            if (isinstance(middle, test_type) and middle.action == last.action
                    and _jump(seq.at(pos + k + 2)) == inner
                    and _jump(seq.at(pos + k + 3)) == inner):
                return seq.replace_at(pos, Jump(k + 1), jump + 1)
        return None
    return rule


def pga24(seq: InstrSeq, pos: int) -> Optional[InstrSeq]:
    """#k+k'+3;u1..uk;a;#k'+2;v1..vk';a = #k+1;u1..uk;a;#k'+2;v1..vk';a"""
    jump = _jump(seq.at(pos))
    if jump is None or jump < 3:
        return None
    last = seq.at(pos + jump)
    if not isinstance(last, Plain):
        return None
    for k in range(jump - 2):
        middle = seq.at(pos + k + 1)
        if (isinstance(middle, Plain) and middle.action == last.action
                and _jump(seq.at(pos + k + 2)) == jump - 1 - k):
            return seq.replace_at(pos, Jump(k + 1), jump + 1)
    return None


def pga25(seq: InstrSeq, pos: int) -> Optional[InstrSeq]:
    """#k+1;u1..uk;! = !;u1..uk;!"""
    jump = _jump(seq.at(pos))
    if not jump or seq.at(pos + jump) != HALT:
        return None
    return seq.replace_at(pos, HALT, jump + 1)


# Rules about the repeating part

def pga26(seq: InstrSeq, pos: int) -> Optional[InstrSeq]:
    """#k+1;(u1..uk;u)* = (u;u1..uk)*"""
    k = _period_length(seq)
    jump = _jump(seq.at(pos))
    if not k or pos != len(seq.prefix) - 1 or not jump or jump % k:
        return None
    body = (seq.at(pos + jump),) + tuple(seq.at(pos + 1 + i) for i in range(jump - 1))
    return InstrSeq(seq.prefix[:pos], body)


def _jump_loop_to_action(last_type: Type) -> Rule:
    """(#k+2;#k+1;u1..uk;+a)* = (a;#k+1;u1..uk;a)* (and -a, a)"""
    def rule(seq: InstrSeq, pos: int) -> Optional[InstrSeq]:
        k = _period_length(seq)
        m = len(seq.prefix)
        jump = _jump(seq.at(pos))
        if not k or pos < m or jump is None or jump < 2:
            return None
        body_length = jump + 1
        if body_length % k or _jump(seq.at(pos + 1)) != jump - 1:
            return None
        last = seq.at(pos + body_length - 1)
        if not isinstance(last, last_type):
            return None
        middle = tuple(seq.at(pos + 2 + i) for i in range(body_length - 3))
        body = (Plain(last.action), Jump(jump - 1)) + middle + (Plain(last.action),)
        unfolded = tuple(seq.at(i) for i in range(m, pos))
        return InstrSeq(seq.prefix + unfolded, body)
    return rule


def pga30(seq: InstrSeq, pos: int) -> Optional[InstrSeq]:
    """(u1..uk+1)* = a* when every u_i carries action a or jumps onto an instruction that does"""
    if seq.period is None or pos != len(seq.prefix):
        return None
    body = seq.period
    size = len(body)
    actions = {u.action for u in body if carries_action(u)}
    if len(actions) != 1:
        return None
    action = actions.pop()
    for index, u in enumerate(body):
        if carries_action(u):
            continue
        jump = _jump(u)
        if jump is None or not 1 <= jump <= size - 1:
            return None
        if not carries_action(body[(index + jump) % size]):
            return None
    result = InstrSeq(seq.prefix, (Plain(action),))
    return result if result != seq else None


RULES: Dict[str, Rule] = {
    'PGA5': pga5,
    'PGA6': pga6,
    'PGA7': pga7,
    'PGA8': pga8,
    'PGA9': _test_rule(PosTest, _tail_two_zero_jumps),
    'PGA10': _test_rule(NegTest, _tail_two_zero_jumps),
    'PGA11': _test_rule(PosTest, _tail_unit_jump),
    'PGA12': _test_rule(NegTest, _tail_unit_jump),
    'PGA13': _test_rule(PosTest, _tail_converging_jumps),
    'PGA14': _test_rule(NegTest, _tail_converging_jumps),
    'PGA15': _test_rule(PosTest, _tail_two_halts),
    'PGA16': _test_rule(NegTest, _tail_two_halts),
    'PGA17': _test_rule(PosTest, _tail_repeated_instruction),
    'PGA18': _test_rule(NegTest, _tail_repeated_instruction),
    'PGA19': _leading_jump_block(PosTest),
    'PGA20': _leading_jump_block(NegTest),
    'PGA21': pga21,
    'PGA22': _shortened_double_jump(PosTest),
    'PGA23': _shortened_double_jump(NegTest),
    'PGA24': pga24,
    'PGA25': pga25,
    'PGA26': pga26,
    'PGA27': _jump_loop_to_action(PosTest),
    'PGA28': _jump_loop_to_action(NegTest),
    'PGA29': _jump_loop_to_action(Plain),
    'PGA30': pga30,
}

SIMPLIFICATION_AXIOMS = tuple(f"PGA{i}" for i in range(9, 31))

# Order in which third canonicalization looks for redexes
THIRD_CANONICAL_PRIORITY: Tuple[str, ...] = (
    'PGA30',
    'PGA22', 'PGA23', 'PGA24',
    'PGA25', 'PGA26', 'PGA27', 'PGA28', 'PGA29',
    'PGA9', 'PGA10', 'PGA11', 'PGA12', 'PGA13', 'PGA14',
    'PGA15', 'PGA16', 'PGA17', 'PGA18',
    'PGA19', 'PGA20', 'PGA21',
)


def apply_rule(axiom_id: str, seq: InstrSeq, pos: int) -> Optional[InstrSeq]:
    """Apply one axiom at a position; None when it does not match or changes nothing"""
    try:
        rule = RULES[axiom_id]
    except KeyError:
        raise ValueError(f"No rewrite rule for axiom {axiom_id}") from None
    result = rule(seq, pos)
    if result is None or result == seq:
        return None
    return result


def find_redex(seq: InstrSeq,
               priority: Tuple[str, ...] = THIRD_CANONICAL_PRIORITY) -> Optional[Tuple[str, int]]:
    """First (axiom id, position) whose left-hand side matches, in priority order"""
    for axiom_id in priority:
        for pos in range(seq.size):
            if apply_rule(axiom_id, seq, pos) is not None:
                return axiom_id, pos
    return None


def all_redexes(seq: InstrSeq) -> List[Tuple[str, int]]:
    """Every matching (axiom id, position) for the simplification axioms"""
    return [(axiom_id, pos) for axiom_id in SIMPLIFICATION_AXIOMS
            for pos in range(seq.size) if apply_rule(axiom_id, seq, pos) is not None]
