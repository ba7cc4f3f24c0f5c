"""
Boolean register instructions f.p/q: instruction axioms PGAbr1-PGAbr5 and
thread axioms BTAbr1-BTAbr3 as hooks for canonicalization and bisimulation
"""

import logging
from typing import FrozenSet, Hashable, Iterable, List, Optional, Tuple

from ..core.errors import AlphabetError, UnknownInstructionError
from ..core.instruction import (BoolRegInstr, NegTest, Plain, PosTest,
                                PrimitiveInstruction, UnaryBoolFn, carries_action)
from ..core.alphabet import SYMBOL_PATTERN
from .equivalence import bcong, beq

logger = logging.getLogger(__name__)

F, T, I, C = UnaryBoolFn.F, UnaryBoolFn.T, UnaryBoolFn.I, UnaryBoolFn.C

DEFAULT_FOCI = ('f',)


def _with_reply(action: BoolRegInstr, reply: UnaryBoolFn) -> BoolRegInstr:
    return BoolRegInstr(action.focus, reply, action.effect)


def normalization_path(u: PrimitiveInstruction) -> List[Tuple[str, PrimitiveInstruction]]:
    """
    Chain of PGAbr axiom applications taking u to its canonical representative

    Canonical representatives: plain instructions and always-true tests become
    Plain(f.T/e); always-false tests NegTest(f.T/e); reading tests
    PosTest(f.I/e); complemented reads NegTest(f.I/e).
    """
    if not carries_action(u):
        return []
    action = u.action
    if not isinstance(action, BoolRegInstr):
        raise AlphabetError(f"Not a Boolean register instruction: {u}")
    reply = action.reply
    if isinstance(u, Plain):
        if reply is T:
            return []
        # f.p/e = +f.T/e = f.T/e
        tested = PosTest(_with_reply(action, T))
        return [('PGAbr5', tested), ('PGAbr5', Plain(tested.action))]
    if isinstance(u, PosTest):
        if reply is T:
            return [('PGAbr5', Plain(action))]
        if reply is F:
            return [('PGAbr1', NegTest(_with_reply(action, T)))]
        if reply is C:
            return [('PGAbr4', NegTest(_with_reply(action, I)))]
        return []
    if reply is F:
        tested = PosTest(_with_reply(action, T))
        return [('PGAbr2', tested), ('PGAbr5', Plain(tested.action))]
    if reply is C:
        return [('PGAbr3', PosTest(_with_reply(action, I)))]
    return []


def instr_normalize(u: PrimitiveInstruction) -> PrimitiveInstruction:
    """Canonical representative of u under PGAbr1-PGAbr5"""
    path = normalization_path(u)
    return path[-1][1] if path else u


def br_action_signature(action: BoolRegInstr, t_block: int, f_block: int) -> Tuple:
    """
    Signature of an action node given the blocks of its successors

    Replies F and C swap the branches (BTAbr1, BTAbr2); reply T ignores the
    false branch and so does reply I when both branches are in one block (BTAbr3).
    """
    if not isinstance(action, BoolRegInstr):
        raise AlphabetError(f"Not a Boolean register instruction: {action}")
    reply = action.reply
    if reply is F:
        reply, t_block, f_block = T, f_block, t_block
    elif reply is C:
        reply, t_block, f_block = I, f_block, t_block
    if reply is T or t_block == f_block:
        return (action.focus, 'always', action.effect.value, t_block)
    return (action.focus, 'branch', action.effect.value, t_block, f_block)


class BoolRegAlphabet:
    """Basic instructions f.p/q over a set of foci"""

    name = 'br'
    is_bool_register = True

    def __init__(self, foci: Optional[Iterable[str]] = None):
        self.foci: Optional[FrozenSet[str]] = None
        if foci is not None:
            self.foci = frozenset(foci)
            for focus in self.foci:
                if not SYMBOL_PATTERN.match(focus):
                    raise ValueError(f"Invalid focus name: {focus!r}")
            if not self.foci:
                raise ValueError("Alphabet must contain at least one focus")

    def make_action(self, text: str) -> BoolRegInstr:
        """Validate a focus.R/E symbol read by the parser"""
        try:
            action = BoolRegInstr.from_symbol(text)
        except ValueError:
            raise UnknownInstructionError(
                f"Expected a Boolean register instruction focus.R/E, got {text!r}") from None
        if self.foci is not None and action.focus not in self.foci:
            raise UnknownInstructionError(
                f"Unknown focus {action.focus!r}; foci are {sorted(self.foci)}")
        return action

    def basic_instructions(self) -> List[BoolRegInstr]:
        """All 16 reply/effect pairs for every focus"""
        foci = sorted(self.foci) if self.foci is not None else list(DEFAULT_FOCI)
        return [BoolRegInstr(focus, reply, effect)
                for focus in foci for reply in UnaryBoolFn for effect in UnaryBoolFn]

    def normalize(self, u: PrimitiveInstruction) -> List[Tuple[str, PrimitiveInstruction]]:
        return normalization_path(u)

    def node_signature(self, action: BoolRegInstr, t_block: int,
                       f_block: int) -> Tuple[Hashable, int, int]:
        signature = br_action_signature(action, t_block, f_block)
        if signature[1] == 'always':
            return signature[:3], signature[3], -1
        return signature[:3], signature[3], signature[4]

    def canonical_node(self, action: BoolRegInstr, t_block: int,
                       f_block: int) -> Tuple[BoolRegInstr, int, int]:
        signature = br_action_signature(action, t_block, f_block)
        effect = UnaryBoolFn(signature[2])
        if signature[1] == 'always':
            return BoolRegInstr(action.focus, T, effect), signature[3], signature[3]
        return BoolRegInstr(action.focus, I, effect), signature[3], signature[4]

    def __repr__(self) -> str:
        if self.foci is None:
            return "BoolRegAlphabet()"
        return f"BoolRegAlphabet({sorted(self.foci)})"


def require_bool_register(alphabet) -> BoolRegAlphabet:
    if alphabet is None:
        return BoolRegAlphabet()
    if not getattr(alphabet, 'is_bool_register', False):
        raise AlphabetError(f"Boolean register operation needs a br alphabet, got {alphabet!r}")
    return alphabet


def br_beq(t1, t2, alphabet: Optional[BoolRegAlphabet] = None) -> bool:
    """Behavioural equivalence with thread nodes compared modulo BTAbr1-BTAbr3"""
    return beq(t1, t2, require_bool_register(alphabet))


def br_bcong(t1, t2, alphabet: Optional[BoolRegAlphabet] = None, bounds=None):
    """Behavioural congruence with thread nodes compared modulo BTAbr1-BTAbr3"""
    return bcong(t1, t2, require_bool_register(alphabet), bounds)
