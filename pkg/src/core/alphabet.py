"""
Alphabet descriptors: which basic instructions exist and how thread nodes compare
"""

import re
from typing import FrozenSet, Hashable, Iterable, List, Optional, Tuple

from .errors import UnknownInstructionError
from .instruction import Action, BasicInstruction, PrimitiveInstruction

SYMBOL_PATTERN = re.compile(r'^[A-Za-z_][A-Za-z0-9_]*$')

DEFAULT_SYMBOLS = ('a', 'b')


class GenericAlphabet:
    """A finite set of opaque basic instruction symbols, or any identifier when open"""

    name = 'generic'
    is_bool_register = False

    def __init__(self, symbols: Optional[Iterable[str]] = None):
        self.symbols: Optional[FrozenSet[str]] = None
        if symbols is not None:
            self.symbols = frozenset(symbols)
            for symbol in self.symbols:
                if not SYMBOL_PATTERN.match(symbol):
                    raise ValueError(f"Invalid basic instruction symbol: {symbol!r}")
            if not self.symbols:
                raise ValueError("Alphabet must contain at least one symbol")

    def make_action(self, text: str) -> Action:
        """Validate a symbol read by the parser"""
        if not SYMBOL_PATTERN.match(text):
            raise UnknownInstructionError(
                f"Boolean register instruction {text!r} needs the br alphabet")
        if self.symbols is not None and text not in self.symbols:
            raise UnknownInstructionError(
                f"Unknown basic instruction {text!r}; alphabet is {sorted(self.symbols)}")
        return BasicInstruction(text)

    def basic_instructions(self) -> List[Action]:
        """All basic instructions in a fixed order"""
        if self.symbols is None:
            raise ValueError("An open alphabet cannot be enumerated")
        return [BasicInstruction(s) for s in sorted(self.symbols)]

    def normalize(self, u: PrimitiveInstruction) -> List[Tuple[str, PrimitiveInstruction]]:
        """Instruction-level rewrite path; generic instructions have no axioms"""
        return []

    def node_signature(self, action: Action, t_block: int,
                       f_block: int) -> Tuple[Hashable, int, int]:
        """Signature of an action node under the current partition"""
        return action, t_block, f_block

    def canonical_node(self, action: Action, t_block: int,
                       f_block: int) -> Tuple[Action, int, int]:
        """Representative node for a block of bisimilar action nodes"""
        return action, t_block, f_block

    def __repr__(self) -> str:
        if self.symbols is None:
            return "GenericAlphabet()"
        return f"GenericAlphabet({sorted(self.symbols)})"


DEFAULT_ALPHABET = GenericAlphabet()
