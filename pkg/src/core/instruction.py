"""
Basic and primitive instructions of single-pass instruction sequences
"""

import re
from dataclasses import dataclass
from enum import Enum
from typing import Union


class UnaryBoolFn(Enum):
    """The four unary functions on bits used by Boolean register instructions"""
    F = 'F'
    T = 'T'
    I = 'I'
    C = 'C'

    def eval(self, bit: int) -> int:
        """Apply the function to a bit"""
        if bit not in (0, 1):
            raise ValueError(f"Not a bit: {bit}")
        if self is UnaryBoolFn.F:
            return 0
        if self is UnaryBoolFn.T:
            return 1
        if self is UnaryBoolFn.I:
            return bit
        return 1 - bit


@dataclass(frozen=True)
class BasicInstruction:
    """An opaque basic instruction symbol"""
    symbol: str

    def __post_init__(self):
        if not self.symbol:
            raise ValueError("Basic instruction symbol must be nonempty")

    def __str__(self) -> str:
        return self.symbol


BOOL_REG_PATTERN = re.compile(r'^([A-Za-z_][A-Za-z0-9_]*)\.([FTIC])/([FTIC])$')


@dataclass(frozen=True)
class BoolRegInstr:
    """Boolean register instruction f.p/q: reply p(b), new register content q(b)"""
    focus: str
    reply: UnaryBoolFn
    effect: UnaryBoolFn

    @property
    def symbol(self) -> str:
        return f"{self.focus}.{self.reply.value}/{self.effect.value}"

    @classmethod
    def from_symbol(cls, text: str) -> 'BoolRegInstr':
        """Read the focus.R/E form"""
        match = BOOL_REG_PATTERN.match(text)
        if not match:
            raise ValueError(f"Not a Boolean register instruction: {text}")
        focus, reply, effect = match.groups()
        return cls(focus, UnaryBoolFn(reply), UnaryBoolFn(effect))

    def __str__(self) -> str:
        return self.symbol


Action = Union[BasicInstruction, BoolRegInstr]


@dataclass(frozen=True)
class Plain:
    """Plain basic instruction a"""
    action: Action

    def __str__(self) -> str:
        return str(self.action)


@dataclass(frozen=True)
class PosTest:
    """Positive test instruction +a"""
    action: Action

    def __str__(self) -> str:
        return f"+{self.action}"


@dataclass(frozen=True)
class NegTest:
    """Negative test instruction -a"""
    action: Action

    def __str__(self) -> str:
        return f"-{self.action}"


@dataclass(frozen=True)
class Jump:
    """Forward jump #l; #0 is guaranteed inaction"""
    length: int

    def __post_init__(self):
        if self.length < 0:
            raise ValueError(f"Jump length must be non-negative, got {self.length}")

    def __str__(self) -> str:
        return f"#{self.length}"


@dataclass(frozen=True)
class Halt:
    """Termination instruction !"""

    def __str__(self) -> str:
        return "!"


HALT = Halt()

PrimitiveInstruction = Union[Plain, PosTest, NegTest, Jump, Halt]

ACTION_INSTRUCTIONS = (Plain, PosTest, NegTest)


def carries_action(u: PrimitiveInstruction) -> bool:
    """True for plain instructions and tests"""
    return isinstance(u, ACTION_INSTRUCTIONS)
