"""
Parsing and printing of PGA terms in the ASCII concrete syntax

    term := seq ; seq := item (";" item)* ; item := prim | "(" seq ")" "*"?
    prim := ident | "+" ident | "-" ident | "#" nat | "!"
"""

import logging
from typing import List

from lark import Lark, Transformer
from lark.exceptions import UnexpectedInput, VisitError

from .alphabet import DEFAULT_ALPHABET
from .errors import RepetitionError, TermSyntaxError
from .instruction import HALT, Jump, NegTest, Plain, PosTest
from .term import Concat, Instr, Repeat, Term, concat

logger = logging.getLogger(__name__)

GRAMMAR = r"""
    ?start: seq

    seq: item (";" item)*

    ?item: prim
         | "(" seq ")"          -> group
         | "(" seq ")" "*"      -> repeat

    prim: IDENT                 -> plain
        | "+" IDENT             -> pos_test
        | "-" IDENT             -> neg_test
        | "#" NAT               -> jump
        | "!"                   -> halt

    IDENT: /[A-Za-z_][A-Za-z0-9_]*(\.[FTIC]\/[FTIC])?/
    NAT: /[0-9]+/

    %import common.WS
    %ignore WS
"""

_PARSER = Lark(GRAMMAR, parser='lalr')


class TermBuilder(Transformer):
    """Builds Term values from the parse tree, checking symbols against the alphabet"""

    def __init__(self, alphabet):
        super().__init__()
        self.alphabet = alphabet

    def plain(self, items):
        return Instr(Plain(self.alphabet.make_action(str(items[0]))))

    def pos_test(self, items):
        return Instr(PosTest(self.alphabet.make_action(str(items[0]))))

    def neg_test(self, items):
        return Instr(NegTest(self.alphabet.make_action(str(items[0]))))

    def jump(self, items):
        return Instr(Jump(int(items[0])))

    def halt(self, items):
        return Instr(HALT)

    def seq(self, items):
        return concat(*items)

    def group(self, items):
        return items[0]

    def repeat(self, items):
        return Repeat(items[0])


def parse_term(text: str, alphabet=None) -> Term:
    """
    Parse a term

    Args:
        text: Term text, e.g. "+a;#2;!" or "(a;b)*"
        alphabet: Alphabet descriptor; an open generic alphabet by default

    Returns:
        The Term denoted by text
    """
    alphabet = alphabet or DEFAULT_ALPHABET
    if not text or not text.strip():
        raise TermSyntaxError("Empty input", 0)
    try:
        tree = _PARSER.parse(text)
    except UnexpectedInput as e:
        position = getattr(e, 'pos_in_stream', None)
        if position is None:
            position = len(text.rstrip())
        logger.debug(f"Syntax error in {text!r}: {e}")
        raise TermSyntaxError(f"Syntax error in term {text.strip()!r}", position) from None
    try:
        return TermBuilder(alphabet).transform(tree)
    except VisitError as e:
        raise e.orig_exc from None


def _format_operand(t: Term) -> str:
    if isinstance(t, Concat):
        return f"({format_term(t)})"
    return format_term(t)


def format_term(t: Term) -> str:
    """Canonical textual rendering; left-nested concatenations keep their parentheses"""
    if isinstance(t, Instr):
        return str(t.instruction)
    if isinstance(t, Repeat):
        return f"({format_term(t.body)})*"
    parts: List[str] = []
    node: Term = t
    while isinstance(node, Concat):
        parts.append(_format_operand(node.left))
        node = node.right
    parts.append(format_term(node))
    return ';'.join(parts)


def length(t: Term) -> int:
    """Number of primitive instructions of a repetition-free term"""
    count = 0
    stack = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, Repeat):
            raise RepetitionError(f"length is undefined for terms with repetition: {format_term(t)}")
        if isinstance(node, Concat):
            stack.append(node.left)
            stack.append(node.right)
        else:
            count += 1
    return count

