from hypothesis import strategies as st

from src.core.instruction import (HALT, BasicInstruction, BoolRegInstr, Jump, NegTest,
                                  Plain, PosTest, UnaryBoolFn)
from src.core.term import Concat, Instr, Repeat, sequence_term
from src.core.thread import Node, RegularThread

ACTIONS = [BasicInstruction('a'), BasicInstruction('b')]


def actions():
    return st.sampled_from(ACTIONS)


def br_actions():
    functions = list(UnaryBoolFn)
    return st.builds(BoolRegInstr, st.just('f'), st.sampled_from(functions),
                     st.sampled_from(functions))


def instructions(max_jump=4, action_strategy=None):
    action_strategy = actions() if action_strategy is None else action_strategy
    return st.one_of(
        st.builds(Plain, action_strategy),
        st.builds(PosTest, action_strategy),
        st.builds(NegTest, action_strategy),
        st.builds(Jump, st.integers(min_value=0, max_value=max_jump)),
        st.just(HALT),
    )


def instruction_lists(min_size=1, max_size=4, max_jump=4, action_strategy=None):
    return st.lists(instructions(max_jump, action_strategy), min_size=min_size, max_size=max_size)


def finite_terms(max_size=4, max_jump=4, action_strategy=None):
    """Right-nested repetition-free terms"""
    return instruction_lists(1, max_size, max_jump, action_strategy).map(sequence_term)


def bracketed_terms(max_leaves=4, max_jump=4):
    """Repetition-free terms with arbitrary bracketing"""
    leaves = instructions(max_jump).map(Instr)
    return st.recursive(leaves, lambda children: st.builds(Concat, children, children),
                        max_leaves=max_leaves)


def terms(max_size=4, max_jump=4, action_strategy=None):
    """Closed terms, about half of them with a repetition"""
    finite = finite_terms(max_size, max_jump, action_strategy)
    periodic = st.builds(Repeat, finite)
    with_prefix = st.builds(Concat, finite, periodic)
    return st.one_of(finite, periodic, with_prefix)


def periodic_terms(max_size=3, max_jump=4):
    finite = finite_terms(max_size, max_jump)
    return st.one_of(st.builds(Repeat, finite), st.builds(Concat, finite, st.builds(Repeat, finite)))


@st.composite
def regular_threads(draw, max_states=4, action_strategy=None):
    """Random rooted behaviour graphs; build() drops unreachable states"""
    action_strategy = actions() if action_strategy is None else action_strategy
    size = draw(st.integers(min_value=1, max_value=max_states))
    successors = st.integers(min_value=0, max_value=size - 1)
    nodes = []
    for _ in range(size):
        kind = draw(st.sampled_from(['D', 'S', 'act', 'act']))
        if kind == 'D':
            nodes.append(Node.dead())
        elif kind == 'S':
            nodes.append(Node.term())
        else:
            nodes.append(Node.act(draw(action_strategy), draw(successors), draw(successors)))
    return RegularThread.build(nodes, 0)
