from hypothesis import given, settings

from src.algorithms.bisimulation import bisimilar
from src.algorithms.canonical import first_canonical
from src.algorithms.extraction import (DEAD_STATE, TERM_STATE, ExtractionGraph, extract,
                                       extract_term, jump_cycle_positions)
from src.core.instruction import (HALT, BasicInstruction, Halt, Jump, NegTest, Plain,
                                  PosTest)
from src.core.parser import parse_term
from src.core.term import InstrSeq
from src.core.thread import Node, RegularThread, compose_post

from .strategies import terms

a = BasicInstruction('a')
A = Plain(a)

dead = RegularThread.single(Node.dead())
stop = RegularThread.single(Node.term())


def nodes(text):
    return extract_term(parse_term(text)).nodes


def test_halt():
    assert nodes("!") == (Node.term(),)
    assert nodes("!;a") == (Node.term(),)


def test_zero_jump_is_inaction():
    assert nodes("#0;a") == (Node.dead(),)


def test_positive_test():
    assert nodes("+a;!;#0") == (Node.act(a, 1, 2), Node.term(), Node.dead())


def test_negative_test():
    assert nodes("-a;!;#0") == (Node.act(a, 1, 2), Node.dead(), Node.term())


def test_test_with_equal_branches():
    assert nodes("+a;!;!") == (Node.act(a, 1, 1), Node.term())


def test_running_off_the_end_is_inaction():
    assert nodes("a") == (Node.act(a, 1, 1), Node.dead())
    assert nodes("#3;a") == (Node.dead(),)


def test_jump_loop_is_inaction():
    assert nodes("(#1)*") == (Node.dead(),)
    assert nodes("a;(#1;#1)*") == (Node.act(a, 1, 1), Node.dead())


def test_repetition_gives_a_loop():
    assert nodes("(a)*") == (Node.act(a, 0, 0),)
    assert nodes("(+a;#2)*") == (Node.act(a, 1, 0), Node.dead())


def test_jump_cycle_positions():
    assert jump_cycle_positions(InstrSeq((), (Jump(1),))).tolist() == [True]
    assert jump_cycle_positions(InstrSeq((Jump(1), A))).tolist() == [False, False]
    assert jump_cycle_positions(InstrSeq((A,), (Jump(1), Jump(1)))).tolist() == [False, True, True]
    assert jump_cycle_positions(InstrSeq((Jump(2), A, Jump(0)))).tolist() == [False, False, False]


def test_entry_states():
    graph = ExtractionGraph(InstrSeq((Jump(2), A, HALT)))
    assert graph.entry(0) == TERM_STATE
    assert graph.entry(3) == DEAD_STATE
    assert graph.context_entry(0) == DEAD_STATE
    assert graph.context_entry(2) == graph.entry(1)


def _tail_thread(seq, k):
    """Thread of seq with its first k instructions removed"""
    if seq.period is None:
        rest = seq.prefix[k:]
        return extract(InstrSeq(rest)) if rest else dead
    unfolded = seq.unfold(k // len(seq.period) + 1)
    return extract(InstrSeq(unfolded.prefix[k:], unfolded.period))


@settings(max_examples=300, deadline=None)
@given(terms())
def test_extraction_equations(t):
    seq = first_canonical(t)
    u = seq.at(0)
    if isinstance(u, Halt):
        expected = stop
    elif isinstance(u, Jump):
        expected = dead if u.length == 0 else _tail_thread(seq, u.length)
    elif isinstance(u, Plain):
        expected = compose_post(u.action, _tail_thread(seq, 1), _tail_thread(seq, 1))
    elif isinstance(u, PosTest):
        expected = compose_post(u.action, _tail_thread(seq, 1), _tail_thread(seq, 2))
    else:
        assert isinstance(u, NegTest)
        expected = compose_post(u.action, _tail_thread(seq, 2), _tail_thread(seq, 1))
    assert bisimilar(extract(seq), expected)


@settings(max_examples=200, deadline=None)
@given(terms())
def test_state_count_is_bounded(t):
    seq = first_canonical(t)
    assert len(extract(seq)) <= seq.size + 2


@settings(max_examples=200, deadline=None)
@given(terms())
def test_unfolding_keeps_behaviour(t):
    seq = first_canonical(t)
    assert bisimilar(extract(seq), extract(seq.unfold(2)))
