from math import lcm

import pytest
from hypothesis import given, settings

from src.algorithms.bisimulation import bisimilar
from src.algorithms.canonical import (RewriteTrace, ThirdCanonicalizer, canonicalize_term,
                                      has_chained_jumps, jump_bounds_hold, minimize_periodic,
                                      replay_trace, to_first_canonical, to_second_canonical,
                                      to_third_canonical)
from src.algorithms.equivalence import isc_equal
from src.algorithms.extraction import extract, extract_term
from src.algorithms.rules import apply_rule, find_redex
from src.algorithms.verification import enumerate_terms
from src.core.alphabet import GenericAlphabet
from src.core.errors import StepBudgetExceeded, TraceReplayError
from src.core.instruction import HALT, BasicInstruction, Jump, Plain, PosTest
from src.core.parser import format_term, parse_term
from src.core.term import Concat, InstrSeq, Repeat, concat

from .strategies import finite_terms, periodic_terms, terms

A = Plain(BasicInstruction('a'))
B = Plain(BasicInstruction('b'))
PLUS_A = PosTest(BasicInstruction('a'))


def seq(text):
    return to_first_canonical(parse_term(text))[0]


def test_first_canonical_drops_everything_after_repetition():
    assert seq("(a;b)*;c") == InstrSeq((), (A, B))


def test_first_canonical_does_not_minimize():
    assert seq("(a;a)*") == InstrSeq((), (A, A))


def test_first_canonical_of_finite_term():
    assert seq("a;b") == InstrSeq((A, B))


def test_first_canonical_collapses_nested_repetition():
    assert minimize_periodic(seq("a;((b)*)*")) == InstrSeq((A,), (B,))


def test_first_canonical_flattens_left_nesting():
    flattened, trace = to_first_canonical(parse_term("(a;b);!"))
    assert flattened == InstrSeq((A, B, HALT))
    assert trace.axioms() == ['PGA1']


def test_minimize_periodic():
    assert minimize_periodic(InstrSeq((A,), (B, A, B, A))) == InstrSeq((), (A, B))
    assert minimize_periodic(InstrSeq((), (A, A))) == InstrSeq((), (A,))
    assert minimize_periodic(InstrSeq((A, B))) == InstrSeq((A, B))


def test_second_canonical_composes_jump_chain():
    result, trace = to_second_canonical(InstrSeq((Jump(1), Jump(1), A)))
    assert result == InstrSeq((Jump(2), Jump(1), A))
    assert trace.axioms() == ['PGA6']


def test_second_canonical_shortens_jump_into_period():
    result, trace = to_second_canonical(InstrSeq((Jump(5),), (A, B)))
    assert result == InstrSeq((Jump(1),), (A, B))
    assert trace.axioms() == ['PGA8', 'PGA8']


def test_second_canonical_shortens_jump_inside_period():
    result, _ = to_second_canonical(InstrSeq((), (A, Jump(3), B)))
    assert result == InstrSeq((), (A, Jump(0), B))


def test_second_canonical_replaces_infinite_jump_chain():
    result, _ = to_second_canonical(InstrSeq((A,), (Jump(1), Jump(1))))
    assert not has_chained_jumps(result)
    assert bisimilar(extract(result), extract(InstrSeq((A,), (Jump(0),))))


def test_second_canonical_keeps_jump_past_end():
    result, _ = to_second_canonical(InstrSeq((Jump(3), A)))
    assert result == InstrSeq((Jump(3), A))


def test_third_canonical_removes_test_before_halts():
    result, trace = to_third_canonical(InstrSeq((PLUS_A, HALT, HALT)))
    assert result == InstrSeq((A, HALT, HALT))
    assert 'PGA15' in trace.axioms()


def test_third_canonical_rotates_period_behind_jump():
    result, trace = to_third_canonical(InstrSeq((Jump(2),), (A, B)))
    assert result == InstrSeq((), (B, A))
    assert 'PGA26' in trace.axioms()


def test_third_canonical_collapses_single_action_period():
    result, trace = to_third_canonical(InstrSeq((), (A, PLUS_A, Jump(1))))
    assert result == InstrSeq((), (A,))
    assert trace.axioms()[0] == 'PGA30'


def test_negative_test_before_halts():
    result, trace = canonicalize_term(parse_term("-a;!;!"), 3)
    assert result == InstrSeq((A, HALT, HALT))
    assert 'PGA16' in trace.axioms()


def test_canonicalize_term_rejects_unknown_level():
    with pytest.raises(ValueError):
        canonicalize_term(parse_term("a"), 4)


def test_apply_rule_rejects_unknown_axiom():
    with pytest.raises(ValueError):
        apply_rule('PGA99', InstrSeq((A,)), 0)


def test_trace_text_and_list():
    trace = RewriteTrace([('PGA6', 0), ('minimize', 0)])
    assert trace.to_text() == "PGA6 @ 0\nminimize @ 0"
    assert RewriteTrace.from_list(trace.to_list()) == trace
    assert trace.reversed().axioms() == ['minimize', 'PGA6']


def test_replay_rejects_step_that_does_not_apply():
    with pytest.raises(TraceReplayError):
        replay_trace(InstrSeq((A, B)), RewriteTrace([('PGA15', 0)]))


def test_flattening_steps_are_kept_apart():
    _, trace = to_first_canonical(parse_term("(a;b);!"))
    assert trace.flattening == [('PGA1', 0)]
    assert trace.steps == []
    assert trace.to_text() == "PGA1 @ 0 (flatten)"
    assert RewriteTrace.from_list(trace.to_list()) == trace


def test_term_trace_replays_from_first_canonical_form():
    t = parse_term("(+a;!);!")
    result, trace = canonicalize_term(t, 3)
    assert trace.axioms()[0] == 'PGA1'
    assert replay_trace(to_first_canonical(t)[0], trace) == result


def test_step_budget_is_configurable():
    canonicalizer = ThirdCanonicalizer(budget_factor=0)
    result, _ = canonicalizer.canonicalize(InstrSeq((A, HALT)))
    assert result == InstrSeq((A, HALT))
    with pytest.raises(StepBudgetExceeded):
        canonicalizer.canonicalize(InstrSeq((PLUS_A, HALT, HALT)))


@settings(max_examples=200, deadline=None)
@given(terms())
def test_canonical_forms_preserve_behaviour(t):
    original = extract_term(t)
    for level in (1, 2, 3):
        result, _ = canonicalize_term(t, level)
        assert bisimilar(extract(result), original)


@settings(max_examples=200, deadline=None)
@given(terms())
def test_canonicalization_is_idempotent(t):
    first = minimize_periodic(to_first_canonical(t)[0])
    assert minimize_periodic(to_first_canonical(first.to_term())[0]) == first
    second, _ = to_second_canonical(first)
    assert to_second_canonical(second)[0] == second
    third, _ = to_third_canonical(first)
    assert to_third_canonical(third)[0] == third


@settings(max_examples=200, deadline=None)
@given(terms())
def test_postconditions_hold(t):
    first = to_first_canonical(t)[0]
    second, _ = to_second_canonical(first)
    assert not has_chained_jumps(second)
    assert jump_bounds_hold(second)
    third, _ = to_third_canonical(first)
    assert not has_chained_jumps(third)
    assert jump_bounds_hold(third)
    assert find_redex(third) is None


@settings(max_examples=200, deadline=None)
@given(terms())
def test_trace_replay_reproduces_result(t):
    first = to_first_canonical(t)[0]
    second, trace = to_second_canonical(first)
    assert replay_trace(first, trace) == second
    third, trace = to_third_canonical(first)
    assert replay_trace(first, trace) == third
    for level in (1, 2, 3):
        result, full = canonicalize_term(t, level)
        assert replay_trace(first, full) == result


def _same_sequence(s1, s2):
    """Brute-force comparison of the denoted sequences"""
    if s1.is_finite or s2.is_finite:
        return s1.is_finite and s2.is_finite and s1.prefix == s2.prefix
    horizon = max(len(s1.prefix), len(s2.prefix)) + 2 * lcm(len(s1.period), len(s2.period))
    return s1.window(horizon) == s2.window(horizon)


@settings(max_examples=300, deadline=None)
@given(terms(max_size=3, max_jump=1), terms(max_size=3, max_jump=1))
def test_isc_against_brute_force(t1, t2):
    expected = _same_sequence(to_first_canonical(t1)[0], to_first_canonical(t2)[0])
    assert isc_equal(t1, t2) == expected


@given(finite_terms())
def test_unfolding_equation(t):
    assert isc_equal(Repeat(t), Concat(t, Repeat(t)))
    assert isc_equal(Repeat(concat(t, t)), Repeat(t))


def _check_canonical_forms(t):
    original = extract_term(t)
    for level in (1, 2, 3):
        result, _ = canonicalize_term(t, level)
        assert bisimilar(extract(result), original), f"{format_term(t)} at level {level}"
        assert canonicalize_term(result.to_term(), level)[0] == result


@pytest.mark.slow
def test_canonical_forms_of_every_short_term():
    for t in enumerate_terms(GenericAlphabet(['a', 'b']), 3, 4):
        _check_canonical_forms(t)


@settings(max_examples=500, deadline=None)
@given(periodic_terms(max_size=4))
def test_canonical_forms_of_terms_with_repetition(t):
    _check_canonical_forms(t)
