from hypothesis import assume, given, settings

from src.algorithms.bisimulation import distinguishing_depth, project
from src.algorithms.canonical import first_canonical
from src.algorithms.equivalence import (CongruenceResult, CongruenceWitness, ContextBounds,
                                        Equal, NotEqual, Unknown, bcong, behaviour_key, beq,
                                        congruence_fingerprint, derivable_equal, isc_equal,
                                        sc_equal, second_canonical, third_canonical)
from src.algorithms.extraction import extract_term
from src.core.instruction import HALT, BasicInstruction, Jump, Plain
from src.core.parser import parse_term
from src.core.term import Instr, InstrSeq, concat

from .strategies import finite_terms, terms

A = Plain(BasicInstruction('a'))


def p(text):
    return parse_term(text)


def in_context(t, l, n):
    """#l;t;!^n"""
    return concat(Instr(Jump(l)), t, *[Instr(HALT)] * n)


def test_isc():
    assert isc_equal(p("(a;b)*"), p("a;(b;a)*"))
    assert isc_equal(p("(a;a)*"), p("(a)*"))
    assert not isc_equal(p("a;b"), p("b;a"))
    assert not isc_equal(p("a"), p("(a)*"))


def test_sc():
    assert sc_equal(p("#1;#1;a"), p("#2;#1;a"))
    assert not isc_equal(p("#1;#1;a"), p("#2;#1;a"))
    assert sc_equal(p("#5;(a;b)*"), p("#1;(a;b)*"))
    assert not sc_equal(p("+a;!;!"), p("a;!;!"))


def test_beq():
    assert beq(p("+a;!;!"), p("a;!;!"))
    assert beq(p("#1;a"), p("a"))
    assert beq(p("a;#0"), p("a"))
    assert not beq(p("a;!"), p("a"))


def test_bcong_finds_context_that_reaches_inside():
    result = bcong(p("#1;a"), p("a"))
    assert not result
    assert result.witness == CongruenceWitness(2, 0, 1)
    assert result.to_dict() == {'congruent': False, 'witness': {'l': 2, 'n': 0, 'depth': 1}}


def test_bcong_uses_halt_suffix():
    # behave alike until a context appends a halt
    assert beq(p("a;#0"), p("a"))
    result = bcong(p("a;#0"), p("a"))
    assert result.witness == CongruenceWitness(1, 1, 2)


def test_bcong_of_test_before_halts():
    assert bcong(p("+a;!;!"), p("-a;!;!"))
    assert bcong(p("+a;!;!"), p("a;!;!")) == CongruenceResult(True)


def test_bounds():
    s1, s2 = first_canonical(p("#1;a")), first_canonical(p("a"))
    assert ContextBounds.for_sequences(s1, s2) == ContextBounds(4, 7)
    assert ContextBounds.for_pair(p("(a)*"), p("a;(b)*")) == ContextBounds(4, 0)
    assert ContextBounds.for_enumeration(3, 4) == ContextBounds(5, 11)
    assert ContextBounds(2, 3).doubled() == ContextBounds(4, 6)


def test_derivable_equal_by_canonical_form():
    verdict = derivable_equal(p("+a;!;!"), p("a;!;!"))
    assert isinstance(verdict, Equal)
    assert verdict.canonical == InstrSeq((A, HALT, HALT))
    assert verdict.traces[0].axioms() == ['PGA15']
    assert verdict.derivation().axioms() == ['PGA15']


def test_derivable_equal_of_identical_terms():
    verdict = derivable_equal(p("a"), p("a"))
    assert isinstance(verdict, Equal)
    assert len(verdict.traces[0]) == 0 and len(verdict.traces[1]) == 0
    assert verdict.to_dict()['verdict'] == 'equal'


def test_derivable_equal_of_negative_test():
    verdict = derivable_equal(p("-a;!;!"), p("+a;!;!"))
    assert isinstance(verdict, Equal)
    assert verdict.derivation().axioms() == ['PGA16', 'PGA15']


def test_derivable_equal_of_unrolled_loop():
    assert isinstance(derivable_equal(p("(a)*"), p("(a;a)*")), Equal)


def test_not_derivable():
    verdict = derivable_equal(p("#1;a"), p("a"))
    assert isinstance(verdict, NotEqual)
    assert verdict.witness == CongruenceWitness(2, 0, 1)
    assert verdict.to_dict() == {'verdict': 'not-equal', 'witness': {'l': 2, 'n': 0, 'depth': 1}}


def test_unknown_to_dict():
    verdict = Unknown((InstrSeq((), (A,)), InstrSeq((A,), (HALT,))))
    assert verdict.to_dict() == {'verdict': 'unknown', 'reason': 'repetition',
                                 'canonical': ["(a)*", "a;(!)*"]}


@settings(max_examples=200, deadline=None)
@given(terms(max_size=3, max_jump=3), terms(max_size=3, max_jump=3))
def test_witness_is_a_distinguishing_context(t1, t2):
    result = bcong(t1, t2)
    assume(not result)
    w = result.witness
    assert w.l >= 1
    c1, c2 = extract_term(in_context(t1, w.l, w.n)), extract_term(in_context(t2, w.l, w.n))
    assert not beq(in_context(t1, w.l, w.n), in_context(t2, w.l, w.n))
    assert distinguishing_depth(c1, c2) == w.depth
    assert project(w.depth, c1) != project(w.depth, c2)
    assert project(w.depth - 1, c1) == project(w.depth - 1, c2)


@settings(max_examples=200, deadline=None)
@given(terms(max_size=3, max_jump=3), terms(max_size=3, max_jump=3))
def test_relation_hierarchy(t1, t2):
    if isc_equal(t1, t2):
        assert sc_equal(t1, t2)
    if sc_equal(t1, t2):
        assert bcong(t1, t2)
    if bcong(t1, t2):
        assert beq(t1, t2)


@settings(max_examples=200, deadline=None)
@given(terms())
def test_canonical_forms_are_congruent(t):
    assert isc_equal(t, first_canonical(t).to_term())
    assert sc_equal(t, second_canonical(t).to_term())
    assert bcong(t, third_canonical(t)[0].to_term())


@settings(max_examples=200, deadline=None)
@given(finite_terms(max_size=3, max_jump=3), finite_terms(max_size=3, max_jump=3))
def test_fingerprint_decides_bcong(t1, t2):
    bounds = ContextBounds.for_enumeration(3, 3)
    same = congruence_fingerprint(t1, bounds) == congruence_fingerprint(t2, bounds)
    assert same == bool(bcong(t1, t2, bounds=bounds))


@settings(max_examples=200, deadline=None)
@given(terms(max_size=3, max_jump=3), terms(max_size=3, max_jump=3))
def test_behaviour_key_decides_beq(t1, t2):
    assert (behaviour_key(t1) == behaviour_key(t2)) == beq(t1, t2)


@settings(max_examples=100, deadline=None)
@given(finite_terms(max_size=3, max_jump=3), finite_terms(max_size=3, max_jump=3))
def test_bounds_are_stable(t1, t2):
    bounds = ContextBounds.for_pair(t1, t2)
    assert bool(bcong(t1, t2)) == bool(bcong(t1, t2, bounds=bounds.doubled()))


@settings(max_examples=200, deadline=None)
@given(finite_terms(max_size=3, max_jump=3), finite_terms(max_size=3, max_jump=3))
def test_repetition_free_terms_are_decided(t1, t2):
    verdict = derivable_equal(t1, t2)
    assert isinstance(verdict, (Equal, NotEqual))
    assert isinstance(verdict, Equal) == bool(bcong(t1, t2))
