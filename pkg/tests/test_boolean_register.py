import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.algorithms.bisimulation import bisimilar
from src.algorithms.boolean_register import (BoolRegAlphabet, br_action_signature, br_bcong,
                                             br_beq, instr_normalize, normalization_path,
                                             require_bool_register)
from src.algorithms.canonical import replay_trace, to_first_canonical, to_third_canonical
from src.algorithms.equivalence import Equal, Unknown, beq, derivable_equal, third_canonical
from src.core.alphabet import GenericAlphabet
from src.core.errors import AlphabetError, UnknownInstructionError
from src.core.instruction import (BasicInstruction, BoolRegInstr, NegTest, Plain, PosTest,
                                  UnaryBoolFn)
from src.core.parser import parse_term
from src.core.term import InstrSeq
from src.core.thread import compose_post

from .strategies import br_actions, regular_threads, terms

F, T, I, C = UnaryBoolFn.F, UnaryBoolFn.T, UnaryBoolFn.I, UnaryBoolFn.C

BR = BoolRegAlphabet()

FORMS = [kind(BoolRegInstr('f', reply, effect))
         for kind in (Plain, PosTest, NegTest) for reply in UnaryBoolFn for effect in UnaryBoolFn]


def br(text):
    return parse_term(text, BR)


def _meaning(u):
    """Effect on the register and control flow as a function of the bit read"""
    action = u.action
    if isinstance(u, Plain):
        flow = 'continue'
    else:
        replies = (action.reply.eval(0), action.reply.eval(1))
        if isinstance(u, NegTest):
            replies = tuple(1 - r for r in replies)
        flow = {(1, 1): 'continue', (0, 0): 'skip', (0, 1): 'read', (1, 0): 'negated read'}[replies]
    return action.effect, flow


def _axiom_closure():
    """Union-find over the 48 forms, joined by every instance of PGAbr1-PGAbr5"""
    parent = {u: u for u in FORMS}

    def find(u):
        while parent[u] != u:
            u = parent[u]
        return u

    def union(u, v):
        parent[find(u)] = find(v)

    for effect in UnaryBoolFn:
        def instr(reply):
            return BoolRegInstr('f', reply, effect)
        union(PosTest(instr(F)), NegTest(instr(T)))
        union(PosTest(instr(T)), NegTest(instr(F)))
        union(PosTest(instr(I)), NegTest(instr(C)))
        union(PosTest(instr(C)), NegTest(instr(I)))
        for reply in UnaryBoolFn:
            union(PosTest(instr(T)), Plain(instr(reply)))
    return find


def test_forty_eight_forms_fall_into_sixteen_classes():
    assert len(FORMS) == 48
    assert len({instr_normalize(u) for u in FORMS}) == 16


@pytest.mark.parametrize("u1, u2", list(itertools.combinations(FORMS, 2)))
def test_normalization_matches_instruction_meaning(u1, u2):
    assert (instr_normalize(u1) == instr_normalize(u2)) == (_meaning(u1) == _meaning(u2))


def test_normalization_matches_axiom_closure():
    find = _axiom_closure()
    for u1, u2 in itertools.combinations(FORMS, 2):
        assert (instr_normalize(u1) == instr_normalize(u2)) == (find(u1) == find(u2))


@pytest.mark.parametrize("u", FORMS)
def test_normal_forms_are_fixed_points(u):
    normal = instr_normalize(u)
    assert normalization_path(normal) == []
    assert instr_normalize(normal) == normal


def test_normalize_examples():
    assert instr_normalize(PosTest(BoolRegInstr('f', F, I))) == NegTest(BoolRegInstr('f', T, I))
    assert instr_normalize(NegTest(BoolRegInstr('f', F, C))) == Plain(BoolRegInstr('f', T, C))
    assert instr_normalize(Plain(BoolRegInstr('f', I, F))) == Plain(BoolRegInstr('f', T, F))
    assert instr_normalize(NegTest(BoolRegInstr('f', C, T))) == PosTest(BoolRegInstr('f', I, T))
    assert instr_normalize(Plain(BoolRegInstr('f', C, T))) == Plain(BoolRegInstr('f', T, T))
    assert instr_normalize(PosTest(BoolRegInstr('f', I, F))) == PosTest(BoolRegInstr('f', I, F))


def test_normalization_path_names_axioms():
    path = normalization_path(PosTest(BoolRegInstr('f', C, I)))
    assert path == [('PGAbr4', NegTest(BoolRegInstr('f', I, I)))]


def test_normalization_rejects_generic_actions():
    with pytest.raises(AlphabetError):
        normalization_path(Plain(BasicInstruction('a')))


def test_signature_swaps_branches():
    f_i = BoolRegInstr('f', F, I)
    t_i = BoolRegInstr('f', T, I)
    assert br_action_signature(f_i, 1, 2) == br_action_signature(t_i, 2, 1)
    assert br_action_signature(BoolRegInstr('f', I, I), 3, 3) == br_action_signature(t_i, 3, 5)
    assert br_action_signature(BoolRegInstr('f', I, I), 1, 2) == ('f', 'branch', 'I', 1, 2)
    assert br_action_signature(BoolRegInstr('f', C, I), 2, 1) == ('f', 'branch', 'I', 1, 2)


def test_br_beq():
    assert br_beq(br("+f.F/I;!;#0"), br("-f.T/I;!;#0"))
    assert br_beq(br("f.T/T;!"), br("f.F/T;!"))
    assert not beq(br("f.T/T;!"), br("f.F/T;!"))
    assert not br_beq(br("f.T/T;!"), br("f.T/F;!"))
    assert not br_beq(br("+f.I/T;!;#0"), br("-f.I/T;!;#0"))


def test_br_bcong():
    assert br_bcong(br("+f.F/I;!;#0"), br("-f.T/I;!;#0"))
    assert br_bcong(br("+f.I/I;!;!"), br("f.T/I;!;!"))
    assert not br_bcong(br("+f.I/I;!;#0"), br("f.T/I;!;#0"))


def test_br_operations_need_br_alphabet():
    with pytest.raises(AlphabetError):
        require_bool_register(GenericAlphabet(['a']))
    with pytest.raises(AlphabetError):
        br_beq(br("f.T/T"), br("f.T/T"), GenericAlphabet(['a']))
    assert isinstance(require_bool_register(None), BoolRegAlphabet)


def test_alphabet_validation():
    with pytest.raises(ValueError):
        BoolRegAlphabet([])
    with pytest.raises(ValueError):
        BoolRegAlphabet(['1f'])
    with pytest.raises(UnknownInstructionError):
        BR.make_action("f.X/T")


def test_basic_instructions():
    assert len(BR.basic_instructions()) == 16
    assert len(BoolRegAlphabet(['f', 'g']).basic_instructions()) == 32


def test_derivable_equal_normalizes_instructions():
    verdict = derivable_equal(br("+f.F/I;!;#0"), br("-f.T/I;!;#0"), BR)
    assert isinstance(verdict, Equal)
    assert 'PGAbr1' in verdict.traces[0].axioms()


def test_congruent_terms_with_distinct_canonical_forms_are_unknown():
    t1, t2 = br("+f.F/F;f.F/F"), br("#1;f.F/F")
    assert br_bcong(t1, t2)
    verdict = derivable_equal(t1, t2, BR)
    assert isinstance(verdict, Unknown)
    assert verdict.reason == 'instruction-axioms'
    assert [str(s) for s in verdict.canonical] == ["-f.T/F;f.T/F", "#1;f.T/F"]


def test_canonical_form_uses_normal_instructions():
    seq, trace = third_canonical(br("f.F/T"), BR)
    assert seq == InstrSeq((Plain(BoolRegInstr('f', T, T)),))
    assert trace.axioms() == ['PGAbr5', 'PGAbr5']


br_terms = terms(max_size=3, max_jump=3, action_strategy=br_actions())


@settings(max_examples=200, deadline=None)
@given(br_terms)
def test_br_canonical_form_is_congruent(t):
    canonical, _ = third_canonical(t, BR)
    assert br_bcong(t, canonical.to_term(), BR)
    first = to_first_canonical(t)[0]
    replayed, trace = to_third_canonical(first, BR.normalize)
    assert replayed == canonical
    assert replay_trace(first, trace, BR.normalize) == canonical


@settings(max_examples=200, deadline=None)
@given(br_terms)
def test_normalized_instructions_keep_behaviour(t):
    seq = to_first_canonical(t)[0]
    normalized = InstrSeq(tuple(instr_normalize(u) for u in seq.prefix),
                          tuple(instr_normalize(u) for u in seq.period) if seq.period else None)
    assert br_beq(t, normalized.to_term(), BR)


threads = regular_threads(max_states=3, action_strategy=br_actions())
effects = st.sampled_from(list(UnaryBoolFn))


@settings(max_examples=200, deadline=None)
@given(threads, threads, effects)
def test_false_reply_swaps_branches(x, y, effect):
    lhs = compose_post(BoolRegInstr('f', F, effect), x, y)
    rhs = compose_post(BoolRegInstr('f', T, effect), y, x)
    assert bisimilar(lhs, rhs, BR)


@settings(max_examples=200, deadline=None)
@given(threads, threads, effects)
def test_complement_reply_swaps_branches(x, y, effect):
    lhs = compose_post(BoolRegInstr('f', C, effect), x, y)
    rhs = compose_post(BoolRegInstr('f', I, effect), y, x)
    assert bisimilar(lhs, rhs, BR)


@settings(max_examples=200, deadline=None)
@given(threads, threads, effects, st.sampled_from(list(UnaryBoolFn)))
def test_true_reply_ignores_false_branch(x, y, effect, reply):
    lhs = compose_post(BoolRegInstr('f', T, effect), x, y)
    rhs = compose_post(BoolRegInstr('f', reply, effect), x, x)
    assert bisimilar(lhs, rhs, BR)
