"""
Decision procedures for equality of terms

Instruction sequence congruence and structural congruence compare canonical
forms; behavioural equivalence compares extracted threads; behavioural
congruence compares them in every context #l;t;!^n within finite bounds.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Optional, Tuple, Union

from ..core.alphabet import DEFAULT_ALPHABET
from ..core.errors import CompletenessViolation
from ..core.instruction import HALT
from ..core.term import InstrSeq, Term, is_repetition_free
from .bisimulation import (ThreadKey, bisimilar, canonical_key, disjoint_union,
                           distinguishing_depth, quotient_key, stable_partition)
from .canonical import (RewriteTrace, canonicalize_term, first_canonical,
                        to_first_canonical, to_second_canonical)
from .extraction import ExtractionGraph, extract_term

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CongruenceWitness:
    """Context #l;t;!^n in which two terms behave differently, first visible at depth"""
    l: int
    n: int
    depth: int

    def to_dict(self) -> Dict:
        return {'l': self.l, 'n': self.n, 'depth': self.depth}


@dataclass(frozen=True)
class CongruenceResult:
    """Outcome of a behavioural congruence check; truthy iff congruent"""
    congruent: bool
    witness: Optional[CongruenceWitness] = None

    def __bool__(self) -> bool:
        return self.congruent

    def to_dict(self) -> Dict:
        data = {'congruent': self.congruent}
        if self.witness is not None:
            data['witness'] = self.witness.to_dict()
        return data


@dataclass(frozen=True)
class ContextBounds:
    """Largest context jump l and halt-suffix count n that are checked"""
    max_l: int
    max_n: int

    @classmethod
    def for_sequences(cls, s1: InstrSeq, s2: InstrSeq) -> 'ContextBounds':
        max_l = max(s1.size, s2.size) + 2
        if not s1.is_finite and not s2.is_finite:
            # a halt suffix after a repetition is unreachable
            return cls(max_l, 0)
        return cls(max_l, max_l + max(s1.max_jump(), s2.max_jump()) + 2)

    @classmethod
    def for_pair(cls, t1: Term, t2: Term) -> 'ContextBounds':
        return cls.for_sequences(first_canonical(t1), first_canonical(t2))

    @classmethod
    def for_enumeration(cls, max_len: int, jump_bound: int) -> 'ContextBounds':
        """Bounds covering every pair of finite terms up to max_len instructions"""
        max_l = max_len + 2
        return cls(max_l, max_l + jump_bound + 2)

    def doubled(self) -> 'ContextBounds':
        return ContextBounds(2 * self.max_l, 2 * self.max_n)

    def to_dict(self) -> Dict:
        return {'max_l': self.max_l, 'max_n': self.max_n}


@dataclass(frozen=True)
class Equal:
    """Equality derivable: forward trace of the first term, reversed trace of the second"""
    traces: Tuple[RewriteTrace, RewriteTrace]
    canonical: InstrSeq

    def derivation(self) -> RewriteTrace:
        """Sequence rewrites from the first canonical form of one term to that of the other"""
        forward, backward = self.traces
        return RewriteTrace(forward.steps + backward.steps)

    def to_dict(self) -> Dict:
        return {'verdict': 'equal', 'canonical': str(self.canonical),
                'trace': {'first': self.traces[0].to_list(),
                          'second_reversed': self.traces[1].to_list()}}


@dataclass(frozen=True)
class NotEqual:
    """Not derivable: the terms behave differently in the witness context"""
    witness: CongruenceWitness

    def to_dict(self) -> Dict:
        return {'verdict': 'not-equal', 'witness': self.witness.to_dict()}


@dataclass(frozen=True)
class Unknown:
    """
    Distinct canonical forms of behaviourally congruent terms

    reason is 'repetition' when a term has a repetition, or 'instruction-axioms'
    for repetition-free terms over an alphabet with instruction axioms, where
    congruence does not guarantee equal canonical forms.
    """
    canonical: Tuple[InstrSeq, InstrSeq]
    reason: str = 'repetition'

    def to_dict(self) -> Dict:
        return {'verdict': 'unknown', 'reason': self.reason,
                'canonical': [str(s) for s in self.canonical]}


DerivabilityVerdict = Union[Equal, NotEqual, Unknown]


def isc_equal(t1: Term, t2: Term) -> bool:
    """Instruction sequence congruence: same eventually periodic sequence"""
    return first_canonical(t1) == first_canonical(t2)


def second_canonical(t: Term) -> InstrSeq:
    return to_second_canonical(to_first_canonical(t)[0])[0]


def sc_equal(t1: Term, t2: Term) -> bool:
    """Structural congruence: same second canonical form"""
    return second_canonical(t1) == second_canonical(t2)


def beq(t1: Term, t2: Term, alphabet=None) -> bool:
    """Behavioural equivalence: bisimilar extracted threads"""
    return bisimilar(extract_term(t1), extract_term(t2), alphabet)


def behaviour_key(t: Term, alphabet=None) -> ThreadKey:
    """Hashable key equal for two terms iff they are behaviourally equivalent"""
    return canonical_key(extract_term(t), alphabet)


def _with_halts(seq: InstrSeq, count: int) -> InstrSeq:
    """seq;!^count, where a periodic sequence absorbs the suffix"""
    if not seq.is_finite or count == 0:
        return seq
    return InstrSeq(seq.prefix + (HALT,) * count)


def bcong(t1: Term, t2: Term, alphabet=None,
          bounds: Optional[ContextBounds] = None) -> CongruenceResult:
    """
    Behavioural congruence within finite context bounds

    Args:
        t1, t2: Terms to compare
        alphabet: Alphabet whose node signatures drive bisimulation
        bounds: Context bounds; by default derived from the pair

    Returns:
        A result that is truthy iff every context #l;t;!^n with l <= max_l and
        n <= max_n gives equivalent behaviour; otherwise it carries the least
        distinguishing (l, n) in lexicographic order.
    """
    alphabet = alphabet or DEFAULT_ALPHABET
    s1, s2 = first_canonical(t1), first_canonical(t2)
    bounds = bounds or ContextBounds.for_sequences(s1, s2)
    differing: Optional[Tuple[int, int]] = None
    graphs: Dict[int, Tuple[ExtractionGraph, ExtractionGraph]] = {}
    for n in range(bounds.max_n + 1):
        g1, g2 = ExtractionGraph(_with_halts(s1, n)), ExtractionGraph(_with_halts(s2, n))
        graphs[n] = (g1, g2)
        nodes, (o1, o2) = disjoint_union(g1, g2)
        blocks = stable_partition(nodes, alphabet)
        for l in range(bounds.max_l + 1):
            if differing is not None and (l, n) >= differing:
                break
            if blocks[o1 + g1.context_entry(l)] != blocks[o2 + g2.context_entry(l)]:
                differing = (l, n)
                break
        # context #0 is inaction for every term, so l = 1 cannot be improved on
        if (differing is not None and differing[0] <= 1) or (not s1.is_finite and not s2.is_finite):
            break
    if differing is None:
        return CongruenceResult(True)
    l, n = differing
    g1, g2 = graphs[n]
    depth = distinguishing_depth(g1.context_thread(l), g2.context_thread(l), alphabet)
    witness = CongruenceWitness(l, n, depth)
    logger.debug(f"{s1} and {s2} differ in context l={l}, n={n} at depth {depth}")
    return CongruenceResult(False, witness)


def congruence_fingerprint(t: Term, bounds: ContextBounds,
                           alphabet=None) -> Tuple[Tuple[ThreadKey, ...], ...]:
    """
    Canonical behaviour of t in every context within bounds

    Two terms have equal fingerprints for the same bounds iff bcong holds
    for them with those bounds.
    """
    seq = first_canonical(t)
    keys = []
    for n in range(bounds.max_n + 1):
        if not seq.is_finite and keys:
            keys.append(keys[0])
            continue
        graph = ExtractionGraph(_with_halts(seq, n))
        blocks = stable_partition(graph.nodes, alphabet)
        keys.append(tuple(quotient_key(graph.nodes, blocks, graph.context_entry(l), alphabet)
                          for l in range(bounds.max_l + 1)))
    return tuple(keys)


def instruction_normalizer(alphabet):
    """Instruction-level rewrite hook of an alphabet, None when it has no instruction axioms"""
    if alphabet is not None and getattr(alphabet, 'is_bool_register', False):
        return alphabet.normalize
    return None


def third_canonical(t: Term, alphabet=None) -> Tuple[InstrSeq, RewriteTrace]:
    return canonicalize_term(t, 3, instruction_normalizer(alphabet))


def derivable_equal(t1: Term, t2: Term, alphabet=None) -> DerivabilityVerdict:
    """
    Decide derivable equality through third canonical forms

    Equal when the canonical forms coincide. Otherwise the terms are checked
    for behavioural congruence: a distinguishing context gives NotEqual, and
    congruent terms with repetition give Unknown. Congruent repetition-free
    terms with distinct canonical forms raise CompletenessViolation over the
    generic alphabet and give Unknown over an alphabet with instruction axioms.
    """
    c1, trace1 = third_canonical(t1, alphabet)
    c2, trace2 = third_canonical(t2, alphabet)
    if c1 == c2:
        return Equal((trace1, trace2.reversed()), c1)
    result = bcong(t1, t2, alphabet)
    if not result:
        return NotEqual(result.witness)
    if is_repetition_free(t1) and is_repetition_free(t2):
        if instruction_normalizer(alphabet) is not None:
            logger.warning(f"Congruent repetition-free terms keep distinct canonical forms {c1} and {c2}")
            return Unknown((c1, c2), 'instruction-axioms')
        logger.error(f"Distinct canonical forms {c1} and {c2} are behaviourally congruent")
        raise CompletenessViolation(
            f"Repetition-free terms with canonical forms {c1} and {c2} are behaviourally congruent")
    logger.warning(f"Canonical forms {c1} and {c2} differ but no distinguishing context exists")
    return Unknown((c1, c2))
