"""
Soundness and completeness experiments

The soundness experiment instantiates every axiom with random closed terms
and checks both sides for behavioural congruence. The completeness
experiment enumerates repetition-free terms, groups them by third canonical
form and checks that behavioural congruence draws exactly the same lines.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Hashable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from ..core.errors import StepBudgetExceeded
from ..core.instruction import (HALT, BoolRegInstr, Jump, NegTest, Plain, PosTest,
                                PrimitiveInstruction, UnaryBoolFn)
from ..core.parser import format_term
from ..core.term import Concat, Instr, InstrSeq, Repeat, Term, concat, sequence_term
from ..core.thread import RegularThread, compose_post
from ..utils.config import CompletenessConfig, SoundnessConfig
from .bisimulation import bisimilar
from .canonical import first_canonical
from .equivalence import (ContextBounds, CongruenceWitness, bcong, behaviour_key,
                          congruence_fingerprint, second_canonical, third_canonical)
from .extraction import extract_term

logger = logging.getLogger(__name__)

MAX_COUNTEREXAMPLES = 5


def primitive_instructions(alphabet, jump_bound: int) -> List[PrimitiveInstruction]:
    """Every primitive instruction with jumps up to jump_bound, in enumeration order"""
    result: List[PrimitiveInstruction] = []
    for action in alphabet.basic_instructions():
        result.extend((Plain(action), PosTest(action), NegTest(action)))
    result.extend(Jump(l) for l in range(jump_bound + 1))
    result.append(HALT)
    return result


def enumerate_terms(alphabet, max_len: int, jump_bound: int) -> Iterator[Term]:
    """
    All right-nested repetition-free terms of 1 to max_len instructions

    Shorter terms come first; terms of one length follow the order of
    primitive_instructions lexicographically.
    """
    if max_len < 1:
        raise ValueError(f"max_len must be at least 1, got {max_len}")
    if jump_bound < 0:
        raise ValueError(f"jump_bound must be non-negative, got {jump_bound}")
    instructions = primitive_instructions(alphabet, jump_bound)
    for count in range(1, max_len + 1):
        for combination in itertools.product(instructions, repeat=count):
            yield sequence_term(combination)


class InstanceGenerator:
    """Random closed terms and instructions within size bounds"""

    def __init__(self, rng: np.random.Generator, alphabet, max_subterm_len: int = 4,
                 max_jump: int = 6):
        self.rng = rng
        self.alphabet = alphabet
        self.actions = alphabet.basic_instructions()
        self.max_subterm_len = max_subterm_len
        self.max_jump = max_jump

    def natural(self, upper: int) -> int:
        """Uniform in 0..upper"""
        return int(self.rng.integers(0, max(upper, 0) + 1))

    def action(self):
        return self.actions[int(self.rng.integers(len(self.actions)))]

    def instruction(self) -> PrimitiveInstruction:
        kind = int(self.rng.integers(5))
        if kind == 0:
            return Plain(self.action())
        if kind == 1:
            return PosTest(self.action())
        if kind == 2:
            return NegTest(self.action())
        if kind == 3:
            return Jump(self.natural(self.max_jump))
        return HALT

    def instructions(self, count: int) -> List[PrimitiveInstruction]:
        return [self.instruction() for _ in range(count)]

    def _associate(self, items: Sequence[PrimitiveInstruction]) -> Term:
        """Randomly bracketed concatenation of the items"""
        if len(items) == 1:
            return Instr(items[0])
        split = 1 + int(self.rng.integers(len(items) - 1))
        return Concat(self._associate(items[:split]), self._associate(items[split:]))

    def finite_term(self, max_len: Optional[int] = None) -> Term:
        max_len = max_len or self.max_subterm_len
        return self._associate(self.instructions(1 + self.natural(max_len - 1)))

    def term(self, repetition: Optional[bool] = None) -> Term:
        """Random closed term; with repetition forced on or off when asked"""
        if repetition is None:
            shape = int(self.rng.integers(3))
        else:
            shape = 1 + int(self.rng.integers(2)) if repetition else 0
        if shape == 0:
            return self.finite_term()
        if shape == 1 or self.max_subterm_len < 2:
            return Repeat(self.finite_term())
        head = self.finite_term(self.max_subterm_len - 1)
        return Concat(head, Repeat(self.finite_term(self.max_subterm_len - 1)))


# Axiom schemata: each returns a closed instance (left-hand side, right-hand side)

AxiomInstance = Tuple[object, object]


def _seq(*parts: Sequence[PrimitiveInstruction], period: Optional[Sequence] = None) -> Term:
    prefix = tuple(itertools.chain.from_iterable(parts))
    return InstrSeq(prefix, tuple(period) if period is not None else None).to_term()


def _pga1(g: InstanceGenerator) -> AxiomInstance:
    x, y, z = g.term(), g.term(), g.term()
    return Concat(Concat(x, y), z), Concat(x, Concat(y, z))


def _pga2(g: InstanceGenerator) -> AxiomInstance:
    x = g.finite_term()
    return Repeat(concat(*([x] * (1 + g.natural(2))))), Repeat(x)


def _pga3(g: InstanceGenerator) -> AxiomInstance:
    x, y = g.term(), g.term()
    return Concat(Repeat(x), y), Repeat(x)


def _pga4(g: InstanceGenerator) -> AxiomInstance:
    x, y = g.term(), g.term()
    return Repeat(Concat(x, y)), Concat(x, Repeat(Concat(y, x)))


def _pga5(g: InstanceGenerator) -> AxiomInstance:
    k = g.natural(min(g.max_jump - 1, g.max_subterm_len))
    u = g.instructions(k)
    return _seq([Jump(k + 1)], u, [Jump(0)]), _seq([Jump(0)], u, [Jump(0)])


def _pga6(g: InstanceGenerator) -> AxiomInstance:
    k = g.natural(min(g.max_jump - 1, g.max_subterm_len))
    l = g.natural(g.max_jump - k - 1)
    u = g.instructions(k)
    return _seq([Jump(k + 1)], u, [Jump(l)]), _seq([Jump(l + k + 1)], u, [Jump(l)])


def _pga7(g: InstanceGenerator) -> AxiomInstance:
    k = g.natural(min(g.max_jump - 1, g.max_subterm_len))
    l = g.natural(g.max_jump - k - 1)
    u = g.instructions(k)
    return _seq(period=[Jump(l + k + 1)] + u), _seq(period=[Jump(l)] + u)


def _pga8(g: InstanceGenerator) -> AxiomInstance:
    k_prime = g.natural(min(g.max_jump - 2, g.max_subterm_len - 1))
    k = g.natural(min(g.max_jump - 2 - k_prime, g.max_subterm_len))
    l = g.natural(g.max_jump - 2 - k - k_prime)
    u, v = g.instructions(k), g.instructions(k_prime + 1)
    return (_seq([Jump(l + k + k_prime + 2)], u, period=v),
            _seq([Jump(l + k + 1)], u, period=v))


def _test_schema(test_type, tail: Callable[[InstanceGenerator], List[PrimitiveInstruction]]):
    def schema(g: InstanceGenerator) -> AxiomInstance:
        a = g.action()
        rest = tail(g)
        return _seq([test_type(a)], rest), _seq([Plain(a)], rest)
    return schema


def _two_zero_jumps(g: InstanceGenerator) -> List[PrimitiveInstruction]:
    return [Jump(0), Jump(0)]


def _unit_jump(g: InstanceGenerator) -> List[PrimitiveInstruction]:
    return [Jump(1)]


def _converging_jumps(g: InstanceGenerator) -> List[PrimitiveInstruction]:
    l = g.natural(g.max_jump - 2)
    return [Jump(l + 2), Jump(l + 1)]


def _two_halts(g: InstanceGenerator) -> List[PrimitiveInstruction]:
    return [HALT, HALT]


def _repeated_test_schema(test_type):
    def schema(g: InstanceGenerator) -> AxiomInstance:
        a, u = g.action(), g.instruction()
        return _seq([test_type(a)], period=[u]), _seq([Plain(a)], period=[u])
    return schema


def _leading_jump_block_schema(test_type):
    def schema(g: InstanceGenerator) -> AxiomInstance:
        k = g.natural(min(g.max_jump - 3, g.max_subterm_len))
        a, u = g.action(), g.instructions(k)
        jump = Jump(k + 3)
        return (_seq([jump, jump, jump], u, [test_type(a)]),
                _seq([test_type(a), jump, jump], u, [test_type(a)]))
    return schema


def _pga21(g: InstanceGenerator) -> AxiomInstance:
    k = g.natural(min(g.max_jump - 2, g.max_subterm_len))
    a, u = g.action(), g.instructions(k)
    jump = Jump(k + 2)
    return _seq([jump, jump], u, [Plain(a)]), _seq([Plain(a), jump], u, [Plain(a)])


def _shortened_double_jump_schema(test_type):
    def schema(g: InstanceGenerator) -> AxiomInstance:
        k = g.natural(min(g.max_jump - 4, g.max_subterm_len))
        k_prime = g.natural(min(g.max_jump - 4 - k, g.max_subterm_len))
        a, u, v = g.action(), g.instructions(k), g.instructions(k_prime)
        inner = Jump(k_prime + 3)
        tail = [test_type(a), inner, inner] + v + [test_type(a)]
        return _seq([Jump(k + k_prime + 4)], u, tail), _seq([Jump(k + 1)], u, tail)
    return schema


def _pga24(g: InstanceGenerator) -> AxiomInstance:
    k = g.natural(min(g.max_jump - 3, g.max_subterm_len))
    k_prime = g.natural(min(g.max_jump - 3 - k, g.max_subterm_len))
    a, u, v = g.action(), g.instructions(k), g.instructions(k_prime)
    tail = [Plain(a), Jump(k_prime + 2)] + v + [Plain(a)]
    return _seq([Jump(k + k_prime + 3)], u, tail), _seq([Jump(k + 1)], u, tail)


def _pga25(g: InstanceGenerator) -> AxiomInstance:
    k = g.natural(min(g.max_jump - 1, g.max_subterm_len))
    u = g.instructions(k)
    return _seq([Jump(k + 1)], u, [HALT]), _seq([HALT], u, [HALT])


def _pga26(g: InstanceGenerator) -> AxiomInstance:
    k = g.natural(min(g.max_jump - 1, g.max_subterm_len - 1))
    u, last = g.instructions(k), g.instruction()
    return _seq([Jump(k + 1)], period=u + [last]), _seq(period=[last] + u)


def _jump_loop_schema(last_type):
    def schema(g: InstanceGenerator) -> AxiomInstance:
        k = g.natural(min(g.max_jump - 2, g.max_subterm_len))
        a, u = g.action(), g.instructions(k)
        return (_seq(period=[Jump(k + 2), Jump(k + 1)] + u + [last_type(a)]),
                _seq(period=[Plain(a), Jump(k + 1)] + u + [Plain(a)]))
    return schema


def _pga30(g: InstanceGenerator) -> AxiomInstance:
    size = 1 + g.natural(min(3, g.max_jump))
    a = g.action()
    carriers = [bool(g.rng.integers(2)) for _ in range(size)]
    carriers[g.natural(size - 1)] = True
    body: List[PrimitiveInstruction] = []
    for index, carries in enumerate(carriers):
        if carries:
            body.append((Plain, PosTest, NegTest)[int(g.rng.integers(3))](a))
            continue
        lengths = [l for l in range(1, size) if carriers[(index + l) % size]]
        body.append(Jump(lengths[int(g.rng.integers(len(lengths)))]))
    return _seq(period=body), _seq(period=[Plain(a)])


PGA_SCHEMATA: Dict[str, Callable[[InstanceGenerator], AxiomInstance]] = {
    'PGA1': _pga1, 'PGA2': _pga2, 'PGA3': _pga3, 'PGA4': _pga4,
    'PGA5': _pga5, 'PGA6': _pga6, 'PGA7': _pga7, 'PGA8': _pga8,
    'PGA9': _test_schema(PosTest, _two_zero_jumps),
    'PGA10': _test_schema(NegTest, _two_zero_jumps),
    'PGA11': _test_schema(PosTest, _unit_jump),
    'PGA12': _test_schema(NegTest, _unit_jump),
    'PGA13': _test_schema(PosTest, _converging_jumps),
    'PGA14': _test_schema(NegTest, _converging_jumps),
    'PGA15': _test_schema(PosTest, _two_halts),
    'PGA16': _test_schema(NegTest, _two_halts),
    'PGA17': _repeated_test_schema(PosTest),
    'PGA18': _repeated_test_schema(NegTest),
    'PGA19': _leading_jump_block_schema(PosTest),
    'PGA20': _leading_jump_block_schema(NegTest),
    'PGA21': _pga21,
    'PGA22': _shortened_double_jump_schema(PosTest),
    'PGA23': _shortened_double_jump_schema(NegTest),
    'PGA24': _pga24,
    'PGA25': _pga25,
    'PGA26': _pga26,
    'PGA27': _jump_loop_schema(PosTest),
    'PGA28': _jump_loop_schema(NegTest),
    'PGA29': _jump_loop_schema(Plain),
    'PGA30': _pga30,
}


def _random_fn(g: InstanceGenerator) -> UnaryBoolFn:
    return list(UnaryBoolFn)[int(g.rng.integers(4))]


def _in_context(g: InstanceGenerator, left: PrimitiveInstruction,
                right: PrimitiveInstruction) -> AxiomInstance:
    """X;u;Y for random finite X and Y around both sides of an instruction axiom"""
    before, after = g.instructions(g.natural(2)), g.instructions(g.natural(2))
    return sequence_term(before + [left] + after), sequence_term(before + [right] + after)


def _test_swap_schema(positive: UnaryBoolFn, negative: UnaryBoolFn):
    """+f.p/e = -f.p'/e"""
    def schema(g: InstanceGenerator) -> AxiomInstance:
        focus, effect = g.action().focus, _random_fn(g)
        return _in_context(g, PosTest(BoolRegInstr(focus, positive, effect)),
                           NegTest(BoolRegInstr(focus, negative, effect)))
    return schema


def _pgabr5(g: InstanceGenerator) -> AxiomInstance:
    focus, effect = g.action().focus, _random_fn(g)
    return _in_context(g, PosTest(BoolRegInstr(focus, UnaryBoolFn.T, effect)),
                       Plain(BoolRegInstr(focus, _random_fn(g), effect)))


def _random_thread(g: InstanceGenerator) -> RegularThread:
    return extract_term(g.finite_term())


def _branch_swap_schema(reply: UnaryBoolFn, swapped: UnaryBoolFn):
    """x <| f.p/q |> y = y <| f.p'/q |> x"""
    def schema(g: InstanceGenerator) -> AxiomInstance:
        focus, effect = g.action().focus, _random_fn(g)
        x, y = _random_thread(g), _random_thread(g)
        return (compose_post(BoolRegInstr(focus, reply, effect), x, y),
                compose_post(BoolRegInstr(focus, swapped, effect), y, x))
    return schema


def _btabr3(g: InstanceGenerator) -> AxiomInstance:
    focus, effect = g.action().focus, _random_fn(g)
    x, y = _random_thread(g), _random_thread(g)
    return (compose_post(BoolRegInstr(focus, UnaryBoolFn.T, effect), x, y),
            compose_post(BoolRegInstr(focus, _random_fn(g), effect), x, x))


F, T, I, C = UnaryBoolFn.F, UnaryBoolFn.T, UnaryBoolFn.I, UnaryBoolFn.C

BOOL_REG_SCHEMATA: Dict[str, Callable[[InstanceGenerator], AxiomInstance]] = {
    'PGAbr1': _test_swap_schema(F, T),
    'PGAbr2': _test_swap_schema(T, F),
    'PGAbr3': _test_swap_schema(I, C),
    'PGAbr4': _test_swap_schema(C, I),
    'PGAbr5': _pgabr5,
    'BTAbr1': _branch_swap_schema(F, T),
    'BTAbr2': _branch_swap_schema(I, C),
    'BTAbr3': _btabr3,
}


def axiom_schemata(alphabet) -> Dict[str, Callable[[InstanceGenerator], AxiomInstance]]:
    """Schemata checked for an alphabet: PGA1-PGA30, plus the br axioms for br alphabets"""
    schemata = dict(PGA_SCHEMATA)
    if getattr(alphabet, 'is_bool_register', False):
        schemata.update(BOOL_REG_SCHEMATA)
    return schemata


def _render(side) -> str:
    if isinstance(side, RegularThread):
        return side.to_text().replace('\n', ' |')
    return format_term(side)


@dataclass
class AxiomResult:
    """Instances checked for one axiom"""
    axiom: str
    instances: int = 0
    failures: int = 0
    counterexamples: List[Dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_dict(self) -> Dict:
        return {'axiom': self.axiom, 'instances': self.instances,
                'failures': self.failures, 'counterexamples': self.counterexamples}


@dataclass
class SoundnessReport:
    """Per-axiom outcome of the soundness experiment"""
    config: Dict
    results: List[AxiomResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)

    @property
    def failures(self) -> int:
        return sum(result.failures for result in self.results)

    def to_dict(self) -> Dict:
        return {'experiment': 'soundness', 'config': self.config, 'passed': self.passed,
                'failures': self.failures, 'axioms': [r.to_dict() for r in self.results]}

    def to_text(self) -> str:
        lines = ["Soundness experiment",
                 f"alphabet: {', '.join(self.config['alphabet']['instructions'])}",
                 f"samples per axiom: {self.config['samples_per_axiom']}, "
                 f"subterms up to {self.config['max_subterm_len']}, "
                 f"jumps up to {self.config['max_jump']}, seed {self.config['seed']}",
                 ""]
        for result in self.results:
            status = "ok" if result.passed else "FAIL"
            lines.append(f"{result.axiom:<8} {result.instances:>5} instances "
                         f"{result.failures:>5} failures  {status}")
            for example in result.counterexamples:
                lines.append(f"    {example['lhs']}  vs  {example['rhs']}")
                if example.get('witness'):
                    witness = example['witness']
                    lines.append(f"    witness l={witness['l']} n={witness['n']} "
                                 f"depth={witness['depth']}")
        lines.append("")
        lines.append(f"result: {'PASS' if self.passed else 'FAIL'} ({self.failures} failures)")
        return '\n'.join(lines)


class SoundnessExperiment:
    """Every axiom instance must relate behaviourally congruent terms"""

    def __init__(self, config: Optional[SoundnessConfig] = None):
        self.logger = logging.getLogger(__name__)
        self.config = config or SoundnessConfig()

    def check_instance(self, lhs, rhs) -> Tuple[bool, Optional[CongruenceWitness]]:
        alphabet = self.config.alphabet
        if isinstance(lhs, RegularThread):
            return bisimilar(lhs, rhs, alphabet), None
        result = bcong(lhs, rhs, alphabet)
        return result.congruent, result.witness

    def check_axiom(self, index: int, axiom: str,
                    schema: Callable[[InstanceGenerator], AxiomInstance]) -> AxiomResult:
        config = self.config
        generator = InstanceGenerator(np.random.default_rng([config.seed, index]),
                                      config.alphabet, config.max_subterm_len, config.max_jump)
        result = AxiomResult(axiom)
        for _ in range(config.samples_per_axiom):
            lhs, rhs = schema(generator)
            congruent, witness = self.check_instance(lhs, rhs)
            result.instances += 1
            if congruent:
                continue
            result.failures += 1
            self.logger.error(f"{axiom} instance fails: {_render(lhs)} vs {_render(rhs)}")
            if len(result.counterexamples) < MAX_COUNTEREXAMPLES:
                result.counterexamples.append({
                    'lhs': _render(lhs), 'rhs': _render(rhs),
                    'witness': witness.to_dict() if witness is not None else None,
                })
        self.logger.info(f"{axiom}: {result.instances} instances, {result.failures} failures")
        return result

    def run(self) -> SoundnessReport:
        report = SoundnessReport(self.config.to_dict())
        for index, (axiom, schema) in enumerate(axiom_schemata(self.config.alphabet).items()):
            report.results.append(self.check_axiom(index, axiom, schema))
        return report


def soundness_experiment(config: Optional[SoundnessConfig] = None) -> SoundnessReport:
    return SoundnessExperiment(config).run()


@dataclass
class PairViolation:
    """Two terms whose canonical forms and congruence disagree"""
    first: str
    second: str
    first_canonical: str
    second_canonical: str
    witness: Optional[CongruenceWitness] = None

    def to_dict(self) -> Dict:
        return {'first': self.first, 'second': self.second,
                'first_canonical': self.first_canonical,
                'second_canonical': self.second_canonical,
                'witness': self.witness.to_dict() if self.witness is not None else None}

    def to_text(self) -> str:
        text = (f"{self.first} [{self.first_canonical}]  vs  "
                f"{self.second} [{self.second_canonical}]")
        if self.witness is not None:
            text += f"  witness l={self.witness.l} n={self.witness.n} depth={self.witness.depth}"
        return text


@dataclass
class CompletenessReport:
    """Outcome of grouping enumerated terms by canonical form and by congruence"""
    config: Dict
    mode: str
    term_count: int = 0
    group_count: int = 0
    checked_pairs: int = 0
    soundness_violations: List[PairViolation] = field(default_factory=list)
    completeness_violations: List[PairViolation] = field(default_factory=list)
    budget_failures: List[str] = field(default_factory=list)
    hierarchy: Optional[Dict[str, int]] = None
    bound_stability_violations: Optional[int] = None
    candidates: List[Tuple[str, str]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (not self.soundness_violations and not self.completeness_violations
                and not self.budget_failures
                and not any((self.hierarchy or {}).values())
                and not self.bound_stability_violations)

    def to_dict(self) -> Dict:
        return {
            'experiment': 'completeness',
            'config': self.config,
            'mode': self.mode,
            'passed': self.passed,
            'term_count': self.term_count,
            'group_count': self.group_count,
            'checked_pairs': self.checked_pairs,
            'soundness_violations': [v.to_dict() for v in self.soundness_violations],
            'completeness_violations': [v.to_dict() for v in self.completeness_violations],
            'budget_failures': self.budget_failures,
            'hierarchy': self.hierarchy,
            'bound_stability_violations': self.bound_stability_violations,
            'exploratory_candidates': [list(pair) for pair in self.candidates],
        }

    def to_text(self) -> str:
        lines = ["Completeness experiment (repetition-free terms)",
                 f"alphabet: {', '.join(self.config['alphabet']['instructions'])}",
                 f"max length {self.config['max_len']}, jumps up to {self.config['jump_bound']}, "
                 f"mode {self.mode}, seed {self.config['seed']}",
                 "",
                 f"terms: {self.term_count}",
                 f"canonical groups: {self.group_count}",
                 f"pairs decided: {self.checked_pairs}",
                 f"congruence failures within groups: {len(self.soundness_violations)}",
                 f"congruent pairs across groups: {len(self.completeness_violations)}",
                 f"step budget failures: {len(self.budget_failures)}"]
        for violation in self.soundness_violations + self.completeness_violations:
            lines.append(f"    {violation.to_text()}")
        for text in self.budget_failures:
            lines.append(f"    budget exceeded: {text}")
        if self.hierarchy is not None:
            for link, count in self.hierarchy.items():
                lines.append(f"hierarchy {link}: {count} violations")
        if self.bound_stability_violations is not None:
            lines.append(f"bound stability: {self.bound_stability_violations} violations")
        if self.config['repetition_samples']:
            lines.append(f"exploratory candidates (terms with repetition, not failures): "
                         f"{len(self.candidates)}")
            for first, second in self.candidates:
                lines.append(f"    {first}  ~  {second}")
        lines.append("")
        lines.append(f"result: {'PASS' if self.passed else 'FAIL'}")
        return '\n'.join(lines)


def _refinement_violations(finer: Sequence[Hashable], coarser: Sequence[Hashable]) -> int:
    """Number of classes of the finer keys that meet more than one class of the coarser keys"""
    images: Dict[Hashable, set] = {}
    for fine, coarse in zip(finer, coarser):
        images.setdefault(fine, set()).add(coarse)
    return sum(1 for image in images.values() if len(image) > 1)


def _intern(keys: Sequence[Hashable]) -> List[int]:
    ids: Dict[Hashable, int] = {}
    return [ids.setdefault(key, len(ids)) for key in keys]


class CompletenessExperiment:
    """Third canonical forms of repetition-free terms must coincide exactly with congruence"""

    def __init__(self, config: Optional[CompletenessConfig] = None):
        self.logger = logging.getLogger(__name__)
        self.config = config or CompletenessConfig()

    def canonical_groups(self, terms: List[Term], texts: List[str],
                         report: CompletenessReport) -> Tuple[List[Optional[InstrSeq]],
                                                              Dict[InstrSeq, List[int]]]:
        canonical: List[Optional[InstrSeq]] = []
        groups: Dict[InstrSeq, List[int]] = {}
        for index, t in enumerate(terms):
            try:
                key = third_canonical(t, self.config.alphabet)[0]
            except StepBudgetExceeded as e:
                self.logger.error(f"Canonicalization of {texts[index]} failed: {str(e)}")
                report.budget_failures.append(texts[index])
                canonical.append(None)
                continue
            canonical.append(key)
            groups.setdefault(key, []).append(index)
        return canonical, groups

    def check_full(self, terms: List[Term], texts: List[str], groups: Dict[InstrSeq, List[int]],
                   bounds: ContextBounds, report: CompletenessReport) -> List[int]:
        """Decide every pair through congruence fingerprints"""
        alphabet = self.config.alphabet
        fingerprints = _intern([congruence_fingerprint(t, bounds, alphabet) for t in terms])
        by_fingerprint: Dict[int, Dict[InstrSeq, int]] = {}
        for key, members in groups.items():
            first = members[0]
            for other in members[1:]:
                if fingerprints[other] != fingerprints[first]:
                    result = bcong(terms[first], terms[other], alphabet, bounds)
                    report.soundness_violations.append(PairViolation(
                        texts[first], texts[other], str(key), str(key), result.witness))
            for member in members:
                by_fingerprint.setdefault(fingerprints[member], {}).setdefault(key, member)
        for representatives in by_fingerprint.values():
            if len(representatives) < 2:
                continue
            items = list(representatives.items())
            for (key1, first), (key2, second) in itertools.combinations(items, 2):
                report.completeness_violations.append(PairViolation(
                    texts[first], texts[second], str(key1), str(key2)))
        count = sum(len(members) for members in groups.values())
        report.checked_pairs = count * (count - 1) // 2
        return fingerprints

    def check_sampled(self, terms: List[Term], texts: List[str],
                      canonical: List[Optional[InstrSeq]], groups: Dict[InstrSeq, List[int]],
                      report: CompletenessReport):
        """Within-group pairs against a representative, near misses and random cross-group pairs"""
        alphabet = self.config.alphabet
        for key, members in groups.items():
            first = members[0]
            for other in members[1:]:
                result = bcong(terms[first], terms[other], alphabet)
                report.checked_pairs += 1
                if not result:
                    report.soundness_violations.append(PairViolation(
                        texts[first], texts[other], str(key), str(key), result.witness))

        def check_cross(first: int, second: int):
            report.checked_pairs += 1
            if bcong(terms[first], terms[second], alphabet):
                report.completeness_violations.append(PairViolation(
                    texts[first], texts[second], str(canonical[first]), str(canonical[second])))

        # canonical forms differing in exactly one position
        buckets: Dict[Tuple, List[int]] = {}
        for key, members in groups.items():
            items = key.prefix
            for pos in range(len(items)):
                buckets.setdefault((len(items), pos, items[:pos], items[pos + 1:]),
                                   []).append(members[0])
        near_misses = 0
        for representatives in buckets.values():
            for first, second in itertools.combinations(representatives, 2):
                check_cross(first, second)
                near_misses += 1
        self.logger.info(f"Checked {near_misses} near-miss pairs")

        indices = [i for i, key in enumerate(canonical) if key is not None]
        if len(groups) < 2:
            return
        rng = np.random.default_rng(self.config.seed)
        drawn = 0
        while drawn < self.config.samples:
            first, second = (indices[int(i)] for i in rng.integers(len(indices), size=2))
            if canonical[first] == canonical[second]:
                continue
            check_cross(first, second)
            drawn += 1

    def check_hierarchy(self, terms: List[Term], fingerprints: List[int]) -> Dict[str, int]:
        alphabet = self.config.alphabet
        keys = {
            'isc': [first_canonical(t) for t in terms],
            'sc': [second_canonical(t) for t in terms],
            'bcong': fingerprints,
            'beq': [behaviour_key(t, alphabet) for t in terms],
        }
        links = (('isc', 'sc'), ('sc', 'bcong'), ('bcong', 'beq'))
        return {f"{finer} => {coarser}": _refinement_violations(keys[finer], keys[coarser])
                for finer, coarser in links}

    def check_bound_stability(self, terms: List[Term], fingerprints: List[int],
                              bounds: ContextBounds) -> int:
        doubled = _intern([congruence_fingerprint(t, bounds.doubled(), self.config.alphabet)
                           for t in terms])
        return (_refinement_violations(fingerprints, doubled)
                + _refinement_violations(doubled, fingerprints))

    def explore_repetition(self, report: CompletenessReport):
        """Congruent terms with repetition whose canonical forms differ; listed, never failures"""
        config = self.config
        generator = InstanceGenerator(np.random.default_rng([config.seed, 1]), config.alphabet,
                                      max_subterm_len=4, max_jump=max(config.jump_bound, 1))
        samples = [generator.term(repetition=True) for _ in range(config.repetition_samples)]
        sequences = [first_canonical(t) for t in samples]
        bounds = ContextBounds.for_enumeration(max(s.size for s in sequences),
                                               max(s.max_jump() for s in sequences))
        classes: Dict[Tuple, Dict[InstrSeq, str]] = {}
        for t in samples:
            try:
                key = third_canonical(t, config.alphabet)[0]
            except StepBudgetExceeded:
                self.logger.warning(f"Skipping {format_term(t)}: step budget exceeded")
                continue
            fingerprint = congruence_fingerprint(t, bounds, config.alphabet)
            classes.setdefault(fingerprint, {}).setdefault(key, format_term(t))
        for representatives in classes.values():
            texts = sorted(representatives.values())
            report.candidates.extend(itertools.combinations(texts, 2))
        report.candidates.sort()
        if report.candidates:
            self.logger.warning(f"{len(report.candidates)} exploratory candidates found")

    def run(self) -> CompletenessReport:
        config = self.config
        report = CompletenessReport(config.to_dict(),
                                    'full' if config.full_cross_product else 'sampled')
        terms = list(enumerate_terms(config.alphabet, config.max_len, config.jump_bound))
        texts = [format_term(t) for t in terms]
        report.term_count = len(terms)
        self.logger.info(f"Enumerated {len(terms)} terms")
        canonical, groups = self.canonical_groups(terms, texts, report)
        report.group_count = len(groups)
        self.logger.info(f"{len(groups)} canonical groups")
        grouped = [i for i, key in enumerate(canonical) if key is not None]
        grouped_terms = [terms[i] for i in grouped]
        if config.full_cross_product:
            bounds = ContextBounds.for_enumeration(config.max_len, config.jump_bound)
            fingerprints = self.check_full(terms, texts, groups, bounds, report)
            grouped_fingerprints = [fingerprints[i] for i in grouped]
            if config.check_hierarchy:
                report.hierarchy = self.check_hierarchy(grouped_terms, grouped_fingerprints)
            if config.check_bound_stability:
                report.bound_stability_violations = self.check_bound_stability(
                    grouped_terms, grouped_fingerprints, bounds)
        else:
            self.check_sampled(terms, texts, canonical, groups, report)
        if config.repetition_samples:
            self.explore_repetition(report)
        if report.passed:
            self.logger.info("Completeness experiment passed")
        else:
            self.logger.error("Completeness experiment found violations")
        return report


def completeness_experiment(config: Optional[CompletenessConfig] = None) -> CompletenessReport:
    return CompletenessExperiment(config).run()
