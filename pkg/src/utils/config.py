"""
Configuration of the soundness and completeness experiments
"""

from dataclasses import dataclass, field
from typing import Dict, Optional

from ..core.alphabet import DEFAULT_SYMBOLS, GenericAlphabet


def default_alphabet() -> GenericAlphabet:
    return GenericAlphabet(DEFAULT_SYMBOLS)


def describe_alphabet(alphabet) -> Dict:
    """Alphabet as it appears in reports"""
    return {'name': alphabet.name,
            'instructions': [str(action) for action in alphabet.basic_instructions()]}


@dataclass
class SoundnessConfig:
    """Closed instances of every axiom, checked for behavioural congruence"""
    samples_per_axiom: int = 100
    max_subterm_len: int = 4
    max_jump: int = 6
    seed: int = 0
    alphabet: object = field(default_factory=default_alphabet)

    def __post_init__(self):
        if self.samples_per_axiom < 1:
            raise ValueError(f"samples_per_axiom must be at least 1, got {self.samples_per_axiom}")
        if self.max_subterm_len < 1:
            raise ValueError(f"max_subterm_len must be at least 1, got {self.max_subterm_len}")
        # PGA22 needs a jump of 4 with empty instruction blocks
        if self.max_jump < 4:
            raise ValueError(f"max_jump must be at least 4, got {self.max_jump}")

    def to_dict(self) -> Dict:
        return {
            'samples_per_axiom': self.samples_per_axiom,
            'max_subterm_len': self.max_subterm_len,
            'max_jump': self.max_jump,
            'seed': self.seed,
            'alphabet': describe_alphabet(self.alphabet),
        }


@dataclass
class CompletenessConfig:
    """Enumerated repetition-free terms grouped by third canonical form"""
    max_len: int = 3
    jump_bound: int = 4
    seed: int = 0
    samples: int = 100_000
    full_cross_product: Optional[bool] = None
    check_hierarchy: bool = True
    check_bound_stability: bool = True
    repetition_samples: int = 0
    alphabet: object = field(default_factory=default_alphabet)

    def __post_init__(self):
        if self.max_len < 1:
            raise ValueError(f"max_len must be at least 1, got {self.max_len}")
        if self.jump_bound < 0:
            raise ValueError(f"jump_bound must be non-negative, got {self.jump_bound}")
        if self.samples < 0 or self.repetition_samples < 0:
            raise ValueError("Sample counts must be non-negative")
        if self.full_cross_product is None:
            self.full_cross_product = self.max_len <= 3

    def to_dict(self) -> Dict:
        return {
            'max_len': self.max_len,
            'jump_bound': self.jump_bound,
            'seed': self.seed,
            'samples': self.samples,
            'full_cross_product': self.full_cross_product,
            'check_hierarchy': self.check_hierarchy,
            'check_bound_stability': self.check_bound_stability,
            'repetition_samples': self.repetition_samples,
            'alphabet': describe_alphabet(self.alphabet),
        }
