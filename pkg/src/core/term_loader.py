"""
Loading of terms from text files, one term per line
"""

import os
import logging
from typing import List, Tuple

from .parser import parse_term
from .term import Term


class TermLoader:
    """Reads UTF-8 term files; blank lines and lines starting with % are skipped"""

    def __init__(self, alphabet=None):
        self.logger = logging.getLogger(__name__)
        self.alphabet = alphabet
        self.supported_formats = {'.pga', '.txt'}

    def read_lines(self, file_path: str) -> List[Tuple[int, str]]:
        """
        Term lines of a file with their 1-based line numbers

        Args:
            file_path: Path to a .pga or .txt file

        Returns:
            (line number, stripped text) for every line holding a term
        """
        if not os.path.exists(file_path):
            raise FileNotFoundError(f"Term file not found: {file_path}")

        file_ext = os.path.splitext(file_path)[1].lower()
        if file_ext not in self.supported_formats:
            raise ValueError(f"Unsupported file format: {file_ext}")

        try:
            with open(file_path, 'r', encoding='utf-8') as f:
                raw = f.read().splitlines()
        except (OSError, UnicodeDecodeError) as e:
            self.logger.error(f"Failed to read {file_path}: {str(e)}")
            raise RuntimeError(f"Failed to load terms from {file_path}: {str(e)}")

        lines = []
        for number, line in enumerate(raw, start=1):
            text = line.strip()
            if text and not text.startswith('%'):
                lines.append((number, text))
        return lines

    def load_terms(self, file_path: str) -> List[Term]:
        """Parse every term line; a syntax error names the offending line"""
        terms = []
        for number, text in self.read_lines(file_path):
            try:
                terms.append(parse_term(text, self.alphabet))
            except ValueError as e:
                raise type(e)(f"{file_path}:{number}: {str(e)}") from None
        self.logger.info(f"Loaded {len(terms)} terms from {file_path}")
        return terms
