# Canonicalization, extraction and equivalence algorithms package