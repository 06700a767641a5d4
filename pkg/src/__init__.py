"""Yang-Yang monodromy R-matrices, braid-closure invariants and critical points."""
