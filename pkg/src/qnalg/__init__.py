"""qnalg: exact engine for a quadratic algebra with normal forms, plus
all-orderings factorization of noncommutative and differential
polynomials over concrete division-ring-like scalar domains."""

__version__ = "0.1.0"
