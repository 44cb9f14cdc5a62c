"""A toolkit for two small nondeterministic lambda calculi: one with plain
non-collapse choices, one with named (coordinated) choices and a
regular-expression effect system, plus the seed-threaded translation between
them and executable checks of its correctness properties."""

__version__ = "0.1.0"
