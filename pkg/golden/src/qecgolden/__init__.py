"""Reference decoder and conformance harness.

This package re-derives the decoding pipeline from its published
contracts (file formats, flag semantics, tie-break rules) using only
the standard library.  It is deliberately unoptimized: plain loops,
small dictionaries, one thread.  Its value is that a record stream can
be checked against an implementation that shares no code with the
production package.
"""

__version__ = "0.1.0"
