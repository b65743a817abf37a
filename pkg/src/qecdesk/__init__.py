"""Desk-scale real-time surface-code decoding pipeline.

Modules:
  gf2        packed GF(2) linear algebra
  geometry   lattice/CSS code construction, syndromes, homology
  noise      reproducible error sampling and detection-event traces
  decgraph   likelihood-weighted decoding graphs and shortest paths
  ufdecoder  bounded-pass union-find decoder (grow/merge/peel)
  oracle     exact matching and maximum-likelihood references
  wire       packet encode/decode, CRC, framing state machine
  fifo       bounded packet queue with overflow accounting
  faults     deterministic stream fault injection
  metrics    latency/backlog/percentile instrumentation and reports
  config     config parsing, canonical text, and config-id hashing
  pipeline   host API wiring parser -> FIFO -> decoder -> records
  cli        command-line entry points
"""

__version__ = "0.1.0"
