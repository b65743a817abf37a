"""
Decoding a single window, checked against exact references
===========================================================

Sample errors, decode them with the bounded-pass union-find decoder,
and grade the answers two ways: the residual error must be silent and
trivial, and on small codes the exact references must agree that the
cluster decoder lands in the most likely class.
"""

import random

from qecdesk import geometry, noise, oracle, ufdecoder

code = geometry.build_planar(5)
p = 0.03

# One noisy round, by hand.  sample_round draws a fresh error chain and
# a measurement-flip mask; the measured syndrome is the true syndrome
# XOR the lies, and detection_events diffs it against the previous
# round so the decoder only sees changes.
model = noise.NoiseModel(p_data=p, q_meas=0.0, seed=2024)
sampler = noise.RoundSampler(code, model)
err, flips = noise.sample_round(model, sampler)
syn = geometry.syndrome_css(code.h_x, code.n, err) ^ flips
frame = noise.detection_events(syn, 0, len(code.h_x), round_t=0)
print(f"error weight {bin(err).count('1')}, "
      f"defects {bin(frame.bits).count('1')}")

# Decode it.  The record carries the correction, pass counts, and a
# modeled cycle cost for the latency machinery downstream.
rec = ufdecoder.decode_window([frame], code)
print(f"correction weight {bin(rec.correction).count('1')}, "
      f"grow passes {rec.grow_passes}, modeled cycles {rec.modeled_cycles}")

# Success means the residual (error + correction) is silent and bounds.
residual = err ^ rec.correction
assert geometry.syndrome_css(code.h_x, code.n, residual) == 0
cls = geometry.homology_class(code, residual)
print(f"residual class {cls.label}: "
      f"{'success' if cls.trivial else 'logical failure'}")

# Now grade the decoder statistically.  At low physical error rates the
# failure rate falls quickly with distance -- the whole point of using
# a bigger patch.
print("\nfailures out of 400 windows:")
for d in (3, 5):
    code_d = geometry.build_planar(d)
    model = noise.NoiseModel(p_data=0.02, q_meas=0.0, seed=99)
    sampler = noise.RoundSampler(code_d, model)
    fails = 0
    for _ in range(400):
        err, _ = noise.sample_round(model, sampler)
        syn = geometry.syndrome_css(code_d.h_x, code_d.n, err)
        frame = noise.detection_events(syn, 0, len(code_d.h_x), round_t=0)
        rec = ufdecoder.decode_window([frame], code_d)
        if not geometry.homology_class(code_d, err ^ rec.correction).trivial:
            fails += 1
    print(f"  d={d}: {fails}")

# On the d=3 patch the exact references are cheap.  mwpm_decode pairs
# defects optimally along graph distances; ml_decode sums probability
# over every error in each class.  The union-find answer should land in
# the maximum-likelihood class in the overwhelming majority of draws.
code3 = geometry.build_planar(3)
rng = random.Random(7)
agree_ml = agree_mwpm = total = 0
model = noise.NoiseModel(p_data=0.05, q_meas=0.0, seed=rng.getrandbits(32))
sampler = noise.RoundSampler(code3, model)
for _ in range(300):
    err, _ = noise.sample_round(model, sampler)
    syn = geometry.syndrome_css(code3.h_x, code3.n, err)
    frame = noise.detection_events(syn, 0, len(code3.h_x), round_t=0)
    rec = ufdecoder.decode_window([frame], code3)
    match = oracle.mwpm_decode([frame], code3, p_data=0.05)
    total += 1
    if oracle.ml_agrees(code3, frame.bits, 0.05, rec.correction):
        agree_ml += 1
    same = geometry.homology_class(code3, rec.correction ^ match.correction)
    if same.trivial:
        agree_mwpm += 1
print(f"\nd=3 at p=0.05, {total} windows: "
      f"class-equal to matching {agree_mwpm}, in the ML class {agree_ml}")
