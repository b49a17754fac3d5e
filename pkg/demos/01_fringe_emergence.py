#!/usr/bin/env python3
"""How photon-number quantization fades in as the readout sharpens.

A coherent field with mean photon number 9 is read out at four resolutions.
At delta_n = 0.7 the outcome density is a featureless Gaussian; by 0.2 it has
broken into near-isolated peaks at integer outcomes.  The table below tracks
the integer/half-integer likelihood contrast and the coherence surviving at
the two kinds of outcome.
"""

import numpy as np

from qndsim import (
    CoherentParams,
    coherence_after,
    coherent_state,
    integer_half_integer_ratio,
    outcome_density,
)

params = CoherentParams(3.0)
state = coherent_state(params, 60)

print("readout of a coherent field, <n> = 9")
print()
print(f"{'delta_n':>8} {'P(9)/P(9.5)':>12} {'int/half total':>15} "
      f"{'|a_f(9)|':>10} {'|a_f(9.5)|':>11}")
for dn in (0.7, 0.4, 0.3, 0.2):
    p9, p95 = outcome_density(state, np.array([9.0, 9.5]), dn)
    contrast = integer_half_integer_ratio(state, dn)
    a9 = abs(coherence_after(state, 9.0, dn))
    a95 = abs(coherence_after(state, 9.5, dn))
    print(f"{dn:>8.2f} {p9 / p95:>12.3f} {contrast:>15.3f} {a9:>10.4f} {a95:>11.4f}")

print()
print("the point ratio P(9)/P(9.5) runs slightly above the total-likelihood")
print("contrast because the Poissonian number distribution slopes downward")
print("past its mean; the total contrast isolates the periodic modulation.")
print()
print("coherence moves the other way: sharp readouts that happen to land on")
print("a half-integer leave far more field coherence than integer outcomes.")
