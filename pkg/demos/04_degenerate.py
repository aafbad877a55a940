"""Repeated eigenvalues between consecutive minors.

When a value is shared by two nested spectra the generic formulas divide
by zero.  The shared part is split off, the rest is rebuilt as usual, and
the shared eigenspace contributes nothing to the new column.
"""

import warnings

import numpy as np

from matrixhear import (
    SignIndicators,
    classify_degeneracy,
    degenerate_instance,
    extract_spectral_data,
    reconstruct_full,
)
from matrixhear.telescopic import spectrum_residual

for case in ("I", "II", "IV"):
    a = degenerate_instance(case, m=1, seed=2).full()
    sd = extract_spectral_data(a)
    block = classify_degeneracy(sd[3], sd[4])
    signs = SignIndicators(tuple(np.ones(k, int) for k in range(1, len(sd))))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        out, records = reconstruct_full(sd, signs, full_output=True)
    worst = max(spectrum_residual(out.full()[:k, :k], sd[k - 1]) for k in range(1, len(sd) + 1))
    kinds = [r.kind for r in records]
    print(f"built as {case:>2}: classified {block.case.value:>3}, value {block.value:.3f}, "
          f"multiplicity {block.m + 1}, steps {kinds}, residual {worst:.1e}")
