"""Banded matrices from spectra of sliding windows.

Instead of every leading minor, use a few leading minors and the spectra
of small diagonal windows.  Windows of size d+1 need a sign vector per
window; windows of size d+2 add one value each and then a single sign per
column is enough.
"""

import numpy as np

from matrixhear import (
    InstanceSpec,
    column_signs_of,
    data_counts,
    extract_sliding,
    extract_sliding_signs,
    gen_random_banded,
    reconstruct_sliding_minimal,
    reconstruct_sliding_optimal,
)

N, d = 10, 2
a = gen_random_banded(InstanceSpec(N, d, seed=9)).full()
print("counts for N=10, d=2:", data_counts(N, d))

small = extract_sliding(a, d, d + 1)
signs = extract_sliding_signs(a, d)
out = reconstruct_sliding_minimal(small, signs)
print(f"\nwindows of {d + 1}: {small.count()} values, {signs.count()} signs, "
      f"error {np.max(np.abs(out.full() - a)):.1e}")

large = extract_sliding(a, d, d + 2)
out, counts = reconstruct_sliding_optimal(large, column_signs_of(a, d), full_output=True)
print(f"windows of {d + 2}: {large.count()} values, {N - 1} signs, "
      f"error {np.max(np.abs(out.full() - a)):.1e}")
print("candidates per window:", counts)
