"""A banded matrix needs far fewer signs.

For a pentadiagonal matrix each new column has only two unknown entries.
They lie on a circle fixed by the spectra and on several lines, and
generically exactly two antipodal points survive.  One sign per column
picks the right one.  The exceptional alpha-condition breaks this count.
"""

import numpy as np

from matrixhear import (
    InstanceSpec,
    alpha_condition,
    alpha_condition_instance,
    banded_step,
    column_signs_of,
    eig_sym,
    extract_spectral_data,
    gen_random_banded,
    penta_lines_step,
    reconstruct_banded,
)

np.set_printoptions(precision=4, suppress=True)

a = gen_random_banded(InstanceSpec(8, 2, seed=3)).full()
for n in range(3, 8):
    c = banded_step(eig_sym(a[:n, :n]), np.linalg.eigvalsh(a[: n + 1, : n + 1]), 2)
    print(f"step {n}: {len(c)} candidates, antipodal={c.is_antipodal()}, "
          f"band entries {c.columns[0][-2:]}")

cs = column_signs_of(a, 2)
out = reconstruct_banded(extract_spectral_data(a), 2, cs)
print("\ncolumn signs", cs.tolist() if hasattr(cs, "tolist") else cs)
print("max entry error:", np.max(np.abs(out.full() - a)))

print("\nan engineered minor satisfying the alpha-condition")
eig = alpha_condition_instance(4, alpha=0.7, seed=0)
print(" ", alpha_condition(eig))
big = np.zeros((5, 5))
big[:4, :4] = eig.matrix()
big[2:4, 4] = big[4, 2:4] = [0.4, -0.3]
big[4, 4] = 0.2
print("  line candidates:", len(penta_lines_step(eig, np.linalg.eigvalsh(big))))
