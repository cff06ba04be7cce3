"""One-time exhaustive sweep of arc maxima for every nonzero {-1,0,1}
coefficient vector of length <= 12 and L in {1,2,3}.

Prints the minimum arc maximum per L; those values are frozen as snapshot
constants in the regression test, which must never observe a smaller value.
"""

import time

import numpy as np

from mixlearn.littlewood import all_coefficient_rows, arc_max_batch

MAX_LEN = 12
ARCS = (1.0, 2.0, 3.0)


def main() -> None:
    rows = all_coefficient_rows(MAX_LEN)
    print(f"{rows.shape[0]} coefficient vectors of length <= {MAX_LEN}")
    for L in ARCS:
        t0 = time.monotonic()
        maxima = arc_max_batch(rows, L, resolution=4096)
        i = int(np.argmin(maxima))
        print(
            f"L={L}: min arc max = {maxima[i]!r} "
            f"at coeffs {tuple(int(c) for c in rows[i])} "
            f"({time.monotonic() - t0:.1f}s)"
        )


if __name__ == "__main__":
    main()
