"""The Casimir matrices on the zero weight space, their coranks and the sign route.

Run with: python3 demos/matrices_and_signs.py [l]
"""

import sys

from uq_adjoint.cyclotomic import field
from uq_adjoint.modcat import block_indices
from uq_adjoint.smallqg import small_quantum_group
from uq_adjoint.verify import (
    build_A,
    corank_check,
    d_vanishing_blocks,
    machine_A,
    quantum_integer_signs,
    sign_twist,
)


def main(l=5):
    K = field(l)
    U = small_quantum_group(l)
    print(f"l = {l}: signs of (t)_q at q = exp(pi i (l+1)/l):", quantum_integer_signs(K))

    alt = [(-1) ** (i + 1) for i in range(l)]
    for bi in block_indices(K):
        A, Am = build_A(K, bi.j).entries, machine_A(U, bi.j)
        print(f"j={bi.j:>2}: literal match {Am == A}, match after alternating signs {sign_twist(Am, alt) == A}")

    for k in range(0, l - 1, 2):
        zeros = d_vanishing_blocks(K, k)
        cor = {bi.j: corank_check(K, bi.j, k) for bi in block_indices(K) if bi.j >= 0}
        print(f"k={k}: d(j,k) = 0 for j in {zeros}; corank of A'(j) - b_k: {cor}")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 5)
