"""Walk through the adjoint representation at l = 5.

Run with: python3 demos/adjoint_l5.py
"""

from uq_adjoint.decomp import casimir_block_filtration, decompose_adjoint, decompose_N_j
from uq_adjoint.modcat import block_indices
from uq_adjoint.smallqg import small_quantum_group
from uq_adjoint.verify import expected_multiplicities


def show(counter):
    return " + ".join(f"{lab.kind}({lab.highest_weight})^{m}" for lab, m in sorted(counter.items()))


def main():
    U = small_quantum_group(5)
    ad = U.adjoint_rep()
    print(f"dim u = {U.dim}; weights of ad: {dict(sorted(ad.dims.items()))}")

    for bi in block_indices(U.K):
        f = casimir_block_filtration(U, bi.j)
        line = f"block j={bi.j:>2}: dim {f.block.dim:>3}, N_j {f.dim_N():>3}, M_j {f.dim_M():>3}"
        if bi.j >= 0:
            line += f"   N_j = {show(decompose_N_j(U, bi.j).summands)}"
        print(line)

    dec = decompose_adjoint(U)
    print("ad =", show(dec.summands))
    print("matches table:", dec.summands == expected_multiplicities(5).entries)
    print("certificates verified:", dec.verify())


if __name__ == "__main__":
    main()
