#!/usr/bin/env python3
"""Convert NETLIB LP benchmark archives (.npz with A_eq/A_ub) to Matrix Market.

The archives are the ones shipped in scipy's source tree under
benchmarks/benchmarks/linprog_benchmark_files. The constraint matrix is put
in equality form by appending one slack column per inequality row:

    A = [ A_eq  0 ]
        [ A_ub  I ]

which gives the row/column counts of the LPnetlib matrices (e.g. afiro is
27 x 51).
"""
import argparse
import pathlib

import numpy as np
import scipy.io
import scipy.sparse as sp


def convert(npz_path: pathlib.Path) -> sp.coo_matrix:
    d = np.load(npz_path, allow_pickle=True)
    a_eq = sp.csr_matrix(d["A_eq"]) if d["A_eq"].size else None
    a_ub = sp.csr_matrix(d["A_ub"]) if d["A_ub"].size else None
    n_struct = d["c"].shape[0]
    m_ub = a_ub.shape[0] if a_ub is not None else 0
    blocks = []
    if a_eq is not None:
        blocks.append([a_eq, sp.csr_matrix((a_eq.shape[0], m_ub))])
    if a_ub is not None:
        blocks.append([a_ub, sp.identity(m_ub, format="csr")])
    a = sp.bmat(blocks, format="coo")
    assert a.shape[1] == n_struct + m_ub
    return a


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("npz", nargs="+", type=pathlib.Path)
    ap.add_argument("--out", type=pathlib.Path, required=True)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for path in args.npz:
        a = convert(path)
        name = path.stem.lower()
        scipy.io.mmwrite(str(args.out / f"{name}.mtx"), a, field="real", precision=17,
                         comment=f"NETLIB lp_{name} in equality form (slacks appended)")
        print(f"{name}: {a.shape[0]} x {a.shape[1]}, nnz={a.nnz}, n={a.shape[0] + a.shape[1]}")


if __name__ == "__main__":
    main()
