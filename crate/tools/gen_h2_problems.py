"""Regenerate the bundled H2 problem files in crates/core/data.

Requires pyscf and openfermion. Integrals come from pyscf (RHF orbitals);
the fermionic Hamiltonian is encoded with Jordan-Wigner using the crate's
convention (a_k = sigma^+_k with the Z string on qubits k+1..N-1, interleaved
spin orbitals, qubit 0 = leftmost bit), obtained from openfermion's
convention by reversing mode and qubit labels.
"""

import os
import sys

import numpy as np
import openfermion as of
from pyscf import ao2mo, fci, gto, scf

OUT = os.path.join(os.path.dirname(__file__), "..", "crates", "core", "data")

PROBLEMS = [
    ("h2_sto3g_0.50", "sto-3g", 0.50),
    ("h2_sto3g_0.7414", "sto-3g", 0.7414),
    ("h2_sto3g_1.50", "sto-3g", 1.50),
    ("h2_631g_0.7414", "6-31g", 0.7414),
]


def fmt(x):
    if x == 0.0:
        return "0"
    return np.format_float_positional(x, unique=True, trim="-")


def build(basis, r):
    mol = gto.M(atom=f"H 0 0 0; H 0 0 {r}", basis=basis, unit="Angstrom", verbose=0)
    mf = scf.RHF(mol).run()
    c = mf.mo_coeff
    h1 = c.T @ mf.get_hcore() @ c
    nmo = c.shape[1]
    eri = ao2mo.restore(1, ao2mo.kernel(mol, c), nmo)
    two = np.asarray(eri.transpose(0, 2, 3, 1), order="C")
    one_so, two_so = of.chem.molecular_data.spinorb_from_spatial(h1, two)
    op = of.InteractionOperator(mol.energy_nuc(), one_so, 0.5 * two_so)
    ferm = of.get_fermion_operator(op)
    n = 2 * nmo
    rev = of.FermionOperator()
    for term, coef in ferm.terms.items():
        rev += of.FermionOperator(tuple((n - 1 - k, d) for k, d in term), coef)
    qop = of.jordan_wigner(rev)
    terms = {}
    for term, coef in qop.terms.items():
        key = tuple(sorted((n - 1 - q, a) for q, a in term))
        terms[key] = terms.get(key, 0) + coef
    fci_e = fci.FCI(mf).kernel()[0]
    return mf.e_tot, fci_e, n, terms


def axis_rank(a):
    return "XYZ".index(a)


def main():
    for name, basis, r in PROBLEMS:
        e_hf, e_fci, n, terms = build(basis, r)
        rows = []
        for key, coef in terms.items():
            coef = complex(coef)
            if abs(coef) < 1e-12:
                continue
            if abs(coef.imag) > 1e-12:
                sys.exit(f"non-real coefficient in {name}")
            rows.append(((tuple((q, axis_rank(a)) for q, a in key)), key, coef.real))
        rows.sort(key=lambda t: t[0])
        lines = [
            f"# n_qubits: {n}",
            "# n_electrons: 2",
            f"# hf_energy: {fmt(e_hf)}",
            f"# fci_energy: {fmt(e_fci)}",
            f"# molecule: H2",
            f"# basis: {basis}",
            f"# bond_length_angstrom: {fmt(r)}",
            "# encoding: jordan-wigner, interleaved spin orbitals (even=up, odd=down)",
            "# source: pyscf RHF integrals, tools/gen_h2_problems.py",
        ]
        for _, key, c in rows:
            toks = [fmt(c), "0"] + [f"{a}{q}" for q, a in key]
            lines.append(" ".join(toks))
        with open(os.path.join(OUT, name + ".ham"), "w") as f:
            f.write("\n".join(lines) + "\n")
        print(name, n, len(rows), e_hf, e_fci)


if __name__ == "__main__":
    main()
