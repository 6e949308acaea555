"""Pauli matrices, Pauli-string stacks, and the Dicke-to-computational embedding.

Axis encoding is fixed everywhere: x -> 0, y -> 1, z -> 2, leftmost axis most
significant in base-3 multi-index codes.  Strings over {0, x, y, z} use "0" for
the single-qubit identity slot.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb

import numpy as np

AXES = ("x", "y", "z")

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)

# Stack indexed by axis code 0..2.
SIGMA = np.stack([SIGMA_X, SIGMA_Y, SIGMA_Z])
SIGMA.setflags(write=False)

PAULI_BY_SYMBOL = {"0": IDENTITY_2, "x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}

# Dense 2^n matrices get big fast; 4096 x 4096 is the largest we ever build.
MAX_FULL_QUBITS = 12


@lru_cache(maxsize=None)
def pauli_string_stack(k: int) -> np.ndarray:
    """All 3^k Pauli strings on k qubits as a (3^k, 2^k, 2^k) stack, base-3 ordered."""
    if k < 1:
        raise ValueError(f"string length must be >= 1, got {k}")
    if k == 1:
        return SIGMA
    prev = pauli_string_stack(k - 1)
    # kron(prev[i], SIGMA[j]) lands at stack position i*3 + j
    out = np.einsum("iab,jcd->ijacbd", prev, SIGMA)
    out = out.reshape(3**k, 2**k, 2**k)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def dicke_basis_matrix(n: int) -> np.ndarray:
    """(2^n, n+1) matrix whose column p is the Dicke vector with p excitations.

    Column p is the normalized uniform superposition of the C(n, p)
    computational strings holding exactly p ones.
    """
    if n < 1:
        raise ValueError(f"need at least one qubit, got {n}")
    if n > MAX_FULL_QUBITS:
        raise ValueError(
            f"full-space embedding capped at {MAX_FULL_QUBITS} qubits, got {n}"
        )
    dim = 1 << n
    pops = np.array([bin(i).count("1") for i in range(dim)])
    basis = np.zeros((dim, n + 1), dtype=complex)
    basis[np.arange(dim), pops] = 1.0 / np.sqrt([comb(n, int(p)) for p in pops])
    basis.setflags(write=False)
    return basis


def dicke_to_computational(dicke_matrix: np.ndarray) -> np.ndarray:
    """Embed an operator on the symmetric subspace into the full 2^n space."""
    n = dicke_matrix.shape[0] - 1
    basis = dicke_basis_matrix(n)
    return basis @ dicke_matrix @ basis.conj().T


@lru_cache(maxsize=2048)
def _kron_chain(symbols: tuple[str, ...]) -> np.ndarray:
    """Literal Kronecker product of single-qubit factors; cached for short chains."""
    out = PAULI_BY_SYMBOL[symbols[0]]
    for s in symbols[1:]:
        out = np.kron(out, PAULI_BY_SYMBOL[s])
    return out


def pauli_string_matrix(symbols: tuple[str, ...]) -> np.ndarray:
    """Dense matrix for a string over {0, x, y, z}, built by plain kron."""
    for s in symbols:
        if s not in PAULI_BY_SYMBOL:
            raise ValueError(f"unknown Pauli symbol {s!r}")
    if len(symbols) <= 4:
        return _kron_chain(symbols)
    out = _kron_chain(symbols[:4])
    for s in symbols[4:]:
        out = np.kron(out, PAULI_BY_SYMBOL[s])
    return out


def trace_against_string(matrix: np.ndarray, symbols: tuple[str, ...]) -> complex:
    """Tr[M * (s_1 x ... x s_n)] without materializing the full string.

    The string is split into chunks of at most four factors; each chunk is a
    cached dense matrix and the trace is a single contraction over the chunked
    reshape of M.
    """
    n = len(symbols)
    chunks = [symbols[i : i + 4] for i in range(0, n, 4)]
    mats = [_kron_chain(c) for c in chunks]
    dims = [1 << len(c) for c in chunks]
    block = matrix.reshape(tuple(dims) * 2)
    if len(mats) == 1:
        return complex(np.einsum("ab,ba->", block, mats[0]))
    if len(mats) == 2:
        return complex(np.einsum("abcd,ca,db->", block, mats[0], mats[1]))
    if len(mats) == 3:
        return complex(
            np.einsum("abcdef,da,eb,fc->", block, mats[0], mats[1], mats[2])
        )
    raise ValueError(f"strings longer than {MAX_FULL_QUBITS} qubits are unsupported")
