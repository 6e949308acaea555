"""Correlation moments of symmetric states and their multi-index layouts.

The order-l tensor holds all 3^l expectation values of l-fold Pauli products.
Multi-indices encode to integers in base 3 with x -> 0, y -> 1, z -> 2 and the
leftmost axis most significant, which coincides with C-order flattening of the
(3, ..., 3) value array.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from ._pauli import AXES, SIGMA, dicke_to_computational
from .states import SymmetricState, reduced_state

IMAG_ATOL = 1e-10

_AXIS_CODE = {a: i for i, a in enumerate(AXES)}


@dataclass(frozen=True)
class MultiIndex:
    """Ordered tuple of Cartesian axes addressing one tensor entry."""

    axes: tuple[str, ...]

    def __post_init__(self) -> None:
        axes = tuple(self.axes)
        if not axes:
            raise ValueError("multi-index needs at least one axis")
        for a in axes:
            if a not in _AXIS_CODE:
                raise ValueError(f"axis must be one of {AXES}, got {a!r}")
        object.__setattr__(self, "axes", axes)

    @property
    def rank(self) -> int:
        return len(self.axes)

    def code(self) -> int:
        out = 0
        for a in self.axes:
            out = 3 * out + _AXIS_CODE[a]
        return out

    @classmethod
    def from_code(cls, rank: int, code: int) -> "MultiIndex":
        if rank < 1:
            raise ValueError(f"rank must be >= 1, got {rank}")
        if not 0 <= code < 3**rank:
            raise ValueError(f"code must lie in 0..{3**rank - 1}, got {code}")
        axes = []
        for _ in range(rank):
            axes.append(AXES[code % 3])
            code //= 3
        return cls(tuple(reversed(axes)))

    @classmethod
    def from_string(cls, text: str) -> "MultiIndex":
        return cls(tuple(text))

    def __str__(self) -> str:
        return "".join(self.axes)


@dataclass
class CorrelationTensor:
    """Order-l moment array; values has shape (3,) * order and real entries."""

    order: int
    values: np.ndarray

    def __post_init__(self) -> None:
        order = int(self.order)
        if order < 1:
            raise ValueError(f"order must be >= 1, got {order}")
        values = np.array(self.values, dtype=float)
        if values.shape != (3,) * order:
            raise ValueError(
                f"values must have shape {(3,) * order}, got {values.shape}"
            )
        values.setflags(write=False)
        self.order = order
        self.values = values

    def value_at(self, index: MultiIndex) -> float:
        if index.rank != self.order:
            raise ValueError(f"index rank {index.rank} != tensor order {self.order}")
        return float(self.values[tuple(_AXIS_CODE[a] for a in index.axes)])


def correlation_tensor(rho: SymmetricState, order: int) -> CorrelationTensor:
    """All order-l Pauli moments of the state.

    Reduces to l qubits in the Dicke basis, embeds into the 2^l computational
    space, then contracts qubit by qubit against the Pauli stack.
    """
    n = rho.n_qubits
    if not 1 <= order <= n:
        raise ValueError(f"order must lie in 1..{n}, got {order}")
    full = dicke_to_computational(reduced_state(rho, order).dicke_matrix)
    block = full.reshape((2,) * (2 * order))
    for remaining in range(order, 0, -1):
        # contract row axis a_{r-1} and column axis b_{r-1} with sigma[i, b, a]
        block = np.tensordot(
            block, SIGMA, axes=([remaining - 1, 2 * remaining - 1], [2, 1])
        )
    values = block.transpose(tuple(range(order - 1, -1, -1)))
    worst_imag = float(np.abs(values.imag).max())
    if worst_imag > IMAG_ATOL:
        raise ArithmeticError(
            f"moment tensor should be real; residual imaginary part {worst_imag:g}"
        )
    return CorrelationTensor(order, values.real)


def moment_column(tensor: CorrelationTensor) -> np.ndarray:
    """Flatten to the 3^l column in base-3 index order."""
    return tensor.values.reshape(-1).copy()


def moment_matrix(tensor: CorrelationTensor) -> np.ndarray:
    """Reshape an even-order tensor to the 3^k x 3^k matrix T[i, j] = T[i || j]."""
    if tensor.order % 2 != 0:
        raise ValueError(f"moment matrix needs even order, got {tensor.order}")
    side = 3 ** (tensor.order // 2)
    return tensor.values.reshape(side, side).copy()


def tensor_to_payload(tensor: CorrelationTensor) -> dict[str, Any]:
    """Serialize to {"order": l, "encoding": "base3-xyz", "values": [...]}."""
    return {
        "order": tensor.order,
        "encoding": "base3-xyz",
        "values": [float(v) for v in moment_column(tensor)],
    }


def tensor_from_payload(payload: dict[str, Any]) -> CorrelationTensor:
    """Inverse of :func:`tensor_to_payload`."""
    if payload.get("encoding") != "base3-xyz":
        raise ValueError(f"unknown tensor encoding {payload.get('encoding')!r}")
    order = int(payload["order"])
    values = np.asarray(payload["values"], dtype=float)
    if values.size != 3**order:
        raise ValueError(f"expected {3**order} values, got {values.size}")
    return CorrelationTensor(order, values.reshape((3,) * order))
