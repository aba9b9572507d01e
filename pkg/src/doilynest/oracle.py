"""Dense-matrix reference path.

Builds the shift and clock matrices explicitly and decides commutation by
matrix arithmetic.  Slow on purpose; only used to cross-check the exponent
arithmetic in :mod:`doilynest.pauli` at small dimension.
"""
from __future__ import annotations

import itertools

import numpy as np

from .pauli import Case, PauliElement, all_elements

UNITARY_TOL = 1e-10
RELATION_TOL = 1e-10
COMMUTE_TOL = 1e-9
MAX_ORACLE_K = 4


def _check_dim(d):
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")


def shift_matrix(d: int) -> np.ndarray:
    """``X|s> = |s+1 mod d>``."""
    _check_dim(d)
    return np.roll(np.eye(d, dtype=complex), 1, axis=0)


def clock_matrix(d: int) -> np.ndarray:
    """``Z|s> = omega^s |s>`` with ``omega = exp(2 pi i / d)``."""
    _check_dim(d)
    return np.diag(np.exp(2j * np.pi * np.arange(d) / d))


def qudit_operator(b: int, c: int, d: int) -> np.ndarray:
    return np.linalg.matrix_power(shift_matrix(d), b) @ np.linalg.matrix_power(clock_matrix(d), c)


def normal_form_operator(b1: int, c1: int, b2: int, c2: int, d: int) -> np.ndarray:
    """``(X_2^b1 Z_2^c1) (x) (X_d^b2 Z_d^c2)``, qubit factor first."""
    if not (0 <= b1 <= 1 and 0 <= c1 <= 1 and 0 <= b2 < d and 0 <= c2 < d):
        raise ValueError(f"exponents out of range: {(b1, c1, b2, c2)} for d={d}")
    return np.kron(qudit_operator(b1, c1, 2), qudit_operator(b2, c2, d))


def element_operator(e: PauliElement, d: int) -> np.ndarray:
    return normal_form_operator(e.b1, e.c1, e.b2, e.c2, d)


def is_unitary(a: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    return np.allclose(a.conj().T @ a, np.eye(a.shape[0]), rtol=0, atol=tol)


def oracle_commutes(a: np.ndarray, b: np.ndarray, tol: float = COMMUTE_TOL) -> bool:
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return bool(np.max(np.abs(a @ b - b @ a), initial=0.0) <= tol)


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Group commutator ``A B A^-1 B^-1`` (inverses are adjoints for unitaries)."""
    return a @ b @ a.conj().T @ b.conj().T


def verify_basic_relation(d: int) -> bool:
    """``omega X Z == Z X`` entrywise."""
    x, z = shift_matrix(d), clock_matrix(d)
    omega = np.exp(2j * np.pi / d)
    return bool(np.allclose(omega * x @ z, z @ x, rtol=0, atol=RELATION_TOL))


def projective_classes(ops) -> int:
    """Count operators distinct up to a global phase."""
    keys = set()
    for op in ops:
        flat = op.ravel()
        pivot = flat[np.flatnonzero(np.abs(flat) > 0.5)[0]]
        keys.add(tuple(np.round(flat / pivot, 6).view(float)))
    return len(keys)


def agreement(k: int, predicate) -> tuple[int, list[tuple[int, int]]]:
    """Compare ``predicate(i, j)`` with the matrix oracle on all index pairs ``i < j``.

    Returns the number of pairs checked and the disagreeing pairs.
    """
    case = Case(k)
    if k > MAX_ORACLE_K:
        raise ValueError(f"oracle is capped at k <= {MAX_ORACLE_K}")
    ops = [element_operator(e, case.d) for e in all_elements(case)]
    n = len(ops)
    # stacked products: one batched matmul per row
    stack = np.stack(ops)
    bad = []
    checked = 0
    for i in range(n - 1):
        a = ops[i]
        rest = stack[i + 1:]
        diff = np.abs(a @ rest - rest @ a).max(axis=(1, 2))
        oracle = diff <= COMMUTE_TOL
        for off, ok in enumerate(oracle):
            j = i + 1 + off
            if bool(ok) != bool(predicate(i + 1, j + 1)):
                bad.append((i + 1, j + 1))
        checked += len(oracle)
    return checked, bad


def random_pairs(d: int, count: int, rng) -> list[tuple[PauliElement, PauliElement]]:
    def draw():
        return PauliElement(int(rng.integers(2)), int(rng.integers(2)),
                            int(rng.integers(d)), int(rng.integers(d)))

    return [(draw(), draw()) for _ in range(count)]


def all_operators(d: int):
    """All ``4 d^2`` normal-form operators, identity included."""
    for b1, c1, b2, c2 in itertools.product(range(2), range(2), range(d), range(d)):
        yield normal_form_operator(b1, c1, b2, c2, d)
