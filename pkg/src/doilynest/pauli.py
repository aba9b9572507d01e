"""Elements of the qubit x qu-2^k-it Pauli group, modulo phase.

An element is the operator ``(X^b1 Z^c1) (x) (X^b2 Z^c2)`` on C^2 (x) C^d with
``d = 2**k``.  Phases never affect commutation, so only the four exponents are
kept.  Non-identity elements are numbered 1..4d^2-1 in the order

    I (x) ..., X (x) ..., Z (x) ..., XZ (x) ...

with the qudit part running over ``X^b Z^c`` with ``c`` outer and ``b`` inner,
so that ``index = d^2 * (b1 + 2*c1) + d*c2 + b2``.  Index 0 is the identity.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

QUBIT_LABELS = ("I", "X", "Z", "XZ")


@dataclass(frozen=True)
class Case:
    """The case parameter ``k``; the qudit dimension is ``d = 2**k``."""

    k: int

    def __post_init__(self):
        if not isinstance(self.k, (int, np.integer)) or self.k < 2:
            raise ValueError(f"k must be an integer >= 2, got {self.k!r}")

    @property
    def d(self) -> int:
        return 2 ** self.k

    @property
    def n_elements(self) -> int:
        """Number of non-identity elements, ``4 d^2 - 1``."""
        return 4 * self.d * self.d - 1

    @property
    def set_size(self) -> int:
        return 2 ** (self.k + 1) - 1

    @property
    def core_size(self) -> int:
        """Intersection size of two collinear points."""
        return 2 ** self.k - 1

    @cached_property
    def exponents(self) -> np.ndarray:
        """``(4d^2, 4)`` array of ``(b1, c1, b2, c2)`` rows indexed by element index."""
        return index_to_exponents(np.arange(4 * self.d * self.d), self.d)


@dataclass(frozen=True, order=True)
class PauliElement:
    b1: int
    c1: int
    b2: int
    c2: int

    def check(self, d: int) -> None:
        if not (0 <= self.b1 <= 1 and 0 <= self.c1 <= 1):
            raise ValueError(f"qubit exponents out of range: {self}")
        if not (0 <= self.b2 < d and 0 <= self.c2 < d):
            raise ValueError(f"qudit exponents out of range for d={d}: {self}")

    @property
    def is_identity(self) -> bool:
        return self.b1 == self.c1 == self.b2 == self.c2 == 0

    def times(self, other: PauliElement, d: int) -> PauliElement:
        """Product modulo phase: exponents add componentwise."""
        return PauliElement((self.b1 + other.b1) % 2, (self.c1 + other.c1) % 2,
                            (self.b2 + other.b2) % d, (self.c2 + other.c2) % d)

    def label(self, d: int) -> str:
        def power(sym, e):
            return "" if e == 0 else sym if e == 1 else f"{sym}^{e}"

        qubit = QUBIT_LABELS[self.b1 + 2 * self.c1]
        qudit = power("X", self.b2) + power("Z", self.c2) or "I"
        return f"{qubit}(x){qudit}"


IDENTITY = PauliElement(0, 0, 0, 0)


def _case(p) -> Case:
    return p if isinstance(p, Case) else Case(p)


def index_to_exponents(index, d: int) -> np.ndarray:
    """Vectorised inverse of the numbering; columns are ``b1, c1, b2, c2``."""
    index = np.asarray(index, dtype=np.int64)
    q = index // (d * d)
    return np.stack([q & 1, q >> 1, index % d, (index // d) % d], axis=-1)


def element_index(e: PauliElement, p) -> int:
    p = _case(p)
    e.check(p.d)
    if e.is_identity:
        raise ValueError("identity has no index")
    d = p.d
    return d * d * (e.b1 + 2 * e.c1) + d * e.c2 + e.b2


def index_to_element(i: int, p) -> PauliElement:
    p = _case(p)
    if not 1 <= i <= p.n_elements:
        raise ValueError(f"index {i} outside 1..{p.n_elements}")
    return PauliElement(*(int(x) for x in index_to_exponents(i, p.d)))


def all_elements(p) -> list[PauliElement]:
    """Non-identity elements in index order 1..4d^2-1."""
    p = _case(p)
    return [PauliElement(*map(int, row)) for row in p.exponents[1:]]


def commutator_exponent(e: PauliElement, f: PauliElement, d: int) -> int:
    """Exponent ``m`` with ``[e, f] = omega_d^m I``, reduced mod ``d``.

    The qubit factor contributes ``omega_2^s1 = omega_d^(d/2 * s1)``.
    """
    s1 = (e.c1 * f.b1 - f.c1 * e.b1) % 2
    s2 = (e.c2 * f.b2 - f.c2 * e.b2) % d
    return ((d // 2) * s1 + s2) % d


def commutes(e: PauliElement, f: PauliElement, p) -> bool:
    return commutator_exponent(e, f, _case(p).d) == 0


def commutes_index(i: int, j: int, p) -> bool:
    p = _case(p)
    return commutes(index_to_element(i, p), index_to_element(j, p), p)


def commutation_block(rows: np.ndarray, cols: np.ndarray, d: int) -> np.ndarray:
    """Boolean matrix ``out[a, b] = commutes(rows[a], cols[b])`` for index arrays."""
    er = index_to_exponents(rows, d)
    ec = index_to_exponents(cols, d)
    b1r, c1r, b2r, c2r = (er[:, i, None] for i in range(4))
    b1c, c1c, b2c, c2c = (ec[None, :, i] for i in range(4))
    s1 = (c1r * b1c - c1c * b1r) & 1
    s2 = (c2r * b2c - c2c * b2r) % d
    return ((d // 2) * s1 + s2) % d == 0


def product_index(i: int, j: int, d: int) -> int:
    """Index of the mod-phase product of elements ``i`` and ``j`` (0 = identity)."""
    a = index_to_exponents(i, d)
    b = index_to_exponents(j, d)
    b1, c1 = (a[0] + b[0]) % 2, (a[1] + b[1]) % 2
    b2, c2 = (a[2] + b[2]) % d, (a[3] + b[3]) % d
    return int(d * d * (b1 + 2 * c1) + d * c2 + b2)
