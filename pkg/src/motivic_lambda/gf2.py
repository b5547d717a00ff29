"""Dense GF(2) linear algebra on int bitsets.

Vectors are Python ints (bit i = coordinate i); a matrix is a list of column
bitsets plus the two dimensions.  Row/column index conventions follow the
slice machinery: coordinate i is the i-th smallest basis monomial, so the
leading (largest) term of a vector is its highest set bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple


def lead(v: int) -> int:
    """Index of the leading (highest) bit; -1 for the zero vector."""
    return v.bit_length() - 1


@dataclass
class BitMatrix:
    rows: int
    cols: int
    columns: List[int] = field(default_factory=list)  # len == cols

    def __post_init__(self):
        if not self.columns:
            self.columns = [0] * self.cols
        assert len(self.columns) == self.cols

    def column(self, j: int) -> int:
        return self.columns[j]

    def entry(self, i: int, j: int) -> int:
        return (self.columns[j] >> i) & 1

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.columns)

    @staticmethod
    def identity(n: int) -> "BitMatrix":
        return BitMatrix(n, n, [1 << i for i in range(n)])

    def mul(self, other: "BitMatrix") -> "BitMatrix":
        """self @ other (columns of other expressed through self)."""
        assert self.cols == other.rows
        out = []
        for c in other.columns:
            acc = 0
            j = 0
            while c:
                if c & 1:
                    acc ^= self.columns[j]
                c >>= 1
                j += 1
            out.append(acc)
        return BitMatrix(self.rows, other.cols, out)


class Echelon:
    """Incrementally built echelon basis with distinct leading bits.

    Supports reduction of vectors and membership/solve queries; optionally
    tracks combination witnesses in a companion coordinate space.
    """

    __slots__ = ("pivots", "witness")

    def __init__(self, track_witness: bool = False):
        self.pivots: Dict[int, int] = {}  # lead bit -> vector
        self.witness: Optional[Dict[int, int]] = {} if track_witness else None

    def reduce(self, v: int, w: int = 0) -> Tuple[int, int]:
        """Fully reduce v against the basis; returns (residue, witness)."""
        while v:
            piv = self.pivots.get(lead(v))
            if piv is None:
                break
            v ^= piv
            if self.witness is not None:
                w ^= self.witness[lead(piv)]
        return v, w

    def add(self, v: int, w: int = 0) -> bool:
        """Insert v (reduced); returns True if it enlarged the span."""
        v, w = self.reduce(v, w)
        if v == 0:
            return False
        self.pivots[lead(v)] = v
        if self.witness is not None:
            self.witness[lead(v)] = w
        return True

    def contains(self, v: int) -> bool:
        return self.reduce(v)[0] == 0

    def solve(self, v: int) -> Optional[int]:
        """Witness w with (basis combination selected by w) == v, else None."""
        assert self.witness is not None
        residue, w = self.reduce(v)
        return w if residue == 0 else None

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def basis(self) -> List[int]:
        return [self.pivots[p] for p in sorted(self.pivots)]

    def pivot_set(self) -> set:
        return set(self.pivots)


def rank(m: BitMatrix) -> int:
    ech = Echelon()
    for c in m.columns:
        ech.add(c)
    return ech.rank


def image_basis(m: BitMatrix) -> Echelon:
    ech = Echelon()
    for c in m.columns:
        ech.add(c)
    return ech


def kernel_basis(m: BitMatrix) -> List[int]:
    """Echelon basis of ker(m) as coordinate bitsets over the column space.

    Columns are processed from smallest to largest coordinate, so each kernel
    vector's leading bit is a distinct column index and the basis is in
    echelon form with respect to the column order.
    """
    ech = Echelon(track_witness=True)
    out: List[int] = []
    for j, c in enumerate(m.columns):
        residue, w = ech.reduce(c, 1 << j)
        if residue == 0:
            out.append(w)
        else:
            ech.pivots[lead(residue)] = residue
            ech.witness[lead(residue)] = w
    return out


def solve(m: BitMatrix, v: int) -> Optional[int]:
    """Some x with m @ x == v, as a coordinate bitset; None if inconsistent."""
    ech = Echelon(track_witness=True)
    for j, c in enumerate(m.columns):
        ech.add(c, 1 << j)
    return ech.solve(v)
