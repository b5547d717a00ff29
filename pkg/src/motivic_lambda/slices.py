"""Finite ordered bases of the lambda algebra in a fixed tridegree, boundary
matrices, and a per-(degree, module) cache for the associated linear algebra.

For a slice of degree (s, f, w) the monomials lambda_I tau^n rho^k satisfy
sum(I) = s + k and n = sum(ceil(r_i/2)) - k - w >= 0, so k is bounded by
s + f - 2w (below any module truncation) and each k contributes the
coadmissible compositions of s + k into f parts.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .coeff import COEFF_ONE, CoeffMonomial, CoefficientModule
from .algebra import DELTA_SHIFT, Element, LambdaMonomial, TriDegree
from .dga import delta
from .gf2 import BitMatrix, Echelon, kernel_basis, lead

FREE = CoefficientModule.free()


@lru_cache(maxsize=None)
def coadmissible_compositions(total: int, parts: int) -> Tuple[Tuple[int, ...], ...]:
    """All (r_1,...,r_parts) of non-negative ints with sum `total` and
    2 r_i >= r_{i+1}."""
    if parts == 0:
        return ((),) if total == 0 else ()
    if parts == 1:
        return ((total,),)
    out: List[Tuple[int, ...]] = []

    def rec(prefix: List[int], remaining: int):
        depth = len(prefix)
        if depth == parts:
            if remaining == 0:
                out.append(tuple(prefix))
            return
        tail = parts - depth - 1
        cap = remaining if depth == 0 else min(remaining, 2 * prefix[-1])
        for r in range(cap, -1, -1):
            # the rest of the word can reach at most r*(2^(tail+1) - 2)
            if tail and (remaining - r) > r * ((1 << (tail + 1)) - 2):
                continue
            if not tail and remaining - r != 0:
                continue
            prefix.append(r)
            rec(prefix, remaining - r)
            prefix.pop()

    rec([], total)
    return tuple(out)


@dataclass(frozen=True)
class SliceBasis:
    degree: TriDegree
    module: CoefficientModule
    monomials: Tuple[LambdaMonomial, ...]  # strictly increasing in the global order

    def __len__(self) -> int:
        return len(self.monomials)

    def index(self) -> Dict[LambdaMonomial, int]:
        return {m: i for i, m in enumerate(self.monomials)}


def _enumerate_part(s: int, f: int, w: int, label: str, trunc: Optional[int]) -> List[LambdaMonomial]:
    out: List[LambdaMonomial] = []
    k_hi = s + f - 2 * w
    if trunc is not None:
        k_hi = min(k_hi, trunc - 1)
    for k in range(max(0, -s), k_hi + 1):
        for word in coadmissible_compositions(s + k, f):
            n = sum((r + 1) // 2 for r in word) - k - w
            if n >= 0:
                out.append(LambdaMonomial(word, CoeffMonomial(n, k, label)))
    return out


def enumerate_slice(d: TriDegree, mod: CoefficientModule = FREE) -> SliceBasis:
    """The full ordered basis of the slice of degree d over mod."""
    s, f, w = d
    monos: List[LambdaMonomial] = []
    if f >= 0:
        for label, trunc in mod.parts:
            if label:
                monos.extend(_enumerate_part(s + 1, f, w + 1, label, trunc))
            else:
                monos.extend(_enumerate_part(s, f, w, label, trunc))
    monos.sort(key=LambdaMonomial.sort_key)
    basis = SliceBasis(TriDegree(*d), mod, tuple(monos))
    for m in basis.monomials:
        assert m.degree() == basis.degree, f"enumeration bug: {m} not of degree {d}"
    return basis


class SliceContext:
    """Caches bases, boundary matrices and echelon data per (degree, module)."""

    def __init__(self, mod: CoefficientModule = FREE, fuel: int = 10_000_000):
        self.mod = mod
        self.fuel = fuel
        self._bases: Dict[TriDegree, SliceBasis] = {}
        self._indexes: Dict[TriDegree, Dict[LambdaMonomial, int]] = {}
        self._boundary: Dict[TriDegree, BitMatrix] = {}
        self._image: Dict[TriDegree, Echelon] = {}
        self._kernel: Dict[TriDegree, List[int]] = {}
        self._delta_cols: Dict[TriDegree, List[Element]] = {}

    def basis(self, d: TriDegree) -> SliceBasis:
        d = TriDegree(*d)
        b = self._bases.get(d)
        if b is None:
            b = enumerate_slice(d, self.mod)
            self._bases[d] = b
            self._indexes[d] = b.index()
        return b

    def to_bits(self, d: TriDegree, x: Element) -> int:
        idx = self.index_of(d)
        v = 0
        for t in x.terms:
            i = idx.get(t)
            if i is None:
                raise AssertionError(f"term {t} missing from slice {tuple(d)} basis (enumeration bug)")
            v |= 1 << i
        return v

    def index_of(self, d: TriDegree) -> Dict[LambdaMonomial, int]:
        d = TriDegree(*d)
        if d not in self._indexes:
            self.basis(d)
        return self._indexes[d]

    def from_bits(self, d: TriDegree, v: int) -> Element:
        monos = self.basis(d).monomials
        out = []
        i = 0
        while v:
            if v & 1:
                out.append(monos[i])
            v >>= 1
            i += 1
        return Element(out)

    def delta_columns(self, d: TriDegree) -> List[Element]:
        d = TriDegree(*d)
        cols = self._delta_cols.get(d)
        if cols is None:
            cols = [
                delta(Element.from_monomial(m), self.mod, self.fuel)
                for m in self.basis(d).monomials
            ]
            self._delta_cols[d] = cols
        return cols

    def boundary_matrix(self, d: TriDegree) -> BitMatrix:
        """Matrix of delta from slice d into slice d + (-1, +1, 0)."""
        d = TriDegree(*d)
        m = self._boundary.get(d)
        if m is None:
            target = d + DELTA_SHIFT
            rows = len(self.basis(target))
            cols = [self.to_bits(target, x) for x in self.delta_columns(d)]
            m = BitMatrix(rows, len(cols), cols)
            self._boundary[d] = m
        return m

    def image_into(self, d: TriDegree) -> Echelon:
        """Echelonized boundary space inside slice d (image of the preceding slice)."""
        d = TriDegree(*d)
        ech = self._image.get(d)
        if ech is None:
            pre = TriDegree(d.s + 1, d.f - 1, d.w)
            ech = Echelon()
            if pre.f >= 0:
                for c in self.boundary_matrix(pre).columns:
                    ech.add(c)
            self._image[d] = ech
        return ech

    def kernel_vectors(self, d: TriDegree) -> List[int]:
        """Echelon basis of ker(delta) on slice d, as bitsets over the slice basis."""
        d = TriDegree(*d)
        vecs = self._kernel.get(d)
        if vecs is None:
            vecs = kernel_basis(self.boundary_matrix(d))
            self._kernel[d] = vecs
        return vecs

    def is_boundary(self, d: TriDegree, x: Element) -> bool:
        return self.image_into(d).contains(self.to_bits(d, x))

    def is_cycle(self, d: TriDegree, x: Element) -> bool:
        return not delta(x, self.mod, self.fuel)
