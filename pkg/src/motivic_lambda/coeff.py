"""Exact arithmetic in the coefficient rings F2[tau,rho], their truncations,
and direct sums of shifted truncations modeling the mod-2 Milnor K-theory of
the supported base fields.

Coefficient monomials are written `t^n r^k` (tau/rho powers), optionally with
a field-generator prefix such as `u t^3 r`.  Generator labels carry no
multiplicative structure: they index direct summands of the coefficient
module, nothing more.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence, Tuple

_EXPONENT_CAP = 1 << 31  # exponents are machine integers; windows keep us far below


class CoeffMonomial(NamedTuple):
    """tau^n rho^k times an optional field-generator label (`""` = unit)."""

    n: int = 0
    k: int = 0
    gen: str = ""

    def degree(self) -> Tuple[int, int, int]:
        # |tau| = (0,0,-1), |rho| = (-1,0,-1); every non-unit label adds (-1,0,-1)
        s = -self.k
        w = -self.n - self.k
        if self.gen:
            s -= 1
            w -= 1
        return (s, 0, w)

    def times(self, other: "CoeffMonomial") -> "CoeffMonomial":
        if self.gen and other.gen:
            raise ValueError(
                f"product of field-generator labels {self.gen!r} * {other.gen!r} is not defined"
            )
        n, k = self.n + other.n, self.k + other.k
        if n >= _EXPONENT_CAP or k >= _EXPONENT_CAP:
            raise OverflowError("coefficient exponent out of range")
        return CoeffMonomial(n, k, self.gen or other.gen)

    def __str__(self) -> str:
        parts = []
        if self.gen:
            parts.append(self.gen)
        if self.n == 1:
            parts.append("t")
        elif self.n:
            parts.append(f"t^{self.n}")
        if self.k == 1:
            parts.append("r")
        elif self.k:
            parts.append(f"r^{self.k}")
        return " ".join(parts) if parts else "1"


COEFF_ONE = CoeffMonomial()

TAU = CoeffMonomial(n=1)
RHO = CoeffMonomial(k=1)


def binom_mod2(a: int, b: int) -> int:
    """Parity of C(a, b), with C(a, b) = 0 unless 0 <= b <= a (Lucas)."""
    if b < 0 or b > a:
        return 0
    return 1 if (b & (a - b)) == 0 else 0


def half_floor(a: int, m: int) -> int:
    """Value of the exponent symbol 2^(a-1)*m: 2^(a-1)*m for a >= 1, (m-1)/2 for a = 0.

    m must be odd; this is how every floor-bracket exponent in the torsion
    tables is evaluated.
    """
    if m % 2 == 0 or m < 0:
        raise ValueError(f"half_floor needs an odd non-negative m, got {m}")
    if a < 0:
        raise ValueError(f"half_floor needs a >= 0, got {a}")
    if a == 0:
        return (m - 1) // 2
    return (1 << (a - 1)) * m


@dataclass(frozen=True)
class CoefficientModule:
    """The right-coefficient module: free, a single truncation, or a labeled
    direct sum of truncations (one summand per field generator).

    `parts` maps generator label -> truncation exponent (None = no truncation).
    The free module is FieldSum-like with a single unlabeled untruncated part.
    """

    parts: Tuple[Tuple[str, Optional[int]], ...] = (("", None),)

    @staticmethod
    def free() -> "CoefficientModule":
        return CoefficientModule((("", None),))

    @staticmethod
    def truncated(r: int) -> "CoefficientModule":
        if r < 1:
            raise ValueError("truncation exponent must be >= 1")
        return CoefficientModule((("", r),))

    @staticmethod
    def field_sum(parts: Sequence[Tuple[str, Optional[int]]]) -> "CoefficientModule":
        return CoefficientModule(tuple(parts))

    @property
    def labels(self) -> Tuple[str, ...]:
        return tuple(label for label, _ in self.parts)

    def truncation_of(self, gen: str) -> Optional[int]:
        for label, r in self.parts:
            if label == gen:
                return r
        raise KeyError(f"generator label {gen!r} not in module {self}")

    def gen_rank(self, gen: str) -> int:
        for i, (label, _) in enumerate(self.parts):
            if label == gen:
                return i
        raise KeyError(f"generator label {gen!r} not in module {self}")

    def is_free(self) -> bool:
        return self.parts == (("", None),)

    def __str__(self) -> str:
        if self.is_free():
            return "free"
        if len(self.parts) == 1 and self.parts[0][0] == "":
            return f"r={self.parts[0][1]}"
        body = ",".join(f"{label or '1'}:{r if r is not None else 'free'}" for label, r in self.parts)
        return f"sum({body})"


def reduce_coeff(c: CoeffMonomial, mod: CoefficientModule) -> Optional[CoeffMonomial]:
    """Reduce a coefficient monomial in `mod`; None means it truncates to zero."""
    r = mod.truncation_of(c.gen)
    if r is not None and c.k >= r:
        return None
    return c


def parse_coeff(text: str) -> CoeffMonomial:
    mono = COEFF_ONE
    for tok in text.split():
        mono = mono.times(parse_coeff_token(tok))
    return mono


def parse_coeff_token(tok: str) -> CoeffMonomial:
    base, _, exp = tok.partition("^")
    e = int(exp) if exp else 1
    if e < 0:
        raise ValueError(f"negative exponent in {tok!r}")
    if base == "t":
        return CoeffMonomial(n=e)
    if base == "r":
        return CoeffMonomial(k=e)
    if base == "1":
        return COEFF_ONE
    if exp:
        raise ValueError(f"cannot raise generator label {base!r} to a power")
    return CoeffMonomial(gen=base)
