"""The motivic lambda algebra as a rewriting system.

Monomials are coadmissible words lambda_{r_1}...lambda_{r_f} (2*r_i >= r_{i+1})
with a right coefficient tau^n rho^k (and optional field-generator label).
A general word in lambda's, tau and rho is brought to this right-module normal
form in two interleaved phases: coefficients are pushed to the right through
the tau-move relations, and the leftmost non-coadmissible adjacent pair is
replaced through the quadratic (Adem) relations.  Both expansion tables are
memoized; they are the hot path of the whole engine.
"""

from __future__ import annotations

import itertools
import re
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union

from .coeff import (
    COEFF_ONE,
    CoeffMonomial,
    CoefficientModule,
    binom_mod2,
    parse_coeff_token,
    reduce_coeff,
)

DEFAULT_FUEL = 10_000_000


class FuelExhausted(RuntimeError):
    """Rewriting exceeded its step budget; signals a suspected non-termination bug."""


class TriDegree(NamedTuple):
    s: int  # stem
    f: int  # filtration
    w: int  # weight

    def __add__(self, other):  # type: ignore[override]
        return TriDegree(self.s + other[0], self.f + other[1], self.w + other[2])

    def __str__(self) -> str:
        return f"({self.s},{self.f},{self.w})"


DELTA_SHIFT = TriDegree(-1, 1, 0)
RHO_SHIFT = TriDegree(-1, 0, -1)


def lambda_degree(r: int) -> TriDegree:
    return TriDegree(r, 1, (r + 1) // 2)


class LambdaMonomial(NamedTuple):
    word: Tuple[int, ...]
    coeff: CoeffMonomial = COEFF_ONE

    def degree(self) -> TriDegree:
        s = sum(self.word)
        f = len(self.word)
        w = sum((r + 1) // 2 for r in self.word)
        cs, _, cw = self.coeff.degree()
        return TriDegree(s + cs, f, w + cw)

    def is_coadmissible(self) -> bool:
        return all(2 * a >= b for a, b in zip(self.word, self.word[1:]))

    def sort_key(self) -> tuple:
        # Global monomial order: larger rho-power is smaller, then larger
        # tau-power is smaller, then lexicographic on the index word; labels
        # by registry position (unit largest).  The leading term of an
        # element is the largest monomial in this order.
        c = self.coeff
        return (-c.k, -c.n, self.word, 0 if not c.gen else _label_rank(c.gen))

    def __str__(self) -> str:
        parts = [f"l{r}" for r in self.word]
        if self.coeff != COEFF_ONE:
            parts.append(str(self.coeff))
        return " ".join(parts) if parts else "1"


_LABEL_REGISTRY: Dict[str, int] = {"": 0}


def _label_rank(gen: str) -> int:
    rank = _LABEL_REGISTRY.get(gen)
    if rank is None:
        rank = -len(_LABEL_REGISTRY)
        _LABEL_REGISTRY[gen] = rank
    return rank


MONO_ONE = LambdaMonomial(())


class Element:
    """A finite F2-linear combination of LambdaMonomials (set = coefficient 1).

    Terms are stored sorted descending in the global order, so terms[0] is the
    leading term.  Elements are immutable values.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[LambdaMonomial] = (), _sorted: bool = False):
        if _sorted:
            self.terms: Tuple[LambdaMonomial, ...] = tuple(terms)
            return
        acc: Dict[LambdaMonomial, bool] = {}
        for t in terms:
            if t in acc:
                del acc[t]
            else:
                acc[t] = True
        self.terms = tuple(sorted(acc, key=LambdaMonomial.sort_key, reverse=True))

    @staticmethod
    def zero() -> "Element":
        return _ZERO

    @staticmethod
    def one() -> "Element":
        return _ONE

    @staticmethod
    def from_monomial(m: LambdaMonomial) -> "Element":
        return Element((m,), _sorted=True)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, Element) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def __add__(self, other: "Element") -> "Element":
        if not self.terms:
            return other
        if not other.terms:
            return self
        mine = set(self.terms)
        mine.symmetric_difference_update(other.terms)
        return Element(sorted(mine, key=LambdaMonomial.sort_key, reverse=True), _sorted=True)

    def __iter__(self) -> Iterator[LambdaMonomial]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def leading(self) -> LambdaMonomial:
        if not self.terms:
            raise ValueError("zero element has no leading term")
        return self.terms[0]

    def degree(self) -> Optional[TriDegree]:
        """The common TriDegree of all terms, or None for 0 / inhomogeneous."""
        degs = {t.degree() for t in self.terms}
        if len(degs) == 1:
            return degs.pop()
        return None

    def times_coeff(self, c: CoeffMonomial) -> "Element":
        if c == COEFF_ONE:
            return self
        return Element(
            (LambdaMonomial(t.word, t.coeff.times(c)) for t in self.terms), _sorted=True
        )

    def times_rho(self, j: int = 1) -> "Element":
        return self.times_coeff(CoeffMonomial(k=j))

    def div_rho(self, j: int) -> "Element":
        """Exact division by rho^j; raises if any term has rho-exponent < j."""
        out = []
        for t in self.terms:
            if t.coeff.k < j:
                raise ValueError(f"term {t} not divisible by r^{j}")
            out.append(LambdaMonomial(t.word, CoeffMonomial(t.coeff.n, t.coeff.k - j, t.coeff.gen)))
        return Element(out, _sorted=True)

    def reduce(self, mod: CoefficientModule) -> "Element":
        out = []
        for t in self.terms:
            c = reduce_coeff(t.coeff, mod)
            if c is not None:
                out.append(LambdaMonomial(t.word, c))
        return Element(out, _sorted=True)

    def rho_valuation(self) -> int:
        """min rho-exponent over terms (the element must be nonzero)."""
        return min(t.coeff.k for t in self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(str(t) for t in self.terms)

    def __repr__(self) -> str:
        return f"Element({self})"


_ZERO = Element((), _sorted=True)
_ONE = Element((MONO_ONE,), _sorted=True)


# ---------------------------------------------------------------------------
# Expansion tables
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def tau_past(n: int, j: int) -> Tuple[Tuple[int, int, int], ...]:
    """tau^n * lambda_j as a sum of lambda_{j'} tau^{n'} rho^{k'}.

    Returns XOR-reduced triples (j', n', k').  Single moves:
      tau l_{2m+1} = l_{2m+1} t + l_{2m+2} r
      tau l_{2m}   = l_{2m} t + l_{2m+1} t r + l_{2m+2} r^2
    """
    if n == 0:
        return ((j, 0, 0),)
    if n == 1:
        if j % 2 == 1:
            return ((j, 1, 0), (j + 1, 0, 1))
        return ((j, 1, 0), (j + 1, 1, 1), (j + 2, 0, 2))
    acc: Dict[Tuple[int, int, int], bool] = {}
    for j1, n1, k1 in tau_past(1, j):
        for j2, n2, k2 in tau_past(n - 1, j1):
            key = (j2, n1 + n2, k1 + k2)
            if key in acc:
                del acc[key]
            else:
                acc[key] = True
    return tuple(sorted(acc))


@lru_cache(maxsize=None)
def adem_expand(a: int, c: int) -> Element:
    """Straighten the non-coadmissible pair lambda_a lambda_c (c > 2a).

    Writing c = 2a + b + 1: for a odd or b even the result is the single sum
    over 0 <= r < b/2 with coefficients C(b-r-1, r); for a even and b odd
    there is additionally the rho-multiplied sum over 0 <= r <= (b+1)/2 with
    coefficients C(floor(b/2) - floor(r/2), floor(r/2)), and the first sum
    acquires tau^((r-1) mod 2) factors.  Every output pair is coadmissible.
    """
    if c <= 2 * a:
        raise ValueError(f"pair (l{a}, l{c}) is already coadmissible")
    b = c - 2 * a - 1
    terms: List[LambdaMonomial] = []
    motivic = (a % 2 == 0) and (b % 2 == 1)
    for r in range(0, (b + 1) // 2):
        if binom_mod2(b - r - 1, r):
            tau_exp = ((r - 1) % 2) if motivic else 0
            terms.append(LambdaMonomial((a + b - r, 2 * a + 1 + r), CoeffMonomial(n=tau_exp)))
    if motivic:
        for r in range(0, (b + 1) // 2 + 1):
            if binom_mod2(b // 2 - r // 2, r // 2):
                terms.append(
                    LambdaMonomial((a + b + 1 - r, 2 * a + 1 + r), CoeffMonomial(k=1))
                )
    out = Element(terms)
    for t in out:
        if not t.is_coadmissible():
            raise AssertionError(f"adem_expand({a},{c}) produced non-coadmissible {t}")
    return out


# ---------------------------------------------------------------------------
# Normal form
# ---------------------------------------------------------------------------

Atom = Union[int, CoeffMonomial]
Word = Tuple[Atom, ...]


def normal_form_words(
    words: Iterable[Word],
    mod: CoefficientModule = CoefficientModule.free(),
    fuel: int = DEFAULT_FUEL,
    max_index: Optional[int] = None,
) -> Element:
    """Rewrite arbitrary words (atoms: lambda indices or coefficient monomials)
    to the coadmissible right-coefficient normal form over `mod`.

    Strategy: push the leftmost interior coefficient one lambda to the right
    (tau-moves; rho and Milnor K-theory classes are central), then replace the
    leftmost non-coadmissible pair via adem_expand, repeating until stable.
    """
    free = mod.is_free()
    out: Dict[LambdaMonomial, bool] = {}
    stack: List[Word] = [tuple(w) for w in words]
    while stack:
        fuel -= 1
        if fuel < 0:
            raise FuelExhausted("rewrite budget exhausted; raise --fuel if the input is legitimate")
        word = stack.pop()

        # collapse adjacent coefficient atoms, drop units, truncate early
        atoms: List[Atom] = []
        dead = False
        for atom in word:
            if isinstance(atom, CoeffMonomial):
                if atoms and isinstance(atoms[-1], CoeffMonomial):
                    atom = atoms.pop().times(atom)
                if not free and reduce_coeff(atom, mod) is None:
                    dead = True
                    break
                if atom != COEFF_ONE:
                    atoms.append(atom)
            else:
                if max_index is not None and atom > max_index:
                    raise AssertionError(f"lambda index {atom} exceeds window bound {max_index}")
                atoms.append(atom)
        if dead:
            continue

        # leftmost interior coefficient
        interior = next(
            (
                i
                for i, atom in enumerate(atoms[:-1])
                if isinstance(atom, CoeffMonomial)
            ),
            None,
        )
        if interior is not None:
            c = atoms[interior]
            j = atoms[interior + 1]
            assert isinstance(c, CoeffMonomial) and isinstance(j, int)
            pre, post = atoms[:interior], atoms[interior + 2 :]
            for j2, dn, dk in tau_past(c.n, j):
                moved = CoeffMonomial(dn, dk + c.k, c.gen)
                stack.append(tuple(pre) + (j2, moved) + tuple(post))
            continue

        # pure lambda word with at most one trailing coefficient
        if atoms and isinstance(atoms[-1], CoeffMonomial):
            lam, coeff = atoms[:-1], atoms[-1]
        else:
            lam, coeff = atoms, COEFF_ONE
        bad = next(
            (i for i in range(len(lam) - 1) if 2 * lam[i] < lam[i + 1]),
            None,
        )
        if bad is None:
            mono = LambdaMonomial(tuple(lam), coeff)  # type: ignore[arg-type]
            if mono in out:
                del out[mono]
            else:
                out[mono] = True
            continue
        expansion = adem_expand(lam[bad], lam[bad + 1])
        pre, post = tuple(lam[:bad]), tuple(lam[bad + 2 :])
        for t in expansion:
            tail: Word = (t.coeff,) if t.coeff != COEFF_ONE else ()
            stack.append(pre + t.word + tail + post + (coeff,))
    return Element(out)


def normal_form(
    x: Union[Element, LambdaMonomial, Word, Sequence[Atom]],
    mod: CoefficientModule = CoefficientModule.free(),
    fuel: int = DEFAULT_FUEL,
) -> Element:
    if isinstance(x, Element):
        words: List[Word] = [t.word + (t.coeff,) for t in x.terms]
    elif isinstance(x, LambdaMonomial):
        words = [x.word + (x.coeff,)]
    else:
        words = [tuple(x)]
    return normal_form_words(words, mod, fuel)


@lru_cache(maxsize=None)
def _straighten_append(word: Tuple[int, ...], r: int) -> Element:
    """Normal form of (coadmissible lambda word) * lambda_r over the free module."""
    return normal_form_words([word + (r,)])


def mono_times(x: LambdaMonomial, y: LambdaMonomial, mod: CoefficientModule, fuel: int) -> Element:
    if x.coeff == COEFF_ONE and x.is_coadmissible() and len(y.word) == 1:
        # hot path: cached pure-lambda straightening
        return _straighten_append(x.word, y.word[0]).times_coeff(y.coeff).reduce(mod)
    word: Word = x.word + (x.coeff,) + y.word + (y.coeff,)
    return normal_form_words([word], mod, fuel)


def multiply(
    x: Element,
    y: Element,
    mod: CoefficientModule = CoefficientModule.free(),
    fuel: int = DEFAULT_FUEL,
) -> Element:
    """Bilinear product in normal form."""
    acc = Element.zero()
    for tx, ty in itertools.product(x.terms, y.terms):
        acc = acc + mono_times(tx, ty, mod, fuel)
    return acc


# ---------------------------------------------------------------------------
# Parsing / formatting
# ---------------------------------------------------------------------------

_LAMBDA_TOKEN = re.compile(r"^l(\d+)$")


def parse_element(
    text: str,
    mod: CoefficientModule = CoefficientModule.free(),
    fuel: int = DEFAULT_FUEL,
) -> Element:
    """Parse the element grammar: terms separated by `+`, a term a juxtaposed
    word like `l3 l1 t^2 r` (`l<i>` = lambda_i, `t` = tau, `r` = rho).
    Parsing applies normal_form.
    """
    text = text.strip()
    if text == "0":
        return Element.zero()
    words: List[Word] = []
    for chunk in text.split("+"):
        chunk = chunk.strip()
        if not chunk:
            raise ValueError("empty term in element string")
        atoms: List[Atom] = []
        if chunk != "1":
            for tok in chunk.split():
                m = _LAMBDA_TOKEN.match(tok)
                if m:
                    atoms.append(int(m.group(1)))
                else:
                    atoms.append(parse_coeff_token(tok))
        words.append(tuple(atoms))
    return normal_form_words(words, mod, fuel)


def format_element(x: Element) -> str:
    return str(x)
