"""Chain-level operators: the differential, the Frobenius lift, and the
doubling retraction onto the classical lambda algebra.

The differential is the derivation determined by
    delta(lambda_n) = sum_{1<=r<=n/2} lambda_{n-r} lambda_{r-1} C(n-r, r),
    delta(tau)      = lambda_0 rho,
    delta(x)        = 0 for x in Milnor K-theory,
with the closed form
    delta(tau^n) = sum_{r>=0} lambda_r C(n+floor(r/2), r+1) tau^{n-floor(r/2)-1} rho^{r+1}.

theta doubles internal degrees (lambda_{2n-1} -> lambda_{4n-1},
lambda_{2n} -> lambda_{4n+1} tau + lambda_{4n+2} rho, x -> x^2); the doubling
inclusion lambda_n -> lambda_{2n+1} and its splitting q identify the
rho-torsion-free part of the real-base Ext with a regraded classical Ext.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Tuple

from .coeff import COEFF_ONE, CoeffMonomial, CoefficientModule, binom_mod2
from .algebra import (
    DEFAULT_FUEL,
    Element,
    LambdaMonomial,
    TriDegree,
    multiply,
    normal_form_words,
)

FREE = CoefficientModule.free()


@lru_cache(maxsize=None)
def delta_gen(n: int) -> Element:
    terms = [
        LambdaMonomial((n - r, r - 1))
        for r in range(1, n // 2 + 1)
        if binom_mod2(n - r, r)
    ]
    out = Element(terms)
    for t in out:
        assert t.is_coadmissible()
    return out


@lru_cache(maxsize=None)
def delta_tau_pow(n: int) -> Element:
    """delta(tau^n) in closed form; n >= 1."""
    if n < 1:
        raise ValueError("delta_tau_pow needs n >= 1")
    terms: List[LambdaMonomial] = []
    for r in range(0, 2 * n + 2):
        if binom_mod2(n + r // 2, r + 1):
            tau_exp = n - r // 2 - 1
            # in-range coefficients always vanish past the tau budget
            assert tau_exp >= 0, f"delta(tau^{n}): odd binomial with negative tau exponent"
            terms.append(LambdaMonomial((r,), CoeffMonomial(tau_exp, r + 1)))
    return Element(terms)


@lru_cache(maxsize=None)
def _delta_word(word: Tuple[int, ...]) -> Element:
    """Derivation applied to a pure lambda word (over the free module)."""
    acc = Element.zero()
    for i, r in enumerate(word):
        piece = delta_gen(r)
        if not piece:
            continue
        pre, post = word[:i], word[i + 1 :]
        acc = acc + normal_form_words([pre + t.word + post for t in piece])
    return acc


@lru_cache(maxsize=None)
def delta_monomial(word: Tuple[int, ...], n: int) -> Element:
    """delta(lambda_word * tau^n) over the free module; rho powers and field
    labels are delta-inert and can be multiplied on afterwards."""
    from .algebra import _straighten_append

    if not n:
        return _delta_word(word)
    acc: set = set()
    for t in _delta_word(word).terms:
        c = t.coeff
        acc.add(LambdaMonomial(t.word, CoeffMonomial(c.n + n, c.k, c.gen)))
    for t in delta_tau_pow(n):
        tc = t.coeff
        for u in _straighten_append(word, t.word[0]).terms:
            uc = u.coeff
            m = LambdaMonomial(u.word, CoeffMonomial(uc.n + tc.n, uc.k + tc.k, uc.gen))
            if m in acc:
                acc.discard(m)
            else:
                acc.add(m)
    return Element(acc)


def delta(
    x: Element,
    mod: CoefficientModule = FREE,
    fuel: int = DEFAULT_FUEL,
) -> Element:
    """The differential, extended over products by the Leibniz rule (char 2).

    Shifts TriDegree by (-1, +1, 0); vanishes on Milnor K-theory classes and
    field-generator labels.
    """
    free = mod.is_free()
    acc = Element.zero()
    for t in x.terms:
        c = t.coeff
        part = delta_monomial(t.word, c.n)
        if c.k or c.gen:
            part = part.times_coeff(CoeffMonomial(0, c.k, c.gen))
        acc = acc + (part if free else part.reduce(mod))
    return acc


_THETA_GEN: Dict[int, Element] = {}


def _theta_gen(r: int) -> Element:
    out = _THETA_GEN.get(r)
    if out is None:
        if r % 2 == 1:
            out = Element.from_monomial(LambdaMonomial((2 * r + 1,)))
        else:
            out = Element(
                (
                    LambdaMonomial((2 * r + 1,), CoeffMonomial(n=1)),
                    LambdaMonomial((2 * r + 2,), CoeffMonomial(k=1)),
                )
            )
        _THETA_GEN[r] = out
    return out


def theta(
    x: Element,
    mod: CoefficientModule = FREE,
    fuel: int = DEFAULT_FUEL,
) -> Element:
    """Multiplicative Frobenius lift; sends a homogeneous class of degree
    (s, f, w) to one of degree (2s+f, f, 2w)."""
    acc = Element.zero()
    for t in x.terms:
        if t.coeff.gen:
            raise ValueError("theta is not defined on field-generator summands")
        word: List = []
        for r in t.word:
            gen = _theta_gen(r)
            if len(gen) == 1:
                word.extend(gen.terms[0].word)
            else:
                word.append(gen)
        sq = CoeffMonomial(2 * t.coeff.n, 2 * t.coeff.k)
        acc = acc + _expand_word_of_elements(word, sq, mod, fuel)
    return acc


def _expand_word_of_elements(word, tail_coeff, mod, fuel) -> Element:
    """Normal form of a product of (lambda indices | Elements) times a coefficient."""
    flats: List[Tuple] = [()]
    for atom in word:
        if isinstance(atom, Element):
            flats = [
                f + t.word + ((t.coeff,) if t.coeff != COEFF_ONE else ())
                for f in flats
                for t in atom.terms
            ]
        else:
            flats = [f + (atom,) for f in flats]
    return normal_form_words([f + (tail_coeff,) for f in flats], mod, fuel)


# ---------------------------------------------------------------------------
# The classical lambda algebra (doubled grading) and the retraction
# ---------------------------------------------------------------------------


class ClassicalElement:
    """F2-combination of coadmissible classical lambda words.

    Grading follows the doubling convention: lambda_n has stem 2n+1,
    filtration 1, weight n+1, so the inclusion of the classical algebra is
    degree-preserving.
    """

    __slots__ = ("words",)

    def __init__(self, words: Iterable[Tuple[int, ...]] = ()):
        acc: Dict[Tuple[int, ...], bool] = {}
        for w in words:
            if w in acc:
                del acc[w]
            else:
                acc[w] = True
        self.words: Tuple[Tuple[int, ...], ...] = tuple(sorted(acc))

    def __bool__(self):
        return bool(self.words)

    def __eq__(self, other):
        return isinstance(other, ClassicalElement) and self.words == other.words

    def __hash__(self):
        return hash(self.words)

    def __add__(self, other):
        acc = set(self.words)
        acc.symmetric_difference_update(other.words)
        return ClassicalElement(acc)

    def __iter__(self) -> Iterator[Tuple[int, ...]]:
        return iter(self.words)

    def degree(self) -> TriDegree:
        degs = {
            TriDegree(sum(2 * r + 1 for r in w), len(w), sum(r + 1 for r in w))
            for w in self.words
        }
        if len(degs) != 1:
            raise ValueError("inhomogeneous or zero classical element")
        return degs.pop()

    def __str__(self):
        if not self.words:
            return "0"
        return " + ".join(" ".join(f"l{r}" for r in w) if w else "1" for w in self.words)


@lru_cache(maxsize=None)
def _classical_adem(a: int, c: int) -> Tuple[Tuple[int, int], ...]:
    b = c - 2 * a - 1
    acc: Dict[Tuple[int, int], bool] = {}
    for r in range((b + 1) // 2):
        if binom_mod2(b - r - 1, r):
            pair = (a + b - r, 2 * a + 1 + r)
            if pair in acc:
                del acc[pair]
            else:
                acc[pair] = True
    return tuple(sorted(acc))


def classical_normal_form(words: Iterable[Tuple[int, ...]]) -> ClassicalElement:
    out: Dict[Tuple[int, ...], bool] = {}
    stack = [tuple(w) for w in words]
    while stack:
        w = stack.pop()
        bad = next((i for i in range(len(w) - 1) if 2 * w[i] < w[i + 1]), None)
        if bad is None:
            if w in out:
                del out[w]
            else:
                out[w] = True
            continue
        for pair in _classical_adem(w[bad], w[bad + 1]):
            stack.append(w[:bad] + pair + w[bad + 2 :])
    return ClassicalElement(out)


def classical_multiply(x: ClassicalElement, y: ClassicalElement) -> ClassicalElement:
    return classical_normal_form([wx + wy for wx in x.words for wy in y.words])


@lru_cache(maxsize=None)
def _classical_delta_word(word: Tuple[int, ...]) -> ClassicalElement:
    pieces = []
    for i, n in enumerate(word):
        for r in range(1, n // 2 + 1):
            if binom_mod2(n - r, r):
                pieces.append(word[:i] + (n - r, r - 1) + word[i + 1 :])
    return classical_normal_form(pieces)


def classical_delta(x: ClassicalElement) -> ClassicalElement:
    acc = ClassicalElement()
    for w in x.words:
        acc = acc + _classical_delta_word(w)
    return acc


def theta_tilde(
    x: ClassicalElement,
    mod: CoefficientModule = FREE,
    fuel: int = DEFAULT_FUEL,
) -> Element:
    """Doubling inclusion lambda_n -> lambda_{2n+1}: a chain and ring map with
    tau/rho-free all-odd image."""
    words = [tuple(2 * r + 1 for r in w) for w in x.words]
    out = normal_form_words([w + (COEFF_ONE,) for w in words], mod, fuel)
    for t in out:
        assert all(r % 2 == 1 for r in t.word) and t.coeff == COEFF_ONE
    return out


def q_project(x: Element) -> ClassicalElement:
    """Splitting of the doubling map: kills tau, rho, field labels and
    even-index generators; lambda_{2n+1} -> lambda_n."""
    words = []
    for t in x.terms:
        if t.coeff != COEFF_ONE:
            continue
        if any(r % 2 == 0 for r in t.word):
            continue
        words.append(tuple((r - 1) // 2 for r in t.word))
    return classical_normal_form(words)
