"""Ext computation: direct homology per slice, the rho-Bockstein tagging
algorithm, mod-rho^m presentations, and additive per-field assembly.

Tagging works line by line: the slices (s+j, f, w+j) for j >= 0 form a
rho-line (multiplication by rho walks down it), and the differential columns
of deeper slices contain rho-shifted copies of the shallower ones.  Within one
source slice the whole slice is reduced in ascending monomial order with
reduction witnesses; for a rho-free basis monomial x that is a mod-rho
homology pivot but not the leading term of an honest cycle, the fully reduced
column gives exactly delta(x + u) = rho^r z with u < x, z a cycle whose
leading term is a mod-rho homology pivot in its own slice, and the assignment
x -> lead(z) injective.  Correction terms and targets that died on an earlier
Bockstein page never survive the reduction, because the witnesses needed to
remove them are rho-divisible and therefore processed before any rho-free
column.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .coeff import COEFF_ONE, CoeffMonomial, CoefficientModule, half_floor
from .algebra import DELTA_SHIFT, Element, LambdaMonomial, TriDegree
from .dga import delta, delta_monomial
from .gf2 import Echelon, lead
from .slices import SliceContext

FREE = CoefficientModule.free()
T1 = CoefficientModule.truncated(1)

TOWER_SHIFT = TriDegree(1, 0, 1)  # degree step dividing one rho


# ---------------------------------------------------------------------------
# Windows
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Window:
    """Degree window: stems 0..max_stem, filtration <= max_filt, weight >=
    min_weight.  Guards extend the tagging range so that every torsion tower
    and every tag source feeding a window slice is actually computed."""

    max_stem: int
    max_filt: int = 3
    min_weight: Optional[int] = None
    stem_guard: int = 4
    weight_guard: int = 34

    @property
    def weight_floor(self) -> int:
        return -self.max_stem if self.min_weight is None else self.min_weight

    @property
    def classical_stem_bound(self) -> int:
        # a free tower from a rho/tau-free class of degree (S, f, (S+f)/2)
        # reaches the window only along s - w = (S - f)/2
        return 2 * (self.max_stem - self.weight_floor) + self.max_filt + 2

    def contains(self, d: TriDegree) -> bool:
        return (
            0 <= d.s <= self.max_stem
            and 0 <= d.f <= self.max_filt
            and d.w >= self.weight_floor
        )

    def extended_contains(self, d: TriDegree) -> bool:
        return (
            -1 <= d.s <= self.max_stem + self.stem_guard
            and 0 <= d.f <= self.max_filt
            and d.w >= self.weight_floor - self.weight_guard
        )


# ---------------------------------------------------------------------------
# Mod-rho slice bookkeeping
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _k0_basis(s: int, f: int, w: int) -> Tuple[LambdaMonomial, ...]:
    """rho-free monomials of the slice, ascending in the global order."""
    from .slices import coadmissible_compositions

    if f < 0 or s < 0:
        return ()
    out = []
    for word in coadmissible_compositions(s, f):
        n = sum((r + 1) // 2 for r in word) - w
        if n >= 0:
            out.append(LambdaMonomial(word, CoeffMonomial(n, 0)))
    out.sort(key=LambdaMonomial.sort_key)
    return tuple(out)


@lru_cache(maxsize=None)
def _modrho_pivots(s: int, f: int, w: int) -> Tuple[Tuple[LambdaMonomial, ...], Tuple[LambdaMonomial, ...]]:
    """(homology pivot monomials, boundary pivot monomials) of the mod-rho
    slice at (s, f, w)."""
    basis = _k0_basis(s, f, w)
    if not basis:
        return ((), ())
    index = {m: i for i, m in enumerate(basis)}
    tgt = _k0_basis(s - 1, f + 1, w)
    tgt_index = {m: i for i, m in enumerate(tgt)}

    def to_bits(x: Element, idx) -> int:
        v = 0
        for t in x.terms:
            v |= 1 << idx[t]
        return v

    # kernel pivots of delta mod rho
    ech = Echelon(track_witness=True)
    kernel_pivots: Set[LambdaMonomial] = set()
    for j, m in enumerate(basis):
        col = to_bits(delta(Element.from_monomial(m), T1), tgt_index)
        residue, wts = ech.reduce(col, 1 << j)
        if residue == 0:
            kernel_pivots.add(basis[lead(wts)])
        else:
            ech.pivots[lead(residue)] = residue
            ech.witness[lead(residue)] = wts

    # boundary pivots from the slice one filtration below
    img = Echelon()
    for m in _k0_basis(s + 1, f - 1, w):
        img.add(to_bits(delta(Element.from_monomial(m), T1), index))
    boundary_pivots = {basis[i] for i in img.pivot_set()}

    assert boundary_pivots <= kernel_pivots
    return (tuple(sorted(kernel_pivots - boundary_pivots, key=LambdaMonomial.sort_key)),
            tuple(sorted(boundary_pivots, key=LambdaMonomial.sort_key)))


def is_doubled_classical(m: LambdaMonomial) -> bool:
    """Leading-term test for the image of the classical inclusion: rho- and
    tau-free with all indices odd."""
    return (
        m.coeff == COEFF_ONE
        and all(r % 2 == 1 for r in m.word)
    )


# ---------------------------------------------------------------------------
# Tags
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TagRecord:
    source: LambdaMonomial     # leading rho-free monomial x
    correction: Element        # u with u < x
    rho_power: int             # exact rho-divisibility r >= 1
    target: LambdaMonomial     # rho-free leading monomial of the cocycle
    cocycle: Element           # delta(x + u) / rho^r

    @property
    def source_degree(self) -> TriDegree:
        return self.source.degree()

    @property
    def target_degree(self) -> TriDegree:
        return self.cocycle.degree() or self.target.degree()

    def check(self) -> None:
        x = Element.from_monomial(self.source) + self.correction
        d = delta(x)
        assert d == self.cocycle.times_rho(self.rho_power), "tag identity failed"
        assert self.cocycle.rho_valuation() == 0, "cocycle divisible by rho"
        assert self.cocycle.leading() == self.target
        want = self.source.degree() + DELTA_SHIFT
        got = self.target.degree()
        assert (got.s - self.rho_power, got.f, got.w - self.rho_power) == tuple(want)

    def __str__(self) -> str:
        return f"{self.source} -> {self.target} (r={self.rho_power})"


@dataclass
class TagSliceResult:
    degree: TriDegree
    tags: List[TagRecord]
    free_pivots: List[LambdaMonomial]      # classical-image generators (rho-free)
    target_pivots: List[LambdaMonomial]    # cycle-led generators awaiting a tag
    unresolved: List[LambdaMonomial]


class FiltrationTags:
    """All tags with sources in one filtration over the extended window."""

    def __init__(self, f: int):
        self.f = f
        self.slices: Dict[TriDegree, TagSliceResult] = {}

    @property
    def tags(self) -> List[TagRecord]:
        out = []
        for d in sorted(self.slices):
            out.extend(self.slices[d].tags)
        return out

    def tags_in(self, window: Window) -> List[TagRecord]:
        return [t for t in self.tags if window.contains(t.source_degree)]


class _LineIndex:
    """Global bit addressing of the rho-free monomials appearing along one
    rho-line.  The monomial rho^j * m has the same bit at every depth, so the
    reduction pool inherits between slices without any rewriting, and bit
    order agrees with the global monomial order within every slice (deeper
    birth = less rho-divisible = larger).

    Terms whose underlying rho-free monomial lives above the first indexed
    level go to a separate "sink" component: their internal order is
    irrelevant (they are smaller than every indexed monomial and a column
    whose lead falls there is reported unresolved, never finalized), but
    their XOR bookkeeping stays exact."""

    __slots__ = ("bits", "info", "next_bit", "sink_bits", "sink_info")

    def __init__(self):
        self.bits: List[Dict[LambdaMonomial, int]] = []  # per birth level
        self.info: List[Tuple[int, LambdaMonomial]] = []  # bit -> (birth, monomial)
        self.next_bit = 0
        self.sink_bits: Dict[tuple, int] = {}
        self.sink_info: List[tuple] = []

    def open_level(self, basis: Sequence[LambdaMonomial]) -> Dict[LambdaMonomial, int]:
        level = len(self.bits)
        table = {}
        for m in basis:
            table[m] = self.next_bit
            self.info.append((level, m))
            self.next_bit += 1
        self.bits.append(table)
        return table

    def encode(self, x: Element, level: int) -> Tuple[int, int]:
        hi = lo = 0
        for t in x.terms:
            birth = level - t.coeff.k
            if birth >= 0:
                m0 = t if t.coeff.k == 0 else LambdaMonomial(t.word, CoeffMonomial(t.coeff.n, 0))
                hi |= 1 << self.bits[birth][m0]
            else:
                key = (t.word, t.coeff.n, birth)
                bit = self.sink_bits.get(key)
                if bit is None:
                    bit = len(self.sink_info)
                    self.sink_bits[key] = bit
                    self.sink_info.append(key)
                lo |= 1 << bit
        return hi, lo

    def decode(self, hi: int, lo: int, level: int) -> Element:
        out = []
        while hi:
            low = hi & -hi
            bit = low.bit_length() - 1
            hi ^= low
            birth, m0 = self.info[bit]
            j = level - birth
            out.append(m0 if j == 0 else LambdaMonomial(m0.word, CoeffMonomial(m0.coeff.n, j)))
        while lo:
            low = lo & -lo
            bit = low.bit_length() - 1
            lo ^= low
            word, n, birth = self.sink_info[bit]
            out.append(LambdaMonomial(word, CoeffMonomial(n, level - birth)))
        return Element(out)


def _line_pass(
    f: int,
    d: int,
    s_stop: int,
    fuel_budget: int,
    finalize_smax: Optional[int] = None,
    rho_budget: int = 48,
) -> Dict[TriDegree, TagSliceResult]:
    """Run the shared reduction down the rho-line s - w = d at filtration f.

    Slices are processed from the top downward; reduced columns live in
    line-global bit coordinates, where multiplication by rho is the identity,
    so pools are shared across slices for free.  The descent starts rho_budget
    levels above the finalization region: a finalized tag's lead then sits in
    the exactly-indexed region and agrees with the full computation, while a
    column whose lead escapes upward is reported unresolved.
    """
    results: Dict[TriDegree, TagSliceResult] = {}
    s_top = f + 2 * d
    if finalize_smax is None:
        finalize_smax = s_top
    s_start = min(s_top, max(finalize_smax, s_stop) + rho_budget)
    if s_start < s_stop:
        return results
    src_index = _LineIndex()
    tgt_index = _LineIndex()
    pool: Dict[int, Tuple[int, int, int, int]] = {}  # lead bit -> (y_hi, y_lo, v_hi, v_lo)
    for level, s in enumerate(range(s_start, s_stop - 1, -1)):
        w = s - d
        here = TriDegree(s, f, w)
        basis = _k0_basis(s, f, w)
        src_bits = src_index.open_level(basis)
        tgt_index.open_level(_k0_basis(s - 1, f + 1, w))
        outcomes: Dict[LambdaMonomial, Tuple[int, int, int, int]] = {}
        cycle_led: Set[LambdaMonomial] = set()
        unresolved: List[LambdaMonomial] = []
        for x in basis:
            y_hi, y_lo = tgt_index.encode(delta_monomial(x.word, x.coeff.n), level)
            v_hi, v_lo = 1 << src_bits[x], 0
            steps = fuel_budget
            while y_hi:
                hit = pool.get(y_hi.bit_length() - 1)
                if hit is None:
                    break
                y_hi ^= hit[0]
                y_lo ^= hit[1]
                v_hi ^= hit[2]
                v_lo ^= hit[3]
                steps -= 1
                if steps < 0:
                    raise RuntimeError("tag reduction exceeded its budget")
            if y_hi:
                pool[y_hi.bit_length() - 1] = (y_hi, y_lo, v_hi, v_lo)
                outcomes[x] = (y_hi, y_lo, v_hi, v_lo)
            elif y_lo:
                unresolved.append(x)
            else:
                cycle_led.add(x)

        if s > finalize_smax:
            continue
        hom_pivots, _ = _modrho_pivots(s, f, w)
        res = TagSliceResult(here, [], [], [], [])
        for x in hom_pivots:
            if x in cycle_led:
                if is_doubled_classical(x):
                    res.free_pivots.append(x)
                else:
                    res.target_pivots.append(x)
                continue
            if x in unresolved:
                res.unresolved.append(x)
                continue
            y_hi, y_lo, v_hi, v_lo = outcomes[x]
            birth, _ = tgt_index.info[y_hi.bit_length() - 1]
            r = level - birth
            assert r >= 1, f"rho-free differential out of {x}: not a Bockstein tag"
            ye = tgt_index.decode(y_hi, y_lo, level)
            assert ye.rho_valuation() == r
            cocycle = ye.div_rho(r)
            rec = TagRecord(
                source=x,
                correction=src_index.decode(v_hi, v_lo, level) + Element.from_monomial(x),
                rho_power=r,
                target=cocycle.leading(),
                cocycle=cocycle,
            )
            res.tags.append(rec)
        if res.tags or res.free_pivots or res.target_pivots or res.unresolved:
            results[here] = res
    return results


class TagEngine:
    """Computes and caches filtration tag tables over the free module."""

    def __init__(self, window: Window, fuel_budget: int = 10_000_000, rho_budget: int = 48):
        self.window = window
        self.fuel_budget = fuel_budget
        self.rho_budget = rho_budget
        self._filtrations: Dict[int, FiltrationTags] = {}

    def filtration(self, f: int) -> FiltrationTags:
        ft = self._filtrations.get(f)
        if ft is None:
            ft = self._compute(f)
            self._filtrations[f] = ft
        return ft

    def _compute(self, f: int) -> FiltrationTags:
        win = self.window
        ft = FiltrationTags(f)
        s_max = win.max_stem + win.stem_guard
        w_min = win.weight_floor - win.weight_guard
        d_lo, d_hi = -f - 1, s_max - w_min
        for d in range(d_lo, d_hi + 1):
            s_stop = max(0, d + w_min)
            passed = _line_pass(
                f, d, s_stop, self.fuel_budget,
                finalize_smax=s_max, rho_budget=self.rho_budget,
            )
            for deg, res in passed.items():
                ft.slices[deg] = res
        self._check_injective(ft)
        return ft

    @staticmethod
    def _check_injective(ft: FiltrationTags) -> None:
        seen: Dict[LambdaMonomial, LambdaMonomial] = {}
        for t in ft.tags:
            prev = seen.get(t.target)
            assert prev is None, f"tag target {t.target} hit twice ({prev}, {t.source})"
            seen[t.target] = t.source

    def tags(self, f: int) -> List[TagRecord]:
        return self.filtration(f).tags_in(self.window)

    def all_tags(self, max_source_filt: int) -> List[TagRecord]:
        out: List[TagRecord] = []
        for f in range(0, max_source_filt + 1):
            out.extend(self.filtration(f).tags)
        return out


def curtis_tags(f: int, window: Window, engine: Optional[TagEngine] = None) -> List[TagRecord]:
    """Tags (rho-Bockstein differentials) with sources in filtration f inside
    the window.  Sources are the mod-rho homology pivots that do not lead an
    honest cycle; everything else is rho-free (classical image) or the target
    of a tag from one filtration below."""
    engine = engine or TagEngine(window)
    return engine.tags(f)


# ---------------------------------------------------------------------------
# Classical (doubled) basis data in filtrations <= 3
# ---------------------------------------------------------------------------


def _hopf_word(*indices: int) -> Tuple[int, ...]:
    return tuple((1 << a) - 1 for a in indices)


def doubled_classical_basis(f: int, max_stem: int) -> List[Tuple[str, LambdaMonomial]]:
    """The rho-torsion-free generators in filtration f <= 3 as (name, leading
    monomial): images of the classical basis under index doubling.  Products
    of Hopf classes h_a (a >= 1) subject to h_{a+1} h_a = 0, h_{a+2}^2 h_a = 0
    and the Adem-type exclusions, plus the classes c_a (a >= 1)."""
    out: List[Tuple[str, LambdaMonomial]] = []

    def stem_of(word) -> int:
        return sum(word)

    if f == 0:
        out.append(("1", LambdaMonomial(())))
        return out
    amax = max_stem.bit_length() + 1
    if f == 1:
        for a in range(1, amax + 1):
            word = _hopf_word(a)
            if stem_of(word) <= max_stem:
                out.append((f"h{a}", LambdaMonomial(word)))
    elif f == 2:
        for a in range(1, amax + 1):
            for b in range(1, a + 1):
                if a == b + 1:
                    continue
                word = _hopf_word(a, b)
                if stem_of(word) <= max_stem:
                    out.append((f"h{a} h{b}", LambdaMonomial(word)))
    elif f == 3:
        for a in range(1, amax + 1):
            for b in range(1, a + 1):
                if a == b + 1:
                    continue
                for c in range(1, b + 1):
                    if b == c + 1:
                        continue
                    if (b == c or a == b) and a == c + 2:
                        continue
                    word = _hopf_word(a, b, c)
                    if stem_of(word) <= max_stem:
                        out.append((f"h{a} h{b} h{c}", LambdaMonomial(word)))
        for a in range(1, amax + 1):
            word = (3 * (1 << a) - 1, (1 << (a + 2)) - 1, (1 << (a + 2)) - 1)
            if stem_of(word) <= max_stem:
                out.append((f"c{a}", LambdaMonomial(word)))
    return out


@lru_cache(maxsize=None)
def _doubled_basis_by_degree(f: int, max_stem: int) -> Dict[TriDegree, List[Tuple[str, LambdaMonomial]]]:
    by_degree: Dict[TriDegree, List[Tuple[str, LambdaMonomial]]] = {}
    for name, m in doubled_classical_basis(f, max_stem):
        by_degree.setdefault(m.degree(), []).append((name, m))
    return by_degree


# ---------------------------------------------------------------------------
# Presentations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExtSummand:
    generator: Element
    degree: TriDegree
    torsion: Optional[int]        # None = free over F2[rho]
    provenance: str               # "classical" | "tag" | "tag-source"
    name: Optional[str] = None
    label: str = ""               # field-generator label of the summand

    def sort_key(self):
        return (self.degree, self.torsion is None, self.torsion or 0, str(self.generator), self.label)

    def describe(self) -> str:
        t = "free" if self.torsion is None else str(self.torsion)
        nm = f" {self.name}" if self.name else ""
        lb = f" [{self.label}]" if self.label else ""
        return f"({self.degree}){nm}{lb} torsion={t} gen={self.generator}"


@dataclass
class ExtPresentation:
    """Summands cover the engine's extended range, so that per-slice dimension
    counts inside the user window see every tower passing through them; the
    user-facing table is the `window_summands()` restriction."""

    window: Window
    module: CoefficientModule
    summands: List[ExtSummand]

    def sorted_summands(self) -> List[ExtSummand]:
        return sorted(self.summands, key=ExtSummand.sort_key)

    def window_summands(self) -> List[ExtSummand]:
        return [s for s in self.sorted_summands() if self.window.contains(s.degree)]

    def dimension_at(self, d: TriDegree) -> int:
        """F2-dimension of the presented module in one tridegree."""
        count = 0
        for s in self.summands:
            g = s.degree
            j = g.s - d.s
            if j < 0 or g.f != d.f or g.w - d.w != j:
                continue
            if s.torsion is None or j < s.torsion:
                count += 1
        return count


def ext_presentation(window: Window, engine: Optional[TagEngine] = None) -> ExtPresentation:
    """Ext over the full coefficient ring F2[tau, rho] (the real-base case):
    a free part indexed by the doubled classical basis plus one rho-torsion
    summand per tag."""
    engine = engine or TagEngine(window)
    summands: List[ExtSummand] = []
    stem_hi = window.classical_stem_bound
    for f in range(0, window.max_filt + 1):
        for name, m in doubled_classical_basis(f, stem_hi):
            summands.append(
                ExtSummand(Element.from_monomial(m), m.degree(), None, "classical", name)
            )
    for f in range(0, window.max_filt):
        for t in engine.filtration(f).tags:
            summands.append(ExtSummand(t.cocycle, t.target_degree, t.rho_power, "tag"))
    return ExtPresentation(window, FREE, summands)


def ext_mod_rho_m(
    m: int,
    window: Window,
    engine: Optional[TagEngine] = None,
    max_filt: Optional[int] = None,
) -> ExtPresentation:
    """Homology of the lambda algebra modulo rho^m, read off the tags: the
    classical-image part mod rho^m, the tag cocycles with torsion min(m, r),
    and the truncated sources rho^{max(0, m-r)} (x + u) with the same torsion."""
    if m < 1:
        raise ValueError("truncation exponent must be >= 1")
    engine = engine or TagEngine(window)
    max_filt = window.max_filt if max_filt is None else max_filt
    summands: List[ExtSummand] = []
    stem_hi = window.classical_stem_bound
    for f in range(0, max_filt + 1):
        for name, mono in doubled_classical_basis(f, stem_hi):
            summands.append(
                ExtSummand(Element.from_monomial(mono), mono.degree(), m, "classical", name)
            )
    for f in range(0, max_filt + 1):
        for t in engine.filtration(f).tags:
            # target-side generator (only if the target filtration is in range)
            if t.target_degree.f <= max_filt:
                gen = t.cocycle.reduce(CoefficientModule.truncated(m))
                summands.append(ExtSummand(gen, t.target_degree, min(m, t.rho_power), "tag"))
            # source-side generator
            shift = max(0, m - t.rho_power)
            src = (Element.from_monomial(t.source) + t.correction).times_rho(shift)
            src = src.reduce(CoefficientModule.truncated(m))
            deg = t.source_degree + TriDegree(-shift, 0, -shift)
            assert src, "truncated source generator vanished"
            summands.append(ExtSummand(src, deg, min(m, t.rho_power), "tag-source"))
    return ExtPresentation(window, CoefficientModule.truncated(m), summands)


# ---------------------------------------------------------------------------
# Direct homology (the independent oracle route)
# ---------------------------------------------------------------------------


def homology_slice(
    ctx: SliceContext, d: TriDegree
) -> Tuple[int, List[Element]]:
    """Dimension and echelon representatives (reduced modulo boundaries) of
    the homology of one slice, by direct elimination."""
    d = TriDegree(*d)
    kernel = ctx.kernel_vectors(d)  # coordinate bitsets over the slice basis
    image = ctx.image_into(d)
    reps: List[Element] = []
    ech = Echelon()
    for p in sorted(image.pivots):
        ech.add(image.pivots[p])
    for v in kernel:
        residue, _ = ech.reduce(v)
        if residue:
            ech.pivots[lead(residue)] = residue
            reps.append(ctx.from_bits(d, residue))
    return len(reps), reps


def presentation_vs_homology(
    pres: ExtPresentation,
    ctx: SliceContext,
    degrees: Iterable[TriDegree],
) -> List[Tuple[TriDegree, int, int]]:
    """The master oracle: compare presented dimensions against direct
    homology on the given slices; returns mismatches (degree, direct, tagged)."""
    bad = []
    for d in degrees:
        d = TriDegree(*d)
        direct, _ = homology_slice(ctx, d)
        tagged = pres.dimension_at(d)
        if direct != tagged:
            bad.append((d, direct, tagged))
    return bad


# ---------------------------------------------------------------------------
# Field assembly
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldSpec:
    """A supported base field: R, Cbar (algebraically closed), Fq:q, Qp:p, Q."""

    kind: str
    q: int = 0
    primes: Tuple[int, ...] = ()

    @staticmethod
    def parse(text: str, primes: Sequence[int] = (2, 3, 5)) -> "FieldSpec":
        text = text.strip()
        if text in ("R", "r"):
            return FieldSpec("R")
        if text in ("Cbar", "C", "closed"):
            return FieldSpec("Cbar")
        if text.startswith("Fq:"):
            return FieldSpec("Fq", q=int(text[3:]))
        if text.startswith("Qp:"):
            return FieldSpec("Qp", q=int(text[3:]))
        if text in ("Q", "q"):
            return FieldSpec("Q", primes=tuple(primes))
        raise ValueError(f"unsupported field {text!r}")

    def module(self) -> CoefficientModule:
        if self.kind == "R":
            return CoefficientModule.free()
        if self.kind == "Cbar":
            return CoefficientModule.truncated(1)
        if self.kind == "Fq":
            if self.q % 4 == 1:
                return CoefficientModule.field_sum([("", 1), ("u", 1)])
            if self.q % 4 == 3:
                return CoefficientModule.truncated(2)
            raise ValueError(f"field order {self.q} is even")
        if self.kind == "Qp":
            if self.q == 2:
                return CoefficientModule.field_sum([("", 3), ("u", 1), ("pi", 1)])
            if self.q % 4 == 1:
                return CoefficientModule.field_sum(
                    [("", 1), ("pi", 1), ("u", 1), ("upi", 1)]
                )
            return CoefficientModule.field_sum([("", 2), ("pi", 2)])
        if self.kind == "Q":
            parts: List[Tuple[str, Optional[int]]] = [("", None), ("[2]", 1)]
            for p in self.primes:
                if p == 2:
                    continue
                if p % 4 == 1:
                    parts.append((f"[{p}]", 1))
                    parts.append((f"a{p}", 1))
                else:
                    parts.append((f"u{p}", 2))
            return CoefficientModule.field_sum(parts)
        raise ValueError(f"unsupported field kind {self.kind}")

    def __str__(self) -> str:
        if self.kind == "Fq":
            return f"Fq:{self.q}"
        if self.kind == "Qp":
            return f"Qp:{self.q}"
        return self.kind


def assemble_field(
    spec: FieldSpec,
    window: Window,
    engine: Optional[TagEngine] = None,
    max_filt: Optional[int] = None,
) -> ExtPresentation:
    """Ext over the given base field as a labeled direct sum of truncated (or
    free) presentations, one summand per generator of its Milnor K-theory."""
    engine = engine or TagEngine(window)
    mod = spec.module()
    max_filt = window.max_filt if max_filt is None else max_filt
    summands: List[ExtSummand] = []
    for label, r in mod.parts:
        if r is None:
            part = ext_presentation(window, engine)
        else:
            part = ext_mod_rho_m(r, window, engine, max_filt)
        for s in part.summands:
            if label:
                s = replace(
                    s,
                    degree=TriDegree(*(s.degree + (-1, 0, -1))),
                    generator=s.generator.times_coeff(CoeffMonomial(gen=label)),
                    label=label,
                )
            summands.append(s)
    return ExtPresentation(window, mod, summands)
