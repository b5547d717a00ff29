import pytest

from motivic_lambda.coeff import CoeffMonomial, CoefficientModule, half_floor
from motivic_lambda.algebra import Element, LambdaMonomial, TriDegree, parse_element
from motivic_lambda.dga import delta
from motivic_lambda.homology import (
    ExtPresentation,
    FieldSpec,
    TagEngine,
    Window,
    assemble_field,
    curtis_tags,
    doubled_classical_basis,
    ext_mod_rho_m,
    ext_presentation,
    homology_slice,
    presentation_vs_homology,
)
from motivic_lambda.slices import SliceContext

FREE = CoefficientModule.free()
T1 = CoefficientModule.truncated(1)

WIN = Window(max_stem=16, max_filt=3, min_weight=-10, stem_guard=8, weight_guard=20)


@pytest.fixture(scope="module")
def engine():
    return TagEngine(WIN)


def mono(text):
    el = parse_element(text)
    assert len(el) == 1
    return el.leading()


def find_tag(tags, source_text):
    src = mono(source_text)
    for t in tags:
        if t.source == src:
            return t
    raise AssertionError(f"no tag with source {source_text}")


# --- filtration 0 -------------------------------------------------------------


def test_tags_f0_odd_powers(engine):
    tags = curtis_tags(0, WIN, engine)
    for m in range(0, 5):
        t = find_tag(tags, f"t^{2 * m + 1}")
        assert t.rho_power == 1
        assert t.target == mono(f"l0 t^{2 * m}" if m else "l0")


def test_tags_f0_power_law(engine):
    # tau^{2^a(2m+1)} -> l_{2^a - 1} tau^{2^{a-1}(4m+1)} rho^{2^a}
    tags = curtis_tags(0, WIN, engine)
    for a in range(0, 4):
        for m in range(0, 3):
            n = (1 << a) * (2 * m + 1)
            if n > 10:
                continue
            t = find_tag(tags, f"t^{n}")
            assert t.rho_power == 1 << a, (a, m)
            exp = half_floor(a, 4 * m + 1)
            want = LambdaMonomial(((1 << a) - 1,), CoeffMonomial(exp, 0))
            assert t.target == want, (a, m)


def test_tag_records_validate(engine):
    for f in range(0, 3):
        for t in curtis_tags(f, WIN, engine):
            t.check()


def test_tags_f1_examples(engine):
    tags = curtis_tags(1, WIN, engine)
    # l1 t^4 -> l3 l3 t rho^6
    t = find_tag(tags, "l1 t^4")
    assert t.rho_power == 6
    assert t.target == mono("l3 l3 t")
    # l1 t -> l1 l0 t^0? no: a=0=b-1 row needs m odd; l1 t is a cycle target.
    with pytest.raises(AssertionError):
        find_tag(tags, "l1 t")


def test_tags_f2_example(engine):
    tags = curtis_tags(2, WIN, engine)
    t = find_tag(tags, "l1 l1 t^4")
    assert t.rho_power == 7
    assert t.target == mono("l2 l3 l3")


def test_tag_injectivity(engine):
    for f in range(3):
        tags = curtis_tags(f, WIN, engine)
        targets = [t.target for t in tags]
        assert len(targets) == len(set(targets))


def test_free_pivots_are_doubled_classical(engine):
    ft = engine.filtration(1)
    for res in ft.slices.values():
        for m in res.free_pivots:
            assert all(r % 2 == 1 for r in m.word)
            assert m.coeff == CoeffMonomial()


def test_targets_are_hit(engine):
    # every cycle-led non-classical pivot in filtration f+1 is the target of
    # exactly one filtration-f tag (within the safely covered region)
    for f in (0, 1):
        targets = {t.target for t in engine.filtration(f).tags}
        ft = engine.filtration(f + 1)
        for deg, res in ft.slices.items():
            if not (0 <= deg.s <= WIN.max_stem and deg.w >= WIN.weight_floor):
                continue
            for m in res.target_pivots:
                assert m in targets, (deg, str(m))


# --- direct homology ----------------------------------------------------------


def test_homology_slice_examples():
    ctx1 = SliceContext(T1)
    dim, reps = homology_slice(ctx1, TriDegree(1, 1, 1))
    assert dim == 1 and reps[0] == parse_element("l1", T1)
    dim, _ = homology_slice(ctx1, TriDegree(14, 2, 8))
    assert dim == 1
    dim, _ = homology_slice(ctx1, TriDegree(5, 2, 3))
    assert dim == 0


def test_master_oracle_small_window(engine):
    # tagging-vs-direct dimension equality over the free module
    pres = ext_presentation(WIN, engine)
    ctx = SliceContext(FREE)
    degrees = [
        TriDegree(s, f, w)
        for f in range(0, 4)
        for s in range(0, 13)
        for w in range(-6, (s + f) // 2 + 1)
    ]
    assert presentation_vs_homology(pres, ctx, degrees) == []


def test_ext_r_one_line(engine):
    # filtration-1 window: free h_a towers plus tau^{...} h_a torsion towers
    pres = ext_presentation(WIN, engine)
    one = [s for s in pres.window_summands() if s.degree.f == 1]
    free = sorted(str(s.generator) for s in one if s.torsion is None)
    assert free == ["l1", "l15", "l3", "l7"]
    # tau h1 with torsion 2 and tau^2 h0 with torsion 1
    tau_h1 = [s for s in one if s.degree == (1, 1, 0)]
    assert len(tau_h1) == 1 and tau_h1[0].torsion == 2
    assert tau_h1[0].generator == parse_element("l1 t + l2 r")
    tau2_h0 = [s for s in one if s.degree == (0, 1, -2)]
    assert len(tau2_h0) == 1 and tau2_h0[0].torsion == 1
    # torsion exponents follow the 2^a law
    for s in one:
        if s.torsion is not None:
            a = (s.degree.s + 1).bit_length() - 1
            assert s.degree.s == (1 << a) - 1
            assert s.torsion == 1 << a


def test_ext_tau_h2sq_row(engine):
    # tau^{2^a(8n+1)} h_{a+2}^2 with torsion 2^{a+1} * 3
    pres = ext_presentation(WIN, engine)
    sq = [s for s in pres.window_summands() if s.degree == (6, 2, 3 - 1)]
    assert len(sq) == 1 and sq[0].torsion == 6  # tau h2^2 at a=0, n=0


def test_ext_mod_rho_1_low_stems(engine):
    # Ext over rho = 0 in stems <= 6: F2[tau] on {h0^n} u {h1, h1^2, h1^3,
    # h2, h0 h2, h2^2} plus single tau-torsion copies of h1^4..h1^6 (f >= 4
    # checked by direct homology elsewhere)
    pres = ext_mod_rho_m(1, WIN, engine)
    ctx1 = SliceContext(T1)
    for s in range(0, 7):
        for f in range(0, 4):
            for w in range(-4, s + 2):
                d = TriDegree(s, f, w)
                assert pres.dimension_at(d) == homology_slice(ctx1, d)[0], d


def test_ext_mod_rho_2_f01(engine):
    # mod rho^2: dimensions match direct homology over the truncation
    pres = ext_mod_rho_m(2, WIN, engine)
    ctx2 = SliceContext(CoefficientModule.truncated(2))
    for s in range(0, 9):
        for f in (0, 1):
            for w in range(-5, (s + f) // 2 + 1):
                d = TriDegree(s, f, w)
                assert pres.dimension_at(d) == homology_slice(ctx2, d)[0], d


def test_field_specs():
    assert FieldSpec.parse("R").module() == FREE
    assert FieldSpec.parse("Cbar").module() == T1
    assert FieldSpec.parse("Fq:5").module().parts == (("", 1), ("u", 1))
    assert FieldSpec.parse("Fq:3").module().parts == (("", 2),)
    assert FieldSpec.parse("Qp:2").module().parts == (("", 3), ("u", 1), ("pi", 1))
    assert FieldSpec.parse("Qp:3").module().parts == (("", 2), ("pi", 2))
    q = FieldSpec.parse("Q", primes=(2, 3, 5)).module().parts
    assert q == (("", None), ("[2]", 1), ("u3", 2), ("[5]", 1), ("a5", 1))


def test_assemble_fq1(engine):
    # over F_q with q = 1 mod 4 the one-line is F2[tau]{1, u} x {h_a}
    small = Window(max_stem=8, max_filt=2, min_weight=-6, stem_guard=8, weight_guard=12)
    eng = TagEngine(small)
    pres = assemble_field(FieldSpec.parse("Fq:5"), small, eng)
    ctx = SliceContext(FieldSpec.parse("Fq:5").module())
    for s in range(0, 8):
        for f in (0, 1):
            for w in range(-4, (s + f) // 2 + 1):
                d = TriDegree(s, f, w)
                assert pres.dimension_at(d) == homology_slice(ctx, d)[0], d


def test_doubled_classical_basis_counts():
    names1 = [n for n, _ in doubled_classical_basis(1, 40)]
    assert names1 == ["h1", "h2", "h3", "h4", "h5"]
    names2 = [n for n, _ in doubled_classical_basis(2, 20)]
    assert "h2 h1" not in names2 and "h3 h3" in names2 and "h1 h1" in names2
    names3 = [n for n, _ in doubled_classical_basis(3, 30)]
    assert "h3 h3 h1" not in names3  # a = b forces a != c+2
    assert "c1" in names3
