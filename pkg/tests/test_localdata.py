import json
from importlib import resources

import pytest

from shavis import arith, fields
from shavis.curves import WeierstrassModel, minimal_model, quadratic_twist
from shavis.localdata import (
    LocalFieldExtension,
    LocalReductionData,
    UnsupportedBaseChangeError,
    component_count,
    conductor,
    is_p_unit_tamagawa,
    tamagawa_over_extension,
    tate_algorithm,
)


def test_tate_spec_examples(e1_52, e2_364):
    # E2 at 7: multiplicative with Tamagawa number 5
    l7 = tate_algorithm(e2_364, 7)
    assert l7.kodaira == "I5" and l7.c == 5 and l7.reduction_class == "split-mult"
    # E1 at 5: good
    l5 = tate_algorithm(e1_52, 5)
    assert l5.kodaira == "I0" and l5.f == 0 and l5.c == 1
    # conductor-17 curve: multiplicative at 17
    b = WeierstrassModel.from_list([1, -1, 1, -91, -310])
    assert tate_algorithm(b, 17).f == 1
    assert conductor(b)[0] == 17
    with pytest.raises(arith.ArithmeticError_):
        tate_algorithm(e1_52, 6)


def test_conductor_spec_examples(e1_52, e2_364):
    assert conductor(e1_52)[0] == 52
    assert conductor(e2_364)[0] == 364
    tw = minimal_model(quadratic_twist(e1_52, 59))[0]
    n, _ = conductor(tw)
    assert n == 724048
    # the printed factorization 2^2 x 13 x 59^2 in the source text equals
    # 181012, which is the conductor of the twist by -59, not by +59
    assert arith.factor(n) == {2: 4, 13: 1, 59: 2}
    tw_minus = minimal_model(quadratic_twist(e1_52, -59))[0]
    assert conductor(tw_minus)[0] == 181012 == 2**2 * 13 * 59**2


def test_conductor_handles_nonminimal_input(e1_52):
    from shavis.curves import Isomorphism, transform
    from fractions import Fraction

    blown = transform(e1_52, Isomorphism(Fraction(1, 6)))
    assert conductor(blown)[0] == 52


def test_golden_corpus_matches_fixture():
    blob = json.loads(
        resources.files("shavis").joinpath("data/golden_local_data.json").read_text()
    )
    assert len(blob["curves"]) >= 20
    for row in blob["curves"]:
        m = WeierstrassModel.from_list(row["ainvs"])
        n, locs = conductor(m)
        assert n == row["conductor"], row["label"]
        got = [l.to_json() for l in locs]
        assert got == row["locals"], row["label"]


def test_ogg_formula_on_corpus():
    blob = json.loads(
        resources.files("shavis").joinpath("data/golden_local_data.json").read_text()
    )
    for row in blob["curves"]:
        for l in row["locals"]:
            data = LocalReductionData.from_json(l)
            assert data.f == data.v_delta + 1 - component_count(data.kodaira), row["label"]


def test_structural_invariants_rejected():
    # split multiplicative must have c = v(disc)
    with pytest.raises(AssertionError):
        LocalReductionData(7, "I5", 1, 3, 5, "split-mult")
    with pytest.raises(AssertionError):
        LocalReductionData(2, "II", 2, 5, 4, "additive")


def test_tamagawa_base_change_rules():
    good = LocalReductionData(5, "I0", 0, 1, 0, "good")
    assert tamagawa_over_extension(good, LocalFieldExtension(5, 3, 2)) == 1
    split5 = LocalReductionData(7, "I5", 1, 5, 5, "split-mult")
    assert tamagawa_over_extension(split5, LocalFieldExtension(7, 1, 2)) == 5
    assert tamagawa_over_extension(split5, LocalFieldExtension(7, 3, 1)) == 15
    non3 = LocalReductionData(11, "I3", 1, 1, 3, "nonsplit-mult")
    # unramified quadratic residue extension splits the torus
    assert tamagawa_over_extension(non3, LocalFieldExtension(11, 1, 2)) == 3
    assert tamagawa_over_extension(non3, LocalFieldExtension(11, 1, 3)) == 1
    non2 = LocalReductionData(11, "I2", 1, 2, 2, "nonsplit-mult")
    assert tamagawa_over_extension(non2, LocalFieldExtension(11, 1, 3)) == 2
    # additive, unramified
    iv = LocalReductionData(3, "IV", 2, 1, 4, "additive")
    assert tamagawa_over_extension(iv, LocalFieldExtension(3, 1, 2)) == 3
    assert tamagawa_over_extension(iv, LocalFieldExtension(3, 1, 3)) == 1
    i0star_c1 = LocalReductionData(5, "I0*", 2, 1, 6, "additive")
    assert tamagawa_over_extension(i0star_c1, LocalFieldExtension(5, 1, 3)) == 4
    assert tamagawa_over_extension(i0star_c1, LocalFieldExtension(5, 1, 2)) == 1
    i0star_c2 = LocalReductionData(5, "I0*", 2, 2, 6, "additive")
    assert tamagawa_over_extension(i0star_c2, LocalFieldExtension(5, 1, 2)) == 4
    instar = LocalReductionData(2, "I4*", 4, 2, 12, "additive")
    assert tamagawa_over_extension(instar, LocalFieldExtension(2, 1, 2)) == 4
    # ramified additive base change is refused
    with pytest.raises(UnsupportedBaseChangeError):
        tamagawa_over_extension(iv, LocalFieldExtension(3, 2, 1))
    with pytest.raises(arith.ArithmeticError_):
        tamagawa_over_extension(good, LocalFieldExtension(7, 1, 1))


def test_trivial_extension_matches_tate(e2_364):
    for q in (2, 7, 13):
        local = tate_algorithm(e2_364, q)
        assert tamagawa_over_extension(local, LocalFieldExtension(q, 1, 1)) == local.c


def test_is_p_unit_tamagawa_spec_examples(e1_52, e2_364):
    v1 = is_p_unit_tamagawa(e1_52, 5, fields.RATIONALS)
    assert v1.all_coprime
    v2 = is_p_unit_tamagawa(e2_364, 5, fields.RATIONALS)
    assert not v2.all_coprime and v2.offending == [7]
    # 176 curve over Q(mu_3) at p = 3: all units
    e176 = WeierstrassModel.from_list([0, 1, 0, -5, -13])
    v3 = is_p_unit_tamagawa(e176, 3, fields.cyclotomic_field(3))
    assert v3.all_coprime, v3.to_json()
    # and at the twisted pair of the quadratic example
    for m in (quadratic_twist(e1_52, 59), quadratic_twist(e2_364, 59)):
        assert is_p_unit_tamagawa(m, 5, fields.RATIONALS).all_coprime
