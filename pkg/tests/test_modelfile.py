import pytest

from coradical.modelfile import (
    ModelError,
    build_incidence,
    build_raw_coalgebra,
    bundled_models,
    parse_rational,
    parse_text,
)


def test_header_required():
    with pytest.raises(ModelError):
        parse_text("kind: hilb\n")
    with pytest.raises(ModelError):
        parse_text("coradical-model 2\nkind: hilb\n")
    with pytest.raises(ModelError):
        parse_text("")


def test_kind_required():
    with pytest.raises(ModelError):
        parse_text("coradical-model 1\nkind: torus\n")


def test_params_and_sections():
    d = parse_text("# comment\ncoradical-model 1\nkind: hilb\nn: 2 # trailing\n[points]\n1 2\n")
    assert d.kind == "hilb" and d.get_int("n") == 2
    assert d.section("points") == [["1", "2"]]
    with pytest.raises(ModelError):
        d.get_int("t")


def test_rationals():
    assert parse_rational("-3/4").numerator == -3
    for bad in ("0.5", "1e3", "1/0", "x"):
        with pytest.raises(ModelError):
            parse_rational(bad)


def test_raw_coalgebra_errors():
    base = "coradical-model 1\nkind: raw-coalgebra\n[basis]\no 0\n"
    with pytest.raises(ModelError):
        build_raw_coalgebra(parse_text(base + "[comult]\no|q o 1\n"))
    with pytest.raises(ModelError):
        build_raw_coalgebra(parse_text(base + "[comult]\no|o o 0.5\n"))
    c = build_raw_coalgebra(parse_text(base + "[comult]\n0 0 1\n[counit]\no 1\n[unit]\no 1\n"))
    assert c.dim == 1 and c.unit == (1,)


def test_incidence_errors():
    base = "coradical-model 1\nkind: incidence\n[variety X]\npoints a b\n"
    with pytest.raises(ModelError):
        build_incidence(parse_text(base))  # no covers
    with pytest.raises(ModelError):
        build_incidence(parse_text(base + "[cover c]\ngamma X\nx X\ny Z\n"))
    bad_mult = base + "[cover c]\ngamma X\nx X\ny X\nphi a a two\nphi b b\npsi a a\npsi b b\n"
    with pytest.raises(ModelError):
        build_incidence(parse_text(bad_mult))


def test_bundle_contents():
    names = bundled_models()
    for expected in ("hilb_3_2.model", "nonstrict.model", "incidence_pass.model", "incidence_fail.model", "malformed.model"):
        assert expected in names
