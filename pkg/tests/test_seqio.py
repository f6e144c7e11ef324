import json
from fractions import Fraction

import pytest

from momentkit import (
    SchemaError,
    density_from_dict,
    dump_sequence,
    load_sequence,
    moments_from_density,
    parse_density_arg,
    sequence_from_dict,
    sequence_to_dict,
)
from helpers import uniform_seq


class TestRoundTrip:
    def test_exact_survives_dump_and_load(self, tmp_path):
        s = uniform_seq(12)
        path = tmp_path / "seq.json"
        dump_sequence(s, str(path))
        back = load_sequence(str(path))
        assert back.exact and back.values == s.values

    def test_float_roundtrip(self, tmp_path):
        s = uniform_seq(6).as_floating()
        path = tmp_path / "seq.json"
        dump_sequence(s, str(path))
        back = load_sequence(str(path))
        assert not back.exact and back.values == s.values

    def test_complex_entries_carry_imag(self):
        doc = {"dimension": 1, "max_degree": 1,
               "entries": [{"alpha": [0], "re": 1.0}, {"alpha": [1], "re": 0.5, "im": -2.0}]}
        s = sequence_from_dict(doc)
        assert s[(1,)] == 0.5 - 2.0j
        again = sequence_to_dict(s)
        assert {"alpha": [1], "re": 0.5, "im": -2.0} in again["entries"]

    def test_rationals_are_authoritative_when_exact(self):
        doc = {"dimension": 1, "max_degree": 1, "exact": True,
               "entries": [{"alpha": [0], "re": 0.333}],
               "rationals": [{"alpha": [0], "num": 1, "den": 3}]}
        s = sequence_from_dict(doc)
        assert s[(0,)] == Fraction(1, 3)

    def test_entries_always_present_in_exact_dump(self):
        doc = sequence_to_dict(uniform_seq(3))
        assert doc["exact"] and len(doc["entries"]) == 4
        assert {"alpha": [1], "num": 1, "den": 2} in doc["rationals"]


class TestValidation:
    def test_missing_field(self):
        with pytest.raises(SchemaError, match="max_degree"):
            sequence_from_dict({"dimension": 1, "entries": []})

    def test_alpha_must_be_list(self):
        doc = {"dimension": 1, "max_degree": 2, "entries": [{"alpha": 1, "re": 0.5}]}
        with pytest.raises(SchemaError):
            sequence_from_dict(doc)

    def test_entry_beyond_degree(self):
        doc = {"dimension": 1, "max_degree": 1, "entries": [{"alpha": [4], "re": 0.5}]}
        with pytest.raises(SchemaError, match="max_degree"):
            sequence_from_dict(doc)

    def test_exact_requires_rationals(self):
        doc = {"dimension": 1, "max_degree": 0, "exact": True,
               "entries": [{"alpha": [0], "re": 1.0}]}
        with pytest.raises(SchemaError, match="rationals"):
            sequence_from_dict(doc)

    def test_zero_denominator(self):
        doc = {"dimension": 1, "max_degree": 0, "exact": True, "entries": [],
               "rationals": [{"alpha": [0], "num": 1, "den": 0}]}
        with pytest.raises(SchemaError):
            sequence_from_dict(doc)

    def test_unreadable_file(self, tmp_path):
        with pytest.raises(SchemaError, match="cannot read"):
            load_sequence(str(tmp_path / "missing.json"))

    def test_invalid_json_file(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("{nope")
        with pytest.raises(SchemaError, match="not valid JSON"):
            load_sequence(str(p))


class TestDensityParsing:
    def test_indicator_shorthand(self):
        spec = parse_density_arg("indicator:0,1")
        assert spec.kind == "indicator" and spec.support == ((Fraction(0), Fraction(1)),)

    def test_gaussian_shorthand(self):
        spec = parse_density_arg("gaussian:0,2")
        assert spec.kind == "gaussian" and spec.variance == (Fraction(2),)

    def test_named_shorthand(self):
        assert parse_density_arg("hat").kind == "piecewise-polynomial"

    def test_inline_json(self):
        spec = parse_density_arg(json.dumps(
            {"kind": "piecewise", "pieces": [{"lo": 0, "hi": "1/2", "coeffs": [0, 1]}]}))
        assert spec.pieces == ((Fraction(0), Fraction(1, 2), (Fraction(0), Fraction(1))),)

    def test_unknown_spec_is_schema_error(self):
        with pytest.raises(SchemaError):
            parse_density_arg("nonsense:1,2,3")

    def test_dict_mixture(self):
        spec = density_from_dict({
            "kind": "mixture", "weights": [1, -1],
            "components": [{"kind": "indicator", "lo": 0, "hi": 1},
                           {"kind": "indicator", "lo": 0, "hi": "1/2"}]})
        s = moments_from_density(spec, 3)
        assert s[(0,)] == Fraction(1, 2)

    def test_dict_requires_kind(self):
        with pytest.raises(SchemaError, match="kind"):
            density_from_dict({"lo": 0, "hi": 1})
