"""Tests for the named example complexes."""

import pytest

from toricchow.errors import FixtureError
from toricchow.fixtures import FIXTURE_NAMES, fixture, split_name


class TestSplitName:
    """Tests for fixture name parsing."""

    @pytest.mark.parametrize(
        "text,expected",
        [
            ("p1:3", ("p1", "3")),
            ("p1(3)", ("p1", "3")),
            ("p2-model", ("p2-model", None)),
            ("canonical:projective:2", ("canonical", "projective:2")),
            (" blp2-model ", ("blp2-model", None)),
        ],
    )
    def test_split_name(self, text, expected):
        assert split_name(text) == expected


class TestFixtures:
    """Tests for building fixtures."""

    def test_known_names(self):
        assert "p1" in FIXTURE_NAMES
        assert "canonical" in FIXTURE_NAMES

    def test_call_syntax_matches_colon_syntax(self):
        assert fixture("p1(3)") == fixture("p1:3")
        assert fixture("p1", 3) == fixture("p1:3")

    def test_p1_vertices(self):
        c = fixture("p1:4")
        assert [cell.vertices[0] for cell in c.skeleton(0)] == [(0,), (1,), (2,), (3,)]

    def test_p1_half_vertices(self, p1_half):
        assert [cell.vertices[0][0] for cell in p1_half.skeleton(0)] == [0, 0.5, 1]

    def test_projective(self):
        c = fixture("projective:3")
        assert c.is_fan
        assert c.skeleton_sizes() == [1, 4, 6, 4]

    def test_canonical_model_is_the_recession_fan(self, p2_model, canonical_p2):
        assert canonical_p2 == p2_model.recession_fan
        assert canonical_p2.is_fan

    def test_canonical_of_projective_plane(self, projective2):
        assert fixture("canonical:projective:2") == projective2

    def test_audit_settings_are_kept(self):
        c = fixture("p1:2", seed=7, audit_factor=12)
        assert c.audit_seed == 7
        assert c.audit_factor == 12

    @pytest.mark.parametrize(
        "name,message",
        [
            ("nope", "unknown fixture"),
            ("p1", "needs an integer parameter"),
            ("p1:x", "needs an integer parameter"),
            ("p1:0", ">= 1"),
            ("projective:0", ">= 1"),
            ("canonical", "needs another fixture name"),
            ("canonical:nope", "unknown fixture"),
        ],
    )
    def test_invalid_names(self, name, message):
        with pytest.raises(FixtureError, match=message):
            fixture(name)
