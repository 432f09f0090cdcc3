"""
Unit tests for settings, result records and error codes.

Core claims:
    - ComputationSettings pulls its defaults from config and validates them
    - An invalid default route falls back to 'auto' with a warning
    - Result records derive their summary properties correctly
    - Every error class maps to its command line exit code
"""

import logging

import pytest

from quiverstab.core.errors import (
    InfeasibleError,
    InputError,
    InvariantError,
    QuiverStabError,
    exit_code_for,
)
from quiverstab.core.state import (
    VALID_FORMS,
    ComputationSettings,
    IdentityCheck,
    NearMaxDecomposition,
    SupportComponents,
    SweepRow,
    check_choice,
    resolve_settings,
)


class TestComputationSettings:
    def test_defaults(self):
        settings = ComputationSettings()
        assert settings.threads == 1
        assert settings.kac_route == "auto"
        assert settings.auto_eval_cells == 200
        assert settings.partition_tuple_cap == 2 * 10**6
        assert not settings.show_progress

    def test_override_caps(self):
        settings = ComputationSettings()
        settings.override_caps(1000)
        values = settings.as_dict()
        assert values["enumeration_cap"] == values["census_cap"] == 1000
        assert values["orbit_cap"] == values["partition_tuple_cap"] == 1000
        assert values["end_dim_cap"] == 8
        assert "name" not in values

    def test_invalid_threads(self):
        with pytest.raises(ValueError):
            ComputationSettings(threads=0)

    def test_invalid_route(self):
        with pytest.raises(ValueError):
            ComputationSettings(kac_route="series")

    def test_route_fallback(self, monkeypatch, caplog):
        monkeypatch.setattr("quiverstab.config.computation.DEFAULT_KAC_ROUTE", "series")
        with caplog.at_level(logging.WARNING):
            settings = ComputationSettings()
        assert settings.kac_route == "auto"
        assert "Falling back to 'auto'" in caplog.text

    def test_default_out_of_bounds(self, monkeypatch):
        monkeypatch.setattr("quiverstab.config.computation.DEFAULT_THREADS", 0)
        with pytest.raises(ValueError, match="threads"):
            ComputationSettings()

    def test_resolve(self):
        settings = ComputationSettings(threads=2)
        assert resolve_settings(settings) is settings
        assert resolve_settings(None).threads == 1


class TestChoices:
    def test_valid(self):
        assert check_choice("cartan", VALID_FORMS, "form") == "cartan"

    def test_invalid(self):
        with pytest.raises(InputError, match="unknown form 'tits'"):
            check_choice("tits", VALID_FORMS, "form")


class TestRecords:
    def test_identity_check(self):
        check = IdentityCheck(b=1, k=2, a=3, lhs=5, rhs=5, limit=5)
        assert check.equal and check.limit_applies and check.limit_equal
        below = IdentityCheck(b=1, k=2, a=0, lhs=2, rhs=2, limit=5)
        assert below.limit_equal is None

    def test_support_components(self):
        components = SupportComponents(
            components=(frozenset({0}), frozenset({2}), frozenset({4})),
            distances={(0, 1): 2, (0, 2): None, (1, 2): 2},
        )
        assert components.min_distance() == 2
        assert SupportComponents((frozenset({0}),), {}).min_distance() is None

    def test_near_max_conclusion(self):
        holds = NearMaxDecomposition((1, 0), (0, 1), -1, (1, 0), 0)
        fails = NearMaxDecomposition((1, 0), (0, 1), -1, None, None)
        assert holds.conclusion_holds
        assert not fails.conclusion_holds

    def test_skipped_row(self):
        row = SweepRow(n=0, tau=(2, 2), indivisible=False, skipped=True)
        assert row.coefficients is None


class TestExitCodes:
    @pytest.mark.parametrize("error, code", [
        (InputError("x"), 1),
        (InfeasibleError("x"), 2),
        (InvariantError("x"), 3),
        (QuiverStabError("x"), 3),
    ])
    def test_codes(self, error, code):
        assert exit_code_for(error) == code

    def test_input_error_is_value_error(self):
        assert issubclass(InputError, ValueError)
