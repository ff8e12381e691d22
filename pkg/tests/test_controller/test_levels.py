"""
Tests for ApproxLevel.
"""

import pytest

from slam_booster.controller.levels import ACCURATE, ApproxLevel
from slam_booster.core.errors import RejectedInputError


class TestApproxLevel:
    """Test cases for saturating level arithmetic."""

    def test_decrement_saturates_at_zero(self):
        assert ApproxLevel(0) - 1 == ApproxLevel(0)

    def test_increment_saturates_at_max(self):
        assert ApproxLevel(3) + 1 == ApproxLevel(3)

    def test_plain_arithmetic(self):
        assert (ApproxLevel(1) + 1).level == 2
        assert int(ApproxLevel(2) - 1) == 1

    def test_ordering(self):
        assert ApproxLevel(1) < ApproxLevel(2)
        assert ACCURATE < ApproxLevel(3)
        assert ApproxLevel(3) == ApproxLevel.clamped(9)

    def test_clamped(self):
        assert ApproxLevel.clamped(7) == ApproxLevel(3)
        assert ApproxLevel.clamped(-2) == ACCURATE

    @pytest.mark.parametrize("value", [-1, 4])
    def test_out_of_range(self, value):
        with pytest.raises(RejectedInputError):
            ApproxLevel(value)
