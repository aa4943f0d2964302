#!/usr/bin/env python

"""
Tests for `MDCON.helpers.misc` module
"""

import pytest

from MDCON import helpers


def test_format_real():
    """
    Formatted reals round-trip exactly.
    """
    assert helpers.format_real(0.1) == '0.10000000000000001'
    assert helpers.format_real(2) == '2'
    for value in (1/3, 1e-300, -2.5e17, 0.1 + 0.2):
        assert float(helpers.format_real(value)) == value


def test_parse_real_list():
    """
    Test `parse_real_list()`
    """
    assert helpers.parse_real_list('0.2,0.1,0.05') == [0.2, 0.1, 0.05]
    assert helpers.parse_real_list(' 1e-3 , 2,') == [1e-3, 2.]
    assert helpers.parse_real_list(',') == []
    with pytest.raises(ValueError):
        helpers.parse_real_list('0.1,abc')


def test_wrap_iterator():
    """
    Test `wrap_iterator()`
    """
    items = [1, 2, 3]
    assert helpers.wrap_iterator(items, False) is items
    assert list(helpers.wrap_iterator(items, True, desc='test', disable=True)) == items
