"""Tests for the Info module."""

from ltn_lab import Lab, __version__


def test_version() -> None:
    lab = Lab(threads=0)

    reported_version = lab.info.version()

    assert isinstance(reported_version, str)
    assert reported_version == __version__
