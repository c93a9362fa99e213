import pytest

import mixadc.quantization as quantization
from mixadc.validation import run_validation


@pytest.fixture(scope="module")
def quick_report():
    return run_validation(quick=True)


def test_fresh_checkout_passes(quick_report):
    assert quick_report.passed
    assert len(quick_report.checks) >= 25


def test_report_carries_measured_and_tolerance(quick_report):
    for check in quick_report.checks:
        assert isinstance(check.measured, float)
        assert isinstance(check.tolerance, float)
        assert check.detail


def test_summary_lines_format(quick_report):
    lines = quick_report.summary_lines()
    assert lines[-1].startswith("PASS overall:")
    assert all(line.startswith(("PASS", "FAIL")) for line in lines)


def test_corrupted_table_fails_lloyd_cross_check(monkeypatch):
    # negative control: poisoning the distortion table must be caught
    corrupted = dict(quantization.DISTORTION_TABLE)
    corrupted[3] = 0.05
    monkeypatch.setattr(quantization, "DISTORTION_TABLE", corrupted)
    report = run_validation(quick=True)
    assert not report.passed
    lloyd = next(c for c in report.checks if c.name == "quantizer-lloyd-vs-table")
    assert not lloyd.passed
