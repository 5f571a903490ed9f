"""Acceptance suite: thirteen numbered criteria, one test line each.

The full verification suite runs once (shared fixture); each criterion
test reports its measured value and asserts a pass at the stated
tolerance and within the stated runtime budget. The determinism
criterion runs the whole suite a second time and compares the serialized
reports byte for byte.
"""

import pytest

from glspectra.verify import run_suite

_BUDGETS = {  # seconds
    "C01": 1.0, "C02": 5.0, "C03": 30.0, "C04": 30.0, "C05": 60.0,
    "C06": 30.0, "C07": 60.0, "C08": 10.0, "C09": 30.0, "C10": 300.0,
    "C11": 300.0, "C12": 60.0,
}


@pytest.fixture(scope="module")
def report():
    return run_suite(seed=0, mc_paths=100_000)


@pytest.mark.parametrize("cid", sorted(_BUDGETS))
def test_criterion(report, cid):
    res = {c.check_id: c for c in report.checks}[cid]
    wall = report.wall_times[cid]
    print(f"{cid} {res.status.upper()}: {res.description} "
          f"(measured={res.measured!r}, tolerance={res.tolerance!r}, "
          f"{wall:.1f}s)")
    assert wall < _BUDGETS[cid]
    assert res.status == "pass", (
        f"{cid} measured {res.measured} vs tolerance {res.tolerance}: "
        f"{res.details}")


def test_criterion_C13_determinism(report):
    second = run_suite(seed=0, mc_paths=100_000)
    total = sum(report.wall_times.values()) + sum(
        second.wall_times.values())
    res = {c.check_id: c for c in report.checks}["C13"]
    print(f"C13 {res.status.upper()}: {res.description} "
          f"(two full runs, {total:.0f}s)")
    assert res.status == "pass"
    assert second.to_json() == report.to_json()
    assert total < 600.0
