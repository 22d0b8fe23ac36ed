import json

import numpy as np
import pytest

from modecollapse import PiecewiseUniformDist, common_refinement


@pytest.fixture
def toy():
    """P = U[0,1], Q1 = U[0.2,1], Q2 = 0.3 U[0,0.5] + 0.7 U[0.5,1]."""
    return {
        "P": PiecewiseUniformDist.uniform(0.0, 1.0),
        "Q1": PiecewiseUniformDist.uniform(0.2, 1.0),
        "Q2": PiecewiseUniformDist(((0.0, 0.5, 0.3), (0.5, 1.0, 0.7))),
    }


@pytest.fixture
def toy_pairs(toy):
    return {
        "Q1": common_refinement(toy["P"], toy["Q1"]),
        "Q2": common_refinement(toy["P"], toy["Q2"]),
    }


@pytest.fixture
def toy_files(toy, tmp_path):
    """The toy distributions written as JSON documents."""
    paths = {}
    for name, dist in toy.items():
        paths[name] = tmp_path / f"{name}.json"
        paths[name].write_text(json.dumps(dist.to_dict()))
    return paths


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            item.user_properties.append(("criterion", mark.args))


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion (FAIL if any of its tests failed)."""
    status, titles = {}, {}
    for key in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(key, []):
            props = dict(getattr(rep, "user_properties", ()))
            if "criterion" not in props:
                continue
            number, title = props["criterion"]
            titles[number] = title
            ok = rep.passed and key == "passed"
            status[number] = status.get(number, True) and ok
    if status:
        terminalreporter.section("acceptance criteria")
        for number in sorted(status):
            verdict = "PASS" if status[number] else "FAIL"
            terminalreporter.write_line(f"criterion {number}: {verdict}  {titles[number]}")
