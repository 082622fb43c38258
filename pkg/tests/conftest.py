"""Shared fixtures and reporting hooks for the test suite."""

from __future__ import annotations

import sys

import numpy as np
import pytest

from casimir_plates import DrudeParams, Material, PermittivityTable, material_preset


@pytest.fixture(scope="session")
def au() -> Material:
    return material_preset("au")


@pytest.fixture(scope="session")
def cu() -> Material:
    return material_preset("cu")


@pytest.fixture(scope="session")
def al() -> Material:
    return material_preset("al")


def make_table_material(
    name: str = "tab",
    zeta=(1e12, 1e16),
    eps=(1e6, 1.5),
    fallback: DrudeParams | None = None,
) -> Material:
    """A tabulated material for tests; default knots are a steep metal-like drop."""
    table = PermittivityTable(
        zeta=np.asarray(zeta, dtype=float),
        eps=np.asarray(eps, dtype=float),
        fallback=fallback,
    )
    return Material(name=name, model=table)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    # echo the per-criterion verdict lines collected by the acceptance module
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "CRITERION_LINES", None) if mod else None
    if lines:
        terminalreporter.section("acceptance criteria")
        for n in sorted(lines):
            terminalreporter.write_line(lines[n])
