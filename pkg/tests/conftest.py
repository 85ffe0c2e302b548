"""Shared fixtures and brute-force oracles that share no code with the package."""
from __future__ import annotations

import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=200, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def string_reduce(s: str) -> str:
    """Free reduction on strings where case flips mark inverses."""
    out: list[str] = []
    for ch in s:
        if out and out[-1] != ch and out[-1].lower() == ch.lower():
            out.pop()
        else:
            out.append(ch)
    return "".join(out)


def bfs_balls(identity, step_fns, n_max):
    """Ball sizes by BFS over any hashable group model."""
    seen = {identity}
    frontier = [identity]
    sizes = [1]
    for _ in range(n_max):
        nxt = []
        for g in frontier:
            for f in step_fns:
                h = f(g)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
        sizes.append(len(seen))
    return sizes


def free_bfs(letters: str, n_max: int):
    alphabet = letters + letters.upper()
    return bfs_balls("", [lambda g, c=c: string_reduce(g + c) for c in alphabet], n_max)


def z2_bfs(n_max: int):
    moves = [(1, 0), (-1, 0), (0, 1), (0, -1)]
    return bfs_balls((0, 0), [lambda g, m=m: (g[0] + m[0], g[1] + m[1]) for m in moves], n_max)


def cyclic_bfs(n: int, n_max: int):
    return bfs_balls(0, [lambda g: (g + 1) % n, lambda g: (g - 1) % n], n_max)


@pytest.fixture
def tmp_text(tmp_path):
    def write(name: str, text: str):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return write


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in range(1, 10):
        if n in mod.RESULTS:
            ok, detail = mod.RESULTS[n]
            terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
        else:
            terminalreporter.write_line(f"criterion {n}: FAIL  (did not run to completion)")
