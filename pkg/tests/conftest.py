from functools import lru_cache

import pytest

from doilynest.cliques import build_graph, enumerate_maximal_sets
from doilynest.geometry import build_geometry, detect_pencils, enumerate_doilies
from doilynest.report import load_listing, listing_path


@lru_cache(maxsize=None)
def graph(k):
    return build_graph(k)


@lru_cache(maxsize=None)
def sets(k):
    return enumerate_maximal_sets(graph(k))


@lru_cache(maxsize=None)
def snapshot(k):
    return build_geometry(sets(k), k)


@lru_cache(maxsize=None)
def doilies(k):
    return enumerate_doilies(snapshot(k))


@lru_cache(maxsize=None)
def pencils(k):
    return detect_pencils(snapshot(k), doilies(k))


@lru_cache(maxsize=None)
def published(k):
    """Published listing as ``{label: members}``."""
    return {label: members for members, label in load_listing(listing_path(k))}


def point_id(k, label):
    return snapshot(k).points.index(published(k)[label])


@pytest.fixture
def geo():
    """Access to the cached per-k computations."""
    class Geo:
        pass
    g = Geo()
    g.graph, g.sets, g.snapshot, g.doilies, g.pencils = graph, sets, snapshot, doilies, pencils
    g.published, g.point_id = published, point_id
    return g


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
