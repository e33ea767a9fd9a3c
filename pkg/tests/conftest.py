"""Shared model fixtures: each is a dict with groupoid/haar/sigma built
directly from the layer-1 primitives (not through the catalog), so algebra
and diagonal-pair tests stay independent of the registry code they help
validate."""

import pytest

from gpd.algebra import make_cocycle
from gpd.finitetop import make_space
from gpd.germs import generate, germ_groupoid, make_partial_homeo
from gpd.groupoid import (
    HaarSystem,
    make_groupoid,
    make_haar,
    pair_groupoid,
    relation_groupoid,
)

INTERVAL_NBHD = {
    "-1": {"-1", "a"},
    "a": {"a"},
    "0": {"a", "0", "b"},
    "b": {"b"},
    "1": {"b", "1"},
}
REFLECTION = {"-1": "1", "a": "b", "0": "0", "b": "a", "1": "-1"}
HALF_NBHD = {"0": {"0", "m"}, "m": {"m"}, "1": {"m", "1"}}
SIX_NBHD = {
    "y1": {"y1"},
    "y2": {"y2"},
    "z1": {"z1"},
    "z2": {"z2"},
    "a": {"y1", "y2", "z1", "z2", "a"},
    "b": {"y1", "y2", "z1", "z2", "b"},
}


def interval_space():
    return make_space(INTERVAL_NBHD.keys(), INTERVAL_NBHD)


def reflection_relation(mode, name):
    space = interval_space()
    pairs = [(x, x) for x in space.points] + [
        (x, REFLECTION[x]) for x in space.points if REFLECTION[x] != x
    ]
    return relation_groupoid(space, pairs, mode, name=name)


@pytest.fixture(scope="session")
def a1():
    space = interval_space()
    t = make_partial_homeo(space, space.points, REFLECTION, "T")
    g = germ_groupoid(generate(space, [t]), name="a1")
    return {"g": g, "haar": HaarSystem.counting(g), "sigma": None}


@pytest.fixture(scope="session")
def a2():
    g, _ = reflection_relation("product", "a2")
    haar = make_haar(g, {a: (2 if a == "0~0" else 1) for a in g.arrows})
    return {"g": g, "haar": haar, "sigma": None}


@pytest.fixture(scope="session")
def a3():
    g, haar = reflection_relation("product_plus_diagonal", "a3")
    return {"g": g, "haar": haar, "sigma": None}


@pytest.fixture(scope="session")
def a4():
    base = make_space(HALF_NBHD.keys(), HALF_NBHD)
    points = [f"{p}@{i}" for p in base.points for i in range(2)]
    nbhd = {
        f"{p}@{i}": {f"{q}@{i}" for q in base.min_nbhd[p]}
        for p in base.points
        for i in range(2)
    }
    space = make_space(points, nbhd)
    pairs = [
        (f"{p}@{i}", f"{p}@{j}")
        for p in base.points
        for i in range(2)
        for j in range(2)
        if i == j or p != "0"
    ]
    g, haar = relation_groupoid(space, pairs, "product", name="a4")
    return {"g": g, "haar": haar, "sigma": None}


@pytest.fixture(scope="session")
def two_involutions():
    space = make_space(SIX_NBHD.keys(), SIX_NBHD)
    swap_y = {"y1": "y2", "y2": "y1", "z1": "z1", "z2": "z2", "a": "a", "b": "b"}
    swap_z = {"y1": "y1", "y2": "y2", "z1": "z2", "z2": "z1", "a": "a", "b": "b"}
    g1 = make_partial_homeo(space, space.points, swap_y, "g1")
    g2 = make_partial_homeo(space, space.points, swap_z, "g2")
    g = germ_groupoid(generate(space, [g1, g2]), name="six")
    return {"g": g, "haar": HaarSystem.counting(g), "sigma": None}


def klein_groupoid():
    units = make_space(["*"], {"*": {"*"}})
    elems = ["00", "01", "10", "11"]

    def mul(a, b):
        return "".join(str(int(x) ^ int(y)) for x, y in zip(a, b))

    return make_groupoid(
        units=units,
        arrows=elems,
        r={a: "*" for a in elems},
        s={a: "*" for a in elems},
        inv={a: a for a in elems},
        comp={(a, b): mul(a, b) for a in elems for b in elems},
        arrow_min_nbhd={a: {a} for a in elems},
        unit_arrow={"*": "00"},
        name="klein",
    )


@pytest.fixture(scope="session")
def klein():
    g = klein_groupoid()
    sigma = make_cocycle(
        g,
        {(a, b): (-1) ** (int(a[1]) * int(b[0])) for a in g.arrows for b in g.arrows},
    )
    return {"g": g, "haar": HaarSystem.counting(g), "sigma": sigma}


@pytest.fixture(scope="session")
def pair3():
    g, haar = pair_groupoid(["0", "1", "2"], name="pair3")
    return {"g": g, "haar": haar, "sigma": None}
