import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nogo.scenario import HARDY_EVENTS
from nogo.spacetime import (
    AmbiguousCut,
    DimensionMismatch,
    InertialFrame,
    IntervalKind,
    NotSimultaneous,
    NotSpacelikeSolvable,
    SpacetimeEvent,
    boost,
    boosted_time,
    causal_partition,
    interval,
    simultaneity_frame,
)

coord = st.floats(-10, 10, allow_nan=False)
events_1d = st.builds(lambda t, x: SpacetimeEvent(t, (x,)), coord, coord)
events_2d = st.builds(lambda t, x, y: SpacetimeEvent(t, (x, y)), coord, coord, coord)


@st.composite
def velocities(draw, ndim):
    speed = draw(st.floats(0, 0.95))
    if ndim == 1:
        return (speed * draw(st.sampled_from([-1, 1])),)
    angle = draw(st.floats(0, 2 * math.pi))
    return (speed * math.cos(angle), speed * math.sin(angle))


# friends at t=0, superobservers at t=1, wings four units apart
HARDY = {
    "charlie": SpacetimeEvent(0, (0,)),
    "alice": SpacetimeEvent(1, (0,)),
    "daniela": SpacetimeEvent(0, (4,)),
    "bob": SpacetimeEvent(1, (4,)),
}


def test_builtin_hardy_uses_these_coordinates():
    assert HARDY_EVENTS == HARDY


def test_interval_classes():
    o = SpacetimeEvent(0, (0,))
    assert interval(o, SpacetimeEvent(1, (0,))).kind is IntervalKind.TIMELIKE
    assert interval(o, SpacetimeEvent(0, (1,))).kind is IntervalKind.SPACELIKE
    assert interval(o, SpacetimeEvent(1, (1,))).kind is IntervalKind.LIGHTLIKE
    with pytest.raises(DimensionMismatch):
        interval(o, SpacetimeEvent(0, (1, 1)))


def test_frame_speed_limit():
    with pytest.raises(ValueError):
        InertialFrame((1.0,))
    with pytest.raises(ValueError):
        InertialFrame((0.8, 0.8))
    assert InertialFrame((0.6,)).gamma == pytest.approx(1.25)


def test_hardy_frames():
    v = simultaneity_frame([HARDY["alice"], HARDY["daniela"]]).velocity
    assert v[0] == pytest.approx(-0.25, abs=1e-12)
    v = simultaneity_frame([HARDY["charlie"], HARDY["bob"]]).velocity
    assert v[0] == pytest.approx(0.25, abs=1e-12)
    assert simultaneity_frame([HARDY["alice"], HARDY["bob"]]).velocity == (0.0,)


def test_hardy_partitions():
    p = causal_partition(InertialFrame((-0.25,)), ["alice", "daniela"], HARDY)
    assert (p.before, p.at_cut, p.after) == (("charlie",), ("alice", "daniela"), ("bob",))
    p = causal_partition(InertialFrame((0.25,)), ["charlie", "bob"], HARDY)
    assert (p.before, p.at_cut, p.after) == (("daniela",), ("bob", "charlie"), ("alice",))
    p = causal_partition(InertialFrame((0.0,)), ["alice", "bob"], HARDY)
    assert (p.before, p.after) == (("charlie", "daniela"), ())


def test_partition_errors():
    with pytest.raises(NotSimultaneous):
        causal_partition(InertialFrame((0.0,)), ["alice", "daniela"], HARDY)
    with pytest.raises(AmbiguousCut):
        causal_partition(InertialFrame((0.0,)), ["alice"], HARDY)


def test_unsolvable_sets():
    with pytest.raises(NotSpacelikeSolvable):
        simultaneity_frame([HARDY["alice"], HARDY["charlie"]])
    collinear = [SpacetimeEvent(0, (0, 0)), SpacetimeEvent(0, (1, 0)), SpacetimeEvent(0, (2, 0))]
    with pytest.raises(NotSpacelikeSolvable, match="singular"):
        simultaneity_frame(collinear)
    # pairwise spacelike but the plane through them is timelike
    with pytest.raises(NotSpacelikeSolvable):
        simultaneity_frame([SpacetimeEvent(0, (0, 0)), SpacetimeEvent(0.9, (1, 0)), SpacetimeEvent(0.9, (0, 1))])


def test_boosted_time_matches_full_boost_up_to_gamma():
    f = InertialFrame((0.3, -0.4))
    e = SpacetimeEvent(2.0, (1.0, 3.0))
    assert boost(f, e).t == pytest.approx(f.gamma * boosted_time(f, e))


@settings(max_examples=300, deadline=None)
@given(st.one_of(st.tuples(events_1d, events_1d, velocities(1)), st.tuples(events_2d, events_2d, velocities(2))))
def test_interval_invariant_under_boosts(case):
    e1, e2, v = case
    f = InertialFrame(v)
    before = interval(e1, e2).s2
    after = interval(boost(f, e1), boost(f, e2)).s2
    assert after == pytest.approx(before, abs=1e-9, rel=1e-12)


@settings(max_examples=300, deadline=None)
@given(events_1d, events_1d)
def test_pair_solvable_iff_spacelike(e1, e2):
    spacelike = interval(e1, e2).kind is IntervalKind.SPACELIKE
    try:
        f = simultaneity_frame([e1, e2])
    except NotSpacelikeSolvable:
        assert not spacelike or abs(abs(e1.t - e2.t) - abs(e1.x[0] - e2.x[0])) < 1e-9
        return
    assert spacelike
    assert boosted_time(f, e1) == pytest.approx(boosted_time(f, e2), abs=1e-9)


@settings(max_examples=200, deadline=None)
@given(st.lists(events_2d, min_size=3, max_size=3))
def test_solved_frames_make_events_simultaneous(evs):
    try:
        f = simultaneity_frame(evs)
    except NotSpacelikeSolvable:
        return
    times = [boost(f, e).t for e in evs]
    assert max(times) - min(times) < 1e-8
