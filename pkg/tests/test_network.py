import math

import pytest

from interdict import (
    Network,
    NetworkError,
    all_pairs_shortest,
    parse_network,
    serialize_network,
)
from helpers import brute_force_distances, random_network


def test_parse_fixture(fixture_net):
    assert len(fixture_net.nodes) == 6
    assert len(fixture_net.edges) == 7
    assert set(fixture_net.edges) == {
        (1, 2, 2), (2, 5, 4), (1, 3, 2), (3, 5, 2), (1, 4, 4), (4, 5, 1), (6, 3, 2)
    }
    assert fixture_net.crime == 1
    assert fixture_net.police == (6,)
    assert fixture_net.exits == (5,)
    assert fixture_net.t_max == 6


def test_crime_node_must_not_be_exit():
    with pytest.raises(NetworkError, match="must not be an exit"):
        parse_network('{"nodes": [1], "edges": [], "crime": 1, "police": [1], "exits": [1], "tmax": 1}')


def test_zero_length_edge_rejected():
    with pytest.raises(NetworkError, match="length must be >= 1"):
        parse_network(
            '{"nodes": [1, 2], "edges": [[1, 2, 0]], "crime": 1, "police": [1], "exits": [2], "tmax": 1}'
        )


@pytest.mark.parametrize(
    "text, message",
    [
        ('{"nodes": [1, 2], "edges": [[1, 2, 1], [1, 2, 3]], "crime": 1, "police": [1], "exits": [2], "tmax": 2}',
         "duplicate edge"),
        ('{"nodes": [1, 2], "edges": [[1, 1, 1]], "crime": 1, "police": [1], "exits": [2], "tmax": 2}',
         "self-loop"),
        ('{"nodes": [1, 2], "edges": [[1, 3, 1]], "crime": 1, "police": [1], "exits": [2], "tmax": 2}',
         "unknown node"),
        ('{"nodes": [1, 2], "edges": [], "crime": 7, "police": [1], "exits": [2], "tmax": 2}',
         "crime node 7"),
        ('{"nodes": [1, 2], "edges": [], "crime": 1, "police": [], "exits": [2], "tmax": 2}',
         "police start list is empty"),
        ('{"nodes": [1, 2], "edges": [], "crime": 1, "police": [1], "exits": [], "tmax": 2}',
         "exit list is empty"),
        ('{"nodes": [1, 2], "edges": [], "crime": 1, "police": [1], "exits": [2], "tmax": 0}',
         "tmax must be >= 1"),
        ('{"nodes": [1, 1], "edges": [], "crime": 1, "police": [1], "exits": [1], "tmax": 2}',
         "duplicate node"),
        ('{"nodes": [0], "edges": [], "crime": 0, "police": [0], "exits": [0], "tmax": 2}',
         "must be positive"),
        ('{"nodes": [1, 2], "edges": [], "crime": 1, "police": [1], "exits": [2], "tmax": 2, "extra": 1}',
         "unknown keys"),
        ('{"nodes": [1, 2], "edges": [], "crime": 1, "police": [1], "exits": [2]}',
         "missing keys"),
        ('{"nodes": [1, 2], "edges": [], "crime": true, "police": [1], "exits": [2], "tmax": 2}',
         "must be an integer"),
        ('{"nodes": [1, 2], "edges": [[1, 2]], "crime": 1, "police": [1], "exits": [2], "tmax": 2}',
         "triple"),
    ],
)
def test_invalid_network_files(text, message):
    with pytest.raises(NetworkError, match=message):
        parse_network(text)


def test_syntax_error_reports_position():
    with pytest.raises(NetworkError, match="syntax error at line"):
        parse_network("{not json")


def test_not_an_object():
    with pytest.raises(NetworkError, match="JSON object"):
        parse_network("[1, 2]")


def test_serialize_round_trip(fixture_net, fixture_network_text):
    assert parse_network(serialize_network(fixture_net)) == fixture_net
    # canonical form is stable
    assert serialize_network(fixture_net) == serialize_network(parse_network(fixture_network_text))


def test_serialize_round_trip_random():
    for seed in range(30):
        net = random_network(seed)
        if net is None:
            continue
        assert parse_network(serialize_network(net)) == net


def test_fixture_distances(fixture_net):
    dm = all_pairs_shortest(fixture_net)
    assert dm.travel_time(6, 3) == 2
    assert dm.travel_time(6, 5) == 4  # 6 -> 3 -> 5
    for v in fixture_net.nodes:
        assert dm.travel_time(v, v) == 0
    assert not dm.reachable(5, 1)
    assert dm.travel_time(5, 1) == math.inf


def test_all_pairs_matches_enumeration():
    checked = 0
    for seed in range(200):
        net = random_network(seed, max_nodes=6)
        if net is None:
            continue
        assert all_pairs_shortest(net).table == brute_force_distances(net)
        checked += 1
        if checked >= 50:
            break
    assert checked >= 50


def test_all_pairs_deterministic(fixture_net):
    assert all_pairs_shortest(fixture_net).table == all_pairs_shortest(fixture_net).table


def test_triangle_inequality():
    for seed in range(40):
        net = random_network(seed)
        if net is None:
            continue
        dm = all_pairs_shortest(net)
        for u in net.nodes:
            for v in net.nodes:
                for w in net.nodes:
                    assert dm.travel_time(u, w) <= dm.travel_time(u, v) + dm.travel_time(v, w)


def test_network_is_immutable(fixture_net):
    with pytest.raises(AttributeError):
        fixture_net.t_max = 7
