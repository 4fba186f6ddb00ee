from collections import Counter

from delib_agent.utils.utils import cooccurrence_graph
from delib_agent.utils.utils import flatten_lists
from delib_agent.utils.utils import seed_range

example_exception_kinds = [
    ["ReceptacleFull", "NoEffectObserved"],
    ["NoEffectObserved", "ReceptacleFull", "PathBlocked"],
    ["PathBlocked", "PathBlocked"],
    [],
]


def test_flatten_lists():
    nested_list = [["a"], ["b"], ["c"]]
    result = flatten_lists(nested_list)
    assert result == ["a", "b", "c"]


def test_flatten_lists_skips_empty_groups():
    assert flatten_lists([[], ["a", "b"], []]) == ["a", "b"]


def test_cooccurrence_graph():
    data = [["a", "b"], ["a", "b", "c"]]

    expected_result = Counter({("a", "b"): 2, ("a", "c"): 1, ("b", "c"): 1})
    result = cooccurrence_graph(data)
    assert result == expected_result


def test_cooccurrence_graph_counts_each_episode_once():
    result = cooccurrence_graph(example_exception_kinds)

    expected_result = Counter(
        {
            ("NoEffectObserved", "ReceptacleFull"): 2,
            ("NoEffectObserved", "PathBlocked"): 1,
            ("PathBlocked", "ReceptacleFull"): 1,
        }
    )
    assert result == expected_result


def test_seed_range():
    assert seed_range(3, 4) == [3, 4, 5, 6]
    assert seed_range(0, 0) == []
