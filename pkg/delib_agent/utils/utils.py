from collections import Counter
from itertools import chain, combinations


def flatten_lists(lst):
    """Unpacks nested lists into one list of elements.

    Args:
        lst (:obj:`list` of :obj:`list`)

    Returns
        (list)

    """
    return list(chain(*lst))


def cooccurrence_graph(elements):
    """Counts how often two labels show up in the same group.

    Args:
        elements (:obj:`list` of :obj:`list`): Labels per group, e.g. the
            exception kinds of each episode.

    Returns:
        (`collections.Counter`) of the form Counter({(label_a, label_b): weight})

    """
    expanded = chain(*[combinations(sorted(set(d)), 2) for d in elements])
    return Counter(expanded)


def seed_range(start, count):
    """Seeds `start`, `start + 1`, ... as a list of `count` ints."""
    return list(range(start, start + count))
