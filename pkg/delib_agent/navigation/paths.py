"""Shortest 4-connected paths on the occupancy grid."""
import heapq

from delib_agent.navigation.errors import Unreachable

STEPS = ((1, 0), (-1, 0), (0, 1), (0, -1))


def plan_path(grid, start, goals, optimistic=False):
    """Uniform-cost search from a start cell to the nearest goal cell.

    Frontier entries are ordered by (distance, x, y) so equal-length paths
    are chosen the same way every time.

    Args:
        grid (OccupancyGrid): Traversability.
        start (tuple): Start cell; it is always passable.
        goals (iterable): Acceptable end cells.
        optimistic (bool): Walk through unknown cells.

    Returns:
        (list) Cells after the start up to a goal; empty when the start is a goal.

    Raises:
        Unreachable: No goal cell is connected to the start.

    """
    start = tuple(start)
    goals = {tuple(g) for g in goals}
    came_from = {start: None}
    distance = {start: 0}
    frontier = [(0, start[0], start[1])]
    while frontier:
        d, x, y = heapq.heappop(frontier)
        cell = (x, y)
        if d > distance[cell]:
            continue
        if cell in goals:
            path = []
            while cell != start:
                path.append(cell)
                cell = came_from[cell]
            return path[::-1]
        for dx, dy in STEPS:
            neighbour = (x + dx, y + dy)
            if not grid.passable(neighbour, optimistic):
                continue
            if d + 1 < distance.get(neighbour, float("inf")):
                distance[neighbour] = d + 1
                came_from[neighbour] = cell
                heapq.heappush(frontier, (d + 1, neighbour[0], neighbour[1]))
    raise Unreachable(start, sorted(goals))
