"""Cell paths to primitive navigation actions."""
from toolz import sliding_window

from delib_agent.sim import actions as act
from delib_agent.world.geometry import PITCH_STEP, heading_towards


def turns(heading, target):
    """Fewest 90 degree turns from one heading to another."""
    delta = (target - heading) % 360
    if delta == 0:
        return []
    if delta == 90:
        return [act.TURN_RIGHT]
    if delta == 270:
        return [act.TURN_LEFT]
    return [act.TURN_RIGHT, act.TURN_RIGHT]


def pitch_steps(pitch, target):
    delta = target - pitch
    name = act.LOOK_UP if delta > 0 else act.LOOK_DOWN
    return [name] * (abs(delta) // PITCH_STEP)


def path_to_primitives(path, start, heading=None, pitch=None):
    """Turns and Forwards along a path, then the final heading and pitch.

    Args:
        path (list): Cells after the start cell, each adjacent to the last.
        start (Pose): Where the agent is.
        heading (int): Heading to end with; defaults to the last one walked.
        pitch (int): Pitch to end with; defaults to the current pitch.

    Returns:
        (list) Primitive action names.

    """
    names = []
    current = start.heading
    cells = [start.cell()] + [tuple(c) for c in path]
    for a, b in sliding_window(2, cells):
        direction = heading_towards(b[0] - a[0], b[1] - a[1])
        names += turns(current, direction)
        names.append(act.FORWARD)
        current = direction
    if heading is not None:
        names += turns(current, heading)
    if pitch is not None:
        names += pitch_steps(start.pitch, pitch)
    return names
