from delib_agent.pddl.grounding import GroundedAction, GroundedTask, ground
from delib_agent.pddl.parser import parse_domain, parse_problem
from delib_agent.pddl.semantics import apply, holds
from delib_agent.pddl.serialize import serialize_domain, serialize_problem
