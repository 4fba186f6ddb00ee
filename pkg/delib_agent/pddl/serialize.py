"""Writes domain and problem models back to PDDL text."""
from delib_agent.pddl.model import And, Atom, Equal, Forall, Not, When

INDENT = "    "


def format_formula(formula):
    """Renders a formula on a single line."""
    if isinstance(formula, Atom):
        return "(" + " ".join((formula.predicate,) + formula.terms) + ")"
    if isinstance(formula, Not):
        return f"(not {format_formula(formula.arg)})"
    if isinstance(formula, And):
        return "(and " + " ".join(format_formula(a) for a in formula.args) + ")"
    if isinstance(formula, Equal):
        return f"(= {formula.left} {formula.right})"
    if isinstance(formula, Forall):
        body = format_formula(formula.body)
        return f"(forall ({formula.variable} - {formula.category}) {body})"
    if isinstance(formula, When):
        condition = format_formula(formula.condition)
        return f"(when {condition} {format_formula(formula.effect)})"
    raise TypeError(f"Not a formula: {formula!r}")


def _block(formula, depth, extra=()):
    """Renders a conjunction with one member per line."""
    members = list(formula.args) if isinstance(formula, And) else [formula]
    lines = [format_formula(m) for m in members] + list(extra)
    if not lines:
        return "(and)"
    pad = INDENT * (depth + 1)
    body = "\n".join(pad + line for line in lines)
    return f"(and\n{body}\n{INDENT * depth})"


def _typed(pairs):
    return " ".join(f"{name} - {category}" for name, category in pairs)


def serialize_domain(domain):
    """Renders a domain model as PDDL text.

    Args:
        domain (DomainModel)

    Returns:
        (str)

    """
    lines = [f"(define (domain {domain.name})"]
    if domain.requirements:
        flags = " ".join(f":{r}" for r in sorted(domain.requirements))
        lines.append(f"{INDENT}(:requirements {flags})")
    lines.append(f"{INDENT}(:types")
    for child, parent in domain.hierarchy.parents:
        lines.append(f"{INDENT * 2}{child} - {parent}")
    lines.append(f"{INDENT})")
    lines.append(f"{INDENT}(:predicates")
    for decl in domain.predicates:
        params = f" {_typed(decl.parameters)}" if decl.parameters else ""
        lines.append(f"{INDENT * 2}({decl.name}{params})")
    lines.append(f"{INDENT})")
    if domain.uses_costs:
        lines.append(f"{INDENT}(:functions (total-cost) - number)")
    for action in domain.actions:
        extra = [f"(increase (total-cost) {action.cost})"] if action.cost != 1 else []
        lines.append(f"{INDENT}(:action {action.name}")
        lines.append(f"{INDENT * 2}:parameters ({_typed(action.parameters)})")
        lines.append(
            f"{INDENT * 2}:precondition {_block(action.precondition, 2)}"
        )
        lines.append(f"{INDENT * 2}:effect {_block(action.effect, 2, extra)}")
        lines.append(f"{INDENT})")
    lines.append(")")
    return "\n".join(lines) + "\n"


def serialize_problem(problem):
    """Renders a problem model as PDDL text, one object and atom per line."""
    lines = [
        f"(define (problem {problem.name})",
        f"{INDENT}(:domain {problem.domain_name})",
        f"{INDENT}(:objects",
    ]
    for name, category in problem.objects:
        lines.append(f"{INDENT * 2}{name} - {category}")
    lines.append(f"{INDENT})")
    lines.append(f"{INDENT}(:init")
    for atom in sorted(problem.init):
        lines.append(f"{INDENT * 2}(" + " ".join(atom) + ")")
    lines.append(f"{INDENT})")
    lines.append(f"{INDENT}(:goal {_block(problem.goal, 1)})")
    if problem.metric:
        lines.append(f"{INDENT}(:metric minimize (total-cost))")
    lines.append(")")
    return "\n".join(lines) + "\n"
