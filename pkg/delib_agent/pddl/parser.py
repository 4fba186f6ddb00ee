"""Reads domain and problem text into the typed model.

Keywords are case-insensitive. Names of categories, predicates, actions and
objects are kept as written.
"""
from delib_agent import config, logger
from delib_agent.pddl.errors import (
    PDDLSyntaxError,
    TypeMismatch,
    UnknownPredicate,
    UnsupportedRequirement,
)
from delib_agent.pddl.model import (
    ROOT,
    ActionSchema,
    And,
    Atom,
    CategoryHierarchy,
    DomainModel,
    Equal,
    Forall,
    Not,
    PredicateDecl,
    ProblemModel,
    When,
    canonical_category,
    is_variable,
)
from delib_agent.pddl.sexpr import read_sexpr

ACCEPTED_REQUIREMENTS = frozenset(config["pddl"]["accepted_requirements"])
TOTAL_COST = "total-cost"


def _typed_list(nodes, names_are_variables=False):
    """Parses ``a b - T c`` into [(a, T), (b, T), (c, Object)]."""
    out, pending = [], []
    i = 0
    while i < len(nodes):
        node = nodes[i]
        name = node.token()
        if name == "-":
            if not pending or i + 1 >= len(nodes):
                node.fail("Dangling category marker", "a category name")
            category = canonical_category(nodes[i + 1].token("a category name"))
            out.extend((p, category) for p in pending)
            pending = []
            i += 2
            continue
        if names_are_variables and not is_variable(name):
            node.fail(f"Expected a variable, got {name}", "?variable")
        pending.append(name)
        i += 1
    out.extend((p, ROOT) for p in pending)
    return out


def _as_conjunction(formula):
    """Wraps a lone formula so that top-level blocks are always conjunctions."""
    if isinstance(formula, And):
        if len(formula.args) == 1 and isinstance(formula.args[0], And):
            return formula.args[0]
        return formula
    return And((formula,))


def _section_map(root, header):
    """Checks ``(define (header NAME) ...)`` and returns (NAME, sections)."""
    if root.keyword != "define" or len(root) < 2:
        root.fail("Expected (define ...)", "define")
    head = root[1]
    if head.keyword != header or len(head) != 2:
        head.fail(f"Expected ({header} NAME)", header)
    return head[1].token(), root.value[2:]


class _DomainReader:
    def __init__(self, costs=None):
        self.costs = dict(costs or {})
        self.requirements = set()
        self.parents = {}
        self.predicates = {}
        self.actions = []
        self.hierarchy = CategoryHierarchy.from_parents({})

    def read(self, text):
        name, sections = _section_map(read_sexpr(text), "domain")
        pending_actions = []
        for section in sections:
            keyword = section.keyword
            if keyword == ":requirements":
                self._requirements(section)
            elif keyword == ":types":
                self._types(section)
            elif keyword == ":predicates":
                self._predicates(section)
            elif keyword == ":functions":
                self._functions(section)
            elif keyword in (":action", "action"):
                pending_actions.append(section)
            else:
                section.fail(f"Unsupported domain section {keyword}", "a domain section")
        self.hierarchy = CategoryHierarchy.from_parents(self.parents)
        for decl in self.predicates.values():
            for _, category in decl.parameters:
                self.hierarchy.check(category)
        for section in pending_actions:
            self.actions.append(self._action(section))
        logger.debug(f"Parsed domain {name} with {len(self.actions)} actions")
        return DomainModel(
            name=name,
            requirements=frozenset(self.requirements),
            hierarchy=self.hierarchy,
            predicates=tuple(self.predicates.values()),
            actions=tuple(self.actions),
        )

    def _requirements(self, section):
        for node in section.value[1:]:
            flag = node.lowered("a requirement flag").lstrip(":")
            if flag not in ACCEPTED_REQUIREMENTS:
                raise UnsupportedRequirement(flag)
            self.requirements.add(flag)

    def _types(self, section):
        for child, parent in _typed_list(section.value[1:]):
            child = canonical_category(child)
            if child == ROOT:
                continue
            if child in self.parents and self.parents[child] != parent:
                section.fail(f"Category {child} declared twice", "one parent")
            self.parents[child] = parent

    def _predicates(self, section):
        for node in section.value[1:]:
            if node.is_token or not node.value:
                node.fail("Expected a predicate declaration", "(name ?x - T)")
            name = node[0].token("a predicate name")
            params = _typed_list(node.value[1:], names_are_variables=True)
            self.predicates[name] = PredicateDecl(name, tuple(params))

    def _functions(self, section):
        for node in section.value[1:]:
            if node.is_token:
                if node.value in ("-", "number"):
                    continue
                node.fail("Expected a function declaration", f"({TOTAL_COST})")
            if node.keyword != TOTAL_COST or len(node) != 1:
                node.fail("Only (total-cost) is supported", f"({TOTAL_COST})")

    def _action(self, section):
        nodes = section.value
        if len(nodes) < 2:
            section.fail("Expected an action name", "a name")
        name = nodes[1].token("an action name")
        fields = {}
        i = 2
        while i < len(nodes):
            key = nodes[i].lowered("an action field")
            if key not in (":parameters", ":precondition", ":effect"):
                nodes[i].fail(f"Unknown action field {key}", ":parameters")
            if i + 1 >= len(nodes):
                nodes[i].fail(f"Missing value for {key}", "(...)")
            fields[key] = nodes[i + 1]
            i += 2
        params = []
        if ":parameters" in fields:
            params = _typed_list(fields[":parameters"].value, names_are_variables=True)
        for _, category in params:
            self.hierarchy.check(category)
        scope = dict(params)
        precondition = And(())
        if ":precondition" in fields:
            precondition = _as_conjunction(
                self._formula(fields[":precondition"], scope, effect=False)
            )
        effect, cost = And(()), None
        if ":effect" in fields:
            effect, cost = self._effect(fields[":effect"], scope)
        if name in self.costs:
            cost = self.costs[name]
        return ActionSchema(
            name=name,
            parameters=tuple(params),
            precondition=precondition,
            effect=effect,
            cost=int(config["pddl"]["default_action_cost"] if cost is None else cost),
        )

    def _atom(self, node, scope):
        name = node[0].token("a predicate name")
        decl = self.predicates.get(name)
        if decl is None:
            raise UnknownPredicate(name)
        terms = tuple(t.token("a term") for t in node.value[1:])
        if len(terms) != decl.arity:
            node.fail(
                f"{name} takes {decl.arity} arguments, got {len(terms)}",
                f"{decl.arity} arguments",
            )
        for term, (_, category) in zip(terms, decl.parameters):
            if term not in scope:
                node.fail(f"Undeclared variable {term}", "a declared ?variable")
            declared = scope[term]
            if not (
                self.hierarchy.is_subtype(declared, category)
                or self.hierarchy.is_subtype(category, declared)
            ):
                raise TypeMismatch(term, category)
        return Atom(name, terms)

    def _formula(self, node, scope, effect):
        keyword = node.keyword
        if node.is_token or keyword is None:
            node.fail("Expected a formula", "(...)")
        if keyword == "and":
            return And(tuple(self._formula(n, scope, effect) for n in node.value[1:]))
        if keyword == "not":
            if len(node) != 2:
                node.fail("not takes one argument", "one formula")
            inner = self._formula(node[1], scope, effect)
            if effect and not isinstance(inner, Atom):
                node.fail("Only atoms can be negated in effects", "an atom")
            return Not(inner)
        if keyword == "=":
            if len(node) != 3 or effect:
                node.fail("Malformed equality", "(= ?a ?b)")
            left, right = node[1].token(), node[2].token()
            for term in (left, right):
                if term not in scope:
                    node.fail(f"Undeclared variable {term}", "a declared ?variable")
            return Equal(left, right)
        if keyword == "forall":
            if len(node) != 3 or node[1].is_token:
                node.fail("Malformed forall", "(forall (?x - T) body)")
            bound = _typed_list(node[1].value, names_are_variables=True)
            inner_scope = dict(scope)
            inner_scope.update(bound)
            body = self._formula(node[2], inner_scope, effect)
            for variable, category in reversed(bound):
                self.hierarchy.check(category)
                body = Forall(variable, category, body)
            return body
        if keyword == "when":
            if not effect or len(node) != 3:
                node.fail("when is only allowed in effects", "an effect")
            condition = self._formula(node[1], scope, effect=False)
            return When(condition, self._formula(node[2], scope, effect=True))
        if keyword in ("or", "imply", "exists"):
            node.fail(f"Unsupported connective {keyword}", "and/not/forall")
        return self._atom(node, scope)

    def _effect(self, node, scope):
        """Parses an effect, pulling a top-level ``increase`` out as the cost."""
        cost = None
        parts = node.value[1:] if node.keyword == "and" else [node]
        kept = []
        for part in parts:
            if part.keyword == "increase":
                if len(part) != 3 or part[1].keyword != TOTAL_COST:
                    part.fail("Only (increase (total-cost) N) is supported", "total-cost")
                try:
                    cost = int(part[2].token("a number"))
                except ValueError:
                    part[2].fail("Expected an integer cost", "an integer")
                continue
            kept.append(self._formula(part, scope, effect=True))
        return _as_conjunction(And(tuple(kept))), cost


def parse_domain(text, costs=None):
    """Parses domain text.

    Args:
        text (str): Domain source.
        costs (dict): Optional action name to cost table, overriding any
            ``increase`` effect.

    Returns:
        (DomainModel)

    """
    return _DomainReader(costs).read(text)


def _ground_atom(node, domain, objects):
    name = node[0].token("a predicate name")
    decl = domain.predicate(name)
    if decl is None:
        raise UnknownPredicate(name)
    args = tuple(t.token("an object") for t in node.value[1:])
    if len(args) != decl.arity:
        node.fail(f"{name} takes {decl.arity} arguments", f"{decl.arity} arguments")
    for arg, (_, category) in zip(args, decl.parameters):
        if arg not in objects:
            raise TypeMismatch(arg, category)
        if not domain.hierarchy.is_subtype(objects[arg], category):
            raise TypeMismatch(arg, category)
    return (name,) + args


def _goal(node, domain, objects, scope):
    keyword = node.keyword
    if node.is_token or keyword is None:
        node.fail("Expected a goal formula", "(...)")
    if keyword == "and":
        return And(tuple(_goal(n, domain, objects, scope) for n in node.value[1:]))
    if keyword == "not":
        if len(node) != 2:
            node.fail("not takes one argument", "one formula")
        return Not(_goal(node[1], domain, objects, scope))
    if keyword == "=":
        if len(node) != 3:
            node.fail("Malformed equality", "(= a b)")
        left, right = node[1].token("a term"), node[2].token("a term")
        for term in (left, right):
            known = term in scope if is_variable(term) else term in objects
            if not known:
                node.fail(f"Undeclared term {term}", "a declared object or ?variable")
        return Equal(left, right)
    if keyword == "forall":
        bound = _typed_list(node[1].value, names_are_variables=True)
        inner = dict(scope)
        inner.update(bound)
        body = _goal(node[2], domain, objects, inner)
        for variable, category in reversed(bound):
            domain.hierarchy.check(category)
            body = Forall(variable, category, body)
        return body
    if keyword in ("or", "imply", "exists", "when"):
        node.fail(f"Unsupported connective {keyword}", "and/not/forall")
    name = node[0].token("a predicate name")
    decl = domain.predicate(name)
    if decl is None:
        raise UnknownPredicate(name)
    terms = tuple(t.token("a term") for t in node.value[1:])
    if len(terms) != decl.arity:
        node.fail(f"{name} takes {decl.arity} arguments", f"{decl.arity} arguments")
    for term, (_, category) in zip(terms, decl.parameters):
        if is_variable(term):
            if term not in scope:
                node.fail(f"Undeclared variable {term}", "a declared ?variable")
        elif term not in objects:
            raise TypeMismatch(term, category)
        elif not domain.hierarchy.is_subtype(objects[term], category):
            raise TypeMismatch(term, category)
    return Atom(name, terms)


def parse_problem(text, domain):
    """Parses problem text against an already parsed domain.

    Args:
        text (str): Problem source.
        domain (DomainModel): The domain the problem refers to.

    Returns:
        (ProblemModel)

    Raises:
        TypeMismatch: An object of an undeclared category or an ill-typed
            initial atom.

    """
    name, sections = _section_map(read_sexpr(text), "problem")
    domain_name, objects, init, goal, metric = None, [], set(), And(()), False
    for section in sections:
        keyword = section.keyword
        if keyword == ":domain":
            domain_name = section[1].token("a domain name")
            if domain_name != domain.name:
                section[1].fail(f"Problem is for domain {domain_name}", domain.name)
        elif keyword == ":objects":
            for obj, category in _typed_list(section.value[1:]):
                if category not in domain.hierarchy.categories:
                    raise TypeMismatch(obj, category)
                objects.append((obj, category))
        elif keyword == ":init":
            typed = dict(objects)
            for node in section.value[1:]:
                if node.keyword == "=":
                    continue
                if node.is_token or node.keyword is None:
                    node.fail("Expected a ground atom", "(predicate args)")
                init.add(_ground_atom(node, domain, typed))
        elif keyword == ":goal":
            if len(section) != 2:
                section.fail("Expected one goal formula", "(:goal formula)")
            goal = _as_conjunction(_goal(section[1], domain, dict(objects), {}))
        elif keyword == ":metric":
            metric = True
        else:
            section.fail(f"Unsupported problem section {keyword}", "a problem section")
    if domain_name is None:
        raise PDDLSyntaxError("Problem does not name its domain", expected=":domain")
    seen = set()
    for obj, _ in objects:
        if obj in seen:
            raise PDDLSyntaxError(f"Object {obj} declared twice", expected="unique names")
        seen.add(obj)
    return ProblemModel(
        name=name,
        domain_name=domain_name,
        objects=tuple(objects),
        init=frozenset(init),
        goal=goal,
        metric=metric,
    )


