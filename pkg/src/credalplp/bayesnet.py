"""Clark completion and Bayesian-network compilation for acyclic programs.

The network's structure is the grounded dependency graph: choice points
become root nodes carrying their probability, every other atom becomes a
deterministic node whose table rows evaluate its completion formula. Queries
are answered by exhaustive enumeration of root configurations, which keeps
this module an independent oracle for the total-choice engine.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import UNDEFINED, NotAcyclicError, ResourceGuardError
from .grounding import GroundProgram, classify, dependency_graph
from .models import And, Event, Lit, Not, Or

DEFAULT_MAX_PARENTS = 16

_TRUTH2 = {"true": True, "false": False}


def _choice_node_name(cp_id: int) -> str:
    return f"choice#{cp_id}"


def eval_formula(e: Event, env: dict[str, bool]) -> bool:
    if isinstance(e, Lit):
        return env.get(e.atom, False) == e.value
    if isinstance(e, Not):
        return not eval_formula(e.sub, env)
    if isinstance(e, And):
        return all(eval_formula(p, env) for p in e.parts)
    if isinstance(e, Or):
        return any(eval_formula(p, env) for p in e.parts)
    raise TypeError(f"not a formula: {e!r}")


def _require_acyclic(g: GroundProgram):
    if classify(dependency_graph(g)).kind != "acyclic":
        raise NotAcyclicError("program's grounded dependency graph has a cycle")


def clark_completion(g: GroundProgram) -> dict[int, Event]:
    """Per-atom completion formulas for an acyclic ground program.

    Pure choice-point atoms (no rules) are excluded; they become root nodes.
    An atom with rules maps to the disjunction of its rule bodies, a fact to
    TRUE (empty conjunction), an atom with no rules to FALSE.
    """
    _require_acyclic(g)
    rules_by_head: dict[int, list] = {}
    for rule in g.rules:
        rules_by_head.setdefault(rule.head, []).append(rule)
    pure_choice = {
        cp.ground_atom for cp in g.choice_points if cp.ground_atom not in rules_by_head
    }
    out: dict[int, Event] = {}
    for aid in range(g.n_atoms):
        if aid in pure_choice:
            continue
        disjuncts = []
        for rule in rules_by_head.get(aid, ()):
            lits = [Lit(g.atoms[p], True) for p in rule.pos]
            lits += [Lit(g.atoms[n], False) for n in rule.neg]
            disjuncts.append(And(tuple(lits)))
        out[aid] = Or(tuple(disjuncts))
    return out


@dataclass(frozen=True)
class BnNode:
    name: str
    parents: tuple[str, ...]
    prob: Fraction | None = None  # roots only
    formula: Event | None = None  # derived nodes only

    @property
    def is_root(self) -> bool:
        return self.prob is not None


@dataclass
class BayesNet:
    nodes: list[BnNode]  # topological order

    def node(self, name: str) -> BnNode | None:
        for n in self.nodes:
            if n.name == name:
                return n
        return None


def compile_bn(
    g: GroundProgram, max_parents: int = DEFAULT_MAX_PARENTS
) -> BayesNet:
    _require_acyclic(g)
    rules_by_head: dict[int, list] = {}
    for rule in g.rules:
        rules_by_head.setdefault(rule.head, []).append(rule)
    cps_by_atom: dict[int, list] = {}
    for cp in g.choice_points:
        cps_by_atom.setdefault(cp.ground_atom, []).append(cp)

    completion = clark_completion(g)
    nodes: dict[str, BnNode] = {}
    order: list[str] = []  # creation order, used as the Kahn tie-break

    def add(node: BnNode):
        nodes[node.name] = node
        order.append(node.name)

    for aid in range(g.n_atoms):
        name = g.atoms[aid]
        cps = cps_by_atom.get(aid, [])
        has_rules = aid in rules_by_head
        if len(cps) == 1 and not has_rules:
            add(BnNode(name, (), prob=cps[0].prob))
            continue
        # several choice points over one atom, or choice points mixed with
        # rules: each selection becomes its own root and the atom is derived
        choice_lits = []
        for cp in cps:
            cname = _choice_node_name(cp.id)
            add(BnNode(cname, (), prob=cp.prob))
            choice_lits.append(Lit(cname, True))
        formula = completion.get(aid, Or(()))
        if choice_lits:
            formula = Or(tuple(choice_lits) + formula.parts)
        parents: list[str] = [lit.atom for lit in choice_lits]
        for rule in rules_by_head.get(aid, ()):
            for b in rule.pos + rule.neg:
                if g.atoms[b] not in parents:
                    parents.append(g.atoms[b])
        if len(parents) > max_parents:
            raise ResourceGuardError(
                f"node {name} has {len(parents)} parents (cap {max_parents})"
            )
        add(BnNode(name, tuple(parents), formula=formula))

    # Kahn's algorithm; ready nodes picked in creation order
    remaining = {name: set(nodes[name].parents) for name in order}
    topo: list[BnNode] = []
    done: set[str] = set()
    while remaining:
        ready = [n for n in order if n in remaining and remaining[n] <= done]
        if not ready:
            raise NotAcyclicError("cycle among network nodes")
        for name in ready:
            topo.append(nodes[name])
            done.add(name)
            del remaining[name]
    return BayesNet(topo)


def bn_query(bn: BayesNet, q_assignments, e_assignments=None):
    """Exact joint summation over root configurations; Undefined when the
    evidence has probability zero."""
    roots = [n for n in bn.nodes if n.is_root]
    q = [(str(atom), _TRUTH2[v]) for atom, v in q_assignments]
    e = [(str(atom), _TRUTH2[v]) for atom, v in (e_assignments or [])]
    p_qe = p_e = Fraction(0)
    for mask in range(1 << len(roots)):
        weight = Fraction(1)
        env: dict[str, bool] = {}
        for i, root in enumerate(roots):
            value = bool((mask >> i) & 1)
            env[root.name] = value
            weight *= root.prob if value else 1 - root.prob
        for node in bn.nodes:
            if not node.is_root:
                env[node.name] = eval_formula(node.formula, env)
        if all(env.get(name, False) == v for name, v in e):
            p_e += weight
            if all(env.get(name, False) == v for name, v in q):
                p_qe += weight
    if not e:
        return p_qe
    if p_e == 0:
        return UNDEFINED
    return p_qe / p_e


def export_bn(bn: BayesNet) -> bytes:
    """Deterministic text dump: nodes in topological order, parents, table
    rows keyed by parent bit-pattern (parents in declared order, bit 1 =
    true), probabilities as num/den. Parents are ';'-separated since atom
    text contains commas."""
    lines = []
    for node in bn.nodes:
        lines.append(f"node {node.name}")
        lines.append("parents " + ";".join(node.parents))
        if node.is_root:
            lines.append(f"row - {node.prob.numerator}/{node.prob.denominator}")
        else:
            k = len(node.parents)
            for mask in range(1 << k):
                bits = format(mask, f"0{k}b") if k else "-"
                env = {
                    p: bool((mask >> (k - 1 - i)) & 1)
                    for i, p in enumerate(node.parents)
                }
                value = eval_formula(node.formula, env)
                lines.append(f"row {bits} {int(value)}/1")
    text = "\n".join(lines) + ("\n" if lines else "")
    return text.encode("utf-8")
