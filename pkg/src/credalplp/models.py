"""Model computation for ground normal programs.

Interpretations are lists indexed by atom id: ``bool`` entries for two-valued
models, ``bool | None`` for three-valued ones (``None`` = undefined). Atoms
omitted from the atom table by active grounding are false everywhere; the
truth lookup helpers below account for that.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .errors import ResourceGuardError
from .grounding import GroundProgram, GroundRule

Interpretation = list  # list[bool]
PartialInterpretation = list  # list[bool | None]

DEFAULT_EXHAUSTIVE_LIMIT = 20


# ---------------------------------------------------------------------------
# Event formulas


@dataclass(frozen=True)
class Lit:
    """A ground-atom literal; ``value`` is the truth value it asserts."""

    atom: str
    value: bool = True


@dataclass(frozen=True)
class Not:
    sub: "Event"


@dataclass(frozen=True)
class And:
    parts: tuple["Event", ...]


@dataclass(frozen=True)
class Or:
    parts: tuple["Event", ...]


Event = Lit | Not | And | Or

TRUE: Event = And(())
FALSE: Event = Or(())


def event_from_assignments(assignments) -> Event:
    """Conjunction of two-valued assignments [(Atom|str, "true"|"false")]."""
    lits = []
    for atom, value in assignments:
        if value not in ("true", "false"):
            raise ValueError(f"event literal needs true/false, got {value!r}")
        lits.append(Lit(str(atom), value == "true"))
    return And(tuple(lits))


def truth_in(g: GroundProgram, model: Interpretation, atom: str) -> bool:
    aid = g.atom_id(atom)
    return False if aid is None else model[aid]


def truth3_in(g: GroundProgram, model: PartialInterpretation, atom: str):
    aid = g.atom_id(atom)
    return False if aid is None else model[aid]


def eval_event(e: Event, g: GroundProgram, model: Interpretation) -> bool:
    if isinstance(e, Lit):
        return truth_in(g, model, e.atom) == e.value
    if isinstance(e, Not):
        return not eval_event(e.sub, g, model)
    if isinstance(e, And):
        return all(eval_event(p, g, model) for p in e.parts)
    if isinstance(e, Or):
        return any(eval_event(p, g, model) for p in e.parts)
    raise TypeError(f"not an event: {e!r}")


# ---------------------------------------------------------------------------
# Least model (Dowling-Gallier counter propagation)


def least_model(g: GroundProgram) -> Interpretation:
    """Least fixpoint of the immediate-consequence operator; linear in total
    body size. The program must be definite."""
    for rule in g.rules:
        if rule.neg:
            raise ValueError("least_model requires a definite program")
    truth = [False] * g.n_atoms
    missing = [len(set(rule.pos)) for rule in g.rules]
    watchers: dict[int, list[int]] = {}
    for ri, rule in enumerate(g.rules):
        for p in set(rule.pos):
            watchers.setdefault(p, []).append(ri)
    queue = [rule.head for ri, rule in enumerate(g.rules) if missing[ri] == 0]
    while queue:
        aid = queue.pop()
        if truth[aid]:
            continue
        truth[aid] = True
        for ri in watchers.get(aid, ()):
            missing[ri] -= 1
            if missing[ri] == 0 and not truth[g.rules[ri].head]:
                queue.append(g.rules[ri].head)
    return truth


def reduct(g: GroundProgram, interp: Interpretation) -> GroundProgram:
    """Gelfond-Lifschitz reduct: drop rules blocked by true negated atoms,
    strip remaining negative literals."""
    out = GroundProgram(
        atoms=list(g.atoms),
        index=dict(g.index),
        choice_points=list(g.choice_points),
        fact_atoms=set(g.fact_atoms),
    )
    for rule in g.rules:
        if any(interp[n] for n in rule.neg):
            continue
        out.rules.append(GroundRule(rule.head, rule.pos, ()))
    return out


def is_stable(g: GroundProgram, interp: Interpretation) -> bool:
    return least_model(reduct(g, interp)) == list(map(bool, interp))


# ---------------------------------------------------------------------------
# Well-founded model via the alternating fixpoint


def _lft(g: GroundProgram, assumed_true: set[int]) -> set[int]:
    """Least model of the reduct with respect to ``assumed_true``."""
    truth = [False] * g.n_atoms
    rules = [r for r in g.rules if not any(n in assumed_true for n in r.neg)]
    missing = [len(set(r.pos)) for r in rules]
    watchers: dict[int, list[int]] = {}
    for ri, r in enumerate(rules):
        for p in set(r.pos):
            watchers.setdefault(p, []).append(ri)
    queue = [r.head for ri, r in enumerate(rules) if missing[ri] == 0]
    while queue:
        aid = queue.pop()
        if truth[aid]:
            continue
        truth[aid] = True
        for ri in watchers.get(aid, ()):
            missing[ri] -= 1
            if missing[ri] == 0 and not truth[rules[ri].head]:
                queue.append(rules[ri].head)
    return {i for i, t in enumerate(truth) if t}


def alternating_iterates(g: GroundProgram, start: set[int]) -> list[set[int]]:
    """Iterates of LFT∘LFT from ``start`` until stabilization (inclusive)."""
    out = [start]
    while True:
        nxt = _lft(g, _lft(g, out[-1]))
        if nxt == out[-1]:
            return out
        out.append(nxt)


def well_founded_model(g: GroundProgram) -> PartialInterpretation:
    lfp = alternating_iterates(g, set())[-1]
    gfp = alternating_iterates(g, set(range(g.n_atoms)))[-1]
    out: PartialInterpretation = []
    for aid in range(g.n_atoms):
        if aid in lfp:
            out.append(True)
        elif aid not in gfp:
            out.append(False)
        else:
            out.append(None)
    return out


# ---------------------------------------------------------------------------
# Stable-model enumeration


def _propagate(g, rules_by_head, assign) -> bool:
    """Fixpoint of two sound deductions: an atom whose rules are all blocked
    is false; an atom with a firing rule is true. Returns False on conflict
    with already-decided values."""
    changed = True
    while changed:
        changed = False
        for h in range(g.n_atoms):
            derived_true = False
            all_blocked = True
            for rule in rules_by_head.get(h, ()):
                blocked = any(assign[p] is False for p in rule.pos) or any(
                    assign[n] is True for n in rule.neg
                )
                if blocked:
                    continue
                all_blocked = False
                if all(assign[p] is True for p in rule.pos) and all(
                    assign[n] is False for n in rule.neg
                ):
                    derived_true = True
                    break
            if derived_true:
                if assign[h] is False:
                    return False
                if assign[h] is None:
                    assign[h] = True
                    changed = True
            elif all_blocked:
                if assign[h] is True:
                    return False
                if assign[h] is None:
                    assign[h] = False
                    changed = True
    return True


def stable_models(g: GroundProgram) -> Iterator[Interpretation]:
    """All stable models, no duplicates, deterministic order.

    Strategy: fix the well-founded literals, branch over the undefined atoms
    (most body occurrences first, false before true) with propagation after
    each decision, and verify stability at every total leaf; propagation is
    not proof of stability in the presence of odd loops.
    """
    rules_by_head: dict[int, list[GroundRule]] = {}
    occurrences = [0] * g.n_atoms
    for rule in g.rules:
        rules_by_head.setdefault(rule.head, []).append(rule)
        for a in rule.pos + rule.neg:
            occurrences[a] += 1

    def pick(assign):
        best = None
        for aid in range(g.n_atoms):
            if assign[aid] is None and (
                best is None or occurrences[aid] > occurrences[best]
            ):
                best = aid
        return best

    def search(assign) -> Iterator[Interpretation]:
        assign = list(assign)
        if not _propagate(g, rules_by_head, assign):
            return
        aid = pick(assign)
        if aid is None:
            model = [bool(v) for v in assign]
            if is_stable(g, model):
                yield model
            return
        for value in (False, True):
            branch = list(assign)
            branch[aid] = value
            yield from search(branch)

    yield from search(well_founded_model(g))


def exhaustive_stable_models(
    g: GroundProgram, limit: int = DEFAULT_EXHAUSTIVE_LIMIT
) -> list[Interpretation]:
    """Brute-force oracle: test all 2^n interpretations for stability."""
    n = g.n_atoms
    if n > limit:
        raise ResourceGuardError(f"{n} atoms exceeds exhaustive limit of {limit}")
    out = []
    for mask in range(1 << n):
        interp = [bool((mask >> i) & 1) for i in range(n)]
        if is_stable(g, interp):
            out.append(interp)
    return out


# ---------------------------------------------------------------------------
# Cautious / brave entailment


@dataclass
class EntailResult:
    has_model: bool
    some: bool  # brave: true in at least one stable model
    all: bool  # cautious: true in every stable model (vacuously true if none)


def entail(g: GroundProgram, e: Event) -> EntailResult:
    has_model = False
    some = False
    all_ = True
    for model in stable_models(g):
        has_model = True
        if eval_event(e, g, model):
            some = True
        else:
            all_ = False
        if some and not all_:
            break
    return EntailResult(has_model, some, all_)
