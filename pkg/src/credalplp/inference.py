"""Exact probabilistic inference over total choices.

All arithmetic is over ``fractions.Fraction``; decimal rendering happens only
at the presentation layer. Credal queries follow a strict consistency policy:
the first total choice without a stable model aborts the query with a witness
(no renormalization).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .errors import UNDEFINED, InconsistentProgramError, ResourceGuardError
from .grounding import GroundProgram, GroundRule
from .models import (
    Event,
    eval_event,
    stable_models,
    truth3_in,
    well_founded_model,
)

DEFAULT_MAX_CHOICES = 20

_TRUTH3 = {"true": True, "false": False, "undefined": None}


@dataclass(frozen=True)
class TotalChoice:
    kept: tuple[bool, ...]  # indexed by ChoicePoint id
    weight: Fraction

    def __str__(self) -> str:
        return "{" + "".join("1" if k else "0" for k in self.kept) + "}"

    def describe(self, g: GroundProgram) -> str:
        parts = [
            f"{'keep' if k else 'discard'} {g.atoms[cp.ground_atom]}"
            for cp, k in zip(g.choice_points, self.kept)
        ]
        return "{" + ", ".join(parts) + "}"


@dataclass(frozen=True)
class CredalInterval:
    lower: Fraction
    upper: Fraction

    def __post_init__(self):
        assert 0 <= self.lower <= self.upper <= 1


@dataclass(frozen=True)
class WfDistribution:
    p_true: Fraction
    p_false: Fraction
    p_undefined: Fraction


@dataclass
class ConsistencyReport:
    consistent: bool
    witness: TotalChoice | None = None


def total_choices(
    g: GroundProgram, max_choices: int = DEFAULT_MAX_CHOICES
) -> Iterator[TotalChoice]:
    """All 2^n total choices in binary-counting order on choice-point ids
    (id 0 is the least significant bit)."""
    n = len(g.choice_points)
    if n > max_choices:
        raise ResourceGuardError(
            f"{n} choice points exceeds cap of {max_choices} (2^n total choices)"
        )
    for mask in range(1 << n):
        kept = tuple(bool((mask >> i) & 1) for i in range(n))
        weight = Fraction(1)
        for cp, k in zip(g.choice_points, kept):
            weight *= cp.prob if k else 1 - cp.prob
        yield TotalChoice(kept, weight)


def program_for_choice(g: GroundProgram, choice: TotalChoice) -> GroundProgram:
    """Kept choice atoms become facts; discarded atoms stay in the table and
    are false unless derivable."""
    out = GroundProgram(
        atoms=list(g.atoms),
        index=dict(g.index),
        choice_points=list(g.choice_points),
        fact_atoms=set(g.fact_atoms),
    )
    for cp, kept in zip(g.choice_points, choice.kept):
        if kept:
            out.rules.append(GroundRule(cp.ground_atom, (), ()))
            out.fact_atoms.add(cp.ground_atom)
    out.rules.extend(g.rules)
    return out


def _choice_models(g, choice, stats=None) -> list:
    models = list(stable_models(program_for_choice(g, choice)))
    if not models:
        error = InconsistentProgramError(choice)
        error.description = choice.describe(g)
        raise error
    if stats is not None:
        stats["choices"] = stats.get("choices", 0) + 1
        stats["models"] = stats.get("models", 0) + len(models)
    return models


def credal_unconditional(
    g: GroundProgram,
    q: Event,
    max_choices: int = DEFAULT_MAX_CHOICES,
    stats=None,
) -> CredalInterval:
    lower = upper = Fraction(0)
    for choice in total_choices(g, max_choices):
        models = _choice_models(g, choice, stats)
        holds = [eval_event(q, g, m) for m in models]
        if all(holds):
            lower += choice.weight
        if any(holds):
            upper += choice.weight
    return CredalInterval(lower, upper)


def credal_conditional(
    g: GroundProgram,
    q: Event,
    e: Event,
    max_choices: int = DEFAULT_MAX_CHOICES,
    stats=None,
):
    """Conditional bounds [a/(a+d), b/(b+c)] with the degenerate cases of the
    capacity-based conditioning rule; Undefined when evidence has upper
    probability zero."""
    a = b = c = d = Fraction(0)
    for choice in total_choices(g, max_choices):
        models = _choice_models(g, choice, stats)
        qe = [eval_event(q, g, m) and eval_event(e, g, m) for m in models]
        nqe = [(not eval_event(q, g, m)) and eval_event(e, g, m) for m in models]
        if all(qe):
            a += choice.weight
        if any(qe):
            b += choice.weight
        if all(nqe):
            c += choice.weight
        if any(nqe):
            d += choice.weight
    if b + d == 0:
        return UNDEFINED
    if b + c == 0 and d > 0:
        return CredalInterval(Fraction(0), Fraction(0))
    if a + d == 0 and b > 0:
        return CredalInterval(Fraction(1), Fraction(1))
    return CredalInterval(a / (a + d), b / (b + c))


def _matches_wf(g, wf, assignments) -> bool:
    return all(
        truth3_in(g, wf, str(atom)) == _TRUTH3[value] for atom, value in assignments
    )


def wf_query(
    g: GroundProgram,
    q_assignments,
    e_assignments=None,
    max_choices: int = DEFAULT_MAX_CHOICES,
    stats=None,
):
    """P(q) (or P(q | e)) under the well-founded semantics: exact three-valued
    match against the well-founded model of every total choice."""
    p_qe = p_e = Fraction(0)
    for choice in total_choices(g, max_choices):
        wf = well_founded_model(program_for_choice(g, choice))
        if stats is not None:
            stats["choices"] = stats.get("choices", 0) + 1
            stats["models"] = stats.get("models", 0) + 1
        e_ok = _matches_wf(g, wf, e_assignments) if e_assignments else True
        if e_ok:
            p_e += choice.weight
            if _matches_wf(g, wf, q_assignments):
                p_qe += choice.weight
    if not e_assignments:
        return p_qe
    if p_e == 0:
        return UNDEFINED
    return p_qe / p_e


def wf_atom_distribution(
    g: GroundProgram, atom: str, max_choices: int = DEFAULT_MAX_CHOICES
) -> WfDistribution:
    probs = {True: Fraction(0), False: Fraction(0), None: Fraction(0)}
    for choice in total_choices(g, max_choices):
        wf = well_founded_model(program_for_choice(g, choice))
        probs[truth3_in(g, wf, atom)] += choice.weight
    return WfDistribution(probs[True], probs[False], probs[None])


def check_consistency(
    g: GroundProgram, max_choices: int = DEFAULT_MAX_CHOICES
) -> ConsistencyReport:
    for choice in total_choices(g, max_choices):
        if next(iter(stable_models(program_for_choice(g, choice))), None) is None:
            return ConsistencyReport(False, choice)
    return ConsistencyReport(True)


def event_bounds(
    g: GroundProgram, events: list[Event], max_choices: int = DEFAULT_MAX_CHOICES
) -> list[CredalInterval]:
    """Lower/upper bounds for several events in one sweep over total choices."""
    lowers = [Fraction(0)] * len(events)
    uppers = [Fraction(0)] * len(events)
    for choice in total_choices(g, max_choices):
        models = _choice_models(g, choice)
        for i, event in enumerate(events):
            holds = [eval_event(event, g, m) for m in models]
            if all(holds):
                lowers[i] += choice.weight
            if any(holds):
                uppers[i] += choice.weight
    return [CredalInterval(lo, up) for lo, up in zip(lowers, uppers)]


def missing_atoms(g: GroundProgram, assignments) -> list[str]:
    """Query atoms absent from the active atom table; they are false in every
    model by the grounding guarantee (callers may warn)."""
    return [str(atom) for atom, _ in assignments if g.atom_id(str(atom)) is None]
