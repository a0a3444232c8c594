"""Polynomial-time approximation with a certified per-step ratio.

The driver walks the input forests left to right and edits the working forest
and the current partner with a sequence of meta-steps until they agree.  Each
meta-step removes a bundled edge set and carries a proven ratio: reduction
and grouping are free (ratio 1), cutting the two chosen labels is ratio 2,
and the steps that also cut surplus edges are ratio 3 rooted / ratio 4
unrooted.  The maximum ratio over the run bounds the output order against the
optimum, so the whole algorithm is a 3-approximation on rooted instances and
a 4-approximation on unrooted ones.

Every step is recorded with the removed edges, the working-forest subset, and
an essential subset (a removal set of the same effect in which every edge
genuinely splits a component); ``check_metastep_ratio`` re-audits a record's
bookkeeping after the fact.
"""

from __future__ import annotations

from dataclasses import dataclass

from .forest import Forest, Instance, MafError
from .reduction import find_applicable

RULE1 = "rule1"
GROUP = "group"
MS2 = "ms2"
MS31 = "ms31"
MS32 = "ms32"

_ESSENTIAL_CAPS_ROOTED = {RULE1: None, GROUP: 0, MS2: 3, MS31: 2, MS32: 3}
_ESSENTIAL_CAPS_UNROOTED = {RULE1: None, GROUP: 0, MS2: 4, MS31: 2, MS32: 4}


def declared_ratio(kind: str, rooted: bool) -> int:
    if kind in (RULE1, GROUP):
        return 1
    if kind == MS31:
        return 2
    return 3 if rooted else 4


@dataclass(frozen=True)
class MetaStepRecord:
    """Bookkeeping for one meta-step application."""

    kind: str
    partner_index: int
    removed_f1: tuple[int, ...]
    removed_partner: tuple[int, ...]
    essential: tuple[int, ...]
    declared_ratio: int
    f1_before: Forest
    f1_after: Forest


@dataclass(frozen=True)
class ApproxResult:
    forest: Forest
    trace: tuple[MetaStepRecord, ...]
    ratio_bound: int

    @property
    def order(self) -> int:
        return self.forest.order()

    def step_counts(self) -> dict[str, int]:
        counts = {RULE1: 0, GROUP: 0, MS2: 0, MS31: 0, MS32: 0}
        for rec in self.trace:
            counts[rec.kind] += 1
        return counts


def essential_subset(forest: Forest, eids) -> tuple[int, ...]:
    """Greedy essential subset: drop edges that do not change the removal.

    Scanning in id order, an edge is dropped whenever removing the remaining
    set still produces the same forest.  At the end every survivor genuinely
    splits a component, so the result is an essential edge set realizing the
    original removal.
    """
    keep = sorted(eids)
    target = forest.remove_edges(keep).canonical_key()
    for e in sorted(eids):
        trial = [x for x in keep if x != e]
        if forest.remove_edges(trial).canonical_key() == target:
            keep = trial
    return tuple(keep)


def check_metastep_ratio(rec: MetaStepRecord, before: Forest | None = None) -> bool:
    """Re-audit one record's identities; False on any violation."""
    before = rec.f1_before if before is None else before
    try:
        ess = set(rec.essential)
        if not ess <= set(rec.removed_f1):
            return False
        after_full = before.remove_edges(rec.removed_f1)
        after_ess = before.remove_edges(rec.essential)
        if not after_full.same_structure(after_ess):
            return False
        if after_full.order() != before.order() + len(rec.essential):
            return False
        if len(rec.essential) != rec.f1_after.order() - before.order():
            return False
        caps = _ESSENTIAL_CAPS_ROOTED if before.rooted else _ESSENTIAL_CAPS_UNROOTED
        cap = caps[rec.kind]
        if rec.kind == RULE1:
            if len(rec.essential) != len(rec.removed_f1):
                return False
        elif cap is not None and len(rec.essential) > cap:
            return False
        if rec.declared_ratio != declared_ratio(rec.kind, before.rooted):
            return False
    except MafError:
        return False
    return True


def _record(kind, idx, f1_before, f1_after, removed_f1, removed_partner) -> MetaStepRecord:
    ess = essential_subset(f1_before, removed_f1)
    rec = MetaStepRecord(
        kind=kind,
        partner_index=idx,
        removed_f1=tuple(sorted(removed_f1)),
        removed_partner=tuple(sorted(removed_partner)),
        essential=ess,
        declared_ratio=declared_ratio(kind, f1_before.rooted),
        f1_before=f1_before,
        f1_after=f1_after,
    )
    if not check_metastep_ratio(rec):
        raise MafError(f"meta-step {kind} failed its own ratio audit")
    return rec


def _approximate(instance: Instance) -> ApproxResult:
    f1 = instance.forests[0]
    trace: list[MetaStepRecord] = []
    for idx in range(1, len(instance.forests)):
        fi = instance.forests[idx]
        # the working forest and each fresh partner share the label universe;
        # grouping below extends both tables in lockstep
        budget = 8 * (len(f1.original_label_ids()) + 1) ** 2
        while not f1.same_structure(fi):
            budget -= 1
            if budget < 0:
                raise MafError("approximation made no progress")
            hit = find_applicable(f1, fi)
            if hit is not None:
                eid, _ = hit
                nfi = fi.remove_edges([eid])
                trace.append(_record(RULE1, idx, f1, f1, (), (eid,)))
                fi = nfi
                continue
            hit = find_applicable(fi, f1)
            if hit is not None:
                eid, _ = hit
                nf1 = f1.remove_edges([eid])
                trace.append(_record(RULE1, idx, f1, nf1, (eid,), ()))
                f1 = nf1
                continue

            mss = fi.find_mss()
            if mss is None:
                raise MafError("unequal pair with no sibling set after reduction")
            case = f1.sibling_case(mss.labels)
            if case.kind == "mss":
                nf1 = f1.group_labels(mss.labels)
                nfi = fi.group_labels(mss.labels)
                trace.append(_record(GROUP, idx, f1, nf1, (), ()))
                f1, fi = nf1, nfi
                continue

            ordered = sorted(
                mss.labels, key=lambda l: (f1.labels.min_original(l), l)
            )
            if case.kind == "siblings":
                a, b = ordered[0], ordered[1]
                extra = case.surplus_edges[:1] if f1.rooted else case.surplus_edges[:2]
                kind = MS2
            elif case.kind == "split":
                a, b = case.pair
                extra = ()
                kind = MS31
            else:
                a, b = case.pair
                path = case.path
                if f1.rooted:
                    lca = f1.rooted_lca(path[0], path[-1])
                    ep = f1.offpath_edges(path, exclude=lca)
                    extra = ep[:1]
                else:
                    ep = f1.offpath_edges(path)
                    extra = ep[:2]
                kind = MS32
            removed_f1 = (f1.pendant_edge(a), f1.pendant_edge(b), *extra)
            removed_fi = (fi.pendant_edge(a), fi.pendant_edge(b))
            nf1 = f1.remove_edges(removed_f1)
            nfi = fi.remove_edges(removed_fi)
            trace.append(_record(kind, idx, f1, nf1, removed_f1, removed_fi))
            f1, fi = nf1, nfi
        f1 = f1.expand_labels()
    bound = max((rec.declared_ratio for rec in trace), default=1)
    return ApproxResult(forest=f1, trace=tuple(trace), ratio_bound=bound)


def approx_rmaf(instance: Instance) -> ApproxResult:
    """Ratio-3 agreement forest for a rooted instance."""
    if not instance.rooted:
        raise MafError("approx_rmaf needs a rooted instance")
    return _approximate(instance)


def approx_umaf(instance: Instance) -> ApproxResult:
    """Ratio-4 agreement forest for an unrooted instance."""
    if instance.rooted:
        raise MafError("approx_umaf needs an unrooted instance")
    return _approximate(instance)
