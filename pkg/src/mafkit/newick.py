"""Newick parsing and serialization for multifurcating trees and forests.

Instance files are UTF-8 text with one ';'-terminated Newick tree per line;
'#'-prefixed lines are comments.  Labels are alphanumeric plus '_' and '.';
branch lengths are parsed and discarded with a warning; quoted labels and
internal node labels are not supported.

Rooted instances use the reserved root label "ρ".  User trees normally do not
contain it: a fresh ρ leaf is attached above the Newick root and becomes the
root of the tree.  A ρ leaf appearing as a direct child of the outermost node
is also accepted (that is how this package serializes rooted trees), in which
case the tree is re-rooted at it; ρ anywhere else is an error.
"""

from __future__ import annotations

import warnings

from .forest import RHO, Forest, Instance, LabelTable, MafError


class NewickError(MafError):
    """Syntax or validation error in Newick input."""

    def __init__(self, message, line=None, col=None):
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", col {col}" if col is not None else "") + ")"
        super().__init__(message + where)
        self.line = line
        self.col = col


class NewickWarning(UserWarning):
    """Non-fatal input oddity, e.g. discarded branch lengths."""


def _is_label_char(ch):
    return ch.isalnum() or ch in "._"


class _LineParser:
    def __init__(self, text, line_no):
        self.s = text
        self.i = 0
        self.line = line_no
        self.saw_lengths = False

    def error(self, msg):
        raise NewickError(msg, self.line, self.i + 1)

    def _ws(self):
        while self.i < len(self.s) and self.s[self.i].isspace():
            self.i += 1

    def _peek(self):
        self._ws()
        return self.s[self.i] if self.i < len(self.s) else ""

    def _label(self):
        self._ws()
        j = self.i
        while j < len(self.s) and _is_label_char(self.s[j]):
            j += 1
        name = self.s[self.i : j]
        self.i = j
        return name

    def _branch_length(self):
        if self._peek() == ":":
            self.i += 1
            self._ws()
            j = self.i
            while j < len(self.s) and (self.s[j].isdigit() or self.s[j] in ".eE+-"):
                j += 1
            if j == self.i:
                self.error("expected a number after ':'")
            try:
                float(self.s[self.i : j])
            except ValueError:
                self.error(f"bad branch length {self.s[self.i:j]!r}")
            self.i = j
            self.saw_lengths = True

    def subtree(self):
        ch = self._peek()
        if ch == "(":
            self.i += 1
            children = [self.subtree()]
            while True:
                ch = self._peek()
                if ch == ",":
                    self.i += 1
                    children.append(self.subtree())
                elif ch == ")":
                    self.i += 1
                    break
                else:
                    self.error("expected ',' or ')'")
            if len(children) < 2:
                self.error("internal node needs at least two children")
            if self._peek() and _is_label_char(self._peek()):
                self.error("internal node labels are not supported")
            self._branch_length()
            return ("node", children)
        name = self._label()
        if not name:
            self.error("expected a label or '('")
        self._branch_length()
        return ("leaf", name)

    def tree(self):
        t = self.subtree()
        if self._peek() != ";":
            self.error("expected ';'")
        self.i += 1
        if self._peek():
            self.error("trailing text after ';'")
        return t


def _leaf_names(node, out):
    if node[0] == "leaf":
        out.append(node[1])
    else:
        for ch in node[1]:
            _leaf_names(ch, out)
    return out


def _tree_to_forest(node, rooted, table: LabelTable, line_no) -> Forest:
    counter = [0]
    leaf_labels = {}
    edges = []

    def fresh():
        counter[0] += 1
        return counter[0] - 1

    def build(nd):
        v = fresh()
        if nd[0] == "leaf":
            leaf_labels[v] = table.id_of(nd[1])
        else:
            for ch in nd[1]:
                w = build(ch)
                edges.append((v, w))
        return v

    if rooted:
        top_children = node[1] if node[0] == "node" else []
        rho_children = [ch for ch in top_children if ch == ("leaf", RHO)]
        if rho_children:
            rest = [ch for ch in top_children if ch != ("leaf", RHO)]
            inner = ("node", rest) if len(rest) > 1 else rest[0]
            rho_v = fresh()
            leaf_labels[rho_v] = table.id_of(RHO)
            edges.append((rho_v, build(inner)))
        else:
            root_v = fresh()
            leaf_labels[root_v] = table.id_of(RHO)
            edges.append((root_v, build(node)))
    else:
        build(node)
    try:
        return Forest.build(rooted, table, leaf_labels, edges)
    except MafError as exc:
        raise NewickError(str(exc), line_no) from exc


def parse_instance(text: str, rooted: bool, name: str = "") -> Instance:
    """Parse a multi-line Newick instance file into an :class:`Instance`.

    Every tree must cover the same leaf-label set.  In rooted mode the root
    leaf ρ is attached (or validated, see module docstring) per tree.
    """
    parsed = []
    saw_lengths = False
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        p = _LineParser(line, line_no)
        tree = p.tree()
        saw_lengths = saw_lengths or p.saw_lengths
        names = _leaf_names(tree, [])
        dup = {n for n in names if names.count(n) > 1}
        if dup:
            raise NewickError(f"duplicate leaf label {sorted(dup)[0]!r}", line_no)
        rho_count = names.count(RHO)
        if rho_count:
            if not rooted:
                raise NewickError(f"label {RHO!r} is reserved", line_no)
            top = tree[1] if tree[0] == "node" else []
            if rho_count > 1 or ("leaf", RHO) not in top:
                raise NewickError(
                    f"{RHO!r} may only appear once, as a child of the outermost node",
                    line_no,
                )
        parsed.append((line_no, tree, frozenset(names) - {RHO}))
    if not parsed:
        raise NewickError("no trees in input")
    if saw_lengths:
        warnings.warn("branch lengths were parsed and discarded", NewickWarning)

    taxa = parsed[0][2]
    for line_no, _, names in parsed[1:]:
        if names != taxa:
            missing = sorted(taxa ^ names)
            raise NewickError(
                f"leaf label set differs from the first tree (e.g. {missing[0]!r})",
                line_no,
            )
    ordered = sorted(taxa)
    if rooted:
        ordered.append(RHO)
    table = LabelTable.from_names(ordered)
    forests = tuple(
        _tree_to_forest(tree, rooted, table, line_no) for line_no, tree, _ in parsed
    )
    return Instance(rooted=rooted, forests=forests, name=name)


# ---------------------------------------------------------------------------
# serialization


def _subtree_text(f: Forest, v, in_edge, mins):
    lid = f.label_of(v)
    if lid is not None:
        return f.labels.name(lid)
    parts = sorted(
        ((e, w) for e, w in f.neighbors(v) if e != in_edge),
        key=lambda ew: mins[ew[1]],
    )
    return "(" + ",".join(_subtree_text(f, w, e, mins) for e, w in parts) + ")"


def _subtree_mins(f: Forest, v, in_edge, mins):
    """Smallest contained original label id of the subtree hanging at v."""
    lid = f.label_of(v)
    best = f.labels.min_original(lid) if lid is not None else None
    for e, w in f.neighbors(v):
        if e != in_edge:
            sub = _subtree_mins(f, w, e, mins)
            best = sub if best is None else min(best, sub)
    mins[v] = best
    return best


def _component_text(f: Forest, idx) -> str:
    comp = f.components()[idx]
    if len(comp) == 1:
        (v,) = comp
        return f.labels.name(f.label_of(v))
    if f.rooted:
        root = f.component_root(idx)
        lid = f.label_of(root)
        if lid is not None and f.labels.name(lid) == RHO:
            # draw from ρ's child so ρ prints as an ordinary leaf
            eid = next(e for e, _ in f.neighbors(root))
            child = dict(f.neighbors(root))[eid]
            mins: dict[int, int] = {}
            _subtree_mins(f, child, None, mins)
            if f.label_of(child) is not None:
                inner = [f.labels.name(f.label_of(child))]
            else:
                kids = sorted(
                    ((e, w) for e, w in f.neighbors(child) if e != eid),
                    key=lambda ew: mins[ew[1]],
                )
                inner = [_subtree_text(f, w, e, mins) for e, w in kids]
            return "(" + ",".join(inner + [RHO]) + ")"
        mins = {}
        _subtree_mins(f, root, None, mins)
        return _subtree_text(f, root, None, mins)
    if len(comp) == 2:
        names = sorted(f.labels.name(f.label_of(v)) for v in comp)
        return "(" + ",".join(names) + ")"
    anchor = min(
        (v for v in comp if f.label_of(v) is not None),
        key=lambda v: f.labels.min_original(f.label_of(v)),
    )
    hub = next(w for _, w in f.neighbors(anchor))
    mins = {}
    _subtree_mins(f, hub, None, mins)
    kids = sorted(f.neighbors(hub), key=lambda ew: mins[ew[1]])
    return "(" + ",".join(_subtree_text(f, w, e, mins) for e, w in kids) + ")"


def serialize(f: Forest) -> str:
    """Canonical Newick text, one ';'-terminated line per component.

    Children are ordered by the smallest original label id they contain;
    rooted components print from their root, with ρ emitted as a leaf of the
    outermost node.  ``parse_instance(serialize(tree))`` round-trips for
    single-tree forests.
    """
    idxs = sorted(
        range(f.order()),
        key=lambda i: min(f.labels.min_original(l) for l in f.component_labels(i)),
    )
    return "\n".join(_component_text(f, i) + ";" for i in idxs)


def format_instance(instance: Instance, header: str = "") -> str:
    """Instance file text: optional '#' header comment plus one tree per line."""
    lines = []
    if header:
        lines.append("# " + header)
    for f in instance.forests:
        if f.order() != 1:
            raise MafError("instance files hold trees, not multi-component forests")
        lines.append(serialize(f))
    return "\n".join(lines) + "\n"
