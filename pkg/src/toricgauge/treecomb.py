"""Combinatorial types of stable scaled affine gauged maps.

A type is a rooted tree.  The root carries the marking ``z_0``; every
vertex has a scaling state (zero, finite or infinite) and a degree label.
Reading from a leaf towards the root the states never decrease, and a
finite vertex is always followed by an infinite one, so the path from any
marking to the root crosses exactly one finite vertex.

Edges are named by their child vertex.  Vertex 0 is always the root.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Callable, NamedTuple, Optional, Sequence

from . import ratlin
from .errors import BudgetError, IllegalMergeError

DEFAULT_BUDGET = 200_000


def enumeration_budget() -> int:
    return int(os.environ.get("TORICGAUGE_ENUM_BUDGET", DEFAULT_BUDGET))


class Scaling(str, Enum):
    ZERO = "zero"
    FINITE = "finite"
    INFINITE = "infinite"


# (child state, parent state) pairs allowed along an edge
_EDGE_RULES = {
    (Scaling.ZERO, Scaling.ZERO),
    (Scaling.ZERO, Scaling.FINITE),
    (Scaling.FINITE, Scaling.INFINITE),
    (Scaling.INFINITE, Scaling.INFINITE),
}
_CHILD_STATES = {
    Scaling.ZERO: (Scaling.ZERO,),
    Scaling.FINITE: (Scaling.ZERO,),
    Scaling.INFINITE: (Scaling.FINITE, Scaling.INFINITE),
}


def _deg(x) -> tuple:
    if isinstance(x, (int, str, Fraction)):
        x = [x]
    return ratlin.qvec(x)


def _is_zero(d) -> bool:
    return all(x == 0 for x in d)


def _add(a, b) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def _sub(a, b) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


@dataclass(frozen=True)
class ColoredTree:
    scaling: tuple
    degree: tuple
    markings: tuple
    parent: tuple
    twist: Optional[tuple] = None

    def __post_init__(self):
        nv = len(self.scaling)
        if not (len(self.degree) == len(self.markings) == len(self.parent) == nv) or nv == 0:
            raise ValueError("per-vertex fields must have equal, nonzero length")
        twist = self.twist if self.twist is not None else (None,) * nv
        if len(twist) != nv:
            raise ValueError("twist needs one entry per vertex")
        object.__setattr__(self, "scaling", tuple(Scaling(s) for s in self.scaling))
        object.__setattr__(self, "degree", tuple(_deg(d) for d in self.degree))
        object.__setattr__(self, "markings", tuple(frozenset(int(i) for i in m) for m in self.markings))
        object.__setattr__(self, "parent", tuple(None if p is None else int(p) for p in self.parent))
        object.__setattr__(self, "twist", tuple(None if r is None else int(r) for r in twist))

    @property
    def nvertices(self) -> int:
        return len(self.scaling)

    @property
    def edges(self) -> list:
        return [v for v in range(self.nvertices) if self.parent[v] is not None]

    def children(self, v: int) -> list:
        return [c for c in range(self.nvertices) if self.parent[c] == v]

    def all_markings(self) -> list:
        return sorted(i for m in self.markings for i in m)

    def total_degree(self) -> tuple:
        out = tuple(Fraction(0) for _ in self.degree[0])
        for d in self.degree:
            out = _add(out, d)
        return out

    def special_points(self, v: int) -> int:
        """Markings, incident edges, plus ``z_0`` on the root."""
        return len(self.markings[v]) + len(self.children(v)) + 1

    def depth(self, v: int) -> int:
        k = 0
        while self.parent[v] is not None:
            v = self.parent[v]
            k += 1
        return k

    def subtree_degree(self, v: int) -> tuple:
        out = self.degree[v]
        for c in self.children(v):
            out = _add(out, self.subtree_degree(c))
        return out

    def canonical_form(self, v: int = 0) -> tuple:
        return (
            self.scaling[v].value,
            self.degree[v],
            tuple(sorted(self.markings[v])),
            self.twist[v] or 0,
            tuple(sorted(self.canonical_form(c) for c in self.children(v))),
        )

    def canonical(self) -> "ColoredTree":
        return from_canonical(self.canonical_form())

    def isomorphic(self, other: "ColoredTree") -> bool:
        return self.canonical_form() == other.canonical_form()


def from_canonical(form: tuple) -> ColoredTree:
    scaling, degree, markings, parent, twist = [], [], [], [], []

    def visit(node, par):
        idx = len(scaling)
        s, d, m, tw, kids = node
        scaling.append(s)
        degree.append(d)
        markings.append(m)
        parent.append(par)
        twist.append(tw or None)
        for kid in kids:
            visit(kid, idx)

    visit(form, None)
    return ColoredTree(tuple(scaling), tuple(degree), tuple(markings), tuple(parent), tuple(twist))


def single_vertex(n: int, d=0, scaling=Scaling.FINITE) -> ColoredTree:
    """The open stratum: one finite-scaled component carrying every marking."""
    return ColoredTree((scaling,), (_deg(d),), (frozenset(range(1, n + 1)),), (None,))


# ------------------------------------------------------------------ validity


class Validation(NamedTuple):
    ok: bool
    problems: list

    def __bool__(self):
        return self.ok


def structural_problems(
    t: ColoredTree,
    n: Optional[int] = None,
    is_effective: Optional[Callable] = None,
    twist_order: Optional[Callable] = None,
) -> list:
    """Everything except stability.

    ``twist_order(degree)`` returns the order of the sector reached by an
    affine piece of that degree; when given, twistings must divide it.
    """
    out = []
    nv = t.nvertices
    if t.parent[0] is not None:
        out.append("vertex 0 must be the root")
    for v in range(1, nv):
        seen = {v}
        p = t.parent[v]
        while p is not None:
            if not 0 <= p < nv or p in seen:
                out.append(f"vertex {v} does not reach the root")
                return out
            seen.add(p)
            p = t.parent[p]
        if len(t.degree[v]) != len(t.degree[0]):
            out.append(f"vertex {v} degree has the wrong length")
    marks = t.all_markings()
    n = len(marks) if n is None else n
    if marks != list(range(1, n + 1)):
        out.append(f"markings {marks} are not exactly 1..{n}")
    if t.scaling[0] is Scaling.ZERO:
        out.append("root has zero scaling")
    if Scaling.FINITE not in t.scaling:
        out.append("no component with finite scaling")
    for v in range(nv):
        s = t.scaling[v]
        if s is Scaling.INFINITE and t.markings[v]:
            out.append(f"vertex {v} has infinite scaling but carries markings")
        if s is Scaling.ZERO and not _is_zero(t.degree[v]):
            out.append(f"vertex {v} has zero scaling but nonzero degree")
        p = t.parent[v]
        if p is not None and (s, t.scaling[p]) not in _EDGE_RULES:
            out.append(f"edge {v}->{p} violates monotonicity ({s.value} under {t.scaling[p].value})")
        if is_effective is not None and s is not Scaling.ZERO and not is_effective(t.degree[v]):
            out.append(f"vertex {v} degree is not effective")
        tw = t.twist[v]
        if tw is not None:
            if p is None or not (s is Scaling.FINITE and t.scaling[p] is Scaling.INFINITE):
                out.append(f"twisting on vertex {v} is not on a finite-infinite node")
            elif tw < 1:
                out.append(f"twisting on vertex {v} must be positive")
            elif twist_order is not None and twist_order(t.subtree_degree(v)) % tw:
                out.append(f"twisting {tw} at vertex {v} does not divide the sector order")
    return out


def stability_problems(t: ColoredTree) -> list:
    out = []
    for v in range(t.nvertices):
        if not _is_zero(t.degree[v]):
            continue
        need = 2 if t.scaling[v] is Scaling.FINITE else 3
        have = t.special_points(v)
        if have < need:
            out.append(f"vertex {v} ({t.scaling[v].value}, degree 0) has {have} special points, needs {need}")
    return out


def validate(t: ColoredTree, n: Optional[int] = None, is_effective=None, twist_order=None) -> Validation:
    problems = structural_problems(t, n, is_effective, twist_order)
    if not problems:
        problems = stability_problems(t)
    return Validation(not problems, problems)


def affine_effectivity(ws) -> Callable:
    """Effectivity predicate backed by affine-report validity."""
    from .quasimap import affine_report

    return lambda d: affine_report(ws, d, strict=False).valid


def sector_order(d) -> int:
    from .inertia import TorsionElement

    return TorsionElement.from_vector(d).order


def codimension(t: ColoredTree) -> int:
    """Codimension of the stratum of scaled affine curves of this type.

    The nodes joining finite components to the infinite part share a single
    gluing parameter, hence the correction by the finite-vertex count.
    """
    nfinite = sum(s is Scaling.FINITE for s in t.scaling)
    return len(t.edges) - (nfinite - 1)


# ------------------------------------------------------------ tree surgery


class _Node:
    __slots__ = ("scaling", "degree", "markings", "twist", "children")

    def __init__(self, scaling, degree, markings, twist):
        self.scaling = scaling
        self.degree = degree
        self.markings = set(markings)
        self.twist = twist
        self.children = []

    def form(self):
        return (
            self.scaling.value,
            self.degree,
            tuple(sorted(self.markings)),
            self.twist or 0,
            tuple(sorted(c.form() for c in self.children)),
        )


def _to_nodes(t: ColoredTree, root: int = 0) -> _Node:
    nodes = [_Node(t.scaling[v], t.degree[v], t.markings[v], t.twist[v]) for v in range(t.nvertices)]
    for v in range(t.nvertices):
        p = t.parent[v]
        if p is not None:
            nodes[p].children.append(nodes[v])
    return nodes[root]


def _from_nodes(root: _Node) -> ColoredTree:
    return from_canonical(root.form())


def _merge_state(child: Scaling, parent: Scaling, parent_has_other_children: bool) -> Scaling:
    if child is parent and child is not Scaling.FINITE:
        return child
    if child is Scaling.ZERO and parent is Scaling.FINITE:
        return Scaling.FINITE
    if child is Scaling.FINITE and parent is Scaling.INFINITE and not parent_has_other_children:
        return Scaling.FINITE
    raise IllegalMergeError(f"cannot collapse a {child.value} vertex into a {parent.value} vertex")


def collapse_edge(t: ColoredTree, e: int) -> ColoredTree:
    """Contract the edge from vertex ``e`` to its parent; degrees add."""
    p = t.parent[e]
    if p is None:
        raise ValueError("the root has no parent edge")
    state = _merge_state(t.scaling[e], t.scaling[p], len(t.children(p)) > 1)
    root = _to_nodes(t)
    nodes = _index_nodes(t, root)
    child, par = nodes[e], nodes[p]
    par.children.remove(child)
    par.children.extend(child.children)
    par.markings |= child.markings
    par.degree = _add(par.degree, child.degree)
    if state is not par.scaling:
        par.twist = None
    par.scaling = state
    return _from_nodes(root)


def _index_nodes(t: ColoredTree, root: _Node) -> list:
    """Nodes in the vertex order of ``t`` (``_to_nodes`` preserves child order)."""
    out = [None] * t.nvertices
    stack = [(0, root)]
    while stack:
        v, node = stack.pop()
        out[v] = node
        for c, cn in zip(t.children(v), node.children):
            stack.append((c, cn))
    return out


class Cut(NamedTuple):
    upper: ColoredTree
    lower: ColoredTree
    label: int  # marking left at the cut point on the upper piece
    twist: Optional[int]


def cut_edge(t: ColoredTree, e: int) -> Cut:
    """Split at edge ``e``; the lower piece's root marking is the cut point."""
    p = t.parent[e]
    if p is None:
        raise ValueError("the root has no parent edge")
    label = max(t.all_markings(), default=0) + 1
    root = _to_nodes(t)
    nodes = _index_nodes(t, root)
    lower = nodes[e]
    nodes[p].children.remove(lower)
    nodes[p].markings.add(label)
    tw = lower.twist
    lower.twist = None
    return Cut(_from_nodes(root), _from_nodes(lower), label, tw)


def glue(upper: ColoredTree, lower: ColoredTree, label: int, twist: Optional[int] = None) -> ColoredTree:
    """Inverse of :func:`cut_edge`."""
    root = _to_nodes(upper)
    nodes = _index_nodes(upper, root)
    host = next((nodes[v] for v in range(upper.nvertices) if label in upper.markings[v]), None)
    if host is None:
        raise ValueError(f"marking {label} not found on the upper piece")
    host.markings.discard(label)
    sub = _to_nodes(lower)
    sub.twist = twist
    host.children.append(sub)
    return _from_nodes(root)


def stabilize(t: ColoredTree) -> ColoredTree:
    """Collapse unstable degree-zero components, deepest first, until stable.

    Removing a component can destabilize its neighbour towards the root,
    which is then handled on a later pass of the loop.
    """
    if structural_problems(t, n=len(t.all_markings())):
        raise ValueError("stabilize needs a structurally valid tree")
    root = _to_nodes(t)
    while True:
        bad = _deepest_unstable(root)
        if bad is None:
            out = _from_nodes(root)
            if Scaling.FINITE not in out.scaling:
                raise ValueError("tree has no stable model: every finite component was unstable")
            return out
        node, par = bad
        if par is None:
            root = _stabilize_root(node)
            continue
        par.children.remove(node)
        if node.scaling is Scaling.ZERO or len(node.children) + len(node.markings) == 0:
            # zero bubble: contract into the parent (zero or finite)
            # any other degree-zero leaf with nothing on it just disappears
            par.markings |= node.markings
            par.children.extend(node.children)
        else:
            # infinite component with one child: contract the chain
            par.children.extend(node.children)


def _unstable(node: _Node, is_root: bool) -> bool:
    if not _is_zero(node.degree):
        return False
    need = 2 if node.scaling is Scaling.FINITE else 3
    return len(node.markings) + len(node.children) + 1 < need


def _deepest_unstable(root: _Node):
    best = None
    stack = [(root, None, 0)]
    while stack:
        node, par, depth = stack.pop()
        if _unstable(node, par is None):
            key = (depth, node.form())
            if best is None or key > best[0]:
                best = (key, node, par)
        for c in node.children:
            stack.append((c, node, depth + 1))
    return None if best is None else (best[1], best[2])


def _stabilize_root(node: _Node) -> _Node:
    # an unstable root has only z_0 and at most one child
    if node.markings or len(node.children) != 1:
        raise ValueError("tree has no stable model")
    child = node.children[0]
    if child.scaling is Scaling.ZERO:
        raise ValueError("tree has no stable model")
    child.twist = None
    return child


def forget_tail(t: ColoredTree, i: int) -> ColoredTree:
    """Drop marking ``i``, shift higher labels down by one, stabilize."""
    if i not in t.all_markings():
        raise ValueError(f"marking {i} not present")
    marks = tuple(frozenset(j - (j > i) for j in m if j != i) for m in t.markings)
    return stabilize(ColoredTree(t.scaling, t.degree, marks, t.parent, t.twist))


# --------------------------------------------------------------- enumeration


def _set_partitions(items: tuple):
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield ((first,),) + part
        for j in range(len(part)):
            yield part[:j] + ((first,) + part[j],) + part[j + 1:]


def _subsets(items: tuple):
    for size in range(len(items) + 1):
        yield from combinations(items, size)


class _DegreeBook:
    """Effective degrees together with a grading that bounds enumeration."""

    def __init__(self, effective_degrees, total):
        eff = {_deg(d) for d in effective_degrees}
        if not eff:
            raise ValueError("need at least one effective degree")
        r = len(next(iter(eff)))
        self.zero = tuple(Fraction(0) for _ in range(r))
        self.total = self.zero if total is None else _deg(total)
        if len(self.total) != r or any(len(d) != r for d in eff):
            raise ValueError("degrees of mixed length")
        eff.add(self.zero)
        self.effective = sorted(eff)
        nonzero = [d for d in self.effective if d != self.zero]
        self.eta = None
        self.delta = None
        if nonzero:
            eta = ratlin.open_halfspace_witness(nonzero, r)
            if eta is None:
                raise ValueError("effective degrees must lie in an open half-space")
            self.eta = eta
            self.delta = min(ratlin.dot(eta, d) for d in nonzero)
        self.reachable = self._reachable()

    def grade(self, d) -> Fraction:
        return Fraction(0) if self.eta is None else ratlin.dot(self.eta, d)

    def _reachable(self) -> set:
        cap = self.grade(self.total)
        out = {self.zero}
        frontier = [self.zero]
        while frontier:
            nxt = []
            for s in frontier:
                for d in self.effective:
                    if d == self.zero:
                        continue
                    u = _add(s, d)
                    if self.grade(u) <= cap and u not in out:
                        out.add(u)
                        nxt.append(u)
            frontier = nxt
        return out

    def splits(self, rem, parts: int, nonzero_from: int):
        """Ordered ways to write ``rem`` as ``parts`` reachable summands.

        Summands at positions ``>= nonzero_from`` must be nonzero.
        """
        if parts == 0:
            if rem == self.zero:
                yield ()
            return
        for d in sorted(self.reachable):
            if parts - 1 >= nonzero_from and d == self.zero:
                continue
            left = _sub(rem, d)
            if left not in self.reachable:
                continue
            for tail in self.splits(left, parts - 1, nonzero_from):
                yield tail + (d,)


def enumerate_types(n: int, effective_degrees=((0,),), total=None, budget: Optional[int] = None) -> list:
    """All stable types with markings ``1..n`` and degree labels summing to ``total``.

    Labels come from ``effective_degrees`` (zero is always allowed); zero
    components carry degree zero.  Results are canonical and sorted.
    """
    book = _DegreeBook(effective_degrees, total)
    budget = enumeration_budget() if budget is None else budget
    produced = [0]

    @lru_cache(maxsize=None)
    def gen(state: Scaling, marks: frozenset, D: tuple) -> tuple:
        if state is Scaling.ZERO and D != book.zero:
            return ()
        out = set()
        dvs = [book.zero] if state is Scaling.ZERO else [
            d for d in book.effective if _sub(D, d) in book.reachable
        ]
        mark_sets = [()] if state is Scaling.INFINITE else list(_subsets(tuple(sorted(marks))))
        for dv in dvs:
            rem = _sub(D, dv)
            need = 0 if dv != book.zero else (2 if state is Scaling.FINITE else 3)
            qmax = 0
            if state is Scaling.INFINITE and book.delta:
                qmax = int(book.grade(rem) / book.delta)
            for mv in mark_sets:
                rest = tuple(sorted(marks - set(mv)))
                for blocks in _set_partitions(rest):
                    for q in range(qmax + 1):
                        if len(mv) + 1 + len(blocks) + q < need:
                            continue
                        for split in book.splits(rem, len(blocks) + q, len(blocks)):
                            if q > 1 and list(split[len(blocks):]) != sorted(split[len(blocks):]):
                                continue
                            options = []
                            for j, Dc in enumerate(split):
                                block = frozenset(blocks[j]) if j < len(blocks) else frozenset()
                                opts = []
                                for cs in _CHILD_STATES[state]:
                                    opts.extend(gen(cs, block, Dc))
                                if not opts:
                                    break
                                options.append(opts)
                            else:
                                for kids in product(*options):
                                    out.add((state.value, dv, tuple(mv), 0, tuple(sorted(kids))))
                                    if len(out) + produced[0] > budget:
                                        raise BudgetError(f"type enumeration exceeded budget {budget}")
        produced[0] += len(out)
        return tuple(sorted(out))

    marks = frozenset(range(1, n + 1))
    forms = set(gen(Scaling.FINITE, marks, book.total)) | set(gen(Scaling.INFINITE, marks, book.total))
    trees = [from_canonical(f) for f in sorted(forms)]
    return [t for t in trees if validate(t, n)]


@dataclass(frozen=True)
class Splitting:
    """Infinite-scaling boundary piece: a map to the quotient plus ``r`` affine pieces."""

    r: int
    parts: tuple  # tuple of sorted marking tuples, nonempty parts first by min element
    degree_split: tuple  # (d_0, (d_1, ..., d_r)) aligned with parts


def infinite_splittings(n: int, total=None, effective_degrees=((0,),), budget: Optional[int] = None) -> list:
    book = _DegreeBook(effective_degrees, total)
    budget = enumeration_budget() if budget is None else budget
    out = set()
    qmax = int(book.grade(book.total) / book.delta) if book.delta else 0
    for blocks in _set_partitions(tuple(range(1, n + 1))):
        blocks = sorted(blocks)
        for q in range(qmax + 1):
            r = len(blocks) + q
            if r == 0:
                continue
            for d0 in book.effective:
                rem = _sub(book.total, d0)
                if rem not in book.reachable:
                    continue
                for split in book.splits(rem, r, len(blocks)):
                    pieces = [(blk, split[j]) for j, blk in enumerate(blocks)]
                    empties = sorted(split[len(blocks):])
                    pieces += [((), d) for d in empties]
                    out.add((r, tuple(p for p, _ in pieces), (d0, tuple(d for _, d in pieces))))
                    if len(out) > budget:
                        raise BudgetError(f"splitting enumeration exceeded budget {budget}")
    return [Splitting(*s) for s in sorted(out, key=lambda s: (s[0], s[1], s[2]))]
