"""Escalator trees for sums of generalized m-gonal numbers.

The root is the empty form, whose truant (smallest unrepresented positive
integer) is 1.  A node with truant t and last coefficient a_n has one child
per coefficient a_{n+1} in [a_n, t] for which the extended form represents
t; children of any form that misses t would still miss it for coefficients
above t, which is why the range is capped at the truant.  The maximum
truant over a fully built tree is the empirical gamma-value for m: every
universal form's coefficients dominate some path, so every truant is a
certificate that universal forms must represent it.

Trees are bounded twice over: representation testing is relative to a bound
B (so "universal" leaves are B-universal, an empirical flag), and expansion
stops at max_depth.  A tree is *complete* when every unexpanded node is
B-universal; only then is the gamma estimate an empirical value rather than
a lower bound.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field

from .errors import ResourceCapError, TreeParseError
from .polygonal import (
    DEFAULT_BOUND,
    PolygonalForm,
    RepresentationSet,
    extend_set,
    represented_set,
)

DEFAULT_NODE_CAP = 10**6
_UNIVERSAL = "universal"


@dataclass
class EscalatorNode:
    form: PolygonalForm
    truant: int | None  # None = B-universal
    depth: int
    children: list["EscalatorNode"] = field(default_factory=list)

    @property
    def universal(self) -> bool:
        return self.truant is None


@dataclass
class EscalatorTree:
    m: int
    bound: int
    max_depth: int
    root: EscalatorNode
    nodes: list[EscalatorNode]  # breadth-first order
    node_count: int
    gamma_estimate: int
    complete: bool


def escalate(node: EscalatorNode, bound: int) -> list[PolygonalForm]:
    """All one-coefficient extensions of node's form that represent its truant.

    Candidate coefficients run from the last coefficient (or 1 for the empty
    form) up to the truant, in ascending order.
    """
    if node.truant is None:
        raise ValueError("cannot escalate a universal node (no truant)")
    rep = represented_set(node.form, bound)
    lo = node.form.coeffs[-1] if node.form.coeffs else 1
    out = []
    for k in range(lo, node.truant + 1):
        if node.truant in extend_set(rep, node.form.m, k):
            out.append(node.form.extend(k))
    return out


def build_tree(
    m: int,
    max_depth: int = 4,
    bound: int = DEFAULT_BOUND,
    *,
    node_cap: int = DEFAULT_NODE_CAP,
    on_cap: str = "error",
) -> EscalatorTree:
    """Breadth-first escalator tree down to max_depth.

    Children are generated in ascending coefficient order, so the node list
    is deterministic.  When the node cap is hit, on_cap="error" raises
    ResourceCapError while on_cap="truncate" stops expanding and returns the
    (incomplete) partial tree.
    """
    if max_depth < 0:
        raise ValueError("max_depth must be nonnegative")
    if on_cap not in ("error", "truncate"):
        raise ValueError(f"on_cap must be 'error' or 'truncate', got {on_cap!r}")
    root_form = PolygonalForm(m, ())
    root_rep = represented_set(root_form, bound)
    root = EscalatorNode(root_form, root_rep.truant(), 0)
    nodes = [root]
    queue: deque[tuple[EscalatorNode, RepresentationSet]] = deque([(root, root_rep)])
    capped = False
    while queue:
        node, rep = queue.popleft()
        if capped or node.truant is None or node.depth >= max_depth:
            continue
        t = node.truant
        lo = node.form.coeffs[-1] if node.form.coeffs else 1
        for k in range(lo, t + 1):
            child_rep = extend_set(rep, m, k)
            if t not in child_rep:
                continue
            if len(nodes) >= node_cap:
                if on_cap == "error":
                    raise ResourceCapError(
                        f"escalator tree for m={m} exceeded node cap {node_cap}"
                    )
                capped = True
                break
            child = EscalatorNode(node.form.extend(k), child_rep.truant(), node.depth + 1)
            node.children.append(child)
            nodes.append(child)
            queue.append((child, child_rep))
    gamma = max(n.truant for n in nodes if n.truant is not None)
    complete = all(n.truant is None or n.children for n in nodes)
    return EscalatorTree(m, bound, max_depth, root, nodes, len(nodes), gamma, complete)


def gamma_estimate(tree: EscalatorTree) -> int:
    """Largest truant over the tree.

    An empirical gamma value when the tree is complete; otherwise only a
    lower bound for it.
    """
    return tree.gamma_estimate


def min_leaf_depth(tree: EscalatorTree) -> int | None:
    """Depth of the shallowest B-universal node, or None if there is none."""
    depths = [n.depth for n in tree.nodes if n.truant is None]
    return min(depths) if depths else None


def serialize_tree(tree: EscalatorTree) -> str:
    """Deterministic JSON document for a tree.

    Nodes are sorted lexicographically by coefficient vector and children
    are stored as indices into that flat array, so serialization is a pure
    function of the tree's content.
    """
    order = sorted(range(len(tree.nodes)), key=lambda i: tree.nodes[i].form.coeffs)
    position = {id(tree.nodes[i]): pos for pos, i in enumerate(order)}
    doc_nodes = []
    for i in order:
        node = tree.nodes[i]
        doc_nodes.append(
            {
                "coeffs": list(node.form.coeffs),
                "truant": _UNIVERSAL if node.truant is None else node.truant,
                "children": sorted(position[id(ch)] for ch in node.children),
            }
        )
    doc = {
        "m": tree.m,
        "bound": tree.bound,
        "max_depth": tree.max_depth,
        "nodes": doc_nodes,
    }
    return json.dumps(doc, separators=(",", ":"))


def _parse_error(path: str, why: str) -> TreeParseError:
    return TreeParseError(f"{path}: {why}")


def _require_int(value, path: str, minimum: int) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or value < minimum:
        raise _parse_error(path, f"expected an integer >= {minimum}, got {value!r}")
    return value


def deserialize_tree(text: str) -> EscalatorTree:
    """Parse a tree document produced by serialize_tree.

    Validation is structural (field types, sorted canonical node order,
    parent/child coefficient linkage, reachability); semantic facts such as
    truant correctness are the builder's job, not the parser's.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise _parse_error("document", f"invalid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise _parse_error("document", "expected a JSON object")
    expected = {"m", "bound", "max_depth", "nodes"}
    if set(doc) != expected:
        raise _parse_error(
            "document", f"expected exactly keys {sorted(expected)}, got {sorted(doc)}"
        )
    m = _require_int(doc["m"], "m", 3)
    bound = _require_int(doc["bound"], "bound", 1)
    max_depth = _require_int(doc["max_depth"], "max_depth", 0)
    raw_nodes = doc["nodes"]
    if not isinstance(raw_nodes, list) or not raw_nodes:
        raise _parse_error("nodes", "expected a nonempty array")

    parsed: list[EscalatorNode] = []
    child_indices: list[list[int]] = []
    prev_coeffs: tuple[int, ...] | None = None
    for idx, raw in enumerate(raw_nodes):
        path = f"nodes[{idx}]"
        if not isinstance(raw, dict) or set(raw) != {"coeffs", "truant", "children"}:
            raise _parse_error(path, "expected keys ['children', 'coeffs', 'truant']")
        raw_coeffs = raw["coeffs"]
        if not isinstance(raw_coeffs, list):
            raise _parse_error(f"{path}.coeffs", "expected an array")
        coeffs = tuple(
            _require_int(a, f"{path}.coeffs[{j}]", 1) for j, a in enumerate(raw_coeffs)
        )
        if any(a > b for a, b in zip(coeffs, coeffs[1:])):
            raise _parse_error(f"{path}.coeffs", "coefficients must be sorted ascending")
        if len(coeffs) > max_depth:
            raise _parse_error(f"{path}.coeffs", "node deeper than max_depth")
        if prev_coeffs is not None and coeffs <= prev_coeffs:
            raise _parse_error(
                f"{path}.coeffs", "nodes must be strictly sorted lexicographically"
            )
        prev_coeffs = coeffs
        raw_truant = raw["truant"]
        if raw_truant == _UNIVERSAL:
            node_truant: int | None = None
        else:
            node_truant = _require_int(raw_truant, f"{path}.truant", 1)
        raw_children = raw["children"]
        if not isinstance(raw_children, list):
            raise _parse_error(f"{path}.children", "expected an array")
        kids = [
            _require_int(k, f"{path}.children[{j}]", 0)
            for j, k in enumerate(raw_children)
        ]
        if node_truant is None and kids:
            raise _parse_error(f"{path}.children", "universal nodes have no children")
        parsed.append(EscalatorNode(PolygonalForm(m, coeffs), node_truant, len(coeffs)))
        child_indices.append(kids)

    for idx, kids in enumerate(child_indices):
        parent = parsed[idx]
        for j, k in enumerate(kids):
            path = f"nodes[{idx}].children[{j}]"
            if k >= len(parsed):
                raise _parse_error(path, "index out of range")
            child = parsed[k]
            if child.form.coeffs[:-1] != parent.form.coeffs:
                raise _parse_error(path, "child does not extend parent by one coefficient")
            last = child.form.coeffs[-1]
            floor = parent.form.coeffs[-1] if parent.form.coeffs else 1
            if parent.truant is None or not (floor <= last <= parent.truant):
                raise _parse_error(path, "child coefficient outside the escalation range")
            parent.children.append(child)

    roots = [n for n in parsed if not n.form.coeffs]
    if len(roots) != 1:
        raise _parse_error("nodes", "expected exactly one root (empty coefficient list)")
    root = roots[0]
    bfs: list[EscalatorNode] = []
    queue = deque([root])
    while queue:
        node = queue.popleft()
        bfs.append(node)
        queue.extend(node.children)
    if len(bfs) != len(parsed):
        raise _parse_error("nodes", "some nodes are unreachable from the root")
    gamma = max(n.truant for n in bfs if n.truant is not None)
    complete = all(n.truant is None or n.children for n in bfs)
    return EscalatorTree(m, bound, max_depth, root, bfs, len(bfs), gamma, complete)
