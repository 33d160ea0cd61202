"""Coxeter systems: matrix files, the word problem, finite parabolic subgroups.

Generators are stored as indices ``0..n-1`` in the order declared by the
input file; that order drives the ShortLex tie-break and is echoed in every
report.  Words are tuples of indices.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from functools import total_ordering
from itertools import combinations

from .config import DEFAULT_MEMO_CAP
from .errors import InvalidMatrix, NotSpherical, ParseError, ResourceLimit

INF = math.inf


@total_ordering
@dataclass(frozen=True)
class Element:
    """A group element, represented by its ShortLex normal form."""

    normal_form: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.normal_form)

    @property
    def sort_key(self):
        return (len(self.normal_form), self.normal_form)

    def __lt__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.sort_key < other.sort_key

    def __repr__(self):
        return f"Element({self.normal_form!r})"


IDENTITY = Element(())


class CoxeterSystem:
    """A Coxeter system (W, S) given by its symmetric order matrix.

    Instances are logically immutable; the memo tables filled in by the word
    problem are caches only.
    """

    def __init__(self, names, orders, memo_cap: int = DEFAULT_MEMO_CAP):
        names = tuple(str(x) for x in names)
        n = len(names)
        if n < 1:
            raise InvalidMatrix("a Coxeter system needs at least one generator")
        if len(set(names)) != n:
            raise InvalidMatrix(f"duplicate generator names: {names}")
        rows = [tuple(_normalize_order(x) for x in row) for row in orders]
        if len(rows) != n or any(len(r) != n for r in rows):
            raise InvalidMatrix(f"order matrix must be {n}x{n}")
        for i in range(n):
            if rows[i][i] != 1:
                raise InvalidMatrix(f"diagonal entry ({i},{i}) must be 1, got {rows[i][i]}")
            for j in range(n):
                if i == j:
                    continue
                if rows[i][j] != rows[j][i]:
                    raise InvalidMatrix(
                        f"matrix not symmetric at ({i},{j}): {rows[i][j]} vs {rows[j][i]}"
                    )
                if rows[i][j] != INF and rows[i][j] < 2:
                    raise InvalidMatrix(f"off-diagonal entry ({i},{j}) must be >= 2 or inf")
        self.names = names
        self.orders = tuple(rows)
        self.rank = n
        self.memo_cap = memo_cap
        self._index = {name: i for i, name in enumerate(names)}
        self._alt = {}
        for i in range(n):
            for j in range(n):
                m = rows[i][j]
                if i != j and m != INF:
                    self._alt[i, j] = tuple(i if k % 2 == 0 else j for k in range(m))
        # reduced word -> normal form; normal form -> braid class
        self._nf: dict[tuple, tuple] = {(): ()}
        self._classes: dict[tuple, frozenset] = {(): frozenset({()})}
        self._descents: dict[tuple, frozenset] = {(): frozenset()}
        self._memo_entries = 1

    # -- basic queries -------------------------------------------------
    def m(self, i: int, j: int):
        return self.orders[i][j]

    def index(self, name) -> int:
        if isinstance(name, int):
            if not 0 <= name < self.rank:
                raise KeyError(name)
            return name
        return self._index[name]

    def subset(self, T) -> tuple[int, ...]:
        return tuple(sorted({self.index(t) for t in T}))

    @property
    def is_right_angled(self) -> bool:
        return all(
            self.orders[i][j] in (2, INF)
            for i in range(self.rank)
            for j in range(self.rank)
            if i != j
        )

    @property
    def is_even(self) -> bool:
        return all(
            self.orders[i][j] == INF or self.orders[i][j] % 2 == 0
            for i in range(self.rank)
            for j in range(self.rank)
            if i != j
        )

    def __eq__(self, other):
        return (
            isinstance(other, CoxeterSystem)
            and self.names == other.names
            and self.orders == other.orders
        )

    def __hash__(self):
        return hash((self.names, self.orders))

    def __repr__(self):
        return f"CoxeterSystem(names={self.names!r})"

    def restrict(self, T) -> "CoxeterSystem":
        """The standard parabolic subsystem on ``T`` (indices renumbered)."""
        T = self.subset(T)
        return CoxeterSystem(
            [self.names[i] for i in T],
            [[self.orders[i][j] for j in T] for i in T],
            memo_cap=self.memo_cap,
        )

    def word_str(self, w) -> str:
        word = w.normal_form if isinstance(w, Element) else w
        return ".".join(self.names[i] for i in word) if word else "e"

    def parse_word(self, text: str) -> tuple[int, ...]:
        text = text.strip()
        if text in ("", "e", "1"):
            return ()
        return tuple(self.index(tok) for tok in text.replace(".", " ").split())

    # -- word problem --------------------------------------------------
    def _explore(self, word):
        """Braid class of ``word``, or a shortened word if a deletion applies."""
        seen = {word}
        stack = [word]
        alt = self._alt
        orders = self.orders
        while stack:
            w = stack.pop()
            for i in range(len(w) - 1):
                a, b = w[i], w[i + 1]
                if a == b:
                    return None, w[:i] + w[i + 2:]
                m = orders[a][b]
                if m == INF or i + m > len(w):
                    continue
                if w[i:i + m] == alt[a, b]:
                    v = w[:i] + alt[b, a] + w[i + m:]
                    if v not in seen:
                        seen.add(v)
                        stack.append(v)
        return frozenset(seen), None

    def _reduce(self, word) -> tuple:
        nf = self._nf.get(word)
        if nf is not None:
            return nf
        while True:
            cls, shorter = self._explore(word)
            if shorter is None:
                break
            word = shorter
            nf = self._nf.get(word)
            if nf is not None:
                return nf
        nf = min(cls)
        self._memo_entries += len(cls)
        if self._memo_entries > self.memo_cap:
            raise ResourceLimit("memo_entries", self._memo_entries, self.memo_cap)
        for v in cls:
            self._nf[v] = nf
        self._classes[nf] = cls
        self._descents[nf] = frozenset(v[-1] for v in cls)
        return nf

    def _right_multiply(self, nf: tuple, s: int) -> tuple:
        if s in self._descents[nf]:
            for v in self._classes[nf]:
                if v[-1] == s:
                    return self._reduce(v[:-1])
        return self._reduce(nf + (s,))

    def element(self, word) -> Element:
        """Element represented by an arbitrary word (indices or names)."""
        nf = ()
        for letter in word:
            nf = self._right_multiply(nf, self.index(letter))
        return Element(nf)

    def right_descents(self, u: Element) -> frozenset:
        self._reduce(u.normal_form)
        return self._descents[u.normal_form]

    def reduced_words(self, u: Element) -> frozenset:
        self._reduce(u.normal_form)
        return self._classes[u.normal_form]

    def multiply_generator(self, u: Element, s: int) -> Element:
        return Element(self._right_multiply(u.normal_form, s))

    def multiply(self, u: Element, v: Element) -> Element:
        nf = u.normal_form
        for s in v.normal_form:
            nf = self._right_multiply(nf, s)
        return Element(nf)

    def inverse(self, u: Element) -> Element:
        return Element(self._reduce(u.normal_form[::-1]))

    def reflection(self, u: Element, s: int) -> Element:
        """The reflection ``u s u^-1``."""
        return self.element(u.normal_form + (s,) + u.normal_form[::-1])

    def conjugate(self, g: Element, x: Element) -> Element:
        """``g x g^-1``."""
        return self.element(g.normal_form + x.normal_form + g.normal_form[::-1])


def _normalize_order(x):
    if isinstance(x, str):
        x = x.strip().lower()
        if x in ("inf", "infinity", "∞"):
            return INF
        try:
            return int(x)
        except ValueError:
            raise ParseError(f"bad matrix entry {x!r}") from None
    if x == INF:
        return INF
    if isinstance(x, float) and not x.is_integer():
        raise InvalidMatrix(f"non-integral order {x}")
    if x == 0:
        raise InvalidMatrix("0 is not a valid order (use inf)")
    return int(x)


# -- matrix files --------------------------------------------------------

def _content_lines(text: str):
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            yield line


def parse_coxeter(text: str, memo_cap: int = DEFAULT_MEMO_CAP) -> CoxeterSystem:
    """Parse a Coxeter matrix file.

    Format: ``coxeter <n>``, then a line of generator names, then ``n`` rows
    of ``n`` entries (positive integers or ``inf``).  ``#`` starts a comment.
    """
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty Coxeter file")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "coxeter":
        raise ParseError(f"expected 'coxeter <n>', got {lines[0]!r}")
    try:
        n = int(head[1])
    except ValueError:
        raise ParseError(f"bad generator count {head[1]!r}") from None
    if n < 1:
        raise ParseError("generator count must be positive")
    if len(lines) != n + 2:
        raise ParseError(f"expected {n + 2} non-comment lines, got {len(lines)}")
    names = lines[1].split()
    if len(names) != n:
        raise ParseError(f"expected {n} generator names, got {len(names)}")
    rows = []
    for k, line in enumerate(lines[2:]):
        entries = line.split()
        if len(entries) != n:
            raise ParseError(f"matrix row {k} has {len(entries)} entries, expected {n}")
        rows.append([_parse_entry(e) for e in entries])
    return CoxeterSystem(names, rows, memo_cap=memo_cap)


def _parse_entry(token: str):
    if token.lower() == "inf":
        return INF
    try:
        value = int(token)
    except ValueError:
        raise ParseError(f"bad matrix entry {token!r}") from None
    if value < 1:
        raise InvalidMatrix(f"matrix entries must be positive, got {value}")
    return value


def format_coxeter(W: CoxeterSystem) -> str:
    out = [f"coxeter {W.rank}", " ".join(W.names)]
    for row in W.orders:
        out.append(" ".join("inf" if m == INF else str(m) for m in row))
    return "\n".join(out) + "\n"


def coxeter_from_edges(names, edges, default=INF) -> CoxeterSystem:
    """Build a system from ``{(a, b): m}``; unlisted pairs get ``default``."""
    names = list(names)
    idx = {x: i for i, x in enumerate(names)}
    n = len(names)
    rows = [[1 if i == j else default for j in range(n)] for i in range(n)]
    for (a, b), m in edges.items():
        i, j = idx[a], idx[b]
        rows[i][j] = rows[j][i] = m
    return CoxeterSystem(names, rows)


def right_angled(names, commuting_pairs) -> CoxeterSystem:
    """Right-angled system: listed pairs commute, all others have order inf."""
    return coxeter_from_edges(names, {tuple(p): 2 for p in commuting_pairs})


# -- finite parabolic subgroups -----------------------------------------

def _factorial(k):
    return math.factorial(k)


def _classify_component(W: CoxeterSystem, comp: list[int]):
    """(type name, order) of an irreducible component, or None if infinite."""
    n = len(comp)
    if n == 1:
        return "A1", 2
    edges = {}
    for a, b in combinations(comp, 2):
        m = W.orders[a][b]
        if m == INF:
            return None
        if m >= 3:
            edges[a, b] = m
    if n == 2:
        (m,) = edges.values()
        return f"I2({m})", 2 * m
    if len(edges) != n - 1:
        return None  # contains a cycle
    degree = Counter()
    for a, b in edges:
        degree[a] += 1
        degree[b] += 1
    if max(degree.values()) > 3:
        return None
    branch = [v for v in comp if degree[v] == 3]
    special = [(e, m) for e, m in edges.items() if m != 3]
    if len(branch) > 1 or len(special) > 1:
        return None
    if branch:
        if special:
            return None
        arms = sorted(_arm_lengths(branch[0], edges))
        if arms[0] == 1 and arms[1] == 1:
            return f"D{n}", 2 ** (n - 1) * _factorial(n)
        table = {(1, 2, 2): ("E6", 51840), (1, 2, 3): ("E7", 2903040), (1, 2, 4): ("E8", 696729600)}
        return table.get(tuple(arms))
    if not special:
        return f"A{n}", _factorial(n + 1)
    (a, b), m = special[0]
    at_end = degree[a] == 1 or degree[b] == 1
    if m == 4:
        if at_end:
            return f"B{n}", 2 ** n * _factorial(n)
        if n == 4:
            return "F4", 1152
        return None
    if m == 5 and at_end:
        return {3: ("H3", 120), 4: ("H4", 14400)}.get(n)
    return None


def _arm_lengths(center, edges):
    adj = {}
    for a, b in edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    lengths = []
    for start in adj[center]:
        prev, cur, k = center, start, 1
        while True:
            nxt = [v for v in adj[cur] if v != prev]
            if not nxt:
                break
            prev, cur, k = cur, nxt[0], k + 1
        lengths.append(k)
    return lengths


def diagram_components(W: CoxeterSystem, T) -> list[list[int]]:
    """Connected components of the Coxeter diagram induced on ``T``.

    Pairs with ``m >= 3`` (including ``inf``) are joined.
    """
    T = W.subset(T)
    seen, comps = set(), []
    for start in T:
        if start in seen:
            continue
        comp, stack = [], [start]
        seen.add(start)
        while stack:
            v = stack.pop()
            comp.append(v)
            for u in T:
                if u not in seen and W.orders[v][u] != 2 and u != v:
                    seen.add(u)
                    stack.append(u)
        comps.append(sorted(comp))
    return comps


def classify_spherical(W: CoxeterSystem, T):
    """Component types of ``W_T`` (e.g. ``["A1", "H3"]``) or None if infinite."""
    types = []
    for comp in diagram_components(W, T):
        result = _classify_component(W, comp)
        if result is None:
            return None
        types.append(result)
    return types


def is_spherical(W: CoxeterSystem, T) -> bool:
    return classify_spherical(W, T) is not None


def spherical_order(W: CoxeterSystem, T) -> int:
    types = classify_spherical(W, T)
    if types is None:
        raise NotSpherical(f"W_T is infinite for T = {[W.names[i] for i in W.subset(T)]}")
    return math.prod(order for _, order in types)


@dataclass(frozen=True)
class SphericalSubset:
    subset: tuple[int, ...]
    order: int


# -- word problem / Cayley balls ----------------------------------------

def reduce_word(W: CoxeterSystem, word) -> Element:
    """ShortLex normal form of ``word`` via Tits' rewriting."""
    return W.element(word)


@dataclass(frozen=True)
class CayleyBall:
    radius: int
    elements: tuple[Element, ...]
    edges: tuple[tuple[Element, Element, int], ...]  # (w, ws, s) with len(ws) = len(w) + 1

    @property
    def lengths(self) -> dict[int, int]:
        return dict(sorted(Counter(e.length for e in self.elements).items()))

    def __len__(self):
        return len(self.elements)

    def __contains__(self, item):
        return item in self._members

    @property
    def _members(self):
        cached = self.__dict__.get("_member_set")
        if cached is None:
            cached = frozenset(self.elements)
            object.__setattr__(self, "_member_set", cached)
        return cached


def cayley_ball(W: CoxeterSystem, r: int, max_elements: int | None = None) -> CayleyBall:
    """All elements of length <= r with the Cayley edges between them."""
    if r < 0:
        raise ValueError("radius must be >= 0")
    cap = max_elements if max_elements is not None else W.memo_cap
    elements = [IDENTITY]
    edges = []
    frontier = [IDENTITY]
    for _ in range(r):
        nxt = {}
        for w in frontier:
            desc = W.right_descents(w)
            for s in range(W.rank):
                if s in desc:
                    continue
                ws = W.multiply_generator(w, s)
                nxt.setdefault(ws, None)
                edges.append((w, ws, s))
        if not nxt:
            break
        frontier = sorted(nxt)
        elements.extend(frontier)
        if len(elements) > cap:
            raise ResourceLimit("ball_elements", len(elements), cap)
    edges.sort(key=lambda e: (e[0].sort_key, e[2]))
    return CayleyBall(r, tuple(elements), tuple(edges))


def enumerate_group(W: CoxeterSystem, max_elements: int = 100_000) -> tuple[Element, ...]:
    """All elements of a finite ``W`` (ResourceLimit if more than the cap)."""
    elements = [IDENTITY]
    frontier = [IDENTITY]
    while frontier:
        nxt = set()
        for w in frontier:
            desc = W.right_descents(w)
            for s in range(W.rank):
                if s not in desc:
                    nxt.add(W.multiply_generator(w, s))
        frontier = sorted(nxt)
        elements.extend(frontier)
        if len(elements) > max_elements:
            raise ResourceLimit("group_elements", len(elements), max_elements)
    return tuple(elements)


def parabolic_elements(W: CoxeterSystem, T, max_elements: int = 100_000) -> tuple[Element, ...]:
    """Elements of the finite parabolic ``W_T`` as elements of ``W``."""
    T = W.subset(T)
    if not T:
        return (IDENTITY,)
    sub = W.restrict(T)
    return tuple(
        W.element(tuple(T[i] for i in e.normal_form))
        for e in enumerate_group(sub, max_elements)
    )
