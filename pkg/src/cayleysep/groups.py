"""Finitely generated groups as multiplication oracles, and their Cayley balls.

A group is modelled by a canonical element key (a string), an identity key,
and a pure function multiply(key, symbol) -> key.  Two words represent the
same element iff they produce the same key, so ball enumeration is a plain
BFS over keys.  Built-in models use normal forms (integer vectors, reduced
words); the genus-2 surface group uses a Dehn-algorithm word-problem oracle
with first-discovered canonical representatives.

Generator symbols are short strings; the inverse of symbol `a` is written
`a-`, matching the presentation file format.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .errors import ConfigurationError, ResourceBudgetError, UnsupportedPresentationError
from .graphs import Graph

DEFAULT_VERTEX_BUDGET = 500_000

Word = tuple[str, ...]


def inverse_symbol(sym: str) -> str:
    return sym[:-1] if sym.endswith("-") else sym + "-"


@dataclass(frozen=True)
class GeneratorAlphabet:
    """Symmetric generating set: symbols plus an involutive inverse pairing."""

    symbols: tuple[str, ...]
    inverse: dict[str, str] = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if len(set(self.symbols)) != len(self.symbols):
            raise ConfigurationError("generator symbols must be distinct")
        inv = self.inverse
        if inv is None:
            inv = {s: inverse_symbol(s) for s in self.symbols}
            object.__setattr__(self, "inverse", inv)
        for s in self.symbols:
            if s not in inv:
                raise ConfigurationError(f"symbol {s!r} has no inverse entry")
            if inv[inv[s]] != s:
                raise ConfigurationError("inverse map must be an involution")
            if inv[s] not in self.symbols:
                raise ConfigurationError(
                    f"inverse of {s!r} is not itself a listed symbol")

    def inverse_of(self, sym: str) -> str:
        return self.inverse[sym]


def free_reduce(word: Sequence[str], alphabet: GeneratorAlphabet) -> Word:
    out: list[str] = []
    for sym in word:
        if out and out[-1] == alphabet.inverse_of(sym):
            out.pop()
        else:
            out.append(sym)
    return tuple(out)


def invert_word(word: Sequence[str], alphabet: GeneratorAlphabet) -> Word:
    return tuple(alphabet.inverse_of(s) for s in reversed(word))


def _cyclic_reduce(word: Word, alphabet: GeneratorAlphabet) -> Word:
    word = free_reduce(word, alphabet)
    while len(word) >= 2 and word[0] == alphabet.inverse_of(word[-1]):
        word = word[1:-1]
    return word


class Presentation:
    """Finite presentation: alphabet plus cyclically reduced relators."""

    def __init__(self, alphabet: GeneratorAlphabet, relators: Sequence[Sequence[str]],
                 relator_bound: int | None = None):
        self.alphabet = alphabet
        rels = []
        for rel in relators:
            rel = tuple(rel)
            for sym in rel:
                if sym not in alphabet.symbols:
                    raise ConfigurationError(f"relator uses unknown symbol {sym!r}")
            reduced = _cyclic_reduce(rel, alphabet)
            if reduced != rel:
                raise ConfigurationError(
                    f"relator {' '.join(rel)} is not freely and cyclically reduced")
            if not rel:
                raise ConfigurationError("empty relator")
            rels.append(rel)
        if relator_bound is not None:
            for rel in rels:
                if len(rel) > relator_bound:
                    raise ConfigurationError(
                        f"relator length {len(rel)} exceeds bound {relator_bound}")
        self.relators: tuple[Word, ...] = tuple(rels)
        self.relator_bound = relator_bound
        self._reducer: DehnReducer | None = None

    def reducer(self) -> "DehnReducer":
        if self._reducer is None:
            self._reducer = DehnReducer(self)
        return self._reducer


def load_presentation(path) -> Presentation:
    """Text format: line 1 lists generator symbols; later lines are relators
    as space-separated words, `-` suffix meaning inverse."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.split("#", 1)[0].strip() for ln in fh]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ConfigurationError(f"presentation file {path} is empty")
    base = lines[0].split()
    symbols = tuple(base) + tuple(inverse_symbol(s) for s in base)
    alphabet = GeneratorAlphabet(symbols)
    relators = [tuple(ln.split()) for ln in lines[1:]]
    return Presentation(alphabet, relators)


def _max_piece_length(pres: Presentation) -> int:
    """Longest common prefix over distinct occurrences in the symmetrized
    relator set (all rotations of all relators and their inverses)."""
    alphabet = pres.alphabet
    rotations: list[Word] = []
    for rel in pres.relators:
        for base in (rel, invert_word(rel, alphabet)):
            for k in range(len(base)):
                rotations.append(base[k:] + base[:k])
    best = 0
    for i in range(len(rotations)):
        for j in range(i + 1, len(rotations)):
            a, b = rotations[i], rotations[j]
            k = 0
            limit = min(len(a), len(b))
            while k < limit and a[k] == b[k]:
                k += 1
            best = max(best, k)
    return best


class DehnReducer:
    """Dehn's algorithm for C'(1/6) presentations.

    Replacement rules map any relator subword strictly longer than half the
    relator to the inverse of its complement; by Greendlinger's lemma the
    reduction reaches the empty word iff the input represents the identity.
    """

    def __init__(self, pres: Presentation):
        piece = _max_piece_length(pres)
        shortest = min(len(r) for r in pres.relators)
        if piece * 6 >= shortest:
            raise UnsupportedPresentationError(
                f"presentation is not C'(1/6): max piece length {piece} vs "
                f"shortest relator length {shortest}")
        self.alphabet = pres.alphabet
        self.rules: dict[Word, Word] = {}
        lengths: set[int] = set()
        for rel in pres.relators:
            n = len(rel)
            for base in (rel, invert_word(rel, pres.alphabet)):
                for k in range(n):
                    rot = base[k:] + base[:k]
                    for take in range(n // 2 + 1, n + 1):
                        lhs = rot[:take]
                        rhs = invert_word(rot[take:], pres.alphabet)
                        self.rules[lhs] = rhs
                        lengths.add(take)
        self.rule_lengths = sorted(lengths, reverse=True)

    def reduce(self, word: Sequence[str]) -> Word:
        w = free_reduce(word, self.alphabet)
        changed = True
        while changed:
            changed = False
            for L in self.rule_lengths:
                if L > len(w):
                    continue
                for i in range(len(w) - L + 1):
                    rhs = self.rules.get(w[i:i + L])
                    if rhs is not None:
                        w = free_reduce(w[:i] + rhs + w[i + L:], self.alphabet)
                        changed = True
                        break
                if changed:
                    break
        return w

    def is_identity(self, word: Sequence[str]) -> bool:
        return self.reduce(word) == ()


def dehn_normalize(word: Sequence[str], pres: Presentation) -> Word:
    """Freely reduced Dehn normal form; empty iff the word is the identity."""
    return pres.reducer().reduce(tuple(word))


class GroupModel:
    """Multiplication oracle with canonical element keys.

    multiply is a deterministic function of (key, symbol); the oracle-backed
    surface model interns first-discovered representatives, which stays
    deterministic because ball BFS expands layers in sorted key order.
    """

    def __init__(self, name: str, spec: str, alphabet: GeneratorAlphabet,
                 identity_key: str,
                 multiply: Callable[[str, str], str],
                 relator_bound_M: int | None = None,
                 presentation: Presentation | None = None,
                 one_ended: bool = False,
                 virtually_free: bool = False,
                 multiply_known: Callable[[str, str], str | None] | None = None):
        self.name = name
        self.spec = spec
        self.alphabet = alphabet
        self.identity_key = identity_key
        self.multiply = multiply
        self.relator_bound_M = relator_bound_M
        self.presentation = presentation
        self.one_ended = one_ended
        self.virtually_free = virtually_free
        # Optional fast path: like multiply but returns None instead of
        # interning a brand-new element (used by edge-only BFS passes).
        self.multiply_known = multiply_known

    def __repr__(self):
        return f"GroupModel({self.spec!r})"


def _letters(k: int) -> list[str]:
    if k > 26:
        raise ConfigurationError("at most 26 generators supported")
    return [chr(ord("a") + i) for i in range(k)]


def _zd_model(d: int, spec: str) -> GroupModel:
    if d < 1:
        raise ConfigurationError("zd:<d> needs d >= 1")
    gens = _letters(d)
    symbols = tuple(gens) + tuple(g + "-" for g in gens)
    alphabet = GeneratorAlphabet(symbols)
    index = {g: i for i, g in enumerate(gens)}

    def multiply(key: str, sym: str) -> str:
        vec = [int(x) for x in key.split(",")]
        base = sym.rstrip("-")
        vec[index[base]] += -1 if sym.endswith("-") else 1
        return ",".join(map(str, vec))

    presentation = None
    bound = None
    if d == 2:
        presentation = Presentation(alphabet, [("a", "b", "a-", "b-")])
        bound = 4
    return GroupModel(f"Z^{d}", spec, alphabet, ",".join(["0"] * d), multiply,
                      relator_bound_M=bound, presentation=presentation,
                      one_ended=(d >= 2), virtually_free=(d == 1))


def _free_model(k: int, spec: str) -> GroupModel:
    if k < 1:
        raise ConfigurationError("free:<k> needs k >= 1")
    gens = _letters(k)
    symbols = tuple(gens) + tuple(g + "-" for g in gens)
    alphabet = GeneratorAlphabet(symbols)

    def multiply(key: str, sym: str) -> str:
        word = tuple(key.split()) if key else ()
        return " ".join(free_reduce(word + (sym,), alphabet))

    return GroupModel(f"F_{k}", spec, alphabet, "", multiply,
                      one_ended=False, virtually_free=True)


def _heisenberg_model(spec: str) -> GroupModel:
    # Matrix model [[1,a,c],[0,1,b],[0,0,1]]; generators a, b and the central
    # c with relators [a,b]c-, [a,c], [b,c] (max length 5).
    symbols = ("a", "b", "c", "a-", "b-", "c-")
    alphabet = GeneratorAlphabet(symbols)
    moves = {
        "a": (1, 0, 0), "a-": (-1, 0, 0),
        "b": (0, 1, 0), "b-": (0, -1, 0),
        "c": (0, 0, 1), "c-": (0, 0, -1),
    }

    def multiply(key: str, sym: str) -> str:
        a, b, c = (int(x) for x in key.split(","))
        da, db, dc = moves[sym]
        # (a,b,c) * (da,db,dc) with c' = c + dc + a*db
        return f"{a + da},{b + db},{c + dc + a * db}"

    presentation = Presentation(alphabet, [
        ("a", "b", "a-", "b-", "c-"),
        ("a", "c", "a-", "c-"),
        ("b", "c", "b-", "c-"),
    ])
    return GroupModel("Heisenberg", spec, alphabet, "0,0,0", multiply,
                      relator_bound_M=5, presentation=presentation,
                      one_ended=True)


def _lamplighter_model(spec: str) -> GroupModel:
    # Z2 wr Z with cursor move t and self-inverse lamp toggle a.
    symbols = ("a", "t", "t-")
    alphabet = GeneratorAlphabet(symbols, {"a": "a", "t": "t-", "t-": "t"})

    def multiply(key: str, sym: str) -> str:
        lamps_part, pos_part = key.split("|")
        lamps = set(int(x) for x in lamps_part.split(",")) if lamps_part else set()
        pos = int(pos_part)
        if sym == "t":
            pos += 1
        elif sym == "t-":
            pos -= 1
        else:
            lamps ^= {pos}
        return ",".join(map(str, sorted(lamps))) + f"|{pos}"

    return GroupModel("Z2 wr Z", spec, alphabet, "|0", multiply, one_ended=True)


def _bs_model(n: int, spec: str) -> GroupModel:
    # BS(1,n) as Z[1/n] x| Z: element (q, k), a adds n^k, t increments k.
    if n < 2:
        raise ConfigurationError("bs:1:<n> needs n >= 2")
    symbols = ("a", "t", "a-", "t-")
    alphabet = GeneratorAlphabet(symbols)

    def multiply(key: str, sym: str) -> str:
        q_part, k_part = key.split("|")
        num, den = q_part.split("/")
        q = Fraction(int(num), int(den))
        k = int(k_part)
        if sym == "a":
            q += Fraction(n) ** k
        elif sym == "a-":
            q -= Fraction(n) ** k
        elif sym == "t":
            k += 1
        else:
            k -= 1
        return f"{q.numerator}/{q.denominator}|{k}"

    return GroupModel(f"BS(1,{n})", spec, alphabet, "0/1|0", multiply,
                      one_ended=True)


class _OracleCanonicalizer:
    """Canonical keys for a word-problem oracle.

    Words are stored as compact strings (lowercase = generator, uppercase =
    its inverse) so Dehn rule matching runs on C-level substring search.  The
    first BFS-discovered representative of an element wins; later words are
    matched by identity-testing the quotient, bucketed by abelianization and
    filtered by the girth bound to keep the comparisons few.
    """

    def __init__(self, pres: Presentation):
        base = sorted({s.rstrip("-") for s in pres.alphabet.symbols})
        if any(len(b) != 1 or not b.islower() for b in base):
            raise ConfigurationError(
                "oracle models need single lowercase-letter generators")
        self.sym_to_char = {}
        for b in base:
            self.sym_to_char[b] = b
            self.sym_to_char[b + "-"] = b.upper()
        self.char_to_sym = {v: k for k, v in self.sym_to_char.items()}
        self.base_index = {b: i for i, b in enumerate(base)}
        self.base_count = len(base)
        # Force the C'(1/6) piece check up front.
        pres.reducer()
        self.girth = min(len(r) for r in pres.relators)
        self.rules: list[tuple[str, str]] = []
        for rel in pres.relators:
            n = len(rel)
            compact = "".join(self.sym_to_char[s] for s in rel)
            for word in (compact, compact.swapcase()[::-1]):
                for k in range(n):
                    rot = word[k:] + word[:k]
                    for take in range(n // 2 + 1, n + 1):
                        rhs = rot[take:].swapcase()[::-1]
                        self.rules.append((rot[:take], rhs))
        self.rules.sort(key=lambda r: (-len(r[0]), r[0]))
        # bucket: abelianization vector -> list of (rep, rep inverse)
        self.buckets: dict[tuple[int, ...], list[tuple[str, str]]] = {
            (0,) * self.base_count: [("", "")]}
        self._memo: dict[str, str | None] = {}

    def _free_reduce(self, w: str) -> str:
        out: list[str] = []
        for ch in w:
            if out and out[-1] == ch.swapcase():
                out.pop()
            else:
                out.append(ch)
        return "".join(out)

    def _dehn_reduce(self, w: str) -> str:
        shortest = (self.girth // 2) + 1
        changed = True
        while changed and len(w) >= shortest:
            changed = False
            for lhs, rhs in self.rules:
                i = w.find(lhs)
                if i >= 0:
                    w = self._free_reduce(w[:i] + rhs + w[i + len(lhs):])
                    changed = True
                    break
        return w

    def _abelianized(self, w: str) -> tuple[int, ...]:
        vec = [0] * self.base_count
        for ch in w:
            if ch.isupper():
                vec[self.base_index[ch.lower()]] -= 1
            else:
                vec[self.base_index[ch]] += 1
        return tuple(vec)

    def _join_reduce(self, w: str, k_inv: str) -> str:
        # Both parts are freely reduced; cancellation happens at the seam.
        i = len(w)
        j = 0
        while i > 0 and j < len(k_inv) and w[i - 1] == k_inv[j].swapcase():
            i -= 1
            j += 1
        return w[:i] + k_inv[j:]

    def _lookup(self, w: str, bucket) -> str | None:
        for rep, rep_inv in bucket:
            if rep == w:
                return rep
            if len(rep) + len(w) < self.girth:
                continue
            q = self._join_reduce(w, rep_inv)
            if q and len(q) < self.girth:
                continue
            if self._dehn_reduce(q) == "":
                return rep
        return None

    def resolve(self, raw: str, intern: bool) -> str | None:
        """Canonical key for the (unreduced) compact word, or None when the
        element is unknown and intern is False."""
        w = self._dehn_reduce(self._free_reduce(raw))
        bucket = self.buckets.setdefault(self._abelianized(w), [])
        found = self._lookup(w, bucket)
        if found is not None:
            return found
        if not intern:
            return None
        bucket.append((w, w.swapcase()[::-1]))
        return w

    def multiply(self, key: str, ch: str) -> str:
        memo_key = key + "\x00" + ch
        hit = self._memo.get(memo_key)
        if hit is not None:
            return hit
        result = self.resolve(key + ch, intern=True)
        self._memo[memo_key] = result
        return result

    def multiply_known(self, key: str, ch: str) -> str | None:
        memo_key = key + "\x00" + ch
        if memo_key in self._memo:
            return self._memo[memo_key]
        result = self.resolve(key + ch, intern=False)
        if result is not None:
            self._memo[memo_key] = result
        return result


def _surface_model(spec: str) -> GroupModel:
    symbols = ("a", "b", "c", "d", "a-", "b-", "c-", "d-")
    alphabet = GeneratorAlphabet(symbols)
    presentation = Presentation(alphabet, [
        ("a", "b", "a-", "b-", "c", "d", "c-", "d-"),
    ])
    canon = _OracleCanonicalizer(presentation)

    def multiply(key: str, sym: str) -> str:
        return canon.multiply(key, canon.sym_to_char[sym])

    def multiply_known(key: str, sym: str) -> str | None:
        return canon.multiply_known(key, canon.sym_to_char[sym])

    return GroupModel("Surface genus 2", spec, alphabet, "", multiply,
                      relator_bound_M=8, presentation=presentation,
                      one_ended=True, multiply_known=multiply_known)


_CATALOG_HELP = ("valid specs: zd:<d>, free:<k>, heis, lamplighter, bs:1:<n>, "
                 "surface:2, file:<path>, sierpinski:<L>")


def catalog_group(spec: str) -> GroupModel:
    """Instantiate a catalog group from its spec token."""
    spec = spec.strip()
    if spec.startswith("zd:"):
        try:
            d = int(spec.split(":", 1)[1])
        except ValueError:
            raise ConfigurationError(f"bad dimension in {spec!r}; {_CATALOG_HELP}") from None
        return _zd_model(d, spec)
    if spec.startswith("free:"):
        try:
            k = int(spec.split(":", 1)[1])
        except ValueError:
            raise ConfigurationError(f"bad rank in {spec!r}; {_CATALOG_HELP}") from None
        return _free_model(k, spec)
    if spec == "heis":
        return _heisenberg_model(spec)
    if spec == "lamplighter":
        return _lamplighter_model(spec)
    if spec.startswith("bs:1:"):
        try:
            n = int(spec.split(":")[2])
        except (ValueError, IndexError):
            raise ConfigurationError(f"bad exponent in {spec!r}; {_CATALOG_HELP}") from None
        return _bs_model(n, spec)
    if spec == "surface:2":
        return _surface_model(spec)
    if spec.startswith("file:") or spec.startswith("sierpinski:"):
        raise ConfigurationError(
            f"{spec!r} names a graph, not a group; load it via the graphs "
            f"module or pass it where a graph source is accepted")
    raise ConfigurationError(f"unknown group spec {spec!r}; {_CATALOG_HELP}")


@dataclass(frozen=True)
class Ball:
    """Induced ball of a Cayley graph around the identity."""

    graph: Graph
    center: int
    radius: int
    dist_from_center: tuple[int, ...]
    key_of_vertex: tuple[str, ...]
    group_spec: str

    @property
    def sphere_sizes(self) -> list[int]:
        counts = [0] * (self.radius + 1)
        for d in self.dist_from_center:
            counts[d] += 1
        return counts


def _bfs_layers(model: GroupModel, r: int, vertex_budget: int):
    """Shared BFS core: returns (keys in id order, dist list, edge set)."""
    if r < 0:
        raise ValueError("radius must be non-negative")
    ids: dict[str, int] = {model.identity_key: 0}
    keys: list[str] = [model.identity_key]
    dist: list[int] = [0]
    edges: set[tuple[int, int]] = set()
    frontier = [model.identity_key]
    for layer in range(1, r + 1):
        discovered: set[str] = set()
        for key in frontier:
            u = ids[key]
            for sym in model.alphabet.symbols:
                w = model.multiply(key, sym)
                if w in ids:
                    v = ids[w]
                    if v != u:
                        edges.add((min(u, v), max(u, v)))
                elif w not in discovered:
                    discovered.add(w)
        if not discovered:
            frontier = []
            break
        if len(keys) + len(discovered) > vertex_budget:
            raise ResourceBudgetError(
                f"vertex budget {vertex_budget} exceeded while expanding "
                f"radius {layer} (completed radius {layer - 1})",
                radius_reached=layer - 1)
        new_keys = sorted(discovered)
        for w in new_keys:
            ids[w] = len(keys)
            keys.append(w)
            dist.append(layer)
        frontier = new_keys
    # Edge pass over the outermost layer picks up intra-layer edges; products
    # beyond the radius are discarded, so a lookup-only multiply suffices.
    lookup = model.multiply_known or model.multiply
    for key in frontier:
        u = ids[key]
        for sym in model.alphabet.symbols:
            w = lookup(key, sym)
            if w is not None and w in ids:
                v = ids[w]
                if v != u:
                    edges.add((min(u, v), max(u, v)))
    return keys, dist, edges


def cayley_ball(model: GroupModel, r: int,
                vertex_budget: int = DEFAULT_VERTEX_BUDGET) -> Ball:
    """Induced subgraph of the Cayley graph on the radius-r ball.

    Vertex 0 is the identity; each new layer is sorted by canonical key
    before ids are assigned, so the numbering is deterministic.
    """
    keys, dist, edges = _bfs_layers(model, r, vertex_budget)
    graph = Graph(len(keys), edges, labels=keys)
    return Ball(graph=graph, center=0, radius=r,
                dist_from_center=tuple(dist), key_of_vertex=tuple(keys),
                group_spec=model.spec)


def growth_table(model: GroupModel, r_max: int,
                 vertex_budget: int = DEFAULT_VERTEX_BUDGET) -> list[int]:
    """|B_0| .. |B_{r_max}| as a non-decreasing list."""
    _, dist, _ = _bfs_layers(model, r_max, vertex_budget)
    table = [0] * (r_max + 1)
    for d in dist:
        table[d] += 1
    out = []
    total = 0
    for c in table:
        total += c
        out.append(total)
    return out


def kappa(model: GroupModel, n: int,
          vertex_budget: int = DEFAULT_VERTEX_BUDGET) -> int:
    """Inverse growth: the largest r with |B_r| <= n."""
    if n < 1:
        raise ValueError("n must be positive")
    seen: set[str] = {model.identity_key}
    frontier = [model.identity_key]
    r = 0
    total = 1
    while True:
        discovered: set[str] = set()
        for key in frontier:
            for sym in model.alphabet.symbols:
                w = model.multiply(key, sym)
                if w not in seen and w not in discovered:
                    discovered.add(w)
        if not discovered:
            raise ResourceBudgetError(
                f"ball growth stalled at radius {r}; group appears finite")
        total += len(discovered)
        if total > n:
            return r
        if total > vertex_budget:
            raise ResourceBudgetError(
                f"vertex budget {vertex_budget} exceeded at radius {r + 1}",
                radius_reached=r)
        seen.update(discovered)
        frontier = sorted(discovered)
        r += 1
