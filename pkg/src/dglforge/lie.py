"""Free graded Lie algebras over Q with Koszul signs.

Conventions.  Generators have positive integer degree; the parity of an
element is its degree mod 2.  Brackets obey

    [x, y] = -(-1)^{|x||y|} [y, x]

and the graded Jacobi identity.  An element is stored two ways at once: as a
combination of bracket trees (the shape the user wrote or a construction
produced) and as its expansion in the tensor algebra on the generators,
where [x, y] = xy - (-1)^{|x||y|} yx recursively.  Over Q the expansion is
faithful, so equality and every membership/rank question reduce to exact
linear algebra on the word coordinates; the bracket trees never need to be
normalized.

Spanning sets of a fixed degree come from Lyndon words in declaration order,
standard-bracketed, together with [b(u), b(u)] for each Lyndon word u of odd
degree.  Their count is checked on every call against an independently
computed graded Witt series (refined by bracket weight), and full rank
certification of the coordinates is available via ``certify=True``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .linalg import IncrementalSpan, SparseMatrix

ZERO = Fraction(0)
ONE = Fraction(1)

# A bracket tree is either a generator name (leaf) or a pair of trees.
BracketTree = Union[str, Tuple["BracketTree", "BracketTree"]]
Word = Tuple[str, ...]


@dataclass(frozen=True)
class Generator:
    """A free generator: name, homological degree, optional filtration stage."""

    name: str
    degree: int
    filtration: Optional[int] = None


class Alphabet:
    """An ordered set of generators.  Declaration order is the total order
    used for words, spanning sets and all deterministic tie-breaks."""

    __slots__ = ("generators", "index", "degree", "_expand_cache", "_witt_cache")

    def __init__(self, generators: Iterable[Generator]):
        gens = tuple(generators)
        names = [g.name for g in gens]
        if len(set(names)) != len(names):
            raise ValueError("generator names must be unique")
        for g in gens:
            if g.degree < 1:
                raise ValueError(f"generator {g.name!r} must have degree >= 1")
            if g.filtration is not None and g.filtration < 1:
                raise ValueError(f"generator {g.name!r} has filtration < 1")
        self.generators = gens
        self.index = {g.name: i for i, g in enumerate(gens)}
        self.degree = {g.name: g.degree for g in gens}
        self._expand_cache: Dict[BracketTree, Dict[Word, Fraction]] = {}
        self._witt_cache: Dict[tuple, Dict[Tuple[int, int], int]] = {}

    def signature(self) -> Tuple[Tuple[str, int], ...]:
        return tuple((g.name, g.degree) for g in self.generators)

    def names(self) -> List[str]:
        return [g.name for g in self.generators]

    def generator(self, name: str) -> Generator:
        return self.generators[self.index[name]]

    def word_key(self, word: Word):
        idx = self.index
        return (len(word), tuple(idx[n] for n in word))

    def tree_degree(self, tree: BracketTree) -> int:
        if isinstance(tree, str):
            return self.degree[tree]
        return self.tree_degree(tree[0]) + self.tree_degree(tree[1])

    def expand(self, tree: BracketTree) -> Dict[Word, Fraction]:
        """Tensor-algebra coordinates of a bracket tree (cached)."""
        cached = self._expand_cache.get(tree)
        if cached is not None:
            return cached
        if isinstance(tree, str):
            if tree not in self.index:
                raise KeyError(f"unknown generator {tree!r}")
            out: Dict[Word, Fraction] = {(tree,): ONE}
        else:
            left, right = tree
            lw, rw = self.expand(left), self.expand(right)
            dl, dr = self.tree_degree(left), self.tree_degree(right)
            sign = -ONE if (dl % 2) and (dr % 2) else ONE
            out = {}
            for w1, c1 in lw.items():
                for w2, c2 in rw.items():
                    c = c1 * c2
                    k = w1 + w2
                    v = out.get(k, ZERO) + c
                    if v:
                        out[k] = v
                    else:
                        out.pop(k, None)
                    k = w2 + w1
                    v = out.get(k, ZERO) + sign * c
                    if v:
                        out[k] = v
                    else:
                        out.pop(k, None)
        self._expand_cache[tree] = out
        return out


def tree_weight(tree: BracketTree) -> int:
    if isinstance(tree, str):
        return 1
    return tree_weight(tree[0]) + tree_weight(tree[1])


def tree_leaves(tree: BracketTree) -> List[str]:
    if isinstance(tree, str):
        return [tree]
    return tree_leaves(tree[0]) + tree_leaves(tree[1])


def _tree_shape(tree: BracketTree) -> str:
    if isinstance(tree, str):
        return "."
    return "(" + _tree_shape(tree[0]) + _tree_shape(tree[1]) + ")"


def format_tree(tree: BracketTree) -> str:
    if isinstance(tree, str):
        return tree
    return f"[{format_tree(tree[0])},{format_tree(tree[1])}]"


class LieElement:
    """A homogeneous element of the free graded Lie algebra on an alphabet.

    ``terms`` maps bracket trees to nonzero rational coefficients; ``words``
    holds the (canonical) tensor-algebra coordinates.  The zero element has
    degree None and empty dicts.  Elements are immutable by convention.
    """

    __slots__ = ("alphabet", "degree", "terms", "words")

    def __init__(self, alphabet: Alphabet, degree: Optional[int],
                 terms: Dict[BracketTree, Fraction],
                 words: Dict[Word, Fraction]):
        self.alphabet = alphabet
        self.degree = degree
        self.terms = terms
        self.words = words

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, alphabet: Alphabet) -> "LieElement":
        return cls(alphabet, None, {}, {})

    @classmethod
    def generator(cls, alphabet: Alphabet, name: str) -> "LieElement":
        if name not in alphabet.index:
            raise KeyError(f"unknown generator {name!r}")
        return cls(alphabet, alphabet.degree[name], {name: ONE}, {(name,): ONE})

    @classmethod
    def from_terms(cls, alphabet: Alphabet,
                   terms: Mapping[BracketTree, Fraction]) -> "LieElement":
        clean: Dict[BracketTree, Fraction] = {}
        degree: Optional[int] = None
        for tree, coeff in terms.items():
            coeff = Fraction(coeff)
            if not coeff:
                continue
            d = alphabet.tree_degree(tree)
            if degree is None:
                degree = d
            elif degree != d:
                raise ValueError("terms are not homogeneous "
                                 f"(degrees {degree} and {d})")
            clean[tree] = clean.get(tree, ZERO) + coeff
        clean = {t: c for t, c in clean.items() if c}
        words: Dict[Word, Fraction] = {}
        for tree, coeff in clean.items():
            for w, c in alphabet.expand(tree).items():
                v = words.get(w, ZERO) + coeff * c
                if v:
                    words[w] = v
                else:
                    words.pop(w, None)
        if not words:
            return cls.zero(alphabet)
        return cls(alphabet, degree, clean, words)

    # -- basic structure ----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.words

    def leaf_names(self) -> set:
        out = set()
        for w in self.words:
            out.update(w)
        return out

    def weights(self) -> List[int]:
        return sorted({len(w) for w in self.words})

    def weight_part(self, weight: int) -> "LieElement":
        terms = {t: c for t, c in self.terms.items() if tree_weight(t) == weight}
        return LieElement.from_terms(self.alphabet, terms)

    def weight_split(self) -> Dict[int, "LieElement"]:
        by_w: Dict[int, Dict[BracketTree, Fraction]] = {}
        for t, c in self.terms.items():
            by_w.setdefault(tree_weight(t), {})[t] = c
        return {w: LieElement.from_terms(self.alphabet, ts)
                for w, ts in sorted(by_w.items())}

    def min_weight(self) -> Optional[int]:
        if self.is_zero:
            return None
        return min(len(w) for w in self.words)

    def in_subalgebra(self, names: Iterable[str]) -> bool:
        """Membership in the free Lie subalgebra on a subset of generators.

        Exact: basis elements split by leaf content, so an element lies in
        the subalgebra iff its word coordinates use only the given letters.
        """
        allowed = set(names)
        return all(set(w) <= allowed for w in self.words)

    # -- arithmetic ---------------------------------------------------------

    def _check_compatible(self, other: "LieElement"):
        if self.alphabet is not other.alphabet and \
                self.alphabet.signature() != other.alphabet.signature():
            raise ValueError("elements live over different alphabets")

    def __add__(self, other: "LieElement") -> "LieElement":
        if not isinstance(other, LieElement):
            return NotImplemented
        self._check_compatible(other)
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.degree != other.degree:
            raise ValueError(f"cannot add degrees {self.degree} and {other.degree}")
        terms = dict(self.terms)
        for t, c in other.terms.items():
            v = terms.get(t, ZERO) + c
            if v:
                terms[t] = v
            else:
                terms.pop(t, None)
        words = dict(self.words)
        for w, c in other.words.items():
            v = words.get(w, ZERO) + c
            if v:
                words[w] = v
            else:
                words.pop(w, None)
        if not words:
            return LieElement.zero(self.alphabet)
        return LieElement(self.alphabet, self.degree, terms, words)

    def __neg__(self) -> "LieElement":
        return self.scale(-ONE)

    def __sub__(self, other: "LieElement") -> "LieElement":
        return self + (-other)

    def scale(self, coeff) -> "LieElement":
        coeff = Fraction(coeff)
        if not coeff or self.is_zero:
            return LieElement.zero(self.alphabet)
        return LieElement(self.alphabet, self.degree,
                          {t: coeff * c for t, c in self.terms.items()},
                          {w: coeff * c for w, c in self.words.items()})

    def __mul__(self, coeff) -> "LieElement":
        return self.scale(coeff)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, LieElement):
            return NotImplemented
        if self.alphabet is not other.alphabet and \
                self.alphabet.signature() != other.alphabet.signature():
            return False
        return self.words == other.words

    def __hash__(self):
        return hash((self.degree, frozenset(self.words.items())))

    def __repr__(self) -> str:
        return format_element(self)


def bracket(u: LieElement, v: LieElement) -> LieElement:
    """Graded Lie bracket of homogeneous elements."""
    u._check_compatible(v)
    if u.is_zero or v.is_zero:
        return LieElement.zero(u.alphabet)
    du, dv = u.degree, v.degree
    sign = -ONE if (du % 2) and (dv % 2) else ONE
    terms: Dict[BracketTree, Fraction] = {}
    for t1, c1 in u.terms.items():
        for t2, c2 in v.terms.items():
            node = (t1, t2)
            val = terms.get(node, ZERO) + c1 * c2
            if val:
                terms[node] = val
            else:
                terms.pop(node, None)
    words: Dict[Word, Fraction] = {}
    for w1, c1 in u.words.items():
        for w2, c2 in v.words.items():
            c = c1 * c2
            k = w1 + w2
            val = words.get(k, ZERO) + c
            if val:
                words[k] = val
            else:
                words.pop(k, None)
            k = w2 + w1
            val = words.get(k, ZERO) - sign * c
            if val:
                words[k] = val
            else:
                words.pop(k, None)
    if not words:
        return LieElement.zero(u.alphabet)
    return LieElement(u.alphabet, du + dv, terms, words)


def element_from_tree(alphabet: Alphabet, tree: BracketTree) -> LieElement:
    return LieElement.from_terms(alphabet, {tree: ONE})


def rename_element(e: LieElement, target: Alphabet,
                   name_map: Mapping[str, str]) -> LieElement:
    """Transport an element along a degree-preserving renaming of leaves."""

    def rename_tree(t):
        if isinstance(t, str):
            return name_map.get(t, t)
        return (rename_tree(t[0]), rename_tree(t[1]))

    for old in e.leaf_names():
        new = name_map.get(old, old)
        if target.degree.get(new) != e.alphabet.degree[old]:
            raise ValueError(f"renaming {old!r} -> {new!r} does not preserve degree")
    if e.is_zero:
        return LieElement.zero(target)
    terms = {rename_tree(t): c for t, c in e.terms.items()}
    words = {tuple(name_map.get(n, n) for n in w): c for w, c in e.words.items()}
    return LieElement(target, e.degree, terms, words)


# ---------------------------------------------------------------------------
# formatting


def _format_coeff(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def term_sort_key(alphabet: Alphabet, tree: BracketTree):
    leaves = tree_leaves(tree)
    return (len(leaves), tuple(alphabet.index[n] for n in leaves),
            _tree_shape(tree))


def format_element(e: LieElement) -> str:
    """Deterministic plain-text form, parseable by the expression grammar."""
    if e.is_zero:
        return "0"
    items = sorted(e.terms.items(),
                   key=lambda tc: term_sort_key(e.alphabet, tc[0]))
    parts = []
    for i, (tree, coeff) in enumerate(items):
        neg = coeff < 0
        mag = -coeff if neg else coeff
        body = format_tree(tree)
        if mag != 1:
            body = _format_coeff(mag) + body
        if i == 0:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts)


# ---------------------------------------------------------------------------
# dimensions: graded Witt series, refined by bracket weight


def _series_mul(a: Dict[Tuple[int, int], int], b: Dict[Tuple[int, int], int],
                max_degree: int) -> Dict[Tuple[int, int], int]:
    out: Dict[Tuple[int, int], int] = {}
    for (d1, w1), c1 in a.items():
        for (d2, w2), c2 in b.items():
            d = d1 + d2
            if d <= max_degree:
                k = (d, w1 + w2)
                out[k] = out.get(k, 0) + c1 * c2
    return {k: v for k, v in out.items() if v}


def _factor_series(d: int, w: int, count: int, max_degree: int
                   ) -> Dict[Tuple[int, int], int]:
    """(1 + t^d s^w)^count for odd d, (1 - t^d s^w)^{-count} for even d."""
    out = {(0, 0): 1}
    j = 1
    coeff = 1
    while j * d <= max_degree:
        if d % 2:
            if j > count:
                break
            coeff = coeff * (count - j + 1) // j
        else:
            coeff = coeff * (count + j - 1) // j
        out[(j * d, j * w)] = coeff
        j += 1
    return out


def free_lie_dims(degrees: Sequence[int], max_degree: int
                  ) -> Dict[Tuple[int, int], int]:
    """dim of the (degree, weight) component of the free graded Lie algebra
    on generators of the given degrees, for degree <= max_degree.

    Computed from the tensor algebra: the universal envelope of the free
    graded Lie algebra is the whole tensor algebra, and its Hilbert series
    factors over the Lie dimensions with (1+t^d) factors in odd degrees and
    1/(1-t^d) factors in even degrees.
    """
    degs = tuple(sorted(degrees))
    gen_counts: Dict[int, int] = {}
    for d in degs:
        gen_counts[d] = gen_counts.get(d, 0) + 1
    gen_poly = {(d, 1): c for d, c in gen_counts.items() if d <= max_degree}

    tensor: Dict[Tuple[int, int], int] = {(0, 0): 1}
    power: Dict[Tuple[int, int], int] = {(0, 0): 1}
    while True:
        power = _series_mul(power, gen_poly, max_degree)
        if not power:
            break
        for k, v in power.items():
            tensor[k] = tensor.get(k, 0) + v

    dims: Dict[Tuple[int, int], int] = {}
    partial: Dict[Tuple[int, int], int] = {(0, 0): 1}
    for d in range(1, max_degree + 1):
        found = []
        for w in range(1, d + 1):
            c = tensor.get((d, w), 0) - partial.get((d, w), 0)
            if c < 0:
                raise ArithmeticError("Witt series produced a negative dimension")
            if c:
                dims[(d, w)] = c
                found.append((w, c))
        for w, c in found:
            partial = _series_mul(partial, _factor_series(d, w, c, max_degree),
                                  max_degree)
    return dims


def witt_dims(alphabet: Alphabet, max_degree: int,
              allowed: Optional[Sequence[str]] = None
              ) -> Dict[Tuple[int, int], int]:
    names = tuple(allowed) if allowed is not None else tuple(alphabet.names())
    key = (names, max_degree)
    cached = alphabet._witt_cache.get(key)
    if cached is None:
        cached = free_lie_dims([alphabet.degree[n] for n in names], max_degree)
        alphabet._witt_cache[key] = cached
    return cached


# ---------------------------------------------------------------------------
# Lyndon machinery and spanning sets


def _words_of_degree(letters: Sequence[Tuple[int, int]], degree: int
                     ) -> List[Tuple[int, ...]]:
    """All words (tuples of letter indices) with the given total degree.
    letters: (index, degree) pairs in declaration order."""
    if not letters:
        return []
    min_deg = min(d for _, d in letters)
    out: List[Tuple[int, ...]] = []
    prefix: List[int] = []

    def rec(remaining: int):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        if remaining < min_deg:
            return
        for idx, d in letters:
            if d <= remaining:
                prefix.append(idx)
                rec(remaining - d)
                prefix.pop()

    rec(degree)
    return out


def _is_lyndon(word: Tuple[int, ...]) -> bool:
    # Lyndon iff strictly smaller than each of its proper suffixes.
    n = len(word)
    for i in range(1, n):
        if word[i:] <= word[: n - i]:
            # word[i:] <= word would need a full compare; do it exactly:
            if word[i:] <= word:
                return False
    for i in range(1, n):
        if not word < word[i:]:
            return False
    return True


def _standard_bracketing(word: Tuple[int, ...], names: Sequence[str],
                         memo: dict) -> BracketTree:
    if word in memo:
        return memo[word]
    if len(word) == 1:
        tree: BracketTree = names[word[0]]
    else:
        v = min(word[i:] for i in range(1, len(word)))
        u = word[: len(word) - len(v)]
        tree = (_standard_bracketing(u, names, memo),
                _standard_bracketing(v, names, memo))
    memo[word] = tree
    return tree


def lyndon_words(alphabet: Alphabet, degree: int,
                 allowed: Optional[Sequence[str]] = None
                 ) -> List[Tuple[int, ...]]:
    names = alphabet.names() if allowed is None else list(allowed)
    letters = [(alphabet.index[n], alphabet.degree[n]) for n in names]
    letters.sort()
    return sorted(w for w in _words_of_degree(letters, degree) if _is_lyndon(w))


def spanning_set(alphabet: Alphabet, degree: int, *,
                 allowed: Optional[Sequence[str]] = None,
                 min_weight: Optional[int] = None,
                 max_weight: Optional[int] = None,
                 certify: bool = False) -> List[BracketTree]:
    """Basis trees for the degree component of the free graded Lie algebra
    (optionally restricted to a generator subset and a weight range).

    Candidates: standard bracketings of Lyndon words of this degree, plus
    [b(u), b(u)] for Lyndon words u of odd degree with 2|u| = degree.  The
    per-weight counts are asserted against the graded Witt series; with
    ``certify=True`` linear independence of the canonical coordinates is
    proved by rank as well.
    """
    if degree < 1:
        return []
    names = alphabet.names()
    memo: dict = {}
    candidates: List[Tuple[Tuple[int, int, ...], BracketTree]] = []
    for word in lyndon_words(alphabet, degree, allowed):
        tree = _standard_bracketing(word, names, memo)
        candidates.append(((len(word),) + word, tree))
    if degree % 2 == 0 and (degree // 2) % 2 == 1:
        for word in lyndon_words(alphabet, degree // 2, allowed):
            tree = _standard_bracketing(word, names, memo)
            candidates.append(((2 * len(word),) + word + word, (tree, tree)))
    candidates.sort(key=lambda it: it[0])

    expected = witt_dims(alphabet, degree, allowed)
    by_weight: Dict[int, int] = {}
    for key, _ in candidates:
        by_weight[key[0]] = by_weight.get(key[0], 0) + 1
    for w in set(by_weight) | {w for (d, w) in expected if d == degree}:
        if by_weight.get(w, 0) != expected.get((degree, w), 0):
            raise ArithmeticError(
                f"spanning-set count mismatch at degree {degree}, weight {w}: "
                f"{by_weight.get(w, 0)} candidates vs Witt {expected.get((degree, w), 0)}")

    trees = [tree for key, tree in candidates
             if (min_weight is None or key[0] >= min_weight)
             and (max_weight is None or key[0] <= max_weight)]
    if certify:
        span = IncrementalSpan()
        for t in trees:
            if not span.add(alphabet.expand(t)):
                raise ArithmeticError(
                    f"spanning-set tree {format_tree(t)} is dependent")
    return trees


def multidegree_component(alphabet: Alphabet, letters: Sequence[str]
                          ) -> List[BracketTree]:
    """Basis of the multilinear component on pairwise distinct letters:
    right-normed brackets [l_{s(1)}, [l_{s(2)}, [..., l_0]]] over all
    permutations s of the letters other than the first one."""
    if len(set(letters)) != len(letters):
        raise ValueError("letters must be pairwise distinct")
    for n in letters:
        if n not in alphabet.index:
            raise KeyError(f"unknown generator {n!r}")
    if not letters:
        return []
    base, rest = letters[0], list(letters[1:])
    trees = []
    for perm in itertools.permutations(rest):
        t: BracketTree = base
        for name in reversed(perm):
            t = (name, t)
        trees.append(t)
    return trees


# ---------------------------------------------------------------------------
# matrices of elements and ideal spans


def element_matrix(elements: Sequence[LieElement]
                   ) -> Tuple[SparseMatrix, List[Word]]:
    """Canonical-coordinate matrix: one column per element, rows indexed by
    the union of words (sorted by length then letter indices)."""
    if not elements:
        return SparseMatrix(0, 0, {}), []
    alphabet = elements[0].alphabet
    words = sorted({w for e in elements for w in e.words},
                   key=alphabet.word_key)
    row_of = {w: i for i, w in enumerate(words)}
    entries = {}
    for j, e in enumerate(elements):
        for w, c in e.words.items():
            entries[(row_of[w], j)] = c
    return SparseMatrix(len(words), len(elements), entries), words


def subspace_matrix(elements: Sequence[LieElement]) -> SparseMatrix:
    return element_matrix(elements)[0]


def span_rank(elements: Sequence[LieElement]) -> int:
    span = IncrementalSpan()
    for e in elements:
        span.add(e.words)
    return span.dimension


def in_span(e: LieElement, elements: Sequence[LieElement]) -> bool:
    span = IncrementalSpan()
    for x in elements:
        span.add(x.words)
    return span.contains(e.words)


def ideal_span_in_degree(ideal_gens: Sequence[LieElement], degree: int
                         ) -> List[LieElement]:
    """Spanning elements of the given degree of the two-sided Lie ideal
    generated by the listed (homogeneous) elements.

    Closure under left bracketing with generators suffices, since ad of any
    element decomposes into compositions of ad of generators.  Per-degree
    spans are pruned by rank as they grow, so the worklist terminates.
    """
    nonzero = [h for h in ideal_gens if not h.is_zero]
    if not nonzero:
        return []
    alphabet = nonzero[0].alphabet
    spans: Dict[int, IncrementalSpan] = {}
    kept: Dict[int, List[LieElement]] = {}
    work: List[LieElement] = []

    def offer(x: LieElement) -> None:
        if x.is_zero or x.degree > degree:
            return
        span = spans.setdefault(x.degree, IncrementalSpan())
        if span.add(x.words):
            kept.setdefault(x.degree, []).append(x)
            if x.degree < degree:
                work.append(x)

    for h in nonzero:
        offer(h)
    gen_elements = [LieElement.generator(alphabet, g.name)
                    for g in alphabet.generators]
    while work:
        x = work.pop(0)
        for g in gen_elements:
            if x.degree + g.degree <= degree:
                offer(bracket(g, x))
    return kept.get(degree, [])
