"""Quadratic algebras of R-matrix type and their normal forms.

Words are tuples of 0-based generator indices.  Monomials are ordered
degree-lexicographically with x1 < x2 < ... < xn; the relations are
echelonized so that each pivot is the order-largest word of its relation,
and a word is *normal* when it contains no pivot as a subword.
"""
from __future__ import annotations

import itertools
import re
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from . import linalg
from .qcoeff import ONE, ZERO, QRat, as_qrat, q as Q_GEN
from .report import VerificationReport, timed
from .rtensor import MetricData, RMatrixData

Word = Tuple[int, ...]
Terms = Dict[Word, QRat]
TensorTerms = Dict[Tuple[Word, Word], QRat]

ORIENTATIONS = ("covector", "vector", "conformal")


class NCAlgebraError(ValueError):
    pass


def _add_into(acc: dict, key, c: QRat) -> None:
    nv = acc.get(key, ZERO) + c
    if nv:
        acc[key] = nv
    else:
        acc.pop(key, None)


def _deglex(w: Word):
    return (len(w), w)


class RelationSet:
    """Echelonized degree-2 relations; ``rules`` maps each pivot to its tail.

    When the quadratic rules leave unresolved overlap ambiguities they are
    completed (noncommutative Buchberger, homogeneous, up to ``max_degree``)
    and ``rules`` also holds the higher-degree leading words.
    """

    def __init__(self, n: int, rows: List[Dict[Word, QRat]], orientation: str, max_degree: int = 6):
        self.n = n
        self.orientation = orientation
        self.rows = rows
        self.max_degree = max_degree
        self.rules: Dict[Word, List[Tuple[Word, QRat]]] = {}
        self.truncated = False  # overlaps beyond max_degree were left unresolved
        for row in rows:
            self._add_rule(row)
        self.quadratic = len(self.rules)
        self._complete()

    @property
    def dimension(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> List[Word]:
        return sorted(self.rules, key=_deglex)

    @property
    def lengths(self) -> List[int]:
        return sorted({len(w) for w in self.rules})

    def _add_rule(self, row: Dict[Word, QRat]) -> Word:
        pivot = max(row, key=_deglex)
        inv = row[pivot].inverse()
        self.rules[pivot] = [(w, -c * inv) for w, c in sorted(row.items(), key=lambda t: _deglex(t[0]),
                                                               reverse=True) if w != pivot]
        return pivot

    def _reduce(self, terms: Dict[Word, QRat]) -> Dict[Word, QRat]:
        out: Dict[Word, QRat] = {}
        todo = dict(terms)
        lengths = self.lengths
        while todo:
            w = max(todo, key=_deglex)
            c = todo.pop(w)
            hit = next(((k, L) for L in lengths for k in range(len(w) - L + 1) if w[k:k + L] in self.rules), None)
            if hit is None:
                _add_into(out, w, c)
                continue
            k, L = hit
            for w2, d in self.rules[w[k:k + L]]:
                _add_into(todo, w[:k] + w2 + w[k + L:], c * d)
        return out

    def _overlaps(self, u: Word, v: Word):
        """Words s t r with u = s t and v = t r, t nonempty and proper in both."""
        for t in range(1, min(len(u), len(v))):
            if u[len(u) - t:] == v[:t]:
                yield u + v[t:], len(u) - t

    def _complete(self) -> None:
        done = set()
        while True:
            pending = []
            for u, v in itertools.product(list(self.rules), repeat=2):
                for word, k in self._overlaps(u, v):
                    if (u, v, k) in done:
                        continue
                    if len(word) > self.max_degree:
                        self.truncated = True
                    else:
                        pending.append((len(word), u, v, k, word))
            if not pending:
                return
            pending.sort()
            added = False
            for _, u, v, k, word in pending:
                done.add((u, v, k))
                if u not in self.rules or v not in self.rules:
                    continue
                left: Dict[Word, QRat] = {}
                for w2, c in self.rules[u]:
                    _add_into(left, w2 + word[len(u):], c)
                for w2, c in self.rules[v]:
                    _add_into(left, word[:k] + w2, -c)
                diff = self._reduce(left)
                if diff:
                    self._add_rule(diff)
                    added = True
                    break  # new rule: recompute the overlap list
            if not added:
                return


def build_relations(r_prime: RMatrixData, orientation: str = "covector") -> RelationSet:
    """Degree-2 relations read off R'.

    ``covector``:  x_i x_j = x_b x_a R'^a_i^b_j
    ``vector``:    p^i p^j = R'^i_a^j_b p^b p^a
    ``conformal``: c_j c_i = c_a c_b R'^a_i^b_j
    """
    n = r_prime.n
    raw = []
    for i in range(n):
        for j in range(n):
            row: Dict[Word, QRat] = {}
            if orientation == "covector":
                row[(i, j)] = ONE
                for a, b, v in r_prime.by_lower().get((i, j), ()):
                    _add_into(row, (b, a), -v)
            elif orientation == "vector":
                row[(i, j)] = ONE
                for a, b, v in r_prime.by_upper().get((i, j), ()):
                    _add_into(row, (b, a), -v)
            elif orientation == "conformal":
                row[(j, i)] = ONE
                for a, b, v in r_prime.by_lower().get((i, j), ()):
                    _add_into(row, (a, b), -v)
            else:
                raise NCAlgebraError(f"unknown orientation {orientation!r}")
            raw.append(row)
    order = sorted(itertools.product(range(n), repeat=2), reverse=True)
    return RelationSet(n, linalg.rref(raw, order), orientation)


class NCAlgebra:
    """The quotient of the free algebra by a :class:`RelationSet`."""

    def __init__(self, rels: RelationSet, letter: str = "x", aliases: Optional[Sequence[str]] = None):
        self.rels = rels
        self.n = rels.n
        self.letter = letter
        self.aliases = list(aliases) if aliases else None
        self._nf: Dict[Word, Terms] = {}
        self._normal_words: Dict[int, List[Word]] = {}

    @classmethod
    def from_rmatrix(cls, r_prime: RMatrixData, orientation: str = "covector", letter: str = "x") -> "NCAlgebra":
        return cls(build_relations(r_prime, orientation), letter)

    # normal forms -----------------------------------------------------------
    def normal_form(self, word: Word) -> Terms:
        """Normal form of a single word (memoized; callers must not mutate)."""
        hit = self._nf.get(word)
        if hit is not None:
            return hit
        if self.rels.truncated and len(word) > self.rels.max_degree:
            raise NCAlgebraError(f"normal forms are only known up to degree {self.rels.max_degree} "
                                 f"for these relations (word of degree {len(word)})")
        rules = self.rels.rules
        for L, k in ((L, k) for L in self.rels.lengths for k in range(len(word) - L + 1)):
            tail = rules.get(word[k:k + L])
            if tail is not None:
                out: Terms = {}
                head, rest = word[:k], word[k + L:]
                for w2, c in tail:
                    for w, d in self.normal_form(head + w2 + rest).items():
                        _add_into(out, w, c * d)
                self._nf[word] = out
                return out
        out = {word: ONE}
        self._nf[word] = out
        return out

    def reduce(self, raw: Mapping[Word, QRat]) -> "NCPoly":
        out: Terms = {}
        for w, c in raw.items():
            if not c:
                continue
            for v, d in self.normal_form(tuple(w)).items():
                _add_into(out, v, c * d)
        return NCPoly(out, self)

    def is_normal(self, word: Word) -> bool:
        rules = self.rels.rules
        return not any(word[k:k + L] in rules for L in self.rels.lengths for k in range(len(word) - L + 1))

    def normal_words(self, degree: int) -> List[Word]:
        """Normal words of a given degree in increasing monomial order."""
        if degree not in self._normal_words:
            if degree == 0:
                words = [()]
            else:
                rules, lengths = self.rels.rules, self.rels.lengths
                words = [w + (i,) for w in self.normal_words(degree - 1) for i in range(self.n)
                         if not any((w + (i,))[len(w) + 1 - L:] in rules for L in lengths if L <= len(w) + 1)]
                words.sort()
            self._normal_words[degree] = words
        return self._normal_words[degree]

    def basis_upto(self, degree: int) -> List[Word]:
        return [w for d in range(degree + 1) for w in self.normal_words(d)]

    # constructors -------------------------------------------------------------
    def zero(self) -> "NCPoly":
        return NCPoly({}, self)

    def one(self) -> "NCPoly":
        return NCPoly({(): ONE}, self)

    def gen(self, i: int) -> "NCPoly":
        return NCPoly({(i,): ONE}, self)

    def word(self, w: Word) -> "NCPoly":
        return self.reduce({tuple(w): ONE})

    def scalar(self, c) -> "NCPoly":
        c = as_qrat(c)
        return NCPoly({(): c} if c else {}, self)

    # text -------------------------------------------------------------------
    def letter_name(self, i: int) -> str:
        if self.aliases:
            return self.aliases[i]
        return f"{self.letter}{i + 1}"

    def render_word(self, w: Word) -> str:
        return ".".join(self.letter_name(i) for i in w) if w else "1"

    def parse(self, text: str) -> "NCPoly":
        return _Parser(text, self).parse()


class NCPoly:
    """Reduced element of an :class:`NCAlgebra`.  Treat as immutable."""

    __slots__ = ("terms", "alg")

    def __init__(self, terms: Terms, alg: NCAlgebra):
        self.terms = terms
        self.alg = alg

    # arithmetic ---------------------------------------------------------------
    def __add__(self, other: "NCPoly") -> "NCPoly":
        if not isinstance(other, NCPoly):
            other = self.alg.scalar(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            _add_into(out, w, c)
        return NCPoly(out, self.alg)

    __radd__ = __add__

    def __neg__(self) -> "NCPoly":
        return NCPoly({w: -c for w, c in self.terms.items()}, self.alg)

    def __sub__(self, other: "NCPoly") -> "NCPoly":
        if not isinstance(other, NCPoly):
            other = self.alg.scalar(other)
        return self + (-other)

    def __rsub__(self, other) -> "NCPoly":
        return self.alg.scalar(other) - self

    def scale(self, c) -> "NCPoly":
        c = as_qrat(c)
        if not c:
            return NCPoly({}, self.alg)
        return NCPoly({w: v * c for w, v in self.terms.items()}, self.alg)

    def __mul__(self, other) -> "NCPoly":
        if isinstance(other, NCPoly):
            raw: Terms = {}
            for u, a in self.terms.items():
                for v, b in other.terms.items():
                    _add_into(raw, u + v, a * b)
            return self.alg.reduce(raw)
        return self.scale(other)

    def __rmul__(self, other) -> "NCPoly":
        return self.scale(other)

    def __truediv__(self, other) -> "NCPoly":
        return self.scale(as_qrat(other).inverse())

    def __pow__(self, k: int) -> "NCPoly":
        out = self.alg.one()
        for _ in range(k):
            out = out * self
        return out

    # predicates -------------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, NCPoly):
            return self.terms == other.terms
        if isinstance(other, (int, QRat)):
            return self.terms == self.alg.scalar(other).terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degrees(self) -> set:
        return {len(w) for w in self.terms}

    def coefficient(self, word: Word) -> QRat:
        return self.terms.get(tuple(word), ZERO)

    def map_coefficients(self, fn) -> "NCPoly":
        out: Terms = {}
        for w, c in self.terms.items():
            v = as_qrat(fn(c))
            if v:
                out[w] = v
        return NCPoly(out, self.alg)

    # text -------------------------------------------------------------------
    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms, key=lambda u: (len(u), u)):
            c = self.terms[w]
            word = self.alg.render_word(w)
            if c == 1:
                parts.append(word)
            elif c == -1:
                parts.append(f"-{word}" if w else "-1")
            elif not w:
                parts.append(f"({render_coeff(c)})")
            else:
                parts.append(f"({render_coeff(c)})*{word}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    __str__ = render

    def __repr__(self) -> str:
        return f"NCPoly({self.render()})"


def render_coeff(c: QRat) -> str:
    return c.render().replace(" ", "")


# ---------------------------------------------------------------------------
# parser: sums of products of integers, q, generators and parentheses
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z]\w*)|(\^-?\d+)|(.))")


class _Parser:
    def __init__(self, text: str, alg: NCAlgebra):
        self.alg = alg
        self.text = text
        self.tokens = []
        pos = 0
        text = text.replace("−", "-")
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                break
            pos = m.end()
            num, name, power, sym = m.groups()
            if num is not None:
                self.tokens.append(("int", int(num)))
            elif name is not None:
                self.tokens.append(("name", name))
            elif power is not None:
                self.tokens.append(("pow", int(power[1:])))
            elif sym is not None and not sym.isspace():
                self.tokens.append(("sym", sym))
        self.i = 0
        names = {}
        for k in range(alg.n):
            names[alg.letter_name(k)] = k
            names[f"{alg.letter}{k + 1}"] = k
        self.names = names

    def _peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def _error(self, msg: str):
        raise NCAlgebraError(f"cannot parse {self.text!r}: {msg} at token {self.i + 1}")

    def parse(self) -> NCPoly:
        if not self.tokens:
            self._error("empty expression")
        v = self._expr()
        if self.i != len(self.tokens):
            self._error(f"unexpected {self._peek()[1]!r}")
        return v

    def _expr(self) -> NCPoly:
        kind, val = self._peek()
        neg = False
        if kind == "sym" and val in "+-":
            neg = val == "-"
            self.i += 1
        v = self._term()
        if neg:
            v = -v
        while True:
            kind, val = self._peek()
            if kind == "sym" and val in "+-":
                self.i += 1
                t = self._term()
                v = v + t if val == "+" else v - t
            else:
                return v

    def _term(self) -> NCPoly:
        v = self._factor()
        while True:
            kind, val = self._peek()
            if kind == "sym" and val in "*.":
                self.i += 1
                v = v * self._factor()
            elif kind == "sym" and val == "/":
                self.i += 1
                d = self._factor()
                if d.degrees() - {0}:
                    self._error("division by a non-scalar")
                if not d:
                    self._error("division by zero")
                v = v / d.coefficient(())
            elif kind in ("int", "name") or (kind == "sym" and val == "("):
                v = v * self._factor()  # juxtaposition
            else:
                return v

    def _factor(self) -> NCPoly:
        kind, val = self._peek()
        if kind == "sym" and val == "-":
            self.i += 1
            return -self._factor()
        base = self._atom()
        kind, val = self._peek()
        if kind == "pow":
            self.i += 1
            if val < 0:
                if base.degrees() - {0} or not base:
                    self._error("negative power of a non-scalar")
                return self.alg.scalar(base.coefficient(()) ** val)
            return base ** val
        return base

    def _atom(self) -> NCPoly:
        kind, val = self._peek()
        self.i += 1
        if kind == "int":
            return self.alg.scalar(val)
        if kind == "name":
            if val == "q":
                return self.alg.scalar(Q_GEN)
            if val in self.names:
                return self.alg.gen(self.names[val])
            self.i -= 1
            self._error(f"unknown symbol {val!r}")
        if kind == "sym" and val == "(":
            v = self._expr()
            k2, v2 = self._peek()
            if not (k2 == "sym" and v2 == ")"):
                self._error("missing ')'")
            self.i += 1
            return v
        self.i -= 1
        self._error("unexpected end of input" if kind is None else f"unexpected {val!r}")


# ---------------------------------------------------------------------------
# rewriting checks
# ---------------------------------------------------------------------------

def reduce(p: Mapping[Word, QRat], rels: RelationSet) -> NCPoly:
    return NCAlgebra(rels).reduce(p)


@timed
def check_confluence(rels: RelationSet, degree: int = 3) -> VerificationReport:
    """Every first rewriting step of every word of the given degree ends at one normal form."""
    alg = NCAlgebra(rels)
    n = rels.n
    params = {"degree": degree, "relations": rels.dimension}
    if len(rels.rules) > rels.quadratic:
        params["completion_rules"] = len(rels.rules) - rels.quadratic
    for word in itertools.product(range(n), repeat=degree):
        results = []
        for L, k in ((L, k) for L in rels.lengths for k in range(degree - L + 1)):
            tail = rels.rules.get(word[k:k + L])
            if tail is None:
                continue
            raw: Terms = {}
            for w2, c in tail:
                _add_into(raw, word[:k] + w2 + word[k + L:], c)
            results.append((k, alg.reduce(raw)))
        for k, r in results[1:]:
            if r != results[0][1]:
                return VerificationReport.failed(
                    "confluence", f"word {alg.render_word(word)}: step at {results[0][0] + 1} gives "
                                  f"{results[0][1].render()}, step at {k + 1} gives {r.render()}", params)
    return VerificationReport.passed("confluence", params)


# ---------------------------------------------------------------------------
# braiding and braided antipode
# ---------------------------------------------------------------------------

class Braiding:
    """Psi(x_i (x) x_j) = x_b (x) x_a R^a_i^b_j, extended to words by crossings."""

    def __init__(self, R: RMatrixData):
        self.R = R
        self._lookup = R.by_lower()
        self._memo: Dict[Tuple[Word, Word], TensorTerms] = {}

    def words(self, u: Word, v: Word) -> TensorTerms:
        key = (u, v)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if not u or not v:
            out = {(v, u): ONE}
        elif len(u) == 1:
            i = u[0]
            out = {}
            for a, b, c in self._lookup.get((i, v[0]), ()):
                for (w, y), d in self.words((a,), v[1:]).items():
                    _add_into(out, ((b,) + w, y), c * d)
        else:
            out = {}
            for (v2, y), c in self.words(u[-1:], v).items():
                for (w, x), d in self.words(u[:-1], v2).items():
                    _add_into(out, (w, x + y), c * d)
        self._memo[key] = out
        return out


def braiding(a: NCPoly, b: NCPoly, R: RMatrixData, psi: Optional[Braiding] = None) -> TensorTerms:
    """Psi(a (x) b) with both output slots reduced in the algebra of ``a``."""
    psi = psi or Braiding(R)
    alg = a.alg
    raw: TensorTerms = {}
    for u, c in a.terms.items():
        for v, d in b.terms.items():
            for key, e in psi.words(u, v).items():
                _add_into(raw, key, c * d * e)
    return reduce_tensor(raw, alg, b.alg)


def reduce_tensor(raw: TensorTerms, left: NCAlgebra, right: NCAlgebra) -> TensorTerms:
    out: TensorTerms = {}
    for (u, v), c in raw.items():
        nu = left.normal_form(u)
        nv = right.normal_form(v)
        for w1, a in nu.items():
            for w2, b in nv.items():
                _add_into(out, (w1, w2), c * a * b)
    return out


def tensor_of(a: NCPoly, b: NCPoly) -> TensorTerms:
    out: TensorTerms = {}
    for u, c in a.terms.items():
        for v, d in b.terms.items():
            _add_into(out, (u, v), c * d)
    return out


def multiply_tensor(t: TensorTerms, alg: NCAlgebra) -> NCPoly:
    raw: Terms = {}
    for (u, v), c in t.items():
        _add_into(raw, u + v, c)
    return alg.reduce(raw)


def render_tensor(t: TensorTerms, left: NCAlgebra, right: Optional[NCAlgebra] = None) -> str:
    right = right or left
    if not t:
        return "0"
    parts = []
    for (u, v) in sorted(t, key=lambda k: (len(k[0]) + len(k[1]), k)):
        parts.append(f"({render_coeff(t[(u, v)])})*{left.render_word(u)} (x) {right.render_word(v)}")
    return " + ".join(parts)


def braided_coaddition(w: Word, alg: NCAlgebra, psi: Braiding) -> TensorTerms:
    """Delta(x_i) = x_i (x) 1 + 1 (x) x_i, extended to words in the braided tensor product."""
    out: TensorTerms = {((), ()): ONE}
    for i in reversed(w):
        nxt: TensorTerms = {}
        for (a, b), c in out.items():
            _add_into(nxt, ((i,) + a, b), c)
            for (a2, x), d in psi.words((i,), a).items():
                _add_into(nxt, (a2, x + b), c * d)
        out = nxt
    return reduce_tensor(out, alg, alg)


class BraidedAntipode:
    """S(x_i) = -x_i extended braided-antimultiplicatively, S(ab) = .Psi(Sa (x) Sb)."""

    def __init__(self, alg: NCAlgebra, R: RMatrixData):
        self.alg = alg
        self.psi = Braiding(R)
        self._memo: Dict[Word, Terms] = {}

    def word(self, w: Word) -> Terms:
        hit = self._memo.get(w)
        if hit is not None:
            return hit
        if len(w) <= 1:
            out = {w: ONE if not w else -ONE}
        else:
            out = {}
            rest = self.word(w[1:])
            for v, c in rest.items():
                for (v2, y), d in self.psi.words(w[:1], v).items():
                    _add_into(out, v2 + y, -c * d)
            out = self.alg.reduce(out).terms
        self._memo[w] = out
        return out

    def __call__(self, p: NCPoly) -> NCPoly:
        raw: Terms = {}
        for w, c in p.terms.items():
            for v, d in self.word(w).items():
                _add_into(raw, v, c * d)
        return self.alg.reduce(raw)


def braided_antipode(p: NCPoly, R: RMatrixData) -> NCPoly:
    return BraidedAntipode(p.alg, R)(p)


# ---------------------------------------------------------------------------
# quadratic metric element
# ---------------------------------------------------------------------------

def metric_square(eta: MetricData, alg: NCAlgebra, check_central: bool = True) -> NCPoly:
    """x.x = x_a x_b eta^{ba}, reduced."""
    raw: Terms = {}
    up = eta.eta_upper
    for a in range(eta.n):
        for b in range(eta.n):
            if up[b][a]:
                _add_into(raw, (a, b), up[b][a])
    xx = alg.reduce(raw)
    if check_central:
        for i in range(alg.n):
            g = alg.gen(i)
            if xx * g != g * xx:
                raise NCAlgebraError("x.x not central")
    return xx
