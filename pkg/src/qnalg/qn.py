"""The subset-indexed quadratic algebra and its normal-form engine.

Generators are indexed by a pair (A, i) with A a subset of {1..n} and
i an element outside A.  For every subset A and pair i != j outside A
the defining relations identify the two refinement orders linearly and
quadratically:

    z_{A+i,j} + z_{A,i} = z_{A+j,i} + z_{A,j}
    z_{A+i,j} * z_{A,i} = z_{A+j,i} * z_{A,j}

The linear relation makes the telescoping sums

    r(A) = r(A - a) + z_{A-a, a}     (any a in A, r({}) = 0)

well defined, and products r(B_1) ... r(B_l) indexed by *reduced*
strings (see `strings`) form a linear basis.  `NormalizationContext`
rewrites arbitrary generator words onto that basis with a memoized
prepend operator whose recursion is guarded by an explicit decreasing
measure, so nontermination is detected rather than looped on.

Elements are `QnElement` (reduced-basis form) or `WordSum` (free
rational combinations of generator words, the parser's target).
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations

from .commpoly import BoolePoly, CommPoly, one_plus_w
from .errors import NonTermination, ResourceLimit
from .strings import (
    MAX_DEGREE,
    MAX_N,
    bit,
    compare_strings,
    def_functions,
    elems,
    mask_size,
    string_degree,
    subset_str,
    subsets_of,
)

Word = tuple[tuple[int, int], ...]


def _accumulate(acc: dict, terms: dict, coeff: Fraction) -> None:
    if not coeff:
        return
    for key, val in terms.items():
        acc[key] = acc.get(key, Fraction(0)) + coeff * val


def _clean(acc: dict) -> dict:
    return {k: v for k, v in acc.items() if v}


class WordSum:
    """Rational combination of generator words, not normalized.

    A word is a tuple of (subset mask, element) letters; the empty word
    is the unit.  This is the free layer: arithmetic just concatenates
    and collects, and `NormalizationContext.normalize` maps it onto the
    reduced basis.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict[Word, Fraction] | None = None):
        self.n = n
        self.terms = _clean(terms or {})

    @classmethod
    def zero(cls, n: int) -> "WordSum":
        return cls(n)

    @classmethod
    def one(cls, n: int) -> "WordSum":
        return cls(n, {(): Fraction(1)})

    @classmethod
    def gen(cls, n: int, a_mask: int, i: int) -> "WordSum":
        validate_gen_index(n, a_mask, i)
        return cls(n, {((a_mask, i),): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, WordSum)
            and self.n == other.n
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __add__(self, other: "WordSum") -> "WordSum":
        out = dict(self.terms)
        _accumulate(out, other.terms, Fraction(1))
        return WordSum(self.n, out)

    def __neg__(self) -> "WordSum":
        return WordSum(self.n, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "WordSum") -> "WordSum":
        return self + (-other)

    def __mul__(self, other: "WordSum") -> "WordSum":
        out: dict[Word, Fraction] = {}
        for wa, ca in self.terms.items():
            for wb, cb in other.terms.items():
                key = wa + wb
                out[key] = out.get(key, Fraction(0)) + ca * cb
        return WordSum(self.n, out)

    def scale(self, c) -> "WordSum":
        c = Fraction(c)
        return WordSum(self.n, {k: c * v for k, v in self.terms.items()})

    def render(self) -> str:
        if not self.terms:
            return "0"
        def word_str(w):
            return "*".join(f"z{subset_str(a)},{{{i}}}" for a, i in w)
        pieces = []
        for w in sorted(self.terms, key=lambda w: (len(w), w)):
            c = self.terms[w]
            body = word_str(w)
            if not body:
                body = str(abs(c))
            elif abs(c) != 1:
                body = f"{abs(c)} {body}"
            pieces.append(("- " if c < 0 else "+ ") + body)
        first = pieces[0]
        head = ("-" + first[2:]) if first.startswith("- ") else first[2:]
        return " ".join([head] + pieces[1:])

    def __repr__(self):
        return f"WordSum({self.render()})"


def validate_gen_index(n: int, a_mask: int, i: int) -> None:
    universe = (1 << n) - 1
    if not 1 <= i <= n:
        raise ValueError(f"generator element {i} outside 1..{n}")
    if a_mask & ~universe:
        raise ValueError("generator subset has elements outside the ground set")
    if a_mask & bit(i):
        raise ValueError(f"generator element {i} must lie outside its subset")


def r_word(n: int, a_mask: int) -> WordSum:
    """The subset sum r(A) expanded along the ascending chain of A."""
    terms: dict[Word, Fraction] = {}
    prefix = 0
    for a in elems(a_mask):
        terms[((prefix, a),)] = Fraction(1)
        prefix |= bit(a)
    return WordSum(n, terms)


def u_word(n: int, d_mask: int) -> WordSum:
    """Top Moebius transform of r over the subsets of D."""
    out = WordSum.zero(n)
    for e_mask in subsets_of(d_mask):
        sign = -1 if ((mask_size(d_mask) - mask_size(e_mask)) % 2) else 1
        out = out + r_word(n, e_mask).scale(sign)
    return out


def lambda_word(n: int, k: int, a_mask: int) -> WordSum:
    """Degree-k symmetric sum over A in word form.

    Sum over strictly decreasing k-tuples i_1 > ... > i_k from A of the
    products y_{i_1} ... y_{i_k}, where y_i is the generator indexed by
    (elements of A below i, i).  Adapted to A: the subset in each letter
    is cut out of A itself.
    """
    if k == 0:
        return WordSum.one(n)
    members = elems(a_mask)
    if k > len(members):
        return WordSum.zero(n)
    terms: dict[Word, Fraction] = {}
    for combo in combinations(reversed(members), k):
        word = []
        for i in combo:
            below = a_mask & (bit(i) - 1)
            word.append((below, i))
        terms[tuple(word)] = Fraction(1)
    return WordSum(n, terms)


class QnElement:
    """Element in reduced-basis form: map from reduced strings to
    rational coefficients.  The empty string is the unit."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict[tuple[int, ...], Fraction] | None = None):
        self.n = n
        self.terms = _clean(terms or {})

    @classmethod
    def zero(cls, n: int) -> "QnElement":
        return cls(n)

    @classmethod
    def one(cls, n: int) -> "QnElement":
        return cls(n, {(): Fraction(1)})

    @classmethod
    def basis(cls, n: int, bs) -> "QnElement":
        return cls(n, {tuple(bs): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, QnElement)
            and self.n == other.n
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __add__(self, other: "QnElement") -> "QnElement":
        out = dict(self.terms)
        _accumulate(out, other.terms, Fraction(1))
        return QnElement(self.n, out)

    def __neg__(self) -> "QnElement":
        return QnElement(self.n, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "QnElement") -> "QnElement":
        return self + (-other)

    def scale(self, c) -> "QnElement":
        c = Fraction(c)
        return QnElement(self.n, {k: c * v for k, v in self.terms.items()})

    def degree(self) -> int:
        return max((string_degree(k) for k in self.terms), default=0)

    def render(self) -> str:
        """Canonical text: terms by descending degree, then ascending
        (length, entries); coefficient 1 is left implicit."""
        if not self.terms:
            return "0"
        def term_key(bs):
            return (-string_degree(bs), len(bs), tuple(elems(b) for b in bs))
        pieces = []
        for bs in sorted(self.terms, key=term_key):
            c = self.terms[bs]
            body = "".join("r" + subset_str(b) for b in bs)
            if not body:
                body = str(abs(c))
            elif abs(c) != 1:
                body = f"{abs(c)} {body}"
            pieces.append(("- " if c < 0 else "+ ") + body)
        first = pieces[0]
        head = ("-" + first[2:]) if first.startswith("- ") else first[2:]
        return " ".join([head] + pieces[1:])

    def __repr__(self):
        return f"QnElement({self.render()})"


class NormalizationContext:
    """Rewriting engine for one fixed ground-set size n.

    Carries the memo table for the prepend operator (`star`), so reuse
    one context per n.  All public methods return canonical-form
    results; inputs may be QnElement or WordSum where documented.
    """

    def __init__(self, n: int):
        if not 1 <= n <= MAX_N:
            raise ResourceLimit(f"n must be between 1 and {MAX_N}")
        self.n = n
        self.universe = (1 << n) - 1
        self._memo: dict[tuple[int, tuple[int, ...]], dict] = {}

    # -- the prepend operator -----------------------------------------

    def _star_string(self, b_mask: int, bs: tuple[int, ...], limit=None, parent=None):
        """Terms of (prepend subset b_mask) applied to basis string bs.

        limit/parent carry the measure of the calling pair; every
        recursive call must be strictly smaller, first by total degree
        |B| + deg(string), ties broken by the primed string order.
        """
        if parent is not None:
            mine = mask_size(b_mask) + string_degree(bs)
            if mine > limit or (
                mine == limit
                and (len(bs) != len(parent) or compare_strings(bs, parent, primed=True) != -1)
            ):
                raise NonTermination(
                    f"rewriting measure failed to decrease at "
                    f"{subset_str(b_mask)} * {[subset_str(b) for b in bs]}"
                )
        if b_mask == 0:
            return {}
        key = (b_mask, bs)
        cached = self._memo.get(key)
        if cached is not None:
            return cached
        if not bs:
            res = {(b_mask,): Fraction(1)}
        else:
            d, _, f = def_functions(b_mask, bs)
            if d == f:
                res = {(b_mask,) + bs: Fraction(1)}
            else:
                # Exchange step: rewrite the bad prepend through the
                # quadratic relation, then recurse on smaller pairs.
                tail = bs[1:]
                b_f = b_mask & ~bit(f)
                b_d = b_mask & ~bit(d)
                b_df = b_mask & ~(bit(d) | bit(f))
                mine = mask_size(b_mask) + string_degree(bs)
                inner_f = self._star_string(b_f, tail, mine, bs)
                inner_d = self._star_string(b_d, tail, mine, bs)
                inner_df = self._star_string(b_df, tail, mine, bs)
                acc: dict = {}
                _accumulate(acc, self._star_terms(b_mask, inner_f, mine, bs), Fraction(1))
                _accumulate(acc, self._star_terms(b_d, inner_df, mine, bs), Fraction(-1))
                _accumulate(acc, self._star_terms(b_f, inner_df, mine, bs), Fraction(1))
                _accumulate(acc, self._star_terms(b_d, inner_d, mine, bs), Fraction(1))
                _accumulate(acc, self._star_terms(b_f, inner_f, mine, bs), Fraction(-1))
                res = _clean(acc)
        self._memo[key] = res
        return res

    def _star_terms(self, b_mask: int, terms: dict, limit, parent) -> dict:
        acc: dict = {}
        for bs, c in terms.items():
            _accumulate(acc, self._star_string(b_mask, bs, limit, parent), c)
        return _clean(acc)

    def star(self, b_mask: int, x: "QnElement") -> "QnElement":
        """Left-prepend the subset letter r(B) onto an element."""
        self._check_subset(b_mask)
        return QnElement(self.n, self._star_terms(b_mask, x.terms, None, None))

    # -- normalization -------------------------------------------------

    def normalize_string(self, bs) -> "QnElement":
        """Reduced-basis form of the product r(B_1) ... r(B_l)."""
        bs = tuple(bs)
        for b in bs:
            self._check_subset(b)
        if string_degree(bs) > MAX_DEGREE:
            raise ResourceLimit(f"string degree exceeds {MAX_DEGREE}")
        acc = {(): Fraction(1)}
        for b in reversed(bs):
            acc = self._star_terms(b, acc, None, None)
        return QnElement(self.n, acc)

    def normalize_word(self, word: Word) -> "QnElement":
        """Reduced-basis form of one generator word."""
        for a_mask, i in word:
            validate_gen_index(self.n, a_mask, i)
        if sum(mask_size(a) + 1 for a, _ in word) > MAX_DEGREE:
            raise ResourceLimit(f"word degree exceeds {MAX_DEGREE}")
        # Each letter (A, i) is the difference r(A+i) - r(A); expand
        # the product into signed subset strings, then fold each.
        strings: dict[tuple[int, ...], Fraction] = {(): Fraction(1)}
        for a_mask, i in word:
            nxt: dict[tuple[int, ...], Fraction] = {}
            for s, c in strings.items():
                up = s + (a_mask | bit(i),)
                nxt[up] = nxt.get(up, Fraction(0)) + c
                if a_mask:
                    low = s + (a_mask,)
                    nxt[low] = nxt.get(low, Fraction(0)) - c
            strings = nxt
        out: dict = {}
        for s, c in strings.items():
            _accumulate(out, self.normalize_string(s).terms, c)
        return QnElement(self.n, out)

    def normalize(self, x) -> "QnElement":
        """Reduced-basis form of a WordSum (QnElement passes through)."""
        if isinstance(x, QnElement):
            return x
        out: dict = {}
        for word, c in x.terms.items():
            _accumulate(out, self.normalize_word(word).terms, c)
        return QnElement(self.n, out)

    # -- ring operations ------------------------------------------------

    def mul(self, a: "QnElement", b: "QnElement") -> "QnElement":
        out: dict = {}
        for ka, ca in a.terms.items():
            for kb, cb in b.terms.items():
                _accumulate(out, self.normalize_string(ka + kb).terms, ca * cb)
        return QnElement(self.n, out)

    def r_element(self, a_mask: int) -> "QnElement":
        self._check_subset(a_mask)
        if a_mask == 0:
            return QnElement.zero(self.n)
        return QnElement.basis(self.n, (a_mask,))

    def z_element(self, a_mask: int, i: int) -> "QnElement":
        """The generator (A, i) in basis form: r(A+i) - r(A)."""
        validate_gen_index(self.n, a_mask, i)
        return self.r_element(a_mask | bit(i)) - self.r_element(a_mask)

    # -- structure maps ---------------------------------------------------

    def derivation(self, x) -> "QnElement":
        """The derivation sending every generator to 1.

        On a basis string it removes one subset entry at a time with
        multiplicity the entry's size, since r(A) is a sum of |A|
        generators.
        """
        if isinstance(x, WordSum):
            out: dict = {}
            for word, c in x.terms.items():
                for k in range(len(word)):
                    sub = word[:k] + word[k + 1:]
                    _accumulate(out, self.normalize_word(sub).terms, c)
            return QnElement(self.n, out)
        out = {}
        for bs, c in x.terms.items():
            for q in range(len(bs)):
                sub = bs[:q] + bs[q + 1:]
                _accumulate(
                    out, self.normalize_string(sub).terms, c * mask_size(bs[q])
                )
        return QnElement(self.n, out)

    def _theta_word(self, word: Word) -> Word:
        out = []
        for a_mask, i in reversed(word):
            comp = self.universe & ~a_mask & ~bit(i)
            out.append((comp, i))
        return tuple(out)

    def antiautomorphism(self, x) -> "QnElement":
        """The involutive antiautomorphism: reverses products and sends
        the generator (A, i) to (complement of A+i, i)."""
        if isinstance(x, QnElement):
            x = self.to_word_sum(x)
        out: dict = {}
        for word, c in x.terms.items():
            _accumulate(out, self.normalize_word(self._theta_word(word)).terms, c)
        return QnElement(self.n, out)

    def apply_permutation(self, sigma, x):
        """Relabel by a permutation of {1..n} (automorphism).

        sigma is a sequence with sigma[k-1] the image of k.  WordSum in,
        WordSum out (letterwise relabeling); QnElement in, QnElement out
        (relabeled strings renormalized).
        """
        sig = tuple(sigma)
        if sorted(sig) != list(range(1, self.n + 1)):
            raise ValueError(f"not a permutation of 1..{self.n}: {sig}")

        def map_mask(m: int) -> int:
            out = 0
            for e in elems(m):
                out |= bit(sig[e - 1])
            return out

        if isinstance(x, WordSum):
            terms: dict[Word, Fraction] = {}
            for word, c in x.terms.items():
                new = tuple((map_mask(a), sig[i - 1]) for a, i in word)
                terms[new] = terms.get(new, Fraction(0)) + c
            return WordSum(self.n, terms)
        out: dict = {}
        for bs, c in x.terms.items():
            image = tuple(map_mask(b) for b in bs)
            _accumulate(out, self.normalize_string(image).terms, c)
        return QnElement(self.n, out)

    def to_word_sum(self, x: "QnElement") -> "WordSum":
        """Expand basis strings back into generator words."""
        out = WordSum.zero(self.n)
        for bs, c in x.terms.items():
            prod = WordSum.one(self.n)
            for b in bs:
                prod = prod * r_word(self.n, b)
            out = out + prod.scale(c)
        return out

    # -- two-subset calculus ---------------------------------------------

    def z_AB(self, a_mask: int, b_mask: int) -> "QnElement":
        """Element indexed by a pair of disjoint subsets.

        Defined through the doubly indexed family interpolating between
        the generators (|B| = 1) and the subset sums r(A) (B empty);
        zero when A and B intersect.  Computed as the sum of the top
        Moebius transforms u(D) over B <= D <= A+B.
        """
        self._check_subset(a_mask)
        self._check_subset(b_mask)
        if a_mask & b_mask:
            return QnElement.zero(self.n)
        coeffs: dict[int, int] = {}
        for extra in subsets_of(a_mask):
            d = b_mask | extra
            size_d = mask_size(d)
            for e_mask in subsets_of(d):
                if e_mask == 0:
                    continue
                sign = -1 if ((size_d - mask_size(e_mask)) % 2) else 1
                coeffs[e_mask] = coeffs.get(e_mask, 0) + sign
        return QnElement(
            self.n, {(e,): Fraction(c) for e, c in coeffs.items() if c}
        )

    def z_AB_theta_image(self, a_mask: int, b_mask: int) -> "QnElement":
        """Predicted antiautomorphism image of z_AB for nonempty B:
        (-1)^(|B|+1) times the element indexed by (complement of A+B, B)."""
        if b_mask == 0:
            raise ValueError("the sign formula needs a nonempty second subset")
        comp = self.universe & ~(a_mask | b_mask)
        sign = 1 if (mask_size(b_mask) + 1) % 2 == 0 else -1
        return self.z_AB(comp, b_mask).scale(sign)

    # -- symmetric elements ------------------------------------------------

    def lambda_k(self, k: int, a_mask: int, method: str = "recursion") -> "QnElement":
        """Degree-k symmetric element of the subset A.

        recursion: peel the largest element a of A by
            L_k(A) = L_k(A-a) + (r(A) - r(A-a)) L_{k-1}(A-a).
        closed_form: normalize the word expansion of the descending
        products (see lambda_word).
        """
        self._check_subset(a_mask)
        if k < 0:
            raise ValueError("k must be nonnegative")
        if method == "closed_form":
            return self.normalize(lambda_word(self.n, k, a_mask))
        if method != "recursion":
            raise ValueError("method must be 'recursion' or 'closed_form'")
        return self._lambda_rec(k, a_mask, {})

    def _lambda_rec(self, k: int, a_mask: int, memo: dict) -> "QnElement":
        if k == 0:
            return QnElement.one(self.n)
        if mask_size(a_mask) < k:
            return QnElement.zero(self.n)
        key = (k, a_mask)
        if key in memo:
            return memo[key]
        a = a_mask.bit_length()  # largest element
        rest = a_mask & ~bit(a)
        zfac = self.r_element(a_mask) - self.r_element(rest)
        res = self._lambda_rec(k, rest, memo) + self.mul(
            zfac, self._lambda_rec(k - 1, rest, memo)
        )
        memo[key] = res
        return res

    # -- specializations -----------------------------------------------------

    def specialize_psi(self, x) -> CommPoly:
        """Commutative specialization sending every generator (A, i)
        to the variable v_i."""
        n = self.n
        if isinstance(x, WordSum):
            out = CommPoly.zero(n)
            for word, c in x.terms.items():
                prod = CommPoly.const(n, c)
                for _, i in word:
                    prod = prod * CommPoly.variable(n, i)
                out = out + prod
            return out
        out = CommPoly.zero(n)
        for bs, c in x.terms.items():
            prod = CommPoly.const(n, c)
            for b in bs:
                lin = CommPoly.zero(n)
                for j in elems(b):
                    lin = lin + CommPoly.variable(n, j)
                prod = prod * lin
            out = out + prod
        return out

    def specialize_phi(self, x) -> BoolePoly:
        """Specialization into the quotient with w_i^2 = -w_i, sending
        the generator (A, i) to w_i times the product of (1 + w_j) over
        j in A.  Faithful on the span of the generators plus constants."""
        n = self.n
        if isinstance(x, WordSum):
            out = BoolePoly.zero(n)
            for word, c in x.terms.items():
                prod = BoolePoly.const(n, c)
                for a_mask, i in word:
                    prod = prod * (BoolePoly.variable(n, i) * one_plus_w(n, a_mask))
                out = out + prod
            return out
        out = BoolePoly.zero(n)
        for bs, c in x.terms.items():
            prod = BoolePoly.const(n, c)
            for b in bs:
                prod = prod * (one_plus_w(n, b) - BoolePoly.const(n, 1))
            out = out + prod
        return out

    def phi_preimage_in_span(self, target: BoolePoly) -> "QnElement":
        """Inverse of specialize_phi on span(1, generators), projected
        onto the span of the generators (the constant part is dropped).

        Solves for coefficients c_S in target = c_0 + sum c_S phi(r(S))
        by Moebius inversion of the subset-sum triangle.
        """
        t = dict(target.terms)
        coeffs: dict[int, Fraction] = {}
        for s_mask in range(1, 1 << self.n):
            total = Fraction(0)
            for sup in subsets_of(self.universe & ~s_mask):
                full = s_mask | sup
                c = t.get(full)
                if c:
                    total += c if (mask_size(sup) % 2 == 0) else -c
            if total:
                coeffs[s_mask] = total
        return QnElement(self.n, {(s,): c for s, c in coeffs.items()})

    # -- helpers -----------------------------------------------------------

    def _check_subset(self, mask: int) -> None:
        if mask & ~self.universe:
            raise ValueError("subset has elements outside the ground set")


_CONTEXTS: dict[int, NormalizationContext] = {}


def get_context(n: int) -> NormalizationContext:
    ctx = _CONTEXTS.get(n)
    if ctx is None:
        ctx = NormalizationContext(n)
        _CONTEXTS[n] = ctx
    return ctx


# Free-function forms of the context operations.

def normalize(x, ctx: NormalizationContext) -> QnElement:
    return ctx.normalize(x)


def star(b_mask: int, x: QnElement, ctx: NormalizationContext) -> QnElement:
    return ctx.star(b_mask, x)


def mul(a: QnElement, b: QnElement, ctx: NormalizationContext) -> QnElement:
    return ctx.mul(a, b)


def derivation(x, ctx: NormalizationContext) -> QnElement:
    return ctx.derivation(x)


def antiautomorphism(x, ctx: NormalizationContext) -> QnElement:
    return ctx.antiautomorphism(x)


def apply_permutation(sigma, x, ctx: NormalizationContext):
    return ctx.apply_permutation(sigma, x)


def z_AB(a_mask: int, b_mask: int, ctx: NormalizationContext) -> QnElement:
    return ctx.z_AB(a_mask, b_mask)


def lambda_k(k: int, a_mask: int, ctx: NormalizationContext, method: str = "recursion") -> QnElement:
    return ctx.lambda_k(k, a_mask, method)


def specialize_psi(x, ctx: NormalizationContext) -> CommPoly:
    return ctx.specialize_psi(x)


def specialize_phi(x, ctx: NormalizationContext) -> BoolePoly:
    return ctx.specialize_phi(x)


def evaluate(x, roots, dctx):
    """Evaluate a WordSum or QnElement at a tuple of scalar roots.

    Each generator (A, i) goes to the conjugated root x_{A,i} built
    from the root tower over the division context dctx; products and
    sums are evaluated in the scalar ring.  Raises GenericityFailure
    if a needed conjugator is not invertible.
    """
    from .orepoly import RootTower

    n = len(roots)
    if isinstance(x, QnElement):
        nctx = get_context(n)
        if x.n != n:
            raise ValueError(f"element over n={x.n} but {n} roots given")
        x = nctx.to_word_sum(x)
    elif x.n != n:
        raise ValueError(f"element over n={x.n} but {n} roots given")
    tower = RootTower(dctx, roots)
    total = dctx.zero
    for word, c in x.terms.items():
        acc = dctx.from_rational(c)
        for a_mask, i in word:
            acc = acc * tower.x(a_mask, i)
        total = total + acc
    return total


MAX_RELATION_SUITE_N = 4


def relation_suite(n: int, ctx: NormalizationContext | None = None) -> list[dict]:
    """Normalize every instance of the defining identity families to zero.

    Families, over all subsets A and all i != j outside A (and over all
    disjoint pairs (A, B) where noted):

      pair-linear       z_{A+i,j} + z_{A,i} - z_{A+j,i} - z_{A,j}
      pair-quadratic    z_{A+i,j} z_{A,i} - z_{A+j,i} z_{A,j}
      exchange          z_{A+i,j}(z_{A,j} - z_{A,i}) - (z_{A,j} - z_{A,i})z_{A,j}
      braid             (r(A+i+j)-r(A+i))(r(A+i)-r(A+j))
                          - (r(A+i)-r(A+j))(r(A+j)-r(A))
      commutator        [z_{A,i}, z_{A,j}] - sum of u(D)(z_{A,i}-z_{A,j})
                          over {i,j} <= D <= A+{i,j}
      pair-shift        z_{A+i,B} - z_{A,B+i} - z_{A,B}, i outside A and B
      chain             r(A) minus the telescoping chain of generators,
                          for every ordering of A
      moebius           r(A) - sum of u(C) over C <= A
      pair-sigma        sigma(z_{A,B}) - z_{A,B} for permutations fixing
                          A and B setwise
      complement-expand z_{C,D} - signed sum of the complementary-pair
                          elements z_{A, comp A} over C <= A, A disj D
      complement-r      z_{A, comp A} - signed r-sum over C >= A
      complement-u      z_{A, comp A} - sum of u(D) over D >= comp A

    Returns a list of failure records; empty means every identity holds.
    """
    if not 1 <= n <= MAX_RELATION_SUITE_N:
        raise ResourceLimit(
            f"relation suite supports n between 1 and {MAX_RELATION_SUITE_N}")
    if ctx is None:
        ctx = get_context(n)
    failures: list[dict] = []
    universe = (1 << n) - 1

    def check(family: str, instance: str, x) -> None:
        el = ctx.normalize(x)
        if not el.is_zero():
            failures.append(
                {"family": family, "instance": instance, "value": el.render()}
            )

    for a_mask in range(1 << n):
        outside = [i for i in range(1, n + 1) if not a_mask & bit(i)]
        for i in outside:
            for j in outside:
                if i == j:
                    continue
                tag = f"A={subset_str(a_mask)},i={i},j={j}"
                zai = WordSum.gen(n, a_mask, i)
                zaj = WordSum.gen(n, a_mask, j)
                zaij = WordSum.gen(n, a_mask | bit(i), j)
                zaji = WordSum.gen(n, a_mask | bit(j), i)
                check("pair-linear", tag, zaij + zai - zaji - zaj)
                check("pair-quadratic", tag, zaij * zai - zaji * zaj)
                check(
                    "exchange",
                    tag,
                    zaij * (zaj - zai) - (zaj - zai) * zaj,
                )
                if i < j:
                    ra = r_word(n, a_mask)
                    rai = r_word(n, a_mask | bit(i))
                    raj = r_word(n, a_mask | bit(j))
                    raij = r_word(n, a_mask | bit(i) | bit(j))
                    check(
                        "braid",
                        tag,
                        (raij - rai) * (rai - raj)
                        - (rai - raj) * (raj - ra),
                    )
                    pair_mask = bit(i) | bit(j)
                    rhs = WordSum.zero(n)
                    for extra in subsets_of(a_mask):
                        rhs = rhs + u_word(n, pair_mask | extra) * (zai - zaj)
                    check(
                        "commutator",
                        tag,
                        zai * zaj - zaj * zai - rhs,
                    )

    # identities on the doubly indexed family
    for a_mask in range(1 << n):
        for b_mask in subsets_of(universe & ~a_mask):
            pair_tag = f"A={subset_str(a_mask)},B={subset_str(b_mask)}"
            zab = ctx.z_AB(a_mask, b_mask)
            for i in range(1, n + 1):
                if (a_mask | b_mask) & bit(i):
                    continue
                check(
                    "pair-shift",
                    pair_tag + f",i={i}",
                    ctx.z_AB(a_mask | bit(i), b_mask)
                    - ctx.z_AB(a_mask, b_mask | bit(i))
                    - zab,
                )
            for sigma in permutations(range(1, n + 1)):
                perm = {k + 1: sigma[k] for k in range(n)}
                if any(
                    not a_mask & bit(perm[e]) for e in elems(a_mask)
                ) or any(not b_mask & bit(perm[e]) for e in elems(b_mask)):
                    continue
                check(
                    "pair-sigma",
                    pair_tag + f",sigma={sigma}",
                    ctx.apply_permutation(perm, zab) - zab,
                )

    for a_mask in range(1 << n):
        members = elems(a_mask)
        for order in permutations(members):
            chain = WordSum.zero(n)
            prefix = 0
            for e in order:
                chain = chain + WordSum.gen(n, prefix, e)
                prefix |= bit(e)
            check(
                "chain",
                f"order={order}",
                r_word(n, a_mask) - chain,
            )
        moebius = WordSum.zero(n)
        for c_mask in subsets_of(a_mask):
            moebius = moebius + u_word(n, c_mask)
        check(
            "moebius",
            f"A={subset_str(a_mask)}",
            r_word(n, a_mask) - moebius,
        )

    # complementary pairs z_{A, comp A}
    comp_el = {
        a_mask: ctx.z_AB(a_mask, universe & ~a_mask)
        for a_mask in range(1 << n)
    }
    for a_mask in range(1 << n):
        comp = universe & ~a_mask
        tag = f"A={subset_str(a_mask)}"
        rsum = QnElement.zero(n)
        for c_mask in subsets_of(universe):
            if c_mask & a_mask == a_mask:
                sign = 1 if (n - mask_size(c_mask)) % 2 == 0 else -1
                rsum = rsum + ctx.r_element(c_mask).scale(sign)
        check("complement-r", tag, comp_el[a_mask] - rsum)
        usum = WordSum.zero(n)
        for d_mask in subsets_of(universe):
            if d_mask & comp == comp:
                usum = usum + u_word(n, d_mask)
        check("complement-u", tag, ctx.normalize(usum) - comp_el[a_mask])
    for c_mask in range(1 << n):
        for d_mask in subsets_of(universe & ~c_mask):
            expand = QnElement.zero(n)
            for a_mask in range(1 << n):
                if a_mask & c_mask != c_mask or a_mask & d_mask:
                    continue
                comp_size = n - mask_size(a_mask)
                sign = 1 if (comp_size - mask_size(d_mask)) % 2 == 0 else -1
                expand = expand + comp_el[a_mask].scale(sign)
            check(
                "complement-expand",
                f"C={subset_str(c_mask)},D={subset_str(d_mask)}",
                ctx.z_AB(c_mask, d_mask) - expand,
            )

    return failures


MAX_RS_N = 3


def check_RS_commute(n: int, ctx: NormalizationContext) -> list[dict]:
    """Exact commutator check for the diagonal/step matrix pair.

    For each anchor j, rows and columns are indexed by the subsets
    containing j.  The diagonal matrix holds r(B) - r(B-j); the step
    matrix has entry r(B-j) - r(B-i) in row B, column B-i for each
    i in B other than j.  Returns the list of nonzero commutator
    entries (empty when every pair commutes).
    """
    if not 1 <= n <= MAX_RS_N:
        raise ResourceLimit(f"commutator check supports n between 1 and {MAX_RS_N}")
    failures = []
    for j in range(1, n + 1):
        masks = [m for m in range(1, 1 << n) if m & bit(j)]
        index = {m: k for k, m in enumerate(masks)}
        size = len(masks)
        zero = QnElement.zero(n)
        rmat = [[zero] * size for _ in range(size)]
        smat = [[zero] * size for _ in range(size)]
        for b_mask in masks:
            row = index[b_mask]
            rmat[row][row] = ctx.r_element(b_mask) - ctx.r_element(b_mask & ~bit(j))
            for i in elems(b_mask):
                if i == j:
                    continue
                col = index[b_mask & ~bit(i)]
                smat[row][col] = ctx.r_element(b_mask & ~bit(j)) - ctx.r_element(
                    b_mask & ~bit(i)
                )
        for row in range(size):
            for col in range(size):
                entry = QnElement.zero(n)
                for mid in range(size):
                    entry = entry + ctx.mul(rmat[row][mid], smat[mid][col])
                    entry = entry - ctx.mul(smat[row][mid], rmat[mid][col])
                if not entry.is_zero():
                    failures.append(
                        {
                            "anchor": j,
                            "row": subset_str(masks[row]),
                            "col": subset_str(masks[col]),
                            "entry": entry.render(),
                        }
                    )
    return failures
