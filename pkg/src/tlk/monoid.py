"""Positive monoid elements of a quotient presentation, as word classes.

Two positive words are equal iff one rewrites to the other by a chain of
single braid-relation substitutions; since every relation preserves
length, classes are computed per length by a fixpoint union-find over the
full word set.  The canonical representative of a class is its least word.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as _product

from .coxeter import CoxeterMatrix
from .errors import BudgetExceeded
from .twisted import TwistedContext

DEFAULT_WORD_CAP = 200_000


class _UnionFind:
    def __init__(self, size):
        self.parent = list(range(size))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[max(rx, ry)] = min(rx, ry)


def _alternating(x, y, m):
    return tuple((x, y)[k % 2] for k in range(m))


@dataclass(frozen=True)
class MonoidElement:
    word: tuple  # canonical (least) representative
    members: tuple  # every word in the class, sorted

    @property
    def length(self) -> int:
        return len(self.word)


def enumerate_elements(
    quotient: CoxeterMatrix, max_len: int, word_cap: int = DEFAULT_WORD_CAP
):
    """Equivalence classes of positive words, per length up to max_len."""
    gens = quotient.index_set
    relations = []
    for i_pos, i in enumerate(gens):
        for j in gens[i_pos + 1 :]:
            m = quotient.m(i, j)
            if m != float("inf"):
                relations.append((_alternating(i, j, m), _alternating(j, i, m)))
    by_length = {}
    for length in range(1, max_len + 1):
        if len(gens) ** length > word_cap:
            raise BudgetExceeded(
                f"{len(gens)}^{length} words exceeds the cap {word_cap}"
            )
        words = sorted(_product(gens, repeat=length))
        index = {w: k for k, w in enumerate(words)}
        uf = _UnionFind(len(words))
        for w in words:
            for left, right in relations:
                m = len(left)
                for pos in range(length - m + 1):
                    if w[pos : pos + m] == left:
                        other = w[:pos] + right + w[pos + m :]
                        uf.union(index[w], index[other])
        classes = {}
        for w in words:
            classes.setdefault(uf.find(index[w]), []).append(w)
        by_length[length] = [
            MonoidElement(min(ws), tuple(sorted(ws)))
            for ws in sorted(classes.values())
        ]
    return by_length


def faithfulness_spotcheck(
    ctx: TwistedContext, max_len: int, word_cap: int = DEFAULT_WORD_CAP
) -> dict:
    """Exactness of the twisted representation on all classes up to a length.

    Soundness: all members of a class have equal images.  Injectivity on
    the sample: distinct classes (of any lengths) have distinct images.
    Collisions are reported, never raised; these representations are
    faithful, so a collision signals a bug.
    """
    classes = enumerate_elements(ctx.quotient, max_len, word_cap)
    ident = ctx.image_of_quotient_word(())
    images = {(): ident}

    def image(word):
        if word not in images:
            images[word] = image(word[:-1]) * ctx.gens[word[-1]].psi
        return images[word]

    per_length = []
    seen = {}
    collisions = []
    mismatches = []
    for length in sorted(classes):
        for element in classes[length]:
            base = image(element.word)
            for other in element.members:
                if other != element.word and image(other) != base:
                    mismatches.append(
                        {"wordA": list(element.word), "wordB": list(other)}
                    )
            fingerprint = base.rows
            if fingerprint in seen:
                collisions.append(
                    {"wordA": list(seen[fingerprint]), "wordB": list(element.word)}
                )
            else:
                seen[fingerprint] = element.word
        per_length.append(
            {
                "length": length,
                "classes": len(classes[length]),
                "words": len(ctx.quotient.index_set) ** length,
            }
        )
    return {
        "lengths": per_length,
        "collisions": collisions,
        "class_image_mismatches": mismatches,
        "pass": not collisions and not mismatches,
    }


def left_multiplication_consistent(ctx: TwistedContext, max_len: int = 3) -> bool:
    """Image of a concatenation equals the product of the images, sampled
    over all word pairs with combined length up to the bound."""
    gens = ctx.quotient.index_set
    words = [()]
    for length in range(1, max_len + 1):
        words.extend(_product(gens, repeat=length))
    for g in words:
        for h in words:
            if len(g) + len(h) > max_len:
                continue
            lhs = ctx.image_of_quotient_word(g + h)
            rhs = ctx.image_of_quotient_word(g) * ctx.image_of_quotient_word(h)
            if lhs != rhs:
                return False
    return True
