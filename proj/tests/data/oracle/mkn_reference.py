#!/usr/bin/env python3
"""Independent interpolated modified Kneser-Ney reference, written directly
from the textbook definitions with dictionaries and no shared code with the
C++ library. Used to freeze expected probability tables for tiny corpora where
lmplz refuses to estimate discounts.

Usage: mkn_reference.py CORPUS ORDER [TEXT]
Prints a JSON object with the discounts, the conditional probability of every
vocabulary word after every observed context, and (given TEXT) cross-entropy.
"""
import json
import math
import sys
from collections import defaultdict

BOS, EOS, UNK = "<s>", "</s>", "<unk>"


def read(path):
    with open(path) as f:
        return [line.split() for line in f if line.split()]


def discounts(counts):
    n = [0] * 5
    for c in counts:
        if 1 <= c <= 4:
            n[c] += 1
    out = []
    y = n[1] / (n[1] + 2 * n[2]) if n[1] + 2 * n[2] > 0 else None
    for k in (1, 2, 3):
        if y is None or n[k] == 0:
            out.append(0.5)
        else:
            out.append(max(0.0, min(k - (k + 1) * y * n[k + 1] / n[k], float(k))))
    return out


class Model:
    def __init__(self, sents, order):
        self.order = order
        raw = [defaultdict(int) for _ in range(order + 1)]
        self.vocab = [UNK, EOS]
        for s in sents:
            for w in s:
                if w not in self.vocab:
                    self.vocab.append(w)
            seq = [BOS] + s + [EOS]
            for i in range(1, len(seq)):
                for k in range(1, order + 1):
                    if i - k + 1 < 0:
                        break
                    raw[k][tuple(seq[i - k + 1:i + 1])] += 1
        # adjusted counts: highest order and <s>-initial grams keep raw counts,
        # everything else counts distinct left extensions
        self.adj = [dict() for _ in range(order + 1)]
        for k in range(1, order + 1):
            for g, c in raw[k].items():
                if k == order or g[0] == BOS:
                    self.adj[k][g] = c
            if k < order:
                left = defaultdict(set)
                for g in raw[k + 1]:
                    left[g[1:]].add(g[0])
                for g in raw[k]:
                    if g[0] != BOS:
                        self.adj[k][g] = len(left[g])
        self.ext = defaultdict(dict)
        for k in range(1, order + 1):
            for g, c in self.adj[k].items():
                self.ext[g[:-1]][g] = c
        self.disc = [None] + [discounts(self.adj[k].values()) for k in range(1, order + 1)]

    def D(self, k, c):
        return 0.0 if c == 0 else self.disc[k][min(c, 3) - 1]

    def prob(self, context, w):
        context = tuple(context[-(self.order - 1):]) if self.order > 1 else ()
        if w not in self.vocab:
            w = UNK
        return self._p(context, w)

    def _p(self, ctx, w):
        k = len(ctx) + 1
        ext = self.ext.get(ctx, {})
        if not ext:
            return self._p(ctx[1:], w)
        den = sum(ext.values())
        gamma = sum(self.D(k, c) for c in ext.values()) / den
        c = ext.get(ctx + (w,), 0)
        lower = 1.0 / (len(self.vocab)) if k == 1 else self._p(ctx[1:], w)
        return max(c - self.D(k, c), 0.0) / den + gamma * lower


def main():
    sents = read(sys.argv[1])
    order = int(sys.argv[2])
    m = Model(sents, order)
    contexts = set([()])
    for k in range(2, order + 1):
        contexts.update(g[:-1] for g in m.adj[k])
    table = {}
    for ctx in sorted(contexts) if len(sys.argv) <= 3 else []:
        if ctx and ctx[-1] == EOS:
            continue
        table[" ".join(ctx)] = {w: m.prob(list(ctx), w) for w in m.vocab}
    out = {"discounts": m.disc[1:]}
    if table:
        out["table"] = table
    if len(sys.argv) > 3:
        total, tokens = 0.0, 0
        for s in read(sys.argv[3]):
            hist = [BOS]
            for w in s + [EOS]:
                total += math.log2(m.prob(hist, w))
                tokens += 1
                hist.append(w if w in m.vocab else UNK)
        out["cross_entropy_bits"] = -total / tokens
        out["tokens"] = tokens
    json.dump(out, sys.stdout, indent=1, sort_keys=True)


if __name__ == "__main__":
    main()
