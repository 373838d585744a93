"""Okapi BM25 over an incremental inverted index (k1 = 1.2, b = 0.75)."""

from __future__ import annotations

import math
from collections import Counter


def tokenize(text: str) -> list[str]:
    return text.lower().split()


class Bm25Index:
    def __init__(self, k1: float = 1.2, b: float = 0.75):
        self.k1 = k1
        self.b = b
        self._postings: dict[str, dict[int, int]] = {}
        self._doc_len: dict[int, int] = {}
        self._total_len = 0

    def __len__(self) -> int:
        return len(self._doc_len)

    def add(self, doc_id: int, text: str) -> None:
        if doc_id in self._doc_len:
            self.remove(doc_id)
        tokens = tokenize(text)
        self._doc_len[doc_id] = len(tokens)
        self._total_len += len(tokens)
        for term, freq in Counter(tokens).items():
            self._postings.setdefault(term, {})[doc_id] = freq

    def remove(self, doc_id: int) -> None:
        if doc_id not in self._doc_len:
            return
        self._total_len -= self._doc_len.pop(doc_id)
        for term in list(self._postings):
            posting = self._postings[term]
            if doc_id in posting:
                del posting[doc_id]
                if not posting:
                    del self._postings[term]

    def idf(self, term: str) -> float:
        n = len(self._doc_len)
        df = len(self._postings.get(term, ()))
        if df == 0:
            return 0.0
        # +1 inside the log keeps IDF positive and monotone in rarity.
        return math.log(1.0 + (n - df + 0.5) / (df + 0.5))

    def search(self, query: str, k: int = 10) -> list[tuple[int, float]]:
        """Top-k (doc_id, score), descending score, ties by ascending id."""
        if not self._doc_len:
            return []
        avgdl = self._total_len / len(self._doc_len)
        scores: dict[int, float] = {}
        for term in tokenize(query):
            posting = self._postings.get(term)
            if not posting:
                continue
            idf = self.idf(term)
            for doc_id, freq in posting.items():
                dl = self._doc_len[doc_id]
                denom = freq + self.k1 * (1.0 - self.b + self.b * dl / max(avgdl, 1e-9))
                scores[doc_id] = scores.get(doc_id, 0.0) + idf * freq * (self.k1 + 1.0) / denom
        ranked = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
        return ranked[:k]
