"""Multi-pattern string automaton used by the mention dictionary.

Patterns are matched case-insensitively against raw sentence text without
rewriting it, so match offsets always slice back to the original string. Case
folding is per-character and length-preserving (characters whose lowercase
expands, e.g. U+0130, are kept as-is) to guarantee that property.

The automaton compiles its trie, failure links, and merged output sets into
flat numpy arrays consumed by the scan kernel (compiled or pure, selected in
``suppmine._kernels``).
"""

from __future__ import annotations

import numpy as np

from . import _kernels


def fold_char(c: str) -> str:
    low = c.lower()
    return low if len(low) == 1 else c


def fold_text(s: str) -> str:
    return "".join(fold_char(c) for c in s)


class PatternAutomaton:
    """Immutable matcher over a fixed set of folded patterns."""

    def __init__(self, patterns: list[str]):
        if any(not p for p in patterns):
            raise ValueError("empty pattern")
        self.patterns = list(patterns)
        self._build(self.patterns)

    def _build(self, patterns):
        alphabet = sorted({c for p in patterns for c in p})
        self._symbols = {c: i + 1 for i, c in enumerate(alphabet)}
        n_syms = len(alphabet) + 1

        ascii_map = np.zeros(128, dtype=np.int32)
        ext_map: dict[str, int] = {}
        for c, sym in self._symbols.items():
            variants = {c}
            up = c.upper()
            if len(up) == 1:
                variants.add(up)
            for v in variants:
                o = ord(v)
                if o < 128:
                    ascii_map[o] = sym
                else:
                    ext_map[v] = sym
        self._ascii_map = ascii_map
        self._ext_map = ext_map

        # Trie with per-node children dicts, then BFS failure links.
        children: list[dict[int, int]] = [{}]
        outputs: list[list[int]] = [[]]
        for pid, pat in enumerate(patterns):
            node = 0
            for c in pat:
                sym = self._symbols[c]
                nxt = children[node].get(sym)
                if nxt is None:
                    nxt = len(children)
                    children[node][sym] = nxt
                    children.append({})
                    outputs.append([])
                node = nxt
            outputs[node].append(pid)

        n_states = len(children)
        fail = np.zeros(n_states, dtype=np.int32)
        queue = list(children[0].values())
        head = 0
        while head < len(queue):
            u = queue[head]
            head += 1
            fu = fail[u]
            if outputs[fu]:
                outputs[u] = outputs[u] + outputs[fu]
            for sym, v in children[u].items():
                # Failure target: longest proper suffix state with this symbol.
                f = fail[u]
                while sym not in children[f] and f != 0:
                    f = fail[f]
                fail[v] = children[f].get(sym, 0)
                queue.append(v)

        # Flatten transitions into sorted (symbol, next) runs per state.
        trans_start = np.zeros(n_states + 1, dtype=np.int32)
        total = sum(len(ch) for ch in children)
        trans_sym = np.zeros(total, dtype=np.int32)
        trans_next = np.zeros(total, dtype=np.int32)
        pos = 0
        for u in range(n_states):
            trans_start[u] = pos
            for sym in sorted(children[u]):
                trans_sym[pos] = sym
                trans_next[pos] = children[u][sym]
                pos += 1
        trans_start[n_states] = pos

        out_start = np.zeros(n_states + 1, dtype=np.int32)
        out_pat = np.zeros(sum(len(o) for o in outputs), dtype=np.int32)
        pos = 0
        for u in range(n_states):
            out_start[u] = pos
            for pid in outputs[u]:
                out_pat[pos] = pid
                pos += 1
        out_start[n_states] = pos

        self._trans_start = trans_start
        self._trans_sym = trans_sym
        self._trans_next = trans_next
        self._fail = fail
        self._out_start = out_start
        self._out_pat = out_pat
        self._pat_len = np.asarray([len(p) for p in patterns], dtype=np.int32)
        self.n_states = n_states

    def scan(self, text: str) -> list[tuple[int, int, int]]:
        """All raw occurrences in ``text`` as (start, end, pattern_id)."""
        ends, pids = _kernels.ac_scan(
            self._trans_start,
            self._trans_sym,
            self._trans_next,
            self._fail,
            self._out_start,
            self._out_pat,
            self._ascii_map,
            self._ext_map,
            text,
        )
        lengths = self._pat_len[pids]
        return [
            (int(e - l), int(e), int(p))
            for e, l, p in zip(ends.tolist(), lengths.tolist(), pids.tolist())
        ]
