"""Aho-Corasick automaton over the left hand sides of a rule set.

The trie is built depth by depth with numpy so that systems with a million
rules load in seconds.  The hot reduction loop is compiled with numba.
"""

from __future__ import annotations

import numpy as np
from numba import njit

ROOT = 0


class Automaton:
    """Multi-pattern matcher for a list of words over ``range(d)``.

    Attributes (all numpy arrays indexed by state):

    ``goto``   complete transition table, shape ``(states, d)``
    ``fail``   failure link
    ``term``   index of the pattern ending exactly here, or -1
    ``out``    nearest pattern along the failure chain (including self), or -1
    ``depth``  length of the state's string
    """

    def __init__(self, patterns: list[str], d: int):
        self.d = d
        self.num_patterns = len(patterns)
        self._build(patterns)

    def _build(self, patterns: list[str]):
        d = self.d
        R = len(patterns)
        maxlen = max((len(p) for p in patterns), default=0)
        self.max_len = maxlen
        lengths = np.fromiter((len(p) for p in patterns), dtype=np.int64, count=R)
        mat = np.full((R, max(maxlen, 1)), 255, dtype=np.uint8)
        if R:
            blob = np.frombuffer("".join(patterns).encode("latin-1"), dtype=np.uint8)
            starts = np.zeros(R, dtype=np.int64)
            np.cumsum(lengths[:-1], out=starts[1:])
            rows = np.repeat(np.arange(R), lengths)
            cols = np.arange(blob.size) - np.repeat(starts, lengths)
            mat[rows, cols] = blob - 97
        if R and int(mat[mat != 255].max(initial=0)) >= d:
            raise ValueError("pattern letter outside the alphabet")
        order = np.lexsort(mat.T[::-1]) if R else np.zeros(0, dtype=np.int64)
        smat = mat[order]
        slen = lengths[order]

        # node[row] at each depth; a new node begins where the prefix changes
        parent_list = [np.array([-1])]
        letter_list = [np.array([0], dtype=np.int64)]
        depth_list = [np.array([0], dtype=np.int64)]
        node_of_row = np.zeros(R, dtype=np.int64)
        changed = np.zeros(R, dtype=bool)
        if R:
            changed[0] = True
        next_id = 1
        level_nodes = []  # (ids, parents, letters) per depth
        for t in range(1, maxlen + 1):
            col = smat[:, t - 1]
            alive = slen >= t
            ch = changed.copy()
            ch[1:] |= col[1:] != col[:-1]
            ch[0] = True
            changed = ch
            starts_mask = ch & alive
            # ids: running count of starts among alive rows
            new_ids = np.cumsum(starts_mask) - 1 + next_id
            idx = np.flatnonzero(starts_mask)
            ids = new_ids[idx]
            parents = node_of_row[idx]
            letters = col[idx].astype(np.int64)
            node_of_row = np.where(alive, new_ids, node_of_row)
            next_id += idx.size
            level_nodes.append((ids, parents, letters))
            parent_list.append(parents)
            letter_list.append(letters)
            depth_list.append(np.full(idx.size, t, dtype=np.int64))
        S = next_id
        self.num_states = S
        parent = np.concatenate(parent_list)
        letter = np.concatenate(letter_list)
        depth = np.concatenate(depth_list)
        term = np.full(S, -1, dtype=np.int64)
        if R:
            term[node_of_row] = order
        child = np.full((S, d), -1, dtype=np.int32)
        for ids, parents, letters in level_nodes:
            child[parents, letters] = ids

        fail = np.zeros(S, dtype=np.int32)
        goto = np.zeros((S, d), dtype=np.int32)
        out = np.full(S, -1, dtype=np.int64)
        goto[ROOT] = np.where(child[ROOT] >= 0, child[ROOT], ROOT)
        for t, (ids, parents, letters) in enumerate(level_nodes, start=1):
            if t == 1:
                fail[ids] = ROOT
            else:
                fail[ids] = goto[fail[parents], letters]
            goto[ids] = np.where(child[ids] >= 0, child[ids], goto[fail[ids]])
            out[ids] = np.where(term[ids] >= 0, term[ids], out[fail[ids]])
        self.goto = goto
        self.fail = fail
        self.term = term
        self.out = out
        self.depth = depth
        self.child = child
        self.parent = parent
        self.letter = letter
        # factor-free: no pattern is a factor of another pattern
        suffix_hit = out[fail[1:]] >= 0
        has_child = (child >= 0).any(axis=1)
        self.factor_free = not bool(suffix_hit.any() or (has_child & (term >= 0)).any())


@njit(cache=True)
def reduce_kernel(word, goto, term, lhs_len, rhs_flat, rhs_off):
    """Stack reduction for factor-free rule sets.

    The remaining input is a stack (top at the end).  Letters move to the output
    stack together with the automaton state reached; whenever a pattern ends,
    its letters are popped from the output and the right hand side is pushed
    back onto the input, so scanning resumes from the state before the match.
    """
    n = word.size
    cap = max(2 * n, 16)
    inp = np.empty(cap, dtype=np.uint8)
    for i in range(n):
        inp[i] = word[n - 1 - i]
    n_in = n
    out = np.empty(cap, dtype=np.uint8)
    states = np.empty(cap + 1, dtype=np.int32)
    states[0] = 0
    n_out = 0
    state = 0
    while n_in > 0:
        n_in -= 1
        c = inp[n_in]
        s = goto[state, c]
        t = term[s]
        if t < 0:
            if n_out >= out.size:
                size = 2 * out.size
                new = np.empty(size, dtype=np.uint8)
                new[:n_out] = out[:n_out]
                out = new
                ns = np.empty(size + 1, dtype=np.int32)
                ns[:n_out + 1] = states[:n_out + 1]
                states = ns
            out[n_out] = c
            n_out += 1
            states[n_out] = s
            state = s
        else:
            n_out -= lhs_len[t] - 1
            a, b = rhs_off[t], rhs_off[t + 1]
            need = n_in + (b - a)
            if need > inp.size:
                new = np.empty(2 * need, dtype=np.uint8)
                new[:n_in] = inp[:n_in]
                inp = new
            for j in range(b - 1, a - 1, -1):
                inp[n_in] = rhs_flat[j]
                n_in += 1
            state = states[n_out]
    return out[:n_out].copy()


@njit(cache=True)
def first_match_kernel(word, goto, out):
    """Index just past the first position where some pattern ends, or -1."""
    state = 0
    for i in range(word.size):
        state = goto[state, word[i]]
        if out[state] >= 0:
            return i + 1
    return -1


@njit(cache=True)
def run_states_kernel(word, goto):
    states = np.empty(word.size + 1, dtype=np.int32)
    state = 0
    states[0] = 0
    for i in range(word.size):
        state = goto[state, word[i]]
        states[i + 1] = state
    return states
