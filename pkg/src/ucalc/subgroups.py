"""Exhaustive subgroup enumeration over finite form rings.

Elements are stored as packed byte keys (one key per matrix, the
UMatrix.to_bytes encoding) with parent pointers back to the identity, so
every member comes with a word certificate in the caller's generators.
Closures run breadth-first with numpy bulk multiplication; the worker
count only shards the per-round products and never changes the discovery
order, so runs are bit-identical for any UCALC_THREADS setting.

Normal closures keep a dynamic generator list: conjugating a generator
by an ambient generator either lands inside the current closure or
extends the generator list, and the closure is continued incrementally.
Only generators ever get conjugated; for finite groups that is enough
for full normality.  The ambient group itself is never enumerated, so
its size is irrelevant to the cost.
"""

from __future__ import annotations

import os
from array import array
from bisect import bisect_right
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .errors import CapExceeded, NotInSubgroup
from .unitary import UMatrix, pack_rows


def thread_count(threads=None):
    if threads is not None:
        return max(1, int(threads))
    env = os.environ.get("UCALC_THREADS", "1")
    try:
        return max(1, int(env))
    except ValueError:
        return 1


def _bulk_mul(ring, F, G):
    """Row-major product of a stack F (N,d,d) by one matrix G (d,d).

    zmod goes through one float64 GEMM: entries and the inner dimension
    are small enough that every intermediate is exact below 2^53.
    """
    if ring.kind == "zmod":
        N, d = F.shape[0], F.shape[1]
        out = F.reshape(N * d, d).astype(np.float64) @ G.astype(np.float64)
        return out.astype(np.int64).reshape(N, d, d) % ring.descr["m"]
    ADD, MUL = ring.ADD, ring.MUL
    d = G.shape[0]
    acc = MUL[F[:, :, 0][:, :, None], G[0, :][None, None, :]]
    for k in range(1, d):
        acc = ADD[acc, MUL[F[:, :, k][:, :, None], G[k, :][None, None, :]]]
    return acc


def _row_keys(ring, block):
    """Packed key bytes for a stack of matrices, in row order."""
    N = block.shape[0]
    packed = pack_rows(ring, block.reshape(N, -1))
    kb = packed.shape[1]
    buf = packed.tobytes()
    return [buf[i * kb:(i + 1) * kb] for i in range(N)], kb


class Subgroup:
    """Enumerated subgroup with certificates.

    keys maps packed bytes to the element index; gen_words[m] is the
    word, over the caller's labels, of the m-th multiplier.
    """

    def __init__(self, space, cap=1 << 22, threads=None):
        self.space = space
        self.ring = space.ring
        self.n = space.n
        self.cap = cap
        self.threads = thread_count(threads)
        d = space.dim
        e = UMatrix.identity(self.ring, self.n)
        # Element blocks are stored as int8 (ring codes stay below 128);
        # _slab upcasts on the way out, so arithmetic never sees int8.
        self._blocks = [np.asarray(e.data, dtype=np.int8)[None, :, :]]
        self._offsets = [0, 1]
        ekeys, self.keybytes = _row_keys(self.ring, self._blocks[0])
        self.keys = {ekeys[0]: 0}
        self._parent = array("q", [-1])
        self._via = array("i", [-1])
        self.mults = []          # list of (matrix ndarray, word, key)
        self._mult_keys = {}
        self.gen_words = []
        self._pending = []       # (start, end, mult_indices) work items

    # -- element access -----------------------------------------------------

    def __len__(self):
        return self._offsets[-1]

    def __contains__(self, item):
        return self.key_of(item) in self.keys

    def key_of(self, item):
        if isinstance(item, bytes):
            return item
        if isinstance(item, UMatrix):
            return item.to_bytes()
        raise TypeError(f"cannot key {type(item).__name__}")

    def index(self, item):
        k = self.key_of(item)
        if k not in self.keys:
            raise NotInSubgroup("element is outside the enumerated subgroup")
        return self.keys[k]

    def matrix(self, idx):
        b = bisect_right(self._offsets, idx) - 1
        row = self._blocks[b][idx - self._offsets[b]]
        return UMatrix(self.ring, self.n, row.astype(np.int64))

    def key_set(self):
        return frozenset(self.keys)

    # -- construction ---------------------------------------------------------

    def add_generators(self, gens, labels=None, words=None, with_inverses=True):
        """Register generators as multipliers; queue existing elements.

        gens are UMatrix; words, if given, spell each generator over the
        caller's alphabet (list of (label, sign)); labels is a shorthand
        for single-letter words.
        """
        if words is None:
            if labels is None:
                labels = list(range(len(self.gen_words),
                                    len(self.gen_words) + len(gens)))
            words = [[(lab, 1)] for lab in labels]
        new_mults = []
        for g, w in zip(gens, words):
            self.gen_words.append(w)
            new_mults.extend(self._push_mult(g, w, with_inverses))
        if new_mults:
            self._pending.append((0, len(self), tuple(new_mults)))
        return new_mults

    def _push_mult(self, g, word, with_inverses):
        out = []
        k = g.to_bytes()
        if k not in self._mult_keys:
            self._mult_keys[k] = len(self.mults)
            self.mults.append((np.asarray(g.data, dtype=np.int64), word, k))
            out.append(self._mult_keys[k])
        if with_inverses:
            gi = self.space.inverse(g)
            ki = gi.to_bytes()
            if ki not in self._mult_keys:
                wi = [(lab, -s) for (lab, s) in reversed(word)]
                self._mult_keys[ki] = len(self.mults)
                self.mults.append((np.asarray(gi.data, dtype=np.int64), wi, ki))
                out.append(self._mult_keys[ki])
        return out

    def _slab(self, start, end):
        """Contiguous int64 copy of element matrices [start, end)."""
        parts = []
        b = bisect_right(self._offsets, start) - 1
        at = start
        while at < end:
            lo, hi = self._offsets[b], self._offsets[b + 1]
            take = min(end, hi)
            parts.append(self._blocks[b][at - lo:take - lo])
            at = take
            b += 1
        out = parts[0] if len(parts) == 1 else np.concatenate(parts)
        return out.astype(np.int64)

    # Frontier rows processed per slab; bounds transient product memory.
    CHUNK = 1 << 18

    def run(self):
        """Drain the work queue to a full closure.  Raises CapExceeded."""
        pool = (ThreadPoolExecutor(self.threads)
                if self.threads > 1 else None)
        try:
            while self._pending:
                start, end, midx = self._pending.pop(0)
                if start >= end:
                    continue
                base = len(self)
                for lo in range(start, end, self.CHUNK):
                    hi = min(end, lo + self.CHUNK)
                    frontier = self._slab(lo, hi)
                    for m in midx:
                        block = self._product(pool, frontier, m)
                        self._absorb(block, lo, m)
                if len(self) > base:
                    self._pending.append(
                        (base, len(self), tuple(range(len(self.mults)))))
        finally:
            if pool is not None:
                pool.shutdown()

    def _product(self, pool, frontier, m):
        """frontier times one multiplier, sharded across the pool."""
        ring = self.ring
        gm = self.mults[m][0]
        if pool is None or frontier.shape[0] < 4 * self.threads:
            return _bulk_mul(ring, frontier, gm)
        bounds = np.linspace(0, frontier.shape[0], self.threads + 1,
                             dtype=int)
        futs = [pool.submit(_bulk_mul, ring, frontier[lo:hi], gm)
                for lo, hi in zip(bounds, bounds[1:]) if lo < hi]
        return np.concatenate([f.result() for f in futs])

    def _absorb(self, block, parent_base, mult_idx):
        keys, _ = _row_keys(self.ring, block)
        seen = self.keys
        fresh = []
        for i, k in enumerate(keys):
            if k not in seen:
                seen[k] = len(seen)
                fresh.append(i)
        if not fresh:
            return
        sub = block[np.asarray(fresh, dtype=np.int64)].astype(np.int8)
        self._blocks.append(sub)
        self._offsets.append(self._offsets[-1] + sub.shape[0])
        for i in fresh:
            self._parent.append(parent_base + i)
            self._via.append(mult_idx)
        if len(self) > self.cap:
            raise CapExceeded(
                f"subgroup exceeded cap {self.cap}", count=len(self))

    # -- certificates ---------------------------------------------------------

    def certificate(self, item):
        """Word over the caller's labels multiplying out to the element."""
        idx = self.index(item)
        word = []
        while idx > 0:
            word.append(self._via[idx])
            idx = self._parent[idx]
        out = []
        for m in reversed(word):
            out.extend(self.mults[m][1])
        return out

    def check_certificate(self, item, word=None, eval_label=None):
        """Re-multiply a certificate; returns the word if it checks out."""
        if word is None:
            word = self.certificate(item)
        m = self.space.e
        for lab, sign in word:
            g = eval_label(lab)
            m = m.mul(g if sign > 0 else self.space.inverse(g))
        if m.to_bytes() != self.key_of(item):
            raise NotInSubgroup("certificate does not multiply to the element")
        return word


def closure(space, gens, labels=None, cap=1 << 22, threads=None):
    sg = Subgroup(space, cap=cap, threads=threads)
    sg.add_generators(gens, labels=labels)
    sg.run()
    return sg


def normal_closure(space, seeds, conj_gens, seed_labels=None,
                   conj_labels=None, cap=1 << 22, threads=None):
    """Smallest subgroup containing seeds, normalised by the conj_gens.

    conj_gens are NOT enumerated; they only act by conjugation on the
    dynamic generator list.
    """
    sg = Subgroup(space, cap=cap, threads=threads)
    if seed_labels is None:
        seed_labels = [("seed", i) for i in range(len(seeds))]
    if conj_labels is None:
        conj_labels = [("conj", i) for i in range(len(conj_gens))]
    queue = list(zip(seeds, [[(lab, 1)] for lab in seed_labels]))
    sg.add_generators([g for g, _ in queue], words=[w for _, w in queue])
    sg.run()
    conj_pairs = [(c, space.inverse(c), lab)
                  for c, lab in zip(conj_gens, conj_labels)]
    at = 0
    while at < len(queue):
        g, gw = queue[at]
        at += 1
        for c, cinv, clab in conj_pairs:
            t = c.mul(g).mul(cinv)
            if t in sg:
                continue
            tw = [(clab, 1)] + gw + [(clab, -1)]
            queue.append((t, tw))
            sg.add_generators([t], words=[tw])
            sg.run()
    return sg


def mixed_commutator(space, hgens, kgens, hlabels=None, klabels=None,
                     cap=1 << 22, threads=None):
    """[H, K]: normal closure of the pairwise generator commutators
    inside the group the two generator lists span."""
    if hlabels is None:
        hlabels = [("h", i) for i in range(len(hgens))]
    if klabels is None:
        klabels = [("k", i) for i in range(len(kgens))]
    seeds, words = [], []
    for h, hl in zip(hgens, hlabels):
        for k, kl in zip(kgens, klabels):
            seeds.append(space.commutator(h, k))
            words.append([(hl, 1), (kl, 1), (hl, -1), (kl, -1)])
    sg = Subgroup(space, cap=cap, threads=threads)
    sg.add_generators(seeds, words=words)
    sg.run()
    conj = list(zip(hgens, hlabels)) + list(zip(kgens, klabels))
    conj_pairs = [(c, space.inverse(c), lab) for c, lab in conj]
    queue = list(zip(seeds, words))
    at = 0
    while at < len(queue):
        g, gw = queue[at]
        at += 1
        for c, cinv, clab in conj_pairs:
            t = c.mul(g).mul(cinv)
            if t in sg:
                continue
            tw = [(clab, 1)] + gw + [(clab, -1)]
            queue.append((t, tw))
            sg.add_generators([t], words=[tw])
            sg.run()
    return sg


def compare(a, b):
    """'equal', 'left_in_right', 'right_in_left' or 'incomparable'."""
    ka = a if isinstance(a, (set, frozenset)) else a.key_set()
    kb = b if isinstance(b, (set, frozenset)) else b.key_set()
    if ka == kb:
        return "equal"
    if ka <= kb:
        return "left_in_right"
    if ka >= kb:
        return "right_in_left"
    return "incomparable"


def save_subgroup(path, sg, meta=None):
    """Canonical dump: JSON header, newline, sorted keys back to back."""
    import json
    keys = sorted(sg.keys if isinstance(sg, Subgroup) else sg)
    kb = len(keys[0]) if keys else 0
    head = {"format": "ucalc-subgroup/1", "count": len(keys), "keybytes": kb}
    if isinstance(sg, Subgroup):
        head["ring"] = sg.ring.descr
        head["rank"] = sg.n
    if meta:
        head.update(meta)
    with open(path, "wb") as fh:
        fh.write(json.dumps(head, sort_keys=True).encode() + b"\n")
        for k in keys:
            fh.write(k)


def load_subgroup(path):
    import json
    with open(path, "rb") as fh:
        head = json.loads(fh.readline().decode())
        kb = head["keybytes"]
        blob = fh.read()
    keys = {blob[i * kb:(i + 1) * kb] for i in range(head["count"])}
    return head, keys
