"""Finite-index subgroup machinery: coset enumeration, rewriting, low index.

Cosets are right cosets; generators act on the right.  A complete table
stores, per generator, the permutation it induces on cosets, with the
subgroup itself as coset 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .words import (Presentation, Word, concat, free_reduce, gen_of, inverse,
                    letter)


class BoundExceeded(RuntimeError):
    """Coset enumeration ran out of room; the index may be infinite."""


@dataclass(frozen=True)
class CosetTable:
    """Complete permutation action on cosets of a finite-index subgroup."""

    degree: int
    action: tuple  # per generator, a tuple of length degree

    def apply(self, coset: int, lt: int) -> int:
        perm = self.action[abs(lt) - 1]
        if lt > 0:
            return perm[coset]
        return perm.index(coset)

    def trace(self, coset: int, w: Word) -> int:
        for lt in w:
            coset = self.apply(coset, lt)
        return coset

    def is_closed_under(self, relators: Iterable[Word]) -> bool:
        return all(self.trace(c, r) == c
                   for r in relators for c in range(self.degree))

    def flat(self) -> tuple:
        return tuple(x for perm in self.action for x in perm)

    def to_json(self):
        return {"degree": self.degree, "action": [list(p) for p in self.action]}

    @staticmethod
    def from_json(obj) -> "CosetTable":
        return CosetTable(int(obj["degree"]),
                          tuple(tuple(int(x) for x in p) for p in obj["action"]))


def _inverse_perms(table: CosetTable):
    inv = []
    for perm in table.action:
        ip = [0] * table.degree
        for i, j in enumerate(perm):
            ip[j] = i
        inv.append(tuple(ip))
    return inv


def canonical_rebase(table: CosetTable, base: int) -> CosetTable:
    """Renumber cosets by first visit in scan order starting from ``base``.

    The scan order is the one used everywhere in this module: cosets in
    numbering order, directions g1, g1^-1, g2, g2^-1, ...
    """
    ngens = len(table.action)
    inv = _inverse_perms(table)
    order = [base]
    seen = {base: 0}
    i = 0
    while i < len(order):
        c = order[i]
        for g in range(ngens):
            for tgt in (table.action[g][c], inv[g][c]):
                if tgt not in seen:
                    seen[tgt] = len(order)
                    order.append(tgt)
        i += 1
    new_action = []
    for g in range(ngens):
        perm = [0] * table.degree
        for old, new in seen.items():
            perm[new] = seen[table.action[g][old]]
        new_action.append(tuple(perm))
    return CosetTable(table.degree, tuple(new_action))


def coset_enumerate(p: Presentation, subgens: Sequence[Word], max_cosets: int) -> CosetTable:
    """Todd-Coxeter enumeration of the subgroup generated by ``subgens``.

    ``max_cosets`` bounds the working set of cosets defined at any time;
    BoundExceeded means the index may be infinite or just larger.
    """
    if max_cosets < 1:
        raise ValueError("max_cosets must be >= 1")
    ngens = p.ngens
    ndirs = 2 * ngens

    def dir_of(lt):
        return 2 * (abs(lt) - 1) + (0 if lt > 0 else 1)

    def flip(d):
        return d ^ 1

    neighbors = []  # per coset, list of ndirs targets (or None)
    reps = []  # union-find
    live_count = [0]

    def find(c):
        while reps[c] != c:
            reps[c] = reps[reps[c]]
            c = reps[c]
        return c

    def new_coset():
        if live_count[0] >= max_cosets or len(reps) >= 16 * max_cosets + 64:
            raise BoundExceeded(f"coset bound {max_cosets} exceeded")
        reps.append(len(reps))
        neighbors.append([None] * ndirs)
        live_count[0] += 1
        return len(reps) - 1

    def unify(a, b):
        stack = [(a, b)]
        while stack:
            a, b = stack.pop()
            a, b = find(a), find(b)
            if a == b:
                continue
            a, b = min(a, b), max(a, b)
            reps[b] = a
            live_count[0] -= 1
            for d in range(ndirs):
                t = neighbors[b][d]
                if t is None:
                    continue
                if neighbors[a][d] is None:
                    neighbors[a][d] = t
                else:
                    stack.append((neighbors[a][d], t))

    def step(c, d):
        c = find(c)
        t = neighbors[c][d]
        if t is None:
            t = new_coset()
            neighbors[c][d] = t
            neighbors[t][flip(d)] = c
        return find(t)

    def scan(c, w):
        for lt in w:
            c = step(c, dir_of(lt))
        return c

    def probe(c, w):
        """Trace without creating edges; None when an edge is missing."""
        c = find(c)
        for lt in w:
            t = neighbors[c][dir_of(lt)]
            if t is None:
                return None
            c = find(t)
        return c

    base = new_coset()
    for sg in subgens:
        unify(scan(base, sg), base)
    while True:
        visit = 0
        while visit < len(reps):
            if find(visit) == visit:
                for r in p.relators:
                    unify(scan(visit, r), visit)
            visit += 1
        closed = all(probe(find(base), sg) == find(base) for sg in subgens)
        if closed:
            closed = all(probe(c, r) == find(c)
                         for c in range(len(reps)) if find(c) == c
                         for r in p.relators)
        if closed:
            break

    live = sorted(i for i in range(len(reps)) if find(i) == i)
    index = {c: i for i, c in enumerate(live)}
    action = []
    for g in range(ngens):
        d = 2 * g
        perm = []
        for c in live:
            t = neighbors[c][d]
            if t is None:
                raise BoundExceeded("table incomplete after enumeration")
            perm.append(index[find(t)])
        action.append(tuple(perm))
    table = CosetTable(len(live), tuple(action))
    return canonical_rebase(table, index[find(0)])


# ---------------------------------------------------------------------------
# Reidemeister-Schreier


@dataclass(frozen=True)
class SchreierData:
    """Byproducts of rewriting: transversal words and ambient words for the
    subgroup generators (one per non-tree edge)."""

    transversal: tuple
    ambient_words: tuple
    edge_index: dict  # (coset, gen) -> generator index in the new presentation


def schreier_tree(p: Presentation, table: CosetTable):
    """BFS spanning tree in scan order; returns transversal words and the
    set of tree edges (coset, gen)."""
    inv = _inverse_perms(table)
    transversal: list = [None] * table.degree
    transversal[0] = ()
    tree_edges = set()
    queue = [0]
    while queue:
        c = queue.pop(0)
        for g in range(p.ngens):
            for sign, tgt in ((1, table.action[g][c]), (-1, inv[g][c])):
                if transversal[tgt] is None:
                    transversal[tgt] = transversal[c] + (letter(g, sign),)
                    tree_edges.add((c, g) if sign > 0 else (tgt, g))
                    queue.append(tgt)
    return [tuple(t) for t in transversal], tree_edges


def rewrite_word(table: CosetTable, edge_index: dict, w: Word, start: int = 0) -> Word:
    """Express a subgroup element as a word in the Schreier generators by
    tracing it from ``start``; the trace must close up."""
    out = []
    c = start
    for lt in w:
        g = gen_of(lt)
        if lt > 0:
            key = (c, g)
            c2 = table.apply(c, lt)
            if key in edge_index:
                out.append(edge_index[key] + 1)
        else:
            c2 = table.apply(c, lt)
            key = (c2, g)
            if key in edge_index:
                out.append(-(edge_index[key] + 1))
        c = c2
    if c != start:
        raise ValueError("word does not lie in the subgroup")
    return free_reduce(out)


def reidemeister_schreier(p: Presentation, table: CosetTable):
    """Subgroup presentation on (n-1)i+1 Schreier generators with mi
    relators (before any simplification).

    Returns ``(presentation, SchreierData)``; generator k's ambient word is
    t_c g t_{c.g}^-1 for its non-tree edge.
    """
    if not table.is_closed_under(p.relators):
        raise ValueError("coset table is not closed under the relators")
    transversal, tree_edges = schreier_tree(p, table)
    edge_index = {}
    names = []
    taken = set()
    ambient = []
    for c in range(table.degree):
        for g in range(p.ngens):
            if (c, g) not in tree_edges:
                edge_index[(c, g)] = len(names)
                name = p.generators[g] if table.degree == 1 else f"{p.generators[g]}_{c}"
                while name in taken:
                    name += "_"
                taken.add(name)
                names.append(name)
                tgt = table.action[g][c]
                ambient.append(concat(transversal[c], (letter(g),),
                                      inverse(transversal[tgt])))
    relators = []
    for r in p.relators:
        for c in range(table.degree):
            relators.append(rewrite_word(table, edge_index, r, c))
    sub = Presentation(tuple(names), tuple(relators))
    return sub, SchreierData(tuple(transversal), tuple(ambient), edge_index)


def tietze_simplify(p: Presentation, carry: Sequence[Word] = (),
                    ambient: Optional[Sequence[Word]] = None,
                    max_sub_len: int = 64):
    """Bounded Tietze simplification: drop empty relators, cyclically reduce,
    and eliminate generators that occur exactly once in some relator.

    ``carry`` words are rewritten through the same substitutions; ``ambient``
    tracks per-generator ambient words when the presentation came from
    rewriting.  Returns ``(presentation, carry, ambient)``.
    """
    from .words import cyclic_reduce

    gens = list(p.generators)
    rels = [r for r in p.relators]
    carry = [tuple(w) for w in carry]
    amb = list(ambient) if ambient is not None else None

    def cyc(w):
        return cyclic_reduce(w)[0]

    changed = True
    while changed:
        changed = False
        rels = [cyc(r) for r in rels]
        rels_nonempty = [r for r in rels if r]
        if len(rels_nonempty) != len(rels):
            rels = rels_nonempty
            changed = True
        # find a generator with a single occurrence in some relator
        target = None
        for r_i in sorted(range(len(rels)), key=lambda i: (len(rels[i]), i)):
            rel = rels[r_i]
            if len(rel) - 1 > max_sub_len:
                continue
            counts = {}
            for lt in rel:
                counts[gen_of(lt)] = counts.get(gen_of(lt), 0) + 1
            for pos, lt in enumerate(rel):
                if counts[gen_of(lt)] == 1:
                    target = (r_i, pos, gen_of(lt))
                    break
            if target:
                break
        if not target:
            break
        r_idx, pos, g = target
        rel = rels[r_idx]
        # rel = u g^e v = 1  =>  g^e = u^-1 v^-1
        u, lt, v = rel[:pos], rel[pos], rel[pos + 1:]
        expr = concat(inverse(u), inverse(v))
        if lt < 0:
            expr = inverse(expr)
        old_to_new = {}
        k = 0
        for i in range(len(gens)):
            if i != g:
                old_to_new[i] = k
                k += 1

        def renumber(w):
            return tuple(letter(old_to_new[gen_of(x)], 1 if x > 0 else -1) for x in w)

        def eliminate(w):
            out = []
            for x in w:
                if gen_of(x) == g:
                    out.extend(expr if x > 0 else inverse(expr))
                else:
                    out.append(x)
            return renumber(free_reduce(tuple(out)))

        rels = [eliminate(r2) for r2i, r2 in enumerate(rels) if r2i != r_idx]
        carry = [eliminate(w) for w in carry]
        gens = [nm for i, nm in enumerate(gens) if i != g]
        if amb is not None:
            amb = [a for i, a in enumerate(amb) if i != g]
        changed = True
    rels = [cyc(r) for r in rels]
    rels = [r for r in rels if r]
    return Presentation(tuple(gens), tuple(rels)), carry, amb


# ---------------------------------------------------------------------------
# low-index subgroup enumeration


def _part_to_table(part, ngens, degree):
    action = []
    for g in range(ngens):
        action.append(tuple(part[c][2 * g] for c in range(degree)))
    return CosetTable(degree, tuple(action))


def low_index_subgroups(p: Presentation, max_index: int) -> list:
    """One canonical coset table per conjugacy class of subgroups of index
    at most ``max_index``, in deterministic order.

    Backtracking over partial tables; partial assignments are propagated
    through relator scans, and new cosets are introduced in scan order so
    each subgroup is generated exactly once.  Conjugacy classes are then
    reduced to the lexicographically least rebasing.
    """
    if max_index < 1:
        raise ValueError("max_index must be >= 1")
    tables, _ = _search_tables(p, max_index)
    found = {}
    for table in tables:
        rep = min(canonical_rebase(table, b).flat() for b in range(table.degree))
        key = (table.degree, rep)
        if key not in found:
            found[key] = CosetTable(table.degree, _unflatten(rep, p.ngens, table.degree))
    return [found[k] for k in sorted(found)]


def subgroup_count_by_index(p: Presentation, max_index: int) -> dict:
    """Total number of subgroups (not classes) per index, obtained by
    counting the distinct rebasings of each class representative."""
    counts = {i: 0 for i in range(1, max_index + 1)}
    for table in low_index_subgroups(p, max_index):
        distinct = {canonical_rebase(table, b).flat() for b in range(table.degree)}
        counts[table.degree] += len(distinct)
    return counts


def _unflatten(flat, ngens, degree):
    return tuple(tuple(flat[g * degree:(g + 1) * degree]) for g in range(ngens))


def _search_tables(p: Presentation, max_index: int, node_budget=None):
    """All complete closed tables in scan-order numbering, one per subgroup
    of index <= max_index.

    ``node_budget`` is an optional single-element list of remaining DFS
    nodes, decremented in place; returns (tables, truncated).
    """
    ngens = p.ngens
    ndirs = 2 * ngens
    rel_dirs = []
    for r in p.relators:
        if r:
            rel_dirs.append(tuple(2 * (abs(lt) - 1) + (lt < 0) for lt in r))
    rel_dirs = list(dict.fromkeys(rel_dirs))
    # rotations of every relator filed under their first direction, so a new
    # edge only triggers scans of cycles that actually cross it
    rot_by_dir = [[] for _ in range(ndirs)]
    seen_rot = set()
    for dirs in rel_dirs:
        for k in range(len(dirs)):
            rot = dirs[k:] + dirs[:k]
            if rot not in seen_rot:
                seen_rot.add(rot)
                rot_by_dir[rot[0]].append(rot)

    part = [[None] * ndirs]

    def propagate(queue, undo):
        """Scan relator cycles crossing newly set edges; False on
        contradiction.  Deductions are queued for further propagation."""
        while queue:
            c0, d0, e0 = queue.pop()
            for anchor, dd in ((c0, d0), (e0, d0 ^ 1)):
                for dirs in rot_by_dir[dd]:
                    n = len(dirs)
                    f, i = anchor, 0
                    while i < n:
                        t = part[f][dirs[i]]
                        if t is None:
                            break
                        f, i = t, i + 1
                    else:
                        if f != anchor:
                            return False
                        continue
                    b, j = anchor, n
                    while j > i:
                        t = part[b][dirs[j - 1] ^ 1]
                        if t is None:
                            break
                        b, j = t, j - 1
                    if j == i:
                        # both traces fully defined up to position i; the
                        # partial action is injective: the cosets must agree
                        if f != b:
                            return False
                        continue
                    if j == i + 1:
                        d = dirs[i]
                        row_f = part[f]
                        if row_f[d] is None:
                            if part[b][d ^ 1] is None:
                                row_f[d] = b
                                part[b][d ^ 1] = f
                                undo.append((f, d, b))
                                queue.append((f, d, b))
                            else:
                                return False
                        elif row_f[d] != b:
                            return False
        return True

    def first_hole():
        for c, row in enumerate(part):
            for d in range(ndirs):
                if row[d] is None:
                    return c, d
        return None

    def complete_closed():
        for dirs in rel_dirs:
            for c in range(len(part)):
                f = c
                for d in dirs:
                    f = part[f][d]
                if f != c:
                    return False
        return True

    results = []
    truncated = [False]

    def dfs():
        if node_budget is not None:
            if node_budget[0] <= 0:
                truncated[0] = True
                return
            node_budget[0] -= 1
        hole = first_hole()
        if hole is None:
            if complete_closed():
                results.append(_part_to_table(part, ngens, len(part)))
            return
        c, d = hole
        candidates = [e for e in range(len(part)) if part[e][d ^ 1] is None]
        if len(part) < max_index:
            candidates.append(len(part))
        for e in candidates:
            undo = []
            size_mark = len(part)
            if e == len(part):
                part.append([None] * ndirs)
            part[c][d] = e
            part[e][d ^ 1] = c
            undo.append((c, d, e))
            if propagate([(c, d, e)], undo):
                dfs()
            while undo:
                cc, dd, ee = undo.pop()
                part[cc][dd] = None
                part[ee][dd ^ 1] = None
            del part[size_mark:]

    dfs()
    return results, truncated[0]
