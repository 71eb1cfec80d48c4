"""Shared fixtures and independent oracles.

The oracles here are deliberately naive: they enumerate, brute-force, or
hand-build the expected answers without touching the construction code,
so that agreement is evidence rather than tautology.
"""

import itertools

from hopfcat.backends import finset_backend, regular_atom


def torsor_backend(group, names=("S", "T")):
    return finset_backend(group, [regular_atom(n, group) for n in names])


def equivariant_bijections(backend, x, y):
    """All bijection tables x -> y commuting with the group action, found
    by filtering every permutation.  Sorted for determinism.
    """
    nx, ny = backend.obj_size(x), backend.obj_size(y)
    if nx != ny:
        return []
    out = []
    acts_x = [backend.act(g, x).table for g in backend.group.elements()]
    acts_y = [backend.act(g, y).table for g in backend.group.elements()]
    for perm in itertools.permutations(range(nx)):
        if all(perm[ax[i]] == ay[perm[i]]
               for ax, ay in zip(acts_x, acts_y)
               for i in range(nx)):
            out.append(tuple(perm))
    return sorted(out)


def bijection_groupoid(backend, atom_names):
    """The groupoid whose arrows x -> y are the equivariant bijections,
    composed diagrammatically.  Returned as dictionaries shaped like
    GroupoidTable fields, with arrows indexed by their sorted position.
    """
    objs = {i: backend.obj(n) for i, n in enumerate(atom_names)}
    n = len(atom_names)
    arrows = {(i, j): equivariant_bijections(backend, objs[i], objs[j])
              for i in range(n) for j in range(n)}
    hom_size = {key: len(val) for key, val in arrows.items()}
    comp = {}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                table = []
                for f in arrows[(i, j)]:
                    for g in arrows[(j, k)]:
                        composite = tuple(g[f[a]] for a in range(len(f)))
                        table.append(arrows[(i, k)].index(composite))
                comp[(i, j, k)] = tuple(table)
    size_of = {i: backend.obj_size(objs[i]) for i in range(n)}
    identity = {i: arrows[(i, i)].index(tuple(range(size_of[i]))) for i in range(n)}
    inverse = {}
    for i in range(n):
        for j in range(n):
            tab = []
            for f in arrows[(i, j)]:
                inv = [0] * len(f)
                for a, b in enumerate(f):
                    inv[b] = a
                tab.append(arrows[(j, i)].index(tuple(inv)))
            inverse[(i, j)] = tuple(tab)
    return {"arrows": arrows, "hom_size": hom_size, "comp": comp,
            "identity": identity, "inverse": inverse, "objects": objs}
