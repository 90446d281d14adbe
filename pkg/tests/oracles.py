"""Independent reference implementations used as test oracles.

Nothing here imports the package's algorithms: graphs are plain
(tasks, negators, comms) collections and formulas are lists of int lists.
"""

from itertools import chain, combinations, product


def subsets(items):
    items = list(items)
    return chain.from_iterable(combinations(items, k) for k in range(len(items) + 1))


def is_kernel(tasks, negators, v):
    v = set(v)
    independent = not any(s in v and t in v for s, t in negators)
    dominating = all(any(s in v for s, t2 in negators if t2 == t) for t in tasks if t not in v)
    return independent and dominating


def all_kernels(tasks, negators):
    return [frozenset(v) for v in subsets(tasks) if is_kernel(tasks, negators, v)]


def simple_paths(comms, v, a, b):
    """Every simple comm path a -> b through tasks of ``v`` (DFS enumeration)."""
    v = set(v)
    if a not in v or b not in v:
        return []
    if a == b:
        return [(a,)]
    out = []

    def walk(path):
        last = path[-1]
        for s, t in comms:
            if s == last and t in v and t not in path:
                if t == b:
                    out.append(tuple(path) + (t,))
                else:
                    walk(path + [t])

    walk([a])
    return out


def negstab(tasks, negators):
    return bool(all_kernels(tasks, negators))


def negsat(tasks, negators, a):
    return any(a in k for k in all_kernels(tasks, negators))


def negpath(tasks, negators, comms, a, b):
    return any(simple_paths(comms, k, a, b) for k in all_kernels(tasks, negators))


def truth_table_models(num_vars, clauses):
    models = []
    for bits in product([False, True], repeat=num_vars):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in clauses):
            models.append(bits)
    return models


def satisfiable(num_vars, clauses):
    return bool(truth_table_models(num_vars, clauses))


def eval_netlist(inputs, gates, levels):
    """Gate-level evaluation of an acyclic NOR/INV netlist (gates in any order)."""
    value = dict(zip(inputs, levels))
    pending = list(gates)
    while pending:
        rest = []
        for kind, ins, out in pending:
            if all(i in value for i in ins):
                value[out] = not any(value[i] for i in ins)
            else:
                rest.append((kind, ins, out))
        if len(rest) == len(pending):
            raise ValueError("netlist is cyclic")
        pending = rest
    return value
