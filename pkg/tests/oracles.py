"""Slow reference implementations used to cross-check the engines."""
from __future__ import annotations

import itertools

from foid.semantics_core import ThreeValuedStructure, all_tuples, eval_kleene, eval_pair
from foid.syntax import merged_body


def bodies(defn):
    ar = {r.head.pred: len(r.head.args) for r in defn.rules}
    out = {}
    for p, k in ar.items():
        ys = tuple(f"q{i}_" for i in range(k))
        out[p] = (ys, merged_body(defn, p, ys))
    return out


def atoms(defn, n):
    return [(p, t) for p, (ys, _) in sorted(bodies(defn).items()) for t in all_tuples(n, len(ys))]


def expand(context, defn, true_atoms):
    rels = {p: {t for q, t in true_atoms if q == p} for p in bodies(defn)}
    ar = {p: len(ys) for p, (ys, _) in bodies(defn).items()}
    return context.with_relations(rels, ar)


def immediate(defn, context, I_atoms, J_atoms):
    """Atoms whose body holds with positive reads in I and negative reads in J."""
    I, J = expand(context, defn, I_atoms), expand(context, defn, J_atoms)
    out = set()
    for p, (ys, body) in bodies(defn).items():
        for t in all_tuples(context.size, len(ys)):
            if eval_pair(I, J, body, dict(zip(ys, t))):
                out.add((p, t))
    return frozenset(out)


def st(defn, context, J):
    I = frozenset()
    while True:
        nxt = immediate(defn, context, I, J)
        if nxt == I:
            return I
        I = nxt


def alternating_wf(defn, context):
    """(certainly true, possibly true) atom sets by alternating fixpoints."""
    lo, up = frozenset(), frozenset(atoms(defn, context.size))
    while True:
        nlo = st(defn, context, up)
        nup = st(defn, context, nlo)
        if (nlo, nup) == (lo, up):
            return lo, up
        lo, up = nlo, nup


def three(defn, context, lo, up):
    return ThreeValuedStructure(expand(context, defn, lo), expand(context, defn, up))


def stable_brute(defn, context):
    """Every atom set J with st(J) = J, by exhaustive enumeration."""
    all_atoms = atoms(defn, context.size)
    out = []
    for bits in itertools.product((0, 1), repeat=len(all_atoms)):
        J = frozenset(a for a, b in zip(all_atoms, bits) if b)
        if st(defn, context, J) == J:
            out.append(J)
    return out


def unfounded(defn, A, U) -> bool:
    from foid.semantics_core import TruthValue
    B = A.set_atoms({a: TruthValue.F for a in U})
    bs = bodies(defn)
    for p, t in U:
        ys, body = bs[p]
        if eval_kleene(B, body, dict(zip(ys, t))) is not TruthValue.F:
            return False
    return True


def greatest_unfounded(defn, A, candidates):
    best = frozenset()
    cand = sorted(candidates)
    for bits in itertools.product((0, 1), repeat=len(cand)):
        U = frozenset(a for a, b in zip(cand, bits) if b)
        if len(U) > len(best) and unfounded(defn, A, U):
            best = U
    return best
