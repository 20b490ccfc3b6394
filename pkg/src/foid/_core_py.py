"""Pure-Python fixpoint kernels over a grounded circuit.

Mirrors the compiled module function for function; ``foid.core`` picks one.
Atom valuations are bytearrays with one 0/1 byte per defined atom; params
holds the values of a circuit's parameter inputs, if it has any.
"""
from __future__ import annotations

OP_FALSE, OP_TRUE, OP_ATOM, OP_NOT, OP_AND, OP_OR, OP_PARAM = range(7)


def eval_bodies(c, I, J, params=b"") -> bytearray:
    """Per atom: does its body hold under the pair (I, J)?"""
    op, arg, ks, ke, kids = c.op, c.arg, c.ks, c.ke, c.kids
    ng = len(op)
    vij = bytearray(ng)
    vji = bytearray(ng)
    for g in range(ng):
        o = op[g]
        if o == OP_ATOM:
            a = arg[g]
            vij[g] = I[a]
            vji[g] = J[a]
        elif o == OP_NOT:
            k = arg[g]
            vij[g] = 1 - vji[k]
            vji[g] = 1 - vij[k]
        elif o == OP_AND:
            x = y = 1
            for i in range(ks[g], ke[g]):
                k = kids[i]
                x &= vij[k]
                y &= vji[k]
            vij[g] = x
            vji[g] = y
        elif o == OP_OR:
            x = y = 0
            for i in range(ks[g], ke[g]):
                k = kids[i]
                x |= vij[k]
                y |= vji[k]
            vij[g] = x
            vji[g] = y
        elif o == OP_TRUE:
            vij[g] = vji[g] = 1
        elif o == OP_PARAM:
            vij[g] = vji[g] = params[arg[g]]
    return bytearray(vij[r] for r in c.root)


def lfp(c, J, params=b"") -> bytearray:
    """Least fixpoint of C(., J), iterated from the empty interpretation."""
    I = bytearray(len(c.root))
    while True:
        nxt = eval_bodies(c, I, J, params)
        if nxt == I:
            return I
        I = nxt


def stable_search(c, lower, upper, params=b"") -> list:
    """All J with lower <= J <= upper and lfp(C(., J)) == J, in binary counting order."""
    free = [i for i in range(len(c.root)) if upper[i] and not lower[i]]
    out = []
    for mask in range(1 << len(free)):
        J = bytearray(lower)
        for b, i in enumerate(free):
            if mask >> b & 1:
                J[i] = 1
        if lfp(c, J, params) == J:
            out.append(bytes(J))
    return out


def oscillation(c, params=b""):
    """(lfp, gfp) of ST o ST."""
    n = len(c.root)
    lo = bytearray(n)
    while True:
        nxt = lfp(c, lfp(c, lo, params), params)
        if nxt == lo:
            break
        lo = nxt
    up = bytearray(b"\x01" * n)
    while True:
        nxt = lfp(c, lfp(c, up, params), params)
        if nxt == up:
            break
        up = nxt
    return bytes(lo), bytes(up)


def wf_bounds(c, params=b""):
    """Well-founded model by alternating true-batches and greatest unfounded sets."""
    n = len(c.root)
    lo = bytearray(n)
    up = bytearray(b"\x01" * n)
    while True:
        changed = False
        body = eval_bodies(c, lo, up, params)
        for a in range(n):
            if up[a] and not lo[a] and body[a]:
                lo[a] = 1
                changed = True
        U = [a for a in range(n) if up[a] and not lo[a]]
        while U:
            trial = bytearray(up)
            for a in U:
                trial[a] = 0
            poss = eval_bodies(c, trial, lo, params)
            keep = [a for a in U if not poss[a]]
            if len(keep) == len(U):
                break
            U = keep
        if U:
            for a in U:
                up[a] = 0
            changed = True
        if not changed:
            return bytes(lo), bytes(up)
