# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled fixpoint kernels over a grounded circuit (same API as _core_py)."""

from libc.stdlib cimport malloc, free
from libc.string cimport memcpy, memset, memcmp

DEF OP_FALSE = 0
DEF OP_TRUE = 1
DEF OP_ATOM = 2
DEF OP_NOT = 3
DEF OP_AND = 4
DEF OP_OR = 5
DEF OP_PARAM = 6


cdef struct Circ:
    int ng
    int na
    const int* op
    const int* arg
    const int* ks
    const int* ke
    const int* kids
    const int* root
    const unsigned char* P


cdef void _eval(Circ* c, const unsigned char* I, const unsigned char* J,
                unsigned char* vij, unsigned char* vji, unsigned char* out) noexcept nogil:
    cdef int g, i, k, o
    cdef unsigned char x, y
    for g in range(c.ng):
        o = c.op[g]
        if o == OP_ATOM:
            vij[g] = I[c.arg[g]]
            vji[g] = J[c.arg[g]]
        elif o == OP_NOT:
            k = c.arg[g]
            vij[g] = 1 - vji[k]
            vji[g] = 1 - vij[k]
        elif o == OP_AND:
            x = 1
            y = 1
            for i in range(c.ks[g], c.ke[g]):
                k = c.kids[i]
                x &= vij[k]
                y &= vji[k]
            vij[g] = x
            vji[g] = y
        elif o == OP_OR:
            x = 0
            y = 0
            for i in range(c.ks[g], c.ke[g]):
                k = c.kids[i]
                x |= vij[k]
                y |= vji[k]
            vij[g] = x
            vji[g] = y
        elif o == OP_TRUE:
            vij[g] = 1
            vji[g] = 1
        elif o == OP_PARAM:
            vij[g] = c.P[c.arg[g]]
            vji[g] = vij[g]
        else:
            vij[g] = 0
            vji[g] = 0
    for i in range(c.na):
        out[i] = vij[c.root[i]]


cdef void _lfp(Circ* c, const unsigned char* J, unsigned char* I,
               unsigned char* nxt, unsigned char* vij, unsigned char* vji) noexcept nogil:
    memset(I, 0, c.na)
    while True:
        _eval(c, I, J, vij, vji, nxt)
        if memcmp(nxt, I, c.na) == 0:
            return
        memcpy(I, nxt, c.na)


cdef class _Work:
    cdef Circ c
    cdef unsigned char* vij
    cdef unsigned char* vji
    cdef unsigned char* t1
    cdef unsigned char* t2
    cdef unsigned char* t3
    cdef object keep
    cdef object pkeep
    cdef const int[:] m_op, m_arg, m_ks, m_ke, m_kids, m_root

    def __cinit__(self, circuit, params=b""):
        self.m_op = circuit.op
        self.m_arg = circuit.arg
        self.m_ks = circuit.ks
        self.m_ke = circuit.ke
        self.m_root = circuit.root
        kids = circuit.kids
        if len(kids) == 0:
            from array import array
            kids = array("i", [0])
        self.keep = kids
        self.m_kids = kids
        self.c.ng = len(circuit.op)
        self.c.na = len(circuit.root)
        self.c.op = &self.m_op[0]
        self.c.arg = &self.m_arg[0]
        self.c.ks = &self.m_ks[0]
        self.c.ke = &self.m_ke[0]
        self.c.kids = &self.m_kids[0]
        self.c.root = &self.m_root[0] if self.c.na > 0 else NULL
        # one spare byte keeps the pointer valid when there are no inputs
        self.pkeep = bytes(params) + b"\x00"
        self.c.P = <const unsigned char*> self.pkeep
        cdef int ng = self.c.ng if self.c.ng > 0 else 1
        cdef int na = self.c.na if self.c.na > 0 else 1
        self.vij = <unsigned char*> malloc(ng)
        self.vji = <unsigned char*> malloc(ng)
        self.t1 = <unsigned char*> malloc(na)
        self.t2 = <unsigned char*> malloc(na)
        self.t3 = <unsigned char*> malloc(na)

    def __dealloc__(self):
        free(self.vij)
        free(self.vji)
        free(self.t1)
        free(self.t2)
        free(self.t3)


def eval_bodies(circuit, I, J, params=b""):
    cdef _Work w = _Work(circuit, params)
    cdef const unsigned char[:] vi = bytes(I)
    cdef const unsigned char[:] vj = bytes(J)
    out = bytearray(w.c.na)
    if w.c.na == 0:
        return out
    cdef unsigned char[:] vo = out
    _eval(&w.c, &vi[0], &vj[0], w.vij, w.vji, &vo[0])
    return out


def lfp(circuit, J, params=b""):
    cdef _Work w = _Work(circuit, params)
    out = bytearray(w.c.na)
    if w.c.na == 0:
        return out
    cdef const unsigned char[:] vj = bytes(J)
    cdef unsigned char[:] vo = out
    _lfp(&w.c, &vj[0], &vo[0], w.t1, w.vij, w.vji)
    return out


def stable_search(circuit, lower, upper, params=b""):
    cdef _Work w = _Work(circuit, params)
    cdef int na = w.c.na
    if na == 0:
        return [b""]
    free_idx = [i for i in range(na) if upper[i] and not lower[i]]
    cdef int nf = len(free_idx)
    cdef int[64] fi
    if nf > 62:
        raise OverflowError("too many unknown atoms to enumerate")
    cdef int b
    for b in range(nf):
        fi[b] = free_idx[b]
    base = bytearray(lower)
    cdef unsigned char[:] vb = base
    J = bytearray(na)
    cdef unsigned char[:] vJ = J
    cdef unsigned long long mask, total = (<unsigned long long> 1) << nf
    out = []
    mask = 0
    while mask < total:
        memcpy(&vJ[0], &vb[0], na)
        for b in range(nf):
            if (mask >> b) & 1:
                vJ[fi[b]] = 1
        _lfp(&w.c, &vJ[0], w.t2, w.t1, w.vij, w.vji)
        if memcmp(w.t2, &vJ[0], na) == 0:
            out.append(bytes(J))
        mask += 1
    return out


cdef void _st2(Circ* c, unsigned char* x, _Work w) noexcept nogil:
    # x <- ST(ST(x))
    _lfp(c, x, w.t2, w.t1, w.vij, w.vji)
    _lfp(c, w.t2, w.t3, w.t1, w.vij, w.vji)
    memcpy(x, w.t3, c.na)


def oscillation(circuit, params=b""):
    cdef _Work w = _Work(circuit, params)
    cdef int na = w.c.na
    if na == 0:
        return b"", b""
    lo = bytearray(na)
    up = bytearray(b"\x01" * na)
    cdef unsigned char[:] vl = lo
    cdef unsigned char[:] vu = up
    prev = bytearray(na)
    cdef unsigned char[:] vp = prev
    while True:
        memcpy(&vp[0], &vl[0], na)
        _st2(&w.c, &vl[0], w)
        if memcmp(&vp[0], &vl[0], na) == 0:
            break
    while True:
        memcpy(&vp[0], &vu[0], na)
        _st2(&w.c, &vu[0], w)
        if memcmp(&vp[0], &vu[0], na) == 0:
            break
    return bytes(lo), bytes(up)


def wf_bounds(circuit, params=b""):
    cdef _Work w = _Work(circuit, params)
    cdef int na = w.c.na
    if na == 0:
        return b"", b""
    lo = bytearray(na)
    up = bytearray(b"\x01" * na)
    trial = bytearray(na)
    inU = bytearray(na)
    cdef unsigned char[:] vl = lo
    cdef unsigned char[:] vu = up
    cdef unsigned char[:] vt = trial
    cdef unsigned char[:] vU = inU
    cdef int a, count, evicted
    cdef bint changed
    while True:
        changed = False
        _eval(&w.c, &vl[0], &vu[0], w.vij, w.vji, w.t1)
        for a in range(na):
            if vu[a] and not vl[a] and w.t1[a]:
                vl[a] = 1
                changed = True
        count = 0
        for a in range(na):
            vU[a] = 1 if (vu[a] and not vl[a]) else 0
            count += vU[a]
        while count > 0:
            for a in range(na):
                vt[a] = 0 if vU[a] else vu[a]
            _eval(&w.c, &vt[0], &vl[0], w.vij, w.vji, w.t1)
            evicted = 0
            for a in range(na):
                if vU[a] and w.t1[a]:
                    vU[a] = 0
                    evicted += 1
            count -= evicted
            if evicted == 0:
                break
        if count > 0:
            for a in range(na):
                if vU[a]:
                    vu[a] = 0
            changed = True
        if not changed:
            return bytes(lo), bytes(up)
