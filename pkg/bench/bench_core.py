"""Compare the compiled fixpoint kernels with the pure-Python ones.

    python bench/bench_core.py [--repeat 5]

Runs each workload through both backends on the same grounded circuits and
reports the best wall-clock time. The pure-Python backend is the one
FOID_PURE_PYTHON=1 selects.
"""
import argparse
import time

from foid import _core_py
from foid.ground import ground
from foid.parser import parse

try:
    from foid import _core as compiled
except ImportError:
    compiled = None

THEORY = """
predicate E/2, T/2, W/1, P/1, Q/1.
def Reach { forall x, y. T(x, y) <- E(x, y). forall x, y. T(x, y) <- exists z. E(x, z) & T(z, y). }
def Win { forall x. W(x) <- exists y. E(x, y) & ~W(y). }
def Pick { forall x. P(x) <- ~Q(x). forall x. Q(x) <- ~P(x). }
"""


def context(doc, name, n, edges):
    from foid.semantics_core import TwoValuedStructure
    defn = doc.definitions[name]
    rels, ar = {}, {}
    for s in defn.pars():
        if s.kind == "predicate":
            rels[s.name], ar[s.name] = frozenset(edges), s.arity
    return defn, TwoValuedStructure(n, relations=rels, arity=ar)


def workloads():
    doc = parse(THEORY)
    chain = {(i, i + 1) for i in range(39)}
    game = {(i, i + 1) for i in range(299)} | {(i, i + 2) for i in range(298)}
    yield "wf_bounds reach n=40", ground(*context(doc, "Reach", 40, chain)), lambda k, c: k.wf_bounds(c)
    yield "wf_bounds win n=300", ground(*context(doc, "Win", 300, game)), lambda k, c: k.wf_bounds(c)
    yield "oscillation win n=300", ground(*context(doc, "Win", 300, game)), lambda k, c: k.oscillation(c)

    def search(k, c):
        return k.stable_search(c, bytes(c.natoms), b"\x01" * c.natoms)
    yield "stable_search pick n=8", ground(*context(doc, "Pick", 8, ())), search


def canon(result):
    # bit vectors compare as bytes; model lists compare as sets
    if isinstance(result, list):
        return sorted(map(bytes, result))
    return tuple(map(bytes, result))


def best(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    print(f"{'workload':28} {'atoms':>6} {'python s':>10} {'compiled s':>11} {'speedup':>8}")
    for name, c, run in workloads():
        py = best(lambda: run(_core_py, c), args.repeat)
        if compiled is None:
            print(f"{name:28} {c.natoms:6d} {py:10.4f} {'n/a':>11} {'n/a':>8}")
            continue
        assert canon(run(compiled, c)) == canon(run(_core_py, c)), name
        cc = best(lambda: run(compiled, c), args.repeat)
        print(f"{name:28} {c.natoms:6d} {py:10.4f} {cc:11.4f} {py / cc:7.1f}x")


if __name__ == "__main__":
    main()
