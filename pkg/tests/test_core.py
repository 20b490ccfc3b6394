import os
import random
import subprocess
import sys

import pytest
from hypothesis import given, settings

import gen
from foid import _core_py, core
from foid.ground import ground, ground_frame

compiled = pytest.importorskip("foid._core", reason="compiled kernels not built")


def circuits(seed):
    rng = random.Random(seed)
    defn = gen.definition(rng, max_rules=5)
    ctx = gen.context(rng, defn, rng.randint(1, 3))
    return rng, defn, ctx, ground(defn, ctx)


def bits(rng, n):
    return bytearray(rng.random() < 0.5 for _ in range(n))


@settings(max_examples=200, deadline=None)
@given(gen.seeds)
def test_backends_agree_on_grounded_circuits(seed):
    rng, _, _, c = circuits(seed)
    I, J = bits(rng, c.natoms), bits(rng, c.natoms)
    for impl in (compiled, _core_py):
        assert impl.eval_bodies(c, I, J) == _core_py.eval_bodies(c, I, J)
    assert bytes(compiled.lfp(c, J)) == bytes(_core_py.lfp(c, J))
    lo_c, up_c = compiled.wf_bounds(c)
    lo_p, up_p = _core_py.wf_bounds(c)
    assert (bytes(lo_c), bytes(up_c)) == (bytes(lo_p), bytes(up_p))
    assert tuple(map(bytes, compiled.oscillation(c))) == tuple(map(bytes, _core_py.oscillation(c)))
    if c.natoms <= 10:
        lo, up = bytes(c.natoms), b"\x01" * c.natoms
        assert (sorted(map(bytes, compiled.stable_search(c, lo, up)))
                == sorted(map(bytes, _core_py.stable_search(c, lo, up))))


@settings(max_examples=100, deadline=None)
@given(gen.seeds)
def test_backends_agree_with_parameter_inputs(seed):
    rng = random.Random(seed)
    defn = gen.definition(rng, max_rules=5)
    ctx = gen.context(rng, defn, rng.randint(1, 2))
    frame = ctx.restrict([s for s in defn.pars() if s.kind != "predicate"])
    c = ground_frame(defn, frame)
    params = c.inputs(ctx.relations)
    I, J = bits(rng, c.natoms), bits(rng, c.natoms)
    assert bytes(compiled.eval_bodies(c, I, J, params)) == bytes(_core_py.eval_bodies(c, I, J, params))
    assert bytes(compiled.lfp(c, J, params)) == bytes(_core_py.lfp(c, J, params))
    assert tuple(map(bytes, compiled.wf_bounds(c, params))) == tuple(map(bytes, _core_py.wf_bounds(c, params)))
    # the parameterised circuit agrees with grounding the full context
    full = ground(defn, ctx)
    assert full.atoms == c.atoms
    assert bytes(_core_py.lfp(full, J)) == bytes(_core_py.lfp(c, J, params))


def test_pure_python_switch():
    code = "from foid import core; print(core.BACKEND)"
    env = dict(os.environ, FOID_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
    env.pop("FOID_PURE_PYTHON")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "compiled"
    assert core.BACKEND in ("compiled", "python")
