"""Verification suites behind ``halfhex verify``.

Each suite yields one :class:`Check` per order; a suite passes when all its
checks pass.  Orders above a suite's cap are refused rather than silently
clipped.
"""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass
from typing import Callable, Iterator

from . import bijections as bj
from .aztec import co_simulate, compare_kernels
from .enumeration import (count_closed, enumerate_states, nilp_count_determinant,
                          q_enumerate_bruteforce, q_enumerate_closed, state_array)
from .rng import BitStream
from .shuffle import verify_adjointness, verify_uniform_preservation


@dataclass
class Check:
    suite: str
    order: int
    ok: bool
    detail: str
    seconds: float = 0.0


def _bijections(n: int) -> tuple[bool, str]:
    states = enumerate_states(n)
    bad = next((t for t in states if bj.round_trip(t) != t), None)
    if bad is not None:
        return False, f"round trip fails on {bad}"
    if n <= 4:
        tilings = sum(1 for _ in bj.enumerate_tilings(n))
        families = sum(1 for _ in bj.enumerate_path_families(n))
        if not tilings == families == len(states):
            return False, f"{len(states)} states, {tilings} tilings, {families} path families"
        return True, f"{len(states)} states, tilings and path families; round trip is the identity"
    return True, f"{len(states)} states; round trip is the identity"


def _counts(n: int) -> tuple[bool, str]:
    found = len(state_array(n))
    det = nilp_count_determinant([2 * i for i in range(1, n + 1)])
    ok = found == count_closed(n) == det
    if n >= 1:
        ok = ok and found == 2 ** n * len(state_array(n - 1))
    return ok, f"enumerated {found}, closed form {count_closed(n)}, determinant {det}"


def _qenum(n: int) -> tuple[bool, str]:
    brute, closed = q_enumerate_bruteforce(n), q_enumerate_closed(n)
    c = closed.lowest_degree()
    ok = closed == brute.shift(c)
    return ok, f"closed form = q^{c} * brute force" if ok else f"mismatch: {closed} vs {brute}"


def _aztec(n: int) -> tuple[bool, str]:
    if n >= 1:
        ok, detail = compare_kernels(n)
        if not ok:
            return ok, detail
    else:
        detail = "order 0"
    for seed in range(20):
        direct, via = co_simulate(max(n, 1) * 4, BitStream(seed))
        if direct != via:
            return False, f"seed {seed}: trajectories diverge"
    return True, detail + "; 20 bit-aligned trajectories agree"


def _adjoint(n: int) -> tuple[bool, str]:
    if n == 0:
        return True, "nothing to check at order 0"
    v = verify_adjointness(n)
    return v.ok, v.detail


def _uniform(n: int) -> tuple[bool, str]:
    if n == 0:
        return True, "nothing to check at order 0"
    v = verify_uniform_preservation(n)
    return v.ok, v.detail


SUITES: dict[str, tuple[Callable[[int], tuple[bool, str]], int]] = {
    "bijections": (_bijections, 5),
    "adjoint": (_adjoint, 4),
    "uniform": (_uniform, 4),
    "counts": (_counts, 6),
    "qenum": (_qenum, 5),
    "aztec-equivalence": (_aztec, 3),
}


def run_suite(name: str, max_order: int) -> Iterator[Check]:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}")
    fn, cap = SUITES[name]
    if not 0 <= max_order <= cap:
        raise ValueError(f"suite {name} supports orders 0..{cap}")
    for n in range(max_order + 1):
        t0 = time.perf_counter()
        ok, detail = fn(n)
        yield Check(name, n, bool(ok), detail, round(time.perf_counter() - t0, 4))


def as_dicts(checks: list[Check]) -> list[dict]:
    return [asdict(c) for c in checks]
