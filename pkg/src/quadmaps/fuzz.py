"""Random affine conjugation stability runs."""
from __future__ import annotations

import random
import re
import time
from dataclasses import dataclass
from typing import List, Optional, Sequence

from .classes import (AffineClass, DISCRETE_ITEMS, family1_form, family4_form, family8_form,
                      representative)
from .field import DEFAULT_POLICY, FieldPolicy
from .maps import ConjugationBox, QuadMap, random_conjugate, verify_witness
from .parse import parse_scalar


@dataclass
class Target:
    name: str
    form: QuadMap


def parse_target(text: str) -> Target:
    """``34``, ``F1(A;B)``, ``F2(A;B)``, ``F4(A)`` or ``F8(A)``."""
    t = text.strip()
    if t.isdigit():
        k = int(t)
        if not 1 <= k <= 64:
            raise ValueError(f"item {k} out of range")
        return Target(t, representative(k))
    m = re.fullmatch(r"F([1248])\((.*)\)", t.replace(" ", ""))
    if not m:
        raise ValueError(f"bad target {text!r}")
    n = int(m.group(1))
    params = [parse_scalar(s) for s in m.group(2).split(";")]
    if n in (1, 2):
        if len(params) != 2:
            raise ValueError("F1/F2 take two parameters A;B")
        return Target(t, family1_form(*params))
    if len(params) != 1:
        raise ValueError(f"F{n} takes one parameter")
    return Target(t, family4_form(params[0]) if n == 4 else family8_form(params[0]))


DEFAULT_FAMILY_TARGETS = ("F1(1;1)", "F1(2;1)", "F1(1;-2)", "F2(1/16;-1/16)", "F4(1/4)",
                          "F8(0)", "F8(1)", "F8(1+i)")


def default_targets() -> List[Target]:
    return [parse_target(str(k)) for k in DISCRETE_ITEMS] + \
        [parse_target(t) for t in DEFAULT_FAMILY_TARGETS]


def trial_seed(seed: int, name: str, i: int) -> str:
    return f"{seed}:{name}:{i}"


def run_trial(target: Target, expected: AffineClass, seed: str,
              policy: FieldPolicy = DEFAULT_POLICY, box: ConjugationBox = ConjugationBox(),
              linear_only: bool = False) -> Optional[str]:
    """None on success, otherwise the reason for failure."""
    from .reduce import reduce_map

    rng = random.Random(seed)
    H = random_conjugate(target.form, rng, box, linear_only)[0]
    r = reduce_map(H, policy)
    if r.cls is None:
        return "no class"
    if not r.cls.same_class(expected):
        return f"got {r.cls}, expected {expected}"
    if not r.certificate_only and not verify_witness(H, r.canonical, r.steps):
        return "witness does not verify"
    return None


def fuzz(seed: int, count: int, targets: Optional[Sequence[Target]] = None,
         policy: FieldPolicy = DEFAULT_POLICY) -> dict:
    from .reduce import reduce_map

    t0 = time.perf_counter()
    targets = list(targets) if targets else default_targets()
    per, failing = {}, []
    for tg in targets:
        expected = reduce_map(tg.form).cls
        stable = 0
        for i in range(count):
            s = trial_seed(seed, tg.name, i)
            why = run_trial(tg, expected, s, policy)
            if why is None:
                stable += 1
            else:
                failing.append({"target": tg.name, "seed": s, "reason": why})
        per[tg.name] = {"expected": expected.label(), "trials": count, "stable": stable}
    return {"schema": "report.v1", "seed": seed, "trials": count * len(targets),
            "failures": len(failing), "per_target": per, "failing": failing,
            "elapsed_s": round(time.perf_counter() - t0, 3)}
