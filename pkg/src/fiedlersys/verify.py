"""Numeric checks that a linearization keeps the system's characteristics.

Each check records the measured value, the tolerance and the number of
sample points; a check with no sample points fails.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import NamedTuple

import numpy as np

from . import index as ix
from .errors import SingularityError
from .fiedler import BlockPencil, fiedler_pencil, poly_pencil
from .spectral import rank_at, solve_pencil
from .system import StateSpaceSystem

__all__ = [
    "Check", "VerificationReport", "DecouplingZeros", "transfer_of_pencil",
    "verify_transfer_equal", "verify_det_ratio", "check_controllability",
    "check_observability", "decoupling_zeros", "system_decoupling_zeros",
    "verify_decoupling_invariance", "verify_all", "RANK_TOL_SCALE", "PAIR_TOL",
]

# one knob for every rank decision (multiplies sigma_max * dim * eps)
RANK_TOL_SCALE = 1e6
PAIR_TOL = 1e-7


@dataclass
class Check:
    name: str
    passed: bool
    value: float
    tol: float
    samples: int
    detail: dict = field(default_factory=dict)

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag}  {self.name:<24} value={self.value:.3e}  tol={self.tol:.1e}  samples={self.samples}"


@dataclass
class VerificationReport:
    checks: list
    seed: int

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    def sorted(self) -> "VerificationReport":
        return VerificationReport(sorted(self.checks, key=lambda c: c.name), self.seed)

    def to_text(self) -> str:
        rep = self.sorted()
        lines = [f"verification report (seed={rep.seed})"]
        lines += [c.line() for c in rep.checks]
        lines.append("ALL PASS" if rep.passed else "FAILED")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        rep = self.sorted()
        return {"seed": rep.seed, "passed": rep.passed,
                "checks": [_jsonable(asdict(c)) for c in rep.checks]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, float) and not np.isfinite(obj):
        return str(obj)
    return obj


def _sample_points(rng, count):
    return rng.standard_normal(count) + 1j * rng.standard_normal(count)


def transfer_of_pencil(pencil: BlockPencil, z) -> np.ndarray:
    """Transfer function of the linearized system read off the pencil blocks.

    The pencil is ``-[[-L, X], [Y, D]]``, whose transfer function is
    ``Y L^{-1} X + D = K21 K11^{-1} K12 - K22``.
    """
    k11, k12, k21, k22 = pencil.split(z)
    lu_ok = np.linalg.cond(k11) < 1e12
    if not lu_ok:
        raise SingularityError("pencil block L(z) is singular", point=complex(z))
    return k21 @ np.linalg.solve(k11, k12) - k22


def verify_transfer_equal(sys: StateSpaceSystem, pencil: BlockPencil, samples: int = 20,
                          seed: int = 0, tol: float = 1e-9) -> Check:
    """Max relative gap ``||GG(z) - G(z)|| / ||G(z)||`` over random ``z``."""
    rng = np.random.default_rng(seed)
    worst, used, tries = 0.0, 0, 0
    while used < samples and tries < 10 * max(samples, 1):
        tries += 1
        z = _sample_points(rng, 1)[0]
        try:
            g = sys.eval_G(z)
            gg = transfer_of_pencil(pencil, z)
        except SingularityError:
            continue
        worst = max(worst, float(np.linalg.norm(gg - g, 2) / max(np.linalg.norm(g, 2), 1e-300)))
        used += 1
    detail = {}
    order = pencil.meta.get("order")
    if order is not None:
        detail["branch"] = "c1>0" if ix.leading_runs(ix.from_factor_order(order))[0] > 0 else "c1=0"
    return Check("transfer_equal", used > 0 and worst <= tol, worst, tol, used, detail)


def verify_det_ratio(sys: StateSpaceSystem, pencil: BlockPencil, samples: int = 10,
                     seed: int = 0, tol: float = 1e-8) -> Check:
    """Relative spread of ``det(z T - N) / det S(z)`` over random ``z``."""
    rng = np.random.default_rng(seed)
    ratios = []
    tries = 0
    while len(ratios) < samples and tries < 10 * max(samples, 1):
        tries += 1
        z = _sample_points(rng, 1)[0]
        ds = np.linalg.det(sys.eval_S(z))
        if abs(ds) < 1e-12 * max(1.0, np.linalg.norm(sys.eval_S(z), 2)) ** (sys.n + sys.r):
            continue
        ratios.append(np.linalg.det(pencil(z)) / ds)
    if not ratios:
        return Check("det_ratio", False, np.inf, tol, 0)
    ratios = np.array(ratios)
    spread = float(np.max(np.abs(ratios - ratios[0])) / abs(ratios[0]))
    return Check("det_ratio", spread <= tol, spread, tol, len(ratios),
                 {"ratio": complex(ratios[0])})


def _as_pencil(sys, which) -> BlockPencil:
    if isinstance(which, BlockPencil):
        return which
    order = which.order if isinstance(which, ix.Bijection) else tuple(which)
    return fiedler_pencil(sys, order)


def _poly_eigs(pencil: BlockPencil, seed: int) -> np.ndarray:
    return solve_pencil(pencil.top_left(), seed=seed).eigenvalues


def _rank_failures(cands, mats, full: int, tol_scale: float) -> list:
    return [complex(z) for z, mat in zip(cands, mats) if rank_at(mat, tol_scale) < full]


def check_controllability(sys, which, tol_scale: float = RANK_TOL_SCALE, seed: int = 0) -> Check:
    """``rank [L(z) | X] = nm`` at every eigenvalue of ``L``; failures are input decoupling zeros."""
    pencil = _as_pencil(sys, which)
    cands = _poly_eigs(pencil, seed)
    mats = [np.hstack(pencil.split(z)[:2]) for z in cands]
    bad = _rank_failures(cands, mats, pencil.n * pencil.m, tol_scale)
    return Check("controllability", len(cands) > 0 and not bad, float(len(bad)), 0.0, len(cands),
                 {"failing": bad})


def check_observability(sys, which, tol_scale: float = RANK_TOL_SCALE, seed: int = 0) -> Check:
    """``rank [L(z); Y] = nm`` at every eigenvalue of ``L``; failures are output decoupling zeros."""
    pencil = _as_pencil(sys, which)
    cands = _poly_eigs(pencil, seed)
    mats = []
    for z in cands:
        k11, _, k21, _ = pencil.split(z)
        mats.append(np.vstack([k11, k21]))
    bad = _rank_failures(cands, mats, pencil.n * pencil.m, tol_scale)
    return Check("observability", len(cands) > 0 and not bad, float(len(bad)), 0.0, len(cands),
                 {"failing": bad})


class DecouplingZeros(NamedTuple):
    input: list
    output: list
    io: list


def _dedupe(zs, tol=PAIR_TOL):
    out = []
    for z in zs:
        if all(abs(z - w) > tol for w in out):
            out.append(z)
    return sorted(out, key=lambda v: (round(v.real, 6), round(v.imag, 6)))


def _intersect(a, b, tol=PAIR_TOL):
    return [z for z in a if any(abs(z - w) <= tol for w in b)]


def decoupling_zeros(sys, which, tol_scale: float = RANK_TOL_SCALE, seed: int = 0) -> DecouplingZeros:
    """Input, output and input-output decoupling zeros seen through a linearization."""
    ctrl = check_controllability(sys, which, tol_scale, seed)
    obs = check_observability(sys, which, tol_scale, seed)
    inp = _dedupe(ctrl.detail["failing"])
    out = _dedupe(obs.detail["failing"])
    return DecouplingZeros(inp, out, _intersect(inp, out))


def system_decoupling_zeros(sys: StateSpaceSystem, tol_scale: float = RANK_TOL_SCALE,
                            seed: int = 0) -> DecouplingZeros:
    """Decoupling zeros of the original system: rank tests on ``[P | B]`` and ``[P; C]``."""
    cands = solve_pencil(poly_pencil(sys.P, ix.first_companion(sys.m)), seed=seed).eigenvalues
    inp = _dedupe([complex(z) for z in cands if rank_at(np.hstack([sys.P(z), sys.B]), tol_scale) < sys.n])
    out = _dedupe([complex(z) for z in cands if rank_at(np.vstack([sys.P(z), sys.C]), tol_scale) < sys.n])
    return DecouplingZeros(inp, out, _intersect(inp, out))


def same_zero_lists(a: DecouplingZeros, b: DecouplingZeros, tol: float = PAIR_TOL) -> bool:
    for la, lb in zip(a, b):
        if len(la) != len(lb):
            return False
        if _intersect(la, lb, tol) != la:
            return False
    return True


def verify_decoupling_invariance(sys, pencil: BlockPencil, tol_scale: float = RANK_TOL_SCALE,
                                 seed: int = 0) -> Check:
    """Decoupling zeros of the pencil equal those of the original system."""
    lin = decoupling_zeros(sys, pencil, tol_scale, seed)
    orig = system_decoupling_zeros(sys, tol_scale, seed)
    ok = same_zero_lists(lin, orig)
    count = float(sum(len(x) for x in orig))
    return Check("decoupling_invariance", ok, count, PAIR_TOL, sys.n * sys.m,
                 {"system": orig._asdict(), "pencil": lin._asdict()})


def verify_all(sys: StateSpaceSystem, pencil: BlockPencil, samples: int = 20, seed: int = 0,
               tol_scale: float = RANK_TOL_SCALE) -> VerificationReport:
    checks = [
        verify_transfer_equal(sys, pencil, samples, seed),
        verify_det_ratio(sys, pencil, max(samples // 2, 1), seed),
        verify_decoupling_invariance(sys, pencil, tol_scale, seed),
    ]
    return VerificationReport(checks, seed).sorted()
