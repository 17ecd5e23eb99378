"""Self-verification against independent oracles."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .compress import bwt
from .qoltz import EnergyModel, all_configs, gradient, nll_cost, partition
from .qsim import Statevector, apply_qft, qft_matrix
from .spectral import dct2d

__all__ = ["CheckResult", "CHECKS", "run_checks", "render_table"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    max_error: float
    tolerance: float
    detail: str

    def to_dict(self) -> dict:
        err = float(self.max_error)
        return {"check": self.name, "passed": bool(self.passed),
                "max_error": err if np.isfinite(err) else None,
                "tolerance": float(self.tolerance), "detail": self.detail}


def _random_state(rng, n) -> Statevector:
    v = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
    return Statevector(v / np.linalg.norm(v))


def check_qft(rng) -> CheckResult:
    err = 0.0
    for n in range(1, 7):
        for _ in range(5):
            s = _random_state(rng, n)
            ref = qft_matrix(n) @ s.amplitudes
            err = max(err, float(np.max(np.abs(apply_qft(s).amplitudes - ref))))
    return CheckResult("qft", err < 1e-10, err, 1e-10, "QFT circuit vs dense DFT, n=1..6")


def naive_dct(f) -> np.ndarray:
    m, n = f.shape
    out = np.zeros((m, n))
    for a in range(m):
        for b in range(n):
            ca = 1 / np.sqrt(2) if a == 0 else 1.0
            cb = 1 / np.sqrt(2) if b == 0 else 1.0
            acc = 0.0
            for x in range(m):
                for y in range(n):
                    acc += (f[x, y] * np.cos(a * np.pi * (2 * x + 1) / (2 * m))
                            * np.cos(b * np.pi * (2 * y + 1) / (2 * n)))
            out[a, b] = ca / 2 * cb / 2 * acc
    return out


def check_dct(rng) -> CheckResult:
    err = 0.0
    for shape in [(1, 1), (2, 3), (4, 4), (8, 8)]:
        img = rng.integers(0, 256, size=shape).astype(float)
        err = max(err, float(np.max(np.abs(dct2d(img).values - naive_dct(img)))))
    return CheckResult("dct", err < 1e-9, err, 1e-9, "2-D DCT vs quadruple loop")


def rotation_bwt(text: str) -> tuple[str, int]:
    s = text + "$"
    rots = sorted(s[i:] + s[:i] for i in range(len(s)))
    return "".join(r[-1] for r in rots), rots.index(s)


def check_bwt(rng) -> CheckResult:
    bad = 0
    for _ in range(200):
        seq = "".join(rng.choice(list("ACGT"), size=int(rng.integers(1, 33))))
        res = bwt(seq)
        if (res.transformed, res.primary_index) != rotation_bwt(seq):
            bad += 1
    return CheckResult("bwt", bad == 0, float(bad), 0.0, "suffix sort vs rotation sort, 200 sequences")


def _random_model(rng, n) -> EnergyModel:
    w = [rng.normal(scale=0.5, size=(2, n - 1)) for _ in range(3)]
    return EnergyModel(*w, rng.normal(scale=0.5, size=n))


def check_partition(rng) -> CheckResult:
    err = 0.0
    for n in range(2, 9):
        model = _random_model(rng, n)
        z = 0.0
        for cfg in all_configs(n):
            e = sum(model.chain_coupling()[i] * cfg[i] * cfg[i + 1] for i in range(n - 1))
            z += np.exp(-(e - cfg @ model.biases))
        err = max(err, abs(partition(model) - z) / z)
    return CheckResult("partition", err < 1e-12, err, 1e-12, "log-sum-exp Z vs explicit loop, n=2..8")


def check_gradient(rng, h: float = 1e-5) -> CheckResult:
    err = 0.0
    for _ in range(5):
        n = int(rng.integers(2, 7))
        model = _random_model(rng, n)
        data = rng.integers(0, 2, size=(12, n))
        grad = gradient(data, model)
        for p_idx, (param, g) in enumerate(zip(model.params(), grad.params())):
            for idx in np.ndindex(param.shape):
                plus, minus = model.copy(), model.copy()
                plus.params()[p_idx][idx] += h
                minus.params()[p_idx][idx] -= h
                fd = (nll_cost(data, plus) - nll_cost(data, minus)) / (2 * h)
                err = max(err, abs(fd - g[idx]) / max(1.0, abs(fd)))
    return CheckResult("gradient", err < 1e-6, err, 1e-6, "analytic vs central differences")


CHECKS = {
    "qft": check_qft,
    "dct": check_dct,
    "bwt": check_bwt,
    "partition": check_partition,
    "gradient": check_gradient,
}


def run_checks(only=None, seed: int = 0) -> list[CheckResult]:
    """Run the named checks (all by default); each gets its own seeded RNG."""
    names = list(CHECKS) if not only else list(only)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise ValueError(f"unknown check(s): {', '.join(unknown)}; choose from {', '.join(CHECKS)}")
    results = []
    for name in names:
        rng = np.random.default_rng([seed, list(CHECKS).index(name)])
        try:
            results.append(CHECKS[name](rng))
        except Exception as exc:  # a crashing oracle counts as a failure
            results.append(CheckResult(name, False, float("nan"), 0.0, f"error: {exc}"))
    return results


def render_table(results) -> str:
    lines = [f"{'check':<10} {'status':<6} {'max_error':>12}  detail"]
    for r in results:
        lines.append(f"{r.name:<10} {'PASS' if r.passed else 'FAIL':<6} {r.max_error:>12.3e}  {r.detail}")
    return "\n".join(lines)
