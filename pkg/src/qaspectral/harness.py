# src/qaspectral/harness.py

"""Random generators and experiment orchestration.

Operators are generated by singular-value surgery: T = V diag(s) W*
with Haar-like unitaries and s log-uniform in [1/r, r], so membership
holds by construction.  Commuting-but-not-normal pairs share one
mildly non-unitary similarity; doubly commuting tuples put independent
draws on separate tensor legs.

Determinism contract: every sample derives its own counter-based RNG
stream from (seed, sample_id), so reports are a pure function of the
configuration and do not depend on evaluation order or worker count.
"""

from __future__ import annotations

import concurrent.futures
import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .annulus import AnnulusParams, membership
from .bounds import (
    RatioReport,
    annulus_bound,
    biannulus_bound,
    polyannulus_dc_bound,
    spectral_ratio,
)
from .errors import InputError, PreconditionError
from .laurent import LaurentPoly
from .linalg import DEFAULT_TOL, Tolerance, kron
from .operators import COMMUTING, DOUBLY_COMMUTING, OperatorTuple, make_tuple

RNG_ALGORITHM = "philox4x64"
MODES = ("single", "commuting_pair", "doubly_commuting")
REJECTION_BUDGET = 1000


def substream(seed: int, sample_id: int) -> np.random.Generator:
    """Counter-based per-sample stream; (seed, sample_id) is the key."""
    return np.random.Generator(
        np.random.Philox(key=np.array([seed % 2 ** 64, sample_id % 2 ** 64], dtype=np.uint64))
    )


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """QR of a complex Gaussian with the usual phase fix."""
    A = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    Q, R = np.linalg.qr(A)
    d = np.diag(R)
    return Q * (d / np.abs(d))


def gen_qa_operator(dim: int, params: AnnulusParams, rng: np.random.Generator) -> np.ndarray:
    """Member of the quantum annulus with log-uniform singular values."""
    if dim < 1:
        raise InputError("dim must be a positive integer")
    V = haar_unitary(dim, rng)
    W = haar_unitary(dim, rng)
    log_r = math.log(params.r)
    s = np.exp(rng.uniform(-log_r, log_r, size=dim))
    return (V * s) @ W.conj().T


def gen_non_member(dim: int, params: AnnulusParams, rng: np.random.Generator) -> np.ndarray:
    """Invertible operator with at least one singular value clearly
    outside [1/r, r] (relative margin at least 1e-3)."""
    V = haar_unitary(dim, rng)
    W = haar_unitary(dim, rng)
    log_r = math.log(params.r)
    s = np.exp(rng.uniform(-log_r, log_r, size=dim))
    k = int(rng.integers(dim))
    factor = float(np.exp(rng.uniform(math.log(1.001), math.log(4.0))))
    s[k] = params.r * factor if rng.integers(2) else 1.0 / (params.r * factor)
    return (V * s) @ W.conj().T


def gen_tuple(
    mode: str,
    n: int,
    dim: int,
    params: AnnulusParams,
    rng: np.random.Generator,
    tol: Tolerance = DEFAULT_TOL,
    similarity_cond: float = 1.3,
) -> OperatorTuple:
    """Commuting pair or doubly commuting n-tuple of members.

    commuting_pair: T_j = V D_j V^-1 with one shared random V of
    condition number `similarity_cond` and diagonal moduli pulled in
    by the same factor, which guarantees membership; draws are still
    rejection-checked against the membership contract.

    doubly_commuting: T_j = I (x) ... (x) S_j (x) ... (x) I with
    independent singular-surgery legs.
    """
    if mode == "commuting_pair":
        if n != 2:
            raise InputError("commuting_pair means n = 2")
        log_r = math.log(params.r)
        log_k = math.log(similarity_cond)
        for _ in range(REJECTION_BUDGET):
            V = haar_unitary(dim, rng) * np.exp(
                np.linspace(-log_k / 2, log_k / 2, dim)
            )
            V = V @ haar_unitary(dim, rng)
            mats = []
            for _ in range(2):
                moduli = np.exp(rng.uniform(-(log_r - log_k), log_r - log_k, size=dim))
                phases = np.exp(2j * math.pi * rng.uniform(size=dim))
                D = moduli * phases
                mats.append((V * D) @ np.linalg.inv(V))
            if all(membership(M, params, tol).in_qa for M in mats):
                return make_tuple(mats, COMMUTING, tol)
        raise PreconditionError(
            f"pair generation exhausted its rejection budget of {REJECTION_BUDGET}"
        )
    if mode == "doubly_commuting":
        if n < 1:
            raise InputError("doubly_commuting needs n >= 1")
        legs = [gen_qa_operator(dim, params, rng) for _ in range(n)]
        mats = []
        for j in range(n):
            M = np.eye(1, dtype=complex)
            for i in range(n):
                M = kron(M, legs[i] if i == j else np.eye(dim, dtype=complex))
            mats.append(M)
        return make_tuple(mats, DOUBLY_COMMUTING, tol)
    raise InputError(f"unknown tuple mode {mode!r}")


def gen_laurent(
    n_vars: int,
    max_degree: int,
    rng: np.random.Generator,
    n_terms: int | None = None,
) -> LaurentPoly:
    """Random Laurent polynomial with total absolute degree at most
    max_degree and standard complex Gaussian coefficients."""
    if max_degree < 0:
        raise InputError("max_degree must be nonnegative")
    if n_terms is None:
        n_terms = int(rng.integers(3, 9))
    coeffs = {}
    guard = 0
    while len(coeffs) < n_terms and guard < 100 * n_terms:
        guard += 1
        exp = tuple(int(e) for e in rng.integers(-max_degree, max_degree + 1, size=n_vars))
        if sum(abs(e) for e in exp) > max_degree:
            continue
        coeffs[exp] = complex(rng.normal(), rng.normal())
    if not coeffs:
        coeffs[(0,) * n_vars] = 1.0 + 0j
    return LaurentPoly(n_vars, coeffs)


@dataclass(frozen=True)
class ExperimentConfig:
    r: float = 2.0
    seed: int = 0
    dims: tuple = (2, 3, 4)
    degrees: tuple = (2, 4, 6)
    n_samples: int = 100
    mode: str = "single"
    n_vars: int = 1
    bound_kind: str = "annulus"
    output_path: str = "report"

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise InputError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.mode == "single" and self.n_vars != 1:
            raise InputError("mode 'single' means n_vars = 1")
        if self.mode == "commuting_pair" and self.n_vars != 2:
            raise InputError("mode 'commuting_pair' means n_vars = 2")
        if self.n_samples < 1:
            raise InputError("n_samples must be positive")
        if not self.dims or not self.degrees:
            raise InputError("dims and degrees must be nonempty")
        if self.bound_kind not in ("annulus", "biannulus", "polyannulus_dc"):
            raise InputError(f"unknown bound kind {self.bound_kind!r}")

    @classmethod
    def from_json_dict(cls, payload: dict) -> "ExperimentConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(payload) - known
        if unknown:
            raise InputError(f"unknown config keys: {sorted(unknown)}")
        payload = dict(payload)
        for key in ("dims", "degrees"):
            if key in payload:
                payload[key] = tuple(int(x) for x in payload[key])
        return cls(**payload)

    def as_json_dict(self) -> dict:
        d = asdict(self)
        d["dims"] = list(self.dims)
        d["degrees"] = list(self.degrees)
        return d


@dataclass(frozen=True)
class SampleRow:
    sample_id: int
    dim: int
    degree: int
    ratio: float
    bound: float
    margin: float
    passed: bool


@dataclass(frozen=True)
class Report:
    config: ExperimentConfig
    rows: list
    max_ratio: float
    pass_count: int
    generator: str = RNG_ALGORITHM
    version: str = __version__

    @property
    def all_passed(self) -> bool:
        return self.pass_count == len(self.rows)

    def as_json_bytes(self) -> bytes:
        payload = {
            "config": self.config.as_json_dict(),
            "generator": self.generator,
            "version": self.version,
            "rows": [asdict(row) for row in self.rows],
            "summary": {
                "max_ratio": self.max_ratio,
                "pass_count": self.pass_count,
                "n_samples": len(self.rows),
                "all_passed": self.all_passed,
            },
        }
        return (json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n").encode()

    def csv_lines(self):
        yield "sample_id,dim,degree,ratio,bound,margin"
        for row in self.rows:
            yield f"{row.sample_id},{row.dim},{row.degree},{row.ratio!r},{row.bound!r},{row.margin!r}"


def _bound_for(config: ExperimentConfig, params: AnnulusParams, n: int) -> float:
    if config.bound_kind == "annulus":
        return annulus_bound(params.r)
    if config.bound_kind == "biannulus":
        return biannulus_bound(params.r)
    return polyannulus_dc_bound(params.r, n)


def evaluate_sample(config: ExperimentConfig, sample_id: int) -> SampleRow:
    """One fully deterministic sample: tuple + polynomial + ratio."""
    params = AnnulusParams(config.r)
    rng = substream(config.seed, sample_id)
    dim = int(config.dims[int(rng.integers(len(config.dims)))])
    degree = int(config.degrees[int(rng.integers(len(config.degrees)))])
    if config.mode == "single":
        T = make_tuple([gen_qa_operator(dim, params, rng)])
    else:
        T = gen_tuple(
            "commuting_pair" if config.mode == "commuting_pair" else "doubly_commuting",
            config.n_vars,
            dim,
            params,
            rng,
        )
    g = gen_laurent(config.n_vars, degree, rng)
    bound = _bound_for(config, params, config.n_vars)
    rep: RatioReport = spectral_ratio(T, g, params, bound=bound)
    margin = bound * (1.0 + rep.certified_error / rep.g_supnorm) - rep.ratio
    return SampleRow(
        sample_id=sample_id,
        dim=dim,
        degree=degree,
        ratio=rep.ratio,
        bound=bound,
        margin=margin,
        passed=rep.passed,
    )


def run_experiment(config: ExperimentConfig, workers: int = 1) -> Report:
    """Evaluate all samples and assemble the deterministic report.

    Worker count only affects wall time: rows are keyed by sample_id
    and reassembled in order, and each sample owns its RNG stream.
    """
    ids = list(range(config.n_samples))
    if workers > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda i: evaluate_sample(config, i), ids))
    else:
        rows = [evaluate_sample(config, i) for i in ids]
    rows.sort(key=lambda row: row.sample_id)
    return Report(
        config=config,
        rows=rows,
        max_ratio=max(row.ratio for row in rows),
        pass_count=sum(row.passed for row in rows),
    )


def write_report(report: Report, output_path) -> tuple:
    """Write <path>.json and <path>.csv; returns the two paths."""
    base = Path(output_path)
    base.parent.mkdir(parents=True, exist_ok=True)
    json_path = base.with_suffix(".json")
    csv_path = base.with_suffix(".csv")
    json_path.write_bytes(report.as_json_bytes())
    csv_path.write_text("\n".join(report.csv_lines()) + "\n")
    return json_path, csv_path
