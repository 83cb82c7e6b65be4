"""Edge-perspective degree distributions and Poisson row-weight profiles."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from importlib import resources

import numpy as np
from scipy.stats import poisson as _poisson

__all__ = [
    "DegreeDistribution",
    "CatalogEntry",
    "PoissonWeightSpec",
    "PoissonCounts",
    "parse_polynomial",
    "serialize_polynomial",
    "parse_distribution",
    "serialize_distribution",
    "design_rate",
    "poisson_counts",
    "parse_catalog",
    "load_catalog",
]

_TERM_RE = re.compile(r"^\s*([0-9.eE+-]+)\s*x(?:\s*\^\s*(\d+))?\s*$")

NORMALIZATION_TOL = 1e-3


@dataclass(frozen=True)
class DegreeDistribution:
    """Variable (lambda) and check (rho) edge fractions keyed by node degree.

    Terms are (node_degree, fraction) pairs with node_degree = exponent + 1;
    the serialized text keeps the exponent convention.  Fractions on each side
    sum to one (renormalized at parse time when within tolerance).
    """

    lambda_terms: tuple[tuple[int, float], ...]
    rho_terms: tuple[tuple[int, float], ...]

    def __post_init__(self):
        for name, terms in (("lambda", self.lambda_terms), ("rho", self.rho_terms)):
            if not terms:
                raise ValueError(f"{name} side has no terms")
            degrees = [d for d, _ in terms]
            if sorted(degrees) != degrees or len(set(degrees)) != len(degrees):
                raise ValueError(f"{name} degrees must be strictly increasing")
            if any(d < 2 for d in degrees):
                raise ValueError(f"{name} node degrees must be >= 2")
            if any(not 0.0 < f <= 1.0 for _, f in terms):
                raise ValueError(f"{name} fractions must lie in (0, 1]")
            total = sum(f for _, f in terms)
            if abs(total - 1.0) > 1e-6:
                raise ValueError(f"{name} fractions sum to {total}, expected 1")

    @property
    def max_lambda_degree(self) -> int:
        return self.lambda_terms[-1][0]

    @property
    def max_rho_degree(self) -> int:
        return self.rho_terms[-1][0]


@dataclass(frozen=True)
class CatalogEntry:
    code_id: str
    dist: DegreeDistribution
    one_minus_r2: float


def _normalized(terms: list[tuple[int, float]], side: str) -> tuple[tuple[int, float], ...]:
    total = sum(f for _, f in terms)
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise ValueError(f"{side} fractions sum to {total:.6f}, off by more than {NORMALIZATION_TOL}")
    return tuple((d, f / total) for d, f in sorted(terms))


def parse_polynomial(text: str) -> tuple[tuple[int, float], ...]:
    """Parse "c1 x^e1 + c2 x^e2 + ..." into (node_degree, fraction) pairs.

    The text uses exponents; stored degrees are exponent + 1 (a term c x^e
    belongs to nodes of degree e+1).  Bare "x" means exponent 1.
    """
    terms: list[tuple[int, float]] = []
    for chunk in text.split("+"):
        if not chunk.strip():
            continue
        m = _TERM_RE.match(chunk)
        if m is None:
            raise ValueError(f"cannot parse polynomial term {chunk.strip()!r}")
        coeff = float(m.group(1))
        exponent = int(m.group(2)) if m.group(2) is not None else 1
        terms.append((exponent + 1, coeff))
    if not terms:
        raise ValueError("empty polynomial")
    return tuple(sorted(terms))


def serialize_polynomial(terms: tuple[tuple[int, float], ...]) -> str:
    return " + ".join(f"{f:.10g} x^{d - 1}" for d, f in terms)


def parse_distribution(text: str) -> DegreeDistribution:
    """Parse the one-line "<lambda poly> | <rho poly>" form."""
    parts = text.split("|")
    if len(parts) != 2:
        raise ValueError("expected '<lambda poly> | <rho poly>'")
    lam = _normalized(list(parse_polynomial(parts[0])), "lambda")
    rho = _normalized(list(parse_polynomial(parts[1])), "rho")
    return DegreeDistribution(lam, rho)


def serialize_distribution(dist: DegreeDistribution) -> str:
    return f"{serialize_polynomial(dist.lambda_terms)} | {serialize_polynomial(dist.rho_terms)}"


def design_rate(dist: DegreeDistribution) -> float:
    """1 - (sum rho_i/i) / (sum lambda_i/i); the code rate the profile aims at."""
    lam = sum(f / d for d, f in dist.lambda_terms)
    rho = sum(f / d for d, f in dist.rho_terms)
    rate = 1.0 - rho / lam
    if not 0.0 < rate < 1.0:
        raise ValueError(f"design rate {rate} outside (0, 1)")
    return rate


def parse_catalog(text: str) -> dict[str, CatalogEntry]:
    """Parse catalog blocks: code <id> / lambda: ... / rho: ... / one_minus_r2: ..."""
    entries: dict[str, CatalogEntry] = {}
    current: dict[str, str] = {}

    def flush():
        if not current:
            return
        for key in ("code", "lambda", "rho", "one_minus_r2"):
            if key not in current:
                raise ValueError(f"catalog entry {current.get('code', '?')!r} missing {key!r}")
        dist = DegreeDistribution(
            _normalized(list(parse_polynomial(current["lambda"])), "lambda"),
            _normalized(list(parse_polynomial(current["rho"])), "rho"),
        )
        code_id = current["code"]
        if code_id in entries:
            raise ValueError(f"duplicate catalog id {code_id!r}")
        entries[code_id] = CatalogEntry(code_id, dist, float(current["one_minus_r2"]))
        current.clear()

    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("code "):
            flush()
            current["code"] = line.split(None, 1)[1].strip()
        elif ":" in line:
            key, value = line.split(":", 1)
            current[key.strip()] = value.strip()
        else:
            raise ValueError(f"unrecognized catalog line: {raw!r}")
    flush()
    return entries


def load_catalog() -> dict[str, CatalogEntry]:
    text = resources.files("wzkit.data").joinpath("catalog.txt").read_text("utf-8")
    return parse_catalog(text)


@dataclass(frozen=True)
class PoissonWeightSpec:
    """Row-weight profile: Poisson(lam) truncated to weights 1..i_max, count rows."""

    lam: float
    i_max: int
    count: int

    def __post_init__(self):
        if self.lam <= 0:
            raise ValueError(f"lam must be positive, got {self.lam}")
        if self.i_max < 1:
            raise ValueError(f"i_max must be >= 1, got {self.i_max}")
        if self.count < 1:
            raise ValueError(f"count must be >= 1, got {self.count}")


@dataclass(frozen=True)
class PoissonCounts:
    counts: tuple[int, ...]        # counts[i-1] = rows of target weight i
    weights: tuple[int, ...]       # non-decreasing, exactly `count` entries


def _nearest_int(x: float) -> int:
    # ties round half up; only the nearest-integer part is contractually pinned
    return int(math.floor(x + 0.5))


def poisson_counts(spec: PoissonWeightSpec) -> PoissonCounts:
    """Occupancy per weight bucket plus the sorted per-row weight sequence.

    Bucket i in 1..i_max receives nearest-int(pmf(i) * count) rows; pmf values
    come from the log-domain Poisson pmf so large lam stays finite.  A short
    sequence is padded by replicating the fullest bucket (smallest such weight
    on ties); a long one is trimmed from the largest weight downward.
    """
    support = np.arange(1, spec.i_max + 1)
    pmf = _poisson.pmf(support, spec.lam)
    counts = [_nearest_int(p * spec.count) for p in pmf]
    total = sum(counts)
    if total == 0:
        raise ValueError(
            f"all weight buckets empty: lam={spec.lam}, i_max={spec.i_max} are inconsistent")
    if total < spec.count:
        fullest = max(range(len(counts)), key=lambda i: (counts[i], -i))
        counts[fullest] += spec.count - total
    elif total > spec.count:
        excess = total - spec.count
        for i in range(len(counts) - 1, -1, -1):
            take = min(excess, counts[i])
            counts[i] -= take
            excess -= take
            if excess == 0:
                break
    weights = []
    for i, c in enumerate(counts):
        weights.extend([i + 1] * c)
    return PoissonCounts(tuple(counts), tuple(weights))
