"""Lower bounds on the optimal revisit time and the asymptotic-shape classifier."""

from __future__ import annotations

import enum
from dataclasses import asdict, dataclass

from .errors import KTooSmall, UncertifiedSeeds
from .instance import close
from .seeds import SeedWalks


class CaseTag(str, enum.Enum):
    Q0_OR_NOT_LESS = "Q0_or_NotLess"
    Q1_MIN_CASE = "Q1_MinCase"
    Q2PLUS_RSTAR = "Q2plus_Rstar"


class Modality(str, enum.Enum):
    UNIMODAL = "unimodal"
    BIMODAL = "bimodal"
    TRIMODAL = "trimodal"

    @property
    def count(self) -> int:
        return {"unimodal": 1, "bimodal": 2, "trimodal": 3}[self.value]


def q_decompose(k: int, n: int) -> tuple[int, int]:
    """Write ``k = p*n + q + 1`` with ``p >= 1`` and ``0 <= q < n``."""
    if k < n + 1:
        raise KTooSmall(f"k={k} is below n+1={n + 1}")
    p, q = divmod(k - 1, n)
    return p, q


def _strictly_less(a: float, b: float) -> bool:
    return a < b and not close(a, b)


@dataclass(frozen=True)
class BoundReport:
    k: int
    n: int
    p: int
    q: int
    lb: float
    case_tag: CaseTag
    rd_n1: float
    rd_n2: float
    r_n1: float
    certified: bool
    tight_range: bool  # k >= n^2 + n + 1

    def to_dict(self) -> dict:
        d = asdict(self)
        d["case_tag"] = self.case_tag.value
        return d


def lower_bound(seeds: SeedWalks, k: int) -> BoundReport:
    """Lower bound on the least revisit time of any k-visit PMP-D walk.

    The report is flagged uncertified (advisory) when a seed entering the
    selected expression is only a best-found value.
    """
    n = seeds.n
    p, q = q_decompose(k, n)
    rd1, rd2, r1 = seeds.rd_n1, seeds.rd_n2, seeds.r_n1
    used = ["wd_n1", "w_n1"]  # the case split itself compares these two
    if _strictly_less(rd1, r1) and q == 1:
        lb, tag = min(rd2, r1), CaseTag.Q1_MIN_CASE
        used.append("wd_n2")
    elif _strictly_less(rd1, r1) and q >= 2:
        lb, tag = r1, CaseTag.Q2PLUS_RSTAR
    else:
        lb, tag = rd1, CaseTag.Q0_OR_NOT_LESS
    return BoundReport(
        k=k, n=n, p=p, q=q, lb=lb, case_tag=tag,
        rd_n1=rd1, rd_n2=rd2, r_n1=r1,
        certified=seeds.is_certified(*used),
        tight_range=k >= n * n + n + 1,
    )


def classify_asymptotic(seeds: SeedWalks, strict: bool = True) -> Modality:
    """How many distinct values the optimal revisit time settles into for large k."""
    if strict and not seeds.certified:
        raise UncertifiedSeeds("modality needs optimal seed walks")
    if not _strictly_less(seeds.rd_n1, seeds.r_n1):
        return Modality.UNIMODAL
    if _strictly_less(seeds.rd_n2, seeds.r_n1):
        return Modality.TRIMODAL
    return Modality.BIMODAL


def predicted_value(seeds: SeedWalks, q: int) -> float:
    """Asymptotic optimal revisit time for residue ``q`` when the bound is tight."""
    n = seeds.n
    return lower_bound(seeds, n * n + n + 1 + q).lb
