"""Registered-domain amassing from CT logs and Common Crawl, and zone coverage analysis."""

from ._cctld_amass import (
    AnalysisError,
    CoverageReport,
    DomainError,
    SnapshotIdError,
    Store,
    StoreError,
    SuffixPolicy,
    SuffixRuleSet,
    canonical_name,
    coverage_partition,
    display_percent,
    identity_violations,
    lag_cdf,
    quantile,
    run_cli,
    snapshot_date,
    to_unicode,
)

__all__ = [
    "AnalysisError",
    "CoverageReport",
    "DomainError",
    "SnapshotIdError",
    "Store",
    "StoreError",
    "SuffixPolicy",
    "SuffixRuleSet",
    "canonical_name",
    "coverage_partition",
    "display_percent",
    "identity_violations",
    "lag_cdf",
    "quantile",
    "run_cli",
    "snapshot_date",
    "to_unicode",
]
