"""Batch runs, the identity suite and report files."""

from semiriem_lab.evaluation.identities import (
    FULL,
    REDUCED,
    SUITE,
    IdentityResult,
    SuiteCounts,
    verify_identities,
)
from semiriem_lab.evaluation.runner import (
    EXIT_CONFIG,
    EXIT_FAILED,
    EXIT_NUMERIC,
    EXIT_OK,
    build_patch,
    config_hash,
    derive_seed,
    execute_check,
    exit_code_for,
    register_user_charts,
    resolve_output_dir,
    run,
    validate_config,
)
from semiriem_lab.evaluation.series import write_report, write_series

__all__ = [
    "EXIT_CONFIG",
    "EXIT_FAILED",
    "EXIT_NUMERIC",
    "EXIT_OK",
    "FULL",
    "REDUCED",
    "SUITE",
    "IdentityResult",
    "SuiteCounts",
    "build_patch",
    "config_hash",
    "derive_seed",
    "execute_check",
    "exit_code_for",
    "register_user_charts",
    "resolve_output_dir",
    "run",
    "validate_config",
    "verify_identities",
    "write_report",
    "write_series",
]
