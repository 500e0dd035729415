"""Safe feature screening for the L1-regularized squared-hinge SVM."""

from ._svmscreen import (
    Dataset,
    LambdaMax,
    ParseError,
    PathStep,
    PrimalModel,
    ScreenReport,
    kkt_residual,
    lambda_max,
    objective,
    oracle_bound,
    parse_sparse_text,
    path,
    read_sparse_file,
    screen,
    solve,
    theta,
)

__all__ = [
    "Dataset",
    "LambdaMax",
    "ParseError",
    "PathStep",
    "PrimalModel",
    "ScreenReport",
    "kkt_residual",
    "lambda_max",
    "objective",
    "oracle_bound",
    "parse_sparse_text",
    "path",
    "read_sparse_file",
    "screen",
    "solve",
    "theta",
]
