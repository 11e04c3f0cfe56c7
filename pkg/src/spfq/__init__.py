"""spfq: sparse randomized preconditioning over small finite fields.

The package derives the full constant bundle behind the row-generation
procedure for every field size, mechanically verifies the numeric
certificates that justify those constants, generates the rows, and measures
success probability and sparsity empirically.
"""

from .fields import Field, field_arith, field_from_order, make_field, sample
from .params import (PreconditionerParams, Theorem2Params, compare_with_paper,
                     derive_params, paper_params, table_row, theorem2_headline,
                     theorem2_params)
from .preconditioner import GeneratedRows, PreconditionPlan, generate, plan, precondition
from .sparsemat import SparseMatrix, rank, read_sms, stack, write_sms

__all__ = [
    "Field", "field_arith", "field_from_order", "make_field", "sample",
    "PreconditionerParams", "Theorem2Params", "compare_with_paper",
    "derive_params", "paper_params", "table_row", "theorem2_headline",
    "theorem2_params",
    "GeneratedRows", "PreconditionPlan", "generate", "plan", "precondition",
    "SparseMatrix", "rank", "read_sms", "stack", "write_sms",
]

__version__ = "0.1.0"
