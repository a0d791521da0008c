"""Linearizability checking under four competing definitions."""

from .checker import (
    DEFAULT_MAX_OPS,
    CompletionPlan,
    Linearization,
    SearchTooLarge,
    Variant,
    Verdict,
    check,
    order_constraints,
    validate_witness,
)
from .history import (
    Event,
    History,
    HistoryError,
    Kind,
    OpDef,
    OperationInstance,
    PrecedencePair,
    complete,
    equivalent,
    extend,
    inv,
    is_sequential,
    is_well_formed,
    operations,
    pending_invocations,
    precedence,
    project_object,
    project_process,
    res,
)
from .linpoints import check_linpoints
from .meta import check_locality, check_nonblocking, classify, enumerate_histories, generate_history
from .specs import (
    ConfigurationError,
    SeqSpec,
    SpecError,
    blocking_stack_spec,
    fifo_queue_spec,
    is_legal,
    register_spec,
    spec_for,
    stack_spec,
)
from .trace import TraceError, parse_trace, serialize_trace

__all__ = [name for name in dir() if not name.startswith("_")]
