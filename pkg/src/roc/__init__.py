"""Strategy-labeled process nets, goal graphs, gap analysis, and a
case base of completed change scenarios.

The usual entry points:

* :mod:`roc.net` -- process models, firing semantics, fulfilment checks,
  refinement trees.
* :mod:`roc.goals` -- goal graphs, tracing, and the goal support check.
* :mod:`roc.alignment` -- as-is/to-be gap analysis and component tables.
* :mod:`roc.casebase` -- scenario storage, similarity retrieval, reuse.
* :mod:`roc.dsl` -- parsers and canonical serializers for every file kind.
* :mod:`roc.cli` -- the `roc` command.
"""

from .alignment import (
    AlignmentReport,
    ComponentMap,
    ComponentRow,
    CoverageSummary,
    FragmentMatch,
    MatchKind,
    PlaceCorrespondence,
    Problem,
    align,
    classify,
    component_table,
    problem_coverage,
)
from .casebase import (
    CaseBase,
    ReuseDraft,
    Scenario,
    SimilarityWeights,
    load,
    relabel_identity,
    retain,
    retrieve,
    reuse,
    save,
    scenario_violations,
    similarity,
    test_reuse,
)
from .errors import (
    CorrespondenceError,
    DuplicateIdError,
    EmptyCaseBaseError,
    ModelKindError,
    NotEnabledError,
    ParseError,
    RocError,
    SourceSpan,
    StorageError,
    UnknownFormatError,
    UnknownFragmentError,
    UnknownNodeError,
    UnknownProblemError,
    ValidationError,
    Violation,
)
from .goals import (
    EdgeKind,
    GoalEdge,
    GoalGraph,
    GoalNode,
    Level,
    NodeKind,
    Owner,
    Ref,
    Stakeholder,
    SupportReport,
    TraceReport,
    leaves,
    support_check,
    trace,
    validate_graph,
)
from .net import (
    DEFAULT_BOUND,
    FulfilmentReport,
    Fragment,
    Marking,
    ModelKind,
    Place,
    ProcessModel,
    RefinementTree,
    Role,
    StrategyLabel,
    check_fulfilment,
    enabled,
    fire,
    reachable,
    triplet,
    validate_net,
    validate_refinement,
)

__version__ = "0.1.0"
