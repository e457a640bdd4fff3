"""Continual object/context learning with dual-memory fading, in a simulated home."""

from .clusters import (
    ActivationReport,
    CategoryNetwork,
    Cluster,
    LearnOutcome,
    NetworkConfig,
    TAU_CONTEXTS,
    TAU_OBJECTS,
    activation,
    winner_output,
)
from .context import ConceptualMap, LabelIndex, build_context_map, masked_fetch_query, teach_context
from .decay import DecayConfig, effective_weight, model_time
from .features import (
    EmbeddingRecord,
    SyntheticCategoryModel,
    load_embeddings,
    make_category_model,
    sample_view,
)
from .harness import (
    RunReport,
    ScenarioError,
    ScenarioScript,
    default_scenario,
    emit_report,
    load_scenario,
    run_joint_baseline,
    run_scenario,
)
from .memory import MemoryConfig, MemoryStore, StmEntry
from .world import ErrorProbs, FetchResult, TimeModel, WorldState, execute_fetch

__version__ = "0.1.0"
