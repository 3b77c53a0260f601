"""Topic modeling: LDA fitting, coherence-based model selection, term
relevance ranking, topic maps and metadata-grouped distributions."""

from .coherence import CoherenceReport, select_k, umass_coherence
from .grouping import GroupedTopicTable, group_topic_distribution, write_grouped_csv
from .io import build_vis_bundle, load_model, model_from_dict, model_to_dict, save_model
from .lda import GibbsLda
from .projection import TopicMap, classical_mds, jensen_shannon, jsd_matrix, topic_map
from .relevance import RelevanceRanking, phi_order, rank_terms, relevance_scores

__all__ = [
    "CoherenceReport",
    "GibbsLda",
    "GroupedTopicTable",
    "RelevanceRanking",
    "TopicMap",
    "build_vis_bundle",
    "classical_mds",
    "group_topic_distribution",
    "jensen_shannon",
    "jsd_matrix",
    "load_model",
    "model_from_dict",
    "model_to_dict",
    "phi_order",
    "rank_terms",
    "relevance_scores",
    "save_model",
    "select_k",
    "topic_map",
    "umass_coherence",
    "write_grouped_csv",
]
