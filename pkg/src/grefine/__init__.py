"""grefine: evolutionary edge-edit refinement of graphs against a corpus.

Takes coarse seed graphs plus a reference corpus of real graphs and
evolves fixed-length edge-edit programs that minimize a weighted MMD
fitness over degree, clustering, and Laplacian-spectral histograms, plus
an edge-density penalty.
"""

from .corpus import (
    CorpusFormatError,
    Dataset,
    load_dataset_json,
    load_graphs_json,
    load_tudataset,
    save_graphs_json,
)
from .evolution import (
    EvolutionConfig,
    GenerationRecord,
    Individual,
    Provenance,
    RunResult,
    derive_seed,
    initialize_population,
    mutate,
    run,
    tournament_select,
    two_point_crossover,
)
from .fitness import (
    CorpusStats,
    FitnessValue,
    FitnessWeights,
    build_corpus_stats,
    evaluate,
)
from .genome import (
    DEFAULT_OP_PROBS,
    Gene,
    Genome,
    Opcode,
    apply_gene,
    express,
    format_gene,
    format_genome,
    identity_genome,
    random_gene,
    random_genome,
)
from .graph import Graph, graph_from_dict, graph_to_dict
from .metrics import (
    FeatureHistogram,
    SpectralSignature,
    clustering_coefficients,
    clustering_histogram,
    degree_histogram,
    laplacian_spectrum,
    mmd_single_vs_set,
    spectral_histogram,
)
from .pipeline import (
    GraphScore,
    SeedOutcome,
    build_class_stats,
    evaluate_graphs,
    refine_graphs,
)

__version__ = "0.1.0"
