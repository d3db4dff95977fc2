"""Time series classification library and resampling benchmark harness."""

from .data import (
    LabeledDataset,
    ResampleSpec,
    acf_transform,
    cosine_transform,
    diff_transform,
    load_ucr,
    ps_transform,
    stratified_resample,
    znormalize,
)
from .dictionary import (
    BagOfPatterns,
    BossEnsemble,
    DtwFeatures,
    SaxVsm,
    boss_distance,
    mcb_breakpoints,
    numerosity_reduce,
    paa,
    sax_breakpoints,
    sax_word,
)
from .distances import (
    DISTANCE_KINDS,
    DistanceSpec,
    band_steps,
    cid,
    cid_factor,
    complexity,
    dd_dtw,
    ddtw,
    dtd_c,
    dtw,
    erp,
    euclidean,
    lcss,
    msm,
    twe,
    wddtw,
    wdtw,
    wdtw_weights,
)
from .ensembles import CollectiveEnsemble, ElasticEnsemble
from .errors import (
    DatasetFormatError,
    LengthMismatchError,
    ParameterError,
    SizeError,
    TscError,
)
from .experiments import (
    ExperimentConfig,
    ExperimentReport,
    fold_accuracies,
    read_results,
    results_to_table,
    run_experiment,
)
from .intervals import (
    LearnedPatternSimilarity,
    TimeSeriesBagOfFeatures,
    TimeSeriesForest,
    interval_stats,
)
from .learners import (
    GaussianNaiveBayes,
    KNearestTabular,
    PolynomialSVM,
    RandomForest,
    RandomRegressionTree,
    RandomTree,
    TabularDataset,
    best_threshold_split,
    build_random_forest,
    build_random_regression_tree,
    build_random_tree,
    naive_bayes,
    svm_poly,
    weighted_vote_ensemble,
)
from .neighbors import (
    OneNearestNeighbor,
    ParameterGrid,
    distance_matrix,
    loocv_select,
    one_nn_predict,
    stratified_subsample,
)
from .registry import CLASSIFIERS, RawValuesForest, classifier_names, create
from .shapelets import (
    FastShapeletTree,
    Shapelet,
    ShapeletTransformClassifier,
    assess_candidate,
    binary_shapelet_selection,
    sdist,
    shapelet_transform,
)
from .stats import (
    PairedTestResult,
    PairwiseSummary,
    ResultsTable,
    friedman_test,
    nemenyi_critical_difference,
    pairwise_summary,
    rank_average,
    sign_test,
    wilcoxon_signrank,
)

__version__ = "0.1.0"
