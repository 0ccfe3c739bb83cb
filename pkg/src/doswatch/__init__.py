"""doswatch: detect denial-of-service events in tweet streams.

The pipeline compares a topic model of the event window against one of the
preceding baseline window, ranks event topics by symmetric KL divergence to
their closest baseline topic, scores each tweet by its mixture over those
topic novelty scores, optionally filters the ranking with a bag-of-words
decision tree, and blends the resulting attack-tweet counts into a severity
score.
"""

from .classifier import (
    DecisionTree,
    featurize,
    filter_ranked,
    load_tree,
    predict,
    save_tree,
    train_cart,
)
from .corpus import (
    DEFAULT_STOPWORDS,
    Corpus,
    CorpusFormatError,
    Label,
    TokenizerConfig,
    Tweet,
    WindowTag,
    load_corpus,
    load_stopwords,
    preprocess,
)
from .divergence import (
    TopicScore,
    align_vocabularies,
    kl_divergence,
    rank_attack_topics,
)
from .evaluation import (
    EvalCurve,
    EvalPoint,
    SweepResult,
    SynthSpec,
    det_points,
    generate_synthetic,
    parameter_sweep,
    precision_recall_curve,
    train_filter_tree,
)
from .lda import (
    LdaHyperparams,
    LdaModel,
    Vocabulary,
    infer_doc_topics,
    load_model,
    num_topics,
    save_model,
    train,
)
from .pipeline import PipelineConfig, PipelineError, run_detect, run_eval, run_sweep
from .scoring import RankedTweet, label_top_x, rank_tweets, tweet_score
from .severity import SeverityInput, severity_level

__version__ = "0.1.0"
