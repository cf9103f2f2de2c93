"""Attribute-controlled lay summarization toolkit: control attributes,
control-token data preparation, extractive baselines and evaluation."""

__version__ = "0.1.0"

from .attributes import AttributeContext, AttributeVector, attribute_vector, train_unigram
from .controls import BinningScheme, ControlTokenSeq, control_tokens, fit_bins, mode_bins
from .corpus import Article, SummaryType, load_corpus, merge_datasets

__all__ = [
    "Article",
    "AttributeContext",
    "AttributeVector",
    "BinningScheme",
    "ControlTokenSeq",
    "SummaryType",
    "attribute_vector",
    "control_tokens",
    "fit_bins",
    "load_corpus",
    "merge_datasets",
    "mode_bins",
    "train_unigram",
]
