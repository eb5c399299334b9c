"""Language identification for short messages.

Character n-gram logistic regression combined with Modified Adsorption label
propagation over a tweet-author-follower graph.
"""

from ._langprop import (
    ParseError,
    ValidationError,
    build_graph,
    char_ngrams,
    evaluate,
    mad_propagate,
    predict,
    propagate,
    run_all,
    synth,
    train_content,
)

__all__ = [
    "ParseError",
    "ValidationError",
    "build_graph",
    "char_ngrams",
    "evaluate",
    "mad_propagate",
    "predict",
    "propagate",
    "run_all",
    "synth",
    "train_content",
]
