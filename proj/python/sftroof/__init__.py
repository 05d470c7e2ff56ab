from ._sftroof import (
    Roof,
    SftroofError,
    components,
    entropy,
    essentialize,
    language_counts,
    lemma_inequality,
    load_sft,
    parry_measure,
    random_subadditive,
)

__all__ = [
    "Roof",
    "SftroofError",
    "components",
    "entropy",
    "essentialize",
    "language_counts",
    "lemma_inequality",
    "load_sft",
    "parry_measure",
    "random_subadditive",
]
