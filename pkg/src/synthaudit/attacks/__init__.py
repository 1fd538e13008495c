from .difference import (AttributeGuess, BaseError, difference_attribute,
                         difference_membership, membership_base)
from .evaluate import evaluate_attack
from .locator import Locator, outliers_locator
from .padding import (ExtractionError, PaddingRecord, bootstrap_padding,
                      extract_distance)
from .reconsyn import (ANY_RECORD, OUTLIERS_ONLY, AttackConfig, AttackResult,
                       reconsyn, sample_attack, sample_attack_one_call,
                       search_attack)

__all__ = [
    "AttackConfig", "AttackResult", "AttributeGuess", "BaseError",
    "ExtractionError", "Locator", "PaddingRecord", "ANY_RECORD",
    "OUTLIERS_ONLY", "bootstrap_padding", "difference_attribute",
    "difference_membership", "evaluate_attack", "extract_distance",
    "membership_base", "outliers_locator", "reconsyn", "sample_attack",
    "sample_attack_one_call", "search_attack",
]
