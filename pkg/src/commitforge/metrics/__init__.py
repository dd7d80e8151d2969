from .agreement import AgreementReport, cohen_kappa, pairwise_kappa, sign_test_exact, sign_test_one_sided
from .classification import ClassificationReport, ConfusionMatrix, classification_report
from .text import bleu, meteor, rouge_l

__all__ = [
    "AgreementReport",
    "ClassificationReport",
    "ConfusionMatrix",
    "bleu",
    "classification_report",
    "cohen_kappa",
    "meteor",
    "pairwise_kappa",
    "rouge_l",
    "sign_test_exact",
    "sign_test_one_sided",
]
