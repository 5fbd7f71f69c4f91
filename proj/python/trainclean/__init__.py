"""Python access to the trainclean core: hardness, filtering, HPO and statistics."""

import json as _json

from . import _trainclean
from ._trainclean import Protocol, TraincleanError, roster, set_jobs

__all__ = [
    "Protocol",
    "TraincleanError",
    "adaptive_filter",
    "dataset_summary",
    "ensemble_filter",
    "generate_two_cluster",
    "hardness",
    "random_search",
    "reduction_metrics",
    "roster",
    "run_experiment",
    "set_jobs",
    "wilcoxon",
]


def dataset_summary(path):
    return _json.loads(_trainclean.dataset_summary(str(path)))


def hardness(path, ensemble=None, protocol=None):
    """Map of instance id to estimated probability of correct classification."""
    raw = _json.loads(_trainclean.hardness(str(path), ensemble, protocol or Protocol()))
    return {int(k): v for k, v in raw.items()}


def ensemble_filter(path, phi=0.5, ensemble=None, protocol=None):
    return _json.loads(_trainclean.ensemble_filter(str(path), phi, ensemble, protocol or Protocol()))


def adaptive_filter(path, target="knn", phi=0.5, candidates=None, protocol=None):
    return _json.loads(_trainclean.adaptive_filter(str(path), target, phi, candidates, protocol or Protocol()))


def random_search(algorithm, path, trials=10, protocol=None):
    return _json.loads(_trainclean.random_search(algorithm, str(path), trials, protocol or Protocol()))


def reduction_metrics(baseline, treatment):
    return _json.loads(_trainclean.reduction_metrics(list(baseline), list(treatment)))


def wilcoxon(baseline, treatment, alpha=0.05):
    return _json.loads(_trainclean.wilcoxon(list(baseline), list(treatment), alpha))


def generate_two_cluster(out, n_per_class=50, overlap=0.3, n_detrimental=5, seed=0):
    """Writes an ARFF file and returns the planted (mislabelled) instance ids."""
    return _trainclean.generate_two_cluster(str(out), n_per_class, overlap, n_detrimental, seed)


def run_experiment(config):
    return _json.loads(_trainclean.run_experiment(str(config)))
