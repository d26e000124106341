from .config import ALGORITHMS, DISTANCES, MULTICLASS, ModelConfig
from .knn import KNNClassifier, distances, nearest_neighbors
from .mlp import MLPClassifier, loss_and_gradients
from .model import FORMAT_VERSION, Prediction, TrainedModel, effective_strategy, predict, train
from .multiclass import OneVsOne, OneVsRest
from .svm import LinearSVM, hinge_objective
from .tree import DecisionTree, RandomForestClassifier, best_split, build_decision_tree

__all__ = [
    "ALGORITHMS", "DISTANCES", "FORMAT_VERSION", "MULTICLASS", "DecisionTree", "KNNClassifier",
    "LinearSVM", "MLPClassifier", "ModelConfig", "OneVsOne", "OneVsRest", "Prediction",
    "RandomForestClassifier", "TrainedModel", "best_split", "build_decision_tree", "distances",
    "effective_strategy", "hinge_objective", "loss_and_gradients", "nearest_neighbors", "predict",
    "train",
]
