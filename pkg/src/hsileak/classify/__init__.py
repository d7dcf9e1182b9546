from .forest import ForestModel, Tree, grow_tree, rf_predict, rf_train
from .knn import KnnModel, knn_predict, knn_train
from .svm import SvmModel, svm_objective, svm_predict, svm_train
from .validation import CvGrid, CvResult, cross_validate, fit, stratified_folds

__all__ = [
    "CvGrid", "CvResult", "ForestModel", "KnnModel", "SvmModel", "Tree",
    "cross_validate", "fit", "grow_tree", "knn_predict", "knn_train", "rf_predict", "rf_train",
    "stratified_folds", "svm_objective", "svm_predict", "svm_train",
]
