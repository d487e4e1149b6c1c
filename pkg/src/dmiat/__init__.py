"""Discretization-based feature augmentation: D-MIAT cuts, baseline discretizers, evaluation harness."""
from .core import (Criterion, CutFeature, DmiatConfig, apply_cuts, entropy, find_boundary,
                   generate_cuts, lift)
from .data import (Attribute, ClassDistribution, Dataset, FoldPair, bundled_dataset, class_counts,
                   format_table, load_dataset, parse_table, sorted_order, stratified_kfold)
from .discretizers import DiscretizationScheme, apply_scheme, equal_frequency, equal_width, iem_mdl

__version__ = "0.1.0"
