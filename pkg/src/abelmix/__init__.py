"""Exact spectra and mixing curves of lazy symmetric walks on finite Abelian groups."""

from .exceptions import (
    AbelmixError,
    BoundNotApplicableError,
    CapExceededError,
    ConfigError,
    InvalidGroupError,
    NotIrreducibleError,
    ThresholdUndefinedError,
    TypeConditionError,
)
from .group_core import AbelianGroup, GroupElement, WalkSpec, evolve, make_group, make_walk, step_distribution
from .mixing import cutoff_ratio, l1_distance, lemma2_sandwich, mixing_curve, peres_products, threshold
from .spectral import Spectrum, eigenvalue, spectral_gap, spectrum

__version__ = "0.1.0"
